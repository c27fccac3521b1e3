// Copyright (c) the aDNS contributors.
// Licensed under the Apache 2.0 License.

#pragma once

#include "adns/util.hpp"

#include <map>
#include <memory>
#include <variant>
#include <vector>

namespace adns::policy
{
  // Claim/config values. Hex values (digests, keys) are kept in a canonical
  // textual form - lowercase, leading zeros stripped - so that a policy
  // literal like 0xFEEDFACE compares equal to a zero-extended 32-octet
  // digest holding the same quantity.
  struct Value
  {
    enum class Kind
    {
      Int,
      Bool,
      Str,
      Hex,
      List
    };

    Kind kind = Kind::Bool;
    int64_t i = 0;
    bool b = false;
    std::string s; // Str text or canonical Hex form
    std::vector<Value> items;

    static Value integer(int64_t v)
    {
      Value x;
      x.kind = Kind::Int;
      x.i = v;
      return x;
    }
    static Value boolean(bool v)
    {
      Value x;
      x.kind = Kind::Bool;
      x.b = v;
      return x;
    }
    static Value str(std::string v)
    {
      Value x;
      x.kind = Kind::Str;
      x.s = std::move(v);
      return x;
    }
    static Value hex(std::string_view digits_no_prefix)
    {
      std::string d = to_lower(std::string(digits_no_prefix));
      size_t nz = d.find_first_not_of('0');
      d = nz == std::string::npos ? "0" : d.substr(nz);
      Value x;
      x.kind = Kind::Hex;
      x.s = "0x" + d;
      return x;
    }
    static Value hex_bytes(std::span<const uint8_t> bytes)
    {
      return hex(hex_encode(bytes));
    }
    static Value list(std::vector<Value> vs)
    {
      Value x;
      x.kind = Kind::List;
      x.items = std::move(vs);
      return x;
    }

    bool equals(const Value& o) const
    {
      if (kind != o.kind)
        fail("TypeMismatch", "cannot compare " + repr() + " with " + o.repr());
      switch (kind)
      {
        case Kind::Int:
          return i == o.i;
        case Kind::Bool:
          return b == o.b;
        case Kind::Str:
        case Kind::Hex:
          return s == o.s;
        case Kind::List:
        {
          if (items.size() != o.items.size())
            return false;
          for (size_t k = 0; k < items.size(); k++)
            if (!items[k].equals(o.items[k]))
              return false;
          return true;
        }
      }
      return false;
    }

    std::string repr() const
    {
      switch (kind)
      {
        case Kind::Int:
          return std::to_string(i);
        case Kind::Bool:
          return b ? "true" : "false";
        case Kind::Str:
          return "\"" + s + "\"";
        case Kind::Hex:
          return s;
        case Kind::List:
        {
          std::string out = "[";
          for (size_t k = 0; k < items.size(); k++)
            out += (k ? ", " : "") + items[k].repr();
          return out + "]";
        }
      }
      return "?";
    }
  };

  using Claims = std::map<std::string, Value>;

  // ---------------------------------------------------------------------
  // Expressions
  // ---------------------------------------------------------------------

  struct Expr;
  using ExprPtr = std::shared_ptr<const Expr>;

  struct Expr
  {
    enum class Op
    {
      Literal,
      Access, // claims["k"] / config["k"]
      Not,
      Eq,
      Ne,
      And,
      Or,
      In
    };

    Op op = Op::Literal;
    Value literal;
    bool from_config = false; // Access: config[...] vs claims[...]
    std::string key;
    ExprPtr lhs, rhs;
  };

  class PolicyExpr
  {
  public:
    PolicyExpr() = default;
    PolicyExpr(ExprPtr root, std::string source) :
      root_(std::move(root)), source_(std::move(source))
    {}

    const ExprPtr& root() const
    {
      return root_;
    }
    const std::string& source() const
    {
      return source_;
    }
    bool empty() const
    {
      return root_ == nullptr;
    }

    std::string pretty() const;

  private:
    ExprPtr root_;
    std::string source_;
  };

  namespace detail
  {
    struct Token
    {
      enum class Kind
      {
        End,
        Ident,
        Int,
        Hex,
        Str,
        Punct
      };
      Kind kind = Kind::End;
      std::string text;
      int64_t int_value = 0;
      size_t pos = 0;
    };

    class Lexer
    {
    public:
      explicit Lexer(std::string_view src) : src_(src)
      {
        advance();
      }

      const Token& peek() const
      {
        return tok_;
      }
      Token next()
      {
        Token t = tok_;
        advance();
        return t;
      }

    private:
      [[noreturn]] void error(const std::string& msg, size_t at) const
      {
        fail(
          "SyntaxError", msg + " at offset " + std::to_string(at));
      }

      void advance()
      {
        while (pos_ < src_.size() && std::isspace(
                 static_cast<unsigned char>(src_[pos_])))
          pos_++;
        tok_ = Token{};
        tok_.pos = pos_;
        if (pos_ >= src_.size())
          return;
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
        {
          size_t start = pos_;
          while (pos_ < src_.size() &&
                 (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                  src_[pos_] == '_' || src_[pos_] == '-'))
            pos_++;
          tok_.kind = Token::Kind::Ident;
          tok_.text = std::string(src_.substr(start, pos_ - start));
          return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)))
        {
          size_t start = pos_;
          if (
            c == '0' && pos_ + 1 < src_.size() &&
            (src_[pos_ + 1] == 'x' || src_[pos_ + 1] == 'X'))
          {
            pos_ += 2;
            size_t digits = pos_;
            while (pos_ < src_.size() &&
                   std::isxdigit(static_cast<unsigned char>(src_[pos_])))
              pos_++;
            if (pos_ == digits)
              error("hex literal needs digits", start);
            tok_.kind = Token::Kind::Hex;
            tok_.text = std::string(src_.substr(digits, pos_ - digits));
            return;
          }
          while (pos_ < src_.size() &&
                 std::isdigit(static_cast<unsigned char>(src_[pos_])))
            pos_++;
          tok_.kind = Token::Kind::Int;
          tok_.text = std::string(src_.substr(start, pos_ - start));
          try
          {
            tok_.int_value = std::stoll(tok_.text);
          }
          catch (const std::exception&)
          {
            error("integer literal out of range", start);
          }
          return;
        }
        if (c == '"')
        {
          pos_++;
          std::string out;
          while (pos_ < src_.size() && src_[pos_] != '"')
          {
            if (src_[pos_] == '\\' && pos_ + 1 < src_.size())
              pos_++;
            out.push_back(src_[pos_++]);
          }
          if (pos_ >= src_.size())
            error("unterminated string literal", tok_.pos);
          pos_++;
          tok_.kind = Token::Kind::Str;
          tok_.text = std::move(out);
          return;
        }
        static const char* puncts[] = {"==", "!=", "&&", "||"};
        for (const char* p : puncts)
        {
          if (src_.substr(pos_, 2) == p)
          {
            tok_.kind = Token::Kind::Punct;
            tok_.text = p;
            pos_ += 2;
            return;
          }
        }
        if (std::string_view("()[]!,").find(c) != std::string_view::npos)
        {
          tok_.kind = Token::Kind::Punct;
          tok_.text = std::string(1, c);
          pos_++;
          return;
        }
        error(std::string("unexpected character '") + c + "'", pos_);
      }

      std::string_view src_;
      size_t pos_ = 0;
      Token tok_;
    };

    class Parser
    {
    public:
      explicit Parser(std::string_view src) : lex_(src) {}

      ExprPtr parse()
      {
        auto e = parse_or();
        if (lex_.peek().kind != Token::Kind::End)
          fail(
            "SyntaxError",
            "unexpected token '" + lex_.peek().text + "' at offset " +
              std::to_string(lex_.peek().pos));
        return e;
      }

    private:
      bool punct(const std::string& p)
      {
        if (
          lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == p)
        {
          lex_.next();
          return true;
        }
        return false;
      }

      void expect_punct(const std::string& p)
      {
        if (!punct(p))
          fail(
            "SyntaxError",
            "expected '" + p + "' at offset " +
              std::to_string(lex_.peek().pos));
      }

      ExprPtr make(Expr e)
      {
        return std::make_shared<Expr>(std::move(e));
      }

      ExprPtr parse_or()
      {
        auto lhs = parse_and();
        while (punct("||"))
        {
          Expr e;
          e.op = Expr::Op::Or;
          e.lhs = lhs;
          e.rhs = parse_and();
          lhs = make(std::move(e));
        }
        return lhs;
      }

      ExprPtr parse_and()
      {
        auto lhs = parse_unary();
        while (punct("&&"))
        {
          Expr e;
          e.op = Expr::Op::And;
          e.lhs = lhs;
          e.rhs = parse_unary();
          lhs = make(std::move(e));
        }
        return lhs;
      }

      ExprPtr parse_unary()
      {
        if (punct("!"))
        {
          Expr e;
          e.op = Expr::Op::Not;
          e.lhs = parse_unary();
          return make(std::move(e));
        }
        return parse_cmp();
      }

      ExprPtr parse_cmp()
      {
        auto lhs = parse_term();
        if (punct("=="))
        {
          Expr e;
          e.op = Expr::Op::Eq;
          e.lhs = lhs;
          e.rhs = parse_term();
          return make(std::move(e));
        }
        if (punct("!="))
        {
          Expr e;
          e.op = Expr::Op::Ne;
          e.lhs = lhs;
          e.rhs = parse_term();
          return make(std::move(e));
        }
        if (
          lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == "in")
        {
          lex_.next();
          Expr e;
          e.op = Expr::Op::In;
          e.lhs = lhs;
          e.rhs = parse_list();
          return make(std::move(e));
        }
        return lhs;
      }

      ExprPtr parse_list()
      {
        size_t at = lex_.peek().pos;
        expect_punct("[");
        std::vector<Value> items;
        if (!punct("]"))
        {
          while (true)
          {
            items.push_back(parse_literal_value());
            if (punct("]"))
              break;
            expect_punct(",");
          }
        }
        if (items.empty())
          fail(
            "SyntaxError",
            "membership list must not be empty at offset " +
              std::to_string(at));
        Expr e;
        e.op = Expr::Op::Literal;
        e.literal = Value::list(std::move(items));
        return make(std::move(e));
      }

      Value parse_literal_value()
      {
        const auto& t = lex_.peek();
        if (t.kind == Token::Kind::Int)
          return Value::integer(lex_.next().int_value);
        if (t.kind == Token::Kind::Hex)
          return Value::hex(lex_.next().text);
        if (t.kind == Token::Kind::Str)
          return Value::str(lex_.next().text);
        if (t.kind == Token::Kind::Ident && (t.text == "true" ||
                                             t.text == "false"))
          return Value::boolean(lex_.next().text == "true");
        fail(
          "SyntaxError",
          "expected literal at offset " + std::to_string(t.pos));
      }

      ExprPtr parse_term()
      {
        const auto& t = lex_.peek();
        if (punct("("))
        {
          auto e = parse_or();
          expect_punct(")");
          return e;
        }
        if (
          t.kind == Token::Kind::Ident &&
          (t.text == "claims" || t.text == "config"))
        {
          Expr e;
          e.op = Expr::Op::Access;
          e.from_config = lex_.next().text == "config";
          expect_punct("[");
          if (lex_.peek().kind != Token::Kind::Str)
            fail(
              "SyntaxError",
              "accessor key must be a string at offset " +
                std::to_string(lex_.peek().pos));
          e.key = lex_.next().text;
          expect_punct("]");
          return make(std::move(e));
        }
        Expr e;
        e.op = Expr::Op::Literal;
        e.literal = parse_literal_value();
        return make(std::move(e));
      }

      Lexer lex_;
    };

    inline std::string pretty_expr(const ExprPtr& e)
    {
      switch (e->op)
      {
        case Expr::Op::Literal:
          return e->literal.repr();
        case Expr::Op::Access:
          return std::string(e->from_config ? "config" : "claims") + "[\"" +
            e->key + "\"]";
        case Expr::Op::Not:
          return "!(" + pretty_expr(e->lhs) + ")";
        case Expr::Op::Eq:
          return "(" + pretty_expr(e->lhs) + " == " + pretty_expr(e->rhs) +
            ")";
        case Expr::Op::Ne:
          return "(" + pretty_expr(e->lhs) + " != " + pretty_expr(e->rhs) +
            ")";
        case Expr::Op::And:
          return "(" + pretty_expr(e->lhs) + " && " + pretty_expr(e->rhs) +
            ")";
        case Expr::Op::Or:
          return "(" + pretty_expr(e->lhs) + " || " + pretty_expr(e->rhs) +
            ")";
        case Expr::Op::In:
          return "(" + pretty_expr(e->lhs) + " in " + e->rhs->literal.repr() +
            ")";
      }
      return "?";
    }
  }

  inline std::string PolicyExpr::pretty() const
  {
    return root_ ? detail::pretty_expr(root_) : "";
  }

  inline PolicyExpr parse_policy(const std::string& text)
  {
    detail::Parser p(text);
    return PolicyExpr(p.parse(), text);
  }

  namespace detail
  {
    inline Value eval_expr(
      const ExprPtr& e, const Claims& claims, const Claims& config)
    {
      switch (e->op)
      {
        case Expr::Op::Literal:
          return e->literal;
        case Expr::Op::Access:
        {
          const Claims& src = e->from_config ? config : claims;
          auto it = src.find(e->key);
          if (it == src.end())
            fail(
              "MissingClaim",
              std::string(e->from_config ? "config" : "claims") + "[\"" +
                e->key + "\"] is not present");
          return it->second;
        }
        case Expr::Op::Not:
        {
          auto v = eval_expr(e->lhs, claims, config);
          if (v.kind != Value::Kind::Bool)
            fail("TypeMismatch", "! applied to non-boolean " + v.repr());
          return Value::boolean(!v.b);
        }
        case Expr::Op::Eq:
        case Expr::Op::Ne:
        {
          auto l = eval_expr(e->lhs, claims, config);
          auto r = eval_expr(e->rhs, claims, config);
          bool eq = l.equals(r);
          return Value::boolean(e->op == Expr::Op::Eq ? eq : !eq);
        }
        case Expr::Op::And:
        case Expr::Op::Or:
        {
          // Both sides always evaluate: a missing claim is reported even
          // when the other side already decides the result.
          auto l = eval_expr(e->lhs, claims, config);
          auto r = eval_expr(e->rhs, claims, config);
          if (l.kind != Value::Kind::Bool || r.kind != Value::Kind::Bool)
            fail("TypeMismatch", "logical operator over non-booleans");
          return Value::boolean(
            e->op == Expr::Op::And ? (l.b && r.b) : (l.b || r.b));
        }
        case Expr::Op::In:
        {
          auto l = eval_expr(e->lhs, claims, config);
          const auto& list = e->rhs->literal;
          bool found = false;
          for (const auto& item : list.items)
            if (l.equals(item))
              found = true;
          return Value::boolean(found);
        }
      }
      fail("TypeMismatch", "unreachable expression kind");
    }
  }

  inline bool eval_policy(
    const PolicyExpr& p, const Claims& claims, const Claims& config)
  {
    if (p.empty())
      fail("SyntaxError", "evaluating an unparsed policy");
    auto v = detail::eval_expr(p.root(), claims, config);
    if (v.kind != Value::Kind::Bool)
      fail("TypeMismatch", "policy result is not boolean: " + v.repr());
    return v.b;
  }

  // ---------------------------------------------------------------------
  // Policy documents and the inheritance (monotonicity) rule
  // ---------------------------------------------------------------------

  enum class PolicyKind : uint8_t
  {
    Registration = 0,
    Delegation = 1
  };

  // Source texts are compared byte-exact; a reformatted copy of a parent
  // policy does not count as inherited.
  struct PolicyDocument
  {
    PolicyKind kind = PolicyKind::Registration;
    std::string apex; // lowercased zone apex this document belongs to
    std::vector<std::pair<std::string, std::string>> inherited; // (apex, text)
    std::string own;

    bool operator==(const PolicyDocument&) const = default;
  };

  inline bool check_inheritance(
    const PolicyDocument& child, const PolicyDocument& parent)
  {
    if (child.inherited.size() != parent.inherited.size() + 1)
      return false;
    for (size_t i = 0; i < parent.inherited.size(); i++)
      if (child.inherited[i] != parent.inherited[i])
        return false;
    return child.inherited.back() ==
      std::make_pair(parent.apex, parent.own);
  }

  inline bool eval_all(
    const PolicyDocument& doc, const Claims& claims, const Claims& config)
  {
    bool ok = true;
    for (const auto& [apex, text] : doc.inherited)
      ok = eval_policy(parse_policy(text), claims, config) && ok;
    ok = eval_policy(parse_policy(doc.own), claims, config) && ok;
    return ok;
  }
}
