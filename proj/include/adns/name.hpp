// Copyright (c) the aDNS contributors.
// Licensed under the Apache 2.0 License.

#pragma once

#include "adns/util.hpp"

#include <compare>
#include <string>
#include <vector>

namespace adns
{
  /// A DNS domain name: an ordered list of labels, case-preserving but
  /// case-insensitive in comparisons and canonical (signing) form.
  class DomainName
  {
  public:
    DomainName() = default;

    explicit DomainName(std::vector<std::string> labels) :
      labels_(std::move(labels))
    {
      validate();
    }

    // Parses presentation form; a trailing dot is accepted. "" and "." both
    // denote the root.
    static DomainName parse(std::string_view text)
    {
      std::vector<std::string> labels;
      std::string cur;
      for (char c : text)
      {
        if (c == '.')
        {
          if (cur.empty())
          {
            if (labels.empty() && text == ".")
              break;
            fail("MalformedName", "empty label in " + std::string(text));
          }
          labels.push_back(cur);
          cur.clear();
        }
        else
          cur.push_back(c);
      }
      if (!cur.empty())
        labels.push_back(cur);
      return DomainName(std::move(labels));
    }

    const std::vector<std::string>& labels() const
    {
      return labels_;
    }
    bool is_root() const
    {
      return labels_.empty();
    }
    size_t label_count() const
    {
      return labels_.size();
    }

    std::string to_string() const
    {
      if (labels_.empty())
        return ".";
      std::string out;
      for (const auto& l : labels_)
      {
        out += l;
        out += '.';
      }
      out.pop_back();
      return out;
    }

    // Uncompressed wire form, case preserved.
    Bytes to_wire() const
    {
      Bytes out;
      for (const auto& l : labels_)
      {
        out.push_back(static_cast<uint8_t>(l.size()));
        out.insert(out.end(), l.begin(), l.end());
      }
      out.push_back(0);
      return out;
    }

    // RFC 4034 canonical form: wire format with all labels lowercased.
    Bytes canonical_wire() const
    {
      Bytes out;
      for (const auto& l : labels_)
      {
        out.push_back(static_cast<uint8_t>(l.size()));
        for (char c : l)
          out.push_back(static_cast<uint8_t>(std::tolower(
            static_cast<unsigned char>(c))));
      }
      out.push_back(0);
      return out;
    }

    size_t encoded_size() const
    {
      size_t n = 1;
      for (const auto& l : labels_)
        n += 1 + l.size();
      return n;
    }

    std::string lowered() const
    {
      return to_lower(to_string());
    }

    bool operator==(const DomainName& other) const
    {
      if (labels_.size() != other.labels_.size())
        return false;
      for (size_t i = 0; i < labels_.size(); i++)
        if (to_lower(labels_[i]) != to_lower(other.labels_[i]))
          return false;
      return true;
    }

    // Lexicographic order over lowercased presentation; used for map keys.
    bool operator<(const DomainName& other) const
    {
      return lowered() < other.lowered();
    }

    // True if this name equals `zone` or is a descendant of it.
    bool under(const DomainName& zone) const
    {
      if (zone.labels_.size() > labels_.size())
        return false;
      size_t off = labels_.size() - zone.labels_.size();
      for (size_t i = 0; i < zone.labels_.size(); i++)
        if (to_lower(labels_[off + i]) != to_lower(zone.labels_[i]))
          return false;
      return true;
    }

    bool strictly_under(const DomainName& zone) const
    {
      return label_count() > zone.label_count() && under(zone);
    }

    // Name with `prefix` labels prepended, e.g. "www" + "service.conf".
    DomainName prefixed(const DomainName& prefix) const
    {
      std::vector<std::string> ls = prefix.labels_;
      ls.insert(ls.end(), labels_.begin(), labels_.end());
      return DomainName(std::move(ls));
    }
    DomainName prefixed(std::string_view prefix_text) const
    {
      return prefixed(DomainName::parse(prefix_text));
    }

    // Drops the leftmost label ("www.service.conf" -> "service.conf").
    DomainName parent() const
    {
      if (labels_.empty())
        fail("MalformedName", "root has no parent");
      return DomainName(
        std::vector<std::string>(labels_.begin() + 1, labels_.end()));
    }

  private:
    void validate() const
    {
      size_t total = 1;
      for (const auto& l : labels_)
      {
        if (l.empty() || l.size() > 63)
          fail("MalformedName", "label length must be 1..63");
        total += 1 + l.size();
      }
      if (total > 255)
        fail("MalformedName", "encoded name exceeds 255 octets");
    }

    std::vector<std::string> labels_;
  };
}
