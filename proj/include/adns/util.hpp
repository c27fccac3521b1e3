// Copyright (c) the aDNS contributors.
// Licensed under the Apache 2.0 License.

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace adns
{
  using Bytes = std::vector<uint8_t>;

  // All recoverable failures carry a stable code (e.g. "MalformedMessage")
  // that callers and tests can match on, plus a human-readable message.
  class Error : public std::runtime_error
  {
  public:
    Error(std::string code, const std::string& msg) :
      std::runtime_error(code + ": " + msg), code_(std::move(code))
    {}

    const std::string& code() const
    {
      return code_;
    }

  private:
    std::string code_;
  };

  [[noreturn]] inline void fail(const std::string& code, const std::string& msg)
  {
    throw Error(code, msg);
  }

  inline Bytes to_bytes(std::string_view s)
  {
    return Bytes(s.begin(), s.end());
  }

  inline std::string to_string(const Bytes& b)
  {
    return std::string(b.begin(), b.end());
  }

  inline std::string to_lower(std::string s)
  {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
      return std::tolower(c);
    });
    return s;
  }

  inline std::string hex_encode(std::span<const uint8_t> data)
  {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data)
    {
      out.push_back(digits[b >> 4]);
      out.push_back(digits[b & 0xF]);
    }
    return out;
  }

  inline Bytes hex_decode(std::string_view s)
  {
    auto nibble = [](char c) -> int {
      if (c >= '0' && c <= '9')
        return c - '0';
      if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
      if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
      return -1;
    };
    if (s.size() >= 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X'))
      s = s.substr(2);
    if (s.size() % 2 != 0)
      fail("MalformedHex", "odd-length hex string");
    Bytes out(s.size() / 2);
    for (size_t i = 0; i < out.size(); i++)
    {
      int hi = nibble(s[2 * i]), lo = nibble(s[2 * i + 1]);
      if (hi < 0 || lo < 0)
        fail("MalformedHex", "invalid hex digit");
      out[i] = static_cast<uint8_t>((hi << 4) | lo);
    }
    return out;
  }

  // RFC 4648 base64url without padding.
  inline std::string base64url_encode(std::span<const uint8_t> data)
  {
    static const char* tbl =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";
    std::string out;
    out.reserve((data.size() * 4 + 2) / 3);
    size_t i = 0;
    for (; i + 3 <= data.size(); i += 3)
    {
      uint32_t v = (data[i] << 16) | (data[i + 1] << 8) | data[i + 2];
      out.push_back(tbl[(v >> 18) & 63]);
      out.push_back(tbl[(v >> 12) & 63]);
      out.push_back(tbl[(v >> 6) & 63]);
      out.push_back(tbl[v & 63]);
    }
    if (i + 1 == data.size())
    {
      uint32_t v = data[i] << 16;
      out.push_back(tbl[(v >> 18) & 63]);
      out.push_back(tbl[(v >> 12) & 63]);
    }
    else if (i + 2 == data.size())
    {
      uint32_t v = (data[i] << 16) | (data[i + 1] << 8);
      out.push_back(tbl[(v >> 18) & 63]);
      out.push_back(tbl[(v >> 12) & 63]);
      out.push_back(tbl[(v >> 6) & 63]);
    }
    return out;
  }

  inline Bytes base64url_decode(std::string_view s)
  {
    auto val = [](char c) -> int {
      if (c >= 'A' && c <= 'Z')
        return c - 'A';
      if (c >= 'a' && c <= 'z')
        return c - 'a' + 26;
      if (c >= '0' && c <= '9')
        return c - '0' + 52;
      if (c == '-')
        return 62;
      if (c == '_')
        return 63;
      return -1;
    };
    if (s.size() % 4 == 1)
      fail("MalformedBase64", "invalid base64url length");
    Bytes out;
    out.reserve(s.size() * 3 / 4);
    uint32_t acc = 0;
    int bits = 0;
    for (char c : s)
    {
      int v = val(c);
      if (v < 0)
        fail("MalformedBase64", "invalid base64url character");
      acc = (acc << 6) | static_cast<uint32_t>(v);
      bits += 6;
      if (bits >= 8)
      {
        bits -= 8;
        out.push_back(static_cast<uint8_t>((acc >> bits) & 0xFF));
      }
    }
    return out;
  }

  // RFC 4648 base32hex without padding, lowercase (used for NSEC3 owners).
  inline std::string base32hex_encode(std::span<const uint8_t> data)
  {
    static const char* tbl = "0123456789abcdefghijklmnopqrstuv";
    std::string out;
    uint32_t acc = 0;
    int bits = 0;
    for (uint8_t b : data)
    {
      acc = (acc << 8) | b;
      bits += 8;
      while (bits >= 5)
      {
        bits -= 5;
        out.push_back(tbl[(acc >> bits) & 31]);
      }
    }
    if (bits > 0)
      out.push_back(tbl[(acc << (5 - bits)) & 31]);
    return out;
  }

  // Big-endian wire scalar writer over a growing buffer.
  class ByteWriter
  {
  public:
    ByteWriter() = default;

    void u8(uint8_t v)
    {
      buf_.push_back(v);
    }
    void u16(uint16_t v)
    {
      buf_.push_back(static_cast<uint8_t>(v >> 8));
      buf_.push_back(static_cast<uint8_t>(v));
    }
    void u32(uint32_t v)
    {
      for (int i = 3; i >= 0; i--)
        buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void u64(uint64_t v)
    {
      for (int i = 7; i >= 0; i--)
        buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void raw(std::span<const uint8_t> data)
    {
      buf_.insert(buf_.end(), data.begin(), data.end());
    }
    void raw(const std::string& s)
    {
      buf_.insert(buf_.end(), s.begin(), s.end());
    }
    // u16 length prefix + payload; the common framing in this codebase.
    void blob16(std::span<const uint8_t> data)
    {
      if (data.size() > 0xFFFF)
        fail("Overflow", "blob16 payload too large");
      u16(static_cast<uint16_t>(data.size()));
      raw(data);
    }
    void blob32(std::span<const uint8_t> data)
    {
      if (data.size() > 0xFFFFFFFFull)
        fail("Overflow", "blob32 payload too large");
      u32(static_cast<uint32_t>(data.size()));
      raw(data);
    }
    void str16(const std::string& s)
    {
      blob16(std::span<const uint8_t>(
        reinterpret_cast<const uint8_t*>(s.data()), s.size()));
    }

    size_t size() const
    {
      return buf_.size();
    }
    void patch_u16(size_t offset, uint16_t v)
    {
      buf_[offset] = static_cast<uint8_t>(v >> 8);
      buf_[offset + 1] = static_cast<uint8_t>(v);
    }
    const Bytes& bytes() const
    {
      return buf_;
    }
    Bytes take()
    {
      return std::move(buf_);
    }

  private:
    Bytes buf_;
  };

  // Bounds-checked big-endian reader; throws `error_code` on underrun.
  class ByteReader
  {
  public:
    ByteReader(std::span<const uint8_t> data, std::string error_code) :
      data_(data), code_(std::move(error_code))
    {}

    uint8_t u8()
    {
      need(1);
      return data_[pos_++];
    }
    uint16_t u16()
    {
      need(2);
      uint16_t v = (static_cast<uint16_t>(data_[pos_]) << 8) | data_[pos_ + 1];
      pos_ += 2;
      return v;
    }
    uint32_t u32()
    {
      need(4);
      uint32_t v = 0;
      for (int i = 0; i < 4; i++)
        v = (v << 8) | data_[pos_ + i];
      pos_ += 4;
      return v;
    }
    uint64_t u64()
    {
      need(8);
      uint64_t v = 0;
      for (int i = 0; i < 8; i++)
        v = (v << 8) | data_[pos_ + i];
      pos_ += 8;
      return v;
    }
    Bytes raw(size_t n)
    {
      need(n);
      Bytes out(data_.begin() + pos_, data_.begin() + pos_ + n);
      pos_ += n;
      return out;
    }
    Bytes blob16()
    {
      return raw(u16());
    }
    Bytes blob32()
    {
      return raw(u32());
    }
    std::string str16()
    {
      auto b = blob16();
      return std::string(b.begin(), b.end());
    }

    size_t pos() const
    {
      return pos_;
    }
    void seek(size_t p)
    {
      if (p > data_.size())
        fail(code_, "seek out of range");
      pos_ = p;
    }
    size_t remaining() const
    {
      return data_.size() - pos_;
    }
    bool done() const
    {
      return pos_ == data_.size();
    }
    void expect_done() const
    {
      if (!done())
        fail(code_, "trailing bytes");
    }

  private:
    void need(size_t n) const
    {
      if (pos_ + n > data_.size())
        fail(code_, "truncated input");
    }

    std::span<const uint8_t> data_;
    std::string code_;
    size_t pos_ = 0;
  };
}
