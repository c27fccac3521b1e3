// Copyright (c) the aDNS contributors.
// Licensed under the Apache 2.0 License.

#pragma once

#include "adns/crypto.hpp"
#include "adns/name.hpp"
#include "adns/util.hpp"

#include <map>
#include <optional>
#include <set>

namespace adns
{
  // Record type codes. ATTEST sits in the private-use range.
  namespace rrtype
  {
    inline constexpr uint16_t A = 1;
    inline constexpr uint16_t NS = 2;
    inline constexpr uint16_t SOA = 6;
    inline constexpr uint16_t TXT = 16;
    inline constexpr uint16_t AAAA = 28;
    inline constexpr uint16_t DS = 43;
    inline constexpr uint16_t RRSIG = 46;
    inline constexpr uint16_t DNSKEY = 48;
    inline constexpr uint16_t NSEC3 = 50;
    inline constexpr uint16_t NSEC3PARAM = 51;
    inline constexpr uint16_t TLSA = 52;
    inline constexpr uint16_t CAA = 257;
    inline constexpr uint16_t ATTEST = 65280;

    inline std::string to_string(uint16_t t)
    {
      switch (t)
      {
        case A:
          return "A";
        case NS:
          return "NS";
        case SOA:
          return "SOA";
        case TXT:
          return "TXT";
        case AAAA:
          return "AAAA";
        case DS:
          return "DS";
        case RRSIG:
          return "RRSIG";
        case DNSKEY:
          return "DNSKEY";
        case NSEC3:
          return "NSEC3";
        case NSEC3PARAM:
          return "NSEC3PARAM";
        case TLSA:
          return "TLSA";
        case CAA:
          return "CAA";
        case ATTEST:
          return "ATTEST";
        default:
          return "TYPE" + std::to_string(t);
      }
    }
  }

  inline constexpr uint16_t CLASS_IN = 1;

  struct ResourceRecord
  {
    DomainName owner;
    uint16_t type = 0;
    uint16_t cls = CLASS_IN;
    uint32_t ttl = 0;
    Bytes rdata; // wire-format payload for `type`

    bool operator==(const ResourceRecord& o) const
    {
      return owner == o.owner && type == o.type && cls == o.cls &&
        ttl == o.ttl && rdata == o.rdata;
    }
  };

  using RRset = std::vector<ResourceRecord>;

  // ---------------------------------------------------------------------
  // Typed rdata codecs. Each `encode_*` produces wire rdata; each
  // `parse_*` must re-encode byte-identically on valid input.
  // ---------------------------------------------------------------------

  struct SoaData
  {
    DomainName mname;
    DomainName rname;
    uint32_t serial = 0;
    uint32_t refresh = 3600;
    uint32_t retry = 600;
    uint32_t expire = 864000;
    uint32_t minimum = 300;
  };

  struct RrsigData
  {
    uint16_t type_covered = 0;
    uint8_t algorithm = 0;
    uint8_t labels = 0;
    uint32_t original_ttl = 0;
    uint32_t expiration = 0;
    uint32_t inception = 0;
    uint16_t key_tag = 0;
    DomainName signer;
    Bytes signature;
  };

  struct DnskeyData
  {
    uint16_t flags = 256; // 256 = ZSK, 257 = KSK (SEP bit)
    uint8_t protocol = 3;
    uint8_t algorithm = 15; // Ed25519 (RFC 8080)
    Bytes public_key;
  };

  struct DsData
  {
    uint16_t key_tag = 0;
    uint8_t algorithm = 15;
    uint8_t digest_type = 2; // SHA-256
    Bytes digest;
  };

  struct Nsec3Data
  {
    uint8_t hash_alg = 1; // SHA-1
    uint8_t flags = 0;
    uint16_t iterations = 0;
    Bytes salt;
    Bytes next_hashed; // 20 octets
    std::vector<uint16_t> types;
  };

  struct Nsec3ParamData
  {
    uint8_t hash_alg = 1;
    uint8_t flags = 0;
    uint16_t iterations = 0;
    Bytes salt;
  };

  struct TlsaData
  {
    uint8_t usage = 3; // DANE-EE
    uint8_t selector = 1; // SubjectPublicKeyInfo (raw key here)
    uint8_t matching = 0; // exact content
    Bytes association;
  };

  struct CaaData
  {
    uint8_t flags = 0;
    std::string tag;
    std::string value;
  };

  inline Bytes encode_a(const std::string& dotted)
  {
    Bytes out;
    uint32_t part = 0;
    int parts = 0;
    bool have_digit = false;
    for (size_t i = 0; i <= dotted.size(); i++)
    {
      char c = i < dotted.size() ? dotted[i] : '.';
      if (c == '.')
      {
        if (!have_digit || part > 255 || parts == 4)
          fail("MalformedRdata", "bad IPv4 address " + dotted);
        out.push_back(static_cast<uint8_t>(part));
        part = 0;
        parts++;
        have_digit = false;
      }
      else if (c >= '0' && c <= '9')
      {
        part = part * 10 + static_cast<uint32_t>(c - '0');
        have_digit = true;
      }
      else
        fail("MalformedRdata", "bad IPv4 address " + dotted);
    }
    if (parts != 4)
      fail("MalformedRdata", "bad IPv4 address " + dotted);
    return out;
  }

  inline std::string parse_a(const Bytes& rdata)
  {
    if (rdata.size() != 4)
      fail("MalformedRdata", "A rdata must be 4 octets");
    return std::to_string(rdata[0]) + "." + std::to_string(rdata[1]) + "." +
      std::to_string(rdata[2]) + "." + std::to_string(rdata[3]);
  }

  inline Bytes encode_name_rdata(const DomainName& n)
  {
    return n.to_wire();
  }

  inline Bytes encode_soa(const SoaData& s)
  {
    ByteWriter w;
    w.raw(s.mname.to_wire());
    w.raw(s.rname.to_wire());
    w.u32(s.serial);
    w.u32(s.refresh);
    w.u32(s.retry);
    w.u32(s.expire);
    w.u32(s.minimum);
    return w.take();
  }

  // TXT rdata: sequence of <=255-octet character-strings.
  inline Bytes encode_txt(const std::vector<std::string>& strings)
  {
    ByteWriter w;
    for (const auto& s : strings)
    {
      if (s.size() > 255)
        fail("MalformedRdata", "TXT string exceeds 255 octets");
      w.u8(static_cast<uint8_t>(s.size()));
      w.raw(s);
    }
    return w.take();
  }

  inline std::vector<std::string> parse_txt(const Bytes& rdata)
  {
    ByteReader r(rdata, "MalformedRdata");
    std::vector<std::string> out;
    while (!r.done())
    {
      auto b = r.raw(r.u8());
      out.emplace_back(b.begin(), b.end());
    }
    return out;
  }

  // Splits text into 255-octet chunks, in order (policy publication rule).
  inline Bytes encode_txt_chunked(const std::string& text)
  {
    std::vector<std::string> chunks;
    for (size_t i = 0; i < text.size(); i += 255)
      chunks.push_back(text.substr(i, 255));
    if (chunks.empty())
      chunks.push_back("");
    return encode_txt(chunks);
  }

  inline std::string parse_txt_joined(const Bytes& rdata)
  {
    std::string out;
    for (const auto& s : parse_txt(rdata))
      out += s;
    return out;
  }

  inline Bytes encode_rrsig(const RrsigData& d)
  {
    ByteWriter w;
    w.u16(d.type_covered);
    w.u8(d.algorithm);
    w.u8(d.labels);
    w.u32(d.original_ttl);
    w.u32(d.expiration);
    w.u32(d.inception);
    w.u16(d.key_tag);
    w.raw(d.signer.to_wire()); // never compressed
    w.raw(d.signature);
    return w.take();
  }

  namespace detail
  {
    // Uncompressed name directly embedded in rdata.
    inline DomainName read_plain_name(ByteReader& r)
    {
      std::vector<std::string> labels;
      while (true)
      {
        uint8_t len = r.u8();
        if (len == 0)
          break;
        if (len > 63)
          fail("MalformedRdata", "compressed name inside rdata");
        auto b = r.raw(len);
        labels.emplace_back(b.begin(), b.end());
      }
      return DomainName(std::move(labels));
    }
  }

  inline RrsigData parse_rrsig(const Bytes& rdata)
  {
    ByteReader r(rdata, "MalformedRdata");
    RrsigData d;
    d.type_covered = r.u16();
    d.algorithm = r.u8();
    d.labels = r.u8();
    d.original_ttl = r.u32();
    d.expiration = r.u32();
    d.inception = r.u32();
    d.key_tag = r.u16();
    d.signer = detail::read_plain_name(r);
    d.signature = r.raw(r.remaining());
    return d;
  }

  inline Bytes encode_dnskey(const DnskeyData& d)
  {
    ByteWriter w;
    w.u16(d.flags);
    w.u8(d.protocol);
    w.u8(d.algorithm);
    w.raw(d.public_key);
    return w.take();
  }

  inline DnskeyData parse_dnskey(const Bytes& rdata)
  {
    ByteReader r(rdata, "MalformedRdata");
    DnskeyData d;
    d.flags = r.u16();
    d.protocol = r.u8();
    d.algorithm = r.u8();
    d.public_key = r.raw(r.remaining());
    return d;
  }

  inline Bytes encode_ds(const DsData& d)
  {
    ByteWriter w;
    w.u16(d.key_tag);
    w.u8(d.algorithm);
    w.u8(d.digest_type);
    w.raw(d.digest);
    return w.take();
  }

  inline DsData parse_ds(const Bytes& rdata)
  {
    ByteReader r(rdata, "MalformedRdata");
    DsData d;
    d.key_tag = r.u16();
    d.algorithm = r.u8();
    d.digest_type = r.u8();
    d.digest = r.raw(r.remaining());
    return d;
  }

  // RFC 4034 4.1.2 window-block type bitmap, shared by NSEC3.
  inline Bytes encode_type_bitmap(std::vector<uint16_t> types)
  {
    std::sort(types.begin(), types.end());
    types.erase(std::unique(types.begin(), types.end()), types.end());
    ByteWriter w;
    size_t i = 0;
    while (i < types.size())
    {
      uint8_t window = static_cast<uint8_t>(types[i] >> 8);
      uint8_t bitmap[32] = {0};
      int maxbyte = -1;
      while (i < types.size() && (types[i] >> 8) == window)
      {
        uint8_t low = static_cast<uint8_t>(types[i] & 0xFF);
        bitmap[low / 8] |= static_cast<uint8_t>(0x80 >> (low % 8));
        maxbyte = std::max(maxbyte, low / 8);
        i++;
      }
      w.u8(window);
      w.u8(static_cast<uint8_t>(maxbyte + 1));
      w.raw(std::span<const uint8_t>(bitmap, static_cast<size_t>(maxbyte + 1)));
    }
    return w.take();
  }

  inline std::vector<uint16_t> parse_type_bitmap(ByteReader& r)
  {
    std::vector<uint16_t> types;
    while (!r.done())
    {
      uint8_t window = r.u8();
      uint8_t len = r.u8();
      if (len == 0 || len > 32)
        fail("MalformedRdata", "bad type bitmap window length");
      auto bits = r.raw(len);
      for (size_t byte = 0; byte < bits.size(); byte++)
        for (int bit = 0; bit < 8; bit++)
          if (bits[byte] & (0x80 >> bit))
            types.push_back(
              static_cast<uint16_t>((window << 8) | (byte * 8 + bit)));
    }
    return types;
  }

  inline Bytes encode_nsec3(const Nsec3Data& d)
  {
    ByteWriter w;
    w.u8(d.hash_alg);
    w.u8(d.flags);
    w.u16(d.iterations);
    w.u8(static_cast<uint8_t>(d.salt.size()));
    w.raw(d.salt);
    w.u8(static_cast<uint8_t>(d.next_hashed.size()));
    w.raw(d.next_hashed);
    w.raw(encode_type_bitmap(d.types));
    return w.take();
  }

  inline Nsec3Data parse_nsec3(const Bytes& rdata)
  {
    ByteReader r(rdata, "MalformedRdata");
    Nsec3Data d;
    d.hash_alg = r.u8();
    d.flags = r.u8();
    d.iterations = r.u16();
    d.salt = r.raw(r.u8());
    d.next_hashed = r.raw(r.u8());
    d.types = parse_type_bitmap(r);
    return d;
  }

  inline Bytes encode_nsec3param(const Nsec3ParamData& d)
  {
    ByteWriter w;
    w.u8(d.hash_alg);
    w.u8(d.flags);
    w.u16(d.iterations);
    w.u8(static_cast<uint8_t>(d.salt.size()));
    w.raw(d.salt);
    return w.take();
  }

  inline Nsec3ParamData parse_nsec3param(const Bytes& rdata)
  {
    ByteReader r(rdata, "MalformedRdata");
    Nsec3ParamData d;
    d.hash_alg = r.u8();
    d.flags = r.u8();
    d.iterations = r.u16();
    d.salt = r.raw(r.u8());
    r.expect_done();
    return d;
  }

  inline Bytes encode_tlsa(const TlsaData& d)
  {
    ByteWriter w;
    w.u8(d.usage);
    w.u8(d.selector);
    w.u8(d.matching);
    w.raw(d.association);
    return w.take();
  }

  inline TlsaData parse_tlsa(const Bytes& rdata)
  {
    ByteReader r(rdata, "MalformedRdata");
    TlsaData d;
    d.usage = r.u8();
    d.selector = r.u8();
    d.matching = r.u8();
    d.association = r.raw(r.remaining());
    return d;
  }

  inline Bytes encode_caa(const CaaData& d)
  {
    if (d.tag.empty() || d.tag.size() > 255)
      fail("MalformedRdata", "CAA tag length must be 1..255");
    ByteWriter w;
    w.u8(d.flags);
    w.u8(static_cast<uint8_t>(d.tag.size()));
    w.raw(d.tag);
    w.raw(d.value);
    return w.take();
  }

  inline CaaData parse_caa(const Bytes& rdata)
  {
    ByteReader r(rdata, "MalformedRdata");
    CaaData d;
    d.flags = r.u8();
    auto tag = r.raw(r.u8());
    if (tag.empty())
      fail("MalformedRdata", "empty CAA tag");
    d.tag.assign(tag.begin(), tag.end());
    auto value = r.raw(r.remaining());
    d.value.assign(value.begin(), value.end());
    return d;
  }

  // ---------------------------------------------------------------------
  // RFC 4034 canonical forms
  // ---------------------------------------------------------------------

  namespace detail
  {
    // Types whose rdata embeds names that must be lowercased in canonical
    // form (RFC 4034 6.2; only NS and SOA occur here).
    inline Bytes canonical_rdata(uint16_t type, const Bytes& rdata)
    {
      if (type == rrtype::NS)
      {
        ByteReader r(rdata, "MalformedRdata");
        auto n = read_plain_name(r);
        return n.canonical_wire();
      }
      if (type == rrtype::SOA)
      {
        ByteReader r(rdata, "MalformedRdata");
        auto mname = read_plain_name(r);
        auto rname = read_plain_name(r);
        ByteWriter w;
        w.raw(mname.canonical_wire());
        w.raw(rname.canonical_wire());
        w.raw(r.raw(r.remaining()));
        return w.take();
      }
      return rdata;
    }
  }

  // The exact byte stream over which RRSIG signatures are computed:
  // canonically ordered records as owner|type|class|original_ttl|rdlen|rdata.
  inline Bytes canonical_rrset_bytes(const RRset& rrset, uint32_t original_ttl)
  {
    if (rrset.empty())
      fail("MixedRRset", "empty RRset");
    for (const auto& rr : rrset)
      if (
        !(rr.owner == rrset[0].owner) || rr.type != rrset[0].type ||
        rr.cls != rrset[0].cls)
        fail("MixedRRset", "records do not share owner/type/class");

    std::vector<Bytes> rdatas;
    rdatas.reserve(rrset.size());
    for (const auto& rr : rrset)
      rdatas.push_back(detail::canonical_rdata(rr.type, rr.rdata));
    std::sort(rdatas.begin(), rdatas.end());
    rdatas.erase(std::unique(rdatas.begin(), rdatas.end()), rdatas.end());

    auto owner = rrset[0].owner.canonical_wire();
    ByteWriter w;
    for (const auto& rd : rdatas)
    {
      w.raw(owner);
      w.u16(rrset[0].type);
      w.u16(rrset[0].cls);
      w.u32(original_ttl);
      w.blob16(rd);
    }
    return w.take();
  }

  // RFC 5155 5: iterated SHA-1 over the canonical owner name.
  inline Bytes nsec3_hash(
    const DomainName& name, uint16_t iterations, const Bytes& salt)
  {
    Bytes x = name.canonical_wire();
    x.insert(x.end(), salt.begin(), salt.end());
    Bytes h = crypto::sha1(x);
    for (uint16_t i = 0; i < iterations; i++)
    {
      Bytes y = h;
      y.insert(y.end(), salt.begin(), salt.end());
      h = crypto::sha1(y);
    }
    return h;
  }
}
