// Copyright (c) the aDNS contributors.
// Licensed under the Apache 2.0 License.

#pragma once

#include "adns/records.hpp"

#include <optional>

namespace adns
{
  namespace rcode
  {
    inline constexpr uint8_t NOERROR = 0;
    inline constexpr uint8_t FORMERR = 1;
    inline constexpr uint8_t SERVFAIL = 2;
    inline constexpr uint8_t NXDOMAIN = 3;
    inline constexpr uint8_t NOTIMP = 4;
    inline constexpr uint8_t REFUSED = 5;
  }

  struct MessageFlags
  {
    bool qr = false;
    uint8_t opcode = 0;
    bool aa = false;
    bool tc = false;
    bool rd = false;
    bool ra = false;
    bool ad = false;
    uint8_t rcode = 0;

    bool operator==(const MessageFlags&) const = default;
  };

  struct Question
  {
    DomainName qname;
    uint16_t qtype = 0;
    uint16_t qclass = CLASS_IN;

    bool operator==(const Question&) const = default;
  };

  struct DnsMessage
  {
    uint16_t id = 0;
    MessageFlags flags;
    std::vector<Question> questions;
    std::vector<ResourceRecord> answers;
    std::vector<ResourceRecord> authority;
    std::vector<ResourceRecord> additional;

    bool operator==(const DnsMessage&) const = default;

    static DnsMessage query(
      const DomainName& qname, uint16_t qtype, uint16_t id = 0)
    {
      DnsMessage m;
      m.id = id;
      m.flags.rd = true;
      m.questions.push_back({qname, qtype, CLASS_IN});
      return m;
    }
  };

  namespace detail
  {
    // Reads a possibly-compressed name at the reader's position; pointer
    // targets must precede the current record to rule out loops.
    inline DomainName read_message_name(
      std::span<const uint8_t> msg, ByteReader& r)
    {
      std::vector<std::string> labels;
      size_t jumps = 0;
      std::optional<size_t> resume;
      size_t pos = r.pos();
      while (true)
      {
        if (pos >= msg.size())
          fail("MalformedMessage", "name runs past end of message");
        uint8_t len = msg[pos];
        if ((len & 0xC0) == 0xC0)
        {
          if (pos + 1 >= msg.size())
            fail("MalformedMessage", "truncated compression pointer");
          size_t target = (static_cast<size_t>(len & 0x3F) << 8) | msg[pos + 1];
          if (!resume)
            resume = pos + 2;
          if (target >= pos)
            fail("MalformedMessage", "forward compression pointer");
          if (++jumps > 32)
            fail("MalformedMessage", "compression pointer loop");
          pos = target;
        }
        else if (len == 0)
        {
          pos++;
          break;
        }
        else if (len > 63)
          fail("MalformedMessage", "reserved label type");
        else
        {
          if (pos + 1 + len > msg.size())
            fail("MalformedMessage", "label runs past end of message");
          labels.emplace_back(
            reinterpret_cast<const char*>(msg.data() + pos + 1), len);
          pos += 1 + len;
        }
      }
      r.seek(resume.value_or(pos));
      try
      {
        return DomainName(std::move(labels));
      }
      catch (const Error&)
      {
        fail("MalformedMessage", "invalid name in message");
      }
    }

    // Rdata containing embedded names may use compression on the wire
    // (we never emit it, but must accept it): rewrite to uncompressed form.
    inline Bytes read_rdata(
      std::span<const uint8_t> msg, ByteReader& r, uint16_t type, uint16_t len)
    {
      size_t end = r.pos() + len;
      if (end > msg.size())
        fail("MalformedMessage", "rdata runs past end of message");
      if (type == rrtype::NS)
      {
        auto n = read_message_name(msg, r);
        if (r.pos() != end)
          fail("MalformedMessage", "trailing bytes in NS rdata");
        return n.to_wire();
      }
      if (type == rrtype::SOA)
      {
        auto mname = read_message_name(msg, r);
        auto rname = read_message_name(msg, r);
        if (end < r.pos() || end - r.pos() != 20)
          fail("MalformedMessage", "bad SOA rdata length");
        ByteWriter w;
        w.raw(mname.to_wire());
        w.raw(rname.to_wire());
        w.raw(r.raw(20));
        return w.take();
      }
      // All other supported types either embed no names (A, AAAA, TXT, DS,
      // DNSKEY, NSEC3, NSEC3PARAM, TLSA, CAA, ATTEST) or forbid compression
      // (RRSIG signer). Unknown types are preserved as opaque rdata.
      return r.raw(len);
    }
  }

  inline DnsMessage decode_message(std::span<const uint8_t> bytes)
  {
    if (bytes.size() < 12)
      fail("MalformedMessage", "message shorter than header");
    ByteReader r(bytes, "MalformedMessage");
    DnsMessage m;
    m.id = r.u16();
    uint16_t f = r.u16();
    m.flags.qr = f & 0x8000;
    m.flags.opcode = (f >> 11) & 0xF;
    m.flags.aa = f & 0x0400;
    m.flags.tc = f & 0x0200;
    m.flags.rd = f & 0x0100;
    m.flags.ra = f & 0x0080;
    m.flags.ad = f & 0x0020;
    m.flags.rcode = f & 0xF;
    uint16_t qd = r.u16(), an = r.u16(), ns = r.u16(), ar = r.u16();

    for (uint16_t i = 0; i < qd; i++)
    {
      Question q;
      q.qname = detail::read_message_name(bytes, r);
      q.qtype = r.u16();
      q.qclass = r.u16();
      m.questions.push_back(std::move(q));
    }
    auto read_section = [&](uint16_t count, std::vector<ResourceRecord>& out) {
      for (uint16_t i = 0; i < count; i++)
      {
        ResourceRecord rr;
        rr.owner = detail::read_message_name(bytes, r);
        rr.type = r.u16();
        rr.cls = r.u16();
        rr.ttl = r.u32();
        uint16_t rdlen = r.u16();
        rr.rdata = detail::read_rdata(bytes, r, rr.type, rdlen);
        out.push_back(std::move(rr));
      }
    };
    read_section(an, m.answers);
    read_section(ns, m.authority);
    read_section(ar, m.additional);
    return m;
  }

  namespace detail
  {
    inline uint16_t pack_flags(const MessageFlags& fl)
    {
      uint16_t f = 0;
      if (fl.qr)
        f |= 0x8000;
      f |= static_cast<uint16_t>((fl.opcode & 0xF) << 11);
      if (fl.aa)
        f |= 0x0400;
      if (fl.tc)
        f |= 0x0200;
      if (fl.rd)
        f |= 0x0100;
      if (fl.ra)
        f |= 0x0080;
      if (fl.ad)
        f |= 0x0020;
      f |= fl.rcode & 0xF;
      return f;
    }

    inline void write_record(
      ByteWriter& w,
      const ResourceRecord& rr,
      const std::optional<DomainName>& question_name)
    {
      // Single deterministic compression rule: owners equal to the question
      // name become a pointer to offset 12 (start of the question).
      if (question_name && rr.owner == *question_name)
        w.u16(0xC00C);
      else
        w.raw(rr.owner.to_wire());
      w.u16(rr.type);
      w.u16(rr.cls);
      w.u32(rr.ttl);
      w.blob16(rr.rdata);
    }
  }

  inline Bytes encode_message(
    const DnsMessage& m,
    size_t max_size = 0xFFFF,
    bool allow_truncate = false)
  {
    std::optional<DomainName> qname;
    if (!m.questions.empty())
      qname = m.questions[0].qname;

    auto build = [&](bool truncated) {
      ByteWriter w;
      w.u16(m.id);
      MessageFlags fl = m.flags;
      if (truncated)
        fl.tc = true;
      w.u16(detail::pack_flags(fl));
      w.u16(static_cast<uint16_t>(m.questions.size()));
      w.u16(truncated ? 0 : static_cast<uint16_t>(m.answers.size()));
      w.u16(truncated ? 0 : static_cast<uint16_t>(m.authority.size()));
      w.u16(truncated ? 0 : static_cast<uint16_t>(m.additional.size()));
      for (const auto& q : m.questions)
      {
        w.raw(q.qname.to_wire());
        w.u16(q.qtype);
        w.u16(q.qclass);
      }
      if (!truncated)
      {
        for (const auto& rr : m.answers)
          detail::write_record(w, rr, qname);
        for (const auto& rr : m.authority)
          detail::write_record(w, rr, qname);
        for (const auto& rr : m.additional)
          detail::write_record(w, rr, qname);
      }
      return w.take();
    };

    auto full = build(false);
    if (full.size() <= max_size)
      return full;
    if (!allow_truncate)
      fail(
        "MessageTooLarge",
        "encoded message is " + std::to_string(full.size()) +
          " octets, limit " + std::to_string(max_size));
    auto truncated = build(true);
    if (truncated.size() > max_size)
      fail("MessageTooLarge", "question alone exceeds size limit");
    return truncated;
  }
}
