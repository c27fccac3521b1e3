// Copyright (c) the aDNS contributors.
// Licensed under the Apache 2.0 License.

#include "adns/message.hpp"
#include "adns/records.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace adns;

namespace
{
  crypto::SeededRng& test_rng()
  {
    static crypto::SeededRng rng(0xD15EA5E);
    return rng;
  }

  DomainName random_name(crypto::Rng& rng, const std::string& suffix)
  {
    static const char* alphabet = "abcdefghijklmnopqrstuvwxyz0123456789";
    std::vector<std::string> labels;
    size_t count = 1 + rng.u64() % 3;
    for (size_t i = 0; i < count; i++)
    {
      std::string l;
      size_t len = 1 + rng.u64() % 12;
      for (size_t j = 0; j < len; j++)
        l.push_back(alphabet[rng.u64() % 36]);
      labels.push_back(l);
    }
    DomainName base = DomainName::parse(suffix);
    return base.prefixed(DomainName(labels));
  }

  ResourceRecord random_record(crypto::Rng& rng)
  {
    ResourceRecord rr;
    rr.owner = random_name(rng, "service.conf");
    rr.cls = CLASS_IN;
    rr.ttl = static_cast<uint32_t>(rng.u64() % 86400);
    switch (rng.u64() % 7)
    {
      case 0:
        rr.type = rrtype::A;
        rr.rdata = rng.bytes(4);
        break;
      case 1:
        rr.type = rrtype::AAAA;
        rr.rdata = rng.bytes(16);
        break;
      case 2:
        rr.type = rrtype::TXT;
        rr.rdata = encode_txt({hex_encode(rng.bytes(10))});
        break;
      case 3:
        rr.type = rrtype::TLSA;
        rr.rdata = encode_tlsa({3, 1, 0, rng.bytes(32)});
        break;
      case 4:
        rr.type = rrtype::DS;
        rr.rdata = encode_ds({static_cast<uint16_t>(rng.u64()), 15, 2,
                              rng.bytes(32)});
        break;
      case 5:
        rr.type = rrtype::ATTEST;
        rr.rdata = rng.bytes(1 + rng.u64() % 300);
        break;
      default:
        rr.type = rrtype::NS;
        rr.rdata = random_name(rng, "service.conf").to_wire();
        break;
    }
    return rr;
  }
}

TEST_CASE("hand-assembled A query decodes per RFC 1035")
{
  // Reference bytes written by hand from RFC 1035 4.1 before the codec:
  // id=0x1234, rd=1, one question: www.service.conf IN A.
  auto wire = hex_decode(
    "1234010000010000000000000377777707736572766963650463"
    "6f6e660000010001");
  auto m = decode_message(wire);
  REQUIRE(m.id == 0x1234);
  REQUIRE(m.flags.rd);
  REQUIRE_FALSE(m.flags.qr);
  REQUIRE(m.questions.size() == 1);
  REQUIRE(m.answers.empty());
  REQUIRE(m.questions[0].qname.to_string() == "www.service.conf");
  REQUIRE(m.questions[0].qtype == rrtype::A);
  REQUIRE(m.questions[0].qclass == CLASS_IN);
  REQUIRE(encode_message(m) == wire);
}

TEST_CASE("message round trip on random messages")
{
  auto& rng = test_rng();
  for (int iter = 0; iter < 50; iter++)
  {
    DnsMessage m;
    m.id = static_cast<uint16_t>(rng.u64());
    m.flags.qr = true;
    m.flags.aa = true;
    m.flags.rcode = static_cast<uint8_t>(rng.u64() % 6);
    m.questions.push_back(
      {random_name(rng, "service.conf"), rrtype::A, CLASS_IN});
    size_t an = rng.u64() % 4, ns = rng.u64() % 3, ar = rng.u64() % 3;
    for (size_t i = 0; i < an; i++)
      m.answers.push_back(random_record(rng));
    for (size_t i = 0; i < ns; i++)
      m.authority.push_back(random_record(rng));
    for (size_t i = 0; i < ar; i++)
      m.additional.push_back(random_record(rng));
    auto wire = encode_message(m);
    REQUIRE(decode_message(wire) == m);
  }
}

TEST_CASE("compression pointer to question name round-trips and saves space")
{
  DomainName qname = DomainName::parse("www.service.conf");
  DnsMessage m;
  m.id = 7;
  m.flags.qr = true;
  m.questions.push_back({qname, rrtype::A, CLASS_IN});
  ResourceRecord rr{qname, rrtype::A, CLASS_IN, 300, {192, 0, 2, 1}};
  m.answers.push_back(rr);
  m.answers.push_back(
    {qname, rrtype::A, CLASS_IN, 300, Bytes{192, 0, 2, 2}});
  auto wire = encode_message(m);
  REQUIRE(decode_message(wire) == m);

  // Expected saving per compressed owner: len(name) - 2 octets.
  DnsMessage uncompressed = m;
  uncompressed.answers[0].owner = DomainName::parse("www.service.conF");
  uncompressed.answers[1].owner = DomainName::parse("www.service.conF");
  // Same name modulo case, still compressed (case-insensitive match).
  REQUIRE(encode_message(uncompressed).size() == wire.size());

  DnsMessage other = m;
  other.answers[0].owner = DomainName::parse("xww.service.conf");
  other.answers[1].owner = DomainName::parse("xww.service.conf");
  auto wire_other = encode_message(other);
  size_t saving = qname.encoded_size() - 2;
  REQUIRE(wire_other.size() == wire.size() + 2 * saving);
}

TEST_CASE("pointer cycles and malformed input are rejected")
{
  // Pointer at offset 12 pointing to itself.
  auto cyclic = hex_decode("123401000001000000000000c00c00010001");
  REQUIRE_THROWS_AS(decode_message(cyclic), Error);
  try
  {
    decode_message(cyclic);
  }
  catch (const Error& e)
  {
    REQUIRE(e.code() == "MalformedMessage");
  }

  REQUIRE_THROWS_AS(decode_message(hex_decode("1234")), Error);

  // Truncated label.
  auto truncated = hex_decode("1234010000010000000000000577777700");
  REQUIRE_THROWS_AS(decode_message(truncated), Error);
}

TEST_CASE("unknown rrtypes are preserved as opaque rdata")
{
  DnsMessage m;
  m.id = 9;
  m.flags.qr = true;
  m.questions.push_back(
    {DomainName::parse("x.service.conf"), 999, CLASS_IN});
  m.answers.push_back(
    {DomainName::parse("x.service.conf"), 999, CLASS_IN, 60,
     Bytes{1, 2, 3, 4, 5}});
  REQUIRE(decode_message(encode_message(m)) == m);
}

TEST_CASE("truncation caps size and empties sections")
{
  DomainName qname = DomainName::parse("big.service.conf");
  DnsMessage m;
  m.id = 11;
  m.flags.qr = true;
  m.questions.push_back({qname, rrtype::ATTEST, CLASS_IN});
  auto& rng = test_rng();
  for (int i = 0; i < 8; i++)
    m.answers.push_back(
      {qname, rrtype::ATTEST, CLASS_IN, 300, rng.bytes(120)});

  REQUIRE(encode_message(m).size() > 512);
  REQUIRE_THROWS_AS(encode_message(m, 512, false), Error);
  auto wire = encode_message(m, 512, true);
  REQUIRE(wire.size() <= 512);
  auto dec = decode_message(wire);
  REQUIRE(dec.flags.tc);
  REQUIRE(dec.answers.empty());
  REQUIRE(dec.authority.empty());
  REQUIRE(dec.additional.empty());
  REQUIRE(dec.questions.size() == 1);

  // Under the limit: intact, tc clear.
  DnsMessage small = m;
  small.answers.resize(1);
  auto wire2 = encode_message(small, 512, true);
  auto dec2 = decode_message(wire2);
  REQUIRE_FALSE(dec2.flags.tc);
  REQUIRE(dec2.answers.size() == 1);
}

TEST_CASE("encode with max 512 and truncation allowed never exceeds 512")
{
  auto& rng = test_rng();
  for (int iter = 0; iter < 200; iter++)
  {
    DnsMessage m;
    m.id = static_cast<uint16_t>(rng.u64());
    m.flags.qr = true;
    m.questions.push_back(
      {random_name(rng, "service.conf"), rrtype::A, CLASS_IN});
    size_t an = rng.u64() % 6;
    for (size_t i = 0; i < an; i++)
      m.answers.push_back(random_record(rng));
    REQUIRE(encode_message(m, 512, true).size() <= 512);
  }
}

TEST_CASE("rdata codecs round trip")
{
  SECTION("CAA")
  {
    CaaData caa{0, "issue", "letsencrypt.org;validationmethods=dns-01"};
    auto rd = encode_caa(caa);
    auto back = parse_caa(rd);
    REQUIRE(back.flags == 0);
    REQUIRE(back.tag == "issue");
    REQUIRE(back.value == "letsencrypt.org;validationmethods=dns-01");
    REQUIRE(encode_caa(back) == rd);
  }
  SECTION("TLSA raw key pinning")
  {
    auto key = test_rng().bytes(32);
    TlsaData tlsa{3, 1, 0, key};
    auto rd = encode_tlsa(tlsa);
    auto back = parse_tlsa(rd);
    REQUIRE(back.usage == 3);
    REQUIRE(back.selector == 1);
    REQUIRE(back.matching == 0);
    REQUIRE(back.association == key);
    REQUIRE(encode_tlsa(back) == rd);
  }
  SECTION("ATTEST opaque payload")
  {
    auto payload = test_rng().bytes(333);
    ResourceRecord rr{
      DomainName::parse("_443._https.www.service.conf"), rrtype::ATTEST,
      CLASS_IN, 300, payload};
    DnsMessage m;
    m.id = 1;
    m.questions.push_back({rr.owner, rrtype::ATTEST, CLASS_IN});
    m.answers.push_back(rr);
    auto dec = decode_message(encode_message(m));
    REQUIRE(dec.answers[0].rdata == payload);
  }
  SECTION("A")
  {
    REQUIRE(parse_a(encode_a("192.0.2.77")) == "192.0.2.77");
    REQUIRE_THROWS_AS(encode_a("192.0.2.999"), Error);
    REQUIRE_THROWS_AS(encode_a("192.0.2"), Error);
  }
  SECTION("SOA")
  {
    SoaData soa{
      DomainName::parse("ns0.service.conf"),
      DomainName::parse("hostmaster.service.conf"), 17, 3600, 600, 864000,
      300};
    auto rd = encode_soa(soa);
    DnsMessage m;
    m.id = 2;
    m.questions.push_back(
      {DomainName::parse("service.conf"), rrtype::SOA, CLASS_IN});
    m.answers.push_back(
      {DomainName::parse("service.conf"), rrtype::SOA, CLASS_IN, 300, rd});
    REQUIRE(decode_message(encode_message(m)).answers[0].rdata == rd);
  }
  SECTION("NSEC3")
  {
    Nsec3Data n;
    n.next_hashed = test_rng().bytes(20);
    n.types = {rrtype::A, rrtype::RRSIG, rrtype::ATTEST, rrtype::TLSA};
    auto rd = encode_nsec3(n);
    auto back = parse_nsec3(rd);
    REQUIRE(back.next_hashed == n.next_hashed);
    std::vector<uint16_t> expect = {
      rrtype::A, rrtype::TLSA, rrtype::RRSIG, rrtype::ATTEST};
    std::sort(expect.begin(), expect.end());
    REQUIRE(back.types == expect);
    REQUIRE(encode_nsec3(back) == rd);
  }
  SECTION("TXT chunking")
  {
    std::string text(600, 'p');
    auto rd = encode_txt_chunked(text);
    auto chunks = parse_txt(rd);
    REQUIRE(chunks.size() == 3);
    REQUIRE(chunks[0].size() == 255);
    REQUIRE(chunks[2].size() == 90);
    REQUIRE(parse_txt_joined(rd) == text);
  }
}

TEST_CASE("canonical rrset bytes")
{
  DomainName owner = DomainName::parse("WWW.Service.CONF");
  ResourceRecord a1{owner, rrtype::A, CLASS_IN, 500, {192, 0, 2, 2}};
  ResourceRecord a2{owner, rrtype::A, CLASS_IN, 700, {192, 0, 2, 1}};

  SECTION("order independence")
  {
    auto c1 = canonical_rrset_bytes({a1, a2}, 300);
    auto c2 = canonical_rrset_bytes({a2, a1}, 300);
    REQUIRE(c1 == c2);
  }
  SECTION("case folding of owner")
  {
    ResourceRecord lower = a1;
    lower.owner = DomainName::parse("www.service.conf");
    ResourceRecord lower2 = a2;
    lower2.owner = lower.owner;
    REQUIRE(
      canonical_rrset_bytes({a1, a2}, 300) ==
      canonical_rrset_bytes({lower, lower2}, 300));
  }
  SECTION("single-record layout hand-computed from RFC 4034 6")
  {
    // owner | type | class | original_ttl | rdlen | rdata
    ResourceRecord rr{
      DomainName::parse("www.service.conf"), rrtype::A, CLASS_IN, 999,
      {192, 0, 2, 9}};
    auto expect = hex_decode(
      // 3www7service4conf0
      "03777777077365727669636504636f6e6600"
      "0001" // type A
      "0001" // class IN
      "0000012c" // original ttl 300
      "0004" // rdlen
      "c0000209"); // rdata
    REQUIRE(canonical_rrset_bytes({rr}, 300) == expect);
  }
  SECTION("mixed rrset rejected")
  {
    ResourceRecord other{
      DomainName::parse("x.service.conf"), rrtype::A, CLASS_IN, 300,
      {192, 0, 2, 3}};
    REQUIRE_THROWS_AS(canonical_rrset_bytes({a1, other}, 300), Error);
  }
}

TEST_CASE("nsec3 hash matches independent oracle")
{
  // Oracle values computed with an external SHA-1 tool over the canonical
  // wire name (0 iterations, empty salt), frozen here.
  auto h = nsec3_hash(DomainName::parse("service.conf"), 0, {});
  REQUIRE(hex_encode(h) == "1aae92b95d64cfcc390d9d40dcc398535476270c");
  REQUIRE(base32hex_encode(h) == "3an95eatcj7soe8djl0dpgsoada7c9oc");
  auto h2 = nsec3_hash(DomainName::parse("www.service.conf"), 0, {});
  REQUIRE(base32hex_encode(h2) == "d4rev78h7r8ael4dbd0cg0b0n9qp80ke");
  // Case-insensitive.
  auto h3 = nsec3_hash(DomainName::parse("WWW.SERVICE.CONF"), 0, {});
  REQUIRE(h3 == h2);
}

TEST_CASE("domain name invariants")
{
  REQUIRE_THROWS_AS(DomainName::parse(std::string(64, 'a') + ".conf"), Error);
  std::string long_name;
  for (int i = 0; i < 50; i++)
    long_name += "abcdef.";
  long_name += "conf";
  REQUIRE_THROWS_AS(DomainName::parse(long_name), Error);
  REQUIRE(DomainName::parse("a.b.c").under(DomainName::parse("b.c")));
  REQUIRE(DomainName::parse("a.b.c").under(DomainName::parse("B.C")));
  REQUIRE_FALSE(DomainName::parse("ab.c").under(DomainName::parse("b.c")));
  REQUIRE(
    DomainName::parse("service.conf").prefixed("_443._https.www").to_string() ==
    "_443._https.www.service.conf");
  REQUIRE(DomainName::parse("www.service.conf").parent().to_string() ==
          "service.conf");
}
