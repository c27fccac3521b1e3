// Copyright (c) the aDNS contributors.
// Licensed under the Apache 2.0 License.

#include "adns/crypto.hpp"
#include "adns/util.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace adns;

TEST_CASE("hex round trip")
{
  Bytes b = {0x00, 0x7F, 0xFF, 0x10};
  REQUIRE(hex_encode(b) == "007fff10");
  REQUIRE(hex_decode("007fff10") == b);
  REQUIRE(hex_decode("0x007FFF10") == b);
  REQUIRE_THROWS_AS(hex_decode("0g"), Error);
}

TEST_CASE("base64url matches RFC 4648 vectors")
{
  // RFC 4648 test vectors, translated to the url-safe alphabet, no padding.
  REQUIRE(base64url_encode(to_bytes("")) == "");
  REQUIRE(base64url_encode(to_bytes("f")) == "Zg");
  REQUIRE(base64url_encode(to_bytes("fo")) == "Zm8");
  REQUIRE(base64url_encode(to_bytes("foo")) == "Zm9v");
  REQUIRE(base64url_encode(to_bytes("foob")) == "Zm9vYg");
  REQUIRE(base64url_encode(to_bytes("fooba")) == "Zm9vYmE");
  REQUIRE(base64url_encode(to_bytes("foobar")) == "Zm9vYmFy");
  REQUIRE(base64url_decode("Zm9vYmE") == to_bytes("fooba"));
  Bytes high = {0xFB, 0xFF, 0xBF};
  REQUIRE(base64url_encode(high) == "-_-_");
}

TEST_CASE("base32hex matches RFC 4648 vectors")
{
  REQUIRE(base32hex_encode(to_bytes("")) == "");
  REQUIRE(base32hex_encode(to_bytes("f")) == "co");
  REQUIRE(base32hex_encode(to_bytes("fo")) == "cpng");
  REQUIRE(base32hex_encode(to_bytes("foo")) == "cpnmu");
  REQUIRE(base32hex_encode(to_bytes("foob")) == "cpnmuog");
  REQUIRE(base32hex_encode(to_bytes("fooba")) == "cpnmuoj1");
  REQUIRE(base32hex_encode(to_bytes("foobar")) == "cpnmuoj1e8");
}

TEST_CASE("byte reader rejects truncated input")
{
  Bytes b = {0x01, 0x02};
  ByteReader r(b, "Boom");
  REQUIRE(r.u16() == 0x0102);
  try
  {
    r.u8();
    FAIL("expected throw");
  }
  catch (const Error& e)
  {
    REQUIRE(e.code() == "Boom");
  }
}

TEST_CASE("sha256 matches known answer")
{
  REQUIRE(
    hex_encode(crypto::sha256(to_bytes("abc"))) ==
    "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  REQUIRE(
    hex_encode(crypto::sha1(to_bytes("abc"))) ==
    "a9993e364706816aba3e25717850c26c9cd0d89d");
}

TEST_CASE("seeded rng is deterministic and forkable")
{
  crypto::SeededRng a(42), b(42);
  REQUIRE(a.bytes(40) == b.bytes(40));
  REQUIRE(a.fork("x").bytes(16) != a.fork("y").bytes(16));
  // Forks depend only on the seed and label, not on consumed state.
  crypto::SeededRng c(42);
  c.bytes(8);
  REQUIRE(c.fork("x").bytes(16) == crypto::SeededRng(42).fork("x").bytes(16));
}

TEST_CASE("ed25519 sign/verify and tampering")
{
  crypto::SeededRng rng(7);
  auto key = crypto::SigningKey::generate(rng);
  auto msg = to_bytes("attested dns");
  auto sig = key.sign(msg);
  REQUIRE(sig.size() == crypto::ED25519_SIGNATURE_SIZE);
  REQUIRE(crypto::ed25519_verify(key.public_key, msg, sig));
  auto bad = sig;
  bad[3] ^= 1;
  REQUIRE_FALSE(crypto::ed25519_verify(key.public_key, msg, bad));
  auto msg2 = to_bytes("attested dnS");
  REQUIRE_FALSE(crypto::ed25519_verify(key.public_key, msg2, sig));

  // Same seed, same keys: determinism under injected randomness.
  crypto::SeededRng rng2(7);
  auto key2 = crypto::SigningKey::generate(rng2);
  REQUIRE(key2.public_key == key.public_key);
}

TEST_CASE("deflate round trip shrinks repetitive data")
{
  std::string s;
  for (int i = 0; i < 100; i++)
    s += "certificate collateral block ";
  auto in = to_bytes(s);
  auto comp = crypto::deflate(in);
  REQUIRE(comp.size() < in.size());
  REQUIRE(crypto::inflate(comp) == in);
  Bytes garbage = {1, 2, 3, 4};
  REQUIRE_THROWS_AS(crypto::inflate(garbage), Error);
}
