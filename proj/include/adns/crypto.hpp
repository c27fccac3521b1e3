// Copyright (c) the aDNS contributors.
// Licensed under the Apache 2.0 License.

#pragma once

#include "adns/util.hpp"

#include <array>
#include <memory>
#include <openssl/evp.h>
#include <openssl/rand.h>
#include <openssl/sha.h>
#include <zlib.h>

namespace adns::crypto
{
  inline Bytes sha256(std::span<const uint8_t> data)
  {
    Bytes out(SHA256_DIGEST_LENGTH);
    SHA256(data.data(), data.size(), out.data());
    return out;
  }

  inline Bytes sha1(std::span<const uint8_t> data)
  {
    Bytes out(SHA_DIGEST_LENGTH);
    SHA1(data.data(), data.size(), out.data());
    return out;
  }

  // Random source. The deterministic flavor (SHA-256 counter DRBG) backs
  // seeded runs so that fixtures and scenario transcripts are reproducible.
  class Rng
  {
  public:
    virtual ~Rng() = default;
    virtual void fill(std::span<uint8_t> out) = 0;

    Bytes bytes(size_t n)
    {
      Bytes b(n);
      fill(b);
      return b;
    }
    uint64_t u64()
    {
      std::array<uint8_t, 8> b{};
      fill(b);
      uint64_t v = 0;
      for (auto x : b)
        v = (v << 8) | x;
      return v;
    }
  };

  class SystemRng : public Rng
  {
  public:
    void fill(std::span<uint8_t> out) override
    {
      if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1)
        fail("RngFailure", "RAND_bytes failed");
    }
  };

  class SeededRng : public Rng
  {
  public:
    explicit SeededRng(const Bytes& seed) : seed_(seed) {}
    explicit SeededRng(uint64_t seed)
    {
      ByteWriter w;
      w.u64(seed);
      seed_ = w.take();
    }

    void fill(std::span<uint8_t> out) override
    {
      size_t off = 0;
      while (off < out.size())
      {
        ByteWriter w;
        w.raw(seed_);
        w.u64(counter_++);
        auto block = sha256(w.bytes());
        size_t n = std::min(block.size(), out.size() - off);
        std::copy_n(block.begin(), n, out.begin() + off);
        off += n;
      }
    }

    // Derives an independent child stream, e.g. one per simulated actor.
    SeededRng fork(const std::string& label)
    {
      ByteWriter w;
      w.raw(seed_);
      w.str16(label);
      return SeededRng(sha256(w.bytes()));
    }

  private:
    Bytes seed_;
    uint64_t counter_ = 0;
  };

  struct EvpPkeyDeleter
  {
    void operator()(EVP_PKEY* k) const
    {
      EVP_PKEY_free(k);
    }
  };
  using EvpPkeyPtr = std::unique_ptr<EVP_PKEY, EvpPkeyDeleter>;

  inline constexpr size_t ED25519_PUBLIC_SIZE = 32;
  inline constexpr size_t ED25519_PRIVATE_SIZE = 32;
  inline constexpr size_t ED25519_SIGNATURE_SIZE = 64;

  inline Bytes ed25519_public_from_private(const Bytes& priv)
  {
    EvpPkeyPtr key(EVP_PKEY_new_raw_private_key(
      EVP_PKEY_ED25519, nullptr, priv.data(), priv.size()));
    if (!key)
      fail("CryptoFailure", "bad ed25519 private key");
    Bytes pub(ED25519_PUBLIC_SIZE);
    size_t len = pub.size();
    if (EVP_PKEY_get_raw_public_key(key.get(), pub.data(), &len) != 1)
      fail("CryptoFailure", "cannot derive ed25519 public key");
    return pub;
  }

  // Raw-key Ed25519 signing pair. All signatures in this project
  // (platform reports, DNSSEC, receipts, certificates, EATs) use this.
  struct SigningKey
  {
    Bytes private_key; // 32 raw octets
    Bytes public_key; // 32 raw octets

    static SigningKey generate(Rng& rng)
    {
      SigningKey k;
      k.private_key = rng.bytes(ED25519_PRIVATE_SIZE);
      k.public_key = ed25519_public_from_private(k.private_key);
      return k;
    }

    Bytes sign(std::span<const uint8_t> msg) const
    {
      EvpPkeyPtr key(EVP_PKEY_new_raw_private_key(
        EVP_PKEY_ED25519, nullptr, private_key.data(), private_key.size()));
      if (!key)
        fail("CryptoFailure", "bad ed25519 private key");
      std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(
        EVP_MD_CTX_new(), EVP_MD_CTX_free);
      if (
        EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) !=
        1)
        fail("CryptoFailure", "sign init failed");
      Bytes sig(ED25519_SIGNATURE_SIZE);
      size_t len = sig.size();
      if (
        EVP_DigestSign(ctx.get(), sig.data(), &len, msg.data(), msg.size()) !=
        1)
        fail("CryptoFailure", "signing failed");
      sig.resize(len);
      return sig;
    }
  };

  inline bool ed25519_verify(
    std::span<const uint8_t> public_key,
    std::span<const uint8_t> msg,
    std::span<const uint8_t> sig)
  {
    if (public_key.size() != ED25519_PUBLIC_SIZE)
      return false;
    EvpPkeyPtr key(EVP_PKEY_new_raw_public_key(
      EVP_PKEY_ED25519, nullptr, public_key.data(), public_key.size()));
    if (!key)
      return false;
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(
      EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (
      EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) !=
      1)
      return false;
    return EVP_DigestVerify(
             ctx.get(), sig.data(), sig.size(), msg.data(), msg.size()) == 1;
  }

  // DEFLATE (zlib container, fixed level 9 for determinism).
  inline Bytes deflate(std::span<const uint8_t> data)
  {
    uLongf bound = compressBound(static_cast<uLong>(data.size()));
    Bytes out(bound);
    if (
      compress2(
        out.data(), &bound, data.data(), static_cast<uLong>(data.size()), 9) !=
      Z_OK)
      fail("CryptoFailure", "deflate failed");
    out.resize(bound);
    return out;
  }

  inline Bytes inflate(std::span<const uint8_t> data, size_t max_size = 1 << 24)
  {
    Bytes out(4096);
    while (true)
    {
      uLongf len = static_cast<uLongf>(out.size());
      int rc = uncompress(
        out.data(), &len, data.data(), static_cast<uLong>(data.size()));
      if (rc == Z_OK)
      {
        out.resize(len);
        return out;
      }
      if (rc == Z_BUF_ERROR && out.size() < max_size)
      {
        out.resize(out.size() * 2);
        continue;
      }
      fail("MalformedCompressedData", "inflate failed");
    }
  }
}
