#include "manet/crypto/mac.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "manet/sim/rng.hpp"

namespace manet::crypto {
namespace {

class Encoder {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
  }
  void u64(std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void node(NodeId id) { u32(index(id)); }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }

  std::vector<std::uint8_t> take() && { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

Key key_from_words(sim::Rng& rng) {
  Key key{};
  for (std::size_t i = 0; i < key.size(); i += 8) {
    const std::uint64_t w = rng.next_u64();
    for (std::size_t b = 0; b < 8; ++b) key[i + b] = static_cast<std::uint8_t>(w >> (56 - 8 * b));
  }
  return key;
}

}  // namespace

KeyRing KeyRing::from_seed(std::uint64_t seed) {
  sim::Rng rng(sim::derive_seed(seed, sim::Stream::Keys));
  return KeyRing{key_from_words(rng)};
}

Key KeyRing::outsider_key(std::uint64_t seed, NodeId node) {
  sim::Rng rng(sim::derive_seed(seed, sim::Stream::Keys, 1 + static_cast<std::uint64_t>(index(node))));
  return key_from_words(rng);
}

std::vector<std::uint8_t> encode_canonical(const routing::Packet& p) {
  Encoder e;
  e.u8(static_cast<std::uint8_t>(p.kind));
  e.node(p.origin);
  e.node(p.target);
  e.u32(p.seq_or_id);
  e.u64(p.uid);
  e.node(p.aux);
  e.u64(p.about_uid);
  e.f64(p.issued_at);
  e.u32(static_cast<std::uint32_t>(p.source_route.size()));
  for (const NodeId n : p.source_route) e.node(n);
  e.u32(static_cast<std::uint32_t>(p.reports.size()));
  for (const auto& r : p.reports) {
    e.node(r.subject);
    e.f64(r.rating);
  }
  e.u32(static_cast<std::uint32_t>(p.payload.size()));
  e.bytes(p.payload);
  return std::move(e).take();
}

std::array<std::uint8_t, 32> hmac_sha256(std::span<const std::uint8_t> key,
                                         std::span<const std::uint8_t> message) {
  std::array<std::uint8_t, 32> out{};
  unsigned int len = 0;
  const auto* ok = HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), message.data(),
                        message.size(), out.data(), &len);
  if (ok == nullptr || len != out.size()) throw std::runtime_error("HMAC-SHA-256 failed");
  return out;
}

MacTag tag_packet(const Key& key, const routing::Packet& packet) {
  const auto full = hmac_sha256(key, encode_canonical(packet));
  MacTag tag;
  std::copy_n(full.begin(), tag.bytes.size(), tag.bytes.begin());
  return tag;
}

bool verify_packet(const Key& key, const routing::Packet& packet) {
  const MacTag expected = tag_packet(key, packet);
  return CRYPTO_memcmp(expected.bytes.data(), packet.mac_tag.bytes.data(), expected.bytes.size()) == 0;
}

}  // namespace manet::crypto
