#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "manet/crypto/mac_tag.hpp"
#include "manet/routing/packet.hpp"

namespace manet::crypto {

using Key = std::array<std::uint8_t, 32>;

/// Keys for one run. Legitimate nodes share network_key; each Outsider
/// adversary signs with its own key drawn from the same seed.
struct KeyRing {
  Key network_key{};

  static KeyRing from_seed(std::uint64_t seed);
  static Key outsider_key(std::uint64_t seed, NodeId node);
};

/// Canonical big-endian encoding of the MAC-covered fields. The layout is
/// documented in docs/packet_encoding.md and must not change without
/// regenerating tests/data/mac_vectors.json.
std::vector<std::uint8_t> encode_canonical(const routing::Packet& packet);

/// HMAC-SHA-256 (full 32 bytes).
std::array<std::uint8_t, 32> hmac_sha256(std::span<const std::uint8_t> key,
                                         std::span<const std::uint8_t> message);

MacTag tag_packet(const Key& key, const routing::Packet& packet);
bool verify_packet(const Key& key, const routing::Packet& packet);

}  // namespace manet::crypto
