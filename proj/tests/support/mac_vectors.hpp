#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "manet/crypto/mac.hpp"

namespace testing_support {

struct MacVector {
  manet::crypto::Key key{};
  manet::routing::Packet packet;
  std::string encoding_hex;
  std::string tag_hex;
};

inline std::vector<std::uint8_t> from_hex(const std::string& hex) {
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i + 1 < hex.size(); i += 2) {
    out.push_back(static_cast<std::uint8_t>(std::stoul(hex.substr(i, 2), nullptr, 16)));
  }
  return out;
}

inline std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (const auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

inline std::vector<MacVector> load_mac_vectors(const std::string& path) {
  using manet::node_id;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  const auto doc = nlohmann::json::parse(in);
  std::vector<MacVector> out;
  for (const auto& v : doc) {
    const auto& j = v["packet"];
    MacVector m;
    auto& p = m.packet;
    p.kind = static_cast<manet::routing::PacketKind>(j["kind"].get<int>());
    p.origin = node_id(j["origin"].get<std::uint32_t>());
    p.target = node_id(j["target"].get<std::uint32_t>());
    p.seq_or_id = j["seq_or_id"].get<std::uint32_t>();
    p.uid = j["uid"].get<std::uint64_t>();
    p.aux = node_id(j["aux"].get<std::uint32_t>());
    p.about_uid = j["about_uid"].get<std::uint64_t>();
    p.issued_at = j["issued_at"].get<double>();
    for (const auto& n : j["source_route"]) p.source_route.push_back(node_id(n.get<std::uint32_t>()));
    for (const auto& r : j["reports"]) p.reports.push_back({node_id(r[0].get<std::uint32_t>()), r[1].get<double>()});
    p.payload = from_hex(j["payload"].get<std::string>());
    const auto kb = from_hex(v["key"].get<std::string>());
    std::copy(kb.begin(), kb.end(), m.key.begin());
    m.encoding_hex = v["encoding"].get<std::string>();
    m.tag_hex = v["tag"].get<std::string>();
    out.push_back(std::move(m));
  }
  return out;
}

/// Flips every bit of the packet's canonical encoding in turn; returns
/// (flips, flips whose MAC no longer matches the original tag).
inline std::pair<std::size_t, std::size_t> bit_flip_detection(const manet::crypto::Key& key,
                                                               const manet::routing::Packet& packet) {
  const auto tag = manet::crypto::tag_packet(key, packet);
  const auto enc = manet::crypto::encode_canonical(packet);
  std::size_t total = 0;
  std::size_t detected = 0;
  for (std::size_t byte = 0; byte < enc.size(); ++byte) {
    for (int bit = 0; bit < 8; ++bit) {
      auto flipped = enc;
      flipped[byte] ^= static_cast<std::uint8_t>(1u << bit);
      const auto full = manet::crypto::hmac_sha256(key, flipped);
      manet::crypto::MacTag t;
      std::copy_n(full.begin(), t.bytes.size(), t.bytes.begin());
      ++total;
      if (!(t == tag)) ++detected;
    }
  }
  return {total, detected};
}

}  // namespace testing_support
