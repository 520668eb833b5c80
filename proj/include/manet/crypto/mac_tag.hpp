#pragma once

#include <array>
#include <cstdint>

namespace manet::crypto {

/// Truncated keyed-hash tag carried by every packet.
struct MacTag {
  std::array<std::uint8_t, 16> bytes{};

  friend bool operator==(const MacTag&, const MacTag&) = default;
};

}  // namespace manet::crypto
