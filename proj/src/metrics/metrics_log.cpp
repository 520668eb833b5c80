#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "manet/metrics/metrics.hpp"

namespace manet::metrics {
namespace {

constexpr std::string_view kHeader = "time,kind,uid,delay,bits,reason,control,subject,honest";

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_field(std::string_view s) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::runtime_error("metrics log: bad field '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

void write_log_csv(std::ostream& out, std::span<const MetricEvent> log) {
  out << kHeader << '\n';
  for (const auto& e : log) {
    out << format_number(e.time) << ',' << static_cast<int>(e.kind) << ',' << e.uid << ','
        << format_number(e.delay) << ',' << e.bits << ',' << static_cast<int>(e.reason) << ','
        << static_cast<int>(e.control) << ',' << index(e.subject) << ',' << (e.honest_now ? 1 : 0) << '\n';
  }
}

std::vector<MetricEvent> read_log_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw std::runtime_error("metrics log: missing header");
  std::vector<MetricEvent> log;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 9) throw std::runtime_error("metrics log: expected 9 fields");
    MetricEvent e;
    e.time = parse_field<double>(f[0]);
    e.kind = static_cast<MetricKind>(parse_field<int>(f[1]));
    e.uid = parse_field<std::uint64_t>(f[2]);
    e.delay = parse_field<double>(f[3]);
    e.bits = parse_field<std::uint64_t>(f[4]);
    e.reason = static_cast<DropReason>(parse_field<int>(f[5]));
    e.control = static_cast<routing::PacketKind>(parse_field<int>(f[6]));
    e.subject = node_id(parse_field<std::uint32_t>(f[7]));
    e.honest_now = parse_field<int>(f[8]) != 0;
    log.push_back(e);
  }
  return log;
}

}  // namespace manet::metrics
