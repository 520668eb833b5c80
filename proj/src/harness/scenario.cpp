#include "manet/harness/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace manet::harness {
namespace {

using nlohmann::json;

std::optional<std::size_t> line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

/// Walks one JSON object, remembering which keys were consumed so leftovers
/// can be rejected.
class ObjectReader {
 public:
  ObjectReader(const json& object, std::string path, std::string_view text)
      : object_(object), path_(std::move(path)), text_(text) {
    if (!object_.is_object()) throw ParseError(path_, "expected an object");
  }

  ~ObjectReader() = default;

  std::string field(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const json* get(std::string_view key) {
    seen_.emplace_back(key);
    const auto it = object_.find(std::string(key));
    return it == object_.end() ? nullptr : &*it;
  }

  double number(std::string_view key, double fallback) {
    const json* v = get(key);
    if (v == nullptr) return fallback;
    if (!v->is_number()) throw ParseError(field(key), "expected a number");
    return v->get<double>();
  }

  std::optional<double> optional_number(std::string_view key) {
    const json* v = get(key);
    if (v == nullptr || v->is_null()) return std::nullopt;
    if (!v->is_number()) throw ParseError(field(key), "expected a number");
    return v->get<double>();
  }

  std::uint64_t integer(std::string_view key, std::uint64_t fallback) {
    const json* v = get(key);
    if (v == nullptr) return fallback;
    if (!v->is_number_integer() || (v->is_number_integer() && v->get<std::int64_t>() < 0)) {
      throw ParseError(field(key), "expected a nonnegative integer");
    }
    return v->get<std::uint64_t>();
  }

  bool boolean(std::string_view key, bool fallback) {
    const json* v = get(key);
    if (v == nullptr) return fallback;
    if (!v->is_boolean()) throw ParseError(field(key), "expected true or false");
    return v->get<bool>();
  }

  std::string string(std::string_view key, std::string fallback) {
    const json* v = get(key);
    if (v == nullptr) return fallback;
    if (!v->is_string()) throw ParseError(field(key), "expected a string");
    return v->get<std::string>();
  }

  /// Reject keys nobody asked for.
  void finish() const {
    for (const auto& [key, value] : object_.items()) {
      if (std::find(seen_.begin(), seen_.end(), key) != seen_.end()) continue;
      std::optional<std::size_t> line;
      if (const auto at = text_.find("\"" + key + "\""); at != std::string_view::npos) {
        line = line_of_offset(text_, at);
      }
      throw ParseError(field(key), "unknown key '" + key + "'", line);
    }
  }

 private:
  const json& object_;
  std::string path_;
  std::string_view text_;
  std::vector<std::string> seen_;
};

SecurityMode parse_mode(const json& v, const std::string& field) {
  if (!v.is_string()) throw ParseError(field, "expected \"Baseline\" or \"TripleFactor\"");
  const auto s = v.get<std::string>();
  if (s == "Baseline") return SecurityMode::Baseline;
  if (s == "TripleFactor") return SecurityMode::TripleFactor;
  throw ParseError(field, "unknown security mode '" + s + "'");
}

NodeId node_field(ObjectReader& r, std::string_view key) {
  if (r.get(key) == nullptr) throw ParseError(r.field(key), "required");
  return node_id(static_cast<std::uint32_t>(r.integer(key, 0)));
}

void read_document(const json& doc, std::string_view text, ScenarioConfig& c) {
  ObjectReader top(doc, "", text);
  c.name = top.string("name", c.name);

  if (const json* a = top.get("arena")) {
    ObjectReader r(*a, "arena", text);
    c.arena.width = r.number("width", c.arena.width);
    c.arena.height = r.number("height", c.arena.height);
    r.finish();
  }
  c.node_count = static_cast<std::uint32_t>(top.integer("node_count", c.node_count));

  if (const json* p = top.get("positions")) {
    if (!p->is_array()) throw ParseError("positions", "expected an array of [x, y]");
    for (std::size_t i = 0; i < p->size(); ++i) {
      const auto& xy = (*p)[i];
      if (!xy.is_array() || xy.size() != 2 || !xy[0].is_number() || !xy[1].is_number()) {
        throw ParseError("positions." + std::to_string(i), "expected [x, y]");
      }
      c.positions.push_back({xy[0].get<double>(), xy[1].get<double>()});
    }
  }

  if (const json* radio = top.get("radio")) {
    ObjectReader r(*radio, "radio", text);
    c.radio.range = r.number("range", c.radio.range);
    c.radio.frame_loss_prob = r.number("frame_loss_prob", c.radio.frame_loss_prob);
    c.radio.per_hop_latency = r.number("per_hop_latency", c.radio.per_hop_latency);
    r.finish();
  }

  if (const json* m = top.get("mobility")) {
    ObjectReader r(*m, "mobility", text);
    c.mobility.speed_min = r.number("speed_min", c.mobility.speed_min);
    c.mobility.speed_max = r.number("speed_max", c.mobility.speed_max);
    c.mobility.pause_time = r.number("pause_time", c.mobility.pause_time);
    c.mobility.step_interval = r.number("step_interval", c.mobility.step_interval);
    r.finish();
  }

  const auto protocol = top.string("protocol", "AODV");
  if (protocol == "AODV") {
    c.protocol = routing::Protocol::Aodv;
  } else if (protocol == "DSR") {
    c.protocol = routing::Protocol::Dsr;
  } else {
    throw ParseError("protocol", "expected \"AODV\" or \"DSR\", got '" + protocol + "'");
  }

  if (const json* modes = top.get("security_mode")) {
    c.security_modes.clear();
    if (modes->is_array()) {
      for (std::size_t i = 0; i < modes->size(); ++i) {
        c.security_modes.push_back(parse_mode((*modes)[i], "security_mode." + std::to_string(i)));
      }
    } else {
      c.security_modes.push_back(parse_mode(*modes, "security_mode"));
    }
  }

  if (const json* t = top.get("trust")) {
    ObjectReader r(*t, "trust", text);
    auto& p = c.trust_params;
    p.alpha = r.number("alpha", p.alpha);
    p.t_black = r.number("t_black", p.t_black);
    p.t_ok = r.number("t_ok", p.t_ok);
    p.deviation_delta = r.number("deviation_delta", p.deviation_delta);
    p.probation_period = r.number("probation_period", p.probation_period);
    p.report_interval = r.number("report_interval", p.report_interval);
    p.watchdog_timeout = r.number("watchdog_timeout", p.watchdog_timeout);
    p.report_ttl = r.number("report_ttl", p.report_ttl);
    p.probation_window = r.optional_number("probation_window");
    p.idle_prune_after = r.number("idle_prune_after", p.idle_prune_after);
    p.filter_min_observations = static_cast<std::uint32_t>(r.integer("filter_min_observations", p.filter_min_observations));
    p.reintegration = r.boolean("reintegration", p.reintegration);
    r.finish();
  }

  if (const json* rt = top.get("routing")) {
    ObjectReader r(*rt, "routing", text);
    auto& p = c.routing_params;
    p.active_route_lifetime = r.number("active_route_lifetime", p.active_route_lifetime);
    p.rreq_retry_wait = r.number("rreq_retry_wait", p.rreq_retry_wait);
    p.max_discovery_retries = static_cast<std::uint32_t>(r.integer("max_discovery_retries", p.max_discovery_retries));
    p.buffer_capacity = r.integer("buffer_capacity", p.buffer_capacity);
    p.route_cache_capacity = r.integer("route_cache_capacity", p.route_cache_capacity);
    p.rreq_seen_capacity = r.integer("rreq_seen_capacity", p.rreq_seen_capacity);
    r.finish();
  }

  if (const json* flows = top.get("traffic")) {
    if (!flows->is_array()) throw ParseError("traffic", "expected an array");
    for (std::size_t i = 0; i < flows->size(); ++i) {
      ObjectReader r((*flows)[i], "traffic." + std::to_string(i), text);
      TrafficFlow f;
      f.src = node_field(r, "src");
      f.dst = node_field(r, "dst");
      f.start_at = r.number("start_at", f.start_at);
      f.interval = r.number("interval", f.interval);
      f.payload_bytes = static_cast<std::uint32_t>(r.integer("payload_bytes", f.payload_bytes));
      f.count = static_cast<std::uint32_t>(r.integer("count", f.count));
      r.finish();
      c.traffic.push_back(f);
    }
  }

  if (const json* advs = top.get("adversaries")) {
    if (!advs->is_array()) throw ParseError("adversaries", "expected an array");
    for (std::size_t i = 0; i < advs->size(); ++i) {
      const std::string path = "adversaries." + std::to_string(i);
      ObjectReader r((*advs)[i], path, text);
      adversary::AdversaryProfile a;
      a.node = node_field(r, "node");
      const auto kind = r.string("kind", "");
      const auto parsed = adversary::parse_kind(kind);
      if (!parsed) throw ParseError(path + ".kind", "unknown adversary kind '" + kind + "'");
      a.kind = *parsed;
      if (const json* params = r.get("params")) {
        ObjectReader pr(*params, path + ".params", text);
        a.drop_prob = pr.number("drop_prob", a.drop_prob);
        a.tamper_prob = pr.number("tamper_prob", a.tamper_prob);
        pr.finish();
      }
      a.onset_at = r.number("onset_at", a.onset_at);
      a.repent_at = r.optional_number("repent_at");
      r.finish();
      c.adversaries.push_back(a);
    }
  }

  c.duration = top.number("duration", c.duration);

  if (const json* seeds = top.get("seeds")) {
    if (!seeds->is_array()) throw ParseError("seeds", "expected an array of integers");
    for (std::size_t i = 0; i < seeds->size(); ++i) {
      if (!(*seeds)[i].is_number_unsigned()) throw ParseError("seeds." + std::to_string(i), "expected a nonnegative integer");
      c.seeds.push_back((*seeds)[i].get<std::uint64_t>());
    }
  } else {
    for (std::uint64_t s = 1; s <= 20; ++s) c.seeds.push_back(s);
  }
  top.finish();
}

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ValidationError(field, message);
}

bool is_prob(double p) { return p >= 0.0 && p <= 1.0; }

void apply_override(json& doc, const Override& o) {
  json* cursor = &doc;
  std::string_view rest = o.path;
  while (true) {
    const auto dot = rest.find('.');
    const std::string segment(rest.substr(0, dot));
    if (segment.empty()) throw ParseError(o.path, "empty path segment in override");
    const bool numeric = std::all_of(segment.begin(), segment.end(), [](unsigned char ch) { return std::isdigit(ch); });
    json* next = nullptr;
    if (cursor->is_array() && numeric) {
      const auto i = std::stoul(segment);
      if (i >= cursor->size()) throw ParseError(o.path, "index " + segment + " out of range");
      next = &(*cursor)[i];
    } else {
      if (cursor->is_null()) *cursor = json::object();
      if (!cursor->is_object()) throw ParseError(o.path, "cannot descend into '" + segment + "'");
      next = &(*cursor)[segment];
    }
    cursor = next;
    if (dot == std::string_view::npos) break;
    rest = rest.substr(dot + 1);
  }
  json value = json::parse(o.value, nullptr, false);
  if (value.is_discarded()) value = o.value;
  *cursor = std::move(value);
}

}  // namespace

std::string_view to_string(SecurityMode mode) noexcept {
  return mode == SecurityMode::Baseline ? "Baseline" : "TripleFactor";
}

ParseError::ParseError(std::string field, const std::string& message, std::optional<std::size_t> line)
    : std::runtime_error((line ? "line " + std::to_string(*line) + ": " : std::string()) +
                         (field.empty() ? std::string() : field + ": ") + message),
      field_(std::move(field)),
      line_(line) {}

ValidationError::ValidationError(std::string field, const std::string& message)
    : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

Override parse_override(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ParseError("--override", "expected key.path=value, got '" + std::string(text) + "'");
  }
  return {std::string(text.substr(0, eq)), std::string(text.substr(eq + 1))};
}

ScenarioConfig parse_scenario_text(std::string_view text, const std::vector<Override>& overrides) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ParseError("", e.what(), line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1));
  }
  for (const auto& o : overrides) apply_override(doc, o);
  ScenarioConfig config;
  read_document(doc, text, config);
  validate(config);
  return config;
}

ScenarioConfig parse_scenario(const std::filesystem::path& path, const std::vector<Override>& overrides) {
  std::ifstream in(path);
  if (!in) throw ParseError("", "cannot open scenario file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), overrides);
}

void validate(const ScenarioConfig& c) {
  require(c.node_count >= 2, "node_count", "must be at least 2");
  require(c.duration > 0.0, "duration", "must be positive");
  require(c.arena.width > 0.0 && c.arena.height > 0.0, "arena", "width and height must be positive");
  require(!c.seeds.empty(), "seeds", "at least one seed is required");
  require(!c.security_modes.empty(), "security_mode", "at least one mode is required");
  if (!c.positions.empty()) {
    require(c.positions.size() == c.node_count, "positions", "must list exactly node_count points");
    for (std::size_t i = 0; i < c.positions.size(); ++i) {
      require(c.arena.contains(c.positions[i]), "positions." + std::to_string(i), "outside the arena");
    }
  }

  require(c.radio.range > 0.0, "radio.range", "must be positive");
  require(is_prob(c.radio.frame_loss_prob), "radio.frame_loss_prob", "must be in [0, 1]");
  require(c.radio.per_hop_latency > 0.0, "radio.per_hop_latency", "must be positive");

  require(c.mobility.speed_min >= 0.0, "mobility.speed_min", "must be nonnegative");
  require(c.mobility.speed_max >= c.mobility.speed_min, "mobility.speed_max", "must be >= speed_min");
  require(c.mobility.pause_time >= 0.0, "mobility.pause_time", "must be nonnegative");
  require(c.mobility.step_interval > 0.0, "mobility.step_interval", "must be positive");

  const auto& t = c.trust_params;
  require(t.alpha > 0.0 && t.alpha <= 1.0, "trust.alpha", "must be in (0, 1]");
  require(t.t_black >= 0.0 && t.t_black < t.t_ok && t.t_ok <= 1.0, "trust.t_black",
          "thresholds must satisfy 0 <= t_black < t_ok <= 1");
  require(t.deviation_delta >= 0.0, "trust.deviation_delta", "must be nonnegative");
  require(t.probation_period > 0.0, "trust.probation_period", "must be positive");
  require(t.report_interval > 0.0, "trust.report_interval", "must be positive");
  require(t.watchdog_timeout > 0.0, "trust.watchdog_timeout", "must be positive");
  require(t.report_ttl > 0.0, "trust.report_ttl", "must be positive");
  require(!t.probation_window || *t.probation_window > 0.0, "trust.probation_window", "must be positive");

  const auto& r = c.routing_params;
  require(r.active_route_lifetime > 0.0, "routing.active_route_lifetime", "must be positive");
  require(r.rreq_retry_wait > 0.0, "routing.rreq_retry_wait", "must be positive");
  require(r.buffer_capacity > 0, "routing.buffer_capacity", "must be positive");
  require(r.route_cache_capacity > 0, "routing.route_cache_capacity", "must be positive");
  require(r.rreq_seen_capacity > 0, "routing.rreq_seen_capacity", "must be positive");

  for (std::size_t i = 0; i < c.traffic.size(); ++i) {
    const auto& f = c.traffic[i];
    const std::string p = "traffic." + std::to_string(i);
    require(index(f.src) < c.node_count, p + ".src", "not a valid node id");
    require(index(f.dst) < c.node_count, p + ".dst", "not a valid node id");
    require(f.src != f.dst, p + ".dst", "must differ from src");
    require(f.start_at >= 0.0, p + ".start_at", "must be nonnegative");
    require(f.interval > 0.0, p + ".interval", "must be positive");
    require(f.payload_bytes > 0, p + ".payload_bytes", "must be positive");
    require(f.count > 0, p + ".count", "must be positive");
  }

  for (std::size_t i = 0; i < c.adversaries.size(); ++i) {
    const auto& a = c.adversaries[i];
    const std::string p = "adversaries." + std::to_string(i);
    require(index(a.node) < c.node_count, p + ".node", "not a valid node id");
    require(is_prob(a.drop_prob), p + ".params.drop_prob", "drop_prob must be in [0, 1]");
    require(is_prob(a.tamper_prob), p + ".params.tamper_prob", "tamper_prob must be in [0, 1]");
    require(a.onset_at >= 0.0, p + ".onset_at", "must be nonnegative");
    require(!a.repent_at || a.onset_at < *a.repent_at, p + ".repent_at", "must be after onset_at");
    for (std::size_t j = 0; j < i; ++j) {
      require(c.adversaries[j].node != a.node, p + ".node", "node already has an adversary profile");
    }
  }
}

}  // namespace manet::harness
