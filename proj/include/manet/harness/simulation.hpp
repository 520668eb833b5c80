#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "manet/adversary/adversary.hpp"
#include "manet/crypto/mac.hpp"
#include "manet/harness/scenario.hpp"
#include "manet/metrics/metrics.hpp"
#include "manet/routing/routing.hpp"
#include "manet/sim/channel.hpp"
#include "manet/sim/kernel.hpp"
#include "manet/sim/mobility.hpp"
#include "manet/trust/trust_table.hpp"
#include "manet/trust/watchdog.hpp"

namespace manet::harness {

class Simulation;

/// One mobile node: routing agent, trust table, watchdog and (optionally) an
/// adversary interceptor, glued to the shared radio.
class Node final : public routing::RoutingHost, public trust::TrustListener {
 public:
  Node(Simulation& sim, NodeId id);
  ~Node() override;

  NodeId id() const noexcept { return id_; }
  routing::RoutingAgent& agent() noexcept { return *agent_; }
  const routing::RoutingAgent& agent() const noexcept { return *agent_; }
  /// Null in Baseline mode.
  trust::TrustTable* trust() noexcept { return trust_ ? &*trust_ : nullptr; }
  const trust::TrustTable* trust() const noexcept { return trust_ ? &*trust_ : nullptr; }
  adversary::Interceptor* interceptor() noexcept { return interceptor_.get(); }
  const trust::Watchdog& watchdog() const noexcept { return watchdog_; }

  void set_interceptor(std::unique_ptr<adversary::Interceptor> interceptor);

  /// Radio entry point.
  void on_frame(const routing::Packet& packet, bool promiscuous);
  /// Application send.
  void originate(NodeId dest, std::vector<std::uint8_t> payload);
  /// Periodic REPORT broadcast (share_reports).
  void share_reports();

  // RoutingHost
  NodeId self() const override { return id_; }
  SimTime now() const override;
  std::size_t node_count() const override;
  void send(NodeId to, routing::Packet packet, bool retag) override;
  void send_data(NodeId next_hop, routing::Packet packet) override;
  bool link_up(NodeId neighbor) const override;
  bool admissible(NodeId subject) override;
  bool intercept(routing::Packet& data) override;
  void schedule(SimTime delay, std::function<void()> action) override;
  std::uint64_t next_uid() override;
  void deliver(const routing::Packet& data) override;
  void data_dropped(const routing::Packet& data, metrics::DropReason reason) override;
  void discovery_started() override;
  void discovery_succeeded() override;

  // TrustListener
  void on_warn(NodeId accused, double evidence_rating) override;
  void on_blacklisted(NodeId subject, SimTime probation_end, bool reintegration) override;
  void on_probation(NodeId subject, SimTime window_end, std::uint32_t epoch) override;
  void on_event(const trust::TrustEvent& event) override;

 private:
  bool secured() const noexcept { return trust_.has_value(); }
  void sign(routing::Packet& packet, bool retag);
  void watch(const routing::Packet& packet);
  void watchdog_timeout(NodeId subject, std::uint64_t uid);
  void attribute_failure(const routing::Packet& packet);
  void handle_report(const routing::Packet& packet);
  void handle_warn(const routing::Packet& packet);

  Simulation& sim_;
  NodeId id_;
  std::unique_ptr<routing::RoutingAgent> agent_;
  std::optional<trust::TrustTable> trust_;
  trust::Watchdog watchdog_;
  std::unique_ptr<adversary::Interceptor> interceptor_;
  crypto::Key outsider_key_{};
};

/// Everything a finished run produced.
struct RunResult {
  std::uint64_t seed = 0;
  SecurityMode mode = SecurityMode::Baseline;
  routing::Protocol protocol = routing::Protocol::Aodv;
  metrics::MetricsReport report;
  std::vector<metrics::MetricEvent> metric_log;
  std::vector<trust::TrustEvent> trust_log;
  std::uint64_t trace_hash = 0;
  sim::ChannelStats channel;
};

/// A single seeded run of one scenario in one security mode. Strictly
/// sequential; independent instances share nothing.
class Simulation {
 public:
  Simulation(const ScenarioConfig& config, SecurityMode mode, std::uint64_t seed);
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Runs to config.duration (or `until`) and returns the results so far.
  RunResult run(std::optional<SimTime> until = std::nullopt);

  const ScenarioConfig& config() const noexcept { return config_; }
  SecurityMode mode() const noexcept { return mode_; }
  std::uint64_t seed() const noexcept { return seed_; }

  sim::Simulator& kernel() noexcept { return kernel_; }
  sim::Mobility& mobility() noexcept { return mobility_; }
  sim::Channel& channel() noexcept { return channel_; }
  metrics::MetricsCollector& metrics() noexcept { return metrics_; }
  const crypto::KeyRing& keys() const noexcept { return keys_; }
  Node& node(NodeId id) { return *nodes_.at(index(id)); }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  const std::vector<trust::TrustEvent>& trust_log() const noexcept { return trust_log_; }

  /// Adversary profile active and not repented at `now`.
  bool malicious(NodeId node, SimTime now) const;
  std::uint64_t next_uid() noexcept { return ++uid_counter_; }

  /// Called by Node::deliver; false for a duplicate delivery.
  bool mark_delivered(std::uint64_t uid) { return delivered_.insert(uid).second; }
  void log_trust(const trust::TrustEvent& event) { trust_log_.push_back(event); }

  /// Test hook: sees every DATA transmission before it hits the radio.
  using SendObserver = std::function<void(const Node& sender, NodeId next_hop, const routing::Packet& data)>;
  void set_send_observer(SendObserver observer) { send_observer_ = std::move(observer); }
  void observe_send(const Node& sender, NodeId next_hop, const routing::Packet& data) const {
    if (send_observer_) send_observer_(sender, next_hop, data);
  }

 private:
  void schedule_flow(std::size_t flow, std::uint32_t k);
  void schedule_report_round(NodeId node, SimTime at);

  ScenarioConfig config_;
  SecurityMode mode_;
  std::uint64_t seed_;
  sim::Simulator kernel_;
  sim::Mobility mobility_;
  sim::Channel channel_;
  metrics::MetricsCollector metrics_;
  crypto::KeyRing keys_;
  std::vector<std::unique_ptr<Node>> nodes_;
  std::vector<sim::Rng> traffic_rngs_;
  std::vector<trust::TrustEvent> trust_log_;
  std::set<std::uint64_t> delivered_;
  std::uint64_t uid_counter_ = 0;
  SendObserver send_observer_;
};

}  // namespace manet::harness
