#include "manet/harness/simulation.hpp"

#include "manet/routing/aodv.hpp"
#include "manet/routing/dsr.hpp"

namespace manet::harness {

using routing::Packet;
using routing::PacketKind;

// ---------------------------------------------------------------- Node

Node::Node(Simulation& sim, NodeId id) : sim_(sim), id_(id) {
  const auto& cfg = sim.config();
  if (cfg.protocol == routing::Protocol::Aodv) {
    agent_ = std::make_unique<routing::AodvAgent>(*this, cfg.routing_params);
  } else {
    agent_ = std::make_unique<routing::DsrAgent>(*this, cfg.routing_params);
  }
  if (sim.mode() == SecurityMode::TripleFactor) trust_.emplace(id, cfg.trust_params, this);
}

Node::~Node() = default;

void Node::set_interceptor(std::unique_ptr<adversary::Interceptor> interceptor) {
  interceptor_ = std::move(interceptor);
  if (interceptor_ && interceptor_->profile().kind == adversary::AdversaryKind::Outsider) {
    outsider_key_ = crypto::KeyRing::outsider_key(sim_.seed(), id_);
  }
}

SimTime Node::now() const { return sim_.kernel().now(); }
std::size_t Node::node_count() const { return sim_.node_count(); }
std::uint64_t Node::next_uid() { return sim_.next_uid(); }

void Node::schedule(SimTime delay, std::function<void()> action) {
  sim_.kernel().schedule_in(delay, sim::EventKind::Timer, id_, std::move(action));
}

bool Node::link_up(NodeId neighbor) const { return sim_.channel().in_range(id_, neighbor); }

void Node::sign(Packet& packet, bool retag) {
  if (!secured()) return;
  if (interceptor_ && interceptor_->signs_with_outsider_key(now())) {
    packet.mac_tag = crypto::tag_packet(outsider_key_, packet);
  } else if (retag) {
    packet.mac_tag = crypto::tag_packet(sim_.keys().network_key, packet);
  }
}

void Node::send(NodeId to, Packet packet, bool retag) {
  packet.prev_hop = id_;
  sign(packet, retag);
  if (routing::is_control(packet.kind)) sim_.metrics().control_tx(packet.kind, now());
  sim_.channel().transmit_frame(id_, to, packet);
}

void Node::send_data(NodeId next_hop, Packet packet) {
  packet.prev_hop = id_;
  sign(packet, packet.origin == id_);
  if (secured() && next_hop != packet.target) {
    const auto uid = packet.uid;
    const auto handle = sim_.kernel().schedule_in(sim_.config().trust_params.watchdog_timeout, sim::EventKind::Timer,
                                                  id_, [this, next_hop, uid] { watchdog_timeout(next_hop, uid); });
    watchdog_.expect(next_hop, uid, handle);
  }
  sim_.observe_send(*this, next_hop, packet);
  sim_.channel().transmit_frame(id_, next_hop, packet);
}

bool Node::admissible(NodeId subject) {
  if (!secured()) return true;
  if (trust_->admissible(subject)) return true;
  sim_.metrics().path_rejection(now());
  return false;
}

bool Node::intercept(Packet& data) {
  if (!interceptor_) return true;
  const auto action = interceptor_->on_forward(data, now());
  if (action == adversary::ForwardAction::Drop) {
    sim_.metrics().dropped(data.uid, now(), metrics::DropReason::Adversary);
    return false;
  }
  return true;
}

void Node::deliver(const Packet& data) {
  if (!sim_.mark_delivered(data.uid)) return;
  sim_.metrics().delivered(data.uid, now(), now() - data.issued_at, 8ULL * data.payload.size());
}

void Node::data_dropped(const Packet& data, metrics::DropReason reason) {
  sim_.metrics().dropped(data.uid, now(), reason);
}

void Node::discovery_started() { sim_.metrics().discovery_started(now()); }
void Node::discovery_succeeded() { sim_.metrics().discovery_succeeded(now()); }

void Node::originate(NodeId dest, std::vector<std::uint8_t> payload) {
  Packet data;
  data.kind = PacketKind::Data;
  data.origin = id_;
  data.target = dest;
  data.prev_hop = id_;
  data.uid = next_uid();
  data.issued_at = now();
  data.payload = std::move(payload);
  sim_.metrics().originated(data.uid, now());
  agent_->originate_data(std::move(data));
}

void Node::on_frame(const Packet& packet, bool promiscuous) {
  if (secured()) watch(packet);
  if (promiscuous) return;
  if (secured() && !crypto::verify_packet(sim_.keys().network_key, packet)) {
    attribute_failure(packet);
    return;
  }
  switch (packet.kind) {
    case PacketKind::Report:
      if (secured()) handle_report(packet);
      break;
    case PacketKind::Warn:
      if (secured()) handle_warn(packet);
      break;
    default:
      agent_->receive(packet);
  }
}

void Node::attribute_failure(const Packet& packet) {
  if (packet.kind == PacketKind::Data) sim_.metrics().dropped(packet.uid, now(), metrics::DropReason::MacFailure);
  trust_->observe_misbehavior(packet.prev_hop, trust::MisbehaviorCause::MacFailure, now());
}

void Node::watch(const Packet& packet) {
  const NodeId sender = packet.prev_hop;
  if (packet.kind == PacketKind::Data) {
    const auto [outcome, handle] = watchdog_.saw_forward(sender, packet.uid);
    if (outcome != trust::Watchdog::Outcome::Forwarded) return;
    sim_.kernel().cancel(handle);
    if (crypto::verify_packet(sim_.keys().network_key, packet)) {
      trust_->observe_forward(sender, now());
    } else {
      trust_->observe_misbehavior(sender, trust::MisbehaviorCause::MacFailure, now());
    }
  } else if (packet.kind == PacketKind::Rerr) {
    const auto [outcome, handle] = watchdog_.saw_excuse(sender, packet.about_uid);
    if (outcome == trust::Watchdog::Outcome::Excused) sim_.kernel().cancel(handle);
  }
}

void Node::watchdog_timeout(NodeId subject, std::uint64_t uid) {
  if (!watchdog_.expire(subject, uid)) return;
  if (link_up(subject)) {
    trust_->observe_misbehavior(subject, trust::MisbehaviorCause::NoForward, now());
  } else {
    agent_->purge_link(subject);
  }
}

void Node::handle_report(const Packet& packet) {
  const NodeId reporter = packet.origin;
  if (reporter == id_ || !trust_->admissible(reporter)) return;
  for (const auto& entry : packet.reports) {
    if (entry.subject == id_) continue;
    const trust::ReputationReport report{reporter, entry.subject, entry.rating, packet.issued_at};
    trust_->merge_reports(entry.subject, std::span(&report, 1), now());
  }
}

void Node::handle_warn(const Packet& packet) {
  const NodeId accuser = packet.origin;
  const NodeId accused = packet.aux;
  if (accuser == id_ || accused == id_ || packet.reports.empty()) return;
  if (!trust_->admissible(accuser)) return;
  const trust::ReputationReport report{accuser, accused, packet.reports.front().rating, packet.issued_at};
  trust_->merge_reports(accused, std::span(&report, 1), now());
}

void Node::share_reports() {
  trust_->prune_idle(now());
  auto entries = trust_->report_entries();
  if (entries.empty()) return;
  Packet report;
  report.kind = PacketKind::Report;
  report.origin = id_;
  report.target = kBroadcast;
  report.uid = next_uid();
  report.issued_at = now();
  report.reports = std::move(entries);
  send(kBroadcast, std::move(report), true);
}

void Node::on_warn(NodeId accused, double evidence_rating) {
  Packet warn;
  warn.kind = PacketKind::Warn;
  warn.origin = id_;
  warn.target = kBroadcast;
  warn.aux = accused;
  warn.uid = next_uid();
  warn.issued_at = now();
  warn.reports = {{accused, evidence_rating}};
  send(kBroadcast, std::move(warn), true);
}

void Node::on_blacklisted(NodeId subject, SimTime probation_end, bool reintegration) {
  sim_.metrics().blacklist_transition(subject, !sim_.malicious(subject, now()), now());
  agent_->purge_node(subject);
  if (!reintegration) return;
  sim_.kernel().schedule(sim::Event{probation_end, sim::EventKind::ProbationEnd, id_, [this, subject] {
                                      trust_->reintegrate(subject, now());
                                    }});
}

void Node::on_probation(NodeId subject, SimTime window_end, std::uint32_t epoch) {
  sim_.kernel().schedule(sim::Event{window_end, sim::EventKind::Timer, id_, [this, subject, epoch] {
                                      trust_->end_probation_window(subject, epoch, now());
                                    }});
}

void Node::on_event(const trust::TrustEvent& event) { sim_.log_trust(event); }

// ---------------------------------------------------------- Simulation

Simulation::Simulation(const ScenarioConfig& config, SecurityMode mode, std::uint64_t seed)
    : config_(config),
      mode_(mode),
      seed_(seed),
      mobility_(config.arena, config.mobility, config.node_count, seed, config.positions),
      channel_(kernel_, mobility_, config.radio, seed),
      keys_(crypto::KeyRing::from_seed(seed)) {
  nodes_.reserve(config_.node_count);
  for (std::uint32_t i = 0; i < config_.node_count; ++i) {
    nodes_.push_back(std::make_unique<Node>(*this, node_id(i)));
  }
  channel_.set_receiver([this](NodeId rx, const Packet& p, bool promiscuous) { node(rx).on_frame(p, promiscuous); });
  channel_.set_loss_observer([this](NodeId, NodeId, const Packet& p) {
    if (p.kind == PacketKind::Data) metrics_.dropped(p.uid, kernel_.now(), metrics::DropReason::Loss);
  });

  for (const auto& profile : config_.adversaries) {
    auto interceptor = std::make_unique<adversary::Interceptor>(profile, seed_);
    adversary::schedule_repentance(kernel_, *interceptor);
    node(profile.node).set_interceptor(std::move(interceptor));
  }

  mobility_.start(kernel_);

  for (std::size_t f = 0; f < config_.traffic.size(); ++f) {
    traffic_rngs_.emplace_back(sim::derive_seed(seed_, sim::Stream::Traffic, f));
  }
  for (std::size_t f = 0; f < config_.traffic.size(); ++f) schedule_flow(f, 0);

  if (mode_ == SecurityMode::TripleFactor) {
    for (std::uint32_t i = 0; i < config_.node_count; ++i) {
      schedule_report_round(node_id(i), config_.trust_params.report_interval);
    }
  }
}

Simulation::~Simulation() = default;

void Simulation::schedule_flow(std::size_t flow, std::uint32_t k) {
  const auto& f = config_.traffic[flow];
  if (k >= f.count) return;
  const SimTime at = f.start_at + f.interval * static_cast<double>(k);
  if (at > config_.duration) return;
  kernel_.schedule(sim::Event{at, sim::EventKind::AppSend, f.src, [this, flow, k] {
                                const auto& fl = config_.traffic[flow];
                                std::vector<std::uint8_t> payload(fl.payload_bytes);
                                auto& rng = traffic_rngs_[flow];
                                for (auto& b : payload) b = static_cast<std::uint8_t>(rng.next_u64());
                                node(fl.src).originate(fl.dst, std::move(payload));
                                schedule_flow(flow, k + 1);
                              }});
}

void Simulation::schedule_report_round(NodeId id, SimTime at) {
  if (at > config_.duration) return;
  kernel_.schedule(sim::Event{at, sim::EventKind::ReportRound, id, [this, id] {
                                node(id).share_reports();
                                schedule_report_round(id, kernel_.now() + config_.trust_params.report_interval);
                              }});
}

bool Simulation::malicious(NodeId id, SimTime now) const {
  const auto* interceptor = nodes_.at(index(id))->interceptor();
  return interceptor != nullptr && interceptor->malicious_at(now);
}

RunResult Simulation::run(std::optional<SimTime> until) {
  kernel_.run_until(until.value_or(config_.duration));
  RunResult result;
  result.seed = seed_;
  result.mode = mode_;
  result.protocol = config_.protocol;
  result.report = metrics_.finalize(config_.duration);
  result.metric_log = metrics_.log();
  result.trust_log = trust_log_;
  result.trace_hash = kernel_.trace_hash();
  result.channel = channel_.stats();
  return result;
}

}  // namespace manet::harness
