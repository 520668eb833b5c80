#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "builders.hpp"
#include "manet/harness/simulation.hpp"
#include "manet/routing/aodv.hpp"
#include "manet/routing/dsr.hpp"

using namespace manet;
using namespace manet::routing;

namespace {

const NodeId A = node_id(0);
const NodeId B = node_id(1);
const NodeId C = node_id(2);
const NodeId D = node_id(3);
const NodeId E = node_id(4);

/// Records everything an agent asks of its node; time and links are scripted.
struct FakeHost final : RoutingHost {
  struct Sent {
    NodeId to;
    Packet packet;
    bool data;
  };

  NodeId id;
  SimTime clock = 0.0;
  std::size_t nodes = 8;
  std::set<NodeId> links;
  std::set<NodeId> blacklisted;
  std::vector<Sent> sent;
  std::vector<std::pair<SimTime, std::function<void()>>> timers;
  std::vector<std::pair<std::uint64_t, metrics::DropReason>> drops;
  std::vector<std::uint64_t> delivered;
  int rejections = 0;
  int discoveries = 0;
  int successes = 0;
  std::uint64_t uids = 1000;

  explicit FakeHost(NodeId self_id) : id(self_id) {}

  NodeId self() const override { return id; }
  SimTime now() const override { return clock; }
  std::size_t node_count() const override { return nodes; }
  void send(NodeId to, Packet p, bool) override {
    p.prev_hop = id;
    sent.push_back({to, std::move(p), false});
  }
  void send_data(NodeId to, Packet p) override {
    p.prev_hop = id;
    sent.push_back({to, std::move(p), true});
  }
  bool link_up(NodeId n) const override { return links.contains(n); }
  bool admissible(NodeId n) override {
    if (!blacklisted.contains(n)) return true;
    ++rejections;
    return false;
  }
  bool intercept(Packet&) override { return true; }
  void schedule(SimTime delay, std::function<void()> fn) override { timers.emplace_back(clock + delay, std::move(fn)); }
  std::uint64_t next_uid() override { return ++uids; }
  void deliver(const Packet& p) override { delivered.push_back(p.uid); }
  void data_dropped(const Packet& p, metrics::DropReason r) override { drops.emplace_back(p.uid, r); }
  void discovery_started() override { ++discoveries; }
  void discovery_succeeded() override { ++successes; }

  /// Fire timers due by `t` in order.
  void advance(SimTime t) {
    clock = t;
    while (true) {
      auto it = std::min_element(timers.begin(), timers.end(), [](auto& a, auto& b) { return a.first < b.first; });
      if (it == timers.end() || it->first > t) break;
      auto fn = std::move(it->second);
      timers.erase(it);
      fn();
    }
  }

  std::vector<Sent> take() { return std::exchange(sent, {}); }
};

Packet data(NodeId origin, NodeId target, std::uint64_t uid) {
  Packet p;
  p.kind = PacketKind::Data;
  p.origin = origin;
  p.target = target;
  p.prev_hop = origin;
  p.uid = uid;
  return p;
}

Packet rreq(NodeId origin, NodeId target, std::uint32_t id, NodeId prev, std::uint32_t hops,
            std::vector<NodeId> route = {}) {
  Packet p;
  p.kind = PacketKind::Rreq;
  p.origin = origin;
  p.target = target;
  p.seq_or_id = id;
  p.prev_hop = prev;
  p.hop_count = hops;
  p.source_route = std::move(route);
  return p;
}

Packet rrep(NodeId dest, NodeId requester, std::uint32_t seq, NodeId prev, std::uint32_t hops) {
  Packet p;
  p.kind = PacketKind::Rrep;
  p.origin = dest;
  p.target = requester;
  p.seq_or_id = seq;
  p.prev_hop = prev;
  p.hop_count = hops;
  return p;
}

std::vector<NodeId> ids(std::initializer_list<NodeId> l) { return l; }

}  // namespace

TEST_CASE("select_route prefers fewer hops, then the smaller sequence") {
  const std::vector<RouteCacheEntry> a{{ids({A, B, C, D}), 0}, {ids({A, E, D}), 0}};
  CHECK(select_route(a).path == ids({A, E, D}));
  const std::vector<RouteCacheEntry> single{{ids({A, C, D}), 0}};
  CHECK(select_route(single).path == ids({A, C, D}));
  const std::vector<RouteCacheEntry> tie{{ids({A, C, D}), 0}, {ids({A, B, D}), 0}};
  CHECK(select_route(tie).path == ids({A, B, D}));
  CHECK_THROWS_AS(select_route({}), NoAdmissibleRoute);
}

TEST_CASE("AODV: no route buffers the data and floods an RREQ") {
  FakeHost h(A);
  AodvAgent agent(h, RoutingParams{});
  agent.originate_data(data(A, D, 1));
  const auto out = h.take();
  REQUIRE(out.size() == 1);
  CHECK(out[0].to == kBroadcast);
  CHECK(out[0].packet.kind == PacketKind::Rreq);
  CHECK(agent.buffered_for(D) == 1);
  CHECK(h.discoveries == 1);
}

TEST_CASE("AODV: a route present sends immediately") {
  FakeHost h(A);
  h.links = {B};
  AodvAgent agent(h, RoutingParams{});
  REQUIRE(agent.offer_route(D, B, 3, 1));
  agent.originate_data(data(A, D, 1));
  const auto out = h.take();
  REQUIRE(out.size() == 1);
  CHECK(out[0].data);
  CHECK(out[0].to == B);
  CHECK(agent.buffered() == 0);
}

TEST_CASE("the 65th buffered packet pushes out the oldest") {
  FakeHost h(A);
  AodvAgent agent(h, RoutingParams{});
  for (std::uint64_t uid = 1; uid <= 65; ++uid) agent.originate_data(data(A, D, uid));
  CHECK(agent.buffered() == 64);
  REQUIRE(h.drops.size() == 1);
  CHECK(h.drops[0] == std::pair{std::uint64_t{1}, metrics::DropReason::BufferOverflow});
}

TEST_CASE("discovery gives up after the retries and drops the buffer") {
  FakeHost h(A);
  AodvAgent agent(h, RoutingParams{});
  agent.originate_data(data(A, D, 1));
  agent.originate_data(data(A, D, 2));
  for (int t = 1; t <= 4; ++t) h.advance(t);
  CHECK(agent.rreqs_issued() == 4);
  CHECK(h.drops.size() == 2);
  CHECK(h.drops[0].second == metrics::DropReason::NoRoute);
  CHECK_FALSE(agent.discovering(D));
}

TEST_CASE("duplicate RREQ at an intermediate node is not rebroadcast") {
  FakeHost h(B);
  AodvAgent agent(h, RoutingParams{});
  agent.handle_rreq(rreq(A, D, 0, A, 0));
  agent.handle_rreq(rreq(A, D, 0, C, 1));
  const auto out = h.take();
  REQUIRE(out.size() == 1);
  CHECK(out[0].packet.hop_count == 1);
  CHECK(agent.reverse_hop(A) == A);
}

TEST_CASE("RREQ from a blacklisted neighbor is dropped and counted") {
  FakeHost h(B);
  h.blacklisted = {C};
  AodvAgent agent(h, RoutingParams{});
  agent.handle_rreq(rreq(A, D, 0, C, 1));
  CHECK(h.take().empty());
  CHECK(h.rejections == 1);
}

TEST_CASE("the destination answers the first copy from each neighbor") {
  FakeHost h(D);
  h.links = {B, C};
  AodvAgent agent(h, RoutingParams{});
  agent.handle_rreq(rreq(A, D, 0, B, 1));
  agent.handle_rreq(rreq(A, D, 0, B, 1));
  agent.handle_rreq(rreq(A, D, 0, C, 1));
  const auto out = h.take();
  REQUIRE(out.size() == 2);
  CHECK(out[0].to == B);
  CHECK(out[1].to == C);
  CHECK(out[0].packet.seq_or_id == out[1].packet.seq_or_id);
  CHECK(agent.own_seq() == 1);
}

TEST_CASE("AODV freshness: fewer hops win a tie, stale sequence numbers lose") {
  FakeHost h(A);
  AodvAgent agent(h, RoutingParams{});
  REQUIRE(agent.offer_route(D, B, 4, 5));
  CHECK(agent.offer_route(D, C, 2, 5));
  CHECK(agent.entry(D)->hop_count == 2);
  CHECK_FALSE(agent.offer_route(D, B, 3, 5));
  CHECK(agent.offer_route(D, B, 9, 7));
  CHECK_FALSE(agent.offer_route(D, C, 1, 5));
  CHECK(agent.entry(D)->dest_seq == 7);
}

TEST_CASE("AODV freshness: dest_seq never decreases") {
  sim::Rng rng(8);
  FakeHost h(A);
  AodvAgent agent(h, RoutingParams{});
  std::uint32_t last = 0;
  for (int i = 0; i < 2000; ++i) {
    h.clock += rng.uniform(0.0, 4.0);
    if (rng.below(10) == 0) agent.purge_node(B);
    agent.offer_route(D, rng.below(2) ? B : C, 1 + static_cast<std::uint32_t>(rng.below(6)),
                      static_cast<std::uint32_t>(rng.below(20)));
    if (const auto* e = agent.entry(D)) {
      REQUIRE(e->dest_seq >= last);
      last = e->dest_seq;
    }
  }
}

TEST_CASE("RREP installs a fresh route and is passed back along the reverse pointer") {
  FakeHost h(B);
  h.links = {A, C};
  AodvAgent agent(h, RoutingParams{});
  agent.handle_rreq(rreq(A, D, 0, A, 0));
  h.take();
  agent.handle_rrep(rrep(D, A, 1, C, 1));
  REQUIRE(agent.usable_route(D) != nullptr);
  CHECK(agent.usable_route(D)->next_hop == C);
  CHECK(agent.usable_route(D)->hop_count == 2);
  const auto out = h.take();
  REQUIRE(out.size() == 1);
  CHECK(out[0].to == A);
  CHECK(out[0].packet.hop_count == 2);
}

TEST_CASE("stale RREP is not forwarded") {
  FakeHost h(B);
  h.links = {A, C};
  AodvAgent agent(h, RoutingParams{});
  agent.handle_rreq(rreq(A, D, 0, A, 0));
  agent.offer_route(D, C, 1, 7);
  h.take();
  agent.handle_rrep(rrep(D, A, 5, C, 0));
  CHECK(h.take().empty());
  CHECK(agent.entry(D)->dest_seq == 7);
}

TEST_CASE("AODV: next hop expired at a relay sends RERR upstream and drops") {
  FakeHost h(B);
  h.links = {A, C};
  AodvAgent agent(h, RoutingParams{});
  agent.offer_route(D, C, 2, 1);
  h.clock = 11.0;  // past active_route_lifetime
  auto pkt = data(A, D, 9);
  agent.handle_data(pkt);
  const auto out = h.take();
  REQUIRE(out.size() == 1);
  CHECK(out[0].to == A);
  CHECK(out[0].packet.kind == PacketKind::Rerr);
  CHECK(out[0].packet.about_uid == 9);
  CHECK(h.drops.size() == 1);
}

TEST_CASE("AODV RERR purges routes through the sender; unknown links are a no-op") {
  FakeHost h(A);
  h.links = {B};
  AodvAgent agent(h, RoutingParams{});
  agent.offer_route(D, B, 3, 1);
  agent.offer_route(C, B, 2, 1);
  agent.offer_route(E, node_id(5), 1, 1);
  Packet err;
  err.kind = PacketKind::Rerr;
  err.origin = B;
  err.target = A;
  err.prev_hop = B;
  err.seq_or_id = index(D);
  err.aux = C;
  agent.handle_rerr(err);
  CHECK(agent.usable_route(D) == nullptr);
  CHECK(agent.usable_route(C) == nullptr);
  CHECK(agent.usable_route(E) != nullptr);
  err.seq_or_id = index(node_id(6));
  err.aux = node_id(7);
  agent.handle_rerr(err);
  CHECK(agent.usable_route(E) != nullptr);
}

TEST_CASE("origin with buffered data re-discovers after the retry wait on RERR") {
  FakeHost h(A);
  AodvAgent agent(h, RoutingParams{});
  agent.originate_data(data(A, D, 1));
  REQUIRE(agent.rreqs_issued() == 1);
  h.advance(0.5);
  Packet err;
  err.kind = PacketKind::Rerr;
  err.origin = B;
  err.target = A;
  err.prev_hop = B;
  err.seq_or_id = index(D);
  err.aux = C;
  agent.handle_rerr(err);
  CHECK(agent.rreqs_issued() == 1);
  h.advance(0.99);
  CHECK(agent.rreqs_issued() == 1);
  h.advance(1.0);
  CHECK(agent.rreqs_issued() == 2);
  CHECK(agent.buffered_for(D) == 1);
}

TEST_CASE("DSR: RREQ accumulates the route; the target reverses it") {
  FakeHost b(B);
  DsrAgent relay(b, RoutingParams{});
  relay.handle_rreq(rreq(A, D, 0, A, 0, ids({A})));
  auto out = b.take();
  REQUIRE(out.size() == 1);
  CHECK(out[0].packet.source_route == ids({A, B}));

  FakeHost d(D);
  d.links = {C};
  DsrAgent target(d, RoutingParams{});
  target.handle_rreq(rreq(A, D, 0, C, 2, ids({A, B, C})));
  out = d.take();
  REQUIRE(out.size() == 1);
  CHECK(out[0].to == C);
  CHECK(out[0].packet.kind == PacketKind::Rrep);
  CHECK(out[0].packet.source_route == ids({A, B, C, D}));
}

TEST_CASE("DSR: a node already on the route ignores the RREQ") {
  FakeHost h(B);
  DsrAgent agent(h, RoutingParams{});
  agent.handle_rreq(rreq(A, D, 0, C, 2, ids({A, B, C})));
  CHECK(h.take().empty());
}

TEST_CASE("DSR: candidates are trust-filtered prefixes of cached paths") {
  FakeHost h(A);
  h.links = {B, C};
  DsrAgent agent(h, RoutingParams{});
  agent.add_path(ids({A, B, C, D, E}));
  agent.add_path(ids({A, C, D}));
  auto c = agent.candidates(D);
  REQUIRE(c.size() == 2);
  CHECK(select_route(c).path == ids({A, C, D}));
  h.blacklisted = {C};
  c = agent.candidates(D);
  CHECK(c.empty());
  CHECK(h.rejections == 2);
  h.blacklisted = {};
  agent.purge_node(C);
  CHECK(agent.cache().empty());
}

TEST_CASE("DSR cache evicts the least recently used path") {
  FakeHost h(A);
  RoutingParams p;
  p.route_cache_capacity = 2;
  DsrAgent agent(h, p);
  agent.add_path(ids({A, B}));
  agent.add_path(ids({A, C}));
  agent.add_path(ids({A, D}));
  REQUIRE(agent.cache().size() == 2);
  CHECK(agent.cache().front().path == ids({A, D}));
  CHECK(agent.cache().back().path == ids({A, C}));
}

TEST_CASE("DSR RERR removes every cached path using the broken link") {
  FakeHost h(A);
  DsrAgent agent(h, RoutingParams{});
  agent.add_path(ids({A, B, C, D}));
  agent.add_path(ids({A, B, E}));
  Packet err;
  err.kind = PacketKind::Rerr;
  err.origin = B;
  err.target = A;
  err.aux = C;
  err.seq_or_id = index(D);
  agent.handle_rerr(err);
  REQUIRE(agent.cache().size() == 1);
  CHECK(agent.cache().front().path == ids({A, B, E}));
}

// ------------------------------------------------------ end-to-end on lines

TEST_CASE("line A-B-C-D: RREQ reaches D at hop 2 and A installs a 3-hop route") {
  auto c = testing_support::line(4, Protocol::Aodv, 1);
  harness::Simulation sim(c, harness::SecurityMode::Baseline, 1);
  const auto r = sim.run();
  CHECK(r.report.delivered == 1);
  const auto& a = dynamic_cast<const AodvAgent&>(sim.node(A).agent());
  REQUIRE(a.entry(D) != nullptr);
  CHECK(a.entry(D)->hop_count == 3);
  CHECK(a.entry(D)->next_hop == B);
}

TEST_CASE("honest lossless chains deliver everything, both protocols") {
  for (auto protocol : {Protocol::Aodv, Protocol::Dsr}) {
    for (auto mode : {harness::SecurityMode::Baseline, harness::SecurityMode::TripleFactor}) {
      auto c = testing_support::line(5, protocol, 30);
      harness::Simulation sim(c, mode, 1);
      const auto r = sim.run();
      CHECK(r.report.delivered == 30);
      CHECK(r.report.pdr == 1.0);
      CHECK(r.report.false_accusations == 0);
    }
  }
}

TEST_CASE("RREQ flood stays within N rebroadcasts per discovery") {
  // Dense cluster where everybody hears everybody.
  for (auto protocol : {Protocol::Aodv, Protocol::Dsr}) {
    harness::ScenarioConfig c;
    c.arena = {100, 100};
    c.node_count = 12;
    c.radio.range = 500;
    c.protocol = protocol;
    c.traffic.push_back({node_id(0), node_id(11), 1.0, 1.0, 64, 1});
    c.duration = 3.0;
    harness::Simulation sim(c, harness::SecurityMode::Baseline, 4);
    std::size_t rreqs = 0;
    sim.run();
    for (const auto& e : sim.metrics().log()) {
      if (e.kind == metrics::MetricKind::ControlTx && e.control == PacketKind::Rreq) ++rreqs;
    }
    CHECK(rreqs >= 1);
    CHECK(rreqs <= c.node_count);
  }
}

TEST_CASE("routes never contain loops or nodes blacklisted by the sender") {
  auto config = harness::parse_scenario(testing_support::source_path("scenarios/grid20.scenario"));
  for (auto protocol : {Protocol::Aodv, Protocol::Dsr}) {
    config.protocol = protocol;
    for (std::uint64_t seed : {1, 2, 3}) {
      harness::Simulation sim(config, harness::SecurityMode::TripleFactor, seed);
      std::size_t checked = 0;
      std::size_t violations = 0;
      sim.set_send_observer([&](const harness::Node& sender, NodeId next, const Packet& p) {
        ++checked;
        const auto* t = const_cast<harness::Node&>(sender).trust();
        auto blacklisted = [&](NodeId n) {
          const auto* rec = t->find(n);
          return rec != nullptr && rec->state == trust::TrustState::Blacklisted;
        };
        if (blacklisted(next)) ++violations;
        if (protocol == Protocol::Dsr) {
          const std::set<NodeId> unique(p.source_route.begin(), p.source_route.end());
          if (unique.size() != p.source_route.size()) ++violations;
          if (p.origin == sender.id() && std::any_of(p.source_route.begin(), p.source_route.end(), blacklisted)) {
            ++violations;
          }
        }
      });
      const auto r = sim.run();
      CHECK(checked > 100);
      CHECK(violations == 0);
      CHECK(r.report.delivered <= r.report.originated);
    }
  }
}
