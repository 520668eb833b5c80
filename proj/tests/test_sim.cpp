#include <doctest.h>

#include <set>
#include <vector>

#include "manet/sim/channel.hpp"
#include "manet/sim/kernel.hpp"
#include "manet/sim/mobility.hpp"
#include "manet/sim/rng.hpp"

using namespace manet;
using namespace manet::sim;

namespace {

EventHandle at(Simulator& s, SimTime t, std::function<void()> fn) {
  return s.schedule(Event{t, EventKind::Timer, kNoNode, std::move(fn)});
}

}  // namespace

TEST_CASE("schedule at the current time is allowed, in the past is not") {
  Simulator s;
  s.run_until(5.0);
  bool fired = false;
  at(s, 5.0, [&] { fired = true; });
  CHECK_THROWS_AS(at(s, 3.0, [] {}), SchedulingInPast);
  s.run_until(5.0);
  CHECK(fired);
}

TEST_CASE("ties fire in scheduling order") {
  Simulator s;
  std::vector<int> order;
  at(s, 7.0, [&] { order.push_back(1); });
  at(s, 7.0, [&] { order.push_back(2); });
  at(s, 7.0, [&] { order.push_back(3); });
  s.run_until(10.0);
  CHECK(order == std::vector<int>{1, 2, 3});
}

TEST_CASE("run_until on an empty queue advances the clock") {
  Simulator s;
  CHECK(s.run_until(10.0) == 10.0);
  CHECK(s.now() == 10.0);
  CHECK(s.fired() == 0);
}

TEST_CASE("run_until stops before later events") {
  Simulator s;
  std::vector<int> order;
  at(s, 2.0, [&] { order.push_back(1); });
  at(s, 9.0, [&] { order.push_back(3); });
  at(s, 2.0, [&] { order.push_back(2); });
  s.run_until(5.0);
  CHECK(order == std::vector<int>{1, 2});
  CHECK(s.pending() == 1);
  s.run_until(9.0);
  CHECK(order == std::vector<int>{1, 2, 3});
}

TEST_CASE("cancelled events never fire") {
  Simulator s;
  bool fired = false;
  const auto h = at(s, 1.0, [&] { fired = true; });
  CHECK(s.cancel(h));
  CHECK_FALSE(s.cancel(h));
  s.run_until(2.0);
  CHECK_FALSE(fired);
}

TEST_CASE("dequeued (fire_at, seq) pairs strictly increase") {
  Simulator s;
  Rng rng(99);
  std::vector<TraceRecord> trace;
  s.set_trace_sink([&](const TraceRecord& r) { trace.push_back(r); });
  // Events that schedule more events, some at the same instant.
  std::function<void(int)> spawn = [&](int depth) {
    if (depth == 0) return;
    for (int i = 0; i < 3; ++i) {
      const double delay = rng.below(3) == 0 ? 0.0 : rng.uniform(0.0, 2.0);
      s.schedule_in(delay, EventKind::Timer, kNoNode, [&spawn, depth] { spawn(depth - 1); });
    }
  };
  spawn(6);
  s.run_until(1000.0);
  REQUIRE(trace.size() > 100);
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const bool increasing = trace[i - 1].fire_at < trace[i].fire_at ||
                            (trace[i - 1].fire_at == trace[i].fire_at && trace[i - 1].seq < trace[i].seq);
    REQUIRE(increasing);
  }
}

TEST_CASE("derived streams differ per concern and per index") {
  std::set<std::uint64_t> seeds;
  for (auto stream : {Stream::Loss, Stream::Mobility, Stream::Adversary, Stream::Traffic, Stream::Keys}) {
    for (std::uint64_t i = 0; i < 8; ++i) seeds.insert(derive_seed(42, stream, i));
  }
  CHECK(seeds.size() == 40);
  CHECK(derive_seed(42, Stream::Loss) == derive_seed(42, Stream::Loss));
  CHECK(derive_seed(42, Stream::Loss) != derive_seed(43, Stream::Loss));
}

TEST_CASE("uniform01 stays in [0, 1)") {
  Rng rng(7);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("neighbor boundary is inclusive") {
  const Arena arena{1000, 1000};
  const RadioModel radio{100.0, 0.0, 0.002};
  for (auto [d, expected] : {std::pair{99.9, true}, std::pair{100.0, true}, std::pair{150.0, false}}) {
    Simulator s;
    Mobility m(arena, {}, 2, 1, {{0, 0}, {d, 0}});
    Channel c(s, m, radio, 1);
    CHECK(c.in_range(node_id(0), node_id(1)) == expected);
    CHECK((c.neighbors_of(node_id(0)).size() == 1) == expected);
  }
}

TEST_CASE("neighbor relation is symmetric and irreflexive") {
  Simulator s;
  Mobility m(Arena{500, 500}, {}, 30, 11);
  Channel c(s, m, RadioModel{120.0, 0.0, 0.002}, 11);
  for (std::uint32_t a = 0; a < 30; ++a) {
    const auto na = c.neighbors_of(node_id(a));
    CHECK(std::find(na.begin(), na.end(), node_id(a)) == na.end());
    for (const NodeId b : na) {
      const auto nb = c.neighbors_of(b);
      CHECK(std::find(nb.begin(), nb.end(), node_id(a)) != nb.end());
      CHECK(distance(m.position(node_id(a)), m.position(b)) <= 120.0);
    }
  }
}

namespace {

struct Radio {
  Simulator sim;
  Mobility mobility;
  Channel channel;
  std::vector<std::pair<NodeId, bool>> received;

  Radio(std::vector<Vec2> positions, double loss)
      : mobility(Arena{1000, 1000}, {}, positions.size(), 3, positions),
        channel(sim, mobility, RadioModel{100.0, loss, 0.002}, 3) {
    channel.set_receiver([this](NodeId rx, const routing::Packet&, bool promiscuous) {
      received.emplace_back(rx, promiscuous);
    });
  }
};

}  // namespace

TEST_CASE("lossless in-range unicast arrives once after the per-hop latency") {
  Radio r({{0, 0}, {50, 0}}, 0.0);
  r.sim.run_until(1.0);
  r.channel.transmit_frame(node_id(0), node_id(1), routing::Packet{});
  CHECK(r.sim.pending() == 1);
  r.sim.run_until(1.0019);
  CHECK(r.received.empty());
  r.sim.run_until(1.002);
  REQUIRE(r.received.size() == 1);
  CHECK(r.received[0] == std::pair{node_id(1), false});
}

TEST_CASE("total loss delivers nothing") {
  Radio r({{0, 0}, {50, 0}, {0, 50}}, 1.0);
  for (int i = 0; i < 50; ++i) r.channel.transmit_frame(node_id(0), kBroadcast, routing::Packet{});
  r.sim.run_until(10.0);
  CHECK(r.received.empty());
  CHECK(r.channel.stats().frames_lost == 100);
}

TEST_CASE("broadcast reaches every in-range neighbor") {
  Radio r({{0, 0}, {50, 0}, {0, 50}, {-50, 0}, {500, 500}}, 0.0);
  r.channel.transmit_frame(node_id(0), kBroadcast, routing::Packet{});
  CHECK(r.sim.pending() == 3);
  r.sim.run_until(1.0);
  CHECK(r.received.size() == 3);
}

TEST_CASE("non-addressed neighbors overhear a unicast") {
  Radio r({{0, 0}, {50, 0}, {0, 50}}, 0.0);
  r.channel.transmit_frame(node_id(0), node_id(1), routing::Packet{});
  r.sim.run_until(1.0);
  REQUIRE(r.received.size() == 2);
  CHECK(r.received[0] == std::pair{node_id(1), false});
  CHECK(r.received[1] == std::pair{node_id(2), true});
}

TEST_CASE("loss accounting: scheduled + lost = transmitted x receivers") {
  // Fully connected 4-node cluster, so every frame has 3 receivers.
  Radio r({{0, 0}, {30, 0}, {0, 30}, {30, 30}}, 0.3);
  const int frames = 2000;
  for (int i = 0; i < frames; ++i) r.channel.transmit_frame(node_id(i % 4), kBroadcast, routing::Packet{});
  const auto& st = r.channel.stats();
  CHECK(st.frames_transmitted == frames);
  CHECK(st.frames_scheduled + st.frames_lost == st.frames_transmitted * 3);
  CHECK(st.receiver_trials == st.frames_transmitted * 3);
  const double rate = static_cast<double>(st.frames_lost) / static_cast<double>(st.receiver_trials);
  CHECK(rate == doctest::Approx(0.3).epsilon(0.1));
}

TEST_CASE("unicast to an unknown node is rejected") {
  Radio r({{0, 0}, {50, 0}}, 0.0);
  CHECK_THROWS_AS(r.channel.transmit_frame(node_id(0), node_id(7), routing::Packet{}), UnknownNode);
}

TEST_CASE("static mobility never moves") {
  Simulator s;
  Mobility m(Arena{100, 100}, MobilityParams{0, 0, 0, 1}, 5, 9);
  std::vector<Vec2> before;
  for (std::uint32_t i = 0; i < 5; ++i) before.push_back(m.position(node_id(i)));
  m.start(s);
  CHECK(s.pending() == 0);
  for (std::uint32_t i = 0; i < 5; ++i) {
    m.mobility_step(node_id(i), 50.0);
    CHECK(m.position(node_id(i)) == before[i]);
  }
}

TEST_CASE("one step toward the waypoint") {
  Mobility m(Arena{100, 100}, MobilityParams{1, 5, 0, 1}, 1, 9);
  m.set_kinematics(NodeKinematics{node_id(0), {0, 0}, {10, 0}, 2.0, 0.0});
  m.mobility_step(node_id(0), 1.0);
  CHECK(m.position(node_id(0)).x == doctest::Approx(2.0));
  CHECK(m.position(node_id(0)).y == 0.0);
}

TEST_CASE("arriving at the waypoint starts a pause") {
  Mobility m(Arena{100, 100}, MobilityParams{1, 5, 4, 1}, 1, 9);
  m.set_kinematics(NodeKinematics{node_id(0), {9, 0}, {10, 0}, 2.0, 0.0});
  m.mobility_step(node_id(0), 1.0);
  CHECK(m.position(node_id(0)) == Vec2{10, 0});
  const auto k = m.kinematics(node_id(0));
  CHECK(k.pause_until == 5.0);
  m.mobility_step(node_id(0), 2.0);
  CHECK(m.position(node_id(0)) == Vec2{10, 0});
}

TEST_CASE("same seed, same position trace; positions stay in the arena") {
  auto trace = [](std::uint64_t seed) {
    Simulator s;
    Mobility m(Arena{300, 200}, MobilityParams{1, 10, 2, 1}, 6, seed);
    m.start(s);
    std::vector<Vec2> out;
    for (int t = 1; t <= 120; ++t) {
      s.run_until(t);
      for (std::uint32_t i = 0; i < 6; ++i) {
        out.push_back(m.position(node_id(i)));
        REQUIRE(m.arena().contains(out.back()));
      }
    }
    return out;
  };
  CHECK(trace(5) == trace(5));
  CHECK(trace(5) != trace(6));
}

TEST_CASE("identical setup, identical trace hash") {
  auto run = [](std::uint64_t seed) {
    Simulator s;
    Mobility m(Arena{300, 300}, MobilityParams{1, 5, 1, 1}, 8, seed);
    Channel c(s, m, RadioModel{120, 0.2, 0.002}, seed);
    m.start(s);
    for (int i = 0; i < 40; ++i) {
      s.schedule(Event{0.5 * i, EventKind::AppSend, node_id(i % 8),
                       [&c, i] { c.transmit_frame(node_id(i % 8), kBroadcast, routing::Packet{}); }});
    }
    s.run_until(30.0);
    return s.trace_hash();
  };
  CHECK(run(1) == run(1));
  CHECK(run(1) != run(2));
}
