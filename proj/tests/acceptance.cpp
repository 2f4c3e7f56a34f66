// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the exit code is the number of failures.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "clusterform/explorer.hpp"
#include "clusterform/scalability.hpp"
#include "clusterform/scenario.hpp"
#include "clusterform/simulator.hpp"
#include "clusterform/trace.hpp"
#include "clusterform/tsch.hpp"
#include "invariants.hpp"

using namespace clusterform;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << criterion << ": "
            << detail << "\n";
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// --- 1: the three stock failure scenarios reproduce their classes ---------

void criterion_1() {
  struct Expect {
    const char* name;
    FailureClass cls;
    bool reachable;
  };
  const Expect expects[] = {
      {"ack_collision", FailureClass::AckCollision, false},
      {"associate_collision", FailureClass::AssociateCollision, true},
      {"narrow_bridge", FailureClass::NarrowBridge, false},
  };
  std::ostringstream detail;
  bool ok = true;
  for (const Expect& e : expects) {
    Scenario sc = builtin_scenario(e.name);
    Verdict v = check_formation(explore(sc.topo, sc.concrete_init(), sc.cfg));
    bool this_ok = v.kind == Verdict::Kind::Fails && v.lasso.has_value() &&
                   v.lasso->failure == e.cls &&
                   v.goal_reachable == e.reachable;
    if (e.reachable && this_ok) {
      this_ok = v.witness.has_value() && v.witness->formation_slot == 8;
    }
    ok &= this_ok;
    detail << e.name << "=" << (this_ok ? "ok" : "WRONG") << " ";
  }
  report(1, ok, "stock failure scenarios refute formation with their classes ("
                + detail.str() + ")");
}

// --- 2: exhaustive corpus of 3-node networks, all verdicts definitive -----

void criterion_2() {
  auto t0 = Clock::now();
  auto topos = enumerate_well_connected(3);
  std::size_t total = 0, definitive = 0, holds = 0, fails = 0;
  std::set<FailureClass> classes;
  for (const Topology& t : topos) {
    for (Variant var : {Variant::WithAcks, Variant::NoAcks}) {
      ProtocolConfig cfg;
      cfg.variant = var;
      SweepResult sr = sweep_initial_channels(t, cfg, 1);
      for (const SweepEntry& e : sr.entries) {
        ++total;
        if (e.kind == Verdict::Kind::Holds) {
          ++definitive;
          ++holds;
        } else if (e.kind == Verdict::Kind::Fails) {
          ++definitive;
          ++fails;
          classes.insert(e.failure);
        }
      }
    }
  }
  double secs = seconds_since(t0);
  const int named = classes.count(FailureClass::AckCollision) +
                    classes.count(FailureClass::AssociateCollision) +
                    classes.count(FailureClass::NarrowBridge);
  bool ok = topos.size() == 20 && total == 360 && definitive == 360 &&
            named == 3 && secs <= 600.0;
  std::ostringstream detail;
  detail << topos.size() << " topologies x 9 assignments x 2 variants = "
         << total << " runs, " << definitive << " definitive (" << holds
         << " hold, " << fails << " fail), " << named
         << "/3 named failure classes seen, " << secs << " s";
  report(2, ok, detail.str());
}

// --- 3: the two-joiner race, swept over every initial assignment ----------

void criterion_3() {
  Scenario sc = builtin_scenario("two_joiner_race");
  SweepResult open = sweep_initial_channels(sc.topo, sc.cfg, 0);
  bool ok = open.entries.size() == 27 && open.min_formation_slot.has_value() &&
            *open.min_formation_slot == 8;
  std::ostringstream detail;
  detail << open.entries.size() << " assignments, fastest formation at slot ";
  if (open.min_formation_slot) {
    detail << *open.min_formation_slot;
  } else {
    detail << "none";
  }
  detail << " (expected 8)";
  report(3, ok, detail.str());
}

// --- 4: the growth bound against an independent summation -----------------

void criterion_4() {
  bool ok = lower_bound_slots(1) == 7 && lower_bound_slots(2) == 18 &&
            lower_bound_slots(3) == 35 && lower_bound_slots(8) == 1608;
  for (unsigned h = 1; h <= 32 && ok; ++h) {
    u128 total = 5 + 2 * static_cast<u128>(h);
    for (unsigned i = 1; i < h; ++i) total += 7 + (u128{1} << i) * i;
    ok = lower_bound_slots(h) == total;
  }
  bool super = superlinearity_check(2, 12);
  report(4, ok && super,
         "bound values 7/18/35/1608 match the level summation up to h=32, "
         "superlinearity over heights 2..12: " +
             std::string(super ? "yes" : "no"));
}

// --- 5: simulations never beat the analytical bound -----------------------

void criterion_5() {
  Topology t = balanced_binary_tree(2);
  ProtocolConfig cfg;
  cfg.max_id = t.size();
  cfg.num_channels = 7;  // one cluster per node: no reuse jams
  cfg.variant = Variant::NoAcks;
  const std::uint64_t bound = static_cast<std::uint64_t>(lower_bound_slots(2));

  auto runs = simulate_batch(t, cfg, 1, 100, 2000);
  unsigned formed = 0;
  std::uint64_t fastest = UINT64_MAX;
  bool none_below = true;
  for (const RunResult& r : runs) {
    if (!r.formed) continue;
    ++formed;
    fastest = std::min(fastest, r.slots_used);
    none_below &= r.slots_used >= bound;
  }
  bool ok = formed >= 90 && none_below;
  std::ostringstream detail;
  detail << "height-2 tree, " << runs.size() << " seeds: " << formed
         << " formed, fastest " << fastest << " slots vs bound " << bound;
  report(5, ok, detail.str());
}

// --- 6: randomized slot arbitration against counting oracles --------------

Traffic oracle_remove_collision(const Traffic& tr, unsigned num_channels) {
  Traffic out;
  for (Channel c = 1; c <= num_channels; ++c) {
    const Message* only = nullptr;
    unsigned count = 0;
    for (const Message& m : tr) {
      if (m.channel() == c) {
        ++count;
        only = &m;
      }
    }
    out.push_back(count == 1 ? *only : empty_message(c));
  }
  return out;
}

void criterion_6() {
  SplitMix64 rng(0xACCE57);
  std::size_t instances = 0, bad = 0;

  // arbitration against the counting oracle
  for (int round = 0; round < 4000; ++round) {
    const unsigned n = 2 + static_cast<unsigned>(rng.next() % 6);
    const unsigned channels = 1 + static_cast<unsigned>(rng.next() % 4);
    Traffic subs;
    for (NodeId i = 1; i <= n; ++i) {
      subs.push_back(Message(i, 1 + static_cast<Channel>(rng.next() % channels),
                             MessageType::Beacon, {0}));
    }
    ++instances;
    if (remove_collision(subs, channels) !=
        oracle_remove_collision(subs, channels)) {
      ++bad;
    }
  }

  // full slots: scope agreement on complete topologies, delivery law always
  for (int round = 0; round < 8000; ++round) {
    const unsigned n = 2 + static_cast<unsigned>(rng.next() % 5);
    const bool complete = round % 2 == 0;
    Topology t(n);
    for (NodeId a = 1; a <= n; ++a) {
      for (NodeId b = a + 1; b <= n; ++b) {
        unsigned roll = static_cast<unsigned>(rng.next() % 3);
        if (complete && roll == 0) roll = 1 + rng.next() % 2;
        if (roll == 1) t.add_close(a, b);
        if (roll == 2) t.add_range(a, b);
      }
    }
    ProtocolConfig cfg;
    cfg.max_id = n;
    cfg.num_channels = 1 + static_cast<unsigned>(rng.next() % 4);
    Traffic subs;
    for (NodeId i = 1; i <= n; ++i) {
      Channel c = 1 + static_cast<Channel>(rng.next() % cfg.num_channels);
      if (rng.next() % 2 == 0) {
        subs.push_back(empty_message(c));
      } else {
        subs.push_back(Message(i, c, MessageType::Beacon, {0}));
      }
    }
    ++instances;
    bool this_bad = false;

    cfg.collision_scope = CollisionScope::Global;
    SlotOutcome global = step_slot(t, subs, cfg);
    this_bad |= global.on_air !=
                oracle_remove_collision(global.sent, cfg.num_channels);
    for (NodeId i = 1; i <= n; ++i) {
      const Message& got = global.delivered[i - 1];
      if (!subs[i - 1].is_empty()) {
        this_bad |= !got.is_empty();
        continue;
      }
      const Message& winner = global.on_air[subs[i - 1].channel() - 1];
      if (!winner.is_empty() && t.reachable(winner.src(), i)) {
        this_bad |= got != winner;
      } else {
        this_bad |= !got.is_empty();
      }
    }
    if (complete) {
      cfg.collision_scope = CollisionScope::PerReceiver;
      SlotOutcome local = step_slot(t, subs, cfg);
      this_bad |= local.delivered != global.delivered;
    }
    bad += this_bad;
  }

  std::ostringstream detail;
  detail << instances << " randomized slot instances, " << bad
         << " disagreements with the oracles";
  report(6, instances >= 10000 && bad == 0, detail.str());
}

// --- 7: structural laws over every reachable state of sampled graphs ------

void criterion_7() {
  std::size_t graphs = 0, states = 0;
  std::vector<std::string> violations;
  auto walk = [&](const Topology& t, const std::vector<Channel>& init,
                  const ProtocolConfig& cfg) {
    StateGraph g = explore(t, init, cfg);
    ++graphs;
    states += g.states.size();
    auto v = graph_invariant_violations(g);
    violations.insert(violations.end(), v.begin(), v.end());
  };

  for (const std::string& name :
       {"two_joiner_race", "ack_collision", "associate_collision",
        "narrow_bridge"}) {
    Scenario sc = builtin_scenario(name);
    walk(sc.topo, sc.concrete_init(), sc.cfg);
  }
  Topology chain(3);
  chain.add_range(1, 2);
  chain.add_range(2, 3);
  Topology mixed(3);
  mixed.add_close(1, 2);
  mixed.add_range(1, 3);
  mixed.add_range(2, 3);
  for (Variant var : {Variant::WithAcks, Variant::NoAcks}) {
    ProtocolConfig cfg;
    cfg.variant = var;
    walk(chain, {1, 1, 2}, cfg);
    walk(mixed, {1, 2, 3}, cfg);
    cfg.collision_scope = CollisionScope::PerReceiver;
    walk(mixed, {1, 1, 1}, cfg);
  }

  std::ostringstream detail;
  detail << graphs << " graphs, " << states << " states replayed, "
         << violations.size() << " invariant violations";
  if (!violations.empty()) detail << " (first: " << violations.front() << ")";
  report(7, !violations.empty() == false && graphs == 10, detail.str());
}

// --- 8: rendered outputs replay byte for byte -----------------------------

void criterion_8() {
  bool ok = true;

  Scenario sc = builtin_scenario("associate_collision");
  auto render_once = [&sc]() {
    StateGraph g = explore(sc.topo, sc.concrete_init(), sc.cfg);
    Verdict v = check_formation(g);
    std::string out = render_verdict(g, v);
    if (v.witness) out += render_witness(g, *v.witness);
    if (v.lasso) out += render_lasso(g, *v.lasso);
    return out;
  };
  ok &= render_once() == render_once();

  Scenario race = builtin_scenario("two_joiner_race");
  auto sweep_once = [&race]() {
    return render_sweep(sweep_initial_channels(race.topo, race.cfg, 0));
  };
  ok &= sweep_once() == sweep_once();

  std::vector<Channel> init = race.concrete_init();
  auto batch_once = [&]() {
    return render_runs_csv(
        simulate_batch(race.topo, race.cfg, 1, 50, 500, &init));
  };
  ok &= batch_once() == batch_once();

  auto trace_once = [&]() {
    std::ostringstream os;
    StreamTracer tracer(os);
    write_trace_header(os, race.topo, race.cfg, init);
    simulate(race.topo, race.cfg, 9, 500, &init, &tracer);
    return os.str();
  };
  std::string trace = trace_once();
  ok &= trace == trace_once() && !trace.empty();

  report(8, ok, "verdicts, sweeps, run batches and traces replay "
                "byte for byte");
}

// --- 9: a 511-node tree simulates within wall-clock budget ----------------

void criterion_9() {
  Topology t = balanced_binary_tree(8);
  ProtocolConfig cfg;
  cfg.max_id = t.size();
  cfg.num_channels = 16;
  auto t0 = Clock::now();
  RunResult r = simulate(t, cfg, 1, 5000);
  double secs = seconds_since(t0);
  bool ok = t.size() == 511 && secs <= 10.0 && r.slots_used == 5000;
  std::ostringstream detail;
  detail << "511 nodes, 5000 slots in " << secs << " s, " << r.joined
         << " joined (formation not required)";
  report(9, ok, detail.str());
}

}  // namespace

int main() {
  auto t0 = Clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  std::cout << (failures == 0 ? "ALL CRITERIA PASS" : "FAILURES PRESENT")
            << " (" << seconds_since(t0) << " s total)\n";
  return failures;
}
