#include "clusterform/trace.hpp"

#include <ostream>
#include <sstream>

namespace clusterform {

void write_trace_header(std::ostream& os, const Topology& t,
                        const ProtocolConfig& cfg,
                        const std::vector<Channel>& init) {
  os << "# nodes=" << t.size() << " channels=" << cfg.num_channels
     << " variant=" << to_string(cfg.variant)
     << " scope=" << to_string(cfg.collision_scope) << "\n# init:";
  for (std::size_t i = 0; i < init.size(); ++i) {
    os << " " << (i + 1) << "@" << init[i];
  }
  os << "\n";
}

void write_trace_slot(std::ostream& os, std::uint64_t stamp, unsigned parity,
                      const SlotResult& res,
                      const std::vector<ChoicePoint>& choices,
                      const std::vector<unsigned>& picks) {
  os << "slot " << stamp << " p" << parity << " | air:";
  for (const Message& m : res.outcome.on_air) {
    os << " " << m;
  }
  os << " | heard:";
  bool any = false;
  for (std::size_t i = 0; i < res.outcome.delivered.size(); ++i) {
    const Message& m = res.outcome.delivered[i];
    if (m.is_empty()) continue;
    os << " " << (i + 1) << "<=" << m;
    any = true;
  }
  if (!any) os << " -";
  os << " | events:";
  any = false;
  for (const StepEvent& e : res.events) {
    switch (e.kind) {
      case EventKind::RoleChange:
        os << " role(" << e.node << "," << to_string(e.role_from) << "->"
           << to_string(e.role_to) << ")";
        any = true;
        break;
      case EventKind::Increase:
        os << " increase(" << e.node << ")";
        any = true;
        break;
      case EventKind::TimerExpired:
        os << " timer(" << e.node << ")";
        any = true;
        break;
      default:
        break;  // sends and deliveries already shown
    }
  }
  if (!any) os << " -";
  os << " | draws:";
  if (choices.empty()) {
    os << " -";
  } else {
    for (std::size_t i = 0; i < choices.size(); ++i) {
      os << " " << choices[i].node << ":" << to_string(choices[i].kind) << "=";
      os << (i < picks.size() ? std::to_string(picks[i]) : std::string("?"));
    }
  }
  os << "\n";
}

std::string render_roles(const NetworkState& st) {
  std::ostringstream os;
  for (const NodeState& n : st.nodes) {
    if (n.id > 1) os << " ";
    os << n.id << ":" << to_string(n.role);
    if (n.joined()) os << "(t" << n.tier << ",ch" << n.ch << ")";
  }
  return os.str();
}

std::string render_witness(const StateGraph& g, const FormationWitness& w) {
  std::ostringstream os;
  os << "witness: formation at slot " << w.formation_slot << " ("
     << (w.steps.size()) << " slots executed)\n";
  for (const PathStep& ps : w.steps) {
    SlotResult res = replay_edge(g, ps.state, g.succ[ps.state][ps.edge]);
    auto cps = network_choices(g.topo, g.states[ps.state], g.cfg);
    write_trace_slot(os, g.depth[ps.state], g.states[ps.state].parity, res,
                     cps, g.succ[ps.state][ps.edge].picks);
  }
  os << "final: " << render_roles(g.states[w.goal_state]) << "\n";
  return os.str();
}

std::string render_lasso(const StateGraph& g, const LassoWitness& w) {
  std::ostringstream os;
  os << "lasso: stem " << w.stem.size() << " slots, loop " << w.loop.size()
     << " slots, failure " << to_string(w.failure) << ", stranded:";
  for (NodeId v : w.stranded) os << " " << v;
  os << "\n";
  for (const PathStep& ps : w.stem) {
    SlotResult res = replay_edge(g, ps.state, g.succ[ps.state][ps.edge]);
    auto cps = network_choices(g.topo, g.states[ps.state], g.cfg);
    os << "stem ";
    write_trace_slot(os, g.depth[ps.state], g.states[ps.state].parity, res,
                     cps, g.succ[ps.state][ps.edge].picks);
  }
  for (const PathStep& ps : w.loop) {
    SlotResult res = replay_edge(g, ps.state, g.succ[ps.state][ps.edge]);
    auto cps = network_choices(g.topo, g.states[ps.state], g.cfg);
    os << "loop ";
    write_trace_slot(os, g.depth[ps.state], g.states[ps.state].parity, res,
                     cps, g.succ[ps.state][ps.edge].picks);
  }
  os << "stuck at: " << render_roles(g.states[w.entry]) << "\n";
  return os.str();
}

std::string render_verdict(const StateGraph& g, const Verdict& v) {
  std::ostringstream os;
  os << "verdict: " << to_string(v.kind) << "\n";
  os << "states: " << v.states << (v.truncated ? " (truncated)" : "") << "\n";
  os << "formation reachable: " << (v.goal_reachable ? "yes" : "no") << "\n";
  if (v.witness) {
    os << "fastest formation: slot " << v.witness->formation_slot << "\n";
  }
  if (v.lasso) {
    os << "failure class: " << to_string(v.lasso->failure) << "\n";
    os << render_lasso(g, *v.lasso);
  }
  return os.str();
}

std::string render_run(const RunResult& r) {
  std::ostringstream os;
  os << "seed " << r.seed << ": "
     << (r.formed ? "formed" : "incomplete") << " slots=" << r.slots_used
     << " frames=" << r.slotframes << " ms=" << r.ms
     << " joined=" << r.joined;
  return os.str();
}

std::string render_runs_csv(const std::vector<RunResult>& rs) {
  std::ostringstream os;
  os << "seed,formed,slots,frames,ms,joined\n";
  for (const RunResult& r : rs) {
    os << r.seed << "," << (r.formed ? 1 : 0) << "," << r.slots_used << ","
       << r.slotframes << "," << r.ms << "," << r.joined << "\n";
  }
  return os.str();
}

std::string render_sweep(const SweepResult& s) {
  std::ostringstream os;
  for (const SweepEntry& e : s.entries) {
    os << "init";
    for (Channel c : e.init) os << " " << c;
    os << ": " << to_string(e.kind);
    if (e.goal_reachable) os << " fastest=" << e.formation_slot;
    if (e.kind == Verdict::Kind::Fails) os << " class=" << to_string(e.failure);
    os << " states=" << e.states << "\n";
  }
  if (s.min_formation_slot) {
    os << "minimum formation slot over sweep: " << *s.min_formation_slot
       << "\n";
  } else {
    os << "no configuration can form the tree\n";
  }
  return os.str();
}

}  // namespace clusterform
