#include "clusterform/explorer.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <unordered_map>

namespace clusterform {

const char* to_string(FailureClass f) {
  switch (f) {
    case FailureClass::AckCollision: return "ack-collision";
    case FailureClass::AssociateCollision: return "associate-collision";
    case FailureClass::NarrowBridge: return "narrow-bridge";
    case FailureClass::Other: return "other";
  }
  return "?";
}

const char* to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Holds: return "holds";
    case Verdict::Kind::Fails: return "fails";
    case Verdict::Kind::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

// Feeds back the recorded picks of one edge.
class VectorResolver : public ChoiceResolver {
 public:
  explicit VectorResolver(const std::vector<unsigned>& picks)
      : picks_(picks) {}

  unsigned resolve(const ChoicePoint& cp) override {
    (void)cp;
    if (next_ >= picks_.size()) {
      throw std::logic_error("transition consumed more draws than recorded");
    }
    return picks_[next_++];
  }

  bool exhausted() const { return next_ == picks_.size(); }

 private:
  const std::vector<unsigned>& picks_;
  std::size_t next_ = 0;
};

}  // namespace

StateGraph explore(const Topology& t, const std::vector<Channel>& init_ch,
                   const ProtocolConfig& cfg, const ExploreLimits& lim) {
  StateGraph g;
  g.topo = t;
  g.cfg = cfg;
  g.init_ch = init_ch;

  std::unordered_map<std::string, std::uint32_t> index;
  auto add_state = [&](NetworkState&& st, std::int64_t parent,
                       std::uint32_t parent_edge) -> std::pair<std::uint32_t, bool> {
    std::string key = serialize_state(st);
    auto it = index.find(key);
    if (it != index.end()) return {it->second, false};
    std::uint32_t idx = static_cast<std::uint32_t>(g.states.size());
    index.emplace(std::move(key), idx);
    g.states.push_back(std::move(st));
    g.succ.emplace_back();
    g.depth.push_back(parent < 0 ? 0 : g.depth[parent] + 1);
    g.bfs_parent.push_back(parent);
    g.bfs_parent_edge.push_back(parent_edge);
    g.goal.push_back(formation_complete(g.states.back()));
    return {idx, true};
  };

  add_state(initial_network(t, init_ch, cfg), -1, 0);

  for (std::uint32_t head = 0; head < g.states.size(); ++head) {
    if (g.goal[head]) continue;  // formation is absorbing
    if (g.depth[head] >= lim.max_depth) {
      g.truncated = true;
      continue;
    }
    if (g.states.size() >= lim.max_states) {
      g.truncated = true;
      break;
    }

    const std::vector<ChoicePoint> cps =
        network_choices(t, g.states[head], cfg);
    std::uint64_t total = 1;
    for (const ChoicePoint& cp : cps) {
      total *= cp.options.size();
      if (total > 100000) {
        throw std::logic_error("transition fan-out beyond any plausible bound");
      }
    }

    for (std::uint64_t combo = 0; combo < total; ++combo) {
      // mixed radix, first choice point most significant
      std::vector<unsigned> picks(cps.size());
      std::uint64_t rest = combo;
      for (std::size_t j = cps.size(); j-- > 0;) {
        const auto& opts = cps[j].options;
        picks[j] = opts[rest % opts.size()];
        rest /= opts.size();
      }
      VectorResolver r(picks);
      NetworkState next = network_step(t, g.states[head], cfg, r, nullptr);
      if (!r.exhausted()) {
        throw std::logic_error("transition consumed fewer draws than offered");
      }
      auto [idx, fresh] =
          add_state(std::move(next), head,
                    static_cast<std::uint32_t>(g.succ[head].size()));
      (void)fresh;
      g.succ[head].push_back(Edge{idx, std::move(picks)});
      ++g.expansions;
    }
  }
  return g;
}

SlotResult replay_edge(const StateGraph& g, std::uint32_t from, const Edge& e) {
  VectorResolver r(e.picks);
  SlotResult res;
  NetworkState next = network_step(g.topo, g.states[from], g.cfg, r, &res);
  if (!(next == g.states[e.to])) {
    throw std::logic_error("replayed transition diverged from the graph");
  }
  return res;
}

namespace {

// Iterative Tarjan restricted to non-goal states. Returns the SCC id per
// state (goal states get none) and, via out parameters, whether each SCC is
// a real cycle (size >= 2, or a single state with a self-loop).
struct SccResult {
  std::vector<std::int64_t> comp;  // -1 for goal states
  std::vector<bool> cyclic;        // indexed by component id
};

SccResult strongly_connected(const StateGraph& g) {
  const std::size_t n = g.states.size();
  SccResult out;
  out.comp.assign(n, -1);

  std::vector<std::int64_t> low(n, -1), num(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  std::int64_t counter = 0;

  struct Frame {
    std::uint32_t v;
    std::size_t edge;
  };

  for (std::uint32_t root = 0; root < n; ++root) {
    if (num[root] >= 0 || g.goal[root]) continue;
    std::vector<Frame> frames{{root, 0}};
    num[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.edge < g.succ[f.v].size()) {
        std::uint32_t w = g.succ[f.v][f.edge].to;
        ++f.edge;
        if (g.goal[w]) continue;
        if (num[w] < 0) {
          num[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], num[w]);
        }
      } else {
        std::uint32_t v = f.v;
        frames.pop_back();
        if (!frames.empty()) {
          low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        }
        if (low[v] == num[v]) {
          std::int64_t cid = static_cast<std::int64_t>(out.cyclic.size());
          std::size_t members = 0;
          while (true) {
            std::uint32_t w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            out.comp[w] = cid;
            ++members;
            if (w == v) break;
          }
          bool cyc = members >= 2;
          if (!cyc) {
            for (const Edge& e : g.succ[v]) {
              if (e.to == v) {
                cyc = true;
                break;
              }
            }
          }
          out.cyclic.push_back(cyc);
        }
      }
    }
  }
  return out;
}

std::vector<PathStep> bfs_path_from_root(const StateGraph& g,
                                         std::uint32_t target) {
  std::vector<PathStep> steps;
  std::uint32_t cur = target;
  while (g.bfs_parent[cur] >= 0) {
    std::uint32_t p = static_cast<std::uint32_t>(g.bfs_parent[cur]);
    steps.push_back({p, g.bfs_parent_edge[cur]});
    cur = p;
  }
  std::reverse(steps.begin(), steps.end());
  return steps;
}

// Shortest cycle through entry staying inside its component.
std::vector<PathStep> cycle_through(const StateGraph& g, const SccResult& scc,
                                    std::uint32_t entry) {
  const std::int64_t cid = scc.comp[entry];
  std::unordered_map<std::uint32_t, PathStep> parent;  // child -> (prev, edge)
  std::deque<std::uint32_t> q{entry};
  std::vector<bool> seen(g.states.size(), false);
  seen[entry] = true;

  while (!q.empty()) {
    std::uint32_t v = q.front();
    q.pop_front();
    for (std::uint32_t ei = 0; ei < g.succ[v].size(); ++ei) {
      std::uint32_t w = g.succ[v][ei].to;
      if (g.goal[w] || scc.comp[w] != cid) continue;
      if (w == entry) {
        // found the closing edge: unwind
        std::vector<PathStep> loop{{v, ei}};
        std::uint32_t cur = v;
        while (cur != entry) {
          PathStep ps = parent.at(cur);
          loop.push_back(ps);
          cur = ps.state;
        }
        std::reverse(loop.begin(), loop.end());
        return loop;
      }
      if (!seen[w]) {
        seen[w] = true;
        parent[w] = {v, ei};
        q.push_back(w);
      }
    }
  }
  throw std::logic_error("cyclic component lost its cycle");
}

bool collision_matches(const StateGraph& g, const std::vector<PathStep>& loop,
                       bool want_head_associate) {
  for (const PathStep& ps : loop) {
    SlotResult res = replay_edge(g, ps.state, g.succ[ps.state][ps.edge]);
    for (Channel c = 1; c <= g.cfg.num_channels; ++c) {
      Traffic on_c = find_channel(c, res.outcome.sent);
      if (on_c.size() < 2) continue;  // no collision here
      unsigned head_assoc = 0, acks = 0, slave_assoc = 0;
      for (const Message& m : on_c) {
        if (m.type() == MessageType::Associate) {
          if (m.payload()[0] == kAssociateAsHead) ++head_assoc;
          else ++slave_assoc;
        }
        if (m.type() == MessageType::BeaconAck) ++acks;
      }
      if (want_head_associate) {
        if (head_assoc >= 2) return true;
      } else {
        if (acks >= 2) return true;
        if (g.cfg.variant == Variant::NoAcks && slave_assoc >= 2) return true;
      }
    }
  }
  return false;
}

FailureClass classify_failure(const StateGraph& g, const LassoWitness& w) {
  const NetworkState& snap = g.states[w.entry];
  const unsigned n = static_cast<unsigned>(snap.nodes.size());

  // Stranded node whose every route to a head runs through a slave?
  for (NodeId v : w.stranded) {
    std::vector<bool> seen(n + 1, false);
    std::deque<NodeId> q{v};
    seen[v] = true;
    bool head_found = false;
    while (!q.empty() && !head_found) {
      NodeId u = q.front();
      q.pop_front();
      for (NodeId x = 1; x <= n; ++x) {
        if (seen[x] || !g.topo.reachable(u, x)) continue;
        if (snap.nodes[x - 1].role == Role::ClusterHead) {
          head_found = true;
          break;
        }
        if (snap.nodes[x - 1].role == Role::ClusterSlave) continue;  // blocked
        seen[x] = true;
        q.push_back(x);
      }
    }
    if (!head_found) return FailureClass::NarrowBridge;
  }

  if (collision_matches(g, w.loop, true)) return FailureClass::AssociateCollision;
  if (collision_matches(g, w.loop, false)) return FailureClass::AckCollision;
  return FailureClass::Other;
}

}  // namespace

Verdict check_formation(const StateGraph& g) {
  Verdict v;
  v.states = g.states.size();
  v.truncated = g.truncated;

  // shortest witness: first goal state in breadth-first order
  for (std::uint32_t i = 0; i < g.states.size(); ++i) {
    if (!g.goal[i]) continue;
    FormationWitness w;
    w.steps = bfs_path_from_root(g, i);
    w.goal_state = i;
    w.formation_slot = g.depth[i] - 1;  // the join happened in the last slot
    v.witness = std::move(w);
    v.goal_reachable = true;
    break;
  }

  const SccResult scc = strongly_connected(g);
  std::int64_t best = -1;
  for (std::uint32_t i = 0; i < g.states.size(); ++i) {
    if (g.goal[i] || scc.comp[i] < 0 || !scc.cyclic[scc.comp[i]]) continue;
    if (best < 0 || g.depth[i] < g.depth[best] ||
        (g.depth[i] == g.depth[best] && i < static_cast<std::uint32_t>(best))) {
      best = i;
    }
  }

  if (best >= 0) {
    LassoWitness lw;
    lw.entry = static_cast<std::uint32_t>(best);
    lw.stem = bfs_path_from_root(g, lw.entry);
    lw.loop = cycle_through(g, scc, lw.entry);
    for (const NodeState& n : g.states[lw.entry].nodes) {
      if (!n.joined()) lw.stranded.push_back(n.id);
    }
    lw.failure = classify_failure(g, lw);
    v.lasso = std::move(lw);
    v.kind = Verdict::Kind::Fails;
    return v;
  }

  v.kind = g.truncated ? Verdict::Kind::Inconclusive : Verdict::Kind::Holds;
  return v;
}

SweepResult sweep_initial_channels(const Topology& t,
                                   const ProtocolConfig& cfg,
                                   Channel fixed_root,
                                   const ExploreLimits& lim) {
  SweepResult out;
  const unsigned n = t.size();
  const unsigned c = cfg.num_channels;
  const unsigned first_free = fixed_root != 0 ? 1 : 0;

  std::uint64_t total = 1;
  for (unsigned i = first_free; i < n; ++i) total *= c;

  for (std::uint64_t combo = 0; combo < total; ++combo) {
    std::vector<Channel> init(n, fixed_root != 0 ? fixed_root : 1);
    std::uint64_t rest = combo;
    for (unsigned pos = n; pos-- > first_free;) {
      init[pos] = static_cast<Channel>(rest % c + 1);
      rest /= c;
    }

    StateGraph g = explore(t, init, cfg, lim);
    Verdict v = check_formation(g);
    SweepEntry e;
    e.init = std::move(init);
    e.kind = v.kind;
    e.goal_reachable = v.goal_reachable;
    e.states = v.states;
    if (v.witness) {
      e.formation_slot = v.witness->formation_slot;
      if (!out.min_formation_slot ||
          e.formation_slot < *out.min_formation_slot) {
        out.min_formation_slot = e.formation_slot;
      }
    }
    if (v.lasso) e.failure = v.lasso->failure;
    out.entries.push_back(std::move(e));
  }
  return out;
}

}  // namespace clusterform
