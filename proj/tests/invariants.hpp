#pragma once

// Structural laws every reachable state and transition must satisfy,
// checked by walking a fully explored state graph and replaying its edges.

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "clusterform/explorer.hpp"

namespace clusterform {

namespace invariant_detail {

inline void fail(std::vector<std::string>& out, std::uint32_t state,
                 const std::string& what) {
  std::ostringstream os;
  os << "state " << state << ": " << what;
  out.push_back(os.str());
}

inline bool phase_fits(const NodeState& n) {
  switch (n.role) {
    case Role::Free:
      return n.phase == Phase::Listening || n.phase == Phase::AwaitAckResponse;
    case Role::Tentative:
      // Listening covers a committed slave holding its association
      return n.phase == Phase::Scanning || n.phase == Phase::ReturnedToParent ||
             n.phase == Phase::AwaitAssociateAck || n.phase == Phase::Listening;
    case Role::ClusterHead:
      return n.phase == Phase::Advertising;
    case Role::ClusterSlave:
      return n.phase == Phase::Idle;
  }
  return false;
}

inline void check_state(const StateGraph& g, std::uint32_t si,
                        std::vector<std::string>& out) {
  const NetworkState& st = g.states[si];
  const ProtocolConfig& cfg = g.cfg;

  if (st.parity != g.depth[si] % 2) fail(out, si, "parity disagrees with depth");
  if (g.goal[si] != formation_complete(st)) fail(out, si, "goal flag wrong");
  if (g.goal[si] && !g.succ[si].empty()) fail(out, si, "goal state expanded");

  const NodeState& root = st.nodes[0];
  if (root.role != Role::ClusterHead || root.tier != 0 || root.pid != kNoNode) {
    fail(out, si, "root must stay a tier-0 head");
  }

  for (const NodeState& n : st.nodes) {
    std::ostringstream who;
    who << "node " << n.id << " ";
    auto bad = [&](const std::string& w) { fail(out, si, who.str() + w); };

    if (!phase_fits(n)) bad("phase does not fit its role");
    if (n.joined() != (n.role == Role::ClusterHead ||
                       n.role == Role::ClusterSlave)) {
      bad("joined() disagrees with the role");
    }
    if (n.ch < 1 || n.ch > cfg.num_channels) bad("works an unknown channel");

    // engagement: whoever named a parent must point at a live head
    if (n.pid != kNoNode) {
      if (n.pid < 1 || n.pid > st.nodes.size()) {
        bad("parent id out of range");
      } else {
        const NodeState& p = st.nodes[n.pid - 1];
        if (p.role != Role::ClusterHead) bad("parent is not a cluster head");
        if (n.pc != p.ch) bad("parent channel out of date");
        if (n.advertised_tier != p.tier) bad("advertised tier out of date");
      }
    }
    if (n.joined() && n.id != 1) {
      if (n.pid == kNoNode) {
        bad("joined without a parent");
      } else if (n.tier != st.nodes[n.pid - 1].tier + 1) {
        bad("tier is not parent tier + 1");
      }
      if (n.role == Role::ClusterSlave && n.ch != n.pc) {
        bad("slave left the parent channel");
      }
    }

    // children: id-sorted, unique, engaged to us, channels consistent
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      const auto& [cid, cch] = n.children[i];
      if (i > 0 && n.children[i - 1].first >= cid) bad("children unsorted");
      if (cid < 1 || cid > st.nodes.size() || cch < 1 ||
          cch > cfg.num_channels) {
        bad("child record out of range");
        continue;
      }
      const NodeState& c = st.nodes[cid - 1];
      if (c.pid != n.id) bad("recorded child engaged elsewhere");
      if (c.joined() && c.ch != cch) bad("recorded child channel wrong");
    }
    if (!n.children.empty() && n.role != Role::ClusterHead) {
      bad("only heads keep children");
    }

    // queues and ledgers
    for (std::size_t i = 0; i < n.pending.size(); ++i) {
      for (std::size_t j = i + 1; j < n.pending.size(); ++j) {
        if (n.pending[i] == n.pending[j]) bad("duplicate pending send");
      }
      if (n.pending[i].msg.is_empty()) bad("queued placeholder");
    }
    if (!n.grants.empty() && n.id != 1) bad("non-root keeps a grant ledger");
    std::set<NodeId> requesters;
    for (const GrantEntry& ge : n.grants) {
      if (!requesters.insert(ge.requester).second) bad("double grant");
      if (ge.granted < 1 || ge.granted > cfg.num_channels) {
        bad("granted channel out of range");
      }
    }
    if (!std::is_sorted(n.awaiting_grant.begin(), n.awaiting_grant.end())) {
      bad("awaiting list unsorted");
    }
    if (n.relays_pending > 15) bad("relay counter overflow");
    if (n.relays_pending > 0 && n.role != Role::ClusterHead) {
      bad("only heads relay");
    }

    if (cfg.variant == Variant::NoAcks) {
      if (n.phase == Phase::AwaitAckResponse) {
        bad("acknowledgement phase without acks");
      }
      for (const PendingSend& p : n.pending) {
        if (p.msg.type() == MessageType::BeaconAck ||
            p.msg.type() == MessageType::AckResponse) {
          bad("acknowledgement traffic without acks");
        }
      }
    }
  }
}

inline void check_edge(const StateGraph& g, std::uint32_t si, const Edge& e,
                       std::vector<std::string>& out) {
  const NetworkState& from = g.states[si];
  const NetworkState& to = g.states[e.to];
  std::ostringstream tag;
  tag << "edge to " << e.to << ": ";
  auto bad = [&](const std::string& w) { fail(out, si, tag.str() + w); };

  if (to.parity != 1 - from.parity) bad("parity did not flip");
  if (joined_count(to) < joined_count(from)) bad("membership shrank");

  SlotResult res = replay_edge(g, si, e);

  unsigned increases = 0;
  for (const StepEvent& ev : res.events) {
    if (ev.kind == EventKind::Increase) ++increases;
    if (ev.kind == EventKind::RoleChange &&
        !role_transition_allowed(ev.role_from, ev.role_to)) {
      bad("illegal role change event");
    }
  }
  if (joined_count(to) - joined_count(from) != increases) {
    bad("increase events disagree with membership");
  }

  for (std::size_t i = 0; i < from.nodes.size(); ++i) {
    if (!role_transition_allowed(from.nodes[i].role, to.nodes[i].role)) {
      bad("illegal role change on node " + std::to_string(i + 1));
    }
  }

  // every beacon on the air obeys the advertising law
  for (const Message& m : res.outcome.sent) {
    if (m.type() != MessageType::Beacon) continue;
    const NodeState& sender = from.nodes[m.src() - 1];
    if (sender.role != Role::ClusterHead) bad("beacon from a non-head");
    if (m.channel() != sender.ch) bad("beacon off the cluster channel");
    if (m.payload()[0] != sender.tier) bad("beacon lies about the tier");
    if (from.parity != sender.tier % 2) bad("beacon off the tier parity");
    if (sender.relays_pending != 0) bad("beacon during a relay");
  }
  if (g.cfg.variant == Variant::NoAcks) {
    for (const Message& m : res.outcome.sent) {
      if (m.type() == MessageType::BeaconAck ||
          m.type() == MessageType::AckResponse) {
        bad("acknowledgement traffic without acks");
      }
    }
  }
}

}  // namespace invariant_detail

// Empty result = every state and transition passes.
inline std::vector<std::string> graph_invariant_violations(
    const StateGraph& g, std::size_t max_reports = 20) {
  std::vector<std::string> out;
  for (std::uint32_t s = 0;
       s < g.states.size() && out.size() < max_reports; ++s) {
    invariant_detail::check_state(g, s, out);
    for (const Edge& e : g.succ[s]) {
      if (out.size() >= max_reports) break;
      invariant_detail::check_edge(g, s, e, out);
    }
  }
  return out;
}

}  // namespace clusterform
