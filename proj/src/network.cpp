#include "clusterform/network.hpp"

#include <stdexcept>

namespace clusterform {

NetworkState initial_network(const Topology& t,
                             const std::vector<Channel>& init_ch,
                             const ProtocolConfig& cfg) {
  cfg.validate();
  if (t.size() != cfg.max_id) {
    throw std::invalid_argument("topology size disagrees with max_id");
  }
  if (init_ch.size() != t.size()) {
    throw std::invalid_argument("need one initial channel per node");
  }
  for (Channel c : init_ch) {
    if (c < 1 || c > cfg.num_channels) {
      throw std::invalid_argument("initial channel out of range");
    }
  }
  NetworkState st;
  st.nodes.reserve(t.size());
  for (NodeId i = 1; i <= t.size(); ++i) {
    NodeState n;
    n.id = i;
    n.ch = init_ch[i - 1];
    if (i == 1) {
      n.role = Role::ClusterHead;
      n.phase = Phase::Advertising;
      n.tier = 0;
    } else {
      n.role = Role::Free;
      n.phase = Phase::Listening;
      n.dwell_remaining = cfg.scan_dwell_slots;
    }
    st.nodes.push_back(std::move(n));
  }
  return st;
}

unsigned joined_count(const NetworkState& st) {
  unsigned k = 0;
  for (const NodeState& n : st.nodes) {
    if (n.joined()) ++k;
  }
  return k;
}

bool formation_complete(const NetworkState& st) {
  return joined_count(st) == st.nodes.size();
}

namespace {

Traffic collect_submissions(const NetworkState& st, const ProtocolConfig& cfg) {
  Traffic subs;
  subs.reserve(st.nodes.size());
  for (const NodeState& n : st.nodes) {
    subs.push_back(node_emit(n, st.parity, cfg));
  }
  return subs;
}

SignalClass signal_for(const Topology& t, const Message& delivered, NodeId i) {
  if (delivered.is_empty()) return SignalClass::OutOfRange;
  return classify(t, delivered.src(), i);
}

}  // namespace

std::vector<ChoicePoint> network_choices(const Topology& t,
                                         const NetworkState& st,
                                         const ProtocolConfig& cfg) {
  const SlotOutcome out = step_slot(t, collect_submissions(st, cfg), cfg);
  std::vector<ChoicePoint> all;
  for (NodeId i = 1; i <= t.size(); ++i) {
    const Message& d = out.delivered[i - 1];
    auto cps =
        node_choices(st.nodes[i - 1], st.parity, d, signal_for(t, d, i), cfg);
    all.insert(all.end(), cps.begin(), cps.end());
  }
  return all;
}

NetworkState network_step(const Topology& t, const NetworkState& st,
                          const ProtocolConfig& cfg, ChoiceResolver& resolver,
                          SlotResult* result) {
  SlotOutcome out = step_slot(t, collect_submissions(st, cfg), cfg);
  NetworkState ns;
  ns.nodes.reserve(st.nodes.size());
  for (NodeId i = 1; i <= t.size(); ++i) {
    const Message& d = out.delivered[i - 1];
    ns.nodes.push_back(node_deliver(st.nodes[i - 1], st.parity, d,
                                    signal_for(t, d, i), cfg, resolver,
                                    result ? &result->events : nullptr));
  }
  ns.parity = st.parity ^ 1u;
  if (result) result->outcome = std::move(out);
  return ns;
}

namespace {

void put(std::string& out, unsigned v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put(std::string& out, const Message& m) {
  put(out, m.src());
  put(out, m.channel());
  put(out, static_cast<unsigned>(m.type()));
  put(out, static_cast<unsigned>(m.payload().size()));
  for (unsigned v : m.payload()) put(out, v);
}

}  // namespace

std::string serialize_state(const NetworkState& st) {
  std::string out;
  out.reserve(64 * st.nodes.size());
  put(out, st.parity);
  put(out, static_cast<unsigned>(st.nodes.size()));
  for (const NodeState& n : st.nodes) {
    put(out, n.id);
    put(out, static_cast<unsigned>(n.role));
    put(out, static_cast<unsigned>(n.phase));
    put(out, n.ch);
    put(out, n.pid);
    put(out, n.pc);
    put(out, n.tier);
    put(out, n.advertised_tier);
    put(out, n.wait_remaining);
    put(out, n.dwell_remaining);
    put(out, n.visited);
    put(out, n.relays_pending);
    put(out, n.relay_timer);
    put(out, static_cast<unsigned>(n.children.size()));
    for (const auto& [c, chan] : n.children) {
      put(out, c);
      put(out, chan);
    }
    put(out, static_cast<unsigned>(n.pending.size()));
    for (const PendingSend& p : n.pending) {
      put(out, p.msg);
      put(out, p.hold);
      put(out, static_cast<unsigned>(p.parity_gate + 1));
    }
    put(out, static_cast<unsigned>(n.awaiting_grant.size()));
    for (NodeId a : n.awaiting_grant) put(out, a);
    put(out, static_cast<unsigned>(n.grants.size()));
    for (const GrantEntry& g : n.grants) {
      put(out, g.requester);
      put(out, g.granted);
    }
  }
  return out;
}

}  // namespace clusterform
