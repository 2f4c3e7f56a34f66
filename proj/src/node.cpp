#include "clusterform/node.hpp"

#include <algorithm>
#include <stdexcept>

namespace clusterform {

const char* to_string(Phase p) {
  switch (p) {
    case Phase::Listening: return "listening";
    case Phase::AwaitAckResponse: return "await-ack-response";
    case Phase::Scanning: return "scanning";
    case Phase::ReturnedToParent: return "returned-to-parent";
    case Phase::AwaitAssociateAck: return "await-associate-ack";
    case Phase::Advertising: return "advertising";
    case Phase::Idle: return "idle";
  }
  return "?";
}

const char* to_string(ChoiceKind k) {
  switch (k) {
    case ChoiceKind::RandomWaitDraw: return "random-wait";
    case ChoiceKind::ScanChannelPick: return "scan-channel";
    case ChoiceKind::ChannelAssignment: return "channel-assignment";
  }
  return "?";
}

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::Increase: return "increase";
    case EventKind::RoleChange: return "role-change";
    case EventKind::MessageSent: return "sent";
    case EventKind::MessageDelivered: return "delivered";
    case EventKind::TimerExpired: return "timer";
  }
  return "?";
}

namespace {

bool front_eligible(const NodeState& s, unsigned parity) {
  if (s.pending.empty()) return false;
  const PendingSend& f = s.pending.front();
  return f.hold == 0 &&
         (f.parity_gate < 0 || static_cast<unsigned>(f.parity_gate) == parity);
}

bool beacon_due(const NodeState& s, unsigned parity) {
  return s.role == Role::ClusterHead && parity == s.tier % 2 &&
         s.relays_pending == 0;
}

unsigned resolve_checked(ChoiceResolver& resolver, ChoicePoint cp) {
  if (cp.options.empty()) throw std::logic_error("choice point without options");
  unsigned v = resolver.resolve(cp);
  if (std::find(cp.options.begin(), cp.options.end(), v) == cp.options.end()) {
    throw std::logic_error("resolver picked a value outside the options");
  }
  return v;
}

unsigned draw_range(ChoiceResolver& resolver, NodeId node, unsigned lo,
                    unsigned hi) {
  ChoicePoint cp{ChoiceKind::RandomWaitDraw, node, {}};
  for (unsigned v = lo; v <= hi; ++v) cp.options.push_back(v);
  return resolve_checked(resolver, std::move(cp));
}

void push_event(std::vector<StepEvent>* ev, StepEvent e) {
  if (ev) ev->push_back(std::move(e));
}

void change_role(NodeState& ns, Role to, std::vector<StepEvent>* ev) {
  if (!role_transition_allowed(ns.role, to)) {
    throw std::logic_error(std::string("illegal role change ") +
                           to_string(ns.role) + " -> " + to_string(to));
  }
  push_event(ev, {EventKind::RoleChange, ns.id, ns.role, to, {}});
  if (to == Role::ClusterHead || to == Role::ClusterSlave) {
    push_event(ev, {EventKind::Increase, ns.id, ns.role, to, {}});
  }
  ns.role = to;
}

// Remember which beacon we are responding to.
void engage(NodeState& ns, const Message& beacon) {
  ns.pid = beacon.src();
  ns.pc = beacon.channel();
  ns.advertised_tier = beacon.payload()[0];
}

void enqueue(NodeState& ns, Message msg, unsigned hold, int gate) {
  PendingSend p{std::move(msg), hold, gate};
  if (std::find(ns.pending.begin(), ns.pending.end(), p) != ns.pending.end()) {
    return;  // an identical send is already queued
  }
  ns.pending.push_back(std::move(p));
}

void add_child(NodeState& ns, NodeId child, Channel chan) {
  auto it = std::lower_bound(
      ns.children.begin(), ns.children.end(), child,
      [](const std::pair<NodeId, Channel>& e, NodeId v) { return e.first < v; });
  if (it != ns.children.end() && it->first == child) return;
  ns.children.insert(it, {child, chan});
}

void add_awaiting(NodeState& ns, NodeId requester) {
  auto it = std::lower_bound(ns.awaiting_grant.begin(), ns.awaiting_grant.end(),
                             requester);
  if (it != ns.awaiting_grant.end() && *it == requester) return;
  ns.awaiting_grant.insert(it, requester);
}

bool erase_awaiting(NodeState& ns, NodeId requester) {
  auto it = std::lower_bound(ns.awaiting_grant.begin(), ns.awaiting_grant.end(),
                             requester);
  if (it == ns.awaiting_grant.end() || *it != requester) return false;
  ns.awaiting_grant.erase(it);
  return true;
}

void bump_relay(NodeState& ns, const ProtocolConfig& cfg) {
  if (ns.relays_pending < 15) ++ns.relays_pending;
  ns.relay_timer = cfg.relay_patience;
}

void settle_relay(NodeState& ns, const ProtocolConfig& cfg) {
  if (ns.relays_pending == 0) return;
  --ns.relays_pending;
  ns.relay_timer = ns.relays_pending > 0 ? cfg.relay_patience : 0;
}

// Tune to the next unsurveyed channel (the parent channel is never a
// candidate; a fully surveyed set starts over).
void pick_scan_channel(NodeState& ns, const ProtocolConfig& cfg,
                       ChoiceResolver& resolver) {
  std::vector<unsigned> cand;
  for (Channel c = 1; c <= cfg.num_channels; ++c) {
    if (c != ns.pc && !((ns.visited >> (c - 1)) & 1u)) cand.push_back(c);
  }
  if (cand.empty()) {
    ns.visited = 0;
    for (Channel c = 1; c <= cfg.num_channels; ++c) {
      if (c != ns.pc) cand.push_back(c);
    }
  }
  if (cand.empty()) {
    // single-channel network: there is nowhere else to look
    ns.ch = ns.pc;
    ns.dwell_remaining = cfg.scan_dwell_slots;
    return;
  }
  unsigned pick = resolve_checked(
      resolver, ChoicePoint{ChoiceKind::ScanChannelPick, ns.id, cand});
  ns.ch = pick;
  ns.visited |= 1u << (pick - 1);
  ns.dwell_remaining = cfg.scan_dwell_slots;
}

// Start the tentative survey with a total budget of w slots counted from the
// engaging slot: w-1 of them are spent listening elsewhere, then the node
// retunes to the parent channel.
void begin_survey(NodeState& ns, unsigned w, const ProtocolConfig& cfg,
                  ChoiceResolver& resolver) {
  ns.visited = 0;
  ns.wait_remaining = w > 0 ? w - 1 : 0;
  if (ns.wait_remaining == 0) {
    ns.ch = ns.pc;
    ns.phase = Phase::ReturnedToParent;
    ns.dwell_remaining = 0;
    return;
  }
  ns.phase = Phase::Scanning;
  pick_scan_channel(ns, cfg, resolver);
}

// Channel the root hands to a new head. Prefers channels nobody holds yet
// (ascending); once every channel is out it offers previous grants again,
// least recently assigned first.
Channel resolve_assignment(const NodeState& ns, const ProtocolConfig& cfg,
                           ChoiceResolver& resolver) {
  std::vector<unsigned> options;
  for (Channel c = 1; c <= cfg.num_channels; ++c) {
    if (c == ns.ch) continue;
    bool taken = false;
    for (const GrantEntry& g : ns.grants) {
      if (g.granted == c) {
        taken = true;
        break;
      }
    }
    if (!taken) options.push_back(c);
  }
  if (options.empty()) {
    std::vector<std::pair<std::size_t, Channel>> by_age;  // last grant index
    for (Channel c = 1; c <= cfg.num_channels; ++c) {
      if (c == ns.ch) continue;
      std::size_t last = 0;
      bool seen = false;
      for (std::size_t i = 0; i < ns.grants.size(); ++i) {
        if (ns.grants[i].granted == c) {
          last = i;
          seen = true;
        }
      }
      if (seen) by_age.push_back({last, c});
    }
    std::sort(by_age.begin(), by_age.end());
    for (const auto& [idx, c] : by_age) options.push_back(c);
  }
  if (options.empty()) options.push_back(ns.ch);  // single-channel network
  return resolve_checked(
      resolver, ChoicePoint{ChoiceKind::ChannelAssignment, ns.id, options});
}

// Applied when the slot's submission actually left the queue.
void on_sent(NodeState& ns, const Message& m, std::vector<StepEvent>* ev) {
  switch (m.type()) {
    case MessageType::Associate:
      if (m.payload()[1] != ns.id) break;  // forwarded for someone else
      if (m.payload()[0] == kAssociateAsSlave) {
        // the association is not confirmed; the node commits on its own
        change_role(ns, Role::ClusterSlave, ev);
        ns.tier = ns.advertised_tier + 1;
        ns.phase = Phase::Idle;
        ns.ch = ns.pc;
        ns.wait_remaining = 0;
        ns.dwell_remaining = 0;
        ns.visited = 0;
      } else {
        ns.phase = Phase::AwaitAssociateAck;
      }
      break;
    case MessageType::BeaconAck:
      ns.phase = Phase::AwaitAckResponse;
      break;
    default:
      break;
  }
}

bool free_receive(NodeState& ns, const Message& m, SignalClass sig,
                  const ProtocolConfig& cfg, ChoiceResolver& resolver,
                  std::vector<StepEvent>* ev) {
  if (!ns.pending.empty()) return false;  // already committed to a reply
  if (m.type() == MessageType::Beacon) {
    if (sig == SignalClass::Close) {
      // strong signal: join this head as a slave outright; without the
      // acknowledgement handshake a short random hold spreads out
      // neighbours triggered by the same beacon
      unsigned hold = 0;
      if (cfg.variant == Variant::NoAcks) {
        hold = draw_range(resolver, ns.id, 1, cfg.max_random_wait) - 1;
      }
      engage(ns, m);
      enqueue(ns,
              Message(ns.id, m.channel(), MessageType::Associate,
                      {kAssociateAsSlave, ns.id}),
              hold, -1);
      ns.phase = Phase::Listening;
      return true;
    }
    // weak signal: candidate cluster head
    engage(ns, m);
    if (cfg.variant == Variant::WithAcks) {
      // ask for a survey budget first; the phase flips once the ack leaves
      enqueue(ns, Message(ns.id, m.channel(), MessageType::BeaconAck, {}), 0,
              -1);
      return true;
    }
    change_role(ns, Role::Tentative, ev);
    unsigned w = draw_range(resolver, ns.id, cfg.min_tentative_slots,
                            cfg.min_tentative_slots + cfg.max_random_wait - 1);
    begin_survey(ns, w, cfg, resolver);
    return true;
  }
  if (m.type() == MessageType::AckResponse &&
      ns.phase == Phase::AwaitAckResponse && m.payload()[1] == ns.id) {
    change_role(ns, Role::Tentative, ev);
    begin_survey(ns, m.payload()[0], cfg, resolver);
    return true;
  }
  return false;
}

bool tentative_receive(NodeState& ns, const Message& m, SignalClass sig,
                       const ProtocolConfig& cfg, ChoiceResolver& resolver,
                       std::vector<StepEvent>* ev) {
  (void)ev;
  if (!ns.pending.empty()) return false;
  switch (ns.phase) {
    case Phase::Scanning:
      if (m.type() == MessageType::Beacon && sig == SignalClass::Close &&
          m.payload()[0] == ns.advertised_tier) {
        // a close head on the same tier as our candidate parent: joining it
        // as a slave is cheaper than opening a new cluster
        unsigned hold = 0;
        if (cfg.variant == Variant::NoAcks) {
          hold = draw_range(resolver, ns.id, 1, cfg.max_random_wait) - 1;
        }
        engage(ns, m);
        enqueue(ns,
                Message(ns.id, m.channel(), MessageType::Associate,
                        {kAssociateAsSlave, ns.id}),
                hold, -1);
        ns.phase = Phase::Listening;
        ns.wait_remaining = 0;
        ns.dwell_remaining = 0;
        ns.visited = 0;
        return true;
      }
      return false;
    case Phase::ReturnedToParent:
      if (m.type() == MessageType::Beacon && m.src() == ns.pid) {
        ns.advertised_tier = m.payload()[0];
        enqueue(ns,
                Message(ns.id, ns.pc, MessageType::Associate,
                        {kAssociateAsHead, ns.id}),
                0, -1);
        return true;
      }
      return false;
    case Phase::AwaitAssociateAck:
      if (m.type() == MessageType::AssociateAck && m.payload()[1] == ns.id) {
        change_role(ns, Role::ClusterHead, ev);
        ns.tier = ns.advertised_tier + 1;
        ns.ch = m.payload()[0];
        ns.phase = Phase::Advertising;
        ns.wait_remaining = 0;
        ns.dwell_remaining = 0;
        ns.visited = 0;
        return true;
      }
      if (m.type() == MessageType::Beacon && m.src() == ns.pid) {
        // the grant got lost somewhere: ask again; without acks the repeat
        // takes a fresh random hold so colliding requesters can separate
        unsigned hold = 0;
        if (cfg.variant == Variant::NoAcks) {
          hold = draw_range(resolver, ns.id, 1, cfg.max_random_wait) - 1;
        }
        enqueue(ns,
                Message(ns.id, ns.pc, MessageType::Associate,
                        {kAssociateAsHead, ns.id}),
                hold, -1);
        return true;
      }
      return false;
    default:
      return false;
  }
}

bool head_receive(NodeState& ns, const Message& m, const ProtocolConfig& cfg,
                  ChoiceResolver& resolver, std::vector<StepEvent>* ev) {
  (void)ev;
  switch (m.type()) {
    case MessageType::BeaconAck: {
      if (m.channel() != ns.ch) return false;
      enqueue(ns,
              Message(ns.id, ns.ch, MessageType::AckResponse,
                      {cfg.ack_wait_time, m.src()}),
              0, -1);
      return true;
    }
    case MessageType::Associate: {
      if (m.channel() != ns.ch) return false;  // overheard upstream traffic
      const unsigned role_code = m.payload()[0];
      const NodeId requester = m.payload()[1];
      if (role_code == kAssociateAsSlave) {
        add_child(ns, requester, ns.ch);
        return true;
      }
      if (ns.pid == kNoNode) {
        // we are the root: assign the new cluster its channel
        Channel cg = kNoChannel;
        for (const GrantEntry& g : ns.grants) {
          if (g.requester == requester) {
            cg = g.granted;  // repeat request: repeat the old answer
            break;
          }
        }
        if (cg == kNoChannel) {
          cg = resolve_assignment(ns, cfg, resolver);
          ns.grants.push_back({requester, cg});
        }
        if (m.src() == requester) {
          add_child(ns, requester, cg);
          enqueue(ns,
                  Message(ns.id, ns.ch, MessageType::AssociateAck,
                          {cg, requester}),
                  0, -1);
        } else {
          // the answer rides down through relays, which listen upwards in
          // their own advertising slots, i.e. on the opposite parity
          enqueue(ns,
                  Message(ns.id, ns.ch, MessageType::AssociateAck,
                          {cg, requester}),
                  0, static_cast<int>((ns.tier + 1) % 2));
        }
        return true;
      }
      // not the root: pass the request towards it
      PendingSend fwd{Message(ns.id, ns.pc, MessageType::Associate,
                              {kAssociateAsHead, requester}),
                      0, -1};
      if (std::find(ns.pending.begin(), ns.pending.end(), fwd) ==
          ns.pending.end()) {
        ns.pending.push_back(fwd);
        bump_relay(ns, cfg);
        if (m.src() == requester) add_awaiting(ns, requester);
      }
      return true;
    }
    case MessageType::AssociateAck: {
      if (ns.pid == kNoNode) return false;
      if (m.channel() != ns.pc) return false;  // grants arrive from above
      const Channel cg = m.payload()[0];
      const NodeId target = m.payload()[1];
      settle_relay(ns, cfg);
      if (erase_awaiting(ns, target)) {
        // our own requester: it listens on our channel permanently
        add_child(ns, target, cg);
        enqueue(ns,
                Message(ns.id, ns.ch, MessageType::AssociateAck, {cg, target}),
                0, -1);
      } else {
        enqueue(ns,
                Message(ns.id, ns.ch, MessageType::AssociateAck, {cg, target}),
                0, static_cast<int>((ns.tier + 1) % 2));
      }
      return true;
    }
    default:
      return false;
  }
}

void tick_timers(NodeState& ns, bool acted, const ProtocolConfig& cfg,
                 ChoiceResolver& resolver, std::vector<StepEvent>* ev) {
  // relay patience runs no matter what the slot brought
  if (ns.role == Role::ClusterHead && ns.relays_pending > 0) {
    if (ns.relay_timer > 0) --ns.relay_timer;
    if (ns.relay_timer == 0) {
      // nothing came back down: resume advertising, the requesters retry
      ns.relays_pending = 0;
      ns.awaiting_grant.clear();
      push_event(ev, {EventKind::TimerExpired, ns.id, ns.role, ns.role, {}});
    }
  }
  if (acted) return;
  if (ns.role == Role::Free && ns.phase == Phase::Listening &&
      ns.pending.empty()) {
    // nothing heard: cruise the channels
    if (ns.dwell_remaining > 0) --ns.dwell_remaining;
    if (ns.dwell_remaining == 0) {
      ns.ch = (ns.ch % cfg.num_channels) + 1;
      ns.dwell_remaining = cfg.scan_dwell_slots;
    }
    return;
  }
  if (ns.role == Role::Tentative && ns.phase == Phase::Scanning) {
    if (ns.wait_remaining > 0) --ns.wait_remaining;
    if (ns.wait_remaining == 0) {
      // survey over: report back on the parent channel
      ns.ch = ns.pc;
      ns.phase = Phase::ReturnedToParent;
      ns.dwell_remaining = 0;
      ns.visited = 0;
      push_event(ev, {EventKind::TimerExpired, ns.id, ns.role, ns.role, {}});
      return;
    }
    if (ns.dwell_remaining > 0) --ns.dwell_remaining;
    if (ns.dwell_remaining == 0) pick_scan_channel(ns, cfg, resolver);
    return;
  }
}

}  // namespace

Channel listen_channel(const NodeState& s, unsigned parity) {
  if (s.role == Role::ClusterHead && s.pid != kNoNode &&
      s.relays_pending > 0 && parity == s.tier % 2) {
    // advertising is on hold: watch the parent channel for the grant
    return s.pc;
  }
  return s.ch;
}

Message node_emit(const NodeState& s, unsigned parity,
                  const ProtocolConfig& cfg) {
  (void)cfg;
  if (front_eligible(s, parity)) return s.pending.front().msg;
  if (beacon_due(s, parity)) {
    return Message(s.id, s.ch, MessageType::Beacon, {s.tier});
  }
  return empty_message(listen_channel(s, parity));
}

NodeState node_deliver(const NodeState& s, unsigned parity,
                       const Message& delivered, SignalClass signal,
                       const ProtocolConfig& cfg, ChoiceResolver& resolver,
                       std::vector<StepEvent>* events) {
  NodeState ns = s;

  // send side
  const Message sent = node_emit(s, parity, cfg);
  if (!sent.is_empty()) {
    push_event(events, {EventKind::MessageSent, s.id, s.role, s.role, sent});
  }
  if (front_eligible(s, parity)) {
    ns.pending.erase(ns.pending.begin());
    on_sent(ns, sent, events);
  } else if (!ns.pending.empty() && ns.pending.front().hold > 0) {
    --ns.pending.front().hold;
  }

  // receive side
  bool acted = false;
  if (!delivered.is_empty()) {
    push_event(events,
               {EventKind::MessageDelivered, s.id, s.role, s.role, delivered});
    switch (ns.role) {
      case Role::Free:
        acted = free_receive(ns, delivered, signal, cfg, resolver, events);
        break;
      case Role::Tentative:
        acted = tentative_receive(ns, delivered, signal, cfg, resolver, events);
        break;
      case Role::ClusterHead:
        acted = head_receive(ns, delivered, cfg, resolver, events);
        break;
      case Role::ClusterSlave:
        break;
    }
  }

  tick_timers(ns, acted, cfg, resolver, events);
  return ns;
}

std::vector<ChoicePoint> node_choices(const NodeState& s, unsigned parity,
                                      const Message& delivered,
                                      SignalClass signal,
                                      const ProtocolConfig& cfg) {
  class Recorder : public ChoiceResolver {
   public:
    std::vector<ChoicePoint> seen;
    unsigned resolve(const ChoicePoint& cp) override {
      seen.push_back(cp);
      return cp.options.front();
    }
  } rec;
  node_deliver(s, parity, delivered, signal, cfg, rec, nullptr);
  return std::move(rec.seen);
}

}  // namespace clusterform
