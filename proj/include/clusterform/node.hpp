#pragma once

#include <cstdint>
#include <vector>

#include "clusterform/message.hpp"
#include "clusterform/topology.hpp"

namespace clusterform {

// Where a node is in its life cycle. Phases refine roles: free nodes listen
// or wait for an acknowledgement, tentative nodes survey channels and then
// report back, joined nodes settle into advertising (heads) or idling
// (slaves).
enum class Phase : std::uint8_t {
  Listening,         // free: cruising channels; also set while a reply waits
  AwaitAckResponse,  // free: acknowledged a distant head, awaiting its answer
  Scanning,          // tentative: surveying the other channels
  ReturnedToParent,  // tentative: back on the parent channel, survey done
  AwaitAssociateAck, // tentative: association requested, grant outstanding
  Advertising,       // cluster head steady state
  Idle,              // cluster slave steady state
};

const char* to_string(Phase p);

// A message waiting in a node's outgoing queue. hold counts emission
// opportunities to skip first; parity_gate restricts sending to slots of one
// parity (-1 means any). The queue is strict FIFO: a blocked front blocks
// everything behind it.
struct PendingSend {
  Message msg;
  unsigned hold = 0;
  int parity_gate = -1;

  bool operator==(const PendingSend&) const = default;
};

struct GrantEntry {
  NodeId requester = kNoNode;
  Channel granted = kNoChannel;

  bool operator==(const GrantEntry&) const = default;
};

struct NodeState {
  NodeId id = kNoNode;
  Role role = Role::Free;
  Phase phase = Phase::Listening;

  // Channel this node works: free/tentative nodes tune it, heads own it as
  // their cluster channel, slaves keep it on the parent channel.
  Channel ch = kNoChannel;

  NodeId pid = kNoNode;   // parent (prospective while not yet joined)
  Channel pc = kNoChannel;  // parent's cluster channel
  unsigned tier = 0;        // meaningful once joined; root is tier 0
  // Tier advertised by the beacon that engaged us; our tier will be +1.
  unsigned advertised_tier = 0;

  // Joined descendants recorded by a head: (child id, channel the child
  // works). Sorted by id.
  std::vector<std::pair<NodeId, Channel>> children;

  // Outgoing FIFO queue.
  std::vector<PendingSend> pending;

  unsigned wait_remaining = 0;   // tentative: survey slots left
  unsigned dwell_remaining = 0;  // slots left on the current listen channel
  std::uint32_t visited = 0;     // bit c-1: channel c surveyed this round

  // Head-side relay bookkeeping: requests forwarded towards the root that
  // still lack a grant. While any are outstanding the head holds its beacon
  // and listens on the parent channel in its own advertising slots.
  std::vector<NodeId> awaiting_grant;  // direct requesters, id-sorted
  unsigned relays_pending = 0;
  unsigned relay_timer = 0;

  // Root only: channels handed out so far, in grant order.
  std::vector<GrantEntry> grants;

  bool joined() const {
    return role == Role::ClusterHead || role == Role::ClusterSlave;
  }

  bool operator==(const NodeState&) const = default;
};

// A point where the protocol leaves the outcome open: the explorer branches
// over options, the simulator applies its policy. options is never empty and
// is ordered: for RandomWaitDraw ascending, for ScanChannelPick ascending,
// for ChannelAssignment preferred-first (unused channels ascending, or all
// candidates oldest-grant-first once every channel is taken).
enum class ChoiceKind : std::uint8_t {
  RandomWaitDraw,
  ScanChannelPick,
  ChannelAssignment,
};

const char* to_string(ChoiceKind k);

struct ChoicePoint {
  ChoiceKind kind = ChoiceKind::RandomWaitDraw;
  NodeId node = kNoNode;
  std::vector<unsigned> options;

  bool operator==(const ChoicePoint&) const = default;
};

class ChoiceResolver {
 public:
  virtual ~ChoiceResolver() = default;
  // Must return one of cp.options.
  virtual unsigned resolve(const ChoicePoint& cp) = 0;
};

// Picks options.front() everywhere: the simulator policy for channel picks.
class FirstOptionResolver : public ChoiceResolver {
 public:
  unsigned resolve(const ChoicePoint& cp) override { return cp.options.front(); }
};

enum class EventKind : std::uint8_t {
  Increase,          // a node joined the tree (became head or slave)
  RoleChange,
  MessageSent,
  MessageDelivered,
  TimerExpired,
};

const char* to_string(EventKind k);

struct StepEvent {
  EventKind kind = EventKind::Increase;
  NodeId node = kNoNode;
  Role role_from = Role::Free;
  Role role_to = Role::Free;
  Message msg;
};

// The submission node s puts on the air this slot (EMPTY on its listen
// channel when it has nothing to say). Pure.
Message node_emit(const NodeState& s, unsigned parity,
                  const ProtocolConfig& cfg);

// The channel the node's radio sits on in this slot when not transmitting.
Channel listen_channel(const NodeState& s, unsigned parity);

// The draws node_deliver would consume this slot given the delivered
// message, in consumption order. signal describes how the receiver hears the
// sender of the delivered message (ignored for EMPTY).
std::vector<ChoicePoint> node_choices(const NodeState& s, unsigned parity,
                                      const Message& delivered,
                                      SignalClass signal,
                                      const ProtocolConfig& cfg);

// Advances node s across one slot: applies the send side of node_emit, then
// the delivered message (EMPTY for silence), then timers. Draws are taken
// from resolver exactly as enumerated by node_choices. Events are appended
// when events != nullptr.
NodeState node_deliver(const NodeState& s, unsigned parity,
                       const Message& delivered, SignalClass signal,
                       const ProtocolConfig& cfg, ChoiceResolver& resolver,
                       std::vector<StepEvent>* events);

}  // namespace clusterform
