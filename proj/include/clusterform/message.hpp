#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace clusterform {

// Node ids are 1-based; 0 is the "nobody" sentinel used by placeholder
// messages. Channels are 1-based as well, 0 meaning "no channel".
using NodeId = unsigned;
using Channel = unsigned;

inline constexpr NodeId kNoNode = 0;
inline constexpr Channel kNoChannel = 0;

enum class MessageType : std::uint8_t {
  Empty,
  Beacon,        // payload: [advertised tier]
  BeaconAck,     // payload: []
  AckResponse,   // payload: [wait budget, target id]
  Associate,     // payload: [requested role code, requester id]
  AssociateAck,  // payload: [granted channel, target id]
};

// Role codes carried in ASSOCIATE payloads.
inline constexpr unsigned kAssociateAsSlave = 0;
inline constexpr unsigned kAssociateAsHead = 1;

const char* to_string(MessageType t);

enum class Role : std::uint8_t {
  Free,
  Tentative,
  ClusterHead,
  ClusterSlave,
};

const char* to_string(Role r);

// FREE may become TENTATIVE or CLUSTER_SLAVE; TENTATIVE may become
// CLUSTER_HEAD or CLUSTER_SLAVE. Head and slave are absorbing.
bool role_transition_allowed(Role from, Role to);

// Does the protocol acknowledge beacons from distant nodes before letting
// them search for a free channel, or do they go tentative immediately?
enum class Variant : std::uint8_t { WithAcks, NoAcks };

const char* to_string(Variant v);

// Global: a channel either carries one message for everyone or is jammed for
// everyone. PerReceiver: each receiver resolves the channel from the set of
// transmitters it can actually hear. The two agree on complete topologies.
enum class CollisionScope : std::uint8_t { Global, PerReceiver };

const char* to_string(CollisionScope s);

class Message {
 public:
  Message() = default;

  // Validates the payload schema for the given type and throws
  // std::invalid_argument on arity or sentinel violations.
  Message(NodeId src, Channel channel, MessageType type,
          std::vector<unsigned> payload = {});

  NodeId src() const { return src_; }
  Channel channel() const { return channel_; }
  MessageType type() const { return type_; }
  const std::vector<unsigned>& payload() const { return payload_; }

  bool is_empty() const { return type_ == MessageType::Empty; }

  bool operator==(const Message&) const = default;

 private:
  NodeId src_ = kNoNode;
  Channel channel_ = kNoChannel;
  MessageType type_ = MessageType::Empty;
  std::vector<unsigned> payload_;
};

// The placeholder occupying a silent or jammed channel.
Message empty_message(Channel ch);

std::string to_string(const Message& m);
std::ostream& operator<<(std::ostream& os, const Message& m);

struct ProtocolConfig {
  unsigned max_id = 3;        // nodes are 1..max_id, node 1 is the root
  unsigned num_channels = 3;  // channels are 1..num_channels
  Variant variant = Variant::WithAcks;
  CollisionScope collision_scope = CollisionScope::Global;

  // Smallest wait budget a node may adopt when it turns tentative.
  unsigned min_tentative_slots = 2;
  // Slots spent listening on one channel while searching for a quiet one.
  unsigned scan_dwell_slots = 2;
  // Random holds and wait budgets are drawn from ranges of this width.
  unsigned max_random_wait = 3;
  // Wait budget granted to an acknowledged node before it must report back.
  unsigned ack_wait_time = 2;
  // Slots a relaying cluster head waits for a grant from above before it
  // gives up and resumes advertising.
  unsigned relay_patience = 16;

  // Physical timing, used only for reporting.
  unsigned slot_ms = 120;
  unsigned slots_per_frame = 12;
  unsigned reserved_per_frame = 2;

  // Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

}  // namespace clusterform
