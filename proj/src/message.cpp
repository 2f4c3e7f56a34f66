#include "clusterform/message.hpp"

#include <ostream>
#include <sstream>
#include <stdexcept>

namespace clusterform {

namespace {

std::size_t expected_arity(MessageType t) {
  switch (t) {
    case MessageType::Empty:
    case MessageType::BeaconAck:
      return 0;
    case MessageType::Beacon:
      return 1;
    case MessageType::AckResponse:
    case MessageType::Associate:
    case MessageType::AssociateAck:
      return 2;
  }
  throw std::invalid_argument("unknown message type");
}

}  // namespace

const char* to_string(MessageType t) {
  switch (t) {
    case MessageType::Empty: return "EMPTY";
    case MessageType::Beacon: return "BEACON";
    case MessageType::BeaconAck: return "BEACON_ACK";
    case MessageType::AckResponse: return "ACK_RESPONSE";
    case MessageType::Associate: return "ASSOCIATE";
    case MessageType::AssociateAck: return "ASSOCIATE_ACK";
  }
  return "?";
}

const char* to_string(Role r) {
  switch (r) {
    case Role::Free: return "FREE";
    case Role::Tentative: return "TENTATIVE";
    case Role::ClusterHead: return "CLUSTER_HEAD";
    case Role::ClusterSlave: return "CLUSTER_SLAVE";
  }
  return "?";
}

bool role_transition_allowed(Role from, Role to) {
  if (from == to) return true;
  switch (from) {
    case Role::Free:
      return to == Role::Tentative || to == Role::ClusterSlave;
    case Role::Tentative:
      return to == Role::ClusterHead || to == Role::ClusterSlave;
    case Role::ClusterHead:
    case Role::ClusterSlave:
      return false;
  }
  return false;
}

const char* to_string(Variant v) {
  return v == Variant::WithAcks ? "with-acks" : "no-acks";
}

const char* to_string(CollisionScope s) {
  return s == CollisionScope::Global ? "global" : "per-receiver";
}

Message::Message(NodeId src, Channel channel, MessageType type,
                 std::vector<unsigned> payload)
    : src_(src), channel_(channel), type_(type), payload_(std::move(payload)) {
  if (payload_.size() != expected_arity(type_)) {
    throw std::invalid_argument(std::string("bad payload arity for ") +
                                to_string(type_));
  }
  if (type_ == MessageType::Empty) {
    if (src_ != kNoNode) {
      throw std::invalid_argument("EMPTY messages carry no sender");
    }
  } else {
    if (src_ == kNoNode) {
      throw std::invalid_argument("non-EMPTY messages need a sender");
    }
  }
  if (channel_ == kNoChannel) {
    throw std::invalid_argument("messages need a channel");
  }
  if (type_ == MessageType::Associate && payload_[0] != kAssociateAsSlave &&
      payload_[0] != kAssociateAsHead) {
    throw std::invalid_argument("ASSOCIATE role code must be 0 or 1");
  }
  if ((type_ == MessageType::AckResponse || type_ == MessageType::Associate ||
       type_ == MessageType::AssociateAck) &&
      payload_[1] == kNoNode) {
    throw std::invalid_argument("message needs a real target/requester id");
  }
  if (type_ == MessageType::AssociateAck && payload_[0] == kNoChannel) {
    throw std::invalid_argument("granted channel may not be the sentinel");
  }
}

Message empty_message(Channel ch) {
  return Message(kNoNode, ch, MessageType::Empty);
}

std::string to_string(const Message& m) {
  std::ostringstream os;
  os << m;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Message& m) {
  if (m.is_empty()) return os << "-@" << m.channel();
  os << m.src() << ":" << to_string(m.type()) << "[";
  for (std::size_t i = 0; i < m.payload().size(); ++i) {
    if (i) os << ",";
    os << m.payload()[i];
  }
  return os << "]@" << m.channel();
}

void ProtocolConfig::validate() const {
  if (max_id < 1) throw std::invalid_argument("need at least one node");
  if (num_channels < 1) throw std::invalid_argument("need at least one channel");
  if (min_tentative_slots < 1) {
    throw std::invalid_argument("min_tentative_slots must be positive");
  }
  if (scan_dwell_slots < 1) {
    throw std::invalid_argument("scan_dwell_slots must be positive");
  }
  if (max_random_wait < 1) {
    throw std::invalid_argument("max_random_wait must be positive");
  }
  if (ack_wait_time < 1) {
    throw std::invalid_argument("ack_wait_time must be positive");
  }
  if (slots_per_frame < 1 || reserved_per_frame < 1 ||
      reserved_per_frame > slots_per_frame) {
    throw std::invalid_argument("bad slotframe shape");
  }
}

}  // namespace clusterform
