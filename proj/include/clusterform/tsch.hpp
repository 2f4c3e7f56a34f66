#pragma once

#include <vector>

#include "clusterform/message.hpp"
#include "clusterform/topology.hpp"

namespace clusterform {

using Traffic = std::vector<Message>;

// First message in tr sent by node i; throws std::out_of_range if absent.
const Message& find_id(NodeId i, const Traffic& tr);

// All messages in tr on channel c, in their original order.
Traffic find_channel(Channel c, const Traffic& tr);

// Per-channel arbitration. tr must contain only non-EMPTY submissions; the
// result has exactly num_channels entries where position c-1 describes
// channel c: the unique message submitted there, or the EMPTY placeholder
// when the channel was silent or jammed by two or more transmitters.
Traffic remove_collision(const Traffic& tr, unsigned num_channels);

struct SlotOutcome {
  Traffic sent;     // the non-EMPTY submissions, in node id order
  Traffic on_air;   // remove_collision over sent
  Traffic delivered;  // position i-1: what node i hears (EMPTY when nothing)
};

// One dedicated time slot: every node submits exactly one message
// (submissions[i-1] belongs to node i; an EMPTY submission means node i
// listens on that channel). Transmitters never hear their own slot, and a
// receiver only hears transmitters it can reach.
SlotOutcome step_slot(const Topology& t, const Traffic& submissions,
                      const ProtocolConfig& cfg);

}  // namespace clusterform
