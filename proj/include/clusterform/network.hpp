#pragma once

#include <string>
#include <vector>

#include "clusterform/node.hpp"
#include "clusterform/topology.hpp"
#include "clusterform/tsch.hpp"

namespace clusterform {

struct NetworkState {
  std::vector<NodeState> nodes;  // index i-1 holds node i
  unsigned parity = 0;           // parity of the next dedicated slot

  bool operator==(const NetworkState&) const = default;
};

// Node 1 starts as the tier-0 cluster head working init_ch[0]; everyone else
// starts free, listening on their entry of init_ch. Throws on bad sizes or
// channels.
NetworkState initial_network(const Topology& t,
                             const std::vector<Channel>& init_ch,
                             const ProtocolConfig& cfg);

unsigned joined_count(const NetworkState& st);

// The tree is formed once every node is a cluster head or slave.
bool formation_complete(const NetworkState& st);

struct SlotResult {
  SlotOutcome outcome;
  std::vector<StepEvent> events;
};

// Every draw the next slot consumes, grouped by node in id order.
std::vector<ChoicePoint> network_choices(const Topology& t,
                                         const NetworkState& st,
                                         const ProtocolConfig& cfg);

// Executes one dedicated slot: collects all submissions, arbitrates the
// channels, hands every node what it heard, and flips the slot parity.
NetworkState network_step(const Topology& t, const NetworkState& st,
                          const ProtocolConfig& cfg, ChoiceResolver& resolver,
                          SlotResult* result);

// Canonical byte encoding: two states compare equal iff their encodings do.
std::string serialize_state(const NetworkState& st);

}  // namespace clusterform
