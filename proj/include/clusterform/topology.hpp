#pragma once

#include <cstdint>
#include <vector>

#include "clusterform/message.hpp"

namespace clusterform {

// How a receiver hears a given transmitter.
enum class SignalClass : std::uint8_t { Close, Far, OutOfRange };

const char* to_string(SignalClass s);

// Undirected radio connectivity over nodes 1..size(). Every unordered pair
// is in exactly one of three states: close (strong signal), in range only
// (weak signal), or out of range. Close and range are disjoint, symmetric
// and irreflexive.
class Topology {
 public:
  Topology() = default;
  explicit Topology(unsigned num_nodes);

  unsigned size() const { return n_; }

  // Both throw std::invalid_argument on self-pairs, ids out of range, or an
  // attempt to mark a pair with both relations.
  void add_close(NodeId a, NodeId b);
  void add_range(NodeId a, NodeId b);

  bool close(NodeId a, NodeId b) const;
  bool range(NodeId a, NodeId b) const;
  // close or range
  bool reachable(NodeId a, NodeId b) const;

  bool operator==(const Topology&) const = default;

 private:
  enum : std::uint8_t { kNone = 0, kClose = 1, kRange = 2 };
  unsigned n_ = 0;
  std::vector<std::uint8_t> rel_;  // n_*n_ matrix, symmetric

  std::uint8_t at(NodeId a, NodeId b) const;
  void set(NodeId a, NodeId b, std::uint8_t v);
  void check_pair(NodeId a, NodeId b) const;
};

// Close wins over range-only; a node is never in range of itself.
SignalClass classify(const Topology& t, NodeId sender, NodeId receiver);

// True when the reachability graph connects all nodes.
bool is_well_connected(const Topology& t);

// All well-connected topologies over n nodes, enumerated by assigning each
// unordered pair (in lexicographic order (1,2),(1,3),...,(2,3),...) one of
// {out-of-range, close, range}, with the first pair most significant and
// out-of-range < close < range. Guarded to n <= 4: the count grows as
// 3^(n(n-1)/2).
std::vector<Topology> enumerate_well_connected(unsigned n);

// Complete tree of height h (h=0 is a single node) where node i has children
// 2i and 2i+1, every parent-child edge in range but not close. Useful for
// scale runs: height h means 2^(h+1)-1 nodes.
Topology balanced_binary_tree(unsigned h);

}  // namespace clusterform
