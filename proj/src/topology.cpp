#include "clusterform/topology.hpp"

#include <queue>
#include <stdexcept>
#include <string>

namespace clusterform {

const char* to_string(SignalClass s) {
  switch (s) {
    case SignalClass::Close: return "close";
    case SignalClass::Far: return "far";
    case SignalClass::OutOfRange: return "out-of-range";
  }
  return "?";
}

Topology::Topology(unsigned num_nodes) : n_(num_nodes) {
  if (n_ < 1) throw std::invalid_argument("topology needs at least one node");
  rel_.assign(static_cast<std::size_t>(n_) * n_, kNone);
}

std::uint8_t Topology::at(NodeId a, NodeId b) const {
  return rel_[static_cast<std::size_t>(a - 1) * n_ + (b - 1)];
}

void Topology::set(NodeId a, NodeId b, std::uint8_t v) {
  rel_[static_cast<std::size_t>(a - 1) * n_ + (b - 1)] = v;
  rel_[static_cast<std::size_t>(b - 1) * n_ + (a - 1)] = v;
}

void Topology::check_pair(NodeId a, NodeId b) const {
  if (a < 1 || a > n_ || b < 1 || b > n_) {
    throw std::invalid_argument("node id out of range: " + std::to_string(a) +
                                "," + std::to_string(b));
  }
  if (a == b) throw std::invalid_argument("relations are irreflexive");
}

void Topology::add_close(NodeId a, NodeId b) {
  check_pair(a, b);
  if (at(a, b) == kRange) {
    throw std::invalid_argument("pair already in range: close and range are disjoint");
  }
  set(a, b, kClose);
}

void Topology::add_range(NodeId a, NodeId b) {
  check_pair(a, b);
  if (at(a, b) == kClose) {
    throw std::invalid_argument("pair already close: close and range are disjoint");
  }
  set(a, b, kRange);
}

bool Topology::close(NodeId a, NodeId b) const {
  if (a == b) return false;  // queries are total, mutations are not
  check_pair(a, b);
  return at(a, b) == kClose;
}

bool Topology::range(NodeId a, NodeId b) const {
  if (a == b) return false;
  check_pair(a, b);
  return at(a, b) == kRange;
}

bool Topology::reachable(NodeId a, NodeId b) const {
  if (a == b) return false;
  check_pair(a, b);
  return at(a, b) != kNone;
}

SignalClass classify(const Topology& t, NodeId sender, NodeId receiver) {
  if (sender == receiver) return SignalClass::OutOfRange;
  if (t.close(sender, receiver)) return SignalClass::Close;
  if (t.range(sender, receiver)) return SignalClass::Far;
  return SignalClass::OutOfRange;
}

bool is_well_connected(const Topology& t) {
  const unsigned n = t.size();
  if (n <= 1) return true;
  std::vector<bool> seen(n + 1, false);
  std::queue<NodeId> q;
  q.push(1);
  seen[1] = true;
  unsigned count = 1;
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop();
    for (NodeId v = 1; v <= n; ++v) {
      if (!seen[v] && t.reachable(u, v)) {
        seen[v] = true;
        ++count;
        q.push(v);
      }
    }
  }
  return count == n;
}

std::vector<Topology> enumerate_well_connected(unsigned n) {
  if (n < 1 || n > 4) {
    throw std::invalid_argument("enumeration is only supported for 1..4 nodes");
  }
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId a = 1; a <= n; ++a) {
    for (NodeId b = a + 1; b <= n; ++b) pairs.emplace_back(a, b);
  }
  std::size_t total = 1;
  for (std::size_t i = 0; i < pairs.size(); ++i) total *= 3;

  std::vector<Topology> out;
  for (std::size_t code = 0; code < total; ++code) {
    Topology t(n);
    std::size_t rest = code;
    // First pair takes the most significant trit.
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      std::size_t place = total;
      for (std::size_t j = 0; j <= i; ++j) place /= 3;
      unsigned trit = static_cast<unsigned>((rest / place) % 3);
      rest %= place;
      if (trit == 1) t.add_close(pairs[i].first, pairs[i].second);
      if (trit == 2) t.add_range(pairs[i].first, pairs[i].second);
    }
    if (is_well_connected(t)) out.push_back(std::move(t));
  }
  return out;
}

Topology balanced_binary_tree(unsigned h) {
  if (h > 20) throw std::invalid_argument("tree height capped at 20");
  const unsigned n = (1u << (h + 1)) - 1;
  Topology t(n);
  for (NodeId i = 1; 2 * i + 1 <= n; ++i) {
    t.add_range(i, 2 * i);
    t.add_range(i, 2 * i + 1);
  }
  return t;
}

}  // namespace clusterform
