#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "clusterform/network.hpp"

namespace clusterform {

// One resolved slot transition. picks holds the values chosen at the source
// state's choice points, in enumeration order.
struct Edge {
  std::uint32_t to = 0;
  std::vector<unsigned> picks;
};

struct ExploreLimits {
  std::uint64_t max_states = 2'000'000;
  std::uint64_t max_depth = UINT64_MAX;
};

// Reachable slot-step graph from one initial configuration. States appear in
// breadth-first discovery order (states[0] is the initial state); formation
// states are absorbing and keep no successors.
struct StateGraph {
  Topology topo;
  ProtocolConfig cfg;
  std::vector<Channel> init_ch;
  std::vector<NetworkState> states;
  std::vector<std::vector<Edge>> succ;
  std::vector<std::uint32_t> depth;            // slots executed to reach it
  std::vector<std::int64_t> bfs_parent;        // -1 for the initial state
  std::vector<std::uint32_t> bfs_parent_edge;  // index into succ[parent]
  std::vector<bool> goal;
  bool truncated = false;  // a limit stopped the search before closure
  std::uint64_t expansions = 0;
};

StateGraph explore(const Topology& t, const std::vector<Channel>& init_ch,
                   const ProtocolConfig& cfg, const ExploreLimits& lim = {});

// Re-execute one stored transition to recover its slot outcome and events.
SlotResult replay_edge(const StateGraph& g, std::uint32_t from, const Edge& e);

// Why a run can get stuck forever, most specific first. NarrowBridge: a
// stranded node's only routes to any head run through slaves, which never
// advertise. AssociateCollision: association requests for head roles keep
// destroying each other. AckCollision: beacon acknowledgements (or the
// slave associations replacing them when acks are off) keep colliding.
enum class FailureClass : std::uint8_t {
  AckCollision,
  AssociateCollision,
  NarrowBridge,
  Other,
};

const char* to_string(FailureClass f);

struct PathStep {
  std::uint32_t state = 0;
  std::uint32_t edge = 0;  // index into succ[state]
};

struct FormationWitness {
  std::vector<PathStep> steps;  // shortest run from the initial state
  std::uint32_t goal_state = 0;
  std::uint64_t formation_slot = 0;  // stamp of the slot completing the tree
};

// An infinite run that never forms the tree: a finite stem into a cycle.
struct LassoWitness {
  std::vector<PathStep> stem;   // may be empty when the cycle starts at init
  std::uint32_t entry = 0;      // first cycle state
  std::vector<PathStep> loop;   // chains entry -> ... -> entry
  FailureClass failure = FailureClass::Other;
  std::vector<NodeId> stranded;  // nodes that never join along the cycle
};

struct Verdict {
  enum class Kind { Holds, Fails, Inconclusive };
  Kind kind = Kind::Inconclusive;
  bool goal_reachable = false;
  std::optional<FormationWitness> witness;
  std::optional<LassoWitness> lasso;
  std::uint64_t states = 0;
  bool truncated = false;
};

const char* to_string(Verdict::Kind k);

// Decides "every node eventually joins the tree" over the explored graph.
// Holds: every infinite run reaches formation. Fails: some cycle avoids it
// (sound even on a truncated graph). Inconclusive: the graph was truncated
// and no such cycle was found.
Verdict check_formation(const StateGraph& g);

struct SweepEntry {
  std::vector<Channel> init;
  Verdict::Kind kind = Verdict::Kind::Inconclusive;
  bool goal_reachable = false;
  std::uint64_t formation_slot = 0;  // valid when goal_reachable
  FailureClass failure = FailureClass::Other;  // valid when kind == Fails
  std::uint64_t states = 0;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  // Fastest formation over all configurations where one is reachable.
  std::optional<std::uint64_t> min_formation_slot;
};

// Checks every assignment of initial channels to nodes. fixed_root pins the
// root's channel; 0 lets it range over all channels as well.
SweepResult sweep_initial_channels(const Topology& t,
                                   const ProtocolConfig& cfg,
                                   Channel fixed_root = 0,
                                   const ExploreLimits& lim = {});

}  // namespace clusterform
