#pragma once

#include <cstdint>
#include <string>

#include "clusterform/message.hpp"

namespace clusterform {

// Slot counts for deep trees overflow 64 bits well before height 64.
using u128 = unsigned __int128;

std::string u128_to_string(u128 v);

// Reserved slots for an association handshake spanning t tiers: the request
// climbs t hops and the grant rides t hops back down.
u128 association_latency(u128 tiers);

enum class Schedule : std::uint8_t {
  Sequential,    // heads of a tier settle their children one after another
  RootParallel,  // round trips through the root overlap across heads
};

const char* to_string(Schedule s);

// Reserved slots spent populating tier i+1 from the 2^i heads of tier i of a
// balanced binary tree:
//   Sequential:   5 + 2^{i+1} * i
//   RootParallel: 7 + 2^i * i
u128 per_level_time(unsigned i, Schedule s);

// Minimum reserved slots before a balanced binary tree of height h can
// finish forming, with overlapping root round trips:
//   5 + 2h + sum_{i=1}^{h-1} (7 + 2^i * i)
// h is capped at 64.
u128 lower_bound_slots(unsigned h);

// The bound grows superlinearly in the node count: verifies
//   lower_bound_slots(h) >= (1/4) * n * log2(n),  n = 2^{h+1} - 1
// for every height in [h_lo, h_hi]. The ratio itself is not monotone in h
// (it dips towards the constant before the exponential term dominates), so
// only the lower bound is checked.
bool superlinearity_check(unsigned h_lo, unsigned h_hi);

struct BoundReport {
  unsigned height = 0;
  u128 slots = 0;   // reserved slots
  u128 frames = 0;  // full slotframes holding them
  u128 ms = 0;
};

BoundReport bound_report(unsigned h, const ProtocolConfig& cfg);
std::string to_string(const BoundReport& r);

}  // namespace clusterform
