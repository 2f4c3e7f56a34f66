#pragma once

#include <cstdint>
#include <vector>

#include "clusterform/network.hpp"

namespace clusterform {

// Small, portable, seedable generator (the splitmix64 recurrence): the state
// advances by the golden-ratio increment and each output runs through a
// finalizing mix. Chosen so seeded runs replay byte for byte anywhere.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

struct RunResult {
  std::uint64_t seed = 0;
  bool formed = false;
  // Stamp of the slot that completed the tree, or the slot bound when it
  // never did. Slot stamps are 0-based.
  std::uint64_t slots_used = 0;
  std::uint64_t slotframes = 0;
  std::uint64_t ms = 0;
  unsigned joined = 0;
};

// Reserved slots fill slotframes two at a time (or whatever the config
// says); a run that completes at stamp s has consumed ceil(s / reserved)
// full frames.
std::uint64_t frames_for_slots(std::uint64_t slots, const ProtocolConfig& cfg);
std::uint64_t ms_for_slots(std::uint64_t slots, const ProtocolConfig& cfg);

// Per-slot hook, used for trace files.
class SimObserver {
 public:
  virtual ~SimObserver() = default;
  virtual void on_slot(std::uint64_t stamp, unsigned parity,
                       const SlotResult& res,
                       const std::vector<ChoicePoint>& choices,
                       const std::vector<unsigned>& picks) = 0;
};

// One seeded run. Randomness enters in exactly two places: initial channels
// for nodes whose init_ch entry is 0 (or all non-root nodes when init_ch is
// null, drawn in id order), and RandomWaitDraw choice points. Channel picks
// during surveys take the lowest unvisited channel and the root grants the
// lowest unused channel, both deterministic.
RunResult simulate(const Topology& t, const ProtocolConfig& cfg,
                   std::uint64_t seed, std::uint64_t slot_bound,
                   const std::vector<Channel>* init_ch = nullptr,
                   SimObserver* observer = nullptr);

// Runs seeds first_seed .. first_seed+runs-1.
std::vector<RunResult> simulate_batch(const Topology& t,
                                      const ProtocolConfig& cfg,
                                      std::uint64_t first_seed, unsigned runs,
                                      std::uint64_t slot_bound,
                                      const std::vector<Channel>* init_ch = nullptr);

}  // namespace clusterform
