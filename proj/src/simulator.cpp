#include "clusterform/simulator.hpp"

#include <stdexcept>

namespace clusterform {

std::uint64_t frames_for_slots(std::uint64_t slots, const ProtocolConfig& cfg) {
  return (slots + cfg.reserved_per_frame - 1) / cfg.reserved_per_frame;
}

std::uint64_t ms_for_slots(std::uint64_t slots, const ProtocolConfig& cfg) {
  return frames_for_slots(slots, cfg) * cfg.slots_per_frame * cfg.slot_ms;
}

namespace {

// Random wait draws come from the generator; everything else follows the
// deterministic preference order built into the options.
class SimResolver : public ChoiceResolver {
 public:
  explicit SimResolver(SplitMix64& rng) : rng_(rng) {}

  unsigned resolve(const ChoicePoint& cp) override {
    unsigned v;
    if (cp.kind == ChoiceKind::RandomWaitDraw) {
      v = cp.options[rng_.next() % cp.options.size()];
    } else {
      v = cp.options.front();
    }
    if (recording_) recording_->push_back(v);
    return v;
  }

  void record_into(std::vector<unsigned>* sink) { recording_ = sink; }

 private:
  SplitMix64& rng_;
  std::vector<unsigned>* recording_ = nullptr;
};

}  // namespace

RunResult simulate(const Topology& t, const ProtocolConfig& cfg,
                   std::uint64_t seed, std::uint64_t slot_bound,
                   const std::vector<Channel>* init_ch,
                   SimObserver* observer) {
  if (init_ch && init_ch->size() != t.size()) {
    throw std::invalid_argument("need one initial channel entry per node");
  }

  SplitMix64 rng(seed);
  std::vector<Channel> init(t.size(), 0);
  if (init_ch) init = *init_ch;
  if (init[0] == 0) init[0] = 1;  // root defaults to the first channel
  for (std::size_t i = 1; i < init.size(); ++i) {
    if (init[i] == 0) {
      init[i] = static_cast<Channel>(rng.next() % cfg.num_channels + 1);
    }
  }

  NetworkState st = initial_network(t, init, cfg);
  SimResolver resolver(rng);

  RunResult r;
  r.seed = seed;

  for (std::uint64_t stamp = 0; stamp < slot_bound; ++stamp) {
    if (formation_complete(st)) break;
    std::vector<ChoicePoint> choices;
    std::vector<unsigned> picks;
    if (observer) {
      choices = network_choices(t, st, cfg);
      resolver.record_into(&picks);
    }
    SlotResult res;
    const unsigned parity = st.parity;
    st = network_step(t, st, cfg, resolver, &res);
    if (observer) {
      resolver.record_into(nullptr);
      observer->on_slot(stamp, parity, res, choices, picks);
    }
    if (formation_complete(st)) {
      r.formed = true;
      r.slots_used = stamp;
      break;
    }
  }

  if (!r.formed) {
    r.formed = formation_complete(st);  // complete at slot 0 (trivial nets)
    r.slots_used = r.formed ? 0 : slot_bound;
  }
  r.joined = joined_count(st);
  r.slotframes = frames_for_slots(r.slots_used, cfg);
  r.ms = ms_for_slots(r.slots_used, cfg);
  return r;
}

std::vector<RunResult> simulate_batch(const Topology& t,
                                      const ProtocolConfig& cfg,
                                      std::uint64_t first_seed, unsigned runs,
                                      std::uint64_t slot_bound,
                                      const std::vector<Channel>* init_ch) {
  std::vector<RunResult> out;
  out.reserve(runs);
  for (unsigned k = 0; k < runs; ++k) {
    out.push_back(simulate(t, cfg, first_seed + k, slot_bound, init_ch));
  }
  return out;
}

}  // namespace clusterform
