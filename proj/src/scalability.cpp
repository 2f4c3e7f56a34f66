#include "clusterform/scalability.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace clusterform {

std::string u128_to_string(u128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v > 0) {
    out.insert(out.begin(), static_cast<char>('0' + static_cast<unsigned>(v % 10)));
    v /= 10;
  }
  return out;
}

u128 association_latency(u128 tiers) { return 2 * tiers; }

const char* to_string(Schedule s) {
  return s == Schedule::Sequential ? "sequential" : "root-parallel";
}

u128 per_level_time(unsigned i, Schedule s) {
  if (i > 64) throw std::invalid_argument("tier index capped at 64");
  const u128 heads = u128{1} << i;  // 2^i
  if (s == Schedule::Sequential) {
    return 5 + 2 * heads * i;
  }
  return 7 + heads * i;
}

u128 lower_bound_slots(unsigned h) {
  if (h > 64) throw std::invalid_argument("height capped at 64");
  u128 total = 5 + 2 * static_cast<u128>(h);
  for (unsigned i = 1; i < h; ++i) {
    total += per_level_time(i, Schedule::RootParallel);
  }
  return total;
}

bool superlinearity_check(unsigned h_lo, unsigned h_hi) {
  if (h_lo < 1 || h_lo > h_hi || h_hi > 64) {
    throw std::invalid_argument("bad height range");
  }
  for (unsigned h = h_lo; h <= h_hi; ++h) {
    const long double n =
        static_cast<long double>((u128{1} << (h + 1)) - 1);
    const long double target = 0.25L * n * std::log2(n);
    const long double slots =
        static_cast<long double>(lower_bound_slots(h));
    if (slots < target) return false;
  }
  return true;
}

BoundReport bound_report(unsigned h, const ProtocolConfig& cfg) {
  cfg.validate();
  BoundReport r;
  r.height = h;
  r.slots = lower_bound_slots(h);
  r.frames = (r.slots + cfg.reserved_per_frame - 1) / cfg.reserved_per_frame;
  r.ms = r.frames * cfg.slots_per_frame * cfg.slot_ms;
  return r;
}

std::string to_string(const BoundReport& r) {
  std::ostringstream os;
  os << "height " << r.height << ": >= " << u128_to_string(r.slots)
     << " reserved slots, " << u128_to_string(r.frames) << " slotframes, "
     << u128_to_string(r.ms) << " ms";
  return os.str();
}

}  // namespace clusterform
