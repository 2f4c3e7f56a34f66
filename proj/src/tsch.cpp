#include "clusterform/tsch.hpp"

#include <stdexcept>
#include <string>

namespace clusterform {

const Message& find_id(NodeId i, const Traffic& tr) {
  for (const Message& m : tr) {
    if (m.src() == i) return m;
  }
  throw std::out_of_range("no message from node " + std::to_string(i));
}

Traffic find_channel(Channel c, const Traffic& tr) {
  Traffic out;
  for (const Message& m : tr) {
    if (m.channel() == c) out.push_back(m);
  }
  return out;
}

Traffic remove_collision(const Traffic& tr, unsigned num_channels) {
  for (const Message& m : tr) {
    if (m.is_empty()) {
      throw std::invalid_argument("remove_collision expects submissions only");
    }
    if (m.channel() < 1 || m.channel() > num_channels) {
      throw std::invalid_argument("submission on unknown channel " +
                                  std::to_string(m.channel()));
    }
  }
  Traffic out;
  out.reserve(num_channels);
  for (Channel c = 1; c <= num_channels; ++c) {
    Traffic on_c = find_channel(c, tr);
    if (on_c.size() == 1) {
      out.push_back(on_c.front());
    } else {
      out.push_back(empty_message(c));
    }
  }
  return out;
}

SlotOutcome step_slot(const Topology& t, const Traffic& submissions,
                      const ProtocolConfig& cfg) {
  const unsigned n = t.size();
  if (submissions.size() != n) {
    throw std::invalid_argument("need one submission per node");
  }
  for (NodeId i = 1; i <= n; ++i) {
    const Message& m = submissions[i - 1];
    if (!m.is_empty() && m.src() != i) {
      throw std::invalid_argument("submission " + std::to_string(i) +
                                  " signed by node " + std::to_string(m.src()));
    }
    if (m.channel() < 1 || m.channel() > cfg.num_channels) {
      throw std::invalid_argument("submission on unknown channel " +
                                  std::to_string(m.channel()));
    }
  }

  SlotOutcome out;
  for (const Message& m : submissions) {
    if (!m.is_empty()) out.sent.push_back(m);
  }
  out.on_air = remove_collision(out.sent, cfg.num_channels);

  out.delivered.reserve(n);
  for (NodeId i = 1; i <= n; ++i) {
    const Channel c = submissions[i - 1].channel();
    const bool transmitting = !submissions[i - 1].is_empty();
    if (transmitting) {
      // Half-duplex: a transmitter hears nothing in its own slot.
      out.delivered.push_back(empty_message(c));
      continue;
    }
    if (cfg.collision_scope == CollisionScope::Global) {
      const Message& winner = out.on_air[c - 1];
      if (winner.is_empty() || !t.reachable(winner.src(), i)) {
        out.delivered.push_back(empty_message(c));
      } else {
        out.delivered.push_back(winner);
      }
    } else {
      // Only transmitters this receiver can hear compete at its antenna.
      const Message* heard = nullptr;
      bool jammed = false;
      for (const Message& m : out.sent) {
        if (m.channel() != c || !t.reachable(m.src(), i)) continue;
        if (heard) {
          jammed = true;
          break;
        }
        heard = &m;
      }
      if (heard && !jammed) {
        out.delivered.push_back(*heard);
      } else {
        out.delivered.push_back(empty_message(c));
      }
    }
  }
  return out;
}

}  // namespace clusterform
