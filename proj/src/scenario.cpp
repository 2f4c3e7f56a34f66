#include "clusterform/scenario.hpp"

#include <fstream>
#include <sstream>

namespace clusterform {

std::vector<Channel> Scenario::concrete_init() const {
  std::vector<Channel> out = init;
  for (Channel& c : out) {
    if (c == 0) c = 1;
  }
  return out;
}

namespace {

unsigned parse_unsigned(const std::string& tok, unsigned line) {
  try {
    std::size_t pos = 0;
    unsigned long v = std::stoul(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return static_cast<unsigned>(v);
  } catch (const std::exception&) {
    throw ScenarioError(line, "expected a number, got '" + tok + "'");
  }
}

}  // namespace

Scenario parse_scenario(std::istream& in) {
  Scenario sc;
  bool have_topo = false;
  std::vector<std::pair<Channel, Channel>> pending_init;  // (node, channel)
  struct EdgeDirective {
    bool close;
    NodeId a, b;
    unsigned line;
  };
  std::vector<EdgeDirective> edges;

  std::string raw;
  unsigned line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string text = raw.substr(0, raw.find('#'));
    std::istringstream ls(text);
    std::string key;
    if (!(ls >> key)) continue;

    auto one = [&]() -> std::string {
      std::string tok;
      if (!(ls >> tok)) throw ScenarioError(line, key + " needs an argument");
      return tok;
    };

    if (key == "name") {
      sc.name = one();
    } else if (key == "nodes") {
      if (have_topo) throw ScenarioError(line, "topology already declared");
      unsigned n = parse_unsigned(one(), line);
      if (n < 1) throw ScenarioError(line, "need at least one node");
      sc.topo = Topology(n);
      have_topo = true;
    } else if (key == "tree-height") {
      if (have_topo) throw ScenarioError(line, "topology already declared");
      sc.topo = balanced_binary_tree(parse_unsigned(one(), line));
      have_topo = true;
    } else if (key == "close" || key == "range") {
      NodeId a = parse_unsigned(one(), line);
      NodeId b = parse_unsigned(one(), line);
      edges.push_back({key == "close", a, b, line});
    } else if (key == "variant") {
      std::string v = one();
      if (v == "with-acks") sc.cfg.variant = Variant::WithAcks;
      else if (v == "no-acks") sc.cfg.variant = Variant::NoAcks;
      else throw ScenarioError(line, "variant must be with-acks or no-acks");
    } else if (key == "scope") {
      std::string v = one();
      if (v == "global") sc.cfg.collision_scope = CollisionScope::Global;
      else if (v == "per-receiver")
        sc.cfg.collision_scope = CollisionScope::PerReceiver;
      else throw ScenarioError(line, "scope must be global or per-receiver");
    } else if (key == "channels") {
      sc.cfg.num_channels = parse_unsigned(one(), line);
    } else if (key == "init") {
      NodeId n = parse_unsigned(one(), line);
      Channel c = parse_unsigned(one(), line);
      pending_init.push_back({n, c});
    } else if (key == "analysis") {
      std::string v = one();
      if (v != "verify" && v != "sweep" && v != "simulate") {
        throw ScenarioError(line, "analysis must be verify, sweep or simulate");
      }
      sc.analysis = v;
    } else if (key == "depth") {
      sc.depth_bound = parse_unsigned(one(), line);
    } else if (key == "max-states") {
      sc.max_states = parse_unsigned(one(), line);
    } else if (key == "seeds") {
      sc.seeds = parse_unsigned(one(), line);
    } else if (key == "slot-bound") {
      sc.slot_bound = parse_unsigned(one(), line);
    } else if (key == "min-tentative") {
      sc.cfg.min_tentative_slots = parse_unsigned(one(), line);
    } else if (key == "scan-dwell") {
      sc.cfg.scan_dwell_slots = parse_unsigned(one(), line);
    } else if (key == "max-random-wait") {
      sc.cfg.max_random_wait = parse_unsigned(one(), line);
    } else if (key == "ack-wait") {
      sc.cfg.ack_wait_time = parse_unsigned(one(), line);
    } else if (key == "relay-patience") {
      sc.cfg.relay_patience = parse_unsigned(one(), line);
    } else if (key == "slot-ms") {
      sc.cfg.slot_ms = parse_unsigned(one(), line);
    } else if (key == "slots-per-frame") {
      sc.cfg.slots_per_frame = parse_unsigned(one(), line);
    } else if (key == "reserved") {
      sc.cfg.reserved_per_frame = parse_unsigned(one(), line);
    } else {
      throw ScenarioError(line, "unknown directive '" + key + "'");
    }

    std::string extra;
    if (ls >> extra) {
      throw ScenarioError(line, "unexpected trailing '" + extra + "'");
    }
  }

  if (!have_topo) throw ScenarioError(line, "no topology declared");
  sc.cfg.max_id = sc.topo.size();

  for (const EdgeDirective& e : edges) {
    try {
      if (e.close) sc.topo.add_close(e.a, e.b);
      else sc.topo.add_range(e.a, e.b);
    } catch (const std::invalid_argument& ex) {
      throw ScenarioError(e.line, ex.what());
    }
  }

  sc.init.assign(sc.topo.size(), 0);
  for (const auto& [n, c] : pending_init) {
    if (n < 1 || n > sc.topo.size()) {
      throw ScenarioError(line, "init for unknown node " + std::to_string(n));
    }
    if (c < 1 || c > sc.cfg.num_channels) {
      throw ScenarioError(line, "init channel out of range for node " +
                                    std::to_string(n));
    }
    sc.init[n - 1] = c;
  }

  try {
    sc.cfg.validate();
  } catch (const std::invalid_argument& ex) {
    throw ScenarioError(line, ex.what());
  }
  if (sc.name.empty()) sc.name = "unnamed";
  return sc;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  return parse_scenario(in);
}

std::vector<std::string> builtin_scenario_names() {
  return {"two_joiner_race", "ack_collision", "associate_collision",
          "narrow_bridge", "binary_tree_h3"};
}

Scenario builtin_scenario(const std::string& name) {
  Scenario sc;
  sc.name = name;
  if (name == "two_joiner_race") {
    // one head, two distant joiners racing for the reply slots
    sc.topo = Topology(3);
    sc.topo.add_range(1, 2);
    sc.topo.add_range(1, 3);
    sc.cfg.variant = Variant::NoAcks;
    sc.init = {1, 1, 1};
    sc.analysis = "sweep";
  } else if (name == "ack_collision") {
    // two distant nodes acknowledge the same beacon forever
    sc.topo = Topology(3);
    sc.topo.add_range(1, 2);
    sc.topo.add_range(1, 3);
    sc.cfg.variant = Variant::WithAcks;
    sc.init = {1, 1, 1};
    sc.analysis = "verify";
  } else if (name == "associate_collision") {
    // same race without the acknowledgement handshake: the association
    // requests themselves can collide every round
    sc.topo = Topology(3);
    sc.topo.add_range(1, 2);
    sc.topo.add_range(1, 3);
    sc.cfg.variant = Variant::NoAcks;
    sc.init = {1, 1, 1};
    sc.analysis = "verify";
  } else if (name == "narrow_bridge") {
    // the only route outwards runs through a node that joins as a slave
    // and therefore never advertises
    sc.topo = Topology(3);
    sc.topo.add_close(1, 2);
    sc.topo.add_range(2, 3);
    sc.cfg.variant = Variant::WithAcks;
    sc.init = {1, 1, 1};
    sc.analysis = "verify";
  } else if (name == "binary_tree_h3") {
    sc.topo = balanced_binary_tree(3);
    sc.cfg.variant = Variant::WithAcks;
    sc.init.assign(sc.topo.size(), 0);
    sc.analysis = "simulate";
    sc.seeds = 100;
    sc.slot_bound = 5000;
  } else {
    throw std::invalid_argument("unknown scenario: " + name);
  }
  sc.cfg.max_id = sc.topo.size();
  if (sc.init.empty()) sc.init.assign(sc.topo.size(), 0);
  return sc;
}

}  // namespace clusterform
