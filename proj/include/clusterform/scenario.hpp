#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "clusterform/message.hpp"
#include "clusterform/topology.hpp"

namespace clusterform {

// A named experiment: a topology, a protocol configuration, optional pinned
// initial channels (0 = left open) and analysis defaults.
struct Scenario {
  std::string name;
  Topology topo;
  ProtocolConfig cfg;
  std::vector<Channel> init;  // one entry per node, 0 = unspecified
  std::string analysis = "verify";  // advisory default: verify|sweep|simulate

  std::uint64_t depth_bound = 0;   // 0 = unbounded exploration depth
  std::uint64_t max_states = 0;    // 0 = library default
  unsigned seeds = 100;
  std::uint64_t slot_bound = 5000;

  // Initial channels with unspecified entries defaulted to channel 1, for
  // analyses that need a concrete assignment.
  std::vector<Channel> concrete_init() const;
};

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(unsigned line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  unsigned line() const { return line_; }

 private:
  unsigned line_;
};

// Plain-text scenario description, one directive per line; '#' starts a
// comment. Directives:
//   name <word>
//   nodes <n>                  | tree-height <h>
//   close <a> <b>              range <a> <b>
//   variant with-acks|no-acks  scope global|per-receiver
//   channels <n>
//   init <node> <channel>
//   analysis verify|sweep|simulate
//   depth <n>   max-states <n>   seeds <n>   slot-bound <n>
//   min-tentative <n>  scan-dwell <n>  max-random-wait <n>  ack-wait <n>
//   relay-patience <n>  slot-ms <n>  slots-per-frame <n>  reserved <n>
// Throws ScenarioError with the offending line number.
Scenario parse_scenario(std::istream& in);
Scenario load_scenario_file(const std::string& path);

std::vector<std::string> builtin_scenario_names();
Scenario builtin_scenario(const std::string& name);  // throws on unknown name

}  // namespace clusterform
