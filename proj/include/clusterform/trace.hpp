#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "clusterform/explorer.hpp"
#include "clusterform/simulator.hpp"

namespace clusterform {

// One line per slot: stamp, parity, per-channel air, per-node deliveries,
// protocol events and the draws taken. Enough to replay a run by hand.
void write_trace_header(std::ostream& os, const Topology& t,
                        const ProtocolConfig& cfg,
                        const std::vector<Channel>& init);
void write_trace_slot(std::ostream& os, std::uint64_t stamp, unsigned parity,
                      const SlotResult& res,
                      const std::vector<ChoicePoint>& choices,
                      const std::vector<unsigned>& picks);

// Streams every slot of a simulation run into os.
class StreamTracer : public SimObserver {
 public:
  explicit StreamTracer(std::ostream& os) : os_(os) {}
  void on_slot(std::uint64_t stamp, unsigned parity, const SlotResult& res,
               const std::vector<ChoicePoint>& choices,
               const std::vector<unsigned>& picks) override {
    write_trace_slot(os_, stamp, parity, res, choices, picks);
  }

 private:
  std::ostream& os_;
};

std::string render_roles(const NetworkState& st);
std::string render_verdict(const StateGraph& g, const Verdict& v);
std::string render_witness(const StateGraph& g, const FormationWitness& w);
std::string render_lasso(const StateGraph& g, const LassoWitness& w);
std::string render_run(const RunResult& r);
std::string render_runs_csv(const std::vector<RunResult>& rs);
std::string render_sweep(const SweepResult& s);

}  // namespace clusterform
