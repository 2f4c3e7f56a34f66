#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "clusterform/explorer.hpp"
#include "clusterform/scalability.hpp"
#include "clusterform/scenario.hpp"
#include "clusterform/simulator.hpp"
#include "clusterform/trace.hpp"

namespace {

using namespace clusterform;

constexpr int kOk = 0;
constexpr int kPropertyFails = 1;
constexpr int kUsageError = 2;
constexpr int kInconclusive = 3;

Scenario load(const std::string& arg) {
  for (const std::string& n : builtin_scenario_names()) {
    if (n == arg) return builtin_scenario(arg);
  }
  return load_scenario_file(arg);
}

void apply_overrides(Scenario& sc, const std::string& variant,
                     const std::string& scope, unsigned channels) {
  if (variant == "with-acks") sc.cfg.variant = Variant::WithAcks;
  else if (variant == "no-acks") sc.cfg.variant = Variant::NoAcks;
  if (scope == "global") sc.cfg.collision_scope = CollisionScope::Global;
  else if (scope == "per-receiver")
    sc.cfg.collision_scope = CollisionScope::PerReceiver;
  if (channels > 0) sc.cfg.num_channels = channels;
  sc.cfg.validate();
}

ExploreLimits limits_for(const Scenario& sc, std::uint64_t depth,
                         std::uint64_t max_states) {
  ExploreLimits lim;
  if (depth > 0) lim.max_depth = depth;
  else if (sc.depth_bound > 0) lim.max_depth = sc.depth_bound;
  if (max_states > 0) lim.max_states = max_states;
  else if (sc.max_states > 0) lim.max_states = sc.max_states;
  return lim;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Cluster-tree formation over dedicated time slots: exhaustive state "
      "exploration, seeded simulation and growth bounds"};
  app.require_subcommand(1);

  std::string scenario_arg, variant, scope, trace_path, format = "text";
  unsigned channels = 0;
  std::uint64_t depth = 0, max_states = 0, slot_bound = 0;
  std::uint64_t seed = 1;
  unsigned seeds = 0;
  bool sweep = false;
  unsigned height = 1, height_max = 0;
  std::string schedule = "root-parallel";

  auto add_scenario_opts = [&](CLI::App* cmd) {
    cmd->add_option("scenario", scenario_arg,
                    "builtin scenario name or scenario file path")
        ->required();
    cmd->add_option("--variant", variant, "with-acks | no-acks")
        ->check(CLI::IsMember({"with-acks", "no-acks"}));
    cmd->add_option("--scope", scope, "global | per-receiver")
        ->check(CLI::IsMember({"global", "per-receiver"}));
    cmd->add_option("--channels", channels, "number of channels");
  };

  CLI::App* verify =
      app.add_subcommand("verify", "decide whether every node always joins");
  add_scenario_opts(verify);
  verify->add_option("--depth", depth, "exploration depth bound (slots)");
  verify->add_option("--max-states", max_states, "state budget");

  CLI::App* witness = app.add_subcommand(
      "witness", "show the fastest run that forms the tree");
  add_scenario_opts(witness);
  witness->add_option("--depth", depth, "exploration depth bound (slots)");
  witness->add_option("--max-states", max_states, "state budget");
  witness->add_flag("--sweep", sweep,
                    "try every initial channel assignment and report the "
                    "fastest formation overall");

  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "seeded random runs");
  add_scenario_opts(simulate_cmd);
  simulate_cmd->add_option("--seed", seed, "first seed (default 1)");
  simulate_cmd->add_option("--seeds", seeds, "number of seeded runs");
  simulate_cmd->add_option("--slot-bound", slot_bound, "give up after this many slots");
  simulate_cmd->add_option("--trace", trace_path,
                           "write a per-slot trace of the first run");
  simulate_cmd->add_option("--format", format, "text | csv")
      ->check(CLI::IsMember({"text", "csv"}));

  CLI::App* bound =
      app.add_subcommand("bound", "formation-time lower bounds for balanced "
                                  "binary trees");
  bound->add_option("--height", height, "tree height")->required();
  bound->add_option("--height-max", height_max,
                    "report a range of heights up to this one");
  bound->add_option("--schedule", schedule, "sequential | root-parallel")
      ->check(CLI::IsMember({"sequential", "root-parallel"}));
  bound->add_option("--format", format, "text | csv")
      ->check(CLI::IsMember({"text", "csv"}));

  CLI::App* scenarios =
      app.add_subcommand("scenarios", "list builtin scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (scenarios->parsed()) {
      for (const std::string& n : builtin_scenario_names()) {
        Scenario sc = builtin_scenario(n);
        std::cout << n << ": " << sc.topo.size() << " nodes, "
                  << to_string(sc.cfg.variant) << ", default analysis "
                  << sc.analysis << "\n";
      }
      return kOk;
    }

    if (bound->parsed()) {
      unsigned hi = height_max > 0 ? height_max : height;
      if (hi < height) {
        std::cerr << "error: --height-max below --height\n";
        return kUsageError;
      }
      ProtocolConfig cfg;
      if (format == "csv") std::cout << "height,slots,frames,ms\n";
      for (unsigned h = height; h <= hi; ++h) {
        BoundReport r = bound_report(h, cfg);
        if (format == "csv") {
          std::cout << h << "," << u128_to_string(r.slots) << ","
                    << u128_to_string(r.frames) << "," << u128_to_string(r.ms)
                    << "\n";
        } else {
          std::cout << to_string(r) << "\n";
        }
      }
      if (schedule == "sequential" && format == "text") {
        std::cout << "per-level slots (sequential):";
        for (unsigned i = 1; i < hi; ++i) {
          std::cout << " " << u128_to_string(per_level_time(i, Schedule::Sequential));
        }
        std::cout << "\n";
      }
      return kOk;
    }

    Scenario sc = load(scenario_arg);
    apply_overrides(sc, variant, scope, channels);

    if (verify->parsed()) {
      StateGraph g = explore(sc.topo, sc.concrete_init(), sc.cfg,
                             limits_for(sc, depth, max_states));
      Verdict v = check_formation(g);
      std::cout << "scenario: " << sc.name << "\n" << render_verdict(g, v);
      switch (v.kind) {
        case Verdict::Kind::Holds: return kOk;
        case Verdict::Kind::Fails: return kPropertyFails;
        case Verdict::Kind::Inconclusive: return kInconclusive;
      }
    }

    if (witness->parsed()) {
      if (sweep) {
        SweepResult s = sweep_initial_channels(sc.topo, sc.cfg, 0,
                                               limits_for(sc, depth, max_states));
        std::cout << "scenario: " << sc.name << "\n" << render_sweep(s);
        return s.min_formation_slot ? kOk : kPropertyFails;
      }
      StateGraph g = explore(sc.topo, sc.concrete_init(), sc.cfg,
                             limits_for(sc, depth, max_states));
      Verdict v = check_formation(g);
      std::cout << "scenario: " << sc.name << "\n";
      if (v.witness) {
        std::cout << render_witness(g, *v.witness);
        return kOk;
      }
      if (v.truncated) {
        std::cout << "no formation found within the explored bound\n";
        return kInconclusive;
      }
      std::cout << "formation is unreachable from this configuration\n";
      return kPropertyFails;
    }

    if (simulate_cmd->parsed()) {
      const std::uint64_t bound_slots =
          slot_bound > 0 ? slot_bound : sc.slot_bound;
      const unsigned run_count = seeds > 0 ? seeds : sc.seeds;
      const std::vector<Channel> init = sc.init;

      if (!trace_path.empty()) {
        std::ofstream tf(trace_path);
        if (!tf) {
          std::cerr << "error: cannot write " << trace_path << "\n";
          return kUsageError;
        }
        write_trace_header(tf, sc.topo, sc.cfg, init);
        StreamTracer tracer(tf);
        RunResult r = simulate(sc.topo, sc.cfg, seed, bound_slots, &init,
                               &tracer);
        std::cout << render_run(r) << "\n";
        return kOk;
      }

      std::vector<RunResult> rs =
          simulate_batch(sc.topo, sc.cfg, seed, run_count, bound_slots, &init);
      if (format == "csv") {
        std::cout << render_runs_csv(rs);
      } else {
        std::cout << "scenario: " << sc.name << "\n";
        unsigned formed = 0;
        std::uint64_t min_slots = 0, max_slots = 0;
        for (const RunResult& r : rs) {
          std::cout << render_run(r) << "\n";
          if (r.formed) {
            if (formed == 0 || r.slots_used < min_slots) min_slots = r.slots_used;
            if (formed == 0 || r.slots_used > max_slots) max_slots = r.slots_used;
            ++formed;
          }
        }
        std::cout << "formed " << formed << "/" << rs.size();
        if (formed > 0) {
          std::cout << " fastest=" << min_slots << " slowest=" << max_slots;
        }
        std::cout << "\n";
      }
      return kOk;
    }
  } catch (const ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}
