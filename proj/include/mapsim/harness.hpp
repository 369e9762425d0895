#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mapsim/federation.hpp"
#include "mapsim/records.hpp"
#include "mapsim/tradeoff.hpp"

namespace mapsim {

struct ExperimentSpec {
    std::string name = "experiment";
    SimConfig cfg;
    Regime regime = Regime::federated;
    int episodes = 200;
    bool dynamic_map_management = false;
    std::uint64_t base_seed = 1;
    bool fresh = false;  // training: discard an existing checkpoint
};

struct EvalOptions {
    const PolicyRegistry* registry = nullptr;  // nullptr = uniform-random actions
    Regime regime = Regime::federated;
    bool dynamic_maps = false;
    ActMode mode = ActMode::greedy;
    int initial_m_s = 0;  // 0 = ceil(n_ue / beam_limit), clamped to the fleet
    bool verbose_trace = false;
};

struct EpisodeResult {
    std::vector<SlotRow> rows;
    double mean_sum_rate_bps = 0.0;
    double mean_eta = 0.0;
    double mean_reward = 0.0;
    double mean_target_dist_m = 0.0;
    std::map<int, std::pair<double, long>> rate_by_ms;  // M_s -> (sum of R, slots)
    bool constraints_ok = true;
    int final_m_s = 0;
};

// One greedy evaluation episode: policies from the registry, optional
// trade-off management every decision period. Fully determined by
// (cfg, seed, options).
EpisodeResult run_eval_episode(const SimConfig& cfg, std::uint64_t seed, int episode_id,
                               const EvalOptions& options);

// The O_c divisor a registry implies: full-codebook formula at its largest
// trained team, one policy per curriculum agent, one for federated.
int registry_complexity(const PolicyRegistry& registry, Regime regime);

struct EvalSummary {
    std::string record_path;
    long episodes = 0;
    double mean_sum_rate_bps = 0.0;
    double mean_eta = 0.0;
    std::map<int, double> rate_by_ms;
    std::map<int, double> eta_by_ms;
};

// The 60-UE mobile generalization protocol: `spec.episodes` seeded episodes,
// initial fleet sized from the UE count, greedy policies, per-M_s reporting.
EvalSummary run_generalization_eval(const PolicyRegistry& registry, const ExperimentSpec& spec);

struct ComparisonArm {
    std::string name;
    double mean_rate_bps = 0.0;
    double mean_eta = 0.0;
    std::vector<double> per_seed_rate_bps;
};

struct ComparisonReport {
    ComparisonArm baseline;           // codebook, fixed fleet
    ComparisonArm dynamic_codebook;   // codebook + trade-off management
    ComparisonArm dynamic_federated;  // federated + trade-off management
    double rel_gain_dynamic_codebook = 0.0;   // E[R] vs baseline
    double rel_gain_dynamic_federated = 0.0;
    double federated_win_fraction = 0.0;      // seeds where arm (c) beats (a)
    bool eta_dominance_holds = false;  // eta_fed > eta_cb whenever R within 10x
    std::string report_path;
    std::string text;
};

// Paired-seed comparison of fixed vs dynamic fleet management.
ComparisonReport run_dynamic_comparison(const PolicyRegistry& codebook,
                                        const PolicyRegistry& federated,
                                        const ExperimentSpec& spec);

struct TrainOutput {
    PolicyRegistry registry;
    std::string registry_dir;
    std::vector<std::string> curve_files;
    long total_env_steps = 0;
};

// Trains the spec's regime (codebook teams 2..4, curriculum / federated over
// 5 agent slots sampling 2..5 deployed MAPs), persists the registry and the
// training curves under cfg.harness.out_dir, resumable via checkpoints.
TrainOutput run_training(const ExperimentSpec& spec);

// Verbose single-episode run: per-slot constraint report, counters, decisions.
EpisodeResult run_trace(const ExperimentSpec& spec, const PolicyRegistry* registry);

// Renders convergence curves and per-M_s rate/efficiency bars as SVG files.
std::vector<std::string> emit_plots(const std::vector<std::string>& curve_files,
                                    const std::vector<std::string>& record_files,
                                    const std::string& out_dir);

}  // namespace mapsim
