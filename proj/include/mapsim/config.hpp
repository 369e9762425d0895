#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mapsim/geometry.hpp"

namespace mapsim {

// World/scenario knobs. Defaults are the documented simulation set-up:
// 200 m x 200 m footprint, 25 UEs, 1 Gbps mean Poisson demand.
struct ScenarioConfig {
    Region region;
    int n_ue = 25;
    int max_maps = 8;              // M, hard cap on simultaneously deployed MAPs
    double ue_speed_mps = 0.0;     // waypoint mobility speed (0 = static UEs)
    double blockage_prob = 0.0;
    double demand_mean_gbps = 1.0; // k of the k-Poisson traffic draw
    std::uint64_t seed = 1;
    int slot_count = 100;          // T_l, slots per episode (slot = 1 s)
    int mobility_groups = 5;       // UE groups sharing one waypoint
    double waypoint_jitter_m = 2.0;
    int blockage_epoch_slots = 10;
    Loc3 donor_loc{100.0, 100.0, 10.0};
    int map_beam_limit = 10;       // K_i
    double map_step_m = 5.0;       // per-slot MAP displacement bound (C8)
    double deploy_altitude_m = 40.0;  // initial fleet altitude (x, y stay random)
};

// Physical-layer constants. Shadowing values are variances in dB^2.
struct RadioConfig {
    double bandwidth_hz = 500e6;     // B
    double mu = 0.75;                // backhaul fraction of B
    double noise_psd_dbm_hz = -174.0;
    double donor_fc_hz = 2e9;
    double map_fc_hz = 28e9;
    double donor_aperture_deg = 180.0;
    double map_aperture_deg = 90.0;
    double donor_gain_dbi = 17.0;
    double donor_sidelobe_dbi = -10.0;
    double map_mainlobe_dbi = 20.0;
    double map_sidelobe_dbi = -10.0;
    double shadowing_var_donor_db = 3.0;
    double shadowing_var_map_db = 12.0;
    double nakagami_m = 3.0;
    double donor_tx_power_dbm = 35.0;
    double map_tx_power_dbm = 35.0;
    double los_a = 9.61;             // elevation-sigmoid LoS parameters
    double los_b = 0.16;
    double exp_ground = 3.0;         // path-loss exponents
    double exp_los = 2.0;
    double exp_nlos = 3.5;
    double shadow_decorrelation_m = 10.0;
    // Deterministic channel: no shadowing, unit fading, LoS wherever the
    // sigmoid gives probability >= 0.5. Used by scripted tests and traces.
    bool deterministic = false;
};

// Thresholds of the per-MAP trade-off counter.
struct TradeoffParams {
    double phi_max = 6000.0;  // m^2
    double phi_min = 0.0;
    int k_min = 2;
    int decision_period = 10; // t_n, slots between consensus rounds
    int reset_period = 10;    // tau_n, slots between counter resets
    double spawn_offset_m = 20.0;
};

// Placement policy + PPO training knobs.
struct RlConfig {
    int n_ue_slots = 15;
    int n_map_slots = 5;
    int embed_dim = 32;
    std::vector<int> trunk = {64, 64};
    double d0 = 10.0;              // reward reference distance (m)
    double cap_scale = 1e-9;       // backhaul bps -> reward units (Gbps)
    double gamma = 0.6;
    double target_altitude_m = 40.0;
    double learning_rate = 1e-4;
    double clip_ratio = 0.2;
    int epochs = 4;
    int batch_episodes = 10;
    int minibatch = 64;
    double entropy_coef = 0.01;
    double value_coef = 0.5;
    double max_grad_norm = 0.5;
    bool normalize_advantages = true;
    int rolling_window = 500;
};

struct FederationSchedule {
    long tau_f = 5000;     // env transitions (summed over agents) between aggregations
    double alpha_f = 0.5;  // retention rate of the running global model
};

struct HarnessConfig {
    long train_steps = 50000;  // env transitions per training run
    int eval_episodes = 200;
    int eval_n_ue = 60;
    double eval_ue_speed = 0.8;
    double eval_blockage = 0.5;
    int compare_seeds = 20;
    int workers = 0;           // 0 = hardware concurrency
    std::string out_dir = "out";
};

struct SimConfig {
    ScenarioConfig scenario;
    RadioConfig radio;
    TradeoffParams tradeoff;
    RlConfig rl;
    FederationSchedule federation;
    HarnessConfig harness;
};

// Flat "key = value" config file. '#' starts a comment, blank lines ignored,
// unknown keys are an error. CLI overrides are applied on top.
SimConfig load_config_file(const std::string& path);
void apply_overrides(SimConfig& cfg, const std::vector<std::string>& key_value_pairs);
SimConfig make_config(const std::string& path_or_empty,
                      const std::vector<std::string>& overrides);

// Resolved config rendered back as the flat key=value text (defaults included);
// this string is what gets hashed into record headers.
std::string dump_config(const SimConfig& cfg);
std::uint64_t config_hash(const SimConfig& cfg);

}  // namespace mapsim
