#pragma once

#include <map>
#include <optional>
#include <vector>

#include "mapsim/network_ops.hpp"
#include "mapsim/policy.hpp"
#include "mapsim/state.hpp"

namespace mapsim {

// Eq.-style multi-objective placement reward: far from the target the agent
// pays the distance, close to it (d <= d0) it earns the scaled backhaul
// capacity minus d0.
struct RewardParams {
    double d0 = 10.0;
    double cap_scale = 1e-9;
    double gamma = 0.6;
    int horizon = 100;
};

double placement_reward(double dist_m, double c_backhaul_bps, const RewardParams& params);

// One simulated episode. Slot pipeline, in order: MAP actions are applied,
// UEs move (blockage resamples on epoch boundaries), channels refresh,
// association / allocation / rates recompute, then rewards and metrics are
// read off the finished slot. reset() fully computes slot 0 so observations
// and monitoring are valid from the start.
class SimEnv {
  public:
    SimEnv(const ScenarioConfig& scenario, const RadioConfig& radio, const RlConfig& rl,
           bool compute_rewards);

    // Deploys the given MAPs (ascending ids from 1) and computes slot 0.
    void reset(const std::vector<Loc3>& initial_map_locations);

    struct SlotResult {
        double sum_rate_bps = 0.0;
        int connected_ues = 0;
        std::map<int, double> rewards;          // per deployed MAP
        std::map<int, double> target_dist_m;    // distance to assigned centroid
        double mean_reward = 0.0;
    };

    // Missing entries in `actions` hover. Returns the finished slot's metrics.
    SlotResult step(const std::map<int, Action>& actions);

    Observation observe(int map_id) const;

    const NetworkState& state() const { return state_; }
    NetworkState& mutable_state() { return state_; }
    const RlConfig& rl() const { return rl_; }

    // Recomputes channels/association/rates after out-of-band state edits
    // (MAP activation or repatriation between slots).
    void recompute_network();

    SlotResult metrics() const { return last_; }

  private:
    void compute_rewards_and_metrics(SlotResult& result);

    ScenarioConfig scenario_;
    RadioConfig radio_;
    RlConfig rl_;
    bool compute_rewards_;
    NetworkState state_;
    SlotResult last_;
    // Target coherence across the slots of an episode: centroids warm-start
    // from the previous slot and the MAP -> centroid assignment stays fixed
    // until the fleet (or the cluster count) changes.
    std::vector<Loc2> centroid_cache_;
    std::map<int, int> assignment_cache_;
};

}  // namespace mapsim
