#include "mapsim/env.hpp"

#include <stdexcept>

#include "mapsim/kmeans.hpp"
#include "mapsim/radio.hpp"
#include "mapsim/scenario.hpp"

namespace mapsim {

double placement_reward(double dist_m, double c_backhaul_bps, const RewardParams& params) {
    if (!(dist_m >= 0.0) || !(c_backhaul_bps >= 0.0))
        throw std::invalid_argument("reward inputs must be finite and non-negative");
    double delta = dist_m <= params.d0 ? 1.0 : 0.0;
    return (delta - 1.0) * dist_m + delta * (params.cap_scale * c_backhaul_bps - params.d0);
}

SimEnv::SimEnv(const ScenarioConfig& scenario, const RadioConfig& radio, const RlConfig& rl,
               bool compute_rewards)
    : scenario_(scenario), radio_(radio), rl_(rl), compute_rewards_(compute_rewards) {}

void SimEnv::reset(const std::vector<Loc3>& initial_map_locations) {
    if (static_cast<int>(initial_map_locations.size()) > scenario_.max_maps)
        throw std::invalid_argument("more initial MAPs than the fleet cap");
    state_ = build_scenario(scenario_);
    state_.radio = radio_;
    for (std::size_t i = 0; i < initial_map_locations.size(); ++i)
        activate_map(state_, static_cast<int>(i) + 1, initial_map_locations[i]);
    recompute_network();
    centroid_cache_.clear();
    assignment_cache_.clear();
    last_ = SlotResult{};
    compute_rewards_and_metrics(last_);
}

void SimEnv::recompute_network() {
    refresh_channels(state_);
    state_.assoc = associate_max_snr(state_);
    compute_slot_rates(state_);
}

Observation SimEnv::observe(int map_id) const {
    return build_observation(state_, map_id, rl_.n_ue_slots, rl_.n_map_slots);
}

SimEnv::SlotResult SimEnv::step(const std::map<int, Action>& actions) {
    for (const auto& m : state_.maps) {
        if (!m.active) continue;
        auto it = actions.find(m.id);
        apply_action(state_, m.id, it == actions.end() ? Action::hover : it->second,
                     scenario_.map_step_m);
    }
    state_.slot += 1;
    step_mobility(state_);
    recompute_network();

    SlotResult result;
    compute_rewards_and_metrics(result);
    last_ = result;
    return result;
}

void SimEnv::compute_rewards_and_metrics(SlotResult& result) {
    result.sum_rate_bps = state_.rates.sum_rate_bps;
    result.connected_ues = state_.unblocked_count();

    if (!compute_rewards_) return;
    auto active = state_.active_map_ids();
    if (active.empty() || state_.unblocked_count() == 0) return;

    std::vector<Loc2> points;
    for (const auto& ue : state_.ues)
        if (!ue.blocked) points.push_back(ue.loc);
    int k = std::min<int>(static_cast<int>(active.size()), static_cast<int>(points.size()));
    KmeansResult clusters = kmeans(points, k, state_.rng.kmeans, 50,
                                   centroid_cache_.empty() ? nullptr : &centroid_cache_);
    centroid_cache_ = clusters.centroids;
    std::vector<Loc3> lifted;
    for (const auto& c : clusters.centroids)
        lifted.push_back({c.x, c.y, rl_.target_altitude_m});

    // Assignment holds for the episode unless the fleet or cluster count moved.
    bool valid = assignment_cache_.size() == active.size();
    for (int id : active)
        valid = valid && assignment_cache_.count(id) &&
                assignment_cache_[id] < static_cast<int>(lifted.size());
    if (!valid) {
        std::vector<Loc3> map_locs;
        for (int id : active) map_locs.push_back(state_.map_by_id(id).loc);
        std::vector<int> match = match_targets(map_locs, lifted);
        assignment_cache_.clear();
        for (std::size_t i = 0; i < active.size(); ++i)
            assignment_cache_[active[i]] = match[i];
    }

    RewardParams params{rl_.d0, rl_.cap_scale, rl_.gamma, scenario_.slot_count};
    double total = 0.0;
    for (int id : active) {
        Loc3 target = lifted[static_cast<std::size_t>(assignment_cache_.at(id))];
        double d = distance(state_.map_by_id(id).loc, target);
        double c_b = state_.rates.backhaul_capacity_bps.at(id);
        double r = placement_reward(d, c_b, params);
        result.target_dist_m[id] = d;
        result.rewards[id] = r;
        total += r;
    }
    result.mean_reward = total / static_cast<double>(active.size());
}

}  // namespace mapsim
