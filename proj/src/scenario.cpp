#include "mapsim/scenario.hpp"

#include <cmath>
#include <stdexcept>

namespace mapsim {

double sample_demand(std::mt19937_64& rng, double mean_gbps) {
    if (mean_gbps <= 0.0) throw std::invalid_argument("demand mean must be > 0");
    std::poisson_distribution<long> poisson(mean_gbps);
    return static_cast<double>(poisson(rng)) * 1e9;
}

namespace {

Loc2 draw_footprint_point(std::mt19937_64& rng, const Region& region) {
    std::uniform_real_distribution<double> ux(0.0, region.x_max);
    std::uniform_real_distribution<double> uy(0.0, region.y_max);
    double x = ux(rng);
    double y = uy(rng);
    return {x, y};
}

void resample_blockage(NetworkState& state) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& ue : state.ues)
        ue.blocked = u(state.rng.blockage) < state.scenario.blockage_prob;
}

// New shared waypoint for one group; every member gets the group target plus
// its own Gaussian jitter, clipped to the footprint.
void redraw_group_waypoint(NetworkState& state, int group) {
    Loc2 wp = draw_footprint_point(state.rng.mobility, state.region);
    state.group_waypoints[group] = wp;
    std::normal_distribution<double> jitter(0.0, state.scenario.waypoint_jitter_m);
    for (auto& ue : state.ues) {
        if (ue.group != group) continue;
        double jx = jitter(state.rng.mobility);
        double jy = jitter(state.rng.mobility);
        ue.waypoint = state.region.clip(Loc2{wp.x + jx, wp.y + jy});
    }
}

}  // namespace

NetworkState build_scenario(const ScenarioConfig& config) {
    if (config.n_ue <= 0) throw std::invalid_argument("scenario needs at least one UE");
    if (!config.region.valid()) throw std::invalid_argument("non-positive region");
    if (config.max_maps < 1) throw std::invalid_argument("max_maps must be >= 1");
    if (config.blockage_prob < 0.0 || config.blockage_prob > 1.0)
        throw std::invalid_argument("blockage_prob must be in [0,1]");
    if (config.mobility_groups < 1) throw std::invalid_argument("mobility_groups must be >= 1");

    NetworkState state;
    state.scenario = config;
    state.region = config.region;
    state.donor.loc = config.donor_loc;
    state.rng = RngPool(config.seed);
    state.slot = 0;

    state.maps.resize(config.max_maps);
    for (int i = 0; i < config.max_maps; ++i) {
        auto& m = state.maps[i];
        m.id = i + 1;
        m.active = false;
        m.beam_limit = config.map_beam_limit;
        m.loc = {0.0, 0.0, config.region.mid_height()};
        m.prev_loc = m.loc;
    }

    state.ues.resize(config.n_ue);
    for (int j = 0; j < config.n_ue; ++j) {
        auto& ue = state.ues[j];
        ue.id = j;
        ue.loc = draw_footprint_point(state.rng.placement, state.region);
        ue.speed_mps = config.ue_speed_mps;
        ue.group = j % config.mobility_groups;
        ue.demand_bps = sample_demand(state.rng.demand, config.demand_mean_gbps);
    }

    state.group_waypoints.resize(config.mobility_groups);
    for (int g = 0; g < config.mobility_groups; ++g) redraw_group_waypoint(state, g);

    resample_blockage(state);
    return state;
}

void step_mobility(NetworkState& state, int dt_slots) {
    const double eps = 1e-9;
    for (int step = 0; step < dt_slots; ++step) {
        for (auto& ue : state.ues) {
            double dx = ue.waypoint.x - ue.loc.x;
            double dy = ue.waypoint.y - ue.loc.y;
            double dist = std::hypot(dx, dy);
            double reach = ue.speed_mps;  // 1 s slots: m/s = m/slot
            if (dist <= eps || reach <= 0.0) continue;
            if (dist <= reach) {
                ue.loc = ue.waypoint;
            } else {
                ue.loc.x += reach * dx / dist;
                ue.loc.y += reach * dy / dist;
            }
        }
        // A group redraws its shared waypoint once every member has arrived.
        for (int g = 0; g < static_cast<int>(state.group_waypoints.size()); ++g) {
            bool all_arrived = true;
            bool any_member = false;
            for (const auto& ue : state.ues) {
                if (ue.group != g) continue;
                any_member = true;
                if (distance(ue.loc, ue.waypoint) > eps) {
                    all_arrived = false;
                    break;
                }
            }
            if (any_member && all_arrived && state.scenario.ue_speed_mps > 0.0)
                redraw_group_waypoint(state, g);
        }
    }

    if (state.scenario.blockage_epoch_slots > 0 &&
        state.slot % state.scenario.blockage_epoch_slots == 0) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (auto& ue : state.ues)
            ue.blocked = u(state.rng.blockage) < state.scenario.blockage_prob;
    }
}

void activate_map(NetworkState& state, int id, const Loc3& loc) {
    auto& m = state.map_by_id(id);
    m.active = true;
    m.loc = state.region.clip(loc);
    m.prev_loc = m.loc;
}

void deactivate_map(NetworkState& state, int id) {
    auto& m = state.map_by_id(id);
    m.active = false;
    // Drop the channel realizations so a re-activation draws fresh ones.
    for (auto it = state.channels.access.begin(); it != state.channels.access.end();) {
        if (it->first.first == id)
            it = state.channels.access.erase(it);
        else
            ++it;
    }
    state.channels.backhaul.erase(id);
}

}  // namespace mapsim
