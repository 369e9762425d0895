#include "mapsim/tradeoff.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "mapsim/scenario.hpp"

namespace mapsim {

int initial_map_count(int n_ue, double mean_beams, int max_maps) {
    if (mean_beams <= 0.0) throw std::invalid_argument("mean beam count must be > 0");
    int wanted = static_cast<int>(std::ceil(static_cast<double>(n_ue) / mean_beams));
    return std::clamp(wanted, 1, max_maps);
}

void monitor(const NetworkState& state, int map_id, const TradeoffParams& params,
             TradeoffState& ts) {
    const MapNode& map = state.map_by_id(map_id);
    if (!map.active) throw std::logic_error("monitoring an inactive MAP");

    double phi = 0.0;
    int served = 0;
    for (const auto& ue : state.ues) {
        if (!state.assoc.is_associated(ue.id)) continue;
        if (state.assoc.serving_bs[static_cast<std::size_t>(ue.id)] != map_id) continue;
        double d = distance(map.loc, ue.loc);
        phi += d * d;
        served += 1;
    }
    ts.inertia = phi;
    ts.served = served;

    if (served == 0) {
        // Empty coverage: both the inertia-too-low and the underload signals
        // collapse into one decrement, so idle MAPs drain toward repatriation.
        ts.theta -= 1;
    } else {
        if (phi > params.phi_max) ts.theta += 1;
        if (phi < params.phi_min) ts.theta -= 1;
        if (served >= map.beam_limit) ts.theta += 1;
        if (served < params.k_min) ts.theta -= 1;
    }
    ts.theta_history.push_back(ts.theta);
}

std::vector<Decision> decide(NetworkState& state, TradeoffBook& book,
                             const TradeoffParams& params) {
    std::vector<Decision> decisions;
    std::vector<int> active = state.active_map_ids();

    // Track activations/repatriations applied within this round so the C4 cap
    // and the never-empty rule see the round's running totals.
    int deployed = static_cast<int>(active.size());
    std::vector<bool> newly_active(state.maps.size() + 1, false);

    std::uniform_real_distribution<double> offset(-params.spawn_offset_m,
                                                  params.spawn_offset_m);
    auto& rng = state.rng.control;

    for (int id : active) {
        auto it = book.find(id);
        if (it == book.end()) continue;
        double mean = it->second.theta_mean();
        if (mean < 0.0) {
            if (deployed <= 1) continue;  // never repatriate the last MAP
            decisions.push_back({Decision::Kind::repatriate, id, id, {}});
            deployed -= 1;
        } else if (mean > 0.0) {
            if (deployed >= state.scenario.max_maps) continue;  // C4 binds
            int target = -1;
            for (const auto& m : state.maps) {
                if (!m.active && !newly_active[static_cast<std::size_t>(m.id)]) {
                    target = m.id;
                    break;
                }
            }
            if (target < 0) continue;  // no inactive MAP left; request dropped
            Loc3 spawn = state.map_by_id(id).loc;
            spawn.x += offset(rng);
            spawn.y += offset(rng);
            spawn.z = state.region.mid_height();
            decisions.push_back(
                {Decision::Kind::activate, id, target, state.region.clip(spawn)});
            newly_active[static_cast<std::size_t>(target)] = true;
            deployed += 1;
        }
    }

    for (auto& [_, ts] : book) ts.reset();
    return decisions;
}

void apply_decisions(NetworkState& state, const std::vector<Decision>& decisions) {
    for (const auto& d : decisions) {
        if (d.kind == Decision::Kind::repatriate)
            deactivate_map(state, d.map_id);
        else
            activate_map(state, d.target_id, d.spawn_loc);
    }
}

std::string describe(const Decision& d) {
    std::ostringstream os;
    if (d.kind == Decision::Kind::repatriate)
        os << "repatriate:" << d.map_id;
    else
        os << "activate:" << d.target_id << ":by:" << d.map_id;
    return os.str();
}

}  // namespace mapsim
