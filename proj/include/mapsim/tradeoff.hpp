#pragma once

#include <map>
#include <string>
#include <vector>

#include "mapsim/state.hpp"

namespace mapsim {

// Local trade-off bookkeeping of one deployed MAP.
struct TradeoffState {
    int theta = 0;
    std::vector<int> theta_history;  // theta after each monitoring event since reset
    double inertia = 0.0;            // Phi_i, m^2
    int served = 0;

    double theta_mean() const {
        if (theta_history.empty()) return 0.0;
        double s = 0.0;
        for (int v : theta_history) s += v;
        return s / static_cast<double>(theta_history.size());
    }
    void reset() {
        theta = 0;
        theta_history.clear();
    }
};

// Per-MAP trade-off counters of one episode, keyed by MAP id.
using TradeoffBook = std::map<int, TradeoffState>;

// Number of MAPs enabled at t=0: ceil(K / E[K_i]), clamped to [1, M].
int initial_map_count(int n_ue, double mean_beams, int max_maps);

// One monitoring event for deployed MAP i: recompute inertia and beam load,
// bump theta for each triggered criterion, append the sample.
// A MAP serving no UE drains with a single -1 per event.
void monitor(const NetworkState& state, int map_id, const TradeoffParams& params,
             TradeoffState& ts);

struct Decision {
    enum class Kind { activate, repatriate } kind;
    int map_id = 0;       // the deciding MAP
    int target_id = 0;    // activations: the MAP being enabled
    Loc3 spawn_loc;       // activations: where it appears
};

// Consensus round at a decision slot: every deployed MAP with a negative
// windowed theta mean repatriates (the last deployed MAP never does), every
// one with a positive mean enables an inactive MAP near itself, in ascending
// id order while inactive MAPs and the C4 cap allow. Counters reset after.
// Spawn offsets come from the state's control stream; the caller applies the
// returned decisions.
std::vector<Decision> decide(NetworkState& state, TradeoffBook& book,
                             const TradeoffParams& params);

// Applies one decision list: flips z flags, spawns activations, and leaves
// re-association to the next slot's pipeline.
void apply_decisions(NetworkState& state, const std::vector<Decision>& decisions);

std::string describe(const Decision& d);

}  // namespace mapsim
