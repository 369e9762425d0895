#pragma once

#include <random>

#include "mapsim/state.hpp"

namespace mapsim {

// Draws one traffic demand: X * 1 Gbps with X ~ Poisson(mean_gbps).
double sample_demand(std::mt19937_64& rng, double mean_gbps);

// Builds the initial world: UEs uniform in the footprint, donor fixed, no MAP
// active, demands and blockage sampled. Deterministic given config.seed.
// Throws std::invalid_argument for n_ue = 0 or a non-positive region.
NetworkState build_scenario(const ScenarioConfig& config);

// Advances UE positions by dt slots of waypoint-group mobility and resamples
// blockage flags on epoch boundaries. MAPs are not touched.
void step_mobility(NetworkState& state, int dt_slots = 1);

// Activates map `id` at `loc` (clipped into the region).
void activate_map(NetworkState& state, int id, const Loc3& loc);
void deactivate_map(NetworkState& state, int id);

}  // namespace mapsim
