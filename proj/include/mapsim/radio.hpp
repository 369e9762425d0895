#pragma once

#include <random>

#include "mapsim/state.hpp"

namespace mapsim {

enum class LinkClass {
    donor_ground,       // donor -> UE, 2 GHz ground link
    map_air_to_ground,  // MAP -> UE, 28 GHz air-to-ground
    donor_to_map,       // donor -> MAP backhaul
};

inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_w(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

// LoS probability of the elevation-angle sigmoid, theta in degrees.
double los_probability(double elevation_deg, const RadioConfig& cfg);

// Large-scale gain (linear) from log-distance path loss + shadowing, given a
// realized LoS condition. Pure function of its inputs.
double large_scale_gain(double dist_m, LinkClass cls, bool los, double shadow_db,
                        const RadioConfig& cfg);

// Draws {LoS, shadowing} for a fresh link.
LinkRealization sample_large_scale(const Loc3& tx, const Loc3& rx, LinkClass cls,
                                   const RadioConfig& cfg, std::mt19937_64& rng);

// Nakagami-m power fading coefficient, unit mean.
double sample_fading(const RadioConfig& cfg, std::mt19937_64& rng);

// One-shot combined gain G^H * zeta (fresh LoS, shadowing and fading draws).
// Throws std::invalid_argument for coincident endpoints.
double path_gain(const Loc3& tx, const Loc3& rx, LinkClass cls, const RadioConfig& cfg,
                 std::mt19937_64& rng);

// Per-slot channel maintenance: fading is redrawn on every link, the
// large-scale part only when an endpoint moved past the decorrelation
// distance (or the link is new). Iterates links in (bs, ue) order.
void refresh_channels(NetworkState& state);

// Realized combined gain of a maintained link.
double link_gain(const NetworkState& state, int bs_id, int ue_id);
double backhaul_link_gain(const NetworkState& state, int map_id);

// Noise-only SNR of a candidate access link (max-SNR association metric).
double access_snr(const NetworkState& state, int bs_id, int ue_id);

// Access SINR of link (i, j): desired power over intra+inter-cell
// interference plus (1-mu) N0 B. Interference from another BS arrives
// main-lobe when the UE falls inside one of that BS's beam cones, side-lobe
// otherwise; co-served beams of the serving BS couple at side-lobe level.
double access_sinr(const NetworkState& state, int bs_id, int ue_id);

// Backhaul SINR of deployed MAP i; interference is the donor's other active
// backhaul beams. Throws std::logic_error if the MAP is inactive.
double backhaul_sinr(const NetworkState& state, int map_id);

// Shannon capacities over the band split.
double access_capacity(double sinr, int x, const RadioConfig& cfg);
double backhaul_capacity(double sinr, int z, const RadioConfig& cfg);

double access_noise_w(const RadioConfig& cfg);
double backhaul_noise_w(const RadioConfig& cfg);

}  // namespace mapsim
