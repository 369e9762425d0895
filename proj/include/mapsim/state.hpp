#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mapsim/config.hpp"
#include "mapsim/geometry.hpp"
#include "mapsim/rng.hpp"

namespace mapsim {

// Base-station ids: the donor is 0, MAPs are 1..max_maps.
constexpr int kDonorId = 0;

struct UserEquipment {
    int id = 0;
    Loc2 loc;
    double demand_bps = 0.0;  // D_j, fixed for the episode
    bool blocked = false;
    Loc2 waypoint;            // personal target = group waypoint + jitter
    double speed_mps = 0.0;
    int group = 0;
};

struct MapNode {
    int id = 1;
    Loc3 loc;
    Loc3 prev_loc;            // position one slot ago, for the displacement bound
    bool active = false;      // z_i
    int beam_limit = 10;      // K_i
    std::string policy_id;
};

struct DonorNode {
    Loc3 loc;
    // Beam limit is unbounded (K_0 = infinity).
};

// One realized propagation link: large-scale part persists until an endpoint
// moves past the decorrelation distance, fading is redrawn every slot.
struct LinkRealization {
    bool los = true;
    double shadow_db = 0.0;
    double fading = 1.0;          // Nakagami-m power coefficient, unit mean
    Loc3 tx_ref;                  // endpoint positions at large-scale draw time
    Loc3 rx_ref;
};

struct ChannelTable {
    // access[(bs_id, ue_id)] and backhaul[map_id]
    std::map<std::pair<int, int>, LinkRealization> access;
    std::map<int, LinkRealization> backhaul;
};

struct AssociationState {
    // serving_bs[ue_id] = bs id, or -1 when unassociated.
    std::vector<int> serving_bs;
    std::map<int, int> served_count;  // bs id -> beams in use

    bool is_associated(int ue) const {
        return ue >= 0 && ue < static_cast<int>(serving_bs.size()) && serving_bs[ue] >= 0;
    }
    std::vector<int> ues_of(int bs) const {
        std::vector<int> out;
        for (int j = 0; j < static_cast<int>(serving_bs.size()); ++j)
            if (serving_bs[j] == bs) out.push_back(j);
        return out;
    }
};

struct BackhaulAllocation {
    // beta[(map_id, ue_id)] in [0,1]; empty for MAPs with zero backhaul capacity.
    std::map<std::pair<int, int>, double> beta;

    double sum_for(int map_id) const {
        double s = 0.0;
        for (const auto& [key, b] : beta)
            if (key.first == map_id) s += b;
        return s;
    }
};

struct RateEntry {
    int bs = -1;
    int ue = -1;
    double access_capacity_bps = 0.0;  // C^(a)
    double gamma_bps = 0.0;            // min(D_j, C^(a))
    double rate_bps = 0.0;             // effective rate R_{i,j}
};

struct RateReport {
    std::vector<RateEntry> entries;
    std::map<int, double> backhaul_capacity_bps;  // per active MAP, C^(b)
    std::map<int, double> per_bs_rate_bps;
    double sum_rate_bps = 0.0;
};

// Everything one time slot carries: node positions, associations, allocations,
// rates and channel realizations, plus the episode's random streams.
struct NetworkState {
    ScenarioConfig scenario;
    RadioConfig radio;
    Region region;
    DonorNode donor;
    std::vector<MapNode> maps;       // size max_maps; ids 1..max_maps
    std::vector<UserEquipment> ues;
    std::vector<Loc2> group_waypoints;
    int slot = 0;
    ChannelTable channels;
    AssociationState assoc;
    BackhaulAllocation backhaul;
    RateReport rates;
    RngPool rng;

    int active_map_count() const {
        int n = 0;
        for (const auto& m : maps) n += m.active ? 1 : 0;
        return n;
    }
    std::vector<int> active_map_ids() const {
        std::vector<int> out;
        for (const auto& m : maps)
            if (m.active) out.push_back(m.id);
        return out;
    }
    const MapNode& map_by_id(int id) const { return maps.at(id - 1); }
    MapNode& map_by_id(int id) { return maps.at(id - 1); }
    int unblocked_count() const {
        int n = 0;
        for (const auto& u : ues) n += u.blocked ? 0 : 1;
        return n;
    }
    Loc3 bs_loc(int bs_id) const {
        return bs_id == kDonorId ? donor.loc : map_by_id(bs_id).loc;
    }
};

}  // namespace mapsim
