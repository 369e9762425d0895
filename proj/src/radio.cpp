#include "mapsim/radio.hpp"

#include <cmath>
#include <stdexcept>

namespace mapsim {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

double carrier_hz(LinkClass cls, const RadioConfig& cfg) {
    return cls == LinkClass::map_air_to_ground ? cfg.map_fc_hz : cfg.donor_fc_hz;
}

double shadow_sigma_db(LinkClass cls, const RadioConfig& cfg) {
    double var = cls == LinkClass::map_air_to_ground ? cfg.shadowing_var_map_db
                                                     : cfg.shadowing_var_donor_db;
    return std::sqrt(var);
}

double tx_power_w(const NetworkState& state, int bs_id) {
    return dbm_to_w(bs_id == kDonorId ? state.radio.donor_tx_power_dbm
                                      : state.radio.map_tx_power_dbm);
}

double mainlobe_lin(const NetworkState& state, int bs_id) {
    return db_to_lin(bs_id == kDonorId ? state.radio.donor_gain_dbi
                                       : state.radio.map_mainlobe_dbi);
}

double sidelobe_lin(const NetworkState& state, int bs_id) {
    return db_to_lin(bs_id == kDonorId ? state.radio.donor_sidelobe_dbi
                                       : state.radio.map_sidelobe_dbi);
}

// Transmit gain of BS `bs` toward an arbitrary victim position, given its
// beams point at its currently served UEs. The donor's per-beam width is
// aperture/K_0 -> 0 (K_0 unbounded), so it only ever leaks side-lobe power.
double pattern_gain_toward(const NetworkState& state, int bs_id, const Loc3& victim) {
    if (bs_id == kDonorId) return sidelobe_lin(state, bs_id);
    const MapNode& bs = state.map_by_id(bs_id);
    double beam_width = state.radio.map_aperture_deg / std::max(1, bs.beam_limit);
    for (int ue : state.assoc.ues_of(bs_id)) {
        const auto& served = state.ues[static_cast<std::size_t>(ue)];
        Loc3 served_pos{served.loc.x, served.loc.y, 0.0};
        if (angle_between_deg(bs.loc, victim, served_pos) <= 0.5 * beam_width)
            return mainlobe_lin(state, bs_id);
    }
    return sidelobe_lin(state, bs_id);
}

LinkClass access_class(int bs_id) {
    return bs_id == kDonorId ? LinkClass::donor_ground : LinkClass::map_air_to_ground;
}

}  // namespace

double los_probability(double elevation_deg, const RadioConfig& cfg) {
    return 1.0 / (1.0 + cfg.los_a * std::exp(-cfg.los_b * (elevation_deg - cfg.los_a)));
}

double large_scale_gain(double dist_m, LinkClass cls, bool los, double shadow_db,
                        const RadioConfig& cfg) {
    if (dist_m <= 0.0) throw std::invalid_argument("coincident tx/rx");
    double fc = carrier_hz(cls, cfg);
    double pl0_db = 20.0 * std::log10(4.0 * M_PI * fc / kSpeedOfLight);  // free space at 1 m
    double exponent;
    switch (cls) {
        case LinkClass::donor_ground: exponent = cfg.exp_ground; break;
        default: exponent = los ? cfg.exp_los : cfg.exp_nlos; break;
    }
    double pl_db = pl0_db + 10.0 * exponent * std::log10(dist_m) + shadow_db;
    return db_to_lin(-pl_db);
}

LinkRealization sample_large_scale(const Loc3& tx, const Loc3& rx, LinkClass cls,
                                   const RadioConfig& cfg, std::mt19937_64& rng) {
    LinkRealization link;
    link.tx_ref = tx;
    link.rx_ref = rx;
    double elev = elevation_deg(tx, rx);
    double p_los = los_probability(elev, cfg);
    if (cls == LinkClass::donor_ground) {
        link.los = true;  // ground exponent model, no LoS split
        p_los = 1.0;
    }
    if (cfg.deterministic) {
        link.los = cls == LinkClass::donor_ground || p_los >= 0.5;
        link.shadow_db = 0.0;
        link.fading = 1.0;
        return link;
    }
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (cls != LinkClass::donor_ground) link.los = u(rng) < p_los;
    std::normal_distribution<double> shadow(0.0, shadow_sigma_db(cls, cfg));
    link.shadow_db = shadow(rng);
    link.fading = 1.0;
    return link;
}

double sample_fading(const RadioConfig& cfg, std::mt19937_64& rng) {
    if (cfg.deterministic) return 1.0;
    std::gamma_distribution<double> gamma(cfg.nakagami_m, 1.0 / cfg.nakagami_m);
    return gamma(rng);
}

double path_gain(const Loc3& tx, const Loc3& rx, LinkClass cls, const RadioConfig& cfg,
                 std::mt19937_64& rng) {
    double d = distance(tx, rx);
    if (d <= 0.0) throw std::invalid_argument("coincident tx/rx");
    LinkRealization link = sample_large_scale(tx, rx, cls, cfg, rng);
    link.fading = sample_fading(cfg, rng);
    return large_scale_gain(d, cls, link.los, link.shadow_db, cfg) * link.fading;
}

namespace {

void refresh_one(LinkRealization* existing, LinkRealization& slot, const Loc3& tx,
                 const Loc3& rx, LinkClass cls, const RadioConfig& cfg,
                 std::mt19937_64& rng) {
    bool need_large_scale = existing == nullptr ||
                            distance(existing->tx_ref, tx) > cfg.shadow_decorrelation_m ||
                            distance(existing->rx_ref, rx) > cfg.shadow_decorrelation_m;
    if (need_large_scale) {
        slot = sample_large_scale(tx, rx, cls, cfg, rng);
    } else {
        slot = *existing;
    }
    slot.fading = sample_fading(cfg, rng);
}

}  // namespace

void refresh_channels(NetworkState& state) {
    auto& rng = state.rng.channel;
    // Access links: donor and every active MAP, to every UE.
    for (int bs = 0; bs <= static_cast<int>(state.maps.size()); ++bs) {
        if (bs != kDonorId && !state.map_by_id(bs).active) continue;
        Loc3 tx = state.bs_loc(bs);
        for (const auto& ue : state.ues) {
            Loc3 rx{ue.loc.x, ue.loc.y, 0.0};
            auto key = std::make_pair(bs, ue.id);
            auto it = state.channels.access.find(key);
            LinkRealization slot;
            refresh_one(it == state.channels.access.end() ? nullptr : &it->second, slot,
                        tx, rx, access_class(bs), state.radio, rng);
            state.channels.access[key] = slot;
        }
    }
    // Backhaul links: donor to every active MAP.
    for (const auto& m : state.maps) {
        if (!m.active) continue;
        auto it = state.channels.backhaul.find(m.id);
        LinkRealization slot;
        refresh_one(it == state.channels.backhaul.end() ? nullptr : &it->second, slot,
                    state.donor.loc, m.loc, LinkClass::donor_to_map, state.radio, rng);
        state.channels.backhaul[m.id] = slot;
    }
}

double link_gain(const NetworkState& state, int bs_id, int ue_id) {
    const auto& link = state.channels.access.at({bs_id, ue_id});
    const auto& ue = state.ues[static_cast<std::size_t>(ue_id)];
    double d = distance(state.bs_loc(bs_id), ue.loc);
    return large_scale_gain(d, access_class(bs_id), link.los, link.shadow_db, state.radio) *
           link.fading;
}

double backhaul_link_gain(const NetworkState& state, int map_id) {
    const auto& link = state.channels.backhaul.at(map_id);
    double d = distance(state.donor.loc, state.map_by_id(map_id).loc);
    return large_scale_gain(d, LinkClass::donor_to_map, link.los, link.shadow_db,
                            state.radio) *
           link.fading;
}

double access_noise_w(const RadioConfig& cfg) {
    return dbm_to_w(cfg.noise_psd_dbm_hz) * (1.0 - cfg.mu) * cfg.bandwidth_hz;
}

double backhaul_noise_w(const RadioConfig& cfg) {
    return dbm_to_w(cfg.noise_psd_dbm_hz) * cfg.mu * cfg.bandwidth_hz;
}

double access_snr(const NetworkState& state, int bs_id, int ue_id) {
    double desired = tx_power_w(state, bs_id) * mainlobe_lin(state, bs_id) *
                     link_gain(state, bs_id, ue_id);
    return desired / access_noise_w(state.radio);
}

double access_sinr(const NetworkState& state, int bs_id, int ue_id) {
    const auto& ue = state.ues[static_cast<std::size_t>(ue_id)];
    Loc3 victim{ue.loc.x, ue.loc.y, 0.0};
    double desired = tx_power_w(state, bs_id) * mainlobe_lin(state, bs_id) *
                     link_gain(state, bs_id, ue_id);

    double interference = 0.0;
    // Inter-cell: every other active BS, through its own beam pattern.
    for (int other = 0; other <= static_cast<int>(state.maps.size()); ++other) {
        if (other == bs_id) continue;
        if (other != kDonorId && !state.map_by_id(other).active) continue;
        interference += tx_power_w(state, other) * pattern_gain_toward(state, other, victim) *
                        link_gain(state, other, ue_id);
    }
    // Intra-cell: the serving BS's beams toward its other UEs, side-lobe coupled.
    int served = 0;
    if (auto it = state.assoc.served_count.find(bs_id); it != state.assoc.served_count.end())
        served = it->second;
    int other_beams = served - (state.assoc.is_associated(ue_id) &&
                                        state.assoc.serving_bs[static_cast<std::size_t>(
                                            ue_id)] == bs_id
                                    ? 1
                                    : 0);
    if (other_beams > 0)
        interference += static_cast<double>(other_beams) * tx_power_w(state, bs_id) *
                        sidelobe_lin(state, bs_id) * link_gain(state, bs_id, ue_id);

    return desired / (interference + access_noise_w(state.radio));
}

double backhaul_sinr(const NetworkState& state, int map_id) {
    const MapNode& map = state.map_by_id(map_id);
    if (!map.active) throw std::logic_error("backhaul SINR of an inactive MAP");

    double rx_gain = db_to_lin(state.radio.map_mainlobe_dbi);  // MAP aims a beam at the donor
    double desired = tx_power_w(state, kDonorId) * mainlobe_lin(state, kDonorId) *
                     backhaul_link_gain(state, map_id) * rx_gain;

    // The donor's other backhaul beams share its location, so they reach MAP i
    // over the same path, attenuated to the donor's side-lobe level.
    int others = state.active_map_count() - 1;
    double interference = 0.0;
    if (others > 0)
        interference = static_cast<double>(others) * tx_power_w(state, kDonorId) *
                       sidelobe_lin(state, kDonorId) * backhaul_link_gain(state, map_id) *
                       rx_gain;

    return desired / (interference + backhaul_noise_w(state.radio));
}

double access_capacity(double sinr, int x, const RadioConfig& cfg) {
    if (sinr < 0.0) throw std::invalid_argument("negative SINR");
    return (1.0 - cfg.mu) * cfg.bandwidth_hz * std::log2(1.0 + x * sinr);
}

double backhaul_capacity(double sinr, int z, const RadioConfig& cfg) {
    if (sinr < 0.0) throw std::invalid_argument("negative SINR");
    return cfg.mu * cfg.bandwidth_hz * std::log2(1.0 + z * sinr);
}

}  // namespace mapsim
