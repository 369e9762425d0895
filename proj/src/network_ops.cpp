#include "mapsim/network_ops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mapsim/radio.hpp"

namespace mapsim {

AssociationState associate_max_snr(const NetworkState& state) {
    AssociationState assoc;
    assoc.serving_bs.assign(state.ues.size(), -1);

    std::vector<int> bss{kDonorId};
    for (const auto& m : state.maps)
        if (m.active) bss.push_back(m.id);

    struct Candidate {
        int ue;
        double best_snr;
    };
    std::vector<Candidate> order;
    std::map<std::pair<int, int>, double> snr;  // (bs, ue) -> SNR
    for (const auto& ue : state.ues) {
        if (ue.blocked) continue;
        double best = -1.0;
        for (int bs : bss) {
            double s = access_snr(state, bs, ue.id);
            snr[{bs, ue.id}] = s;
            best = std::max(best, s);
        }
        order.push_back({ue.id, best});
    }
    std::sort(order.begin(), order.end(), [](const Candidate& a, const Candidate& b) {
        if (a.best_snr != b.best_snr) return a.best_snr > b.best_snr;
        return a.ue < b.ue;
    });

    for (const auto& cand : order) {
        int chosen = -1;
        double chosen_snr = -1.0;
        for (int bs : bss) {
            if (bs != kDonorId) {
                const auto& m = state.map_by_id(bs);
                auto it = assoc.served_count.find(bs);
                int used = it == assoc.served_count.end() ? 0 : it->second;
                if (used >= m.beam_limit) continue;  // no free beam
            }
            double s = snr.at({bs, cand.ue});
            if (s > chosen_snr) {  // ties keep the lowest BS id (donor first)
                chosen_snr = s;
                chosen = bs;
            }
        }
        if (chosen >= 0) {
            assoc.serving_bs[static_cast<std::size_t>(cand.ue)] = chosen;
            assoc.served_count[chosen] += 1;
        }
    }
    return assoc;
}

std::map<int, double> proportional_allocation(const std::vector<std::pair<int, double>>& gammas,
                                              double c_backhaul) {
    std::map<int, double> beta;
    if (gammas.empty() || c_backhaul <= 0.0) return beta;
    double total = 0.0;
    for (const auto& [_, g] : gammas) total += g;
    if (total <= 0.0) {
        for (const auto& [ue, _] : gammas) beta[ue] = 0.0;
        return beta;
    }
    if (total <= c_backhaul) {
        for (const auto& [ue, g] : gammas) beta[ue] = g / c_backhaul;
    } else {
        for (const auto& [ue, g] : gammas) beta[ue] = g / total;
    }
    return beta;
}

double effective_rate(double gamma_bps, double beta, int z, double c_backhaul_bps,
                      bool is_donor) {
    if (gamma_bps < 0.0 || beta < 0.0 || c_backhaul_bps < 0.0)
        throw std::invalid_argument("negative rate inputs");
    if (is_donor) return gamma_bps;
    return std::min(gamma_bps, beta * static_cast<double>(z) * c_backhaul_bps);
}

void compute_slot_rates(NetworkState& state) {
    state.rates = RateReport{};
    state.backhaul = BackhaulAllocation{};

    // Access side: SINR, capacity and effective demand per served link.
    std::map<int, std::vector<std::pair<int, double>>> per_map_gammas;
    for (const auto& ue : state.ues) {
        if (!state.assoc.is_associated(ue.id)) continue;
        int bs = state.assoc.serving_bs[static_cast<std::size_t>(ue.id)];
        RateEntry entry;
        entry.bs = bs;
        entry.ue = ue.id;
        entry.access_capacity_bps = access_capacity(access_sinr(state, bs, ue.id), 1, state.radio);
        entry.gamma_bps = std::min(ue.demand_bps, entry.access_capacity_bps);
        state.rates.entries.push_back(entry);
        if (bs != kDonorId) per_map_gammas[bs].push_back({ue.id, entry.gamma_bps});
    }

    // Backhaul side: capacity per deployed MAP, then the proportional split.
    for (const auto& m : state.maps) {
        if (!m.active) continue;
        double c_b = backhaul_capacity(backhaul_sinr(state, m.id), 1, state.radio);
        state.rates.backhaul_capacity_bps[m.id] = c_b;
        auto it = per_map_gammas.find(m.id);
        if (it == per_map_gammas.end()) continue;
        for (const auto& [ue, b] : proportional_allocation(it->second, c_b))
            state.backhaul.beta[{m.id, ue}] = b;
    }

    for (auto& entry : state.rates.entries) {
        if (entry.bs == kDonorId) {
            entry.rate_bps = effective_rate(entry.gamma_bps, 0.0, 1, 0.0, true);
        } else {
            auto it = state.backhaul.beta.find({entry.bs, entry.ue});
            double beta = it == state.backhaul.beta.end() ? 0.0 : it->second;
            entry.rate_bps = effective_rate(entry.gamma_bps, beta, 1,
                                            state.rates.backhaul_capacity_bps.at(entry.bs),
                                            false);
        }
    }
    sum_rate(state);
}

double sum_rate(NetworkState& state) {
    state.rates.per_bs_rate_bps.clear();
    double total = 0.0;
    for (const auto& entry : state.rates.entries) {
        state.rates.per_bs_rate_bps[entry.bs] += entry.rate_bps;
        total += entry.rate_bps;
    }
    state.rates.sum_rate_bps = total;
    return total;
}

namespace {

void fail(ConstraintCheck& c, int offender, const std::string& note) {
    c.pass = false;
    c.offenders.push_back(offender);
    if (c.note.empty()) c.note = note;
}

}  // namespace

ConstraintReport check_constraints(const NetworkState& state) {
    const double eps = 1e-9;
    ConstraintReport report;
    auto& c1 = report.checks["C1"];
    auto& c2 = report.checks["C2"];
    auto& c3 = report.checks["C3"];
    auto& c4 = report.checks["C4"];
    auto& c5 = report.checks["C5"];
    auto& c6 = report.checks["C6"];
    auto& c7 = report.checks["C7"];
    auto& c8 = report.checks["C8"];

    // C1/C3: association variables binary and at most one serving BS per UE.
    // serving_bs holds a single id, so the checks reduce to validity: ids in
    // range, serving BS deployed, blocked UEs unassociated.
    std::map<int, int> recount;
    for (const auto& ue : state.ues) {
        int bs = state.assoc.is_associated(ue.id)
                     ? state.assoc.serving_bs[static_cast<std::size_t>(ue.id)]
                     : -1;
        if (bs < 0) continue;
        recount[bs] += 1;
        if (bs > static_cast<int>(state.maps.size()))
            fail(c1, ue.id, "serving BS id out of range");
        else if (bs != kDonorId && !state.map_by_id(bs).active)
            fail(c3, ue.id, "UE associated to an undeployed MAP");
        if (ue.blocked) fail(c3, ue.id, "blocked UE holds an association");
    }
    for (const auto& [bs, n] : state.assoc.served_count) {
        auto it = recount.find(bs);
        int actual = it == recount.end() ? 0 : it->second;
        if (actual != n) fail(c1, bs, "served_count inconsistent with associations");
    }

    // C2: beam limits (donor unbounded).
    for (const auto& [bs, n] : recount) {
        if (bs == kDonorId) continue;
        if (n > state.map_by_id(bs).beam_limit) fail(c2, bs, "beam limit exceeded");
    }

    // C4: deployed MAPs within the fleet cap.
    if (state.active_map_count() > state.scenario.max_maps)
        fail(c4, state.active_map_count(), "more deployed MAPs than M");

    // C5/C6: allocation fractions in range and summing to at most one.
    std::map<int, double> beta_sums;
    for (const auto& [key, b] : state.backhaul.beta) {
        if (b < -eps || b > 1.0 + eps) fail(c5, key.second, "beta outside [0,1]");
        beta_sums[key.first] += b;
        if (!state.map_by_id(key.first).active)
            fail(c5, key.first, "allocation on an undeployed MAP");
    }
    for (const auto& [map_id, s] : beta_sums)
        if (s > 1.0 + eps) fail(c6, map_id, "allocations sum past 1");

    // C7/C8: region containment and per-slot displacement bound.
    for (const auto& m : state.maps) {
        if (!m.active) continue;
        if (!state.region.contains(m.loc)) fail(c7, m.id, "MAP outside region");
        if (distance(m.loc, m.prev_loc) > state.scenario.map_step_m + eps)
            fail(c8, m.id, "MAP moved farther than the step bound");
    }
    return report;
}

std::string ConstraintReport::summary() const {
    std::ostringstream os;
    for (const auto& [name, c] : checks) {
        os << name << (c.pass ? " ok" : " FAIL");
        if (!c.pass) {
            os << " (" << c.note << ";";
            for (int id : c.offenders) os << " " << id;
            os << ")";
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace mapsim
