#pragma once

#include <map>
#include <string>
#include <vector>

#include "mapsim/state.hpp"

namespace mapsim {

// Greedy max-SNR association: unblocked UEs, processed in descending order of
// their best noise-only SNR, each join the highest-SNR base station that
// still has a free beam (the donor never fills). Requires refreshed channels.
AssociationState associate_max_snr(const NetworkState& state);

// Proportional backhaul split for one MAP. `gammas` holds (ue, Gamma) pairs.
// Under-loaded MAPs get beta = Gamma / C^(b) (every demand met), over-loaded
// ones beta = Gamma / sum(Gamma). Empty result when c_backhaul == 0.
std::map<int, double> proportional_allocation(const std::vector<std::pair<int, double>>& gammas,
                                              double c_backhaul);

// Eq.-style effective rate: donor links deliver Gamma, MAP links deliver
// min(Gamma, beta * z * C^(b)).
double effective_rate(double gamma_bps, double beta, int z, double c_backhaul_bps,
                      bool is_donor);

// Fills state.rates (and state.backhaul) from the current association:
// access SINR/capacity per served link, Gamma, per-MAP backhaul capacity,
// proportional allocation, effective rates and the slot sum-rate.
void compute_slot_rates(NetworkState& state);

// Network sum-rate of the computed report; refreshes the per-BS subtotals.
double sum_rate(NetworkState& state);

struct ConstraintCheck {
    bool pass = true;
    std::vector<int> offenders;  // BS or UE ids, per constraint semantics
    std::string note;
};

struct ConstraintReport {
    std::map<std::string, ConstraintCheck> checks;  // "C1".."C8"
    bool all_pass() const {
        for (const auto& [_, c] : checks)
            if (!c.pass) return false;
        return true;
    }
    std::string summary() const;
};

// Verifies C1..C8 on the slot state (C8 against each MAP's previous position).
ConstraintReport check_constraints(const NetworkState& state);

}  // namespace mapsim
