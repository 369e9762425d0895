#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mapsim/policy.hpp"
#include "mapsim/rl.hpp"

namespace mapsim {

enum class Regime { codebook, curriculum, federated };

Regime regime_from_string(const std::string& name);
std::string to_string(Regime regime);

// Number of distinct policies each regime maintains for a fleet of M MAPs.
int operational_complexity(Regime regime, int max_maps);

// Operational efficiency eta = R / O_c.
double operational_efficiency(double sum_rate_bps, Regime regime, int max_maps);

// Per-(team size, slot) weighted-average update of the running global model:
// w <- alpha_f w + (1 - alpha_f)/M_s sum_i w_i. Lengths must match.
std::vector<double> federated_average(const std::vector<double>& w_global,
                                      const std::vector<std::vector<double>>& agent_weights,
                                      double alpha_f);

// The policy store the placement policy manager reads from.
//   codebook:   key (team_size k, slot i in 1..k)
//   curriculum: key (0, agent id)
//   federated:  the single pi_f under key (0, 0)
class PolicyRegistry {
  public:
    PolicyRegistry() = default;
    explicit PolicyRegistry(Regime regime) : regime_(regime) {}

    Regime regime() const { return regime_; }
    void put(int team_size, int slot, PolicyParameters policy);
    const PolicyParameters& get(int team_size, int slot) const;
    bool has(int team_size, int slot) const;
    std::size_t size() const { return entries_.size(); }
    std::vector<std::pair<int, int>> keys() const;
    int max_team_size() const;

    // Directory of checkpoint files plus a manifest with per-file hashes.
    void save(const std::string& dir) const;
    static PolicyRegistry load(const std::string& dir);

  private:
    Regime regime_ = Regime::federated;
    std::map<std::pair<int, int>, PolicyParameters> entries_;
};

// Deployment-time policy lookup for agent `slot` (1-based rank of the MAP in
// ascending-id order). Codebook: pi_{M_s,slot} for trained team sizes, a
// uniformly sampled largest-team entry when M_s exceeds them, the nearest
// trained team otherwise. Curriculum: pi_slot (round-robin past the trained
// agent count). Federated: always pi_f. Throws on an unusable registry.
const PolicyParameters& select_policy(const PolicyRegistry& registry, Regime regime,
                                      int m_s, int slot, std::mt19937_64& rng);

// Training scenario draw. Curriculum/federated sample M_s uniformly from
// {2..5}; a codebook entry trains at its fixed team size. 25 UEs either way,
// MAP starting positions uniform in the region.
EpisodeSetup sample_training_scenario(Regime regime, std::optional<int> codebook_team,
                                      const ScenarioConfig& base, std::mt19937_64& rng);

// Regime hook for train_ppo in the federated regime: every tau_f env steps
// (summed over agents) the deployed agents' weights are averaged into the
// running global model, which is written back to every slot.
class FederatedAggregator {
  public:
    FederatedAggregator(FederationSchedule schedule, std::vector<double> initial_global)
        : schedule_(schedule), global_(std::move(initial_global)) {}

    void operator()(TrainHookInfo& info);
    const std::vector<double>& global() const { return global_; }
    int aggregations() const { return count_; }

  private:
    FederationSchedule schedule_;
    std::vector<double> global_;
    long last_agg_steps_ = 0;
    int count_ = 0;
};

}  // namespace mapsim
