#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mapsim/env.hpp"
#include "mapsim/policy.hpp"

namespace mapsim {

// One agent's record of one episode.
struct Trajectory {
    std::vector<Observation> observations;
    std::vector<int> actions;
    std::vector<double> rewards;
    std::vector<double> values;
    std::vector<double> log_probs;

    std::size_t size() const { return actions.size(); }
};

// Discounted Monte-Carlo returns over one trajectory.
std::vector<double> discounted_returns(const std::vector<double>& rewards, double gamma);

// Plain Adam over a flat weight vector.
class Adam {
  public:
    Adam() = default;
    Adam(std::size_t dim, double lr) : lr_(lr), m_(dim, 0.0), v_(dim, 0.0) {}
    void step(std::vector<double>& weights, const std::vector<double>& grad);
    void serialize(std::ostream& os) const;
    void deserialize(std::istream& is);

  private:
    double lr_ = 1e-4;
    double beta1_ = 0.9;
    double beta2_ = 0.999;
    double eps_ = 1e-8;
    long t_ = 0;
    std::vector<double> m_, v_;
};

// What an episode looks like for the trainer: the world plus where the
// deployed MAPs start.
struct EpisodeSetup {
    ScenarioConfig scenario;
    std::vector<Loc3> map_locations;
};

using EnvSampler = std::function<EpisodeSetup(std::mt19937_64&)>;

// Post-episode callback, where regimes do their bookkeeping (federated
// aggregation). Setting `aggregated` marks the event on the training curve.
struct TrainHookInfo {
    long total_env_steps = 0;
    std::vector<int> episode_slots;  // agent slots deployed in the finished episode
    std::vector<PolicyParameters>* models = nullptr;
    bool aggregated = false;
};
using RegimeHook = std::function<void(TrainHookInfo&)>;

struct TrainProgressRow {
    long episode = 0;
    long env_steps = 0;
    double episode_mean_reward = 0.0;
    double rolling_mean_reward = 0.0;
    bool aggregation_event = false;
};

struct TrainResult {
    std::vector<PolicyParameters> models;
    std::vector<TrainProgressRow> curve;
    long total_env_steps = 0;
    long episodes = 0;
};

struct PpoTrainConfig {
    RlConfig rl;
    RadioConfig radio;
    int n_agent_slots = 1;
    long total_steps = 50000;      // environment transitions, summed over agents
    std::uint64_t seed = 1;
    std::string regime_tag;
    // Optional snapshot directory: training resumes from it when present and
    // rewrites it as it goes. Curve rows already emitted are not repeated.
    std::string checkpoint_dir;
};

// Clipped-objective PPO over episodic rollouts. Deployed agent slots each
// episode are 1..M_s (models indexed 0-based); agents absent from an episode
// collect no gradient. Deterministic for a fixed seed.
TrainResult train_ppo(const EnvSampler& env_sampler, const RegimeHook& regime_hook,
                      const PpoTrainConfig& cfg);

}  // namespace mapsim
