#include "mapsim/rl.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mapsim {

std::vector<double> discounted_returns(const std::vector<double>& rewards, double gamma) {
    std::vector<double> returns(rewards.size(), 0.0);
    double acc = 0.0;
    for (int t = static_cast<int>(rewards.size()) - 1; t >= 0; --t) {
        acc = rewards[static_cast<std::size_t>(t)] + gamma * acc;
        returns[static_cast<std::size_t>(t)] = acc;
    }
    return returns;
}

void Adam::step(std::vector<double>& weights, const std::vector<double>& grad) {
    if (weights.size() != m_.size() || grad.size() != m_.size())
        throw std::invalid_argument("Adam dimension mismatch");
    t_ += 1;
    double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < weights.size(); ++i) {
        m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
        v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
        double mhat = m_[i] / bc1;
        double vhat = v_[i] / bc2;
        weights[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
    }
}

void Adam::serialize(std::ostream& os) const {
    os << std::setprecision(17);  // exact binary64 round trip
    os << lr_ << " " << t_ << " " << m_.size() << "\n";
    for (double d : m_) os << d << " ";
    os << "\n";
    for (double d : v_) os << d << " ";
    os << "\n";
}

void Adam::deserialize(std::istream& is) {
    std::size_t n = 0;
    is >> lr_ >> t_ >> n;
    m_.resize(n);
    v_.resize(n);
    for (auto& d : m_) is >> d;
    for (auto& d : v_) is >> d;
}

namespace {

struct Sample {
    Observation obs;
    int action = 0;
    double log_prob_old = 0.0;
    double ret = 0.0;           // raw return at collection, z-scored in ppo_update
    double value_rollout = 0.0;
    double advantage = 0.0;
};

struct TrainerState {
    std::vector<PolicyParameters> models;
    std::vector<Adam> adams;
    std::mt19937_64 scenario_rng, seed_rng, action_rng, shuffle_rng;
    std::deque<double> rolling;
    long env_steps = 0;
    long episodes = 0;
};

void save_trainer_state(const TrainerState& st, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    for (std::size_t s = 0; s < st.models.size(); ++s)
        save_policy(st.models[s], dir + "/slot_" + std::to_string(s) + ".bin");
    std::ofstream os(dir + "/trainer_state.txt", std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write trainer state in " + dir);
    os << st.models.size() << " " << st.env_steps << " " << st.episodes << "\n";
    os << st.scenario_rng << "\n" << st.seed_rng << "\n" << st.action_rng << "\n"
       << st.shuffle_rng << "\n";
    os << st.rolling.size() << "\n" << std::setprecision(17);
    for (double d : st.rolling) os << d << " ";
    os << "\n";
    for (const auto& adam : st.adams) adam.serialize(os);
}

bool load_trainer_state(TrainerState& st, const std::string& dir) {
    std::ifstream is(dir + "/trainer_state.txt");
    if (!is) return false;
    std::size_t n_models = 0;
    is >> n_models >> st.env_steps >> st.episodes;
    is >> st.scenario_rng >> st.seed_rng >> st.action_rng >> st.shuffle_rng;
    std::size_t n_roll = 0;
    is >> n_roll;
    st.rolling.clear();
    for (std::size_t i = 0; i < n_roll; ++i) {
        double d;
        is >> d;
        st.rolling.push_back(d);
    }
    st.models.clear();
    st.adams.assign(n_models, Adam{});
    for (std::size_t s = 0; s < n_models; ++s) {
        st.models.push_back(load_policy(dir + "/slot_" + std::to_string(s) + ".bin"));
        st.adams[s].deserialize(is);
    }
    if (!is) throw std::runtime_error("corrupt trainer state in " + dir);
    return true;
}

double grad_global_norm(const std::vector<double>& g) {
    double s = 0.0;
    for (double v : g) s += v * v;
    return std::sqrt(s);
}

// Gradient of the clipped PPO objective + entropy bonus + value loss for one
// sample, accumulated into `grad`.
void accumulate_sample_grad(const PolicyParameters& model, const Sample& sample,
                            const RlConfig& rl, std::vector<double>& grad,
                            double inv_count) {
    ForwardCache cache = forward(model, sample.obs);
    int a = sample.action;
    double logp_new = cache.log_probs[static_cast<std::size_t>(a)];
    double ratio = std::exp(logp_new - sample.log_prob_old);
    double adv = sample.advantage;

    std::vector<double> dlogits(cache.logits.size(), 0.0);

    // Policy term passes gradient unless the clip is the binding branch.
    bool pass = adv >= 0.0 ? ratio <= 1.0 + rl.clip_ratio : ratio >= 1.0 - rl.clip_ratio;
    if (pass) {
        double coef = -adv * ratio * inv_count;  // minimizing -surrogate
        for (std::size_t k = 0; k < dlogits.size(); ++k) {
            double onehot = static_cast<int>(k) == a ? 1.0 : 0.0;
            dlogits[k] += coef * (onehot - cache.probs[k]);
        }
    }

    // Entropy bonus: L -= c_e * H, dH/dlogit_k = -p_k (log p_k + H).
    double entropy = 0.0;
    for (std::size_t k = 0; k < cache.probs.size(); ++k)
        if (cache.probs[k] > 0.0) entropy -= cache.probs[k] * cache.log_probs[k];
    for (std::size_t k = 0; k < dlogits.size(); ++k)
        dlogits[k] += rl.entropy_coef * inv_count * cache.probs[k] *
                      (cache.log_probs[k] + entropy);

    // Value regression toward the Monte-Carlo return.
    double dvalue = 2.0 * rl.value_coef * (cache.value - sample.ret) * inv_count;

    backward(model, cache, dlogits, dvalue, grad);

    if (!std::isfinite(logp_new) || !std::isfinite(cache.value))
        throw std::runtime_error("non-finite loss during PPO update");
}

void ppo_update(PolicyParameters& model, Adam& adam, std::vector<Sample>& batch,
                const RlConfig& rl, std::mt19937_64& shuffle_rng) {
    if (batch.empty()) return;

    // Standardize the value targets per batch: raw returns sit hundreds of
    // reward units below zero, which the value head cannot track at the
    // configured learning rate. The head regresses z-scored returns instead;
    // rollout values live on the same scale, so advantages stay consistent.
    {
        double mean = 0.0;
        for (const auto& s : batch) mean += s.ret;
        mean /= static_cast<double>(batch.size());
        double var = 0.0;
        for (const auto& s : batch) var += (s.ret - mean) * (s.ret - mean);
        double sd = std::max(std::sqrt(var / static_cast<double>(batch.size())), 1e-8);
        for (auto& s : batch) {
            s.ret = (s.ret - mean) / sd;
            s.advantage = s.ret - s.value_rollout;
        }
    }

    if (rl.normalize_advantages) {
        double mean = 0.0;
        for (const auto& s : batch) mean += s.advantage;
        mean /= static_cast<double>(batch.size());
        double var = 0.0;
        for (const auto& s : batch) var += (s.advantage - mean) * (s.advantage - mean);
        double sd = std::sqrt(var / static_cast<double>(batch.size()));
        for (auto& s : batch) s.advantage = (s.advantage - mean) / std::max(sd, 1e-8);
    }

    std::vector<std::size_t> idx(batch.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<double> grad(model.weights.size(), 0.0);

    for (int epoch = 0; epoch < rl.epochs; ++epoch) {
        std::shuffle(idx.begin(), idx.end(), shuffle_rng);
        for (std::size_t start = 0; start < idx.size();
             start += static_cast<std::size_t>(rl.minibatch)) {
            std::size_t end = std::min(idx.size(), start + static_cast<std::size_t>(rl.minibatch));
            std::fill(grad.begin(), grad.end(), 0.0);
            double inv = 1.0 / static_cast<double>(end - start);
            for (std::size_t i = start; i < end; ++i)
                accumulate_sample_grad(model, batch[idx[i]], rl, grad, inv);
            double norm = grad_global_norm(grad);
            if (rl.max_grad_norm > 0.0 && norm > rl.max_grad_norm) {
                double scale = rl.max_grad_norm / norm;
                for (auto& g : grad) g *= scale;
            }
            adam.step(model.weights, grad);
        }
    }
    model.version += 1;
}

}  // namespace

TrainResult train_ppo(const EnvSampler& env_sampler, const RegimeHook& regime_hook,
                      const PpoTrainConfig& cfg) {
    if (cfg.n_agent_slots < 1) throw std::invalid_argument("need at least one agent slot");

    TrainerState st;
    bool resumed = !cfg.checkpoint_dir.empty() && load_trainer_state(st, cfg.checkpoint_dir);
    if (!resumed) {
        std::mt19937_64 init_rng = make_engine(cfg.seed, "policy-init");
        ArchDescriptor arch;
        arch.n_ue_slots = cfg.rl.n_ue_slots;
        arch.n_map_slots = cfg.rl.n_map_slots;
        arch.embed_dim = cfg.rl.embed_dim;
        arch.trunk = cfg.rl.trunk;
        for (int s = 0; s < cfg.n_agent_slots; ++s) {
            PolicyParameters p = init_policy(arch, init_rng);
            p.regime_tag = cfg.regime_tag;
            st.models.push_back(std::move(p));
            st.adams.emplace_back(static_cast<std::size_t>(arch.param_count()),
                                  cfg.rl.learning_rate);
        }
        st.scenario_rng = make_engine(cfg.seed, "train-scenario");
        st.seed_rng = make_engine(cfg.seed, "train-env-seed");
        st.action_rng = make_engine(cfg.seed, "train-action");
        st.shuffle_rng = make_engine(cfg.seed, "train-shuffle");
    }

    TrainResult result;

    while (st.env_steps < cfg.total_steps) {
        // Collect one on-policy batch.
        std::vector<std::vector<Sample>> batch(st.models.size());
        for (int e = 0; e < cfg.rl.batch_episodes && st.env_steps < cfg.total_steps; ++e) {
            EpisodeSetup setup = env_sampler(st.scenario_rng);
            setup.scenario.seed = st.seed_rng();
            int m_s = static_cast<int>(setup.map_locations.size());
            if (m_s < 1 || m_s > cfg.n_agent_slots)
                throw std::runtime_error("sampled scenario deploys an unsupported MAP count");

            SimEnv env(setup.scenario, cfg.radio, cfg.rl, true);
            env.reset(setup.map_locations);

            std::vector<Trajectory> trajs(static_cast<std::size_t>(m_s));
            for (int t = 0; t < setup.scenario.slot_count; ++t) {
                std::map<int, Action> actions;
                for (int s = 0; s < m_s; ++s) {
                    int map_id = s + 1;
                    Observation obs = env.observe(map_id);
                    ActResult ar = act(st.models[static_cast<std::size_t>(s)], obs,
                                       ActMode::sample, st.action_rng);
                    actions[map_id] = ar.action;
                    auto& tr = trajs[static_cast<std::size_t>(s)];
                    tr.observations.push_back(std::move(obs));
                    tr.actions.push_back(static_cast<int>(ar.action));
                    tr.values.push_back(ar.value);
                    tr.log_probs.push_back(ar.log_prob);
                }
                SimEnv::SlotResult res = env.step(actions);
                for (int s = 0; s < m_s; ++s) {
                    int map_id = s + 1;
                    auto it = res.rewards.find(map_id);
                    double r = it == res.rewards.end() ? 0.0 : it->second;
                    trajs[static_cast<std::size_t>(s)].rewards.push_back(r);
                    st.rolling.push_back(r);
                    while (static_cast<int>(st.rolling.size()) > cfg.rl.rolling_window)
                        st.rolling.pop_front();
                }
                st.env_steps += m_s;
            }

            double ep_reward = 0.0;
            long ep_n = 0;
            for (int s = 0; s < m_s; ++s) {
                auto& tr = trajs[static_cast<std::size_t>(s)];
                std::vector<double> rets = discounted_returns(tr.rewards, cfg.rl.gamma);
                for (std::size_t t = 0; t < tr.size(); ++t) {
                    Sample smp;
                    smp.obs = std::move(tr.observations[t]);
                    smp.action = tr.actions[t];
                    smp.log_prob_old = tr.log_probs[t];
                    smp.ret = rets[t];
                    smp.value_rollout = tr.values[t];
                    batch[static_cast<std::size_t>(s)].push_back(std::move(smp));
                    ep_reward += tr.rewards[t];
                    ep_n += 1;
                }
            }
            st.episodes += 1;

            TrainHookInfo info;
            info.total_env_steps = st.env_steps;
            for (int s = 0; s < m_s; ++s) info.episode_slots.push_back(s);
            info.models = &st.models;
            regime_hook(info);

            double rolling_mean = 0.0;
            if (!st.rolling.empty()) {
                for (double d : st.rolling) rolling_mean += d;
                rolling_mean /= static_cast<double>(st.rolling.size());
            }
            result.curve.push_back({st.episodes, st.env_steps,
                                    ep_n > 0 ? ep_reward / static_cast<double>(ep_n) : 0.0,
                                    rolling_mean, info.aggregated});
        }

        for (std::size_t s = 0; s < st.models.size(); ++s)
            ppo_update(st.models[s], st.adams[s], batch[s], cfg.rl, st.shuffle_rng);
        for (auto& m : st.models) m.training_step = static_cast<std::uint64_t>(st.env_steps);

        if (!cfg.checkpoint_dir.empty()) save_trainer_state(st, cfg.checkpoint_dir);
    }

    result.models = std::move(st.models);
    result.total_env_steps = st.env_steps;
    result.episodes = st.episodes;
    return result;
}

}  // namespace mapsim
