#include "mapsim/federation.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mapsim {

Regime regime_from_string(const std::string& name) {
    if (name == "codebook") return Regime::codebook;
    if (name == "curriculum") return Regime::curriculum;
    if (name == "federated") return Regime::federated;
    throw std::invalid_argument("unknown regime: " + name);
}

std::string to_string(Regime regime) {
    switch (regime) {
        case Regime::codebook: return "codebook";
        case Regime::curriculum: return "curriculum";
        case Regime::federated: return "federated";
    }
    return "?";
}

int operational_complexity(Regime regime, int max_maps) {
    if (max_maps < 1) throw std::invalid_argument("need M >= 1");
    switch (regime) {
        case Regime::codebook: return max_maps * (max_maps + 1) / 2;
        case Regime::curriculum: return max_maps;
        case Regime::federated: return 1;
    }
    return 1;
}

double operational_efficiency(double sum_rate_bps, Regime regime, int max_maps) {
    return sum_rate_bps / static_cast<double>(operational_complexity(regime, max_maps));
}

std::vector<double> federated_average(const std::vector<double>& w_global,
                                      const std::vector<std::vector<double>>& agent_weights,
                                      double alpha_f) {
    if (agent_weights.empty()) throw std::invalid_argument("no agent weights to average");
    if (alpha_f < 0.0 || alpha_f > 1.0) throw std::invalid_argument("alpha_f outside [0,1]");
    for (const auto& w : agent_weights)
        if (w.size() != w_global.size())
            throw std::invalid_argument("weight vector length mismatch");

    double m_s = static_cast<double>(agent_weights.size());
    std::vector<double> out(w_global.size(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        double sum = 0.0;
        for (const auto& w : agent_weights) sum += w[i];
        out[i] = alpha_f * w_global[i] + (1.0 - alpha_f) / m_s * sum;
    }
    return out;
}

void PolicyRegistry::put(int team_size, int slot, PolicyParameters policy) {
    entries_[{team_size, slot}] = std::move(policy);
}

const PolicyParameters& PolicyRegistry::get(int team_size, int slot) const {
    auto it = entries_.find({team_size, slot});
    if (it == entries_.end()) {
        std::ostringstream os;
        os << "registry has no entry (k=" << team_size << ", slot=" << slot << ")";
        throw std::out_of_range(os.str());
    }
    return it->second;
}

bool PolicyRegistry::has(int team_size, int slot) const {
    return entries_.count({team_size, slot}) > 0;
}

std::vector<std::pair<int, int>> PolicyRegistry::keys() const {
    std::vector<std::pair<int, int>> out;
    for (const auto& [key, _] : entries_) out.push_back(key);
    return out;
}

int PolicyRegistry::max_team_size() const {
    int best = 0;
    for (const auto& [key, _] : entries_) best = std::max(best, key.first);
    return best;
}

namespace {

std::string entry_filename(Regime regime, int team_size, int slot) {
    switch (regime) {
        case Regime::codebook:
            return "cb_k" + std::to_string(team_size) + "_s" + std::to_string(slot) + ".bin";
        case Regime::curriculum: return "cur_a" + std::to_string(slot) + ".bin";
        case Regime::federated: return "pi_f.bin";
    }
    return "policy.bin";
}

std::uint64_t file_fnv64(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot hash " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    std::string bytes = buf.str();
    return fnv1a64(bytes);
}

}  // namespace

void PolicyRegistry::save(const std::string& dir) const {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    nlohmann::json manifest;
    manifest["regime"] = to_string(regime_);
    manifest["entries"] = nlohmann::json::array();
    for (const auto& [key, policy] : entries_) {
        std::string name = entry_filename(regime_, key.first, key.second);
        std::string path = dir + "/" + name;
        save_policy(policy, path);
        std::ostringstream hash;
        hash << std::hex << file_fnv64(path);
        manifest["entries"].push_back({{"team_size", key.first},
                                       {"slot", key.second},
                                       {"file", name},
                                       {"fnv64", hash.str()}});
    }
    std::ofstream os(dir + "/manifest.json", std::ios::trunc);
    os << manifest.dump(2) << "\n";
    if (!os) throw std::runtime_error("cannot write manifest in " + dir);
}

PolicyRegistry PolicyRegistry::load(const std::string& dir) {
    std::ifstream is(dir + "/manifest.json");
    if (!is) throw std::runtime_error("no registry manifest in " + dir);
    nlohmann::json manifest = nlohmann::json::parse(is);
    PolicyRegistry registry(regime_from_string(manifest.at("regime").get<std::string>()));
    for (const auto& entry : manifest.at("entries")) {
        std::string path = dir + "/" + entry.at("file").get<std::string>();
        std::ostringstream hash;
        hash << std::hex << file_fnv64(path);
        if (hash.str() != entry.at("fnv64").get<std::string>())
            throw std::runtime_error("checkpoint hash mismatch: " + path);
        registry.put(entry.at("team_size").get<int>(), entry.at("slot").get<int>(),
                     load_policy(path));
    }
    return registry;
}

const PolicyParameters& select_policy(const PolicyRegistry& registry, Regime regime,
                                      int m_s, int slot, std::mt19937_64& rng) {
    switch (regime) {
        case Regime::federated:
            return registry.get(0, 0);
        case Regime::curriculum: {
            // One model per agent; a fleet larger than the trained agent set
            // reuses models round-robin.
            int n = static_cast<int>(registry.size());
            if (n == 0) throw std::out_of_range("empty curriculum registry");
            return registry.get(0, (slot - 1) % n + 1);
        }
        case Regime::codebook: {
            if (registry.size() == 0) throw std::out_of_range("empty codebook registry");
            int largest = registry.max_team_size();
            if (m_s > largest) {
                // Beyond the trained sizes: sample uniformly from the largest set.
                std::uniform_int_distribution<int> pick(1, largest);
                return registry.get(largest, pick(rng));
            }
            if (registry.has(m_s, slot)) return registry.get(m_s, slot);
            // Untrained team size: nearest trained team at or above, slot clamped.
            int chosen_k = largest;
            for (const auto& key : registry.keys())
                if (key.first >= m_s) chosen_k = std::min(chosen_k, key.first);
            return registry.get(chosen_k, std::min(slot, chosen_k));
        }
    }
    throw std::out_of_range("unhandled regime");
}

EpisodeSetup sample_training_scenario(Regime regime, std::optional<int> codebook_team,
                                      const ScenarioConfig& base, std::mt19937_64& rng) {
    EpisodeSetup setup;
    setup.scenario = base;
    setup.scenario.n_ue = 25;

    int m_s;
    if (regime == Regime::codebook) {
        if (!codebook_team) throw std::invalid_argument("codebook sampling needs a team size");
        m_s = *codebook_team;
    } else {
        std::uniform_int_distribution<int> pick(2, 5);
        m_s = pick(rng);
    }

    std::uniform_real_distribution<double> ux(0.0, base.region.x_max);
    std::uniform_real_distribution<double> uy(0.0, base.region.y_max);
    double z = std::clamp(base.deploy_altitude_m, base.region.h_min, base.region.h_max);
    for (int i = 0; i < m_s; ++i) {
        double x = ux(rng);
        double y = uy(rng);
        setup.map_locations.push_back({x, y, z});
    }
    return setup;
}

void FederatedAggregator::operator()(TrainHookInfo& info) {
    if (schedule_.alpha_f >= 1.0) return;  // full retention: never mixes, agents stay independent
    if (info.total_env_steps - last_agg_steps_ < schedule_.tau_f) return;
    last_agg_steps_ = info.total_env_steps;

    auto& models = *info.models;
    std::vector<std::vector<double>> deployed;
    for (int s : info.episode_slots)
        deployed.push_back(models[static_cast<std::size_t>(s)].weights);
    global_ = federated_average(global_, deployed, schedule_.alpha_f);
    for (auto& m : models) m.weights = global_;
    count_ += 1;
    info.aggregated = true;
}

}  // namespace mapsim
