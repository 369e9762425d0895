#include "mapsim/config.hpp"

#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "mapsim/rng.hpp"

namespace mapsim {

namespace {

std::string fmt_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

double parse_double(const std::string& s) {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad number: " + s);
    return v;
}

long parse_long(const std::string& s) {
    std::size_t used = 0;
    long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad integer: " + s);
    return v;
}

bool parse_bool(const std::string& s) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw std::invalid_argument("bad boolean: " + s);
}

struct Key {
    std::string name;
    std::function<std::string(const SimConfig&)> get;
    std::function<void(SimConfig&, const std::string&)> set;
};

std::vector<Key> key_table() {
    std::vector<Key> keys;

#define KEY_D(NAME, FIELD)                                                            \
    keys.push_back({NAME, [](const SimConfig& c) { return fmt_double(c.FIELD); },     \
                    [](SimConfig& c, const std::string& v) { c.FIELD = parse_double(v); }})
#define KEY_I(NAME, FIELD)                                                            \
    keys.push_back({NAME, [](const SimConfig& c) { return std::to_string(c.FIELD); }, \
                    [](SimConfig& c, const std::string& v) {                          \
                        c.FIELD = static_cast<decltype(c.FIELD)>(parse_long(v));      \
                    }})
#define KEY_B(NAME, FIELD)                                                                     \
    keys.push_back({NAME, [](const SimConfig& c) { return c.FIELD ? "true" : "false"; },       \
                    [](SimConfig& c, const std::string& v) { c.FIELD = parse_bool(v); }})

    KEY_D("scenario.region_x", scenario.region.x_max);
    KEY_D("scenario.region_y", scenario.region.y_max);
    KEY_D("scenario.h_min", scenario.region.h_min);
    KEY_D("scenario.h_max", scenario.region.h_max);
    KEY_I("scenario.n_ue", scenario.n_ue);
    KEY_I("scenario.max_maps", scenario.max_maps);
    KEY_D("scenario.ue_speed", scenario.ue_speed_mps);
    KEY_D("scenario.blockage_prob", scenario.blockage_prob);
    KEY_D("scenario.demand_mean_gbps", scenario.demand_mean_gbps);
    KEY_I("scenario.seed", scenario.seed);
    KEY_I("scenario.slot_count", scenario.slot_count);
    KEY_I("scenario.mobility_groups", scenario.mobility_groups);
    KEY_D("scenario.waypoint_jitter_m", scenario.waypoint_jitter_m);
    KEY_I("scenario.blockage_epoch_slots", scenario.blockage_epoch_slots);
    KEY_D("scenario.donor_x", scenario.donor_loc.x);
    KEY_D("scenario.donor_y", scenario.donor_loc.y);
    KEY_D("scenario.donor_z", scenario.donor_loc.z);
    KEY_I("scenario.map_beam_limit", scenario.map_beam_limit);
    KEY_D("scenario.map_step_m", scenario.map_step_m);
    KEY_D("scenario.deploy_altitude_m", scenario.deploy_altitude_m);

    KEY_D("radio.bandwidth_hz", radio.bandwidth_hz);
    KEY_D("radio.mu", radio.mu);
    KEY_D("radio.noise_psd_dbm_hz", radio.noise_psd_dbm_hz);
    KEY_D("radio.donor_fc_hz", radio.donor_fc_hz);
    KEY_D("radio.map_fc_hz", radio.map_fc_hz);
    KEY_D("radio.donor_aperture_deg", radio.donor_aperture_deg);
    KEY_D("radio.map_aperture_deg", radio.map_aperture_deg);
    KEY_D("radio.donor_gain_dbi", radio.donor_gain_dbi);
    KEY_D("radio.donor_sidelobe_dbi", radio.donor_sidelobe_dbi);
    KEY_D("radio.map_mainlobe_dbi", radio.map_mainlobe_dbi);
    KEY_D("radio.map_sidelobe_dbi", radio.map_sidelobe_dbi);
    KEY_D("radio.shadowing_var_donor_db", radio.shadowing_var_donor_db);
    KEY_D("radio.shadowing_var_map_db", radio.shadowing_var_map_db);
    KEY_D("radio.nakagami_m", radio.nakagami_m);
    KEY_D("radio.donor_tx_power_dbm", radio.donor_tx_power_dbm);
    KEY_D("radio.map_tx_power_dbm", radio.map_tx_power_dbm);
    KEY_D("radio.los_a", radio.los_a);
    KEY_D("radio.los_b", radio.los_b);
    KEY_D("radio.exp_ground", radio.exp_ground);
    KEY_D("radio.exp_los", radio.exp_los);
    KEY_D("radio.exp_nlos", radio.exp_nlos);
    KEY_D("radio.shadow_decorrelation_m", radio.shadow_decorrelation_m);
    KEY_B("radio.deterministic", radio.deterministic);

    KEY_D("tradeoff.phi_max", tradeoff.phi_max);
    KEY_D("tradeoff.phi_min", tradeoff.phi_min);
    KEY_I("tradeoff.k_min", tradeoff.k_min);
    KEY_I("tradeoff.decision_period", tradeoff.decision_period);
    KEY_I("tradeoff.reset_period", tradeoff.reset_period);
    KEY_D("tradeoff.spawn_offset_m", tradeoff.spawn_offset_m);

    KEY_I("rl.n_ue_slots", rl.n_ue_slots);
    KEY_I("rl.n_map_slots", rl.n_map_slots);
    KEY_I("rl.embed_dim", rl.embed_dim);
    keys.push_back({"rl.trunk",
                    [](const SimConfig& c) {
                        std::string out;
                        for (std::size_t i = 0; i < c.rl.trunk.size(); ++i)
                            out += (i ? "," : "") + std::to_string(c.rl.trunk[i]);
                        return out;
                    },
                    [](SimConfig& c, const std::string& v) {
                        c.rl.trunk.clear();
                        std::stringstream ss(v);
                        std::string item;
                        while (std::getline(ss, item, ','))
                            c.rl.trunk.push_back(static_cast<int>(parse_long(item)));
                        if (c.rl.trunk.empty()) throw std::invalid_argument("empty trunk");
                    }});
    KEY_D("rl.d0", rl.d0);
    KEY_D("rl.cap_scale", rl.cap_scale);
    KEY_D("rl.gamma", rl.gamma);
    KEY_D("rl.target_altitude_m", rl.target_altitude_m);
    KEY_D("rl.learning_rate", rl.learning_rate);
    KEY_D("rl.clip_ratio", rl.clip_ratio);
    KEY_I("rl.epochs", rl.epochs);
    KEY_I("rl.batch_episodes", rl.batch_episodes);
    KEY_I("rl.minibatch", rl.minibatch);
    KEY_D("rl.entropy_coef", rl.entropy_coef);
    KEY_D("rl.value_coef", rl.value_coef);
    KEY_D("rl.max_grad_norm", rl.max_grad_norm);
    KEY_B("rl.normalize_advantages", rl.normalize_advantages);
    KEY_I("rl.rolling_window", rl.rolling_window);

    KEY_I("federation.tau_f", federation.tau_f);
    KEY_D("federation.alpha_f", federation.alpha_f);

    KEY_I("harness.train_steps", harness.train_steps);
    KEY_I("harness.eval_episodes", harness.eval_episodes);
    KEY_I("harness.eval_n_ue", harness.eval_n_ue);
    KEY_D("harness.eval_ue_speed", harness.eval_ue_speed);
    KEY_D("harness.eval_blockage", harness.eval_blockage);
    KEY_I("harness.compare_seeds", harness.compare_seeds);
    KEY_I("harness.workers", harness.workers);
    keys.push_back({"harness.out_dir",
                    [](const SimConfig& c) { return c.harness.out_dir; },
                    [](SimConfig& c, const std::string& v) { c.harness.out_dir = v; }});

#undef KEY_D
#undef KEY_I
#undef KEY_B
    return keys;
}

const std::vector<Key>& keys() {
    static const std::vector<Key> table = key_table();
    return table;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

void set_key(SimConfig& cfg, const std::string& key, const std::string& value) {
    for (const auto& k : keys()) {
        if (k.name == key) {
            try {
                k.set(cfg, value);
            } catch (const std::exception& e) {
                throw std::invalid_argument("config key '" + key + "': " + e.what());
            }
            return;
        }
    }
    throw std::invalid_argument("unknown config key: " + key);
}

}  // namespace

SimConfig load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file: " + path);
    SimConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        lineno += 1;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected 'key = value'");
        set_key(cfg, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    }
    return cfg;
}

void apply_overrides(SimConfig& cfg, const std::vector<std::string>& key_value_pairs) {
    for (const auto& kv : key_value_pairs) {
        std::size_t eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("override must be key=value: " + kv);
        set_key(cfg, trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
    }
}

SimConfig make_config(const std::string& path_or_empty,
                      const std::vector<std::string>& overrides) {
    SimConfig cfg = path_or_empty.empty() ? SimConfig{} : load_config_file(path_or_empty);
    apply_overrides(cfg, overrides);
    return cfg;
}

std::string dump_config(const SimConfig& cfg) {
    std::ostringstream os;
    for (const auto& k : keys()) os << k.name << " = " << k.get(cfg) << "\n";
    return os.str();
}

std::uint64_t config_hash(const SimConfig& cfg) { return fnv1a64(dump_config(cfg)); }

}  // namespace mapsim
