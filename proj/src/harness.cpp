#include "mapsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mapsim/env.hpp"
#include "mapsim/network_ops.hpp"
#include "mapsim/plot.hpp"
#include "mapsim/scenario.hpp"

namespace mapsim {

namespace fs = std::filesystem;

namespace {

std::vector<Loc3> draw_initial_fleet(const ScenarioConfig& sc, int count,
                                     std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ux(0.0, sc.region.x_max);
    std::uniform_real_distribution<double> uy(0.0, sc.region.y_max);
    double z = std::clamp(sc.deploy_altitude_m, sc.region.h_min, sc.region.h_max);
    std::vector<Loc3> out;
    for (int i = 0; i < count; ++i) {
        double x = ux(rng), y = uy(rng);
        out.push_back({x, y, z});
    }
    return out;
}

// Agent-slot assignment at deployment: deployed MAPs in ascending id order
// take slots 1..M_s.
void assign_policies(NetworkState& state, const PolicyRegistry* registry, Regime regime,
                     std::map<int, const PolicyParameters*>& policy_of) {
    policy_of.clear();
    if (registry == nullptr) return;
    auto active = state.active_map_ids();
    int m_s = static_cast<int>(active.size());
    for (int rank = 0; rank < m_s; ++rank) {
        int id = active[static_cast<std::size_t>(rank)];
        const PolicyParameters& p =
            select_policy(*registry, regime, m_s, rank + 1, state.rng.control);
        policy_of[id] = &p;
        std::ostringstream tag;
        tag << to_string(regime) << ":k" << m_s << ":s" << rank + 1;
        state.map_by_id(id).policy_id = tag.str();
    }
}

}  // namespace

int registry_complexity(const PolicyRegistry& registry, Regime regime) {
    switch (regime) {
        case Regime::codebook:
            return operational_complexity(regime, std::max(1, registry.max_team_size()));
        case Regime::curriculum:
            return operational_complexity(regime, std::max<int>(1, static_cast<int>(registry.size())));
        case Regime::federated:
            return 1;
    }
    return 1;
}

EpisodeResult run_eval_episode(const SimConfig& cfg, std::uint64_t seed, int episode_id,
                               const EvalOptions& options) {
    ScenarioConfig sc = cfg.scenario;
    sc.seed = seed;

    SimEnv env(sc, cfg.radio, cfg.rl, /*compute_rewards=*/true);
    int m0 = options.initial_m_s > 0
                 ? std::min(options.initial_m_s, sc.max_maps)
                 : initial_map_count(sc.n_ue, sc.map_beam_limit, sc.max_maps);
    std::mt19937_64 fleet_rng = make_engine(seed, "eval-map-placement");
    env.reset(draw_initial_fleet(sc, m0, fleet_rng));

    NetworkState& state = env.mutable_state();
    std::map<int, const PolicyParameters*> policy_of;
    assign_policies(state, options.registry, options.regime, policy_of);

    std::mt19937_64 action_rng = make_engine(seed, "eval-actions");
    std::uniform_int_distribution<int> random_action(0, kNumActions - 1);

    int oc = options.registry ? registry_complexity(*options.registry, options.regime) : 1;

    TradeoffBook book;
    for (int id : state.active_map_ids()) monitor(state, id, cfg.tradeoff, book[id]);

    EpisodeResult result;
    double dist_sum = 0.0;
    long dist_n = 0;
    double reward_sum = 0.0;
    double eta_sum = 0.0;
    double rate_sum = 0.0;

    for (int t = 1; t <= sc.slot_count; ++t) {
        std::vector<std::string> events;
        if (options.dynamic_maps && cfg.tradeoff.decision_period > 0 &&
            t % cfg.tradeoff.decision_period == 0) {
            auto decisions = decide(state, book, cfg.tradeoff);
            if (!decisions.empty()) {
                apply_decisions(state, decisions);
                for (const auto& d : decisions) {
                    events.push_back(describe(d));
                    if (d.kind == Decision::Kind::repatriate) book.erase(d.map_id);
                }
                assign_policies(state, options.registry, options.regime, policy_of);
            }
        }

        std::map<int, Action> actions;
        for (int id : state.active_map_ids()) {
            if (options.registry == nullptr) {
                actions[id] = static_cast<Action>(random_action(action_rng));
            } else {
                Observation obs = env.observe(id);
                actions[id] = act(*policy_of.at(id), obs, options.mode, action_rng).action;
            }
        }
        SimEnv::SlotResult res = env.step(actions);

        for (int id : state.active_map_ids()) monitor(state, id, cfg.tradeoff, book[id]);

        ConstraintReport constraints = check_constraints(state);
        if (!constraints.all_pass()) result.constraints_ok = false;

        SlotRow row;
        row.episode = episode_id;
        row.t = t;
        row.m_s = state.active_map_count();
        row.connected = res.connected_ues;
        row.sum_rate_bps = res.sum_rate_bps;
        row.eta = res.sum_rate_bps / static_cast<double>(oc);
        row.mean_reward = res.mean_reward;
        for (int id : state.active_map_ids()) row.theta[id] = book[id].theta;
        row.events = events;
        result.rows.push_back(row);

        rate_sum += res.sum_rate_bps;
        eta_sum += row.eta;
        reward_sum += res.mean_reward;
        auto& bucket = result.rate_by_ms[row.m_s];
        bucket.first += res.sum_rate_bps;
        bucket.second += 1;
        for (const auto& [_, d] : res.target_dist_m) {
            dist_sum += d;
            dist_n += 1;
        }

        if (options.verbose_trace) {
            std::cout << "slot " << t << ": M_s=" << row.m_s << " connected="
                      << row.connected << " R=" << row.sum_rate_bps / 1e9
                      << " Gbps eta=" << row.eta / 1e9 << " mr=" << row.mean_reward;
            if (!events.empty()) {
                std::cout << " events=[";
                for (const auto& e : events) std::cout << e << " ";
                std::cout << "]";
            }
            std::cout << "\n";
            std::cout << "  theta:";
            for (const auto& [id, ts] : book)
                std::cout << " map" << id << "={theta=" << ts.theta
                          << ", phi=" << ts.inertia << ", served=" << ts.served << "}";
            std::cout << "\n";
            if (!constraints.all_pass()) std::cout << constraints.summary();
        }
    }

    double n = static_cast<double>(sc.slot_count);
    result.mean_sum_rate_bps = rate_sum / n;
    result.mean_eta = eta_sum / n;
    result.mean_reward = reward_sum / n;
    result.mean_target_dist_m = dist_n > 0 ? dist_sum / static_cast<double>(dist_n) : 0.0;
    result.final_m_s = state.active_map_count();
    return result;
}

namespace {

// Episodes fan out over a worker pool; outputs land indexed by episode so the
// record stream is ordered no matter who finishes first.
std::vector<EpisodeResult> run_episode_pool(const SimConfig& cfg,
                                            const std::vector<std::uint64_t>& seeds,
                                            const EvalOptions& options, int workers) {
    std::vector<EpisodeResult> results(seeds.size());
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min<int>(workers, static_cast<int>(seeds.size())));

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::atomic<bool> failed{false};
    std::string error;
    std::mutex error_mutex;

    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            while (true) {
                std::size_t e = next.fetch_add(1);
                if (e >= seeds.size() || failed.load()) return;
                try {
                    results[e] = run_eval_episode(cfg, seeds[e], static_cast<int>(e), options);
                } catch (const std::exception& ex) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    error = ex.what();
                    failed.store(true);
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failed.load()) throw std::runtime_error("episode worker failed: " + error);
    return results;
}

std::vector<std::uint64_t> episode_seeds(std::uint64_t base, int episodes,
                                         const std::string& tag) {
    std::vector<std::uint64_t> seeds;
    for (int e = 0; e < episodes; ++e)
        seeds.push_back(derive_seed(base, tag + "-ep-" + std::to_string(e)));
    return seeds;
}

SimConfig eval_scenario_config(const SimConfig& base) {
    SimConfig cfg = base;
    cfg.scenario.n_ue = base.harness.eval_n_ue;
    cfg.scenario.ue_speed_mps = base.harness.eval_ue_speed;
    cfg.scenario.blockage_prob = base.harness.eval_blockage;
    return cfg;
}

}  // namespace

EvalSummary run_generalization_eval(const PolicyRegistry& registry, const ExperimentSpec& spec) {
    SimConfig cfg = eval_scenario_config(spec.cfg);
    EvalOptions options;
    options.registry = &registry;
    options.regime = spec.regime;
    options.dynamic_maps = spec.dynamic_map_management;

    auto seeds = episode_seeds(spec.base_seed, spec.episodes, spec.name);
    auto results = run_episode_pool(cfg, seeds, options, cfg.harness.workers);

    fs::create_directories(cfg.harness.out_dir);
    std::string path = cfg.harness.out_dir + "/records_" + spec.name + ".ndjson";
    RecordWriter writer(path, cfg, spec.name, seeds);
    for (const auto& r : results)
        for (const auto& row : r.rows) writer.write(row);
    writer.close();

    EvalSummary summary;
    summary.record_path = path;
    summary.episodes = spec.episodes;
    int oc = registry_complexity(registry, spec.regime);
    double rate_sum = 0.0;
    long slots = 0;
    std::map<int, std::pair<double, long>> buckets;
    for (const auto& r : results) {
        for (const auto& [ms, b] : r.rate_by_ms) {
            buckets[ms].first += b.first;
            buckets[ms].second += b.second;
            rate_sum += b.first;
            slots += b.second;
        }
    }
    summary.mean_sum_rate_bps = slots > 0 ? rate_sum / static_cast<double>(slots) : 0.0;
    summary.mean_eta = summary.mean_sum_rate_bps / static_cast<double>(oc);
    for (const auto& [ms, b] : buckets) {
        summary.rate_by_ms[ms] = b.first / static_cast<double>(b.second);
        summary.eta_by_ms[ms] = summary.rate_by_ms[ms] / static_cast<double>(oc);
    }

    std::ofstream os(cfg.harness.out_dir + "/summary_" + spec.name + ".txt", std::ios::trunc);
    os << "evaluation " << spec.name << " (" << to_string(spec.regime) << ", "
       << (spec.dynamic_map_management ? "dynamic" : "fixed") << " fleet)\n"
       << "episodes: " << spec.episodes << "\n"
       << "E[R]: " << summary.mean_sum_rate_bps / 1e9 << " Gbps\n"
       << "E[eta]: " << summary.mean_eta / 1e9 << " Gbps/policy (O_c=" << oc << ")\n";
    for (const auto& [ms, v] : summary.rate_by_ms)
        os << "  M_s=" << ms << ": E[R]=" << v / 1e9
           << " Gbps, E[eta]=" << summary.eta_by_ms[ms] / 1e9 << "\n";
    return summary;
}

ComparisonReport run_dynamic_comparison(const PolicyRegistry& codebook,
                                        const PolicyRegistry& federated,
                                        const ExperimentSpec& spec) {
    SimConfig cfg = eval_scenario_config(spec.cfg);
    int n_seeds = cfg.harness.compare_seeds;
    auto seeds = episode_seeds(spec.base_seed, n_seeds, spec.name + "-cmp");

    struct ArmSpec {
        std::string name;
        const PolicyRegistry* registry;
        Regime regime;
        bool dynamic;
    };
    std::vector<ArmSpec> arms = {
        {"baseline_codebook_fixed", &codebook, Regime::codebook, false},
        {"codebook_dynamic", &codebook, Regime::codebook, true},
        {"federated_dynamic", &federated, Regime::federated, true},
    };

    fs::create_directories(cfg.harness.out_dir);
    std::vector<ComparisonArm> out_arms;
    for (const auto& arm : arms) {
        EvalOptions options;
        options.registry = arm.registry;
        options.regime = arm.regime;
        options.dynamic_maps = arm.dynamic;
        auto results = run_episode_pool(cfg, seeds, options, cfg.harness.workers);

        std::string path = cfg.harness.out_dir + "/records_" + spec.name + "_" + arm.name +
                           ".ndjson";
        RecordWriter writer(path, cfg, spec.name + "/" + arm.name, seeds);
        for (const auto& r : results)
            for (const auto& row : r.rows) writer.write(row);
        writer.close();

        ComparisonArm summary;
        summary.name = arm.name;
        int oc = registry_complexity(*arm.registry, arm.regime);
        double total = 0.0;
        for (const auto& r : results) {
            summary.per_seed_rate_bps.push_back(r.mean_sum_rate_bps);
            total += r.mean_sum_rate_bps;
        }
        summary.mean_rate_bps = total / static_cast<double>(results.size());
        summary.mean_eta = summary.mean_rate_bps / static_cast<double>(oc);
        out_arms.push_back(std::move(summary));
    }

    ComparisonReport report;
    report.baseline = out_arms[0];
    report.dynamic_codebook = out_arms[1];
    report.dynamic_federated = out_arms[2];
    auto rel = [](double v, double base) { return base > 0.0 ? (v - base) / base : 0.0; };
    report.rel_gain_dynamic_codebook =
        rel(report.dynamic_codebook.mean_rate_bps, report.baseline.mean_rate_bps);
    report.rel_gain_dynamic_federated =
        rel(report.dynamic_federated.mean_rate_bps, report.baseline.mean_rate_bps);

    int wins = 0;
    for (int s = 0; s < n_seeds; ++s)
        if (report.dynamic_federated.per_seed_rate_bps[static_cast<std::size_t>(s)] >
            report.baseline.per_seed_rate_bps[static_cast<std::size_t>(s)])
            wins += 1;
    report.federated_win_fraction = static_cast<double>(wins) / static_cast<double>(n_seeds);

    // Efficiency dominance: whenever the federated arm's rate is within a
    // factor 10 of the codebook arm's, its eta must come out ahead.
    bool within = report.dynamic_federated.mean_rate_bps * 10.0 >=
                  report.dynamic_codebook.mean_rate_bps;
    report.eta_dominance_holds =
        !within || report.dynamic_federated.mean_eta > report.dynamic_codebook.mean_eta;

    std::ostringstream text;
    text << "paired comparison over " << n_seeds << " seeds ("
         << cfg.scenario.n_ue << " UEs, mobile)\n";
    for (const auto& arm : out_arms)
        text << "  " << arm.name << ": E[R]=" << arm.mean_rate_bps / 1e9
             << " Gbps, E[eta]=" << arm.mean_eta / 1e9 << " Gbps/policy\n";
    text << "  dynamic codebook vs baseline: " << report.rel_gain_dynamic_codebook * 100.0
         << "%\n";
    text << "  dynamic federated vs baseline: " << report.rel_gain_dynamic_federated * 100.0
         << "% (wins on " << report.federated_win_fraction * 100.0 << "% of seeds)\n";
    text << "  eta dominance (federated vs codebook): "
         << (report.eta_dominance_holds ? "holds" : "violated") << "\n";
    report.text = text.str();

    report.report_path = cfg.harness.out_dir + "/comparison_" + spec.name + ".txt";
    std::ofstream os(report.report_path, std::ios::trunc);
    os << report.text;

    nlohmann::json j;
    for (const auto& arm : out_arms)
        j["arms"].push_back({{"name", arm.name},
                             {"mean_rate_bps", arm.mean_rate_bps},
                             {"mean_eta", arm.mean_eta},
                             {"per_seed_rate_bps", arm.per_seed_rate_bps}});
    j["rel_gain_dynamic_codebook"] = report.rel_gain_dynamic_codebook;
    j["rel_gain_dynamic_federated"] = report.rel_gain_dynamic_federated;
    j["federated_win_fraction"] = report.federated_win_fraction;
    j["eta_dominance_holds"] = report.eta_dominance_holds;
    std::ofstream js(cfg.harness.out_dir + "/comparison_" + spec.name + ".json",
                     std::ios::trunc);
    js << j.dump(2) << "\n";
    return report;
}

namespace {

constexpr int kCodebookTeams[] = {2, 3, 4};
constexpr int kAgentSlots = 5;  // curriculum / federated training fleet sizes 2..5

EnvSampler make_sampler(Regime regime, std::optional<int> team, const ScenarioConfig& base) {
    return [regime, team, base](std::mt19937_64& rng) {
        return sample_training_scenario(regime, team, base, rng);
    };
}

}  // namespace

TrainOutput run_training(const ExperimentSpec& spec) {
    const SimConfig& cfg = spec.cfg;
    fs::create_directories(cfg.harness.out_dir);

    TrainOutput out;
    out.registry = PolicyRegistry(spec.regime);

    ScenarioConfig train_base = cfg.scenario;
    train_base.ue_speed_mps = 0.0;  // training scenarios are static snapshots
    train_base.blockage_prob = 0.0;

    auto run_one = [&](const std::string& tag, int slots, std::optional<int> team,
                       const RegimeHook& hook) {
        PpoTrainConfig tc;
        tc.rl = cfg.rl;
        tc.radio = cfg.radio;
        tc.n_agent_slots = slots;
        tc.total_steps = cfg.harness.train_steps;
        tc.seed = derive_seed(spec.base_seed, "train-" + tag);
        tc.regime_tag = tag;
        tc.checkpoint_dir = cfg.harness.out_dir + "/ckpt_" + tag;
        if (spec.fresh) fs::remove_all(tc.checkpoint_dir);

        TrainResult result = train_ppo(make_sampler(spec.regime, team, train_base), hook, tc);

        std::string curve_path = cfg.harness.out_dir + "/curves_" + tag + ".ndjson";
        std::vector<CurveRow> rows;
        for (const auto& r : result.curve)
            rows.push_back({r.episode, r.env_steps, r.episode_mean_reward,
                            r.rolling_mean_reward, r.aggregation_event});
        append_curve_rows(curve_path, rows);
        out.curve_files.push_back(curve_path);
        out.total_env_steps += result.total_env_steps;
        return result;
    };

    if (spec.regime == Regime::codebook) {
        for (int k : kCodebookTeams) {
            std::string tag = "codebook_k" + std::to_string(k);
            RegimeHook hook = [](TrainHookInfo&) {};
            TrainResult result = run_one(tag, k, k, hook);
            for (int s = 0; s < k; ++s)
                out.registry.put(k, s + 1, result.models[static_cast<std::size_t>(s)]);
        }
    } else if (spec.regime == Regime::curriculum) {
        RegimeHook hook = [](TrainHookInfo&) {};
        TrainResult result = run_one("curriculum", kAgentSlots, std::nullopt, hook);
        for (int s = 0; s < kAgentSlots; ++s)
            out.registry.put(0, s + 1, result.models[static_cast<std::size_t>(s)]);
    } else {
        // Federated: one shared model; the aggregator folds agent weights into
        // the running global every tau_f transitions.
        std::mt19937_64 init_rng = make_engine(derive_seed(spec.base_seed, "train-federated"),
                                               "policy-init");
        ArchDescriptor arch;
        arch.n_ue_slots = cfg.rl.n_ue_slots;
        arch.n_map_slots = cfg.rl.n_map_slots;
        arch.embed_dim = cfg.rl.embed_dim;
        arch.trunk = cfg.rl.trunk;
        PolicyParameters global_init = init_policy(arch, init_rng);
        FederatedAggregator aggregator(cfg.federation, global_init.weights);
        RegimeHook hook = [&aggregator](TrainHookInfo& info) { aggregator(info); };
        TrainResult result = run_one("federated", kAgentSlots, std::nullopt, hook);

        // Final federation round folds the post-aggregation training tail into pi_f.
        std::vector<std::vector<double>> all_weights;
        for (const auto& m : result.models) all_weights.push_back(m.weights);
        std::vector<double> pi_f_weights =
            federated_average(aggregator.global(), all_weights, cfg.federation.alpha_f);

        PolicyParameters pi_f = result.models[0];
        pi_f.weights = std::move(pi_f_weights);
        pi_f.regime_tag = "federated:pi_f";
        out.registry.put(0, 0, pi_f);
    }

    out.registry_dir = cfg.harness.out_dir + "/registry_" + to_string(spec.regime);
    out.registry.save(out.registry_dir);
    return out;
}

EpisodeResult run_trace(const ExperimentSpec& spec, const PolicyRegistry* registry) {
    EvalOptions options;
    options.registry = registry;
    options.regime = spec.regime;
    options.dynamic_maps = spec.dynamic_map_management;
    options.verbose_trace = true;
    std::uint64_t seed = derive_seed(spec.base_seed, spec.name + "-trace");
    return run_eval_episode(spec.cfg, seed, 0, options);
}

std::vector<std::string> emit_plots(const std::vector<std::string>& curve_files,
                                    const std::vector<std::string>& record_files,
                                    const std::string& out_dir) {
    if (curve_files.empty() && record_files.empty())
        throw std::invalid_argument("nothing to plot");
    fs::create_directories(out_dir);
    std::vector<std::string> outputs;

    if (!curve_files.empty()) {
        std::vector<Series> series;
        std::vector<double> marks;
        for (const auto& path : curve_files) {
            auto rows = read_curve_rows(path);
            Series s;
            s.label = fs::path(path).stem().string();
            for (const auto& r : rows) {
                s.x.push_back(static_cast<double>(r.steps));
                s.y.push_back(r.rolling_mean_reward);
                if (r.aggregation_event) marks.push_back(static_cast<double>(r.steps));
            }
            if (!s.x.empty()) series.push_back(std::move(s));
        }
        if (!series.empty()) {
            std::string path = out_dir + "/reward_convergence.svg";
            svg_line_chart(path, "Rolling mean reward (window 500)", "environment steps",
                           "reward", series, marks);
            outputs.push_back(path);
        }
    }

    if (!record_files.empty()) {
        std::vector<std::string> labels;
        std::map<int, std::vector<double>> rate_rows;   // M_s -> per-file E[R]
        std::map<int, std::vector<double>> eta_rows;
        std::size_t n_files = record_files.size();
        for (std::size_t f = 0; f < n_files; ++f) {
            RecordFile file = read_records(record_files[f]);
            labels.push_back(file.name);
            std::map<int, std::pair<double, long>> rate_acc;
            std::map<int, std::pair<double, long>> eta_acc;
            for (const auto& row : file.rows) {
                rate_acc[row.m_s].first += row.sum_rate_bps;
                rate_acc[row.m_s].second += 1;
                eta_acc[row.m_s].first += row.eta;
                eta_acc[row.m_s].second += 1;
            }
            for (const auto& [ms, acc] : rate_acc) {
                auto& rv = rate_rows[ms];
                rv.resize(n_files, 0.0);
                rv[f] = acc.first / static_cast<double>(acc.second);
                auto& ev = eta_rows[ms];
                ev.resize(n_files, 0.0);
                ev[f] = eta_acc[ms].first / static_cast<double>(eta_acc[ms].second);
            }
        }
        auto to_groups = [&](const std::map<int, std::vector<double>>& rows) {
            std::vector<BarGroup> groups;
            for (const auto& [ms, values] : rows) {
                BarGroup g;
                g.label = "M_s=" + std::to_string(ms);
                g.values = values;
                g.values.resize(n_files, 0.0);
                groups.push_back(std::move(g));
            }
            return groups;
        };
        std::string rate_path = out_dir + "/sum_rate_by_ms.svg";
        svg_bar_chart(rate_path, "Mean sum-rate by deployed MAP count", "E[R] (bps)", labels,
                      to_groups(rate_rows));
        outputs.push_back(rate_path);
        std::string eta_path = out_dir + "/efficiency_by_ms.svg";
        svg_bar_chart(eta_path, "Operational efficiency by deployed MAP count",
                      "E[eta] (bps/policy)", labels, to_groups(eta_rows));
        outputs.push_back(eta_path);
    }
    return outputs;
}

}  // namespace mapsim
