// Acceptance suite: exercises the simulator end to end and prints one
// pass/fail line per criterion. Exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "mapsim/env.hpp"
#include "mapsim/harness.hpp"
#include "mapsim/kmeans.hpp"
#include "mapsim/network_ops.hpp"
#include "mapsim/radio.hpp"
#include "mapsim/scenario.hpp"

using namespace mapsim;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    int id;
    std::string name;
    bool pass = false;
    std::string detail;
};

std::vector<Criterion> g_results;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    g_results.push_back({id, name, pass, detail});
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << "criterion " << id << " (" << name
              << "): " << detail << std::endl;
}

bool rel_ok(double actual, double expected, double tol = 1e-9) {
    if (expected == 0.0) return std::abs(actual) <= tol;
    return std::abs(actual - expected) / std::abs(expected) <= tol;
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

double elapsed_s(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// 1. Formula exactness
// ---------------------------------------------------------------------------

void criterion_formulas() {
    RadioConfig radio;  // mu = 0.75, B = 500 MHz
    bool ok = true;
    std::ostringstream why;

    ok &= rel_ok(access_capacity(3.0, 1, radio), 250e6);
    ok &= rel_ok(access_capacity(15.0, 1, radio), 500e6);
    ok &= access_capacity(3.0, 0, radio) == 0.0;
    ok &= rel_ok(backhaul_capacity(1.0, 1, radio), 375e6);
    ok &= rel_ok(backhaul_capacity(3.0, 1, radio), 750e6);
    ok &= backhaul_capacity(3.0, 0, radio) == 0.0;
    if (!ok) why << "capacity formulas off; ";

    bool ok_rate = rel_ok(effective_rate(250e6, 0.5, 1, 375e6, false), 187.5e6) &&
                   rel_ok(effective_rate(250e6, 0.5, 1, 375e6, true), 250e6) &&
                   effective_rate(250e6, 0.5, 0, 375e6, false) == 0.0;
    if (!ok_rate) why << "effective rate off; ";
    ok &= ok_rate;

    // Sum-rate through the pipeline: one donor-served UE delivers its demand.
    ScenarioConfig sc;
    sc.n_ue = 1;
    sc.seed = 4;
    NetworkState s = build_scenario(sc);
    s.radio.deterministic = true;
    s.ues[0].demand_bps = 1e9;
    s.ues[0].loc = {100.0, 90.0};
    refresh_channels(s);
    s.assoc = associate_max_snr(s);
    compute_slot_rates(s);
    bool ok_sum = rel_ok(s.rates.sum_rate_bps, 1e9);
    // and the report total equals an independent re-summation
    double manual = 0.0;
    for (const auto& e : s.rates.entries) manual += e.rate_bps;
    ok_sum &= rel_ok(s.rates.sum_rate_bps, manual);
    if (!ok_sum) why << "sum-rate off; ";
    ok &= ok_sum;

    RewardParams params;  // d0 = 10, cap_scale = 1e-9
    bool ok_reward = rel_ok(placement_reward(20.0, 375e6, params), -20.0) &&
                     rel_ok(placement_reward(5.0, 375e6, params), 0.375 - 10.0) &&
                     rel_ok(placement_reward(10.0, 375e6, params), 0.375 - 10.0);
    if (!ok_reward) why << "reward off; ";
    ok &= ok_reward;

    auto fa = federated_average({2.0}, {{4.0}, {0.0}}, 0.5);
    auto fb = federated_average({2.0}, {{4.0}, {0.0}}, 1.0);
    auto fc = federated_average({2.0}, {{7.5}}, 0.0);
    bool ok_fed = rel_ok(fa[0], 2.0) && rel_ok(fb[0], 2.0) && rel_ok(fc[0], 7.5);
    if (!ok_fed) why << "federated average off; ";
    ok &= ok_fed;

    report(1, "formula exactness", ok, ok ? "all hand-computed values within 1e-9" : why.str());
}

// ---------------------------------------------------------------------------
// 2. Constraint suite over random slot states
// ---------------------------------------------------------------------------

void criterion_constraints() {
    auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> n_ue(1, 40);
    std::uniform_int_distribution<int> n_map(0, 8);
    std::uniform_int_distribution<int> beams(1, 10);
    std::uniform_int_distribution<int> action(0, kNumActions - 1);
    std::uniform_real_distribution<double> frac(0.0, 1.0);

    int violations = 0;
    std::string first_failure;
    const int trials = 1000;
    for (int trial = 0; trial < trials; ++trial) {
        ScenarioConfig cfg;
        cfg.n_ue = n_ue(rng);
        cfg.seed = rng();
        cfg.blockage_prob = 0.5 * frac(rng);
        cfg.map_beam_limit = beams(rng);
        NetworkState s = build_scenario(cfg);
        int maps = n_map(rng);
        std::uniform_real_distribution<double> ux(0.0, cfg.region.x_max);
        std::uniform_real_distribution<double> uz(cfg.region.h_min, cfg.region.h_max);
        for (int i = 1; i <= maps; ++i) {
            double x = ux(rng), y = ux(rng), z = uz(rng);
            activate_map(s, i, {x, y, z});
        }
        refresh_channels(s);
        s.assoc = associate_max_snr(s);
        compute_slot_rates(s);
        for (int i = 1; i <= maps; ++i)
            apply_action(s, i, static_cast<Action>(action(rng)), cfg.map_step_m);
        ConstraintReport report = check_constraints(s);
        if (!report.all_pass()) {
            violations += 1;
            if (first_failure.empty()) first_failure = report.summary();
        }
    }
    std::ostringstream detail;
    detail << trials << " random slots, " << violations << " violations, "
           << elapsed_s(start) << "s";
    if (violations > 0) detail << "; first: " << first_failure;
    report(2, "constraint suite", violations == 0, detail.str());
}

// ---------------------------------------------------------------------------
// 3. Allocation optimality against a grid oracle
// ---------------------------------------------------------------------------

double grid_best_allocation(const std::vector<double>& gammas, double c) {
    const int steps = 100;
    double best = 0.0;
    auto recurse = [&](auto&& self, std::size_t idx, int left, double acc) -> void {
        if (idx == gammas.size()) {
            best = std::max(best, acc);
            return;
        }
        for (int b = 0; b <= left; ++b) {
            double delivered = std::min(gammas[idx], b / 100.0 * c);
            self(self, idx + 1, left - b, acc + delivered);
        }
    };
    recurse(recurse, 0, steps, 0.0);
    return best;
}

void criterion_allocation_oracle() {
    auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> n_ue(1, 4);
    std::uniform_real_distribution<double> demand(1e7, 1.5e9);
    std::uniform_real_distribution<double> cap(5e7, 2e9);

    int failures = 0;
    double worst_ratio = 1.0;
    const int instances = 200;
    for (int i = 0; i < instances; ++i) {
        int n = n_ue(rng);
        std::vector<std::pair<int, double>> gammas;
        std::vector<double> plain;
        for (int j = 0; j < n; ++j) {
            double g = demand(rng);
            gammas.push_back({j, g});
            plain.push_back(g);
        }
        double c = cap(rng);
        auto beta = proportional_allocation(gammas, c);
        double achieved = 0.0;
        for (const auto& [ue, g] : gammas) achieved += std::min(g, beta[ue] * c);
        double best = grid_best_allocation(plain, c);
        double ratio = best > 0.0 ? achieved / best : 1.0;
        worst_ratio = std::min(worst_ratio, ratio);
        if (achieved < best * 0.99) failures += 1;
    }
    std::ostringstream detail;
    detail << instances << " instances, worst achieved/best = " << worst_ratio << ", "
           << failures << " below 99%, " << elapsed_s(start) << "s";
    report(3, "allocation optimality oracle", failures == 0, detail.str());
}

// ---------------------------------------------------------------------------
// 4. Association oracle (exhaustive search over feasible associations)
// ---------------------------------------------------------------------------

double association_gamma_sum(NetworkState& s, const std::vector<int>& serving) {
    s.assoc.serving_bs = serving;
    s.assoc.served_count.clear();
    for (int bs : serving)
        if (bs >= 0) s.assoc.served_count[bs] += 1;
    double total = 0.0;
    for (const auto& ue : s.ues) {
        int bs = serving[static_cast<std::size_t>(ue.id)];
        if (bs < 0) continue;
        double c = access_capacity(access_sinr(s, bs, ue.id), 1, s.radio);
        total += std::min(ue.demand_bps, c);
    }
    return total;
}

void criterion_association_oracle() {
    auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(47);
    std::uniform_int_distribution<int> n_ue(3, 6);
    std::uniform_int_distribution<int> n_map(2, 3);
    std::uniform_int_distribution<int> beams(1, 3);
    std::uniform_int_distribution<int> with_donor(0, 1);

    double greedy_total = 0.0, best_total = 0.0, worst_instance = 1.0;
    const int instances = 200;
    for (int inst = 0; inst < instances; ++inst) {
        ScenarioConfig cfg;
        cfg.n_ue = n_ue(rng);
        cfg.seed = rng();
        cfg.map_beam_limit = beams(rng);
        NetworkState s = build_scenario(cfg);
        bool donor_far = with_donor(rng) == 0;
        if (donor_far) s.donor.loc = {-5000.0, -5000.0, 10.0};  // donor effectively absent
        int maps = n_map(rng);
        std::uniform_real_distribution<double> ux(0.0, cfg.region.x_max);
        for (int i = 1; i <= maps; ++i) {
            double x = ux(rng), y = ux(rng);
            activate_map(s, i, {x, y, 40.0});
        }
        refresh_channels(s);

        AssociationState greedy = associate_max_snr(s);
        std::vector<int> greedy_serving = greedy.serving_bs;
        double greedy_gamma = association_gamma_sum(s, greedy_serving);

        // exhaustive search over per-UE choices in {none, donor, MAP ids}
        std::vector<int> options{-1, kDonorId};
        for (int i = 1; i <= maps; ++i) options.push_back(i);
        std::vector<int> serving(s.ues.size(), -1);
        double best_gamma = 0.0;
        auto recurse = [&](auto&& self, std::size_t ue) -> void {
            if (ue == s.ues.size()) {
                std::map<int, int> counts;
                for (int bs : serving)
                    if (bs > 0) counts[bs] += 1;
                for (const auto& [bs, n] : counts)
                    if (n > s.map_by_id(bs).beam_limit) return;  // infeasible
                best_gamma = std::max(best_gamma, association_gamma_sum(s, serving));
                return;
            }
            if (s.ues[ue].blocked) {
                serving[ue] = -1;
                self(self, ue + 1);
                return;
            }
            for (int bs : options) {
                serving[ue] = bs;
                self(self, ue + 1);
            }
            serving[ue] = -1;
        };
        recurse(recurse, 0);

        greedy_total += greedy_gamma;
        best_total += best_gamma;
        if (best_gamma > 0.0) worst_instance = std::min(worst_instance, greedy_gamma / best_gamma);
    }
    double ratio = greedy_total / best_total;
    std::ostringstream detail;
    detail << instances << " instances, greedy/best = " << ratio
           << " (worst single instance " << worst_instance << "), " << elapsed_s(start) << "s";
    report(4, "association oracle", ratio >= 0.95, detail.str());
}

// ---------------------------------------------------------------------------
// 5. Scripted trade-off schedule
// ---------------------------------------------------------------------------

// Hand derivation (all checked below). Twelve UEs sit on a 4 m circle around
// (40,40); MAP 1 hovers right above at 40 m; the donor is at (100,100,10);
// nobody moves and the channel is deterministic. Received powers: MAP 1 at
// ~40 m beats the donor at ~85 m for every cluster UE, so max-SNR fills MAP
// 1's ten beams and the rest overflow. Per monitoring event MAP 1 gets +1
// (inertia ~16,000 m^2 > 6,000) and +1 (ten of ten beams used). A window of
// ten events averages positive, so t=10 activates MAP 2 at (40,40,70) (zero
// spawn offset, mid-height). MAP 2 then wins the two overflow UEs (70.1 m
// beats the donor's 85 m), giving it +1 per event (inertia ~9,800), so t=20
// activates MAP 3 at the same spot; the tie against co-located MAP 2 breaks
// to the lower id, MAP 3 serves nobody, drains at -1 per event, and t=30
// repatriates it. With the fleet capped at M=3 the pattern then alternates.
void criterion_tradeoff_schedule() {
    ScenarioConfig sc;
    sc.n_ue = 12;
    sc.seed = 99;
    sc.max_maps = 3;
    sc.ue_speed_mps = 0.0;
    sc.blockage_prob = 0.0;
    NetworkState s = build_scenario(sc);
    s.radio.deterministic = true;
    for (int j = 0; j < 12; ++j) {
        double angle = 2.0 * M_PI * j / 12.0;
        s.ues[static_cast<std::size_t>(j)].loc = {40.0 + 4.0 * std::cos(angle),
                                                  40.0 + 4.0 * std::sin(angle)};
        s.ues[static_cast<std::size_t>(j)].demand_bps = 1e9;
    }
    activate_map(s, 1, {40.0, 40.0, 40.0});

    TradeoffParams params;
    params.spawn_offset_m = 0.0;

    refresh_channels(s);
    s.assoc = associate_max_snr(s);
    compute_slot_rates(s);
    TradeoffBook book;
    for (int id : s.active_map_ids()) monitor(s, id, params, book[id]);

    std::map<int, std::vector<std::string>> events;
    bool premises_ok = true;
    std::ostringstream why;
    for (int t = 1; t <= 60; ++t) {
        if (t % params.decision_period == 0) {
            auto decisions = decide(s, book, params);
            apply_decisions(s, decisions);
            for (const auto& d : decisions) {
                events[t].push_back(describe(d));
                if (d.kind == Decision::Kind::repatriate) book.erase(d.map_id);
            }
        }
        s.slot = t;
        step_mobility(s);
        refresh_channels(s);
        s.assoc = associate_max_snr(s);
        compute_slot_rates(s);
        for (int id : s.active_map_ids()) monitor(s, id, params, book[id]);

        if (t == 5 && s.assoc.served_count[1] != 10) {
            premises_ok = false;
            why << "expected MAP1 to fill all 10 beams at t=5, got "
                << s.assoc.served_count[1] << "; ";
        }
        if (t == 15 && (s.assoc.served_count[1] != 10 || s.assoc.served_count[2] != 2)) {
            premises_ok = false;
            why << "expected {10,2} served at t=15, got {" << s.assoc.served_count[1] << ","
                << s.assoc.served_count[2] << "}; ";
        }
    }

    std::map<int, std::vector<std::string>> expected = {
        {10, {"activate:2:by:1"}}, {20, {"activate:3:by:1"}}, {30, {"repatriate:3"}},
        {40, {"activate:3:by:1"}}, {50, {"repatriate:3"}},    {60, {"activate:3:by:1"}},
    };
    bool ok = premises_ok && events == expected;
    std::ostringstream detail;
    if (ok) {
        detail << "hand-derived 60-slot schedule reproduced event-for-event";
    } else {
        detail << why.str() << "got:";
        for (const auto& [t, evs] : events) {
            detail << " t=" << t << ":[";
            for (const auto& e : evs) detail << e << ",";
            detail << "]";
        }
    }
    report(5, "trade-off determinism", ok, detail.str());
}

// ---------------------------------------------------------------------------
// 6. Gradient check at the deployed architecture
// ---------------------------------------------------------------------------

void criterion_gradient_check() {
    auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(61);
    ArchDescriptor arch;  // full default shape: 15/5 slots, embed 32, 64-64
    PolicyParameters p = init_policy(arch, rng);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (auto& w : p.weights) w = u(rng);

    Observation obs;
    obs.n_ue_slots = arch.n_ue_slots;
    obs.n_map_slots = arch.n_map_slots;
    obs.ue_block.resize(static_cast<std::size_t>(arch.n_ue_slots * arch.ue_feat));
    obs.ue_mask.resize(static_cast<std::size_t>(arch.n_ue_slots));
    obs.map_block.resize(static_cast<std::size_t>(arch.n_map_slots * arch.map_feat));
    obs.map_mask.resize(static_cast<std::size_t>(arch.n_map_slots));
    obs.self_block.resize(static_cast<std::size_t>(arch.self_feat));
    std::bernoulli_distribution mask(0.7);
    for (int slot = 0; slot < arch.n_ue_slots; ++slot) {
        bool real = mask(rng);
        obs.ue_mask[static_cast<std::size_t>(slot)] = real ? 1.0 : 0.0;
        if (real)
            for (int f = 0; f < arch.ue_feat; ++f)
                obs.ue_block[static_cast<std::size_t>(slot * arch.ue_feat + f)] = u(rng);
    }
    for (int slot = 0; slot < arch.n_map_slots; ++slot) {
        bool real = mask(rng);
        obs.map_mask[static_cast<std::size_t>(slot)] = real ? 1.0 : 0.0;
        if (real)
            for (int f = 0; f < arch.map_feat; ++f)
                obs.map_block[static_cast<std::size_t>(slot * arch.map_feat + f)] = u(rng);
    }
    for (auto& v : obs.self_block) v = u(rng);

    ForwardCache cache = forward(p, obs);
    const int action = 4;
    std::vector<double> grad_logp(p.weights.size(), 0.0);
    std::vector<double> dlogits(static_cast<std::size_t>(arch.n_actions), 0.0);
    for (int k = 0; k < arch.n_actions; ++k)
        dlogits[static_cast<std::size_t>(k)] =
            (k == action ? 1.0 : 0.0) - cache.probs[static_cast<std::size_t>(k)];
    backward(p, cache, dlogits, 0.0, grad_logp);
    std::vector<double> grad_value(p.weights.size(), 0.0);
    backward(p, cache, std::vector<double>(static_cast<std::size_t>(arch.n_actions), 0.0),
             1.0, grad_value);

    std::uniform_int_distribution<std::size_t> coord(0, p.weights.size() - 1);
    const double h = 1e-6;
    int checked = 0, failures = 0;
    double worst = 0.0;
    auto rel = [](double a, double b) {
        return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-8});
    };
    for (int i = 0; i < 200; ++i) {
        std::size_t c = coord(rng);
        double keep = p.weights[c];
        p.weights[c] = keep + h;
        ForwardCache up = forward(p, obs);
        p.weights[c] = keep - h;
        ForwardCache down = forward(p, obs);
        p.weights[c] = keep;
        double fd_logp = (up.log_probs[action] - down.log_probs[action]) / (2.0 * h);
        double fd_value = (up.value - down.value) / (2.0 * h);
        if (std::abs(fd_logp) > 1e-7 || std::abs(grad_logp[c]) > 1e-7) {
            double r = rel(grad_logp[c], fd_logp);
            worst = std::max(worst, r);
            checked += 1;
            if (r > 1e-4) failures += 1;
        }
        if (std::abs(fd_value) > 1e-7 || std::abs(grad_value[c]) > 1e-7) {
            double r = rel(grad_value[c], fd_value);
            worst = std::max(worst, r);
            if (r > 1e-4) failures += 1;
        }
    }
    std::ostringstream detail;
    detail << checked << " policy coordinates checked (plus value head), worst rel err "
           << worst << ", " << elapsed_s(start) << "s";
    report(6, "gradient check", checked >= 100 && failures == 0, detail.str());
}

// ---------------------------------------------------------------------------
// Shared desk-scale configuration for the training-based criteria
// ---------------------------------------------------------------------------

SimConfig desk_config() {
    SimConfig cfg;
    cfg.harness.out_dir = "acceptance_out";
    return cfg;
}

// 7. Training smoke: 2 MAPs, 10 static UEs, 50k env steps.
PolicyParameters criterion_training_smoke() {
    auto start = std::chrono::steady_clock::now();
    SimConfig cfg = desk_config();

    PpoTrainConfig tc;
    tc.rl = cfg.rl;
    tc.radio = cfg.radio;
    tc.n_agent_slots = 2;
    tc.total_steps = 50000;
    tc.seed = 777;
    tc.regime_tag = "smoke";
    EnvSampler sampler = [](std::mt19937_64& rng) {
        EpisodeSetup setup;
        setup.scenario.n_ue = 10;
        setup.scenario.slot_count = 100;
        setup.scenario.ue_speed_mps = 0.0;
        setup.scenario.blockage_prob = 0.0;
        std::uniform_real_distribution<double> u(0.0, 200.0);
        std::uniform_real_distribution<double> uz(20.0, 120.0);
        for (int i = 0; i < 2; ++i) {
            double x = u(rng), y = u(rng), z = uz(rng);
            setup.map_locations.push_back({x, y, z});
        }
        return setup;
    };
    TrainResult result = train_ppo(sampler, [](TrainHookInfo&) {}, tc);

    // rolling-mean reward at the first full window vs the end of training
    double initial = 0.0, final_roll = 0.0;
    for (const auto& row : result.curve) {
        if (row.env_steps >= cfg.rl.rolling_window) {
            initial = row.rolling_mean_reward;
            break;
        }
    }
    final_roll = result.curve.back().rolling_mean_reward;

    // greedy policy vs uniform-random actions, 50 fresh evaluation episodes
    SimConfig eval_cfg = cfg;
    eval_cfg.scenario.n_ue = 10;
    eval_cfg.scenario.ue_speed_mps = 0.0;
    eval_cfg.scenario.blockage_prob = 0.0;
    eval_cfg.scenario.slot_count = 100;

    PolicyRegistry trained(Regime::federated);
    PolicyParameters pi = result.models[0];
    trained.put(0, 0, pi);

    double dist_trained = 0.0, dist_random = 0.0;
    for (int e = 0; e < 50; ++e) {
        std::uint64_t seed = derive_seed(4242, "smoke-eval-" + std::to_string(e));
        EvalOptions opt;
        opt.registry = &trained;
        opt.regime = Regime::federated;
        opt.initial_m_s = 2;
        dist_trained += run_eval_episode(eval_cfg, seed, e, opt).mean_target_dist_m;
        EvalOptions rnd;
        rnd.initial_m_s = 2;  // no registry: uniform-random actions
        dist_random += run_eval_episode(eval_cfg, seed, e, rnd).mean_target_dist_m;
    }
    dist_trained /= 50.0;
    dist_random /= 50.0;
    double reduction = 1.0 - dist_trained / dist_random;

    bool ok = final_roll > initial && reduction >= 0.30;
    std::ostringstream detail;
    detail << "rolling mean " << initial << " -> " << final_roll
           << ", mean dist-to-centroid " << dist_random << " m (random) vs " << dist_trained
           << " m (greedy), reduction " << reduction * 100.0 << "%, "
           << result.total_env_steps << " steps in " << elapsed_s(start) << "s";
    report(7, "training smoke", ok, detail.str());
    return pi;
}

// 8. Context-free deployment of the single federated policy file.
void criterion_context_free(const std::string& federated_dir) {
    auto start = std::chrono::steady_clock::now();
    PolicyRegistry registry = PolicyRegistry::load(federated_dir);
    SimConfig cfg = desk_config();
    cfg.scenario.ue_speed_mps = 0.8;
    cfg.scenario.blockage_prob = 0.5;

    bool ok = true;
    std::ostringstream detail;
    try {
        for (int m_s = 2; m_s <= 6; ++m_s) {
            for (int k : {25, 60}) {
                SimConfig run_cfg = cfg;
                run_cfg.scenario.n_ue = k;
                EvalOptions opt;
                opt.registry = &registry;
                opt.regime = Regime::federated;
                opt.initial_m_s = m_s;
                std::uint64_t seed =
                    derive_seed(8080, "ctx-" + std::to_string(m_s) + "-" + std::to_string(k));
                EpisodeResult r = run_eval_episode(run_cfg, seed, 0, opt);
                if (r.rows.size() != static_cast<std::size_t>(run_cfg.scenario.slot_count) ||
                    !(r.mean_sum_rate_bps > 0.0)) {
                    ok = false;
                    detail << "degenerate run at M_s=" << m_s << ", K=" << k << "; ";
                }
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        detail << "exception: " << e.what();
    }
    if (ok) detail << "pi_f ran M_s in {2..6} x K in {25,60} with no shape errors";
    detail << ", " << elapsed_s(start) << "s";
    report(8, "context-free deployment", ok, detail.str());
}

// 9. Directional comparison on paired seeds.
void criterion_comparison(const PolicyRegistry& codebook, const PolicyRegistry& federated) {
    auto start = std::chrono::steady_clock::now();
    ExperimentSpec spec;
    spec.cfg = desk_config();
    spec.cfg.harness.compare_seeds = 20;
    spec.name = "acceptance";
    spec.base_seed = 909;
    ComparisonReport report_cmp = run_dynamic_comparison(codebook, federated, spec);

    bool win_ok = report_cmp.federated_win_fraction >= 0.60;
    bool eta_ok = report_cmp.eta_dominance_holds;
    std::ostringstream detail;
    detail << "dynamic federated beats fixed codebook on "
           << report_cmp.federated_win_fraction * 100.0 << "% of seeds (mean R "
           << report_cmp.dynamic_federated.mean_rate_bps / 1e9 << " vs "
           << report_cmp.baseline.mean_rate_bps / 1e9 << " Gbps, delta "
           << report_cmp.rel_gain_dynamic_federated * 100.0 << "%; dynamic codebook delta "
           << report_cmp.rel_gain_dynamic_codebook * 100.0 << "%), eta dominance "
           << (eta_ok ? "holds" : "violated") << ", " << elapsed_s(start) << "s";
    report(9, "directional comparison", win_ok && eta_ok, detail.str());
}

// 10. Byte-identical reruns of an experiment.
void criterion_reproducibility(const PolicyRegistry& federated) {
    auto start = std::chrono::steady_clock::now();
    ExperimentSpec spec;
    spec.cfg = desk_config();
    spec.cfg.harness.out_dir = "acceptance_out/repro_a";
    spec.name = "repro";
    spec.regime = Regime::federated;
    spec.episodes = 6;
    spec.base_seed = 7331;
    spec.dynamic_map_management = true;
    EvalSummary a = run_generalization_eval(federated, spec);
    spec.cfg.harness.out_dir = "acceptance_out/repro_b";
    EvalSummary b = run_generalization_eval(federated, spec);
    bool ok = slurp(a.record_path) == slurp(b.record_path) &&
              !slurp(a.record_path).empty();
    std::ostringstream detail;
    detail << "6-episode dynamic evaluation rerun is "
           << (ok ? "byte-identical" : "NOT byte-identical") << ", " << elapsed_s(start)
           << "s";
    report(10, "reproducibility", ok, detail.str());
}

}  // namespace

int main() {
    auto t0 = std::chrono::steady_clock::now();
    fs::remove_all("acceptance_out");
    fs::create_directories("acceptance_out");

    criterion_formulas();
    criterion_constraints();
    criterion_allocation_oracle();
    criterion_association_oracle();
    criterion_tradeoff_schedule();
    criterion_gradient_check();
    criterion_training_smoke();

    // Shared trained registries for criteria 8 and 9.
    std::cout << "training registries for criteria 8/9..." << std::endl;
    ExperimentSpec fed_spec;
    fed_spec.cfg = desk_config();
    fed_spec.regime = Regime::federated;
    fed_spec.base_seed = 555;
    fed_spec.fresh = true;
    TrainOutput fed = run_training(fed_spec);

    ExperimentSpec cb_spec;
    cb_spec.cfg = desk_config();
    cb_spec.regime = Regime::codebook;
    cb_spec.base_seed = 556;
    cb_spec.fresh = true;
    TrainOutput cb = run_training(cb_spec);

    criterion_context_free(fed.registry_dir);
    criterion_comparison(cb.registry, fed.registry);
    criterion_reproducibility(fed.registry);

    int failed = 0;
    std::cout << "\n=== acceptance summary ===" << std::endl;
    for (const auto& c : g_results) {
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << "criterion " << c.id << ": "
                  << c.name << std::endl;
        if (!c.pass) failed += 1;
    }
    std::cout << "total time " << elapsed_s(t0) << "s" << std::endl;
    return failed == 0 ? 0 : 1;
}
