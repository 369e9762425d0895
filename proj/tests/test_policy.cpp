#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "mapsim/policy.hpp"
#include "mapsim/scenario.hpp"

using namespace mapsim;

namespace {

NetworkState obs_state(int n_ue, std::uint64_t seed = 2) {
    ScenarioConfig cfg;
    cfg.n_ue = n_ue;
    cfg.seed = seed;
    return build_scenario(cfg);
}

ArchDescriptor tiny_arch() {
    ArchDescriptor a;
    a.embed_dim = 8;
    a.trunk = {16, 16};
    return a;
}

Observation random_observation(const ArchDescriptor& a, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::bernoulli_distribution mask(0.6);
    Observation obs;
    obs.n_ue_slots = a.n_ue_slots;
    obs.n_map_slots = a.n_map_slots;
    obs.ue_block.resize(static_cast<std::size_t>(a.n_ue_slots * a.ue_feat));
    obs.ue_mask.resize(static_cast<std::size_t>(a.n_ue_slots));
    obs.map_block.resize(static_cast<std::size_t>(a.n_map_slots * a.map_feat));
    obs.map_mask.resize(static_cast<std::size_t>(a.n_map_slots));
    obs.self_block.resize(static_cast<std::size_t>(a.self_feat));
    for (int s = 0; s < a.n_ue_slots; ++s) {
        bool real = mask(rng);
        obs.ue_mask[static_cast<std::size_t>(s)] = real ? 1.0 : 0.0;
        for (int f = 0; f < a.ue_feat; ++f)
            obs.ue_block[static_cast<std::size_t>(s * a.ue_feat + f)] = real ? u(rng) : 0.0;
    }
    for (int s = 0; s < a.n_map_slots; ++s) {
        bool real = mask(rng);
        obs.map_mask[static_cast<std::size_t>(s)] = real ? 1.0 : 0.0;
        for (int f = 0; f < a.map_feat; ++f)
            obs.map_block[static_cast<std::size_t>(s * a.map_feat + f)] = real ? u(rng) : 0.0;
    }
    for (auto& v : obs.self_block) v = u(rng);
    return obs;
}

}  // namespace

TEST_CASE("observation padding, masks and relative coordinates") {
    NetworkState s = obs_state(2);
    activate_map(s, 1, {100.0, 100.0, 40.0});
    Observation obs = build_observation(s, 1, 15, 5);

    double ue_mask_sum = 0.0;
    for (double m : obs.ue_mask) ue_mask_sum += m;
    CHECK(ue_mask_sum == 2.0);  // 13 padded slots
    double map_mask_sum = 0.0;
    for (double m : obs.map_mask) map_mask_sum += m;
    CHECK(map_mask_sum == 0.0);  // no other MAP deployed

    // padded rows stay zero
    for (int slot = 2; slot < 15; ++slot)
        for (int f = 0; f < 4; ++f) CHECK(obs.ue_block[static_cast<std::size_t>(slot * 4 + f)] == 0.0);

    CHECK(obs.self_block[0] == doctest::Approx(0.5));
    CHECK(obs.self_block[2] == doctest::Approx(40.0 / 120.0));
}

TEST_CASE("a UE under the MAP's ground projection has zero planar offsets") {
    NetworkState s = obs_state(1);
    s.ues[0].loc = {80.0, 60.0};
    activate_map(s, 1, {80.0, 60.0, 50.0});
    Observation obs = build_observation(s, 1, 15, 5);
    CHECK(obs.ue_block[0] == doctest::Approx(0.0));
    CHECK(obs.ue_block[1] == doctest::Approx(0.0));
    CHECK(obs.ue_block[2] == doctest::Approx(-50.0 / 120.0));
}

TEST_CASE("relative blocks are translation-consistent") {
    NetworkState s = obs_state(6, 8);
    activate_map(s, 1, {60.0, 60.0, 40.0});
    activate_map(s, 2, {120.0, 80.0, 50.0});
    Observation before = build_observation(s, 1, 15, 5);

    const double dx = 15.0, dy = -9.0;
    for (auto& ue : s.ues) {
        ue.loc.x += dx;
        ue.loc.y += dy;
    }
    for (auto& m : s.maps) {
        m.loc.x += dx;
        m.loc.y += dy;
    }
    Observation after = build_observation(s, 1, 15, 5);
    for (std::size_t i = 0; i < before.ue_block.size(); ++i)
        CHECK(after.ue_block[i] == doctest::Approx(before.ue_block[i]).epsilon(1e-12));
    for (std::size_t i = 0; i < before.map_block.size(); ++i)
        CHECK(after.map_block[i] == doctest::Approx(before.map_block[i]).epsilon(1e-12));
    CHECK(after.ue_mask == before.ue_mask);
    // the absolute self block shifts by exactly the translation
    CHECK(after.self_block[0] - before.self_block[0] == doctest::Approx(dx / 200.0));
}

TEST_CASE("actions displace by exactly one step and clip at the region") {
    NetworkState s = obs_state(1);
    activate_map(s, 1, {100.0, 100.0, 50.0});
    apply_action(s, 1, Action::up, 5.0);
    CHECK(s.map_by_id(1).loc.z == doctest::Approx(55.0));
    CHECK(s.map_by_id(1).prev_loc.z == doctest::Approx(50.0));

    apply_action(s, 1, Action::hover, 5.0);
    CHECK(s.map_by_id(1).loc.z == doctest::Approx(55.0));

    s.map_by_id(1).loc.z = s.region.h_max;
    apply_action(s, 1, Action::up, 5.0);
    CHECK(s.map_by_id(1).loc.z == doctest::Approx(s.region.h_max));

    // every action from random spots respects the step bound (C8) and region (C7)
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 200.0);
    std::uniform_int_distribution<int> pick(0, kNumActions - 1);
    for (int i = 0; i < 500; ++i) {
        double x = u(rng), y = u(rng);
        s.map_by_id(1).loc = s.region.clip({x, y, 15.0 + u(rng)});
        Loc3 from = s.map_by_id(1).loc;
        apply_action(s, 1, static_cast<Action>(pick(rng)), 5.0);
        CHECK(distance(from, s.map_by_id(1).loc) <= 5.0 + 1e-9);
        CHECK(s.region.contains(s.map_by_id(1).loc));
    }
}

TEST_CASE("zero-head init yields an exactly uniform action distribution") {
    std::mt19937_64 rng(6);
    ArchDescriptor arch = tiny_arch();
    PolicyParameters p = init_policy(arch, rng);
    Observation obs = random_observation(arch, rng);
    ForwardCache cache = forward(p, obs);
    for (double prob : cache.probs) CHECK(prob == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
    CHECK(cache.value == 0.0);

    // sampling frequencies match a fair seven-sided die within 3 sigma
    const int n = 100000;
    std::vector<int> counts(7, 0);
    for (int i = 0; i < n; ++i)
        counts[static_cast<std::size_t>(act(p, obs, ActMode::sample, rng).action)] += 1;
    double expect = n / 7.0;
    double sigma = std::sqrt(n * (1.0 / 7.0) * (6.0 / 7.0));
    for (int k = 0; k < 7; ++k) CHECK(std::abs(counts[static_cast<std::size_t>(k)] - expect) <= 3.0 * sigma);
}

TEST_CASE("probabilities form a distribution and greedy mode is deterministic") {
    std::mt19937_64 rng(14);
    ArchDescriptor arch = tiny_arch();
    for (int trial = 0; trial < 20; ++trial) {
        PolicyParameters p = init_policy(arch, rng);
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        for (auto& w : p.weights) w = u(rng);
        Observation obs = random_observation(arch, rng);
        ForwardCache cache = forward(p, obs);
        double sum = 0.0;
        for (double prob : cache.probs) sum += prob;
        CHECK(std::abs(sum - 1.0) < 1e-6);

        ActResult a = act(p, obs, ActMode::greedy, rng);
        ActResult b = act(p, obs, ActMode::greedy, rng);
        CHECK(a.action == b.action);
        CHECK(a.value == b.value);
    }
}

TEST_CASE("attention pooling is invariant to where the padded slots sit") {
    std::mt19937_64 rng(23);
    ArchDescriptor arch = tiny_arch();
    PolicyParameters p = init_policy(arch, rng);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (auto& w : p.weights) w = u(rng);

    std::vector<double> row_a = {0.2, -0.3, 0.4, 0.7};
    std::vector<double> row_b = {-0.6, 0.1, 0.0, 0.3};

    auto make_obs = [&](int slot_a, int slot_b) {
        Observation obs;
        obs.n_ue_slots = arch.n_ue_slots;
        obs.n_map_slots = arch.n_map_slots;
        obs.ue_block.assign(static_cast<std::size_t>(arch.n_ue_slots * 4), 0.0);
        obs.ue_mask.assign(static_cast<std::size_t>(arch.n_ue_slots), 0.0);
        obs.map_block.assign(static_cast<std::size_t>(arch.n_map_slots * 3), 0.0);
        obs.map_mask.assign(static_cast<std::size_t>(arch.n_map_slots), 0.0);
        obs.self_block = {0.5, 0.5, 0.3};
        for (int f = 0; f < 4; ++f) {
            obs.ue_block[static_cast<std::size_t>(slot_a * 4 + f)] = row_a[static_cast<std::size_t>(f)];
            obs.ue_block[static_cast<std::size_t>(slot_b * 4 + f)] = row_b[static_cast<std::size_t>(f)];
        }
        obs.ue_mask[static_cast<std::size_t>(slot_a)] = 1.0;
        obs.ue_mask[static_cast<std::size_t>(slot_b)] = 1.0;
        return obs;
    };

    ForwardCache c1 = forward(p, make_obs(0, 1));
    ForwardCache c2 = forward(p, make_obs(3, 11));
    for (std::size_t k = 0; k < c1.probs.size(); ++k)
        CHECK(c1.probs[k] == doctest::Approx(c2.probs[k]).epsilon(1e-12));
    CHECK(c1.value == doctest::Approx(c2.value).epsilon(1e-12));
}

TEST_CASE("analytic gradients match central finite differences") {
    std::mt19937_64 rng(37);
    ArchDescriptor arch = tiny_arch();
    PolicyParameters p = init_policy(arch, rng);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (auto& w : p.weights) w = u(rng);
    Observation obs = random_observation(arch, rng);

    ForwardCache cache = forward(p, obs);
    const int action = 2;

    // d log pi(a|o) / dw
    std::vector<double> grad_logp(p.weights.size(), 0.0);
    std::vector<double> dlogits(7, 0.0);
    for (int k = 0; k < 7; ++k)
        dlogits[static_cast<std::size_t>(k)] = (k == action ? 1.0 : 0.0) - cache.probs[static_cast<std::size_t>(k)];
    backward(p, cache, dlogits, 0.0, grad_logp);

    // dV / dw
    std::vector<double> grad_value(p.weights.size(), 0.0);
    backward(p, cache, std::vector<double>(7, 0.0), 1.0, grad_value);

    std::uniform_int_distribution<std::size_t> coord(0, p.weights.size() - 1);
    const double h = 1e-6;
    int checked = 0;
    for (int i = 0; i < 150; ++i) {
        std::size_t c = coord(rng);
        double keep = p.weights[c];

        p.weights[c] = keep + h;
        ForwardCache up = forward(p, obs);
        p.weights[c] = keep - h;
        ForwardCache down = forward(p, obs);
        p.weights[c] = keep;

        double fd_logp = (up.log_probs[action] - down.log_probs[action]) / (2.0 * h);
        double fd_value = (up.value - down.value) / (2.0 * h);

        auto rel = [](double a, double b) {
            return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-8});
        };
        if (std::abs(fd_logp) > 1e-7 || std::abs(grad_logp[c]) > 1e-7) {
            CHECK(rel(grad_logp[c], fd_logp) < 1e-4);
            checked += 1;
        }
        if (std::abs(fd_value) > 1e-7 || std::abs(grad_value[c]) > 1e-7) {
            CHECK(rel(grad_value[c], fd_value) < 1e-4);
        }
    }
    CHECK(checked >= 100);
}

TEST_CASE("checkpoint round trip preserves everything") {
    std::mt19937_64 rng(44);
    ArchDescriptor arch = tiny_arch();
    PolicyParameters p = init_policy(arch, rng);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& w : p.weights) w = u(rng);
    p.version = 12;
    p.training_step = 98765;
    p.regime_tag = "federated:pi_f";

    std::string path = "test_policy_ckpt.bin";
    save_policy(p, path);
    PolicyParameters q = load_policy(path);
    CHECK(q.arch == p.arch);
    CHECK(q.version == p.version);
    CHECK(q.training_step == p.training_step);
    CHECK(q.regime_tag == p.regime_tag);
    REQUIRE(q.weights.size() == p.weights.size());
    for (std::size_t i = 0; i < p.weights.size(); ++i) CHECK(q.weights[i] == p.weights[i]);
    std::remove(path.c_str());

    CHECK_THROWS_AS(load_policy("does_not_exist.bin"), std::runtime_error);
}

TEST_CASE("shape mismatches are rejected") {
    std::mt19937_64 rng(3);
    PolicyParameters p = init_policy(tiny_arch(), rng);
    ArchDescriptor other = tiny_arch();
    other.n_ue_slots = 7;
    Observation obs = random_observation(other, rng);
    CHECK_THROWS_AS(forward(p, obs), std::invalid_argument);
}
