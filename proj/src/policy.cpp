#include "mapsim/policy.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace mapsim {

const char* action_name(Action a) {
    switch (a) {
        case Action::forward: return "forward";
        case Action::backward: return "backward";
        case Action::up: return "up";
        case Action::down: return "down";
        case Action::left: return "left";
        case Action::right: return "right";
        case Action::hover: return "hover";
    }
    return "?";
}

Observation build_observation(const NetworkState& state, int map_id, int n_ue_slots,
                              int n_map_slots) {
    const MapNode& self = state.map_by_id(map_id);
    if (!self.active) throw std::logic_error("observation for an inactive MAP");
    const Region& region = state.region;

    Observation obs;
    obs.n_ue_slots = n_ue_slots;
    obs.n_map_slots = n_map_slots;
    obs.ue_block.assign(static_cast<std::size_t>(n_ue_slots) * 4, 0.0);
    obs.ue_mask.assign(static_cast<std::size_t>(n_ue_slots), 0.0);
    obs.map_block.assign(static_cast<std::size_t>(n_map_slots) * 3, 0.0);
    obs.map_mask.assign(static_cast<std::size_t>(n_map_slots), 0.0);

    double demand_scale = std::max(1.0, state.scenario.demand_mean_gbps * 1e9);

    // Nearest unblocked UEs by 3D distance; ties by id for determinism.
    std::vector<std::pair<double, int>> ue_order;
    for (const auto& ue : state.ues)
        if (!ue.blocked) ue_order.push_back({distance(self.loc, ue.loc), ue.id});
    std::sort(ue_order.begin(), ue_order.end());
    for (int s = 0; s < n_ue_slots && s < static_cast<int>(ue_order.size()); ++s) {
        const auto& ue = state.ues[static_cast<std::size_t>(ue_order[static_cast<std::size_t>(s)].second)];
        auto row = static_cast<std::size_t>(s) * 4;
        obs.ue_block[row + 0] = (ue.loc.x - self.loc.x) / region.x_max;
        obs.ue_block[row + 1] = (ue.loc.y - self.loc.y) / region.y_max;
        obs.ue_block[row + 2] = -self.loc.z / region.h_max;
        obs.ue_block[row + 3] = ue.demand_bps / demand_scale;
        obs.ue_mask[static_cast<std::size_t>(s)] = 1.0;
    }

    std::vector<std::pair<double, int>> map_order;
    for (const auto& m : state.maps)
        if (m.active && m.id != map_id)
            map_order.push_back({distance(self.loc, m.loc), m.id});
    std::sort(map_order.begin(), map_order.end());
    for (int s = 0; s < n_map_slots && s < static_cast<int>(map_order.size()); ++s) {
        const auto& m = state.map_by_id(map_order[static_cast<std::size_t>(s)].second);
        auto row = static_cast<std::size_t>(s) * 3;
        obs.map_block[row + 0] = (m.loc.x - self.loc.x) / region.x_max;
        obs.map_block[row + 1] = (m.loc.y - self.loc.y) / region.y_max;
        obs.map_block[row + 2] = (m.loc.z - self.loc.z) / region.h_max;
        obs.map_mask[static_cast<std::size_t>(s)] = 1.0;
    }

    obs.self_block = {self.loc.x / region.x_max, self.loc.y / region.y_max,
                      self.loc.z / region.h_max};
    return obs;
}

void apply_action(NetworkState& state, int map_id, Action a, double step_m) {
    MapNode& m = state.map_by_id(map_id);
    if (!m.active) throw std::logic_error("action on an inactive MAP");
    Loc3 next = m.loc;
    switch (a) {
        case Action::forward: next.y += step_m; break;
        case Action::backward: next.y -= step_m; break;
        case Action::up: next.z += step_m; break;
        case Action::down: next.z -= step_m; break;
        case Action::left: next.x -= step_m; break;
        case Action::right: next.x += step_m; break;
        case Action::hover: break;
    }
    m.prev_loc = m.loc;
    m.loc = state.region.clip(next);
}

// ---------------------------------------------------------------------------
// Flat-vector network. Layout (row-major matrices):
//   W_ue [E x F_ue], b_ue [E], q_ue [E],
//   W_map [E x F_map], b_map [E], q_map [E],
//   per trunk layer: W [out x in], b [out],
//   W_pi [A x T], b_pi [A], w_v [T], b_v [1]
// ---------------------------------------------------------------------------

namespace {

struct Layout {
    int w_ue, b_ue, q_ue;
    int w_map, b_map, q_map;
    std::vector<int> trunk_w, trunk_b;
    std::vector<int> trunk_in, trunk_out;
    int w_pi, b_pi, w_v, b_v;
    int total;
};

Layout make_layout(const ArchDescriptor& a) {
    Layout l{};
    int p = 0;
    l.w_ue = p; p += a.embed_dim * a.ue_feat;
    l.b_ue = p; p += a.embed_dim;
    l.q_ue = p; p += a.embed_dim;
    l.w_map = p; p += a.embed_dim * a.map_feat;
    l.b_map = p; p += a.embed_dim;
    l.q_map = p; p += a.embed_dim;
    int in = a.trunk_input();
    for (int out : a.trunk) {
        l.trunk_in.push_back(in);
        l.trunk_out.push_back(out);
        l.trunk_w.push_back(p); p += out * in;
        l.trunk_b.push_back(p); p += out;
        in = out;
    }
    l.w_pi = p; p += a.n_actions * in;
    l.b_pi = p; p += a.n_actions;
    l.w_v = p; p += in;
    l.b_v = p; p += 1;
    l.total = p;
    return l;
}

// pooled = sum_s alpha_sh_s with masked softmax attention over embedded rows.
void attention_block(const double* w, const double* b, const double* q, int embed,
                     int feat, const std::vector<double>& rows,
                     const std::vector<double>& mask, int n_slots,
                     std::vector<double>& hidden, std::vector<double>& alpha,
                     std::vector<double>& pooled) {
    hidden.assign(static_cast<std::size_t>(n_slots) * embed, 0.0);
    alpha.assign(static_cast<std::size_t>(n_slots), 0.0);
    pooled.assign(static_cast<std::size_t>(embed), 0.0);

    std::vector<double> score(static_cast<std::size_t>(n_slots),
                              -std::numeric_limits<double>::infinity());
    double scale = 1.0 / std::sqrt(static_cast<double>(embed));
    bool any = false;
    for (int s = 0; s < n_slots; ++s) {
        if (mask[static_cast<std::size_t>(s)] == 0.0) continue;
        any = true;
        const double* e = rows.data() + static_cast<std::size_t>(s) * feat;
        double dot_q = 0.0;
        for (int i = 0; i < embed; ++i) {
            double pre = b[i];
            for (int f = 0; f < feat; ++f) pre += w[i * feat + f] * e[f];
            double h = std::tanh(pre);
            hidden[static_cast<std::size_t>(s) * embed + static_cast<std::size_t>(i)] = h;
            dot_q += q[i] * h;
        }
        score[static_cast<std::size_t>(s)] = dot_q * scale;
    }
    if (!any) return;  // fully masked block pools to zero

    double max_score = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < n_slots; ++s)
        if (mask[static_cast<std::size_t>(s)] != 0.0)
            max_score = std::max(max_score, score[static_cast<std::size_t>(s)]);
    double denom = 0.0;
    for (int s = 0; s < n_slots; ++s) {
        if (mask[static_cast<std::size_t>(s)] == 0.0) continue;
        alpha[static_cast<std::size_t>(s)] = std::exp(score[static_cast<std::size_t>(s)] - max_score);
        denom += alpha[static_cast<std::size_t>(s)];
    }
    for (int s = 0; s < n_slots; ++s) {
        alpha[static_cast<std::size_t>(s)] /= denom;
        double a = alpha[static_cast<std::size_t>(s)];
        if (a == 0.0) continue;
        for (int i = 0; i < embed; ++i)
            pooled[static_cast<std::size_t>(i)] +=
                a * hidden[static_cast<std::size_t>(s) * embed + static_cast<std::size_t>(i)];
    }
}

void check_shapes(const PolicyParameters& policy, const Observation& obs) {
    const auto& a = policy.arch;
    if (obs.n_ue_slots != a.n_ue_slots || obs.n_map_slots != a.n_map_slots ||
        static_cast<int>(obs.ue_block.size()) != a.n_ue_slots * a.ue_feat ||
        static_cast<int>(obs.map_block.size()) != a.n_map_slots * a.map_feat ||
        static_cast<int>(obs.self_block.size()) != a.self_feat)
        throw std::invalid_argument("observation shape does not match policy architecture");
    if (static_cast<int>(policy.weights.size()) != a.param_count())
        throw std::invalid_argument("weight vector length does not match architecture");
}

}  // namespace

int ArchDescriptor::param_count() const { return make_layout(*this).total; }

PolicyParameters init_policy(const ArchDescriptor& arch, std::mt19937_64& rng) {
    PolicyParameters p;
    p.arch = arch;
    Layout l = make_layout(arch);
    p.weights.assign(static_cast<std::size_t>(l.total), 0.0);

    auto fill = [&](int offset, int rows, int cols) {
        double s = std::sqrt(6.0 / static_cast<double>(rows + cols));
        std::uniform_real_distribution<double> u(-s, s);
        for (int i = 0; i < rows * cols; ++i) p.weights[static_cast<std::size_t>(offset + i)] = u(rng);
    };
    fill(l.w_ue, arch.embed_dim, arch.ue_feat);
    fill(l.q_ue, 1, arch.embed_dim);
    fill(l.w_map, arch.embed_dim, arch.map_feat);
    fill(l.q_map, 1, arch.embed_dim);
    for (std::size_t t = 0; t < l.trunk_w.size(); ++t)
        fill(l.trunk_w[t], l.trunk_out[t], l.trunk_in[t]);
    // Heads stay zero: the untrained policy is exactly uniform and the value
    // estimate starts at zero.
    return p;
}

ForwardCache forward(const PolicyParameters& policy, const Observation& obs) {
    check_shapes(policy, obs);
    const auto& a = policy.arch;
    Layout l = make_layout(a);
    const double* w = policy.weights.data();

    ForwardCache cache;
    cache.obs = obs;

    attention_block(w + l.w_ue, w + l.b_ue, w + l.q_ue, a.embed_dim, a.ue_feat,
                    obs.ue_block, obs.ue_mask, a.n_ue_slots, cache.ue_hidden,
                    cache.ue_alpha, cache.ue_pooled);
    attention_block(w + l.w_map, w + l.b_map, w + l.q_map, a.embed_dim, a.map_feat,
                    obs.map_block, obs.map_mask, a.n_map_slots, cache.map_hidden,
                    cache.map_alpha, cache.map_pooled);

    std::vector<double> x;
    x.reserve(static_cast<std::size_t>(a.trunk_input()));
    x.insert(x.end(), cache.ue_pooled.begin(), cache.ue_pooled.end());
    x.insert(x.end(), cache.map_pooled.begin(), cache.map_pooled.end());
    x.insert(x.end(), obs.self_block.begin(), obs.self_block.end());
    cache.trunk.push_back(x);

    for (std::size_t t = 0; t < l.trunk_w.size(); ++t) {
        const auto& in = cache.trunk.back();
        std::vector<double> out(static_cast<std::size_t>(l.trunk_out[t]));
        for (int i = 0; i < l.trunk_out[t]; ++i) {
            double pre = w[l.trunk_b[t] + i];
            for (int j = 0; j < l.trunk_in[t]; ++j)
                pre += w[l.trunk_w[t] + i * l.trunk_in[t] + j] * in[static_cast<std::size_t>(j)];
            out[static_cast<std::size_t>(i)] = std::tanh(pre);
        }
        cache.trunk.push_back(std::move(out));
    }

    const auto& top = cache.trunk.back();
    int tdim = static_cast<int>(top.size());
    cache.logits.assign(static_cast<std::size_t>(a.n_actions), 0.0);
    for (int k = 0; k < a.n_actions; ++k) {
        double v = w[l.b_pi + k];
        for (int j = 0; j < tdim; ++j) v += w[l.w_pi + k * tdim + j] * top[static_cast<std::size_t>(j)];
        cache.logits[static_cast<std::size_t>(k)] = v;
    }
    cache.value = w[l.b_v];
    for (int j = 0; j < tdim; ++j) cache.value += w[l.w_v + j] * top[static_cast<std::size_t>(j)];

    double max_logit = *std::max_element(cache.logits.begin(), cache.logits.end());
    double z = 0.0;
    for (double v : cache.logits) z += std::exp(v - max_logit);
    double log_z = std::log(z) + max_logit;
    cache.probs.resize(cache.logits.size());
    cache.log_probs.resize(cache.logits.size());
    for (std::size_t k = 0; k < cache.logits.size(); ++k) {
        cache.log_probs[k] = cache.logits[k] - log_z;
        cache.probs[k] = std::exp(cache.log_probs[k]);
    }
    return cache;
}

namespace {

// Backward through one attention block; accumulates parameter grads and needs
// only dpooled from upstream.
void attention_backward(const double* w, const double* q, int embed, int feat,
                        const std::vector<double>& rows, const std::vector<double>& mask,
                        int n_slots, const std::vector<double>& hidden,
                        const std::vector<double>& alpha, const std::vector<double>& dpooled,
                        double* dw, double* db, double* dq) {
    (void)w;
    bool any = false;
    for (int s = 0; s < n_slots; ++s)
        if (mask[static_cast<std::size_t>(s)] != 0.0) any = true;
    if (!any) return;

    double scale = 1.0 / std::sqrt(static_cast<double>(embed));

    // dalpha_s = dpooled . h_s ; softmax backward to scores.
    std::vector<double> dalpha(static_cast<std::size_t>(n_slots), 0.0);
    double weighted = 0.0;  // sum_r alpha_r * dalpha_r
    for (int s = 0; s < n_slots; ++s) {
        if (alpha[static_cast<std::size_t>(s)] == 0.0 && mask[static_cast<std::size_t>(s)] == 0.0) continue;
        double d = 0.0;
        for (int i = 0; i < embed; ++i)
            d += dpooled[static_cast<std::size_t>(i)] *
                 hidden[static_cast<std::size_t>(s) * embed + static_cast<std::size_t>(i)];
        dalpha[static_cast<std::size_t>(s)] = d;
        weighted += alpha[static_cast<std::size_t>(s)] * d;
    }

    for (int s = 0; s < n_slots; ++s) {
        if (mask[static_cast<std::size_t>(s)] == 0.0) continue;
        double a = alpha[static_cast<std::size_t>(s)];
        double dscore = a * (dalpha[static_cast<std::size_t>(s)] - weighted);
        const double* h = hidden.data() + static_cast<std::size_t>(s) * embed;
        const double* e = rows.data() + static_cast<std::size_t>(s) * feat;
        for (int i = 0; i < embed; ++i) {
            // h_i receives gradient from the pooled sum and from the score.
            double dh = a * dpooled[static_cast<std::size_t>(i)] + dscore * scale * q[i];
            dq[i] += dscore * scale * h[i];
            double dpre = dh * (1.0 - h[i] * h[i]);
            db[i] += dpre;
            for (int f = 0; f < feat; ++f) dw[i * feat + f] += dpre * e[f];
        }
    }
}

}  // namespace

void backward(const PolicyParameters& policy, const ForwardCache& cache,
              const std::vector<double>& dlogits, double dvalue,
              std::vector<double>& grad) {
    const auto& a = policy.arch;
    Layout l = make_layout(a);
    if (static_cast<int>(grad.size()) != l.total)
        throw std::invalid_argument("gradient buffer length mismatch");
    if (static_cast<int>(dlogits.size()) != a.n_actions)
        throw std::invalid_argument("dlogits length mismatch");
    const double* w = policy.weights.data();
    double* g = grad.data();

    const auto& top = cache.trunk.back();
    int tdim = static_cast<int>(top.size());

    // Heads.
    std::vector<double> dtop(static_cast<std::size_t>(tdim), 0.0);
    for (int k = 0; k < a.n_actions; ++k) {
        double d = dlogits[static_cast<std::size_t>(k)];
        if (d != 0.0) {
            g[l.b_pi + k] += d;
            for (int j = 0; j < tdim; ++j) {
                g[l.w_pi + k * tdim + j] += d * top[static_cast<std::size_t>(j)];
                dtop[static_cast<std::size_t>(j)] += d * w[l.w_pi + k * tdim + j];
            }
        }
    }
    if (dvalue != 0.0) {
        g[l.b_v] += dvalue;
        for (int j = 0; j < tdim; ++j) {
            g[l.w_v + j] += dvalue * top[static_cast<std::size_t>(j)];
            dtop[static_cast<std::size_t>(j)] += dvalue * w[l.w_v + j];
        }
    }

    // Trunk, last layer to first.
    std::vector<double> dact = std::move(dtop);
    for (int t = static_cast<int>(l.trunk_w.size()) - 1; t >= 0; --t) {
        const auto& in = cache.trunk[static_cast<std::size_t>(t)];
        const auto& out = cache.trunk[static_cast<std::size_t>(t) + 1];
        std::vector<double> din(static_cast<std::size_t>(l.trunk_in[static_cast<std::size_t>(t)]), 0.0);
        for (int i = 0; i < l.trunk_out[static_cast<std::size_t>(t)]; ++i) {
            double o = out[static_cast<std::size_t>(i)];
            double dpre = dact[static_cast<std::size_t>(i)] * (1.0 - o * o);
            if (dpre == 0.0) continue;
            g[l.trunk_b[static_cast<std::size_t>(t)] + i] += dpre;
            for (int j = 0; j < l.trunk_in[static_cast<std::size_t>(t)]; ++j) {
                g[l.trunk_w[static_cast<std::size_t>(t)] + i * l.trunk_in[static_cast<std::size_t>(t)] + j] +=
                    dpre * in[static_cast<std::size_t>(j)];
                din[static_cast<std::size_t>(j)] +=
                    dpre * w[l.trunk_w[static_cast<std::size_t>(t)] + i * l.trunk_in[static_cast<std::size_t>(t)] + j];
            }
        }
        dact = std::move(din);
    }

    // Split the trunk-input gradient back into the two pooled blocks.
    std::vector<double> d_ue(dact.begin(), dact.begin() + a.embed_dim);
    std::vector<double> d_map(dact.begin() + a.embed_dim, dact.begin() + 2 * a.embed_dim);

    attention_backward(w + l.w_ue, w + l.q_ue, a.embed_dim, a.ue_feat, cache.obs.ue_block,
                       cache.obs.ue_mask, a.n_ue_slots, cache.ue_hidden, cache.ue_alpha,
                       d_ue, g + l.w_ue, g + l.b_ue, g + l.q_ue);
    attention_backward(w + l.w_map, w + l.q_map, a.embed_dim, a.map_feat,
                       cache.obs.map_block, cache.obs.map_mask, a.n_map_slots,
                       cache.map_hidden, cache.map_alpha, d_map, g + l.w_map, g + l.b_map,
                       g + l.q_map);
}

ActResult act(const PolicyParameters& policy, const Observation& obs, ActMode mode,
              std::mt19937_64& rng) {
    ForwardCache cache = forward(policy, obs);
    int chosen = 0;
    if (mode == ActMode::greedy) {
        for (int k = 1; k < static_cast<int>(cache.probs.size()); ++k)
            if (cache.probs[static_cast<std::size_t>(k)] > cache.probs[static_cast<std::size_t>(chosen)])
                chosen = k;
    } else {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double r = u(rng);
        double acc = 0.0;
        chosen = static_cast<int>(cache.probs.size()) - 1;
        for (int k = 0; k < static_cast<int>(cache.probs.size()); ++k) {
            acc += cache.probs[static_cast<std::size_t>(k)];
            if (r < acc) {
                chosen = k;
                break;
            }
        }
    }
    return {static_cast<Action>(chosen), cache.log_probs[static_cast<std::size_t>(chosen)],
            cache.value};
}

// ---------------------------------------------------------------------------
// Checkpoint IO. All integers little-endian.
// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'M', 'A', 'P', 'S', 'P', 'O', 'L', '1'};
constexpr std::uint32_t kFormatVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b, 4);
}

void put_u64(std::ostream& os, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b, 8);
}

void put_f64(std::ostream& os, double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, 8);
    put_u64(os, bits);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

double get_f64(std::istream& is) {
    std::uint64_t bits = get_u64(is);
    double d;
    std::memcpy(&d, &bits, 8);
    return d;
}

}  // namespace

void save_policy(const PolicyParameters& policy, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write policy file: " + path);
    os.write(kMagic, 8);
    put_u32(os, kFormatVersion);
    const auto& a = policy.arch;
    put_u32(os, static_cast<std::uint32_t>(a.n_ue_slots));
    put_u32(os, static_cast<std::uint32_t>(a.n_map_slots));
    put_u32(os, static_cast<std::uint32_t>(a.ue_feat));
    put_u32(os, static_cast<std::uint32_t>(a.map_feat));
    put_u32(os, static_cast<std::uint32_t>(a.self_feat));
    put_u32(os, static_cast<std::uint32_t>(a.embed_dim));
    put_u32(os, static_cast<std::uint32_t>(a.n_actions));
    put_u32(os, static_cast<std::uint32_t>(a.trunk.size()));
    for (int t : a.trunk) put_u32(os, static_cast<std::uint32_t>(t));
    put_u32(os, policy.version);
    put_u64(os, policy.training_step);
    put_u32(os, static_cast<std::uint32_t>(policy.regime_tag.size()));
    os.write(policy.regime_tag.data(), static_cast<std::streamsize>(policy.regime_tag.size()));
    put_u64(os, policy.weights.size());
    for (double d : policy.weights) put_f64(os, d);
    if (!os) throw std::runtime_error("short write on policy file: " + path);
}

PolicyParameters load_policy(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open policy file: " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("not a policy checkpoint: " + path);
    if (get_u32(is) != kFormatVersion)
        throw std::runtime_error("unsupported checkpoint version: " + path);

    PolicyParameters p;
    p.arch.n_ue_slots = static_cast<int>(get_u32(is));
    p.arch.n_map_slots = static_cast<int>(get_u32(is));
    p.arch.ue_feat = static_cast<int>(get_u32(is));
    p.arch.map_feat = static_cast<int>(get_u32(is));
    p.arch.self_feat = static_cast<int>(get_u32(is));
    p.arch.embed_dim = static_cast<int>(get_u32(is));
    p.arch.n_actions = static_cast<int>(get_u32(is));
    std::uint32_t layers = get_u32(is);
    p.arch.trunk.clear();
    for (std::uint32_t i = 0; i < layers; ++i) p.arch.trunk.push_back(static_cast<int>(get_u32(is)));
    p.version = get_u32(is);
    p.training_step = get_u64(is);
    std::uint32_t tag_len = get_u32(is);
    p.regime_tag.resize(tag_len);
    is.read(p.regime_tag.data(), tag_len);
    std::uint64_t n = get_u64(is);
    if (n != static_cast<std::uint64_t>(p.arch.param_count()))
        throw std::runtime_error("checkpoint weight count does not match architecture");
    p.weights.resize(n);
    for (std::uint64_t i = 0; i < n; ++i) p.weights[i] = get_f64(is);
    if (!is) throw std::runtime_error("truncated policy file: " + path);
    return p;
}

}  // namespace mapsim
