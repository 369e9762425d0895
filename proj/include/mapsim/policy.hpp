#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mapsim/state.hpp"

namespace mapsim {

// Movement set of a MAP agent. Order is part of the policy contract.
enum class Action : int {
    forward = 0,   // +y
    backward = 1,  // -y
    up = 2,        // +z
    down = 3,      // -z
    left = 4,      // -x
    right = 5,     // +x
    hover = 6,
};
constexpr int kNumActions = 7;
const char* action_name(Action a);

// Fixed-shape partial observation of one MAP agent: nearest UEs and nearest
// other MAPs in relative coordinates, zero-padded with validity masks.
struct Observation {
    int n_ue_slots = 0;
    int n_map_slots = 0;
    std::vector<double> ue_block;   // n_ue_slots x 4: dx, dy, -z, demand (normalized)
    std::vector<double> ue_mask;    // 1 = real entry
    std::vector<double> map_block;  // n_map_slots x 3: dx, dy, dz (normalized)
    std::vector<double> map_mask;
    std::vector<double> self_block; // x, y, z over region extents
};

Observation build_observation(const NetworkState& state, int map_id, int n_ue_slots,
                              int n_map_slots);

// Axis-aligned displacement of `step_m`, clipped into the region; the result
// never moves farther than step_m. Updates prev_loc.
void apply_action(NetworkState& state, int map_id, Action a, double step_m);

// Network shape. Two policies federate only when their descriptors match.
struct ArchDescriptor {
    int n_ue_slots = 15;
    int n_map_slots = 5;
    int ue_feat = 4;
    int map_feat = 3;
    int self_feat = 3;
    int embed_dim = 32;
    std::vector<int> trunk = {64, 64};
    int n_actions = kNumActions;

    bool operator==(const ArchDescriptor& other) const = default;
    int param_count() const;
    int trunk_input() const { return 2 * embed_dim + self_feat; }
    int trunk_output() const { return trunk.empty() ? trunk_input() : trunk.back(); }
};

// One placement policy: a flat weight vector plus its shape and provenance.
struct PolicyParameters {
    ArchDescriptor arch;
    std::vector<double> weights;
    std::uint32_t version = 0;
    std::uint64_t training_step = 0;
    std::string regime_tag;
};

// Random init: tanh-friendly scaled uniform weights, zeroed heads so the
// starting action distribution is exactly uniform.
PolicyParameters init_policy(const ArchDescriptor& arch, std::mt19937_64& rng);

// Forward pass artifacts kept for backprop.
struct ForwardCache {
    Observation obs;
    std::vector<double> ue_hidden, ue_alpha, ue_pooled;
    std::vector<double> map_hidden, map_alpha, map_pooled;
    std::vector<std::vector<double>> trunk;  // [0] = input, then one activation per layer
    std::vector<double> logits;
    std::vector<double> probs;
    std::vector<double> log_probs;
    double value = 0.0;
};

// Evaluates the policy on one observation. Throws on shape mismatch.
ForwardCache forward(const PolicyParameters& policy, const Observation& obs);

// Backpropagates upstream gradients on (logits, value) to every weight,
// accumulating into `grad` (same layout/length as policy.weights).
void backward(const PolicyParameters& policy, const ForwardCache& cache,
              const std::vector<double>& dlogits, double dvalue,
              std::vector<double>& grad);

struct ActResult {
    Action action;
    double log_prob;
    double value;
};

enum class ActMode { sample, greedy };

ActResult act(const PolicyParameters& policy, const Observation& obs, ActMode mode,
              std::mt19937_64& rng);

// Checkpoint file: fixed little-endian layout, magic "MAPSPOL1".
void save_policy(const PolicyParameters& policy, const std::string& path);
PolicyParameters load_policy(const std::string& path);

}  // namespace mapsim
