#pragma once

#include <map>
#include <random>
#include <vector>

#include "mapsim/state.hpp"

namespace mapsim {

struct KmeansResult {
    std::vector<Loc2> centroids;
    std::vector<int> labels;   // per input point
    double wcss = 0.0;         // within-cluster sum of squares at convergence
    int iterations = 0;
};

// Lloyd's algorithm with k-means++ seeding; k is reduced to the point count
// when larger. Deterministic given the engine state. A warm start of exactly
// k centroids replaces the seeding step.
KmeansResult kmeans(const std::vector<Loc2>& points, int k, std::mt19937_64& rng,
                    int max_iters = 50, const std::vector<Loc2>* warm_start = nullptr);

// Minimum-total-distance unique matching between MAPs and centroids
// (brute force; fleet sizes here are single digits). Returns, per entry of
// `maps`, the index into `targets` it is assigned; when there are fewer
// targets than MAPs, leftover MAPs take their nearest target non-uniquely.
std::vector<int> match_targets(const std::vector<Loc3>& maps,
                               const std::vector<Loc3>& targets);

// Training-time target oracle: cluster the unblocked UEs into k groups, lift
// the centroids to the training altitude, and uniquely assign them to the
// deployed MAPs. Keyed by MAP id. `centroid_cache`, when given, warm-starts
// the clustering and receives the converged centroids, keeping targets
// temporally coherent across the slots of an episode.
std::map<int, Loc3> target_locations(const NetworkState& state, int k,
                                     std::mt19937_64& rng, double altitude_m,
                                     std::vector<Loc2>* centroid_cache = nullptr);

}  // namespace mapsim
