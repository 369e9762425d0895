#include "mapsim/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mapsim {

namespace {

double sq_dist(const Loc2& a, const Loc2& b) {
    double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

std::vector<Loc2> seed_plus_plus(const std::vector<Loc2>& points, int k,
                                 std::mt19937_64& rng) {
    std::vector<Loc2> centroids;
    std::uniform_int_distribution<std::size_t> first(0, points.size() - 1);
    centroids.push_back(points[first(rng)]);
    std::vector<double> d2(points.size());
    while (static_cast<int>(centroids.size()) < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            double best = std::numeric_limits<double>::max();
            for (const auto& c : centroids) best = std::min(best, sq_dist(points[i], c));
            d2[i] = best;
            total += best;
        }
        std::size_t chosen = 0;
        if (total > 0.0) {
            std::uniform_real_distribution<double> u(0.0, total);
            double r = u(rng);
            double acc = 0.0;
            for (std::size_t i = 0; i < points.size(); ++i) {
                acc += d2[i];
                if (r <= acc) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = first(rng);  // all points coincide with a centroid
        }
        centroids.push_back(points[chosen]);
    }
    return centroids;
}

}  // namespace

KmeansResult kmeans(const std::vector<Loc2>& points, int k, std::mt19937_64& rng,
                    int max_iters, const std::vector<Loc2>* warm_start) {
    if (points.empty()) throw std::invalid_argument("kmeans on an empty point set");
    if (k < 1) throw std::invalid_argument("kmeans needs k >= 1");
    k = std::min<int>(k, static_cast<int>(points.size()));

    KmeansResult result;
    if (warm_start != nullptr && static_cast<int>(warm_start->size()) == k)
        result.centroids = *warm_start;
    else
        result.centroids = seed_plus_plus(points, k, rng);
    result.labels.assign(points.size(), 0);

    for (int iter = 0; iter < max_iters; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < points.size(); ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::max();
            for (int c = 0; c < k; ++c) {
                double d = sq_dist(points[i], result.centroids[static_cast<std::size_t>(c)]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (result.labels[i] != best) {
                result.labels[i] = best;
                changed = true;
            }
        }
        std::vector<Loc2> sums(static_cast<std::size_t>(k), Loc2{0.0, 0.0});
        std::vector<int> counts(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < points.size(); ++i) {
            auto c = static_cast<std::size_t>(result.labels[i]);
            sums[c].x += points[i].x;
            sums[c].y += points[i].y;
            counts[c] += 1;
        }
        for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
            if (counts[c] > 0)
                result.centroids[c] = {sums[c].x / counts[c], sums[c].y / counts[c]};
            // Empty clusters keep their previous centroid.
        }
        result.iterations = iter + 1;
        if (!changed && iter > 0) break;
    }

    result.wcss = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        result.wcss += sq_dist(points[i], result.centroids[static_cast<std::size_t>(result.labels[i])]);
    return result;
}

std::vector<int> match_targets(const std::vector<Loc3>& maps,
                               const std::vector<Loc3>& targets) {
    const int n_maps = static_cast<int>(maps.size());
    const int n_targets = static_cast<int>(targets.size());
    std::vector<int> assignment(static_cast<std::size_t>(n_maps), -1);
    if (n_maps == 0 || n_targets == 0) return assignment;
    if (n_maps > 12) throw std::invalid_argument("match_targets: fleet too large");

    // Try every injective assignment of min(n_maps, n_targets) pairs.
    std::vector<int> map_order(static_cast<std::size_t>(n_maps));
    std::iota(map_order.begin(), map_order.end(), 0);
    std::vector<int> best;
    double best_cost = std::numeric_limits<double>::max();

    std::vector<int> current(static_cast<std::size_t>(n_maps), -1);
    std::vector<bool> used(static_cast<std::size_t>(n_targets), false);
    int pairs = std::min(n_maps, n_targets);

    auto recurse = [&](auto&& self, int map_idx, int assigned, double cost) -> void {
        if (cost >= best_cost) return;
        if (assigned == pairs) {
            best_cost = cost;
            best = current;
            return;
        }
        if (map_idx >= n_maps) return;
        int remaining_maps = n_maps - map_idx;
        int needed = pairs - assigned;
        for (int t = -1; t < n_targets; ++t) {
            if (t >= 0 && used[static_cast<std::size_t>(t)]) continue;
            if (t < 0 && remaining_maps <= needed) continue;  // cannot skip this MAP
            double step = 0.0;
            if (t >= 0) {
                step = distance(maps[static_cast<std::size_t>(map_idx)],
                                targets[static_cast<std::size_t>(t)]);
                used[static_cast<std::size_t>(t)] = true;
            }
            current[static_cast<std::size_t>(map_idx)] = t;
            self(self, map_idx + 1, assigned + (t >= 0 ? 1 : 0), cost + step);
            current[static_cast<std::size_t>(map_idx)] = -1;
            if (t >= 0) used[static_cast<std::size_t>(t)] = false;
        }
    };
    recurse(recurse, 0, 0, 0.0);

    assignment = best;
    // Leftover MAPs (fewer targets than MAPs) fall back to the nearest target.
    for (int i = 0; i < n_maps; ++i) {
        if (assignment[static_cast<std::size_t>(i)] >= 0) continue;
        int nearest = 0;
        double best_d = std::numeric_limits<double>::max();
        for (int t = 0; t < n_targets; ++t) {
            double d = distance(maps[static_cast<std::size_t>(i)],
                                targets[static_cast<std::size_t>(t)]);
            if (d < best_d) {
                best_d = d;
                nearest = t;
            }
        }
        assignment[static_cast<std::size_t>(i)] = nearest;
    }
    return assignment;
}

std::map<int, Loc3> target_locations(const NetworkState& state, int k,
                                     std::mt19937_64& rng, double altitude_m,
                                     std::vector<Loc2>* centroid_cache) {
    std::vector<Loc2> points;
    for (const auto& ue : state.ues)
        if (!ue.blocked) points.push_back(ue.loc);
    if (points.empty()) throw std::invalid_argument("no unblocked UE to cluster");
    if (k < 1) throw std::invalid_argument("need k >= 1");

    KmeansResult clusters = kmeans(points, k, rng, 50, centroid_cache);
    if (centroid_cache != nullptr) *centroid_cache = clusters.centroids;
    std::vector<Loc3> lifted;
    for (const auto& c : clusters.centroids) lifted.push_back({c.x, c.y, altitude_m});

    std::vector<int> ids = state.active_map_ids();
    std::vector<Loc3> map_locs;
    for (int id : ids) map_locs.push_back(state.map_by_id(id).loc);

    std::vector<int> assignment = match_targets(map_locs, lifted);
    std::map<int, Loc3> targets;
    for (std::size_t i = 0; i < ids.size(); ++i)
        targets[ids[i]] = lifted[static_cast<std::size_t>(assignment[i])];
    return targets;
}

}  // namespace mapsim
