#pragma once

#include <cstdint>
#include <vector>

#include "geocluster/geometry.hpp"

namespace geocluster {

// Output of the k-medoids partitioning (Algorithm 1 style PAM).
// medoids[j] is the unit id of cluster j's medoid; assignment[i] is the
// cluster index of unit i; radii[j] = max_{i in C_j} rho(i, m_j);
// cost = sum_i min_m rho(i, m).
struct Clustering {
    std::vector<int> medoids;
    std::vector<int> assignment;
    std::vector<double> radii;
    double cost = 0.0;

    int k() const noexcept { return static_cast<int>(medoids.size()); }
    int n() const noexcept { return static_cast<int>(assignment.size()); }

    // Derive assignment/radii/cost from a given medoid list. Nearest-medoid
    // ties go to the lowest cluster index, the library-wide convention.
    static Clustering from_medoids(const PointSet& ps, std::vector<int> medoids);
};

// Total distance between units and their nearest medoids.
double medoid_cost(const PointSet& ps, const std::vector<int>& medoids);

// PAM: greedy BUILD initialization (seeded tie-breaks) followed by exact
// best-improvement swaps until no single (medoid, non-medoid) swap strictly
// reduces cost. Deterministic given (ps, k, seed) and independent of the
// worker count. max_swaps < 0 means the default cap of 10*k*n applied swaps;
// hitting the cap throws rather than looping.
Clustering k_medoids(const PointSet& ps, int k, std::uint64_t seed,
                     int threads = 1, long long max_swaps = -1);

// r_n = multiplier * median of cluster radii; an even-length median is the
// mean of the two middle order statistics.
double exclusion_radius(const Clustering& c, double multiplier = 0.5);

} // namespace geocluster
