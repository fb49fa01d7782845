#pragma once

#include <cstdint>
#include <vector>

#include "geocluster/clustering.hpp"
#include "geocluster/rng.hpp"

namespace geocluster {

// Two-stage design parameters: clusters treated with probability q, units
// inside treated clusters with probability p.
struct DesignParams {
    double p = 0.5;
    double q = 0.5;
    int k = 1;
    std::uint64_t seed = 0;
};

// One realization of (W_1..W_k, D_1..D_n). D_i = 0 whenever W_{c(i)} = 0.
struct AssignmentDraw {
    std::vector<std::uint8_t> W;
    std::vector<std::uint8_t> D;
};

// Number of clusters from the region volume and the interference-decay
// exponent guess: round(min{V, n}^(2g/(2g+d))), clamped to [1, n].
// gamma_tilde < d is rejected (the decay assumption requires gamma > d).
int plan_k(double V, long long n, double gamma_tilde, int d);

// Draw W_j ~ iid Bernoulli(q) in cluster order, then D_i ~ iid Bernoulli(p)
// in unit order within treated clusters. The fixed draw order is part of the
// reproducibility contract.
AssignmentDraw draw_assignment(const Clustering& c, const DesignParams& params, RngStream& rng);

// Ring-treatment design for the causal variogram: cluster j is randomized to
// an arm in {0..T}; in arm t >= 1 exactly the units with
// rho(i, m_j) in (t*width, (t+1)*width] are treated.
struct GammaDesign {
    std::vector<int> arms;                       // per cluster
    std::vector<std::vector<int>> treated_units; // per cluster, unit ids
    std::vector<int> empty_ring_clusters;        // warned: drawn arm >= 1 but ring empty
    double width = 1.0;

    std::vector<std::uint8_t> treatment_vector(int n) const;
};

GammaDesign variogram_design(const PointSet& ps, const Clustering& c, int T, double width,
                             RngStream& rng);

} // namespace geocluster
