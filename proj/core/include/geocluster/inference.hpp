#pragma once

#include <vector>

#include "geocluster/clustering.hpp"
#include "geocluster/estimators.hpp"

namespace geocluster {

// Lambda_i = union of H_j over the clusters j surrounding i, where H_j is the
// set of units that have cluster j in their surround set. Two units outside
// each other's Lambda sets have exposure indicators driven by disjoint
// cluster draws.
struct DependencyStructure {
    std::vector<std::vector<int>> lambda; // sorted unit ids per unit

    int n() const { return static_cast<int>(lambda.size()); }
};

DependencyStructure lambda_sets(const Surround& s, int k);

// Hajek-centered influence contributions
//   Z_i = T_1i (Y_i - mu1) / p_1i - T_0i (Y_i - mu0) / p_0i.
// Each arm's weighted residuals sum to zero by construction.
std::vector<double> residual_influence(const UnitPanel& panel, const std::vector<double>& y,
                                       const EstimateReport& est);

struct VarianceReport {
    double sigma2 = 0.0;         // max of the two candidates
    double sigma2_lambda = 0.0;  // neighborhood-overlap form, sign-indefinite
    double sigma2_cluster = 0.0; // cluster-sum form, always >= 0
    double mu1 = 0.0, mu0 = 0.0; // Hajek arm means the residuals were centered on
    int k = 0;
    int n = 0;

    double se() const; // sigma-hat / sqrt(k), the reported standard error
};

// Quadratic forms over an already-computed influence vector. Sparse
// accumulation over Lambda blocks / cluster blocks; exactly equal to the
// dense double loop because the skipped terms are exact zeros.
VarianceReport variance_from_influence(const std::vector<double>& z,
                                       const DependencyStructure& deps, const Clustering& c);

VarianceReport variance(const UnitPanel& panel, const std::vector<double>& y,
                        const EstimateReport& est, const DependencyStructure& deps,
                        const Clustering& c);

struct ConfidenceInterval {
    double lo = 0.0;
    double hi = 0.0;
    double halfwidth = 0.0;
    double se = 0.0;
};

// estimate +/- 1.96 sigma-hat k^{-1/2}; valid when the exclusion radius is
// undersmoothed so squared bias vanishes relative to variance.
ConfidenceInterval ci_undersmoothed(double estimate, const VarianceReport& v);

// Widens the undersmoothed interval by the worst-case bias bound
// 3 c r_n^{-gamma}; with paper_scale the bound is multiplied by sqrt(k) to
// match the unnormalized statement.
ConfidenceInterval ci_bias_aware(double estimate, const VarianceReport& v, double smoothness_c,
                                 double gamma, double r_n, bool paper_scale = false);

} // namespace geocluster
