#include "geocluster/inference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace geocluster {

namespace {
constexpr double kZ95 = 1.96;
}

DependencyStructure lambda_sets(const Surround& s, int k) {
    int n = s.n();
    std::vector<std::vector<int>> h(k); // H_j: units with cluster j in their surround
    for (int i = 0; i < n; ++i)
        for (int j : s.cluster_sets[i]) {
            if (j < 0 || j >= k) throw std::out_of_range("lambda_sets: cluster id out of range");
            h[j].push_back(i); // ascending since i is
        }
    DependencyStructure deps;
    deps.lambda.resize(n);
    for (int i = 0; i < n; ++i) {
        std::vector<int> merged;
        for (int j : s.cluster_sets[i]) merged.insert(merged.end(), h[j].begin(), h[j].end());
        std::sort(merged.begin(), merged.end());
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
        deps.lambda[i] = std::move(merged);
    }
    return deps;
}

std::vector<double> residual_influence(const UnitPanel& panel, const std::vector<double>& y,
                                       const EstimateReport& est) {
    int n = panel.n();
    if (static_cast<int>(y.size()) != n)
        throw std::invalid_argument("residual_influence: outcome vector does not match panel");
    std::vector<double> z(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double v = 0.0;
        if (panel.t1[i]) v += (y[i] - est.mu1) / panel.p1[i];
        if (panel.t0[i]) v -= (y[i] - est.mu0) / panel.p0[i];
        z[i] = v;
    }
    return z;
}

double VarianceReport::se() const { return std::sqrt(sigma2 / static_cast<double>(k)); }

VarianceReport variance_from_influence(const std::vector<double>& z,
                                       const DependencyStructure& deps, const Clustering& c) {
    int n = static_cast<int>(z.size());
    if (deps.n() != n)
        throw std::invalid_argument("variance_from_influence: dependency structure does not match");
    if (c.n() != n) throw std::invalid_argument("variance_from_influence: clustering does not match");

    // i-major, j-ascending order, zero rows skipped.
    double acc1 = 0.0;
    for (int i = 0; i < n; ++i) {
        if (z[i] == 0.0) continue;
        double row = 0.0;
        for (int j : deps.lambda[i]) row += z[j];
        acc1 += z[i] * row;
    }

    double acc2 = 0.0;
    std::vector<double> cluster_sum(c.k(), 0.0);
    for (int i = 0; i < n; ++i) cluster_sum[c.assignment[i]] += z[i];
    for (double s : cluster_sum) acc2 += s * s;

    double scale = static_cast<double>(c.k()) / (static_cast<double>(n) * static_cast<double>(n));
    VarianceReport r;
    r.sigma2_lambda = scale * acc1;
    r.sigma2_cluster = scale * acc2;
    r.sigma2 = std::max(r.sigma2_lambda, r.sigma2_cluster);
    r.k = c.k();
    r.n = n;
    return r;
}

VarianceReport variance(const UnitPanel& panel, const std::vector<double>& y,
                        const EstimateReport& est, const DependencyStructure& deps,
                        const Clustering& c) {
    if (c.n() != panel.n()) throw std::invalid_argument("variance: clustering does not match");
    VarianceReport r = variance_from_influence(residual_influence(panel, y, est), deps, c);
    r.mu1 = est.mu1;
    r.mu0 = est.mu0;
    return r;
}

ConfidenceInterval ci_undersmoothed(double estimate, const VarianceReport& v) {
    ConfidenceInterval ci;
    ci.se = v.se();
    ci.halfwidth = kZ95 * ci.se;
    ci.lo = estimate - ci.halfwidth;
    ci.hi = estimate + ci.halfwidth;
    return ci;
}

ConfidenceInterval ci_bias_aware(double estimate, const VarianceReport& v, double smoothness_c,
                                 double gamma, double r_n, bool paper_scale) {
    if (!(smoothness_c >= 0.0)) throw std::invalid_argument("ci_bias_aware: c must be >= 0");
    if (!(r_n > 0.0)) throw std::invalid_argument("ci_bias_aware: r_n must be positive");
    if (!(gamma > 0.0)) throw std::invalid_argument("ci_bias_aware: gamma must be positive");
    double bias = 3.0 * smoothness_c * std::pow(r_n, -gamma);
    if (paper_scale) bias *= std::sqrt(static_cast<double>(v.k));
    ConfidenceInterval ci;
    ci.se = v.se();
    ci.halfwidth = bias + kZ95 * ci.se;
    ci.lo = estimate - ci.halfwidth;
    ci.hi = estimate + ci.halfwidth;
    return ci;
}

} // namespace geocluster
