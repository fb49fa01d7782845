#include "geocluster/design.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace geocluster {

int plan_k(double V, long long n, double gamma_tilde, int d) {
    if (d < 1) throw std::invalid_argument("plan_k: dimension must be >= 1");
    if (n < 1) throw std::invalid_argument("plan_k: n must be >= 1");
    if (!(V > 0.0)) throw std::invalid_argument("plan_k: region volume must be positive");
    if (gamma_tilde < static_cast<double>(d))
        throw std::invalid_argument("plan_k: gamma_tilde < d violates the decay assumption");
    double base = std::min(V, static_cast<double>(n));
    double expo = 2.0 * gamma_tilde / (2.0 * gamma_tilde + static_cast<double>(d));
    long long k = std::llround(std::pow(base, expo));
    k = std::max(1LL, std::min(k, n));
    return static_cast<int>(k);
}

AssignmentDraw draw_assignment(const Clustering& c, const DesignParams& params, RngStream& rng) {
    if (!(params.p >= 0.0 && params.p <= 1.0) || !(params.q >= 0.0 && params.q <= 1.0))
        throw std::invalid_argument("draw_assignment: p and q must lie in [0, 1]");
    if (params.k != c.k())
        throw std::invalid_argument("draw_assignment: params.k does not match the clustering");
    int k = c.k();
    int n = c.n();
    AssignmentDraw out;
    out.W.resize(k);
    out.D.resize(n);
    for (int j = 0; j < k; ++j) out.W[j] = rng.bernoulli(params.q) ? 1 : 0;
    // One uniform per unit regardless of W, so rng consumption does not depend
    // on the cluster draw.
    for (int i = 0; i < n; ++i) {
        bool d = rng.bernoulli(params.p);
        out.D[i] = (d && out.W[c.assignment[i]]) ? 1 : 0;
    }
    return out;
}

std::vector<std::uint8_t> GammaDesign::treatment_vector(int n) const {
    std::vector<std::uint8_t> d(n, 0);
    for (const auto& ring : treated_units)
        for (int i : ring) {
            if (i < 0 || i >= n) throw std::out_of_range("treatment_vector: unit id out of range");
            d[i] = 1;
        }
    return d;
}

GammaDesign variogram_design(const PointSet& ps, const Clustering& c, int T, double width,
                             RngStream& rng) {
    if (T < 1) throw std::invalid_argument("variogram_design: T must be >= 1");
    if (!(width > 0.0)) throw std::invalid_argument("variogram_design: width must be positive");
    int k = c.k();
    int n = c.n();
    GammaDesign g;
    g.width = width;
    g.arms.resize(k);
    g.treated_units.assign(k, {});
    for (int j = 0; j < k; ++j) g.arms[j] = static_cast<int>(rng.uniform_int(T + 1));
    for (int i = 0; i < n; ++i) {
        int j = c.assignment[i];
        int t = g.arms[j];
        if (t == 0) continue;
        double rho = ps.distance(i, c.medoids[j]);
        // Ring t around the medoid, restricted to the cluster's own units so
        // treatments of nearby clusters never collide.
        if (rho > t * width && rho <= (t + 1) * width) g.treated_units[j].push_back(i);
    }
    for (int j = 0; j < k; ++j)
        if (g.arms[j] >= 1 && g.treated_units[j].empty()) g.empty_ring_clusters.push_back(j);
    return g;
}

} // namespace geocluster
