#include "geocluster/estimators.hpp"

#include <algorithm>
#include <stdexcept>

namespace geocluster {

namespace {

double ipow(double base, int e) {
    double out = 1.0;
    for (int i = 0; i < e; ++i) out *= base;
    return out;
}

void check_draw(const Clustering& c, const AssignmentDraw& draw, std::size_t ny) {
    if (static_cast<int>(draw.W.size()) != c.k())
        throw std::invalid_argument("draw has wrong number of clusters");
    if (static_cast<int>(draw.D.size()) != c.n())
        throw std::invalid_argument("draw has wrong number of units");
    if (static_cast<int>(ny) != c.n()) throw std::invalid_argument("outcome vector has wrong length");
}

} // namespace

std::string to_string(EstimandKind kind) {
    switch (kind) {
    case EstimandKind::Direct: return "direct";
    case EstimandKind::Indirect: return "indirect";
    case EstimandKind::Total: return "total";
    case EstimandKind::Overall: return "overall";
    }
    throw std::invalid_argument("unknown estimand kind");
}

EstimandKind estimand_from_string(const std::string& s) {
    if (s == "direct") return EstimandKind::Direct;
    if (s == "indirect") return EstimandKind::Indirect;
    if (s == "total") return EstimandKind::Total;
    if (s == "overall") return EstimandKind::Overall;
    throw std::invalid_argument("unknown estimand: " + s);
}

Surround build_surround(const PointSet& ps, const Clustering& c, double r_n) {
    if (r_n < 0.0) throw std::invalid_argument("build_surround: r_n must be >= 0");
    if (static_cast<int>(c.assignment.size()) != ps.size())
        throw std::invalid_argument("build_surround: clustering does not match point set");
    Surround s;
    s.r_n = r_n;
    s.cluster_sets.resize(ps.size());
    for (int i = 0; i < ps.size(); ++i) {
        std::vector<int> clusters;
        for (int j : ps.neighborhood(i, r_n)) clusters.push_back(c.assignment[j]);
        std::sort(clusters.begin(), clusters.end());
        clusters.erase(std::unique(clusters.begin(), clusters.end()), clusters.end());
        s.cluster_sets[i] = std::move(clusters);
    }
    return s;
}

bool well_surrounded(const Surround& s, const std::vector<std::uint8_t>& W, int i, int w) {
    if (i < 0 || i >= s.n()) throw std::out_of_range("well_surrounded: unit id out of range");
    if (w != 0 && w != 1) throw std::invalid_argument("well_surrounded: arm must be 0 or 1");
    for (int j : s.cluster_sets[i]) {
        if (j < 0 || j >= static_cast<int>(W.size()))
            throw std::out_of_range("well_surrounded: cluster id out of range");
        if (W[j] != w) return false;
    }
    return true;
}

bool indicator(EstimandKind kind, int t, const Surround& s, const AssignmentDraw& draw, int i) {
    if (t != 0 && t != 1) throw std::invalid_argument("indicator: arm must be 0 or 1");
    bool d = draw.D[i] != 0;
    switch (kind) {
    case EstimandKind::Direct:
        return (t == 1 ? d : !d) && well_surrounded(s, draw.W, i, 1);
    case EstimandKind::Indirect:
        return !d && well_surrounded(s, draw.W, i, t);
    case EstimandKind::Total:
        return t == 1 ? (d && well_surrounded(s, draw.W, i, 1)) : well_surrounded(s, draw.W, i, 0);
    case EstimandKind::Overall:
        return well_surrounded(s, draw.W, i, t);
    }
    throw std::invalid_argument("unknown estimand kind");
}

double propensity(EstimandKind kind, int t, double p, double q, int phi) {
    if (t != 0 && t != 1) throw std::invalid_argument("propensity: arm must be 0 or 1");
    if (phi < 1) throw std::invalid_argument("propensity: phi must be >= 1");
    if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("propensity: p and q must lie in [0, 1]");
    double qphi = ipow(q, phi);
    double q0phi = ipow(1.0 - q, phi);
    switch (kind) {
    case EstimandKind::Direct: return (t == 1 ? p : 1.0 - p) * qphi;
    case EstimandKind::Indirect: return t == 1 ? (1.0 - p) * qphi : q0phi;
    case EstimandKind::Total: return t == 1 ? p * qphi : q0phi;
    case EstimandKind::Overall: return t == 1 ? qphi : q0phi;
    }
    throw std::invalid_argument("unknown estimand kind");
}

UnitPanel build_panel(EstimandKind kind, const Surround& s, const AssignmentDraw& draw, double p,
                      double q) {
    int n = s.n();
    if (static_cast<int>(draw.D.size()) != n)
        throw std::invalid_argument("build_panel: draw does not match surround");
    UnitPanel panel;
    panel.kind = kind;
    panel.t1.resize(n);
    panel.t0.resize(n);
    panel.p1.resize(n);
    panel.p0.resize(n);
    for (int i = 0; i < n; ++i) {
        panel.t1[i] = indicator(kind, 1, s, draw, i) ? 1 : 0;
        panel.t0[i] = indicator(kind, 0, s, draw, i) ? 1 : 0;
        panel.p1[i] = propensity(kind, 1, p, q, s.phi(i));
        panel.p0[i] = propensity(kind, 0, p, q, s.phi(i));
    }
    return panel;
}

EstimateReport hajek(const UnitPanel& panel, const std::vector<double>& y) {
    int n = panel.n();
    if (static_cast<int>(y.size()) != n)
        throw std::invalid_argument("hajek: outcome vector does not match panel");
    double sw1 = 0.0, sy1 = 0.0, sw0 = 0.0, sy0 = 0.0;
    int n1 = 0, n0 = 0;
    for (int i = 0; i < n; ++i) {
        if (panel.t1[i]) {
            if (!(panel.p1[i] > 0.0))
                throw std::invalid_argument("hajek: exposed unit with zero propensity");
            double w = 1.0 / panel.p1[i];
            sw1 += w;
            sy1 += w * y[i];
            ++n1;
        }
        if (panel.t0[i]) {
            if (!(panel.p0[i] > 0.0))
                throw std::invalid_argument("hajek: exposed unit with zero propensity");
            double w = 1.0 / panel.p0[i];
            sw0 += w;
            sy0 += w * y[i];
            ++n0;
        }
    }
    if (n1 == 0) throw DegenerateDraw(1, "no exposed unit in arm 1 for " + to_string(panel.kind));
    if (n0 == 0) throw DegenerateDraw(0, "no exposed unit in arm 0 for " + to_string(panel.kind));
    EstimateReport r;
    r.kind = panel.kind;
    r.mu1 = sy1 / sw1;
    r.mu0 = sy0 / sw0;
    r.estimate = r.mu1 - r.mu0;
    r.sumw1 = sw1;
    r.sumw0 = sw0;
    r.n1 = n1;
    r.n0 = n0;
    return r;
}

EstimateReport diff_in_means(EstimandKind kind, const Clustering& c, const AssignmentDraw& draw,
                             const std::vector<double>& y) {
    check_draw(c, draw, y.size());
    double s1 = 0.0, s0 = 0.0;
    int n1 = 0, n0 = 0;
    for (int i = 0; i < c.n(); ++i) {
        bool wc = draw.W[c.assignment[i]] != 0;
        bool d = draw.D[i] != 0;
        bool g1 = false, g0 = false;
        switch (kind) {
        case EstimandKind::Direct:
            g1 = d;
            g0 = !d && wc;
            break;
        case EstimandKind::Indirect:
            g1 = !d && wc;
            g0 = !wc;
            break;
        case EstimandKind::Total:
            g1 = d;
            g0 = !wc;
            break;
        case EstimandKind::Overall:
            g1 = wc;
            g0 = !wc;
            break;
        }
        if (g1) {
            s1 += y[i];
            ++n1;
        }
        if (g0) {
            s0 += y[i];
            ++n0;
        }
    }
    if (n1 == 0) throw DegenerateDraw(1, "empty comparison group in arm 1 for " + to_string(kind));
    if (n0 == 0) throw DegenerateDraw(0, "empty comparison group in arm 0 for " + to_string(kind));
    EstimateReport r;
    r.kind = kind;
    r.mu1 = s1 / n1;
    r.mu0 = s0 / n0;
    r.estimate = r.mu1 - r.mu0;
    r.sumw1 = n1;
    r.sumw0 = n0;
    r.n1 = n1;
    r.n0 = n0;
    return r;
}

} // namespace geocluster
