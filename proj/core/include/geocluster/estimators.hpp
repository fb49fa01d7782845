#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geocluster/clustering.hpp"
#include "geocluster/design.hpp"
#include "geocluster/errors.hpp"
#include "geocluster/geometry.hpp"

namespace geocluster {

enum class EstimandKind { Direct, Indirect, Total, Overall };

std::string to_string(EstimandKind kind);
EstimandKind estimand_from_string(const std::string& s);

// Which clusters intersect each unit's r_n-neighborhood. phi(i) is the size
// of that set; units whose set is a singleton only depend on their own
// cluster's draw.
struct Surround {
    std::vector<std::vector<int>> cluster_sets; // sorted cluster ids per unit
    double r_n = 0.0;

    int phi(int i) const { return static_cast<int>(cluster_sets[i].size()); }
    int n() const { return static_cast<int>(cluster_sets.size()); }
};

Surround build_surround(const PointSet& ps, const Clustering& c, double r_n);

// Product of W_j^w (1-W_j)^{1-w} over the clusters surrounding unit i:
// 1 iff every cluster intersecting N(i, r_n) was drawn into arm w.
bool well_surrounded(const Surround& s, const std::vector<std::uint8_t>& W, int i, int w);

// Exposure indicator T_{t,i} for one estimand under one draw.
bool indicator(EstimandKind kind, int t, const Surround& s, const AssignmentDraw& draw, int i);

// Exact exposure probability P(T_{t,i} = 1) given phi surrounding clusters.
double propensity(EstimandKind kind, int t, double p, double q, int phi);

// Per-unit indicators and propensities for one estimand under one draw.
struct UnitPanel {
    EstimandKind kind = EstimandKind::Direct;
    std::vector<std::uint8_t> t1, t0;
    std::vector<double> p1, p0;

    int n() const { return static_cast<int>(t1.size()); }
};

UnitPanel build_panel(EstimandKind kind, const Surround& s, const AssignmentDraw& draw, double p,
                      double q);

struct EstimateReport {
    EstimandKind kind = EstimandKind::Direct;
    double estimate = 0.0;
    double mu1 = 0.0, mu0 = 0.0;     // Hajek arm means
    double sumw1 = 0.0, sumw0 = 0.0; // sum of T/p per arm
    int n1 = 0, n0 = 0;              // raw indicator counts
};

// Hajek ratio estimator; throws DegenerateDraw(arm) when an arm has no
// exposed unit.
EstimateReport hajek(const UnitPanel& panel, const std::vector<double>& y);

// Naive comparator: unweighted group means on the observational contrast
// for the estimand (no surround correction). Used as the biased baseline.
EstimateReport diff_in_means(EstimandKind kind, const Clustering& c, const AssignmentDraw& draw,
                             const std::vector<double>& y);

} // namespace geocluster
