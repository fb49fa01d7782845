#include "geocluster/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace geocluster {

std::string to_string(Metric m) {
    return m == Metric::Euclidean ? "euclidean" : "chebyshev";
}

Metric metric_from_string(const std::string& s) {
    if (s == "euclidean") return Metric::Euclidean;
    if (s == "chebyshev") return Metric::Chebyshev;
    throw std::invalid_argument("unknown metric '" + s + "' (expected euclidean or chebyshev)");
}

PointSet::PointSet(std::vector<double> coords, int dim, Metric metric)
    : coords_(std::move(coords)), dim_(dim), metric_(metric) {
    if (dim_ < 1) throw std::invalid_argument("PointSet: dim must be >= 1");
    if (coords_.empty() || coords_.size() % static_cast<std::size_t>(dim_) != 0)
        throw std::invalid_argument("PointSet: coordinate count is not a positive multiple of dim");
    n_ = static_cast<int>(coords_.size() / static_cast<std::size_t>(dim_));
    for (double c : coords_)
        if (!std::isfinite(c)) throw std::invalid_argument("PointSet: non-finite coordinate");
}

PointSet PointSet::from_rows(const std::vector<std::vector<double>>& rows, Metric metric) {
    if (rows.empty()) throw std::invalid_argument("PointSet: need at least one point");
    const std::size_t d = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * d);
    for (const auto& r : rows) {
        if (r.size() != d)
            throw std::invalid_argument("PointSet: rows have inconsistent dimension");
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return PointSet(std::move(flat), static_cast<int>(d), metric);
}

void PointSet::check_id(int i) const {
    if (i < 0 || i >= n_)
        throw std::invalid_argument("PointSet: unit id " + std::to_string(i) + " out of range [0, " +
                                    std::to_string(n_) + ")");
}

double PointSet::distance(int i, int j) const {
    check_id(i);
    check_id(j);
    const double* a = coords_.data() + static_cast<std::size_t>(i) * dim_;
    const double* b = coords_.data() + static_cast<std::size_t>(j) * dim_;
    if (metric_ == Metric::Euclidean) {
        double s = 0.0;
        for (int k = 0; k < dim_; ++k) {
            const double d = a[k] - b[k];
            s += d * d;
        }
        return std::sqrt(s);
    }
    double m = 0.0;
    for (int k = 0; k < dim_; ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

std::vector<int> PointSet::neighborhood(int i, double r) const {
    check_id(i);
    if (r < 0.0) throw std::invalid_argument("neighborhood: radius must be >= 0");
    std::vector<int> out;
    for (int j = 0; j < n_; ++j)
        if (distance(i, j) <= r) out.push_back(j);
    return out;
}

double PointSet::region_volume() const {
    double vol = 1.0;
    for (int k = 0; k < dim_; ++k) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < n_; ++i) {
            const double c = coord(i, k);
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        const double extent = hi - lo;
        vol *= extent > 0.0 ? extent : 1.0;
    }
    return vol;
}

double PointSet::diameter() const {
    double m = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) m = std::max(m, distance(i, j));
    return m;
}

} // namespace geocluster
