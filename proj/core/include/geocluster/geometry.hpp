#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace geocluster {

enum class Metric { Euclidean, Chebyshev };

std::string to_string(Metric m);
Metric metric_from_string(const std::string& s);

// Immutable set of unit locations in d-dimensional space with a chosen metric.
// Unit ids are dense 0..n-1; coordinates are stored row-major.
class PointSet {
public:
    PointSet(std::vector<double> coords, int dim, Metric metric = Metric::Euclidean);

    static PointSet from_rows(const std::vector<std::vector<double>>& rows,
                              Metric metric = Metric::Euclidean);

    int size() const noexcept { return n_; }
    int dim() const noexcept { return dim_; }
    Metric metric() const noexcept { return metric_; }

    double coord(int i, int axis) const { return coords_[static_cast<std::size_t>(i) * dim_ + axis]; }
    const std::vector<double>& coords() const noexcept { return coords_; }

    double distance(int i, int j) const;

    // {j : rho(i, j) <= r}; always contains i; exact scan, no approximation
    std::vector<int> neighborhood(int i, double r) const;

    // Volume of the axis-aligned bounding box; zero-extent axes clamped to 1.
    double region_volume() const;

    double diameter() const;

private:
    void check_id(int i) const;

    std::vector<double> coords_;
    int n_;
    int dim_;
    Metric metric_;
};

} // namespace geocluster
