#include "geocluster/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "geocluster/rng.hpp"

namespace geocluster {

namespace {

// Distance access with an optional dense cache; the cache keeps repeated PAM
// sweeps cheap for the problem sizes this library targets.
class DistView {
public:
    explicit DistView(const PointSet& ps) : ps_(ps), n_(ps.size()) {
        if (static_cast<long long>(n_) * n_ <= 8LL * 1024 * 1024) {
            cache_.resize(static_cast<std::size_t>(n_) * n_);
            for (int i = 0; i < n_; ++i)
                for (int j = 0; j < n_; ++j)
                    cache_[static_cast<std::size_t>(i) * n_ + j] = ps_.distance(i, j);
        }
    }
    double operator()(int i, int j) const {
        if (!cache_.empty()) return cache_[static_cast<std::size_t>(i) * n_ + j];
        return ps_.distance(i, j);
    }

private:
    const PointSet& ps_;
    int n_;
    std::vector<double> cache_;
};

struct SwapCandidate {
    double delta = std::numeric_limits<double>::infinity();
    int medoid_id = -1; // unit id of the medoid to remove
    int other_id = -1;  // unit id of the non-medoid to add

    bool better_than(const SwapCandidate& rhs) const {
        if (delta != rhs.delta) return delta < rhs.delta;
        if (medoid_id != rhs.medoid_id) return medoid_id < rhs.medoid_id;
        return other_id < rhs.other_id;
    }
};

} // namespace

Clustering Clustering::from_medoids(const PointSet& ps, std::vector<int> medoids) {
    const int n = ps.size();
    const int k = static_cast<int>(medoids.size());
    if (k < 1 || k > n) throw std::invalid_argument("Clustering: need 1 <= k <= n medoids");
    std::vector<char> seen(n, 0);
    for (int m : medoids) {
        if (m < 0 || m >= n) throw std::invalid_argument("Clustering: medoid id out of range");
        if (seen[m]) throw std::invalid_argument("Clustering: duplicate medoid id");
        seen[m] = 1;
    }
    Clustering c;
    c.medoids = std::move(medoids);
    c.assignment.assign(n, 0);
    c.radii.assign(k, 0.0);
    c.cost = 0.0;
    for (int i = 0; i < n; ++i) {
        int best = 0;
        double bd = ps.distance(i, c.medoids[0]);
        for (int j = 1; j < k; ++j) {
            const double d = ps.distance(i, c.medoids[j]);
            if (d < bd) {
                bd = d;
                best = j;
            }
        }
        c.assignment[i] = best;
        c.cost += bd;
        c.radii[best] = std::max(c.radii[best], bd);
    }
    return c;
}

double medoid_cost(const PointSet& ps, const std::vector<int>& medoids) {
    if (medoids.empty()) throw std::invalid_argument("medoid_cost: medoid set is empty");
    const int n = ps.size();
    for (int m : medoids)
        if (m < 0 || m >= n) throw std::invalid_argument("medoid_cost: medoid id out of range");
    double cost = 0.0;
    for (int i = 0; i < n; ++i) {
        double bd = std::numeric_limits<double>::infinity();
        for (int m : medoids) bd = std::min(bd, ps.distance(i, m));
        cost += bd;
    }
    return cost;
}

Clustering k_medoids(const PointSet& ps, int k, std::uint64_t seed, int threads,
                     long long max_swaps) {
    const int n = ps.size();
    if (k < 1 || k > n)
        throw std::invalid_argument("k_medoids: need 1 <= k <= n, got k=" + std::to_string(k) +
                                    ", n=" + std::to_string(n));
    if (threads < 1) threads = 1;
    if (max_swaps < 0) max_swaps = 10LL * k * n;

    const DistView dist(ps);
    RngStream tiebreak(seed, 0x6275696c64ULL); // BUILD tie-break stream

    // --- BUILD: greedily add the medoid that minimizes total cost ---
    std::vector<int> medoids;
    std::vector<char> is_medoid(n, 0);
    std::vector<double> d1(n, std::numeric_limits<double>::infinity());
    for (int step = 0; step < k; ++step) {
        double best_cost = std::numeric_limits<double>::infinity();
        std::vector<int> tied;
        for (int c = 0; c < n; ++c) {
            if (is_medoid[c]) continue;
            double cost = 0.0;
            for (int i = 0; i < n; ++i) cost += std::min(d1[i], dist(i, c));
            if (cost < best_cost) {
                best_cost = cost;
                tied.assign(1, c);
            } else if (cost == best_cost) {
                tied.push_back(c);
            }
        }
        const int chosen = tied[static_cast<std::size_t>(tiebreak.uniform_int(tied.size()))];
        medoids.push_back(chosen);
        is_medoid[chosen] = 1;
        for (int i = 0; i < n; ++i) d1[i] = std::min(d1[i], dist(i, chosen));
    }

    // nearest / second-nearest bookkeeping; nearest ties -> lowest cluster index
    std::vector<int> nearest(n, 0);
    std::vector<double> d2(n, 0.0);
    auto recompute_neighbors = [&]() {
        for (int i = 0; i < n; ++i) {
            int b = 0;
            double bd = dist(i, medoids[0]);
            double sd = std::numeric_limits<double>::infinity();
            for (int j = 1; j < k; ++j) {
                const double d = dist(i, medoids[j]);
                if (d < bd) {
                    sd = bd;
                    bd = d;
                    b = j;
                } else if (d < sd) {
                    sd = d;
                }
            }
            nearest[i] = b;
            d1[i] = bd;
            d2[i] = sd;
        }
    };
    recompute_neighbors();

    // --- swap phase: exact best-improvement over all (medoid, non-medoid) pairs ---
    //
    // For a fixed candidate o the deltas for all k removals are accumulated in
    // one pass over the units (the FastPAM1 decomposition):
    //   delta(m, o) = sum_i [min(d(i,o), d1_i) - d1_i]
    //              + sum_{i: nearest_i = m} [min(d(i,o), d2_i) - min(d(i,o), d1_i)]
    // which is algebraically identical to evaluating each swap separately; a
    // corpus test checks the outputs match the naive loop.
    std::vector<double> shared_acc, removal(k);
    long long swaps = 0;
    const int nthreads = std::min<long long>(threads, n);
    for (;;) {
        SwapCandidate best;
        auto scan_range = [&](int lo, int hi, SwapCandidate& out) {
            std::vector<double> corr(k);
            for (int o = lo; o < hi; ++o) {
                if (is_medoid[o]) continue;
                std::fill(corr.begin(), corr.end(), 0.0);
                double acc = 0.0;
                for (int i = 0; i < n; ++i) {
                    const double dio = dist(i, o);
                    const double t1 = std::min(dio, d1[i]) - d1[i];
                    acc += t1;
                    corr[nearest[i]] += std::min(dio, d2[i]) - std::min(dio, d1[i]);
                }
                for (int j = 0; j < k; ++j) {
                    SwapCandidate cand{acc + corr[j], medoids[j], o};
                    if (cand.better_than(out)) out = cand;
                }
            }
        };
        if (nthreads == 1) {
            scan_range(0, n, best);
        } else {
            std::vector<SwapCandidate> partial(nthreads);
            std::vector<std::thread> pool;
            const int chunk = (n + nthreads - 1) / nthreads;
            for (int t = 0; t < nthreads; ++t) {
                const int lo = t * chunk;
                const int hi = std::min(n, lo + chunk);
                pool.emplace_back([&, lo, hi, t] { scan_range(lo, hi, partial[t]); });
            }
            for (auto& th : pool) th.join();
            for (const auto& cand : partial)
                if (cand.better_than(best)) best = cand;
        }

        if (!(best.delta < 0.0)) break; // swap-stable
        if (++swaps > max_swaps)
            throw std::runtime_error("k_medoids: swap iteration cap (" + std::to_string(max_swaps) +
                                     ") exceeded; input is pathological");
        int slot = 0;
        while (medoids[slot] != best.medoid_id) ++slot;
        is_medoid[best.medoid_id] = 0;
        is_medoid[best.other_id] = 1;
        medoids[slot] = best.other_id;
        recompute_neighbors();
    }

    // canonical output: medoid ids ascending, then rebuild the assignment
    std::sort(medoids.begin(), medoids.end());
    return Clustering::from_medoids(ps, std::move(medoids));
}

double exclusion_radius(const Clustering& c, double multiplier) {
    if (multiplier <= 0.0) throw std::invalid_argument("exclusion_radius: multiplier must be > 0");
    std::vector<double> r = c.radii;
    if (r.empty()) throw std::invalid_argument("exclusion_radius: clustering has no clusters");
    std::sort(r.begin(), r.end());
    const std::size_t m = r.size() / 2;
    const double median = (r.size() % 2 == 1) ? r[m] : 0.5 * (r[m - 1] + r[m]);
    return multiplier * median;
}

} // namespace geocluster
