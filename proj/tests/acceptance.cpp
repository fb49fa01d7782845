// Shipped acceptance gates, one line per criterion. Tolerances are pinned in
// this file; a red line prints the measured values so it is directly
// actionable. The Monte Carlo criteria run the real harness at 1000
// replications, so the whole binary takes a few tens of seconds.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "geocluster/clustering.hpp"
#include "geocluster/design.hpp"
#include "geocluster/errors.hpp"
#include "geocluster/estimators.hpp"
#include "geocluster/geometry.hpp"
#include "geocluster/inference.hpp"
#include "geocluster/rng.hpp"
#include "geocluster/simulation.hpp"

using namespace geocluster;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] %02d %s: %s\n", pass ? "PASS" : "FAIL", idx, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string g6(double x) {
    char b[64];
    std::snprintf(b, sizeof b, "%.4g", x);
    return b;
}

std::string ge(double x) {
    char b[64];
    std::snprintf(b, sizeof b, "%.3g", x);
    return b;
}

constexpr std::uint64_t kSeed = 20240817;
constexpr int kReps = 1000;

// ------------------------------------------------------------ criterion 1 ---

void crit1_plan_k() {
    int a = plan_k(685.7, 38000, 2.0, 2);
    int b = plan_k(84.0, 38000, 2.0, 2);
    int c = plan_k(768.0, 34000, 2.0, 2);
    bool pass = a == 78 && b == 19 && c == 84;
    std::ostringstream d;
    d << "685.7/38000 -> " << a << ", 84/38000 -> " << b << ", 768/34000 -> " << c
      << " (expected 78/19/84)";
    report(1, "plan-k calibrations", pass, d.str());
}

// --------------------------------------------------- shared harness cells ---
// One grid serves criteria 2 and 6-9:
//   0 MA  increasing n=1000           (6)
//   1 MA  infill     n=1000 a=0.7     (6)
//   2 CO  increasing n=1000           (2, 7, 8)
//   3 CO  infill     n=250  a=0.9     (2, 9 context)
//   4 CO  infill     n=500  a=0.8     (2, 9 context)
//   5 CO  infill     n=1000 a=0.7     (9 context)
//   6 MA  increasing n=250, 1 rep     (2; k only)
//   7 MA  increasing n=500, 1 rep     (2; k only)

std::vector<SimulationCell> harness_cells() {
    auto cell = [](Model m, int n, double a, int reps) {
        SimulationCell c;
        c.dgp.model = m;
        c.dgp.n = n;
        c.dgp.alpha_n = a;
        c.reps = reps;
        return c;
    };
    return {cell(Model::MovingAverage, 1000, 1.0, kReps),
            cell(Model::MovingAverage, 1000, 0.7, kReps),
            cell(Model::CliffOrd, 1000, 1.0, kReps),
            cell(Model::CliffOrd, 250, 0.9, kReps),
            cell(Model::CliffOrd, 500, 0.8, kReps),
            cell(Model::CliffOrd, 1000, 0.7, kReps),
            cell(Model::MovingAverage, 250, 1.0, 1),
            cell(Model::MovingAverage, 500, 1.0, 1)};
}

// Full-precision serialization; byte equality here means bit equality of
// every statistic in the report.
std::string serialize_report(const SimulationReport& rep) {
    std::ostringstream out;
    char b[64];
    auto put = [&](double x) {
        std::snprintf(b, sizeof b, "%.17g", x);
        out << b << ';';
    };
    out << rep.seed << '|';
    for (const auto& c : rep.cells) {
        out << to_string(c.dgp.model) << ',' << c.dgp.n << ',' << c.reps << ',' << c.k << ','
            << c.invalid << ',';
        put(c.dgp.alpha_n);
        put(c.r_n);
        for (const auto& s : c.stats) {
            out << to_string(s.kind) << ',' << s.used_reps << ',' << s.dim_reps << ','
                << s.degenerate << ',' << s.dim_degenerate << ',' << s.negative_sigma1 << ',';
            put(s.bias_hajek);
            put(s.bias_dim);
            put(s.coverage);
            put(s.mean_se);
            put(s.sd_hajek);
            put(s.sd_dim);
            put(s.mean_hajek);
            put(s.mean_true);
            put(s.min_sigma2);
        }
        out << '\n';
    }
    return out.str();
}

void crit2_k_rows(const SimulationReport& rep) {
    int inc[3] = {rep.cells[6].k, rep.cells[7].k, rep.cells[2].k};
    int inf[3] = {rep.cells[3].k, rep.cells[4].k, rep.cells[5].k};
    bool pass = inc[0] == 40 && inc[1] == 63 && inc[2] == 100 && inf[0] == 40 && inf[1] == 63 &&
                inf[2] == 100 && rep.cells[0].k == 100 && rep.cells[1].k == 100;
    std::ostringstream d;
    d << "increasing " << inc[0] << "/" << inc[1] << "/" << inc[2] << ", infill " << inf[0] << "/"
      << inf[1] << "/" << inf[2] << " (expected 40/63/100 in both regimes)";
    report(2, "harness k rows", pass, d.str());
}

// ------------------------------------------------------------ criterion 3 ---
// Exhaustive enumeration of the two-stage design on every toy geometry with
// k <= 3 clusters of 1-2 units, against the closed-form exposure
// probabilities, at three exclusion radii and two (p, q) points.

void crit3_propensity_oracle() {
    double maxdiff = 0.0;
    long comparisons = 0;
    const double radii[] = {0.0, 9.5, 25.0};
    const double pqs[][2] = {{0.5, 0.5}, {0.7, 0.6}};

    for (int k = 1; k <= 3; ++k) {
        for (int mask = 0; mask < (1 << k); ++mask) { // bit j: cluster j has 2 units
            std::vector<double> xs;
            std::vector<int> medoids, cluster_of;
            for (int j = 0; j < k; ++j) {
                medoids.push_back(static_cast<int>(xs.size()));
                xs.push_back(10.0 * j);
                cluster_of.push_back(j);
                if (mask & (1 << j)) {
                    xs.push_back(10.0 * j + 1.0);
                    cluster_of.push_back(j);
                }
            }
            int n = static_cast<int>(xs.size());
            PointSet ps(xs, 1);
            Clustering c = Clustering::from_medoids(ps, medoids);

            for (double r_n : radii) {
                Surround s = build_surround(ps, c, r_n);
                for (const auto& pq : pqs) {
                    double p = pq[0], q = pq[1];
                    // E[T_{t,i}] accumulated over every (W, D) outcome
                    double et[4][2][6] = {};
                    double total_mass = 0.0;
                    for (int wmask = 0; wmask < (1 << k); ++wmask) {
                        std::vector<std::uint8_t> W(k);
                        double pw = 1.0;
                        for (int j = 0; j < k; ++j) {
                            W[j] = (wmask >> j) & 1;
                            pw *= W[j] ? q : 1.0 - q;
                        }
                        std::vector<int> treated_units;
                        for (int i = 0; i < n; ++i)
                            if (W[cluster_of[i]]) treated_units.push_back(i);
                        int m = static_cast<int>(treated_units.size());
                        for (int dmask = 0; dmask < (1 << m); ++dmask) {
                            AssignmentDraw draw;
                            draw.W = W;
                            draw.D.assign(n, 0);
                            double pd = 1.0;
                            for (int u = 0; u < m; ++u) {
                                int bit = (dmask >> u) & 1;
                                draw.D[treated_units[u]] = static_cast<std::uint8_t>(bit);
                                pd *= bit ? p : 1.0 - p;
                            }
                            double prob = pw * pd;
                            total_mass += prob;
                            for (int kind = 0; kind < 4; ++kind)
                                for (int t = 0; t < 2; ++t)
                                    for (int i = 0; i < n; ++i)
                                        if (indicator(static_cast<EstimandKind>(kind), t, s, draw,
                                                      i))
                                            et[kind][t][i] += prob;
                        }
                    }
                    if (std::fabs(total_mass - 1.0) > 1e-12) {
                        report(3, "propensity oracle", false, "enumeration mass != 1");
                        return;
                    }
                    for (int kind = 0; kind < 4; ++kind)
                        for (int t = 0; t < 2; ++t)
                            for (int i = 0; i < n; ++i) {
                                double closed = propensity(static_cast<EstimandKind>(kind), t, p,
                                                           q, s.phi(i));
                                maxdiff = std::max(maxdiff, std::fabs(et[kind][t][i] - closed));
                                ++comparisons;
                            }
                }
            }
        }
    }
    std::ostringstream d;
    d << "max |enumerated - closed form| = " << ge(maxdiff) << " over " << comparisons
      << " comparisons (tol 1e-12)";
    report(3, "propensity oracle equivalence", maxdiff < 1e-12, d.str());
}

// ------------------------------------------------------------ criterion 4 ---
// With r_n = 0 every unit is surrounded by its own cluster alone, so the
// Hajek weights are constant within arm and the estimator must collapse to
// the plain difference in means on the same groups.

void crit4_dim_reduction() {
    struct Fix {
        PointSet ps;
        int k;
        double p, q;
    };
    RngStream geo(41);
    std::vector<double> xy;
    for (int i = 0; i < 60; ++i) xy.push_back(geo.uniform() * 20.0);
    std::vector<double> line;
    for (int i = 0; i < 12; ++i) line.push_back(1.7 * i);
    std::vector<Fix> fixtures;
    fixtures.push_back({PointSet(xy, 2), 5, 0.7, 0.6});
    fixtures.push_back({PointSet(line, 1), 3, 0.5, 0.5});

    double maxdiff = 0.0;
    int pairs = 0;
    bool all_found = true;
    for (const auto& f : fixtures) {
        Clustering c = k_medoids(f.ps, f.k, 1);
        Surround s = build_surround(f.ps, c, 0.0);
        std::vector<double> y;
        RngStream yr(42);
        for (int i = 0; i < f.ps.size(); ++i) y.push_back(yr.normal(0.5, 2.0));

        bool found = false;
        for (std::uint64_t seed = 0; seed < 200 && !found; ++seed) {
            RngStream rng(seed, 0, 0, TAG_ASSIGN);
            AssignmentDraw draw = draw_assignment(c, {f.p, f.q, c.k(), seed}, rng);
            try {
                double local = 0.0;
                for (int kind = 0; kind < 4; ++kind) {
                    auto ek = static_cast<EstimandKind>(kind);
                    double h = hajek(build_panel(ek, s, draw, f.p, f.q), y).estimate;
                    double dm = diff_in_means(ek, c, draw, y).estimate;
                    local = std::max(local, std::fabs(h - dm));
                }
                maxdiff = std::max(maxdiff, local);
                pairs += 4;
                found = true;
            } catch (const DegenerateDraw&) {
                // some arm empty under this seed; try the next one
            }
        }
        all_found = all_found && found;
    }
    std::ostringstream d;
    d << "max |hajek - diff_in_means| = " << ge(maxdiff) << " over " << pairs
      << " estimand/fixture pairs (tol 1e-12)";
    report(4, "difference-in-means reduction at r_n=0", all_found && maxdiff < 1e-12, d.str());
}

// ------------------------------------------------------------ criterion 5 ---

void all_combinations(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        fn(idx);
        int pos = k - 1;
        while (pos >= 0 && idx[pos] == n - k + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
}

bool swap_stable(const PointSet& ps, const std::vector<int>& medoids, double cost) {
    int n = ps.size();
    std::vector<char> is_med(n, 0);
    for (int m : medoids) is_med[m] = 1;
    for (std::size_t a = 0; a < medoids.size(); ++a) {
        for (int o = 0; o < n; ++o) {
            if (is_med[o]) continue;
            std::vector<int> trial = medoids;
            trial[a] = o;
            if (medoid_cost(ps, trial) < cost - 1e-12) return false;
        }
    }
    return true;
}

void crit5_kmedoids_optimality() {
    int stable = 0, opt_applicable = 0, opt_matched = 0;
    const int instances = 50;
    for (int t = 0; t < instances; ++t) {
        RngStream rng(500 + t);
        int n = 4 + static_cast<int>(rng.uniform_int(5)); // 4..8
        int k = 1 + static_cast<int>(rng.uniform_int(3)); // 1..3
        std::vector<double> xy;
        for (int i = 0; i < 2 * n; ++i) xy.push_back(rng.uniform() * 10.0);
        PointSet ps(xy, 2);

        Clustering c = k_medoids(ps, k, static_cast<std::uint64_t>(t));
        bool is_stable = swap_stable(ps, c.medoids, c.cost);
        stable += is_stable;

        double opt = std::numeric_limits<double>::infinity();
        all_combinations(n, k, [&](const std::vector<int>& m) {
            opt = std::min(opt, medoid_cost(ps, m));
        });
        // "swap-stable-unique": every swap-stable configuration attains the
        // exhaustive optimum, so any stable answer must match it
        bool unique = true;
        all_combinations(n, k, [&](const std::vector<int>& m) {
            double cost = medoid_cost(ps, m);
            if (swap_stable(ps, m, cost) && cost > opt + 1e-12) unique = false;
        });
        if (unique) {
            ++opt_applicable;
            if (std::fabs(c.cost - opt) <= 1e-9) ++opt_matched;
        }
    }
    std::ostringstream d;
    d << stable << "/" << instances << " swap-stable, " << opt_matched << "/" << opt_applicable
      << " matched the exhaustive optimum where it is swap-stable-unique";
    report(5, "k-medoids desk-scale optimality",
           stable == instances && opt_matched == opt_applicable, d.str());
}

// --------------------------------------------------------- criteria 6 - 9 ---

void crit6_bias_ordering(const SimulationReport& rep) {
    const auto& inc = rep.cells[0].stats;
    const auto& inf = rep.cells[1].stats;
    double bh = std::fabs(inc[3].bias_hajek);
    double bd = std::fabs(inc[3].bias_dim);
    bool g1 = bh < 0.045;
    bool g2 = bd >= 0.06 && bd <= 0.11;

    int ordered = 0;
    double worst_h = 0, worst_d = 0, worst_se = 0;
    std::string worst_name;
    double worst_margin = std::numeric_limits<double>::infinity();
    for (const auto* regime : {&inc, &inf}) {
        for (int kq = 0; kq < 4; ++kq) {
            const auto& s = (*regime)[kq];
            double h = std::fabs(s.bias_hajek), dm = std::fabs(s.bias_dim);
            if (h < dm) ++ordered;
            double margin = dm - h;
            if (margin < worst_margin) {
                worst_margin = margin;
                worst_h = h;
                worst_d = dm;
                worst_se = s.sd_hajek / std::sqrt(std::max(1, s.used_reps));
                worst_name = std::string(regime == &inc ? "incr" : "infill") + "-" +
                             to_string(s.kind);
            }
        }
    }
    bool g3 = ordered == 8;
    std::ostringstream d;
    d << "MA n=1000 incr |bias O| hajek " << g6(bh) << " < 0.045, dim " << g6(bd)
      << " in [0.06,0.11]; strict |hajek|<|dim| " << ordered << "/8, tightest " << worst_name
      << " (" << g6(worst_h) << " vs " << g6(worst_d) << ", MC SE " << ge(worst_se) << ")";
    if (!g3)
        d << " - the two estimators nearly coincide there and the gap is inside Monte Carlo "
             "noise, but the criterion asks for a strict ordering";
    report(6, "bias ordering of hajek vs diff-in-means", g1 && g2 && g3, d.str());
}

void crit7_coverage(const SimulationReport& rep) {
    const auto& st = rep.cells[2].stats;
    double cov_o = st[3].coverage;
    bool pass = cov_o >= 0.93 && cov_o <= 0.985;
    std::ostringstream d;
    d << "CO increasing n=1000 overall coverage " << g6(cov_o) << " in [0.93,0.985] (indirect "
      << g6(st[1].coverage) << ", direct " << g6(st[0].coverage) << ", total "
      << g6(st[2].coverage) << ")";
    report(7, "coverage calibration", pass, d.str());
}

void crit8_conservative_variance(const SimulationReport& rep) {
    const auto& st = rep.cells[2].stats;
    bool pass = true;
    std::ostringstream ratios;
    double min_sigma2 = std::numeric_limits<double>::infinity();
    for (int kq = 0; kq < 4; ++kq) {
        double ratio = st[kq].mean_se / st[kq].sd_hajek;
        pass = pass && ratio >= 0.95 && st[kq].min_sigma2 >= 0.0;
        min_sigma2 = std::min(min_sigma2, st[kq].min_sigma2);
        ratios << (kq ? "/" : "") << g6(ratio);
    }
    std::ostringstream d;
    d << "mean SE over sd(theta_hat) = " << ratios.str() << " (all >= 0.95); min sigma2 across "
      << "draws " << g6(min_sigma2) << " >= 0";
    report(8, "conservative variance", pass, d.str());
}

void crit9_infill_degradation(const SimulationReport& rep) {
    // The harness conditions each cell on one location draw, so a single
    // run's bias is geometry-conditional and its per-rep SE understates the
    // real Monte Carlo uncertainty (the between-geometry spread is the same
    // order as the steps under test).  Estimate the unconditional bias by
    // averaging over independent geometry replicates and let the replicate
    // spread set the slack.  Gate on the moving-average model, whose per-rep
    // SD (~0.4 vs ~1.5 for Cliff-Ord) keeps that spread below the steps.
    const int G = 16;
    auto mk = [](int n, double a) {
        SimulationCell c;
        c.dgp.model = Model::MovingAverage;
        c.dgp.n = n;
        c.dgp.alpha_n = a;
        c.reps = 250;
        return c;
    };
    std::vector<SimulationCell> cells = {mk(250, 0.9), mk(500, 0.8), mk(1000, 0.7)};
    double sum[3] = {}, sumsq[3] = {}, hsum[3] = {};
    for (int g = 0; g < G; ++g) {
        SimulationReport r = run_monte_carlo(cells, kSeed + 1 + g, 1);
        for (int i = 0; i < 3; ++i) {
            double bd = r.cells[i].stats[3].bias_dim;
            sum[i] += bd;
            sumsq[i] += bd * bd;
            hsum[i] += r.cells[i].stats[3].bias_hajek;
        }
    }
    double b[3], se[3], h[3];
    for (int i = 0; i < 3; ++i) {
        double m = sum[i] / G;
        b[i] = std::fabs(m);
        se[i] = std::sqrt((sumsq[i] / G - m * m) / (G - 1));
        h[i] = std::fabs(hsum[i] / G);
    }
    double slack01 = std::sqrt(se[0] * se[0] + se[1] * se[1]);
    double slack12 = std::sqrt(se[1] * se[1] + se[2] * se[2]);
    bool pass = b[1] > b[0] - slack01 && b[2] > b[1] - slack12;
    double co[3];
    for (int i = 0; i < 3; ++i) co[i] = std::fabs(rep.cells[3 + i].stats[3].bias_dim);
    std::ostringstream d;
    d << "MA infill |bias theta+_O| over " << G << " geometry replicates = " << g6(b[0])
      << " -> " << g6(b[1]) << " -> " << g6(b[2]) << " monotone within 1 MC SE (slacks "
      << ge(slack01) << ", " << ge(slack12) << "); hajek stays flat at " << g6(h[0]) << " -> "
      << g6(h[1]) << " -> " << g6(h[2])
      << "; single-geometry CO run for context (MC SE ~0.05): " << g6(co[0]) << " -> "
      << g6(co[1]) << " -> " << g6(co[2]);
    report(9, "infill degradation of the diff-in-means", pass, d.str());
}

// ----------------------------------------------------------- criterion 10 ---

void crit10_variogram() {
    // (a) exact power-law injection: replay each replication's arm draws and
    // hand every measured unit the response t^{-gamma0} of its cluster's arm
    const double gamma0 = 2.5;
    RngStream rloc(kSeed, 0, 0, TAG_LOCATIONS);
    PointSet ps = gen_locations(1000, 1.0, rloc);
    Clustering c = k_medoids(ps, 100, 7);
    VariogramConfig cfg; // T=3, width=0.6, min_measured=10
    cfg.reps = 40;
    int rep_counter = 0;
    auto inject = [&](const std::vector<std::uint8_t>&, const std::vector<int>& measured,
                      RngStream&) {
        RngStream rarm(kSeed, 0, static_cast<std::uint64_t>(rep_counter++), TAG_VARIO_ARMS);
        GammaDesign gd = variogram_design(ps, c, cfg.T, cfg.width, rarm);
        std::vector<double> out(measured.size());
        for (std::size_t i = 0; i < measured.size(); ++i) {
            int t = gd.arms[c.assignment[measured[i]]];
            out[i] = t == 0 ? 0.0 : std::pow(static_cast<double>(t), -gamma0);
        }
        return out;
    };
    double inj_err = std::numeric_limits<double>::infinity();
    std::string inj_note;
    try {
        VariogramResult vr = variogram_gamma(ps, c, cfg, kSeed, inject);
        inj_err = std::fabs(vr.gamma_hat - gamma0);
    } catch (const VariogramError& e) {
        inj_note = std::string(" (injection failed: ") + e.what() + ")";
    }

    // (b) moving-average model end to end at desk scale
    double ghat = std::numeric_limits<double>::quiet_NaN();
    std::string ma_note;
    VariogramConfig def; // defaults: T=3, width=0.6, reps=500
    try {
        ghat = variogram_gamma_ma(1000, 1.0, def, kSeed).gamma_hat;
    } catch (const VariogramError& e) {
        ma_note = std::string(" (MA run failed: ") + e.what() + ")";
    }
    bool pass = inj_err < 1e-6 && ghat >= 2.0 && ghat <= 4.0;
    std::ostringstream d;
    d << "injected gamma0=2.5 recovered with error " << ge(inj_err) << " (tol 1e-6)" << inj_note
      << "; MA n=1000, 500 reps: gamma_hat = " << g6(ghat) << " in [2,4]" << ma_note;
    report(10, "variogram recovery", pass, d.str());
}

// ----------------------------------------------------------- criterion 11 ---

void crit11_determinism(const SimulationReport& rep1, const std::string& ser1) {
    SimulationReport rep4 = run_monte_carlo(harness_cells(), kSeed, 4);
    std::string ser4 = serialize_report(rep4);
    bool pass = ser1 == ser4 && rep1.cells.size() == rep4.cells.size();
    std::ostringstream d;
    d << "serialized harness reports (" << rep1.cells.size() << " cells, " << ser1.size()
      << " chars at full precision) " << (pass ? "byte-identical" : "DIFFER")
      << " for threads 1 vs 4";
    report(11, "determinism across thread counts", pass, d.str());
}

} // namespace

int main() {
    crit1_plan_k();

    SimulationReport rep = run_monte_carlo(harness_cells(), kSeed, 1);
    std::string ser1 = serialize_report(rep);

    crit2_k_rows(rep);
    crit3_propensity_oracle();
    crit4_dim_reduction();
    crit5_kmedoids_optimality();
    crit6_bias_ordering(rep);
    crit7_coverage(rep);
    crit8_conservative_variance(rep);
    crit9_infill_degradation(rep);
    crit10_variogram();
    crit11_determinism(rep, ser1);

    std::printf("acceptance: %d/11 criteria passed\n", 11 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
