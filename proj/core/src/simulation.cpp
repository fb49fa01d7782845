#include "geocluster/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "geocluster/inference.hpp"

namespace geocluster {

namespace {

constexpr double kAuto = 0.8;      // Cliff-Ord autocorrelation
constexpr double kIntercept = -1.0;
constexpr double kMAExponent = 5.0;

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) { // population SD
    if (v.empty()) return 0.0;
    double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size()));
}

} // namespace

std::string to_string(Model model) {
    switch (model) {
    case Model::CliffOrd: return "cliff-ord";
    case Model::MovingAverage: return "moving-average";
    }
    throw std::invalid_argument("unknown model");
}

Model model_from_string(const std::string& s) {
    if (s == "cliff-ord" || s == "co") return Model::CliffOrd;
    if (s == "moving-average" || s == "ma") return Model::MovingAverage;
    throw std::invalid_argument("unknown model: " + s);
}

PointSet gen_locations(int n, double alpha_n, RngStream& rng) {
    if (n < 1) throw std::invalid_argument("gen_locations: n must be >= 1");
    if (!(alpha_n > 0.0 && alpha_n <= 1.0))
        throw std::invalid_argument("gen_locations: alpha_n must lie in (0, 1]");
    double half = std::sqrt(static_cast<double>(n) * alpha_n);
    std::vector<double> coords(static_cast<std::size_t>(n) * 2);
    for (int i = 0; i < n; ++i) {
        coords[2 * i] = half * (2.0 * rng.uniform() - 1.0);
        coords[2 * i + 1] = half * (2.0 * rng.uniform() - 1.0);
    }
    return PointSet(std::move(coords), 2, Metric::Euclidean);
}

ModelContext ModelContext::build(const PointSet& ps, Model model, bool linear_summaries) {
    ModelContext ctx;
    ctx.model = model;
    ctx.n = ps.size();
    int n = ctx.n;
    ctx.nbr.resize(n);
    ctx.invdeg.resize(n);
    for (int i = 0; i < n; ++i) {
        ctx.nbr[i] = ps.neighborhood(i, 1.0); // includes i itself
        ctx.invdeg[i] = 1.0 / static_cast<double>(ctx.nbr[i].size());
    }
    if (model == Model::MovingAverage) {
        ctx.w.resize(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double inv = 1.0 / std::max(ps.distance(i, j), 1.0);
                double inv2 = inv * inv;
                ctx.w[static_cast<std::size_t>(i) * n + j] = inv2 * inv2 * inv;
            }
        static_assert(kMAExponent == 5.0, "weight expansion hardcodes the exponent");
    }
    if (!linear_summaries) return ctx;
    ctx.m_diag.assign(n, 0.0);
    ctx.m_colsum.assign(n, 0.0);
    if (model == Model::MovingAverage) {
        for (int i = 0; i < n; ++i) ctx.m_diag[i] = 1.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) ctx.m_colsum[j] += ctx.w[static_cast<std::size_t>(i) * n + j];
        return ctx;
    }
    // Cliff-Ord: M = (I - 0.8 G)^{-1}. Column sums via one transpose solve of
    // (I - 0.8 G') x = 1; diagonal via n per-column fixed-point solves.
    {
        std::vector<double> x(n, 0.0), next(n);
        for (int it = 0; it < 500; ++it) {
            std::vector<double> gx = ctx.apply_g_transpose(x);
            double delta = 0.0;
            for (int i = 0; i < n; ++i) {
                next[i] = 1.0 + kAuto * gx[i];
                delta = std::max(delta, std::abs(next[i] - x[i]));
            }
            x.swap(next);
            if (delta < 1e-12) break;
        }
        ctx.m_colsum = x;
    }
    {
        std::vector<double> x(n), gx(n);
        for (int j = 0; j < n; ++j) {
            std::fill(x.begin(), x.end(), 0.0);
            x[j] = 1.0;
            for (int it = 0; it < 500; ++it) {
                double delta = 0.0;
                for (int i = 0; i < n; ++i) {
                    double s = 0.0;
                    for (int l : ctx.nbr[i]) s += x[l];
                    gx[i] = s * ctx.invdeg[i];
                }
                for (int i = 0; i < n; ++i) {
                    double v = (i == j ? 1.0 : 0.0) + kAuto * gx[i];
                    delta = std::max(delta, std::abs(v - x[i]));
                    x[i] = v;
                }
                if (delta < 1e-12) break;
            }
            ctx.m_diag[j] = x[j];
        }
    }
    return ctx;
}

std::vector<double> ModelContext::apply_g(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != n) throw std::invalid_argument("apply_g: size mismatch");
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j : nbr[i]) s += x[j];
        out[i] = s * invdeg[i];
    }
    return out;
}

std::vector<double> ModelContext::apply_g_transpose(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != n)
        throw std::invalid_argument("apply_g_transpose: size mismatch");
    std::vector<double> out(n);
    // adjacency is symmetric, so (G'x)_i = sum over the same neighbor list
    // with the neighbor's own normalization
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j : nbr[i]) s += x[j] * invdeg[j];
        out[i] = s;
    }
    return out;
}

NoiseDraw shared_noise(const ModelContext& ctx, RngStream& rng) {
    int n = ctx.n;
    NoiseDraw nd;
    nd.beta_raw.resize(n);
    nd.eps_raw.resize(n);
    for (int i = 0; i < n; ++i) nd.beta_raw[i] = rng.normal(1.0, 1.0);
    for (int i = 0; i < n; ++i) nd.eps_raw[i] = rng.normal(0.0, 1.0);
    std::vector<double> gb = ctx.apply_g(nd.beta_raw);
    std::vector<double> ge = ctx.apply_g(nd.eps_raw);
    nd.beta.resize(n);
    nd.eps.resize(n);
    for (int i = 0; i < n; ++i) {
        nd.beta[i] = nd.beta_raw[i] + gb[i];
        nd.eps[i] = nd.eps_raw[i] + ge[i];
    }
    return nd;
}

NoiseDraw shared_noise(const PointSet& ps, RngStream& rng) {
    return shared_noise(ModelContext::build(ps, Model::CliffOrd, false), rng);
}

std::vector<double> cliff_ord_outcomes(const ModelContext& ctx, const std::vector<std::uint8_t>& d,
                                       const NoiseDraw& noise) {
    int n = ctx.n;
    if (static_cast<int>(d.size()) != n)
        throw std::invalid_argument("cliff_ord_outcomes: treatment vector size mismatch");
    std::vector<double> b(n);
    for (int i = 0; i < n; ++i)
        b[i] = kIntercept + (d[i] ? noise.beta[i] : 0.0) + noise.eps[i];
    std::vector<double> y = b;
    bool converged = false;
    for (int it = 0; it < 500 && !converged; ++it) {
        std::vector<double> gy = ctx.apply_g(y);
        double delta = 0.0;
        for (int i = 0; i < n; ++i) {
            double v = b[i] + kAuto * gy[i];
            delta = std::max(delta, std::abs(v - y[i]));
            y[i] = v;
        }
        converged = delta < 1e-10;
    }
    if (!converged) throw std::runtime_error("cliff_ord_outcomes: fixed point did not converge");
    std::vector<double> gy = ctx.apply_g(y);
    for (int i = 0; i < n; ++i)
        if (std::abs(y[i] - kAuto * gy[i] - b[i]) >= 1e-8)
            throw std::runtime_error("cliff_ord_outcomes: residual check failed");
    return y;
}

std::vector<double> cliff_ord_outcomes(const PointSet& ps, const std::vector<std::uint8_t>& d,
                                       const NoiseDraw& noise) {
    return cliff_ord_outcomes(ModelContext::build(ps, Model::CliffOrd, false), d, noise);
}

std::vector<double> moving_average_outcomes(const ModelContext& ctx,
                                            const std::vector<std::uint8_t>& d,
                                            const NoiseDraw& noise) {
    int n = ctx.n;
    if (ctx.model != Model::MovingAverage)
        throw std::invalid_argument("moving_average_outcomes: context built for another model");
    if (static_cast<int>(d.size()) != n)
        throw std::invalid_argument("moving_average_outcomes: treatment vector size mismatch");
    std::vector<double> b(n);
    for (int i = 0; i < n; ++i)
        b[i] = kIntercept + (d[i] ? noise.beta_raw[i] : 0.0) + noise.eps_raw[i];
    std::vector<double> y(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double* row = ctx.w.data() + static_cast<std::size_t>(i) * n;
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += row[j] * b[j];
        y[i] = s;
    }
    return y;
}

std::vector<double> moving_average_outcomes(const PointSet& ps, const std::vector<std::uint8_t>& d,
                                            const NoiseDraw& noise) {
    return moving_average_outcomes(ModelContext::build(ps, Model::MovingAverage, false), d, noise);
}

PotentialOutcomeOracle make_oracle(const ModelContext& ctx, const NoiseDraw& noise) {
    // borrows ctx and noise; keep both alive while the oracle is used
    PotentialOutcomeOracle o;
    o.n = ctx.n;
    const ModelContext* c = &ctx;
    const NoiseDraw* nz = &noise;
    o.y = [c, nz](const std::vector<std::uint8_t>& d) {
        return c->model == Model::CliffOrd ? cliff_ord_outcomes(*c, d, *nz)
                                           : moving_average_outcomes(*c, d, *nz);
    };
    return o;
}

double TrueEstimands::value(EstimandKind kind) const {
    switch (kind) {
    case EstimandKind::Direct: return direct;
    case EstimandKind::Indirect: return indirect;
    case EstimandKind::Total: return total;
    case EstimandKind::Overall: return overall;
    }
    throw std::invalid_argument("unknown estimand kind");
}

double TrueEstimands::inner_se(EstimandKind kind) const {
    switch (kind) {
    case EstimandKind::Direct: return se_direct;
    case EstimandKind::Indirect: return se_indirect;
    case EstimandKind::Total: return se_total;
    case EstimandKind::Overall: return se_overall;
    }
    throw std::invalid_argument("unknown estimand kind");
}

TrueEstimands true_estimands(const PotentialOutcomeOracle& oracle, const Clustering& c, double p,
                             int draws, RngStream& rng) {
    int n = oracle.n;
    if (c.n() != n) throw std::invalid_argument("true_estimands: clustering does not match oracle");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("true_estimands: p must lie in (0, 1)");
    if (draws < 2) throw std::invalid_argument("true_estimands: need at least 2 inner draws");
    std::vector<double> y0 = oracle.y(std::vector<std::uint8_t>(n, 0));
    double y0m = mean_of(y0);
    std::vector<double> am(draws), bm(draws), cm(draws);
    std::vector<std::uint8_t> d(n);
    for (int m = 0; m < draws; ++m) {
        for (int i = 0; i < n; ++i) d[i] = rng.bernoulli(p) ? 1 : 0;
        std::vector<double> y = oracle.y(d);
        double sa = 0.0, s1 = 0.0, s0 = 0.0;
        for (int i = 0; i < n; ++i) {
            double w1 = d[i] ? y[i] / p : 0.0;
            double w0 = d[i] ? 0.0 : y[i] / (1.0 - p);
            sa += w1 - w0;
            s1 += w1;
            s0 += w0;
        }
        am[m] = sa / n;
        bm[m] = s0 / n - y0m;
        cm[m] = s1 / n - y0m;
    }
    auto summarize = [&](const std::vector<double>& v, double& val, double& se) {
        val = mean_of(v);
        double s = 0.0;
        for (double x : v) s += (x - val) * (x - val);
        se = std::sqrt(s / (static_cast<double>(draws) * (draws - 1)));
    };
    TrueEstimands t;
    t.draws = draws;
    summarize(am, t.direct, t.se_direct);
    summarize(bm, t.indirect, t.se_indirect);
    summarize(cm, t.total, t.se_total);
    std::vector<double> om(draws);
    for (int m = 0; m < draws; ++m) om[m] = p * cm[m] + (1.0 - p) * bm[m];
    summarize(om, t.overall, t.se_overall);
    return t;
}

TrueEstimands exact_true_estimands(const ModelContext& ctx, const NoiseDraw& noise, double p) {
    if (ctx.m_diag.empty() || ctx.m_colsum.empty())
        throw std::invalid_argument("exact_true_estimands: context lacks linear summaries");
    const std::vector<double>& beta =
        ctx.model == Model::CliffOrd ? noise.beta : noise.beta_raw;
    int n = ctx.n;
    double td = 0.0, toff = 0.0;
    for (int i = 0; i < n; ++i) {
        td += ctx.m_diag[i] * beta[i];
        toff += (ctx.m_colsum[i] - ctx.m_diag[i]) * beta[i];
    }
    TrueEstimands t;
    t.draws = 0;
    t.direct = td / n;
    t.indirect = p * toff / n;
    t.total = t.direct + t.indirect;
    t.overall = p * t.total + (1.0 - p) * t.indirect;
    return t;
}

namespace {

struct RepRec {
    std::uint8_t ok = 0, dim_ok = 0, cover = 0, neg1 = 0;
    double th = 0, thp = 0, tstar = 0, se = 0, sigma2 = 0;
};

constexpr std::array<EstimandKind, 4> kKinds = {EstimandKind::Direct, EstimandKind::Indirect,
                                                EstimandKind::Total, EstimandKind::Overall};

CellReport run_cell(const SimulationCell& cell, std::size_t ci, std::uint64_t seed, int threads) {
    const DGPSpec& g = cell.dgp;
    RngStream rloc(seed, ci, 0, TAG_LOCATIONS);
    PointSet ps = gen_locations(g.n, g.alpha_n, rloc);
    double volume = 4.0 * g.n * g.alpha_n; // design square [-l, l]^2, l = sqrt(n alpha)
    int k = plan_k(volume, g.n, g.gamma_tilde, 2);
    Clustering cl = k_medoids(ps, k, RngStream(seed, ci, 0, TAG_CLUSTER).next_u64(), threads);
    double r_n = exclusion_radius(cl);
    Surround surround = build_surround(ps, cl, r_n);
    DependencyStructure deps = lambda_sets(surround, k);
    ModelContext ctx = ModelContext::build(ps, g.model, true);
    DesignParams params{g.p, g.q, k, seed};

    std::vector<std::array<RepRec, 4>> slots(cell.reps);
    auto worker = [&](int lo, int hi) {
        for (int r = lo; r < hi; ++r) {
            RngStream rnoise(seed, ci, static_cast<std::uint64_t>(r), TAG_NOISE);
            NoiseDraw noise = shared_noise(ctx, rnoise);
            RngStream rassign(seed, ci, static_cast<std::uint64_t>(r), TAG_ASSIGN);
            AssignmentDraw draw = draw_assignment(cl, params, rassign);
            std::vector<double> y = g.model == Model::CliffOrd
                                        ? cliff_ord_outcomes(ctx, draw.D, noise)
                                        : moving_average_outcomes(ctx, draw.D, noise);
            TrueEstimands ts = exact_true_estimands(ctx, noise, g.p);
            for (std::size_t qi = 0; qi < kKinds.size(); ++qi) {
                EstimandKind kind = kKinds[qi];
                RepRec& rec = slots[r][qi];
                rec.tstar = ts.value(kind);
                try {
                    UnitPanel panel = build_panel(kind, surround, draw, g.p, g.q);
                    EstimateReport est = hajek(panel, y);
                    VarianceReport var = variance(panel, y, est, deps, cl);
                    rec.ok = 1;
                    rec.th = est.estimate;
                    rec.se = var.se();
                    rec.sigma2 = var.sigma2;
                    rec.neg1 = var.sigma2_lambda < 0.0 ? 1 : 0;
                    rec.cover = std::abs(est.estimate - rec.tstar) <= 1.96 * rec.se ? 1 : 0;
                } catch (const DegenerateDraw&) {
                    rec.ok = 0;
                }
                try {
                    rec.thp = diff_in_means(kind, cl, draw, y).estimate;
                    rec.dim_ok = 1;
                } catch (const DegenerateDraw&) {
                    rec.dim_ok = 0;
                }
            }
        }
    };

    int nw = std::max(1, std::min(threads, cell.reps));
    if (nw == 1) {
        worker(0, cell.reps);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errs(nw);
        int chunk = (cell.reps + nw - 1) / nw;
        for (int t = 0; t < nw; ++t) {
            int lo = t * chunk, hi = std::min(cell.reps, lo + chunk);
            pool.emplace_back([&, t, lo, hi] {
                try {
                    worker(lo, hi);
                } catch (...) {
                    errs[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errs)
            if (e) std::rethrow_exception(e);
    }

    CellReport rep;
    rep.dgp = g;
    rep.reps = cell.reps;
    rep.k = k;
    rep.r_n = r_n;
    for (std::size_t qi = 0; qi < kKinds.size(); ++qi) {
        CellEstimandStats& st = rep.stats[qi];
        st.kind = kKinds[qi];
        std::vector<double> th, diffs, ses, tstars, thp, dimdiffs;
        double min_s2 = std::numeric_limits<double>::infinity();
        int ncover = 0;
        for (int r = 0; r < cell.reps; ++r) {
            const RepRec& rec = slots[r][qi];
            if (rec.ok) {
                th.push_back(rec.th);
                diffs.push_back(rec.th - rec.tstar);
                ses.push_back(rec.se);
                tstars.push_back(rec.tstar);
                min_s2 = std::min(min_s2, rec.sigma2);
                ncover += rec.cover;
                st.negative_sigma1 += rec.neg1;
            } else {
                ++st.degenerate;
            }
            if (rec.dim_ok) {
                thp.push_back(rec.thp);
                dimdiffs.push_back(rec.thp - rec.tstar);
            } else {
                ++st.dim_degenerate;
            }
        }
        st.used_reps = static_cast<int>(th.size());
        st.dim_reps = static_cast<int>(thp.size());
        st.bias_hajek = mean_of(diffs);
        st.bias_dim = mean_of(dimdiffs);
        st.coverage = st.used_reps ? static_cast<double>(ncover) / st.used_reps : 0.0;
        st.mean_se = mean_of(ses);
        st.sd_hajek = sd_of(th);
        st.sd_dim = sd_of(thp);
        st.mean_hajek = mean_of(th);
        st.mean_true = mean_of(tstars);
        st.min_sigma2 = st.used_reps ? min_s2 : 0.0;
        if (2 * st.degenerate > cell.reps) rep.invalid = true;
    }
    return rep;
}

} // namespace

SimulationReport run_monte_carlo(const std::vector<SimulationCell>& cells, std::uint64_t seed,
                                 int threads) {
    if (cells.empty()) throw std::invalid_argument("run_monte_carlo: no cells");
    for (const auto& c : cells)
        if (c.reps < 1) throw std::invalid_argument("run_monte_carlo: reps must be >= 1");
    SimulationReport report;
    report.seed = seed;
    report.cells.reserve(cells.size());
    for (std::size_t ci = 0; ci < cells.size(); ++ci)
        report.cells.push_back(run_cell(cells[ci], ci, seed, threads));
    return report;
}

VariogramResult variogram_gamma(const PointSet& ps, const Clustering& c,
                                const VariogramConfig& cfg, std::uint64_t seed,
                                const MeasuredOutcomeFn& outcome_fn) {
    if (cfg.T < 3) throw std::invalid_argument("variogram_gamma: need T >= 3 arms");
    if (cfg.reps < 1) throw std::invalid_argument("variogram_gamma: reps must be >= 1");
    if (!(cfg.width > 0.0)) throw std::invalid_argument("variogram_gamma: width must be positive");
    int n = c.n();
    int k = c.k();
    std::vector<double> dmed(n);
    for (int i = 0; i < n; ++i) dmed[i] = ps.distance(i, c.medoids[c.assignment[i]]);

    // Eligibility is a property of the geometry alone: every ring 1..T must
    // have at least one member, otherwise the cluster's arm draws would be
    // confounded with its size.
    std::vector<char> ring_ok(static_cast<std::size_t>(k) * cfg.T, 0);
    for (int i = 0; i < n; ++i) {
        int j = c.assignment[i];
        for (int t = 1; t <= cfg.T; ++t)
            if (dmed[i] > t * cfg.width && dmed[i] <= (t + 1) * cfg.width)
                ring_ok[static_cast<std::size_t>(j) * cfg.T + (t - 1)] = 1;
    }
    std::vector<char> eligible(k, 1);
    int n_elig = 0;
    for (int j = 0; j < k; ++j) {
        for (int t = 0; t < cfg.T; ++t)
            if (!ring_ok[static_cast<std::size_t>(j) * cfg.T + t]) eligible[j] = 0;
        n_elig += eligible[j];
    }
    std::vector<int> measured;
    for (int i = 0; i < n; ++i)
        if (eligible[c.assignment[i]] && dmed[i] <= cfg.width) measured.push_back(i);
    if (static_cast<int>(measured.size()) < cfg.min_measured)
        throw VariogramError("variogram_gamma: only " + std::to_string(measured.size()) +
                                 " measured units; need more clusters or a wider ring",
                             {});

    std::vector<double> sums(cfg.T + 1, 0.0), cnts(cfg.T + 1, 0.0);
    for (int r = 0; r < cfg.reps; ++r) {
        RngStream rarm(seed, 0, static_cast<std::uint64_t>(r), TAG_VARIO_ARMS);
        GammaDesign gd = variogram_design(ps, c, cfg.T, cfg.width, rarm);
        std::vector<std::uint8_t> d = gd.treatment_vector(n);
        RngStream rnoise(seed, 0, static_cast<std::uint64_t>(r), TAG_VARIO_NOISE);
        std::vector<double> ym = outcome_fn(d, measured, rnoise);
        if (ym.size() != measured.size())
            throw std::invalid_argument("variogram_gamma: outcome_fn returned wrong length");
        for (std::size_t idx = 0; idx < measured.size(); ++idx) {
            int t = gd.arms[c.assignment[measured[idx]]];
            sums[t] += ym[idx];
            cnts[t] += 1.0;
        }
    }

    double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> theta(cfg.T, nan);
    if (cnts[0] > 0.0) {
        double base = sums[0] / cnts[0];
        for (int t = 1; t <= cfg.T; ++t)
            if (cnts[t] > 0.0) theta[t - 1] = sums[t] / cnts[t] - base;
    }
    std::vector<double> lx, ly;
    for (int t = 1; t <= cfg.T; ++t)
        if (std::isfinite(theta[t - 1]) && theta[t - 1] > 0.0) {
            lx.push_back(std::log(static_cast<double>(t)));
            ly.push_back(std::log(theta[t - 1]));
        }
    if (lx.size() < 3) {
        std::ostringstream msg;
        msg << "variogram_gamma: only " << lx.size() << " positive arm contrasts (theta =";
        for (double v : theta) msg << " " << v;
        msg << "); cannot fit a slope";
        throw VariogramError(msg.str(), theta);
    }
    double mx = mean_of(lx), my = mean_of(ly);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    VariogramResult res;
    res.gamma_hat = -sxy / sxx;
    res.theta = theta;
    res.counts = cnts;
    res.positive_arms = static_cast<int>(lx.size());
    res.eligible_clusters = n_elig;
    res.measured_units = static_cast<int>(measured.size());
    return res;
}

VariogramResult variogram_gamma_ma(int n, double alpha_n, const VariogramConfig& cfg,
                                   std::uint64_t seed, int threads) {
    RngStream rloc(seed, 0, 0, TAG_LOCATIONS);
    PointSet ps = gen_locations(n, alpha_n, rloc);
    int k = static_cast<int>(std::llround(std::pow(static_cast<double>(n), 2.0 / 3.0)));
    Clustering cl = k_medoids(ps, k, RngStream(seed, 0, 0, TAG_CLUSTER).next_u64(), threads);
    ModelContext ctx = ModelContext::build(ps, Model::MovingAverage, false);
    auto fn = [&ctx, n](const std::vector<std::uint8_t>& d, const std::vector<int>& measured,
                        RngStream& rng) {
        NoiseDraw noise = shared_noise(ctx, rng);
        std::vector<double> b(n);
        for (int i = 0; i < n; ++i)
            b[i] = kIntercept + (d[i] ? noise.beta_raw[i] : 0.0) + noise.eps_raw[i];
        std::vector<double> out(measured.size());
        for (std::size_t idx = 0; idx < measured.size(); ++idx) {
            const double* row = ctx.w.data() + static_cast<std::size_t>(measured[idx]) * n;
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += row[j] * b[j];
            out[idx] = s;
        }
        return out;
    };
    return variogram_gamma(ps, cl, cfg, seed, fn);
}

} // namespace geocluster
