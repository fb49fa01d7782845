// geocluster: command-line front end for the clustered-experiment library.
//
// Subcommands mirror the workflow: plan-k -> cluster -> assign -> estimate,
// plus the simulation harness and the causal-variogram experiment. Every
// artifact embeds a manifest (inputs with digests, resolved flags, seed) so a
// rerun with the same manifest is byte-identical.
//
// Exit codes: 0 success, 2 validation or I/O error, 3 degenerate draw or
// failed variogram fit.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <json.hpp>

#include "geocluster/clustering.hpp"
#include "geocluster/design.hpp"
#include "geocluster/errors.hpp"
#include "geocluster/estimators.hpp"
#include "geocluster/geometry.hpp"
#include "geocluster/inference.hpp"
#include "geocluster/io.hpp"
#include "geocluster/simulation.hpp"

using nlohmann::json;
using namespace geocluster;

namespace {

constexpr const char* kVersion = "0.1.0";

// Flags shared by every subcommand. The timestamp is an explicit input, not a
// clock read, so identical invocations produce identical artifacts; pass a
// real time if you want one recorded.
struct Common {
    int threads = 1;
    std::string timestamp = "1970-01-01T00:00:00Z";
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--threads", c.threads, "worker threads")
        ->default_val(1)
        ->check(CLI::PositiveNumber);
    sub->add_option("--timestamp", c.timestamp, "timestamp recorded in the manifest");
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot write file");
    out << text;
    if (!out) throw std::runtime_error(path + ": write failed");
}

json parse_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open file");
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error(path + ": invalid JSON");
    return j;
}

Manifest make_manifest(const std::string& sub, const Common& common, bool has_seed,
                       std::uint64_t seed, const std::vector<std::string>& inputs,
                       const json& config) {
    Manifest m;
    m.subcommand = sub;
    m.version = kVersion;
    m.timestamp = common.timestamp;
    m.has_seed = has_seed;
    m.seed = seed;
    for (const auto& p : inputs) m.inputs.emplace_back(p, file_digest_hex(p));
    m.config_json = config.dump();
    return m;
}

PointSet scale_points(const PointSet& ps, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("--scale must be positive");
    if (scale == 1.0) return ps;
    std::vector<double> coords = ps.coords();
    for (double& c : coords) c *= scale;
    return PointSet(std::move(coords), ps.dim(), ps.metric());
}

// ---------------------------------------------------------------- plan-k ---

struct PlanKArgs {
    double volume = 0;
    long long n = 0;
    double gamma = 0;
    int dim = 2;
};

int run_plan_k(const PlanKArgs& a) {
    std::cout << plan_k(a.volume, a.n, a.gamma, a.dim) << "\n";
    return 0;
}

// --------------------------------------------------------------- cluster ---

struct ClusterArgs {
    std::string points, out;
    int k = 0;
    std::uint64_t seed = 0;
    std::string metric = "euclidean";
    double scale = 1.0;
    double rn_multiplier = 0.5;
    long long max_swaps = -1;
};

int run_cluster(const ClusterArgs& a, const Common& common) {
    PointsFile pf = read_points(a.points, metric_from_string(a.metric));
    PointSet ps = scale_points(pf.points, a.scale);
    Clustering c = k_medoids(ps, a.k, a.seed, common.threads, a.max_swaps);
    double r_n = exclusion_radius(c, a.rn_multiplier);
    json cfg = {{"points", a.points},       {"k", a.k},
                {"metric", a.metric},       {"scale", a.scale},
                {"rn_multiplier", a.rn_multiplier}, {"max_swaps", a.max_swaps},
                {"threads", common.threads}};
    Manifest m = make_manifest("cluster", common, true, a.seed, {a.points}, cfg);
    write_clustering_json(a.out, c, m, r_n);
    std::cout << "clustered n=" << c.n() << " into k=" << c.k() << " (cost " << fmt(c.cost)
              << ", r_n " << fmt(r_n) << ") -> " << a.out << "\n";
    return 0;
}

// ---------------------------------------------------------------- assign ---

struct AssignArgs {
    std::string clusters, out;
    double p = 0.7, q = 0.6;
    std::uint64_t seed = 0;
};

int run_assign(const AssignArgs& a, const Common& common) {
    Clustering c = read_clustering_json(a.clusters);
    DesignParams params{a.p, a.q, c.k(), a.seed};
    RngStream rng(a.seed, 0, 0, TAG_ASSIGN);
    AssignmentDraw draw = draw_assignment(c, params, rng);
    json cfg = {{"clusters", a.clusters}, {"p", a.p}, {"q", a.q}};
    Manifest m = make_manifest("assign", common, true, a.seed, {a.clusters}, cfg);
    write_draw_json(a.out, draw, m);
    int wsum = 0, dsum = 0;
    for (auto w : draw.W) wsum += w;
    for (auto d : draw.D) dsum += d;
    std::cout << "treated " << wsum << "/" << c.k() << " clusters, " << dsum << "/" << c.n()
              << " units -> " << a.out << "\n";
    return 0;
}

// -------------------------------------------------------------- estimate ---

struct EstimateArgs {
    std::string points, clusters, draw, outcomes, out;
    std::string estimand = "all";
    std::string metric = "euclidean";
    double scale = 1.0;
    double p = 0.7, q = 0.6;
    double rn_multiplier = 0.5;
    double rn_override = -1.0;
    double smoothness_c = 0.0;
    double gamma_decay = 2.0;
    bool strict_paper = false;
};

int run_estimate(const EstimateArgs& a, const Common& common) {
    PointsFile pf = read_points(a.points, metric_from_string(a.metric));
    PointSet ps = scale_points(pf.points, a.scale);
    Clustering c = read_clustering_json(a.clusters);
    AssignmentDraw draw = read_draw_json(a.draw);
    if (c.n() != ps.size())
        throw std::invalid_argument("clusters file is for n=" + std::to_string(c.n()) +
                                    " units but points file has " + std::to_string(ps.size()));
    if (static_cast<int>(draw.D.size()) != ps.size() ||
        static_cast<int>(draw.W.size()) != c.k())
        throw std::invalid_argument("draw file does not match the clustering dimensions");
    std::vector<double> y = read_outcomes_csv(a.outcomes, pf.ids);

    double r_n = a.rn_override >= 0.0 ? a.rn_override : exclusion_radius(c, a.rn_multiplier);
    Surround s = build_surround(ps, c, r_n);
    DependencyStructure deps = lambda_sets(s, c.k());

    std::vector<EstimandKind> kinds;
    if (a.estimand == "all")
        kinds = {EstimandKind::Direct, EstimandKind::Indirect, EstimandKind::Total,
                 EstimandKind::Overall};
    else
        kinds = {estimand_from_string(a.estimand)};

    json entries = json::array();
    int estimated = 0;
    for (EstimandKind kind : kinds) {
        json e;
        e["estimand"] = to_string(kind);
        e["dropped_reason"] = nullptr;
        try {
            UnitPanel panel = build_panel(kind, s, draw, a.p, a.q);
            EstimateReport est = hajek(panel, y);
            VarianceReport var = variance(panel, y, est, deps, c);
            ConfidenceInterval ci = ci_undersmoothed(est.estimate, var);
            e["theta_hat"] = est.estimate;
            e["mu1"] = est.mu1;
            e["mu0"] = est.mu0;
            e["n1"] = est.n1;
            e["n0"] = est.n0;
            e["sigma2_1"] = var.sigma2_lambda;
            e["sigma2_2"] = var.sigma2_cluster;
            e["sigma2"] = var.sigma2;
            e["se"] = var.se();
            if (a.smoothness_c > 0.0) {
                ConfidenceInterval ba =
                    ci_bias_aware(est.estimate, var, a.smoothness_c, a.gamma_decay, r_n);
                e["ci_low"] = ba.lo;
                e["ci_high"] = ba.hi;
                e["ci_kind"] = "bias-aware";
                e["ci_undersmoothed"] = {{"low", ci.lo}, {"high", ci.hi}};
                if (a.strict_paper) {
                    ConfidenceInterval bp = ci_bias_aware(est.estimate, var, a.smoothness_c,
                                                          a.gamma_decay, r_n, true);
                    e["ci_paper_scale"] = {{"low", bp.lo}, {"high", bp.hi}};
                }
            } else {
                e["ci_low"] = ci.lo;
                e["ci_high"] = ci.hi;
                e["ci_kind"] = "undersmoothed";
            }
            try {
                e["theta_hat_plus"] = diff_in_means(kind, c, draw, y).estimate;
            } catch (const DegenerateDraw&) {
                e["theta_hat_plus"] = nullptr;
            }
            ++estimated;
            std::cout << to_string(kind) << ": theta_hat=" << fmt(est.estimate)
                      << " se=" << fmt(var.se()) << " ci=[" << fmt(e["ci_low"].get<double>())
                      << ", " << fmt(e["ci_high"].get<double>()) << "]\n";
        } catch (const DegenerateDraw& ex) {
            e["dropped_reason"] = ex.what();
            e["dropped_arm"] = ex.arm();
            std::cout << to_string(kind) << ": dropped (" << ex.what() << ")\n";
        }
        entries.push_back(e);
    }

    json cfg = {{"points", a.points},
                {"clusters", a.clusters},
                {"draw", a.draw},
                {"outcomes", a.outcomes},
                {"estimand", a.estimand},
                {"metric", a.metric},
                {"scale", a.scale},
                {"p", a.p},
                {"q", a.q},
                {"rn_multiplier", a.rn_multiplier},
                {"rn", a.rn_override},
                {"smoothness_c", a.smoothness_c},
                {"gamma_decay", a.gamma_decay},
                {"strict_paper", a.strict_paper}};
    Manifest m = make_manifest("estimate", common, false, 0,
                               {a.points, a.clusters, a.draw, a.outcomes}, cfg);
    json report;
    report["schema"] = 1;
    report["type"] = "estimates";
    report["manifest"] = json::parse(render_manifest_json(m));
    report["n"] = ps.size();
    report["k"] = c.k();
    report["r_n"] = r_n;
    report["estimates"] = entries;
    write_text(a.out, report.dump(2) + "\n");
    if (estimated == 0)
        throw DegenerateDraw(0, "no estimand could be computed for this draw (see " + a.out + ")");
    return 0;
}

// -------------------------------------------------------------- simulate ---

struct SimulateArgs {
    std::string config, out, json_out;
    std::uint64_t seed = 0;
};

std::vector<SimulationCell> parse_sim_config(const std::string& path, json& resolved) {
    json j = parse_json_file(path);
    if (!j.is_object() || !j.contains("cells") || !j["cells"].is_array() || j["cells"].empty())
        throw std::runtime_error(path + ": config must be an object with a non-empty \"cells\" array");
    for (const auto& [key, val] : j.items()) {
        (void)val;
        if (key != "cells") throw std::runtime_error(path + ": unknown key \"" + key + "\"");
    }
    static const std::set<std::string> allowed = {"model", "n",           "alpha_n", "p",
                                                  "q",     "gamma_tilde", "reps"};
    std::vector<SimulationCell> cells;
    resolved = json::array();
    for (const auto& jc : j["cells"]) {
        if (!jc.is_object() || !jc.contains("model"))
            throw std::runtime_error(path + ": each cell must be an object with a \"model\"");
        for (const auto& [key, val] : jc.items()) {
            (void)val;
            if (!allowed.count(key))
                throw std::runtime_error(path + ": unknown cell key \"" + key + "\"");
        }
        SimulationCell cell;
        cell.dgp.model = model_from_string(jc["model"].get<std::string>());
        cell.dgp.n = jc.value("n", 1000);
        cell.dgp.alpha_n = jc.value("alpha_n", 1.0);
        cell.dgp.p = jc.value("p", 0.7);
        cell.dgp.q = jc.value("q", 0.6);
        cell.dgp.gamma_tilde = jc.value("gamma_tilde", 2.0);
        cell.reps = jc.value("reps", 1000);
        if (cell.dgp.n < 1) throw std::runtime_error(path + ": cell n must be >= 1");
        if (!(cell.dgp.alpha_n > 0.0) || cell.dgp.alpha_n > 1.0)
            throw std::runtime_error(path + ": cell alpha_n must lie in (0, 1]");
        if (!(cell.dgp.p > 0.0) || !(cell.dgp.p < 1.0) || !(cell.dgp.q > 0.0) ||
            !(cell.dgp.q < 1.0))
            throw std::runtime_error(path + ": cell p and q must lie in (0, 1)");
        if (cell.reps < 1) throw std::runtime_error(path + ": cell reps must be >= 1");
        cells.push_back(cell);
        resolved.push_back({{"model", to_string(cell.dgp.model)},
                            {"n", cell.dgp.n},
                            {"alpha_n", cell.dgp.alpha_n},
                            {"p", cell.dgp.p},
                            {"q", cell.dgp.q},
                            {"gamma_tilde", cell.dgp.gamma_tilde},
                            {"reps", cell.reps}});
    }
    return cells;
}

int run_simulate(const SimulateArgs& a, const Common& common) {
    json resolved_cells;
    std::vector<SimulationCell> cells = parse_sim_config(a.config, resolved_cells);
    SimulationReport rep = run_monte_carlo(cells, a.seed, common.threads);

    json cfg = {{"config", a.config}, {"cells", resolved_cells}, {"threads", common.threads}};
    Manifest m = make_manifest("simulate", common, true, a.seed, {a.config}, cfg);

    std::ostringstream csv;
    csv << "# manifest: " << render_manifest_json(m) << "\n";
    csv << "model,n,alpha_n,p,q,gamma_tilde,reps,k,r_n,invalid,estimand,theta_true,theta_hat,"
           "bias_hajek,bias_dim,sd_hajek,sd_dim,mean_se,coverage,used_reps,dim_reps,"
           "degenerate,dim_degenerate,negative_sigma1,min_sigma2\n";
    for (const auto& cell : rep.cells) {
        for (const auto& st : cell.stats) {
            csv << to_string(cell.dgp.model) << ',' << cell.dgp.n << ',' << fmt(cell.dgp.alpha_n)
                << ',' << fmt(cell.dgp.p) << ',' << fmt(cell.dgp.q) << ','
                << fmt(cell.dgp.gamma_tilde) << ',' << cell.reps << ',' << cell.k << ','
                << fmt(cell.r_n) << ',' << (cell.invalid ? 1 : 0) << ',' << to_string(st.kind)
                << ',' << fmt(st.mean_true) << ',' << fmt(st.mean_hajek) << ','
                << fmt(st.bias_hajek) << ',' << fmt(st.bias_dim) << ',' << fmt(st.sd_hajek) << ','
                << fmt(st.sd_dim) << ',' << fmt(st.mean_se) << ',' << fmt(st.coverage) << ','
                << st.used_reps << ',' << st.dim_reps << ',' << st.degenerate << ','
                << st.dim_degenerate << ',' << st.negative_sigma1 << ',' << fmt(st.min_sigma2)
                << "\n";
        }
        std::cout << to_string(cell.dgp.model) << " n=" << cell.dgp.n
                  << " alpha_n=" << fmt(cell.dgp.alpha_n) << ": k=" << cell.k
                  << " r_n=" << fmt(cell.r_n) << (cell.invalid ? " INVALID" : "") << "\n";
    }
    write_text(a.out, csv.str());

    if (!a.json_out.empty()) {
        json jr;
        jr["schema"] = 1;
        jr["type"] = "simulation";
        jr["manifest"] = json::parse(render_manifest_json(m));
        json jcells = json::array();
        for (const auto& cell : rep.cells) {
            json jc;
            jc["model"] = to_string(cell.dgp.model);
            jc["n"] = cell.dgp.n;
            jc["alpha_n"] = cell.dgp.alpha_n;
            jc["p"] = cell.dgp.p;
            jc["q"] = cell.dgp.q;
            jc["gamma_tilde"] = cell.dgp.gamma_tilde;
            jc["reps"] = cell.reps;
            jc["k"] = cell.k;
            jc["r_n"] = cell.r_n;
            jc["invalid"] = cell.invalid;
            json jstats = json::array();
            for (const auto& st : cell.stats) {
                jstats.push_back({{"estimand", to_string(st.kind)},
                                  {"theta_true", st.mean_true},
                                  {"theta_hat", st.mean_hajek},
                                  {"bias_hajek", st.bias_hajek},
                                  {"bias_dim", st.bias_dim},
                                  {"sd_hajek", st.sd_hajek},
                                  {"sd_dim", st.sd_dim},
                                  {"mean_se", st.mean_se},
                                  {"coverage", st.coverage},
                                  {"used_reps", st.used_reps},
                                  {"dim_reps", st.dim_reps},
                                  {"degenerate", st.degenerate},
                                  {"dim_degenerate", st.dim_degenerate},
                                  {"negative_sigma1", st.negative_sigma1},
                                  {"min_sigma2", st.min_sigma2}});
            }
            jc["stats"] = jstats;
            jcells.push_back(jc);
        }
        jr["cells"] = jcells;
        write_text(a.json_out, jr.dump(2) + "\n");
    }
    return 0;
}

// ------------------------------------------------------------- variogram ---

struct VariogramArgs {
    std::string model = "ma";
    int n = 1000;
    double alpha = 1.0;
    int T = 3;
    double width = 0.6;
    int reps = 500;
    int min_measured = 10;
    std::uint64_t seed = 0;
    std::string out;
};

int run_variogram(const VariogramArgs& a, const Common& common) {
    if (model_from_string(a.model) != Model::MovingAverage)
        throw std::invalid_argument(
            "only the moving-average model ships with a measured-outcome oracle; use --model ma");
    VariogramConfig cfg;
    cfg.T = a.T;
    cfg.width = a.width;
    cfg.reps = a.reps;
    cfg.min_measured = a.min_measured;
    VariogramResult res = variogram_gamma_ma(a.n, a.alpha, cfg, a.seed, common.threads);

    std::cout << "gamma_hat = " << fmt(res.gamma_hat) << " (" << res.positive_arms << "/" << a.T
              << " positive arms, " << res.eligible_clusters << " eligible clusters, "
              << res.measured_units << " measured units)\n";
    std::cout << "theta:";
    for (double t : res.theta) std::cout << ' ' << fmt(t);
    std::cout << "\n";

    if (!a.out.empty()) {
        json cfgj = {{"model", a.model},       {"n", a.n},
                     {"alpha", a.alpha},       {"T", a.T},
                     {"width", a.width},       {"reps", a.reps},
                     {"min_measured", a.min_measured}, {"threads", common.threads}};
        Manifest m = make_manifest("variogram", common, true, a.seed, {}, cfgj);
        json jr;
        jr["schema"] = 1;
        jr["type"] = "variogram";
        jr["manifest"] = json::parse(render_manifest_json(m));
        jr["gamma_hat"] = res.gamma_hat;
        jr["theta"] = res.theta;
        jr["counts"] = res.counts;
        jr["positive_arms"] = res.positive_arms;
        jr["eligible_clusters"] = res.eligible_clusters;
        jr["measured_units"] = res.measured_units;
        write_text(a.out, jr.dump(2) + "\n");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"geocluster: design and analysis of geographically clustered experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    PlanKArgs pk;
    Common pk_common;
    auto* c_plank = app.add_subcommand("plan-k", "choose the number of clusters");
    c_plank->add_option("--volume", pk.volume, "region volume")->required();
    c_plank->add_option("--n", pk.n, "number of units")->required();
    c_plank->add_option("--gamma", pk.gamma, "interference decay exponent guess")->required();
    c_plank->add_option("--dim", pk.dim, "spatial dimension")->default_val(2);
    add_common(c_plank, pk_common);

    ClusterArgs cl;
    Common cl_common;
    auto* c_cluster = app.add_subcommand("cluster", "k-medoids clustering of unit locations");
    c_cluster->add_option("--points", cl.points, "points file (.csv or .json)")
        ->required()
        ->check(CLI::ExistingFile);
    c_cluster->add_option("--k", cl.k, "number of clusters")->required();
    c_cluster->add_option("--seed", cl.seed, "seed for initialization tie-breaks");
    c_cluster->add_option("--metric", cl.metric, "euclidean or chebyshev")
        ->default_val("euclidean");
    c_cluster->add_option("--scale", cl.scale,
                          "multiply all coordinates by this factor before clustering");
    c_cluster->add_option("--rn-multiplier", cl.rn_multiplier,
                          "exclusion radius as a multiple of the median cluster radius")
        ->default_val(0.5);
    c_cluster->add_option("--max-swaps", cl.max_swaps, "swap cap (-1 for the default 10*k*n)");
    c_cluster->add_option("--out", cl.out, "output clusters.json")->required();
    add_common(c_cluster, cl_common);

    AssignArgs as;
    Common as_common;
    auto* c_assign = app.add_subcommand("assign", "draw a two-stage treatment assignment");
    c_assign->add_option("--clusters", as.clusters, "clusters.json from `cluster`")
        ->required()
        ->check(CLI::ExistingFile);
    c_assign->add_option("--p", as.p, "unit treatment probability in treated clusters")
        ->default_val(0.7);
    c_assign->add_option("--q", as.q, "cluster treatment probability")->default_val(0.6);
    c_assign->add_option("--seed", as.seed, "rng seed")->required();
    c_assign->add_option("--out", as.out, "output draw.json")->required();
    add_common(c_assign, as_common);

    EstimateArgs es;
    Common es_common;
    auto* c_estimate = app.add_subcommand("estimate", "bias-reduced Hajek estimates with CIs");
    c_estimate->add_option("--points", es.points, "points file (.csv or .json)")
        ->required()
        ->check(CLI::ExistingFile);
    c_estimate->add_option("--clusters", es.clusters, "clusters.json")
        ->required()
        ->check(CLI::ExistingFile);
    c_estimate->add_option("--draw", es.draw, "draw.json from `assign`")
        ->required()
        ->check(CLI::ExistingFile);
    c_estimate->add_option("--outcomes", es.outcomes, "outcomes csv (id,y)")
        ->required()
        ->check(CLI::ExistingFile);
    c_estimate->add_option("--estimand", es.estimand,
                           "all, direct, indirect, total, or overall")
        ->default_val("all");
    c_estimate->add_option("--metric", es.metric, "euclidean or chebyshev")
        ->default_val("euclidean");
    c_estimate->add_option("--scale", es.scale,
                           "multiply all coordinates by this factor (must match `cluster`)");
    c_estimate->add_option("--p", es.p, "unit treatment probability used by the draw")
        ->default_val(0.7);
    c_estimate->add_option("--q", es.q, "cluster treatment probability used by the draw")
        ->default_val(0.6);
    c_estimate->add_option("--rn-multiplier", es.rn_multiplier,
                           "exclusion radius as a multiple of the median cluster radius")
        ->default_val(0.5);
    c_estimate->add_option("--rn", es.rn_override, "absolute exclusion radius override");
    c_estimate->add_option("--smoothness-c", es.smoothness_c,
                           "worst-case bias constant; enables the bias-aware CI");
    c_estimate->add_option("--gamma-decay", es.gamma_decay,
                           "interference decay exponent for the bias bound")
        ->default_val(2.0);
    c_estimate->add_flag("--strict-paper", es.strict_paper,
                         "also emit the sqrt(k)-scaled bias-aware interval");
    c_estimate->add_option("--out", es.out, "output report.json")->required();
    add_common(c_estimate, es_common);

    SimulateArgs si;
    Common si_common;
    auto* c_simulate = app.add_subcommand("simulate", "Monte Carlo study over simulation cells");
    c_simulate->add_option("--config", si.config, "cell grid (JSON; see docs for the shape)")
        ->required()
        ->check(CLI::ExistingFile);
    c_simulate->add_option("--seed", si.seed, "rng seed")->required();
    c_simulate->add_option("--out", si.out, "output csv, one row per cell and estimand")
        ->required();
    c_simulate->add_option("--json", si.json_out, "also write a JSON report here");
    add_common(c_simulate, si_common);

    VariogramArgs va;
    Common va_common;
    auto* c_variogram = app.add_subcommand("variogram", "causal-variogram decay estimate");
    c_variogram->add_option("--model", va.model, "outcome model (only \"ma\" is bundled)")
        ->default_val("ma");
    c_variogram->add_option("--n", va.n, "number of units")->required();
    c_variogram->add_option("--alpha", va.alpha, "density parameter alpha_n")->default_val(1.0);
    c_variogram->add_option("--T", va.T, "number of ring arms")->default_val(3);
    c_variogram->add_option("--width", va.width,
                            "ring width; also the measurement radius around each medoid")
        ->default_val(0.6);
    c_variogram->add_option("--reps", va.reps, "replications")->default_val(500);
    c_variogram->add_option("--min-measured", va.min_measured,
                            "minimum pooled measured units required")
        ->default_val(10);
    c_variogram->add_option("--seed", va.seed, "rng seed")->required();
    c_variogram->add_option("--out", va.out, "optional JSON artifact");
    add_common(c_variogram, va_common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        std::cerr << "geocluster: " << e.what() << "\n";
        return 2;
    }

    try {
        if (c_plank->parsed()) return run_plan_k(pk);
        if (c_cluster->parsed()) return run_cluster(cl, cl_common);
        if (c_assign->parsed()) return run_assign(as, as_common);
        if (c_estimate->parsed()) return run_estimate(es, es_common);
        if (c_simulate->parsed()) return run_simulate(si, si_common);
        if (c_variogram->parsed()) return run_variogram(va, va_common);
    } catch (const DegenerateDraw& e) {
        std::cerr << "geocluster: degenerate draw: " << e.what() << "\n";
        return 3;
    } catch (const VariogramError& e) {
        std::cerr << "geocluster: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "geocluster: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
