#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "geocluster/clustering.hpp"
#include "geocluster/design.hpp"
#include "geocluster/estimators.hpp"
#include "geocluster/geometry.hpp"
#include "geocluster/rng.hpp"

namespace geocluster {

enum class Model { CliffOrd, MovingAverage };

std::string to_string(Model model);
Model model_from_string(const std::string& s);

// Sub-stream tags: every random draw in the harness comes from a stream keyed
// (seed, cell, rep, tag), so results do not depend on execution order.
enum RngTag : std::uint64_t {
    TAG_LOCATIONS = 1,
    TAG_CLUSTER = 2,
    TAG_NOISE = 3,
    TAG_ASSIGN = 4,
    TAG_VARIO_ARMS = 5,
    TAG_VARIO_NOISE = 6,
    TAG_TRUE_MC = 7,
};

struct DGPSpec {
    Model model = Model::CliffOrd;
    int n = 1000;
    double alpha_n = 1.0; // side length 2*sqrt(n*alpha_n)
    double p = 0.7;
    double q = 0.6;
    double gamma_tilde = 2.0;
};

// n iid uniform points on [-(n alpha_n)^{1/2}, (n alpha_n)^{1/2}]^2.
PointSet gen_locations(int n, double alpha_n, RngStream& rng);

// Precomputed model structure for one point set: the Cliff-Ord interaction
// matrix G (row-stochastic over neighbors within distance 1, self included)
// as adjacency lists, or the dense MA weight matrix w(rho) = max{rho,1}^{-5}.
// m_diag / m_colsum summarize the linear response M = (I - 0.8 G)^{-1}
// (Cliff-Ord) or M = W (MA) and make the true estimands exact per draw.
struct ModelContext {
    Model model = Model::CliffOrd;
    int n = 0;
    std::vector<std::vector<int>> nbr; // Cliff-Ord: ids within distance 1, incl self
    std::vector<double> invdeg;
    std::vector<double> w; // MA: dense n*n, row-major
    std::vector<double> m_diag, m_colsum;

    static ModelContext build(const PointSet& ps, Model model, bool linear_summaries = true);

    std::vector<double> apply_g(const std::vector<double>& x) const;            // G x
    std::vector<double> apply_g_transpose(const std::vector<double>& x) const;  // G' x
};

struct NoiseDraw {
    std::vector<double> beta_raw, eps_raw; // beta-tilde ~ N(1,1), eps-tilde ~ N(0,1)
    std::vector<double> beta, eps;         // convolved: x + G x (Cliff-Ord only)
};

// Draws beta-tilde then eps-tilde in unit order and applies the shared
// convolution through G. MA outcomes use the raw pair, Cliff-Ord the
// convolved one.
NoiseDraw shared_noise(const PointSet& ps, RngStream& rng);
NoiseDraw shared_noise(const ModelContext& ctx, RngStream& rng);

// Y solving Y = -1 + 0.8 G Y + D beta + eps by fixed-point iteration
// (0.8 G is a contraction); stops at max-norm 1e-10 and verifies the
// defining equation to 1e-8.
std::vector<double> cliff_ord_outcomes(const PointSet& ps, const std::vector<std::uint8_t>& d,
                                       const NoiseDraw& noise);
std::vector<double> cliff_ord_outcomes(const ModelContext& ctx, const std::vector<std::uint8_t>& d,
                                       const NoiseDraw& noise);

// Y_i = sum_j max{rho(i,j),1}^{-5} (-1 + D_j beta_raw_j + eps_raw_j).
std::vector<double> moving_average_outcomes(const PointSet& ps, const std::vector<std::uint8_t>& d,
                                            const NoiseDraw& noise);
std::vector<double> moving_average_outcomes(const ModelContext& ctx,
                                            const std::vector<std::uint8_t>& d,
                                            const NoiseDraw& noise);

// Full potential-outcome map d -> Y(d) for one replication's noise.
struct PotentialOutcomeOracle {
    int n = 0;
    std::function<std::vector<double>(const std::vector<std::uint8_t>&)> y;
};

PotentialOutcomeOracle make_oracle(const ModelContext& ctx, const NoiseDraw& noise);

struct TrueEstimands {
    double direct = 0, indirect = 0, total = 0, overall = 0;
    double se_direct = 0, se_indirect = 0, se_total = 0, se_overall = 0; // inner MC SEs
    int draws = 0; // 0 means exact evaluation

    double value(EstimandKind kind) const;
    double inner_se(EstimandKind kind) const;
};

// theta*_Q with E* under the one-treated-cluster design (all units
// D_i ~ iid Bernoulli(p)): M shared inner draws, Horvitz-Thompson splits
// E[Y_i D_i]/p and E[Y_i(1-D_i)]/(1-p), Y(0) evaluated exactly.
TrueEstimands true_estimands(const PotentialOutcomeOracle& oracle, const Clustering& c, double p,
                             int draws, RngStream& rng);

// Exact version for the linear models: theta*_D = mean(m_diag * beta),
// theta*_I = p * mean((m_colsum - m_diag) * beta), theta*_T their sum,
// theta*_O = p theta*_T + (1-p) theta*_I, with beta the convolved (Cliff-Ord)
// or raw (MA) coefficient vector.
TrueEstimands exact_true_estimands(const ModelContext& ctx, const NoiseDraw& noise, double p);

struct SimulationCell {
    DGPSpec dgp;
    int reps = 1000;
};

struct CellEstimandStats {
    EstimandKind kind = EstimandKind::Direct;
    double bias_hajek = 0, bias_dim = 0;
    double coverage = 0;
    double mean_se = 0;
    double sd_hajek = 0, sd_dim = 0;
    double mean_hajek = 0, mean_true = 0;
    int used_reps = 0, dim_reps = 0;
    int degenerate = 0, dim_degenerate = 0;
    int negative_sigma1 = 0; // draws where the overlap form went negative
    double min_sigma2 = 0;   // over draws, of the max-form estimate
};

struct CellReport {
    DGPSpec dgp;
    int reps = 0;
    int k = 0;
    double r_n = 0;
    bool invalid = false; // >50% degenerate draws for some estimand
    std::array<CellEstimandStats, 4> stats; // indexed by EstimandKind order
};

struct SimulationReport {
    std::uint64_t seed = 0;
    std::vector<CellReport> cells;
};

SimulationReport run_monte_carlo(const std::vector<SimulationCell>& cells, std::uint64_t seed,
                                 int threads = 1);

// Causal-variogram experiment. Clusters whose rings 1..T are all nonempty are
// eligible; outcomes are measured on the interior disc (rho <= width) of
// eligible clusters and pooled over replications before differencing
// against arm 0.
struct VariogramConfig {
    int T = 3;
    double width = 0.6;
    int reps = 500;
    int min_measured = 10;
};

struct VariogramResult {
    double gamma_hat = 0;
    std::vector<double> theta;  // arm-t contrast vs arm 0, t = 1..T (NaN if unseen)
    std::vector<double> counts; // pooled unit-rep counts per arm 0..T
    int positive_arms = 0;
    int eligible_clusters = 0;
    int measured_units = 0;
};

class VariogramError : public std::runtime_error {
public:
    VariogramError(const std::string& what, std::vector<double> theta)
        : std::runtime_error(what), theta_(std::move(theta)) {}
    const std::vector<double>& theta() const { return theta_; }

private:
    std::vector<double> theta_;
};

// outcome_fn(d, measured, rng) returns outcomes aligned with `measured`.
using MeasuredOutcomeFn = std::function<std::vector<double>(
    const std::vector<std::uint8_t>&, const std::vector<int>&, RngStream&)>;

VariogramResult variogram_gamma(const PointSet& ps, const Clustering& c,
                                const VariogramConfig& cfg, std::uint64_t seed,
                                const MeasuredOutcomeFn& outcome_fn);

// End-to-end MA-model run: locations, pilot clustering with
// k = round(n^{2/3}), then variogram_gamma under moving-average outcomes.
VariogramResult variogram_gamma_ma(int n, double alpha_n, const VariogramConfig& cfg,
                                   std::uint64_t seed, int threads = 1);

} // namespace geocluster
