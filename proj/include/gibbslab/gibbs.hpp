#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "gibbslab/kernels.hpp"
#include "gibbslab/potential.hpp"
#include "gibbslab/transfer.hpp"

namespace gibbslab {

/// Stationary Markov measure on ℓ-blocks of a shift space. Cylinder values are
/// always derived from (π, Q), never tabulated.
struct MarkovMeasure {
    ShiftSpace space;
    MarkovChain chain;

    int block_length() const noexcept { return chain.block_length(); }

    /// Same measure presented on L-blocks, L ≥ block_length().
    MarkovMeasure with_block_length(int block_length) const;
};

/// Markov measure from an explicit (π, Q) on the ℓ-block recoding of `space`.
MarkovMeasure markov_measure(const ShiftSpace& space, int block_length, const Eigen::VectorXd& pi,
                             const Eigen::MatrixXd& q);

/// i.i.d. measure with the given symbol probabilities.
MarkovMeasure product_measure(const ShiftSpace& space, const std::vector<double>& probs);

/// μ = hν as a Markov chain, plus the data needed by the characterization checks.
struct GibbsMeasure {
    MarkovMeasure measure;
    double pressure = 0.0;
    Eigen::VectorXd h;  // eigenfunction on the chain's blocks
    FiniteMemoryFunction source;
};

GibbsMeasure gibbs_measure(const TransferSystem& t, const EigenData& e);
GibbsMeasure gibbs_measure(const FiniteMemoryFunction& potential);

/// μ([w]); 0 for inadmissible words. Words shorter than ℓ sum over completions.
double cylinder_measure(const MarkovMeasure& mu, std::span<const Symbol> w);

/// Shift Jacobian μ([w₁…]) / μ([w]); needs |w| ≥ ℓ + 1. Throws Undefined when μ([w]) = 0.
double jacobian(const MarkovMeasure& mu, std::span<const Symbol> w);

struct JacobianCheck {
    /// max over (ℓ+1)-words of |J / (e^{P−φ} h(σ-block)/h(block)) − 1|
    double max_rel_error = 0.0;
    /// same against the literal e^{P−φ}; coincides when h is constant
    double max_rel_error_literal = 0.0;
};

/// Compares the Jacobian of `mu` with the Gibbs Jacobian of (φ, P, h) on every
/// admissible (ℓ+1)-word, ℓ taken from `g`.
JacobianCheck jacobian_identity(const MarkovMeasure& mu, const GibbsMeasure& g);

struct GibbsScanReport {
    int n_max = 0;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    double c1 = 0.0;  // e^{−2V}
    double c2 = 0.0;  // e^{2V}
    bool within_band = false;
    /// extremes identical (1e-9 relative) for n_max/2 ≤ n ≤ n_max
    bool stable_in_n = false;
    /// within_band, or V(φ) = 0 with a stable band (the literal band is then informational)
    bool pass = false;
    std::vector<double> min_by_length, max_by_length;  // index n − 1
};

/// μ([w]) / exp(−nP + S_nφ(x)) over all admissible w with |w| ≤ n_max and all
/// admissible (m−1)-symbol continuations x of w.
GibbsScanReport gibbs_ratio_scan(const MarkovMeasure& mu, const FiniteMemoryFunction& phi, double pressure, int n_max,
                                 kernels::Execution exec = kernels::Execution::Parallel);

double entropy(const MarkovMeasure& mu);
double expectation(const MarkovMeasure& mu, const FiniteMemoryFunction& psi);

/// P − h(μ) − ∫φ dμ (≥ 0, zero exactly for the equilibrium state).
double variational_defect(const MarkovMeasure& mu, const FiniteMemoryFunction& phi, double pressure);

struct WassersteinReport {
    double value = 0.0;       // lower end of the enclosing interval
    double tail_bound = 0.0;  // α^{n_max}
    int n_max = 0;
    std::vector<double> tv_by_length;
};

/// Σ_{n=1}^{n_max} (α^{n−1} − α^n) TV_n for the metric d(x,y) = α^{first disagreement}.
WassersteinReport wasserstein_distance(const MarkovMeasure& a, const MarkovMeasure& b, double alpha, int n_max,
                                       kernels::Execution exec = kernels::Execution::Parallel);

/// ψ evaluated on each block of the chain (requires block_length ≥ memory).
Eigen::VectorXd on_blocks(const MarkovMeasure& mu, const FiniteMemoryFunction& psi);

}  // namespace gibbslab
