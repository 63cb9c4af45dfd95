#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gibbslab/cone.hpp"
#include "gibbslab/potential.hpp"
#include "gibbslab/shift_space.hpp"

namespace gibbslab {

/// Finite transfer matrix of a finite-memory potential on ℓ-blocks,
/// ℓ = max(m − 1, 1).
///
/// `matrix(u, w)` = e^{φ(u₀·w)} when the block transition u → w is allowed,
/// i.e. rows index the preimage block and columns the image block. The
/// operator acting on functions of blocks is (𝓛g)(w) = Σ_u matrix(u, w) g(u),
/// so 𝓛 = matrixᵀ.
struct TransferSystem {
    BlockShift blocks;
    Eigen::MatrixXd matrix;
    FiniteMemoryFunction potential;

    int block_length() const noexcept { return blocks.block_length; }
    const std::vector<Word>& states() const noexcept { return blocks.blocks; }
    int size() const noexcept { return static_cast<int>(blocks.blocks.size()); }
};

struct EigenData {
    double lambda = 0.0;
    double pressure = 0.0;   // log λ, nats
    Eigen::VectorXd h;       // 𝓛h = λh, normalized so ν(h) = 1
    Eigen::VectorXd nu;      // 𝓛*ν = λν, Σν = 1
    double min_h = 0.0;
    double gap_ratio = 0.0;  // |λ₂| / λ
    double ess_radius_bound = 0.0;  // α·λ
    double residual_h = 0.0;   // ‖𝓛h − λh‖_∞
    double residual_nu = 0.0;  // ‖𝓛*ν − λν‖₁
    long iterations = 0;
};

struct SolverOptions {
    double tol = 1e-12;
    long max_iterations = 1'000'000;
    /// Systems up to this many states also get a full eigen-solve for the gap.
    int full_solve_limit = 64;
};

TransferSystem build_transfer(const FiniteMemoryFunction& potential);

/// Power iteration on 𝓛 and 𝓛* from the all-ones vector; fills the gap via spectral_gap.
EigenData dominant_eigendata(const TransferSystem& t, const SolverOptions& opts = {});

struct GapEstimate {
    double gamma = 0.0;
    std::optional<double> deflation;   // power iteration on 𝓛 − λ h νᵀ
    std::optional<double> full_solve;  // all eigenvalues of the (small) matrix
    std::string method;
};

/// |second eigenvalue| / λ. Uses the full solve when the system is small and
/// cross-checks it against deflation.
GapEstimate spectral_gap(const TransferSystem& t, const EigenData& e, const SolverOptions& opts = {});

/// (1/n) log Σ_{w ∈ W_n} exp(max over continuations of S_nφ on [w]).
double pressure_via_partition(const FiniteMemoryFunction& potential, int n);

/// Row-stochastic forward kernel of the Gibbs chain on blocks and its
/// stationary law π = hν.
struct MarkovChain {
    BlockShift blocks;
    Eigen::VectorXd pi;
    Eigen::MatrixXd q;

    int size() const noexcept { return static_cast<int>(blocks.blocks.size()); }
    int block_length() const noexcept { return blocks.block_length; }
};

MarkovChain normalized_operator(const TransferSystem& t, const EigenData& e);

struct ConstantsReport {
    std::vector<double> b_m;      // B_m, m = 0..memory
    double b0_geometric = 0.0;    // exp(2bα/(1−α)), b = Hölder seminorm
    double holder_b = 0.0;
    double k_cone = 0.0;          // λ^M e^{M‖φ‖∞} B₀
    double ess_radius_bound = 0.0;
    double gibbs_c1_variation = 0.0, gibbs_c2_variation = 0.0;  // e^{∓2V}
    double norm_f = 0.0;                                          // ‖φ‖∞ + V
    double gibbs_c1_norm = 0.0, gibbs_c2_norm = 0.0;              // e^{∓2‖φ‖_F}
    ConeConstants cone;
    // η, γ and C need constants that are not computable from the data alone.
    std::vector<std::string> not_computed{"eta", "gamma_bound", "convergence_constant"};
};

ConstantsReport constants_report(const FiniteMemoryFunction& potential, double alpha, const EigenData& e);

/// Build + solve in one step.
struct SolvedSystem {
    TransferSystem transfer;
    EigenData eigen;
};
SolvedSystem solve(const FiniteMemoryFunction& potential, const SolverOptions& opts = {});

}  // namespace gibbslab
