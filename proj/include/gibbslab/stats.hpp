#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "gibbslab/gibbs.hpp"
#include "gibbslab/kernels.hpp"
#include "gibbslab/potential.hpp"
#include "gibbslab/transfer.hpp"

namespace gibbslab {

/// E[f·(g∘σⁿ)] − E[f]E[g] by pushing the f-weighted law n steps through Q.
double correlation(const MarkovMeasure& mu, const FiniteMemoryFunction& f, const FiniteMemoryFunction& g, int n);

struct VarianceReport {
    double value = 0.0;  // resolvent result
    double green_kubo = 0.0;
    double resolvent = 0.0;
    double variance = 0.0;  // Var(ψ) under μ
    int terms = 0;          // correlation terms summed by Green–Kubo
};

/// ξ² two ways. Throws SolveFailure when (I − Q + 1πᵀ) is singular or the
/// two methods disagree by more than 1e-9·max(1, ξ²).
VarianceReport asymptotic_variance(const MarkovMeasure& mu, const FiniteMemoryFunction& psi);

/// Var(S_nψ) = Σ_{|k|<n} (n − |k|) C_k from the correlation engine.
double finite_variance(const MarkovMeasure& mu, const FiniteMemoryFunction& psi, int n);

struct CohomologyReport {
    bool degenerate = false;
    double mean = 0.0;
    double max_defect = 0.0;  // worst chord of the spanning-tree assignment
    std::vector<Word> blocks;  // states of the witness
    Eigen::VectorXd witness;  // ψ − mean = u − u∘σ, u(first block) = 0
};

CohomologyReport cohomology_check(const MarkovMeasure& mu, const FiniteMemoryFunction& psi, double tol = 1e-9);

/// Λ(s) = P(φ + sψ) − P(φ) with eigendata cached per s. Thread-safe.
class Cumulant {
public:
    Cumulant(FiniteMemoryFunction phi, FiniteMemoryFunction psi, SolverOptions opts = {});

    const FiniteMemoryFunction& phi() const noexcept { return phi_; }
    const FiniteMemoryFunction& psi() const noexcept { return psi_; }
    double base_pressure() const;

    double pressure(double s) const;
    double operator()(double s) const;       // Λ(s)
    double derivative(double s) const;       // ∫ψ dμ_{φ+sψ}
    double second_derivative(double s) const;  // ξ² under φ + sψ
    GibbsMeasure measure(double s) const;

private:
    struct Point {
        double pressure = 0.0;
        std::optional<GibbsMeasure> measure;
        std::optional<double> mean;
        std::optional<double> variance;
    };
    struct State {
        std::mutex mutex;
        std::map<double, Point> cache;
    };
    Point& point(double s, bool with_measure) const;

    FiniteMemoryFunction phi_, psi_;
    SolverOptions opts_;
    std::shared_ptr<State> state_;
};

struct RateFunctionPoint {
    double t = 0.0;
    double s_star = 0.0;
    double rate = 0.0;  // I(t), nats per step
    double lambda_at_s_star = 0.0;
};

constexpr double kDefaultSMax = 50.0;

/// Attainable-mean interval (Λ′(−s_max), Λ′(s_max)).
std::pair<double, double> attainable_range(const Cumulant& c, double s_max = kDefaultSMax);

/// Legendre transform at t: bracketing bisection refined by Newton on Λ′(s) = t.
/// Throws OutOfRange outside the open attainable range.
RateFunctionPoint rate_function(const Cumulant& c, double t, double s_max = kDefaultSMax);

struct DerivativeCheck {
    double fd_first = 0.0, analytic_first = 0.0, first_error = 0.0;
    double fd_second = 0.0, analytic_second = 0.0, second_error = 0.0;
};

DerivativeCheck pressure_derivative_check(const FiniteMemoryFunction& phi, const FiniteMemoryFunction& psi,
                                          double step = 1e-4);

/// Law of S_nψ on the lattice n·a + bℤ.
struct LatticeDistribution {
    int n = 0;
    double offset = 0.0;  // a = min ψ
    double span = 0.0;    // b
    std::vector<double> probs;  // index k ↦ P(S_nψ = n·a + b·k)

    double value(std::size_t k) const { return n * offset + span * static_cast<double>(k); }
    double mean() const;
    double variance() const;
};

struct Lattice {
    double offset = 0.0;
    double span = 0.0;  // 0 when ψ is constant
};

/// Smallest a and largest b with every value of ψ in a + bℤ (tolerance 1e-9).
/// Throws NotLattice.
Lattice detect_lattice(const FiniteMemoryFunction& psi, double tol = 1e-9);

constexpr double kDefaultDpCap = 1e8;

LatticeDistribution exact_birkhoff_distribution(const MarkovMeasure& mu, const FiniteMemoryFunction& psi, int n,
                                                kernels::Execution exec = kernels::Execution::Parallel,
                                                double cell_cap = kDefaultDpCap);

struct CltDiagnostics {
    int n = 0;
    double ks = 0.0;
    double be_constant = 0.0;
};

CltDiagnostics clt_diagnostics(const LatticeDistribution& d, double mean, double xi2);

/// max_k |ξ√n·P(S_n = k)/b − φ_Gauss(z_k)| over atoms with positive mass.
double local_limit_check(const LatticeDistribution& d, double mean, double xi2);

struct LdpRow {
    int n = 0;
    double probability = 0.0;
    double empirical_rate = 0.0;  // −(1/n) log P(S_n/n ∈ [a, b])
    double rate_inf = 0.0;        // inf over [a, b] of I
    double gap = 0.0;
    bool zero_probability = false;
};

/// P(S_n/n ∈ [a, b]) with both ends closed; rows with P = 0 are flagged, not thrown.
std::vector<LdpRow> ldp_empirical(const std::vector<LatticeDistribution>& laws, double a, double b, double mean,
                                  const std::function<double(double)>& rate);

}  // namespace gibbslab
