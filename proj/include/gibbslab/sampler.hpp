#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gibbslab/gibbs.hpp"
#include "gibbslab/stats.hpp"

namespace gibbslab {

/// SplitMix64 in counter mode: output i of stream (seed, index) is
/// mix64(key + golden·i) with key = mix64(seed ⊕ mix64(index + c)).
/// Streams never share state, so trials can run in any order.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next() noexcept;
    /// Uniform on [0, 1) from the top 53 bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    static std::uint64_t mix64(std::uint64_t z) noexcept;

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

struct SampleConfig {
    std::uint64_t seed = 0;
    int n = 0;
    int trials = 1;
};

/// Path of n symbols from stream (seed, 0): initial block from π, then Q rows,
/// each draw by inverse CDF over lexicographically ordered states.
Word sample_path(const MarkovMeasure& mu, int n, std::uint64_t seed);

/// Path for trial `trial` (stream index); sample_path uses trial 0.
Word sample_trial_path(const MarkovMeasure& mu, int n, std::uint64_t seed, std::uint64_t trial);

struct EmpiricalBirkhoff {
    std::vector<double> samples;  // S_nψ per trial, trial order
    double mean = 0.0;
    double var_over_n = 0.0;
    std::optional<double> ks;  // against the exact law when supplied
};

/// `trials` independent S_nψ values; trial t uses stream (seed, t).
EmpiricalBirkhoff empirical_birkhoff(const MarkovMeasure& mu, const FiniteMemoryFunction& psi, const SampleConfig& cfg,
                                     const LatticeDistribution* exact = nullptr,
                                     kernels::Execution exec = kernels::Execution::Parallel);

/// sup over atoms of |empirical CDF − exact CDF|.
double ks_distance(const std::vector<double>& samples, const LatticeDistribution& exact);

struct ChiSquare {
    double statistic = 0.0;
    int dof = 0;
};

/// Transition-count χ² of a path against Q on the chain's blocks: Σ (N_uw − N_u Q_uw)² / (N_u Q_uw)
/// with Σ_u (#positive entries of row u − 1) degrees of freedom over visited u.
ChiSquare transition_chi_square(const MarkovMeasure& mu, const Word& path);

}  // namespace gibbslab
