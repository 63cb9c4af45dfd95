#include "gibbslab/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gibbslab/error.hpp"

namespace gibbslab {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kStreamSalt = 0x632be59bd9b4e019ULL;

// First index whose cumulative weight exceeds u; zero-weight entries are never chosen.
template <class Weights>
int inverse_cdf(const Weights& weights, int size, double u) {
    double acc = 0.0;
    int last = -1;
    for (int i = 0; i < size; ++i) {
        const double p = weights(i);
        if (p <= 0.0) continue;
        acc += p;
        last = i;
        if (u < acc) return i;
    }
    return last;  // u landed in the rounding gap above the final sum
}

// Runs the chain and reports each visited block to `visit`.
template <class Visit>
void run_chain(const MarkovMeasure& mu, int steps, CounterRng& rng, Visit&& visit) {
    const auto& c = mu.chain;
    int state = inverse_cdf([&](int i) { return c.pi(i); }, c.size(), rng.uniform());
    visit(state);
    for (int j = 1; j < steps; ++j) {
        state = inverse_cdf([&](int i) { return c.q(state, i); }, c.size(), rng.uniform());
        visit(state);
    }
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix64(seed ^ mix64(stream + kStreamSalt))) {}

std::uint64_t CounterRng::mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t CounterRng::next() noexcept { return mix64(key_ + kGolden * ++counter_); }

Word sample_trial_path(const MarkovMeasure& mu, int n, std::uint64_t seed, std::uint64_t trial) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "path length must be >= 1");
    const int l = mu.block_length();
    const auto& blocks = mu.chain.blocks.blocks;
    CounterRng rng(seed, trial);
    Word path;
    path.reserve(n + l);
    bool first = true;
    const int steps = std::max(1, n - l + 1);
    run_chain(mu, steps, rng, [&](int state) {
        if (first) {
            path.insert(path.end(), blocks[state].begin(), blocks[state].end());
            first = false;
        } else {
            path.push_back(blocks[state].back());
        }
    });
    path.resize(n);
    return path;
}

Word sample_path(const MarkovMeasure& mu, int n, std::uint64_t seed) { return sample_trial_path(mu, n, seed, 0); }

double ks_distance(const std::vector<double>& samples, const LatticeDistribution& exact) {
    std::vector<double> counts(exact.probs.size(), 0.0);
    for (double x : samples) {
        const double k = std::round((x - exact.n * exact.offset) / exact.span);
        if (k < 0 || k >= static_cast<double>(counts.size())) return 1.0;  // outside the exact support
        counts[static_cast<std::size_t>(k)] += 1.0;
    }
    const double total = static_cast<double>(samples.size());
    double emp = 0.0, ref = 0.0, ks = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        emp += counts[k] / total;
        ref += exact.probs[k];
        ks = std::max(ks, std::abs(emp - ref));
    }
    return ks;
}

EmpiricalBirkhoff empirical_birkhoff(const MarkovMeasure& mu, const FiniteMemoryFunction& psi, const SampleConfig& cfg,
                                     const LatticeDistribution* exact, kernels::Execution exec) {
    if (cfg.trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be >= 1");
    if (cfg.n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
    const MarkovMeasure m = mu.with_block_length(std::max(mu.block_length(), psi.memory()));
    const Eigen::VectorXd values = on_blocks(m, psi);
    auto one_trial = [&](std::size_t t) {
        CounterRng rng(cfg.seed, t);
        double s = 0.0;
        run_chain(m, cfg.n, rng, [&](int state) { s += values(state); });
        return s;
    };
    // without a lift, trial t continues the path sample_trial_path(mu, ·, seed, t) draws
    EmpiricalBirkhoff out;
    out.samples = exec == kernels::Execution::Parallel ? kernels::parallel::generate(cfg.trials, one_trial)
                                                       : kernels::serial::generate(cfg.trials, one_trial);
    out.mean = kernels::ordered_sum(out.samples) / cfg.trials;
    double ss = 0.0;
    for (double x : out.samples) ss += (x - out.mean) * (x - out.mean);
    out.var_over_n = cfg.trials > 1 ? ss / (cfg.trials - 1) / cfg.n : 0.0;
    if (exact != nullptr) out.ks = ks_distance(out.samples, *exact);
    return out;
}

ChiSquare transition_chi_square(const MarkovMeasure& mu, const Word& path) {
    const int l = mu.block_length();
    const auto& c = mu.chain;
    const int n = c.size();
    if (static_cast<int>(path.size()) < l + 1) throw Error(ErrorKind::TooShort, "path too short for a transition");
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n, n);
    const std::span<const Symbol> p(path);
    int prev = c.blocks.index_of(p.subspan(0, l));
    for (std::size_t j = 1; j + l <= path.size(); ++j) {
        const int cur = c.blocks.index_of(p.subspan(j, l));
        if (prev < 0 || cur < 0) throw Error(ErrorKind::InvalidArgument, "path is not admissible");
        counts(prev, cur) += 1.0;
        prev = cur;
    }
    ChiSquare out;
    for (int u = 0; u < n; ++u) {
        const double nu = counts.row(u).sum();
        if (nu == 0.0) continue;
        int support = 0;
        for (int w = 0; w < n; ++w) {
            const double q = c.q(u, w);
            if (q <= 0.0) {
                if (counts(u, w) > 0.0) out.statistic = std::numeric_limits<double>::infinity();
                continue;
            }
            ++support;
            const double expected = nu * q;
            out.statistic += (counts(u, w) - expected) * (counts(u, w) - expected) / expected;
        }
        out.dof += support - 1;
    }
    return out;
}

}  // namespace gibbslab
