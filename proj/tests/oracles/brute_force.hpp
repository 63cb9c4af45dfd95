#pragma once

// Independent oracles for the tests: brute-force enumeration over all
// sequences, dense eigen-solves, closed forms for the built-in models.

#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "gibbslab/gibbs.hpp"
#include "gibbslab/potential.hpp"
#include "gibbslab/shift_space.hpp"

namespace oracle {

using gibbslab::Word;

/// Every word in {0..N−1}^n (no admissibility filter), lexicographic.
inline std::vector<Word> all_sequences(int alphabet, int n) {
    std::vector<Word> out;
    Word w(n, 0);
    while (true) {
        out.push_back(w);
        int i = n - 1;
        while (i >= 0 && ++w[i] == alphabet) w[i--] = 0;
        if (i < 0) break;
    }
    return out;
}

inline bool admissible(const gibbslab::TransitionMatrix& a, const Word& w) {
    for (std::size_t i = 1; i < w.size(); ++i)
        if (!a[w[i - 1]][w[i]]) return false;
    return true;
}

inline std::vector<Word> admissible_words(const gibbslab::TransitionMatrix& a, int n) {
    std::vector<Word> out;
    for (auto& w : all_sequences(static_cast<int>(a.size()), n))
        if (admissible(a, w)) out.push_back(w);
    return out;
}

/// Sum of entries of A^{n−1} by repeated multiplication.
inline double matrix_power_count(const gibbslab::TransitionMatrix& a, int n) {
    const int N = static_cast<int>(a.size());
    Eigen::MatrixXd m(N, N), p = Eigen::MatrixXd::Identity(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) m(i, j) = a[i][j];
    for (int k = 1; k < n; ++k) p = p * m;
    return p.sum();
}

/// var_n by comparing every pair of admissible m-words directly.
inline double var_pairs(const gibbslab::FiniteMemoryFunction& f, int n) {
    const auto words = admissible_words(f.space().transitions(), f.memory());
    const int k = std::min(n, f.memory());
    double best = 0.0;
    for (const auto& u : words)
        for (const auto& v : words)
            if (std::equal(u.begin(), u.begin() + k, v.begin())) best = std::max(best, std::abs(f(u) - f(v)));
    return best;
}

/// Perron data of the block transfer matrix from a dense nonsymmetric eigen-solve.
struct Perron {
    double lambda;
    Eigen::VectorXd pi;  // stationary law on blocks
    Eigen::MatrixXd q;   // forward kernel
    double second;       // |λ₂|/λ
};

inline Perron dense_perron(const Eigen::MatrixXd& k) {
    auto pick = [](const Eigen::MatrixXd& m) {
        Eigen::EigenSolver<Eigen::MatrixXd> es(m);
        Eigen::Index best = 0;
        for (Eigen::Index i = 1; i < es.eigenvalues().size(); ++i)
            if (es.eigenvalues()(i).real() > es.eigenvalues()(best).real()) best = i;
        Eigen::VectorXd v = es.eigenvectors().col(best).real();
        if (v.sum() < 0) v = -v;
        std::vector<double> mods;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) mods.push_back(std::abs(es.eigenvalues()(i)));
        std::sort(mods.rbegin(), mods.rend());
        return std::make_tuple(es.eigenvalues()(best).real(), v, mods.size() > 1 ? mods[1] : 0.0);
    };
    auto [lambda, right, second] = pick(k);            // k·r = λr
    auto [lambda2, left, unused] = pick(k.transpose());  // kᵀ·l = λl
    (void)lambda2;
    (void)unused;
    const int n = static_cast<int>(k.rows());
    Perron p;
    p.lambda = lambda;
    p.second = second / lambda;
    p.q.resize(n, n);
    for (int u = 0; u < n; ++u)
        for (int w = 0; w < n; ++w) p.q(u, w) = k(u, w) * right(w) / (lambda * right(u));
    p.pi = left.cwiseProduct(right);
    p.pi /= p.pi.sum();
    return p;
}

/// μ([w]) by brute force over the block chain: sum of π(b₀)ΠQ over all block paths
/// spelling w (no index lookups, linear scan of the block list).
inline double chain_cylinder(const gibbslab::MarkovMeasure& mu, const Word& w) {
    const auto& blocks = mu.chain.blocks.blocks;
    const int l = mu.block_length();
    if (static_cast<int>(w.size()) < l) {
        double s = 0.0;
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            Word full = blocks[b];
            if (std::equal(w.begin(), w.end(), full.begin())) s += mu.chain.pi(b);
        }
        return s;
    }
    auto find = [&](std::size_t at) -> int {
        for (std::size_t b = 0; b < blocks.size(); ++b)
            if (std::equal(blocks[b].begin(), blocks[b].end(), w.begin() + at)) return static_cast<int>(b);
        return -1;
    };
    int prev = find(0);
    if (prev < 0) return 0.0;
    double p = mu.chain.pi(prev);
    for (std::size_t j = 1; j + l <= w.size(); ++j) {
        const int cur = find(j);
        if (cur < 0) return 0.0;
        p *= mu.chain.q(prev, cur);
        prev = cur;
    }
    return p;
}

/// Law of S_nψ by enumerating every admissible word of length n + m − 1.
inline std::map<long, double> enumerated_birkhoff(const gibbslab::MarkovMeasure& mu,
                                                  const gibbslab::FiniteMemoryFunction& psi, int n, double offset,
                                                  double span) {
    std::map<long, double> law;
    for (const auto& w : admissible_words(mu.space.transitions(), n + psi.memory() - 1)) {
        const double s = psi.birkhoff_sum(w, n);
        law[std::lround((s - n * offset) / span)] += chain_cylinder(mu, w);
    }
    return law;
}

// ---- closed forms ----

inline double bernoulli_indicator_rate(double p, double t) {
    return t * std::log(t / p) + (1.0 - t) * std::log((1.0 - t) / (1.0 - p));
}

/// Λ(s) for ψ = x₀ under the Ising potential β x₀x₁ (h = 0): log of the Perron root of
/// [[e^{β+s}, e^{−β+s}], [e^{−β−s}, e^{β−s}]] over 2cosh β.
inline double ising_spin_cumulant(double beta, double s) {
    const double tr = 2.0 * std::exp(beta) * std::cosh(s);
    const double det = std::exp(2.0 * beta) - std::exp(-2.0 * beta);
    return std::log((tr + std::sqrt(tr * tr - 4.0 * det)) / 2.0 / (2.0 * std::cosh(beta)));
}

/// Pressure of a·1_[0] on the golden mean shift: Perron root of [[e^a, e^a], [1, 0]].
inline double golden_mean_pressure(double a) {
    return std::log((std::exp(a) + std::sqrt(std::exp(2.0 * a) + 4.0 * std::exp(a))) / 2.0);
}

// ---- random models for property tests ----

inline gibbslab::ShiftSpace random_space(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> size(2, 3);
    std::bernoulli_distribution bit(0.7);
    while (true) {
        const int n = size(rng);
        gibbslab::TransitionMatrix a(n, std::vector<int>(n));
        for (auto& row : a)
            for (auto& x : row) x = bit(rng) ? 1 : 0;
        try {
            return gibbslab::ShiftSpace::validate(n, a);
        } catch (const std::exception&) {
        }
    }
}

inline gibbslab::FiniteMemoryFunction random_function(std::mt19937_64& rng, const gibbslab::ShiftSpace& s, int memory,
                                                      double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return gibbslab::FiniteMemoryFunction::from_function(s, memory, [&](std::span<const gibbslab::Symbol>) { return u(rng); });
}

}  // namespace oracle
