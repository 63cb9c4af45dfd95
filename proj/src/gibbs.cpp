#include "gibbslab/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gibbslab/error.hpp"

namespace gibbslab {

namespace {

// μ of a word of length ≥ ℓ via the chain: π(b₀) Π Q(b_j → b_{j+1}).
double chain_probability(const MarkovMeasure& mu, std::span<const Symbol> w) {
    const int l = mu.block_length();
    const auto& blocks = mu.chain.blocks;
    int prev = blocks.index_of(w.subspan(0, l));
    if (prev < 0) return 0.0;
    double p = mu.chain.pi(prev);
    for (std::size_t j = 1; j + l <= w.size(); ++j) {
        const int next = blocks.index_of(w.subspan(j, l));
        if (next < 0) return 0.0;
        p *= mu.chain.q(prev, next);
        if (p == 0.0) return 0.0;
        prev = next;
    }
    return p;
}

template <class Fn>
std::vector<double> run_map(kernels::Execution exec, const std::vector<Word>& items, Fn&& fn) {
    return exec == kernels::Execution::Parallel ? kernels::parallel::map(items, fn) : kernels::serial::map(items, fn);
}

}  // namespace

MarkovMeasure markov_measure(const ShiftSpace& space, int block_length, const Eigen::VectorXd& pi,
                             const Eigen::MatrixXd& q) {
    if (block_length < 1) throw Error(ErrorKind::InvalidArgument, "block length must be >= 1");
    BlockShift blocks = recode(space, block_length);
    const int n = static_cast<int>(blocks.blocks.size());
    if (pi.size() != n || q.rows() != n || q.cols() != n)
        throw Error(ErrorKind::InvalidArgument, "chain dimensions do not match the block count");
    for (int u = 0; u < n; ++u) {
        if (!(pi(u) >= 0.0)) throw Error(ErrorKind::InvalidArgument, "stationary law has a negative entry");
        double row = 0.0;
        for (int w = 0; w < n; ++w) {
            if (!(q(u, w) >= 0.0)) throw Error(ErrorKind::InvalidArgument, "transition matrix has a negative entry");
            if (q(u, w) > 0.0 && !blocks.space.allowed(u, w))
                throw Error(ErrorKind::InvalidArgument, "transition matrix charges a forbidden transition");
            row += q(u, w);
        }
        if (std::abs(row - 1.0) > 1e-9) throw Error(ErrorKind::InvalidArgument, "transition rows must sum to 1");
    }
    if (std::abs(pi.sum() - 1.0) > 1e-9) throw Error(ErrorKind::InvalidArgument, "stationary law must sum to 1");
    return MarkovMeasure{space, MarkovChain{std::move(blocks), pi, q}};
}

MarkovMeasure product_measure(const ShiftSpace& space, const std::vector<double>& probs) {
    const int n = space.alphabet_size();
    if (static_cast<int>(probs.size()) != n) throw Error(ErrorKind::InvalidArgument, "one probability per symbol");
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (!space.allowed(a, b)) throw Error(ErrorKind::InvalidArgument, "product measures need the full shift");
    Eigen::VectorXd pi(n);
    for (int a = 0; a < n; ++a) pi(a) = probs[a];
    Eigen::MatrixXd q(n, n);
    for (int a = 0; a < n; ++a) q.row(a) = pi.transpose();
    return markov_measure(space, 1, pi, q);
}

MarkovMeasure MarkovMeasure::with_block_length(int l) const {
    if (l == block_length()) return *this;
    if (l < block_length()) throw Error(ErrorKind::InvalidArgument, "cannot coarsen the block length");
    BlockShift blocks = recode(space, l);
    const int n = static_cast<int>(blocks.blocks.size());
    Eigen::VectorXd pi(n);
    for (int u = 0; u < n; ++u) pi(u) = chain_probability(*this, blocks.blocks[u]);
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
    Word joined(l + 1);
    for (int u = 0; u < n; ++u) {
        int allowed = 0;
        for (int w = 0; w < n; ++w) {
            if (!blocks.space.allowed(u, w)) continue;
            ++allowed;
            std::copy(blocks.blocks[u].begin(), blocks.blocks[u].end(), joined.begin());
            joined[l] = blocks.blocks[w].back();
            if (pi(u) > 0.0) q(u, w) = chain_probability(*this, joined) / pi(u);
        }
        if (pi(u) > 0.0) {
            q.row(u) /= q.row(u).sum();
        } else {
            // null block: any stochastic row on the allowed successors will do
            for (int w = 0; w < n; ++w)
                if (blocks.space.allowed(u, w)) q(u, w) = 1.0 / allowed;
        }
    }
    return MarkovMeasure{space, MarkovChain{std::move(blocks), std::move(pi), std::move(q)}};
}

GibbsMeasure gibbs_measure(const TransferSystem& t, const EigenData& e) {
    MarkovChain chain = normalized_operator(t, e);
    return GibbsMeasure{MarkovMeasure{t.potential.space(), std::move(chain)}, e.pressure, e.h, t.potential};
}

GibbsMeasure gibbs_measure(const FiniteMemoryFunction& potential) {
    const SolvedSystem s = solve(potential);
    return gibbs_measure(s.transfer, s.eigen);
}

double cylinder_measure(const MarkovMeasure& mu, std::span<const Symbol> w) {
    if (w.empty()) return 1.0;
    for (Symbol s : w)
        if (s < 0 || s >= mu.space.alphabet_size()) return 0.0;
    if (!mu.space.admissible(w)) return 0.0;
    const int l = mu.block_length();
    if (static_cast<int>(w.size()) >= l) return chain_probability(mu, w);
    Word base(w.begin(), w.end());
    double total = 0.0;
    Word full;
    for (const Word& c : mu.space.continuations(base, l - static_cast<int>(w.size()))) {
        full = base;
        full.insert(full.end(), c.begin(), c.end());
        total += chain_probability(mu, full);
    }
    return total;
}

double jacobian(const MarkovMeasure& mu, std::span<const Symbol> w) {
    if (static_cast<int>(w.size()) < mu.block_length() + 1)
        throw Error(ErrorKind::TooShort, "jacobian needs a word of length >= block length + 1");
    const double whole = cylinder_measure(mu, w);
    if (whole == 0.0) throw Error(ErrorKind::Undefined, "jacobian undefined on a null cylinder");
    return cylinder_measure(mu, w.subspan(1)) / whole;
}

JacobianCheck jacobian_identity(const MarkovMeasure& mu, const GibbsMeasure& g) {
    const int l = g.measure.block_length();
    const BlockShift& blocks = g.measure.chain.blocks;
    JacobianCheck out;
    for (const Word& w : mu.space.enumerate_words(l + 1)) {
        const std::span<const Symbol> ws(w);
        const double base = std::exp(g.pressure - g.source(ws));
        const double corrected = base * g.h(blocks.index_of(ws.subspan(1, l))) / g.h(blocks.index_of(ws.subspan(0, l)));
        double j;
        try {
            j = jacobian(mu, ws);
        } catch (const Error&) {
            out.max_rel_error = out.max_rel_error_literal = std::numeric_limits<double>::infinity();
            continue;
        }
        out.max_rel_error = std::max(out.max_rel_error, std::abs(j / corrected - 1.0));
        out.max_rel_error_literal = std::max(out.max_rel_error_literal, std::abs(j / base - 1.0));
    }
    return out;
}

GibbsScanReport gibbs_ratio_scan(const MarkovMeasure& mu, const FiniteMemoryFunction& phi, double pressure, int n_max,
                                 kernels::Execution exec) {
    if (n_max < 1) throw Error(ErrorKind::InvalidArgument, "n_max must be >= 1");
    const ShiftSpace& space = phi.space();
    double total = 0.0;
    for (int n = 1; n <= n_max; ++n) total += space.count_words(n);
    check_enumeration_size(total, "gibbs ratio scan");

    const int m = phi.memory();
    const double v = phi.total_variation();
    GibbsScanReport r;
    r.n_max = n_max;
    r.c1 = std::exp(-2.0 * v);
    r.c2 = std::exp(2.0 * v);
    r.min_by_length.assign(n_max, std::numeric_limits<double>::infinity());
    r.max_by_length.assign(n_max, -std::numeric_limits<double>::infinity());

    for (int n = 1; n <= n_max; ++n) {
        const std::vector<Word> words = space.enumerate_words(n);
        // per word: log μ([w]) − (−nP + S_nφ) over every continuation, kept as (min, max)
        std::vector<double> hi(words.size());
        auto per_word = [&](std::size_t i) {
            const Word& w = words[i];
            const double log_mu = std::log(cylinder_measure(mu, w));
            double a = std::numeric_limits<double>::infinity(), b = -a;
            for (const Word& c : space.continuations(w, m - 1)) {
                Word x = w;
                x.insert(x.end(), c.begin(), c.end());
                const double lr = log_mu + n * pressure - phi.birkhoff_sum(x, n);
                a = std::min(a, lr);
                b = std::max(b, lr);
            }
            hi[i] = b;
            return a;
        };
        const auto lo = exec == kernels::Execution::Parallel ? kernels::parallel::generate(words.size(), per_word)
                                                             : kernels::serial::generate(words.size(), per_word);
        for (std::size_t i = 0; i < words.size(); ++i) {
            r.min_by_length[n - 1] = std::min(r.min_by_length[n - 1], std::exp(lo[i]));
            r.max_by_length[n - 1] = std::max(r.max_by_length[n - 1], std::exp(hi[i]));
        }
    }
    r.min_ratio = *std::min_element(r.min_by_length.begin(), r.min_by_length.end());
    r.max_ratio = *std::max_element(r.max_by_length.begin(), r.max_by_length.end());

    constexpr double slack = 1e-12;
    r.within_band = r.min_ratio >= r.c1 * (1.0 - slack) && r.max_ratio <= r.c2 * (1.0 + slack);
    r.stable_in_n = true;
    const int from = std::max(1, n_max / 2);
    for (int n = from + 1; n <= n_max; ++n) {
        auto same = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); };
        if (!same(r.min_by_length[n - 1], r.min_by_length[from - 1]) ||
            !same(r.max_by_length[n - 1], r.max_by_length[from - 1]))
            r.stable_in_n = false;
    }
    r.pass = r.within_band || (v == 0.0 && r.stable_in_n);
    return r;
}

double entropy(const MarkovMeasure& mu) {
    const auto& c = mu.chain;
    double h = 0.0;
    for (int u = 0; u < c.size(); ++u) {
        if (c.pi(u) == 0.0) continue;
        double row = 0.0;
        for (int w = 0; w < c.size(); ++w) {
            const double p = c.q(u, w);
            if (p > 0.0) row -= p * std::log(p);
        }
        h += c.pi(u) * row;
    }
    return h;
}

Eigen::VectorXd on_blocks(const MarkovMeasure& mu, const FiniteMemoryFunction& psi) {
    if (psi.memory() > mu.block_length())
        throw Error(ErrorKind::InvalidArgument, "observable memory exceeds the block length");
    const auto& blocks = mu.chain.blocks.blocks;
    Eigen::VectorXd v(static_cast<Eigen::Index>(blocks.size()));
    for (std::size_t u = 0; u < blocks.size(); ++u) v(u) = psi(blocks[u]);
    return v;
}

double expectation(const MarkovMeasure& mu, const FiniteMemoryFunction& psi) {
    if (!(psi.space() == mu.space)) throw Error(ErrorKind::InvalidArgument, "observable lives on another shift");
    double sum = 0.0;
    for (const auto& [w, value] : psi.table()) sum += value * cylinder_measure(mu, w);
    return sum;
}

double variational_defect(const MarkovMeasure& mu, const FiniteMemoryFunction& phi, double pressure) {
    return pressure - entropy(mu) - expectation(mu, phi);
}

WassersteinReport wasserstein_distance(const MarkovMeasure& a, const MarkovMeasure& b, double alpha, int n_max,
                                       kernels::Execution exec) {
    if (!(a.space == b.space)) throw Error(ErrorKind::InvalidArgument, "measures live on different shifts");
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0, 1)");
    if (n_max < 1) throw Error(ErrorKind::InvalidArgument, "n_max must be >= 1");
    check_enumeration_size(a.space.count_words(n_max), "wasserstein distance");
    WassersteinReport r;
    r.n_max = n_max;
    for (int n = 1; n <= n_max; ++n) {
        const std::vector<Word> words = a.space.enumerate_words(n);
        const auto diffs = run_map(exec, words, [&](const Word& w) {
            return std::abs(cylinder_measure(a, w) - cylinder_measure(b, w));
        });
        const double tv = 0.5 * kernels::ordered_sum(diffs);
        r.tv_by_length.push_back(tv);
        r.value += (std::pow(alpha, n - 1) - std::pow(alpha, n)) * tv;
    }
    r.tail_bound = std::pow(alpha, n_max);
    return r;
}

}  // namespace gibbslab
