#include "gibbslab/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Eigenvalues>

#include "gibbslab/error.hpp"
#include "gibbslab/kernels.hpp"

namespace gibbslab {

TransferSystem build_transfer(const FiniteMemoryFunction& potential) {
    const ShiftSpace& s = potential.space();
    const int ell = std::max(potential.memory() - 1, 1);
    check_enumeration_size(std::pow(static_cast<double>(s.alphabet_size()), ell), "transfer states");
    BlockShift blocks = recode(s, ell);
    const int n = static_cast<int>(blocks.blocks.size());
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
    Word joined(ell + 1);
    for (int u = 0; u < n; ++u)
        for (int w = 0; w < n; ++w) {
            if (!blocks.space.allowed(u, w)) continue;
            joined[0] = blocks.blocks[u][0];
            std::copy(blocks.blocks[w].begin(), blocks.blocks[w].end(), joined.begin() + 1);
            k(u, w) = std::exp(potential(joined));
        }
    return TransferSystem{std::move(blocks), std::move(k), potential};
}

namespace {

// Matrix scaled by e^{-max φ} so large potentials cannot overflow.
struct Scaled {
    Eigen::MatrixXd k;
    double log_scale;
};

Scaled scaled_matrix(const TransferSystem& t) {
    const double c = t.potential.max_value();
    return Scaled{t.matrix * std::exp(-c), c};
}

double deflation_gap(const Eigen::MatrixXd& op, double lambda, const Eigen::VectorXd& h, const Eigen::VectorXd& nu,
                     long max_iterations) {
    const int n = static_cast<int>(op.rows());
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = 1.0 + 0.5 * std::cos(1.3 * i + 0.7);
    auto project = [&](Eigen::VectorXd& v) { v -= h * nu.dot(v); };
    project(x);
    double xn = x.lpNorm<Eigen::Infinity>();
    if (xn == 0.0) return 0.0;
    x /= xn;
    double prev = -1.0;
    int stable = 0;
    for (long it = 0; it < max_iterations; ++it) {
        // two steps per round so ± pairs of equal modulus converge
        Eigen::VectorXd y = op * x;
        y.noalias() -= lambda * h * nu.dot(x);
        Eigen::VectorXd z = op * y;
        z.noalias() -= lambda * h * nu.dot(y);
        if (it % 8 == 0) project(z);
        const double zn = z.lpNorm<Eigen::Infinity>();
        if (zn <= 1e-300 || zn <= 1e-28 * lambda * lambda) return 0.0;
        const double r = std::sqrt(zn) / lambda;  // x has unit norm
        x = z / zn;
        if (prev >= 0.0 && std::abs(r - prev) <= 1e-14 * std::max(r, 1e-300)) {
            if (++stable >= 3) return r;
        } else {
            stable = 0;
        }
        prev = r;
    }
    throw Error(ErrorKind::NoConvergence, "deflated power iteration did not settle");
}

double full_solve_gap(const Eigen::MatrixXd& op) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(op, false);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::NoConvergence, "full eigen-solve failed");
    std::vector<double> mod;
    for (int i = 0; i < es.eigenvalues().size(); ++i) mod.push_back(std::abs(es.eigenvalues()(i)));
    std::sort(mod.begin(), mod.end(), std::greater<>());
    if (mod.size() < 2 || mod[0] == 0.0) return 0.0;
    return mod[1] / mod[0];
}

}  // namespace

GapEstimate spectral_gap(const TransferSystem& t, const EigenData& e, const SolverOptions& opts) {
    const Scaled sc = scaled_matrix(t);
    const Eigen::MatrixXd op = sc.k.transpose();
    const double lambda = e.lambda * std::exp(-sc.log_scale);
    GapEstimate g;
    try {
        g.deflation = deflation_gap(op, lambda, e.h, e.nu, std::min<long>(opts.max_iterations, 200'000));
    } catch (const Error&) {
        g.deflation.reset();
    }
    if (t.size() <= opts.full_solve_limit) {
        g.full_solve = full_solve_gap(op);
        g.gamma = *g.full_solve;
        g.method = "full-solve";
    } else if (g.deflation) {
        g.gamma = *g.deflation;
        g.method = "deflation";
    } else {
        throw Error(ErrorKind::NoConvergence, "spectral gap: deflation failed and the system is too large for a full solve");
    }
    return g;
}

EigenData dominant_eigendata(const TransferSystem& t, const SolverOptions& opts) {
    if (!(opts.tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
    const Scaled sc = scaled_matrix(t);
    const Eigen::MatrixXd& k = sc.k;        // 𝓛* acts as k on measures
    const Eigen::MatrixXd op = k.transpose();  // 𝓛 on functions
    const int n = t.size();
    Eigen::VectorXd h = Eigen::VectorXd::Ones(n);
    Eigen::VectorXd nu = Eigen::VectorXd::Ones(n) / n;
    double lambda = 0.0;
    long it = 0;
    bool converged = false;
    // Plain iteration first. If a second eigenvalue sits near −λ (nearly periodic
    // chains, e.g. strongly tilted golden mean) the iterate oscillates; then
    // iterate with 𝓛 + cI, same Perron vectors and |λ₂ + c| / (λ + c) ≤ 1/3 for
    // c within a factor 2 of λ. The two-step growth ‖𝓛²h‖/‖h‖ ≈ λ² supplies c,
    // the Rayleigh quotient being useless while the iterate oscillates.
    constexpr long plain_cap = 5'000;
    double shift = 0.0;
    for (; it < opts.max_iterations; ++it) {
        if (it == plain_cap) {
            const Eigen::VectorXd two = op * (op * h);
            const double c = std::sqrt(two.lpNorm<Eigen::Infinity>() / h.lpNorm<Eigen::Infinity>());
            if (std::abs(c - lambda) > 1e-3 * c) shift = c;
        }
        Eigen::VectorXd lh = op * h;
        Eigen::VectorXd knu = k * nu;
        lambda = nu.dot(lh) / nu.dot(h);
        // componentwise relative residuals: positive products carry no cancellation, so
        // this stays reachable when λ is tiny next to the entries, and it implies
        // ‖𝓛h − λh‖∞ ≤ tol·λ‖h‖∞ and ‖𝓛*ν − λν‖₁ ≤ tol·λ‖ν‖₁
        const double rh = ((lh - lambda * h).array().abs() / (lambda * h.array())).maxCoeff();
        const double rn = ((knu - lambda * nu).array().abs() / (lambda * nu.array())).maxCoeff();
        if (rh <= opts.tol && rn <= opts.tol) {
            converged = true;
            break;
        }
        lh += shift * h;
        knu += shift * nu;
        h = lh / lh.lpNorm<Eigen::Infinity>();
        nu = knu / knu.sum();
    }
    if (!converged) throw Error(ErrorKind::NoConvergence, "power iteration hit the iteration cap");

    nu /= nu.sum();
    h /= nu.dot(h);
    EigenData e;
    e.lambda = lambda * std::exp(sc.log_scale);
    e.pressure = std::log(lambda) + sc.log_scale;
    e.h = h;
    e.nu = nu;
    e.min_h = h.minCoeff();
    e.iterations = it;
    e.residual_h = (t.matrix.transpose() * h - e.lambda * h).lpNorm<Eigen::Infinity>();
    e.residual_nu = (t.matrix * nu - e.lambda * nu).lpNorm<1>();
    e.ess_radius_bound = t.potential.alpha() * e.lambda;
    e.gap_ratio = spectral_gap(t, e, opts).gamma;
    return e;
}

SolvedSystem solve(const FiniteMemoryFunction& potential, const SolverOptions& opts) {
    TransferSystem t = build_transfer(potential);
    EigenData e = dominant_eigendata(t, opts);
    return SolvedSystem{std::move(t), std::move(e)};
}

double pressure_via_partition(const FiniteMemoryFunction& potential, int n) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
    const ShiftSpace& s = potential.space();
    const std::vector<Word> words = s.enumerate_words(n);
    const int extra = potential.memory() - 1;
    const auto sups = kernels::parallel::map(words, [&](const Word& w) {
        double best = -std::numeric_limits<double>::infinity();
        for (const Word& c : s.continuations(w, extra)) {
            Word x = w;
            x.insert(x.end(), c.begin(), c.end());
            best = std::max(best, potential.birkhoff_sum(x, n));
        }
        return best;
    });
    const double top = *std::max_element(sups.begin(), sups.end());
    std::vector<double> terms(sups.size());
    for (std::size_t i = 0; i < sups.size(); ++i) terms[i] = std::exp(sups[i] - top);
    return (top + std::log(kernels::ordered_sum(terms))) / n;
}

MarkovChain normalized_operator(const TransferSystem& t, const EigenData& e) {
    const int n = t.size();
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
    for (int u = 0; u < n; ++u) {
        for (int w = 0; w < n; ++w) q(u, w) = t.matrix(u, w) * e.nu(w) / (e.lambda * e.nu(u));
        q.row(u) /= q.row(u).sum();  // removes the solver's last-ulp drift
    }
    Eigen::VectorXd pi = e.h.cwiseProduct(e.nu);
    pi /= pi.sum();
    return MarkovChain{t.blocks, std::move(pi), std::move(q)};
}

ConstantsReport constants_report(const FiniteMemoryFunction& potential, double alpha, const EigenData& e) {
    ConstantsReport r;
    const int m = potential.memory();
    std::vector<double> var(m + 1);
    for (int k = 0; k <= m; ++k) var[k] = potential.var(k);
    for (int mm = 0; mm <= m; ++mm) {
        double s = 0.0;
        for (int k = mm + 1; k <= m; ++k) s += 2.0 * var[k];
        r.b_m.push_back(std::exp(s));
    }
    r.holder_b = potential.holder_seminorm(alpha);
    r.b0_geometric = std::exp(2.0 * r.holder_b * alpha / (1.0 - alpha));
    const int mix = potential.space().mixing_time();
    r.k_cone = std::pow(e.lambda, mix) * std::exp(mix * potential.sup_norm()) * r.b0_geometric;
    r.ess_radius_bound = alpha * e.lambda;
    const double v = potential.total_variation();
    r.gibbs_c1_variation = std::exp(-2.0 * v);
    r.gibbs_c2_variation = std::exp(2.0 * v);
    r.norm_f = potential.sup_norm() + v;
    r.gibbs_c1_norm = std::exp(-2.0 * r.norm_f);
    r.gibbs_c2_norm = std::exp(2.0 * r.norm_f);
    r.cone = cone_constants(potential);
    return r;
}

}  // namespace gibbslab
