#include "gibbslab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

#include <Eigen/LU>

#include "gibbslab/error.hpp"

namespace gibbslab {

namespace {

struct Lifted {
    MarkovMeasure measure;
    Eigen::VectorXd values;
};

Lifted lift(const MarkovMeasure& mu, const FiniteMemoryFunction& psi) {
    if (!(psi.space() == mu.space)) throw Error(ErrorKind::InvalidArgument, "observable lives on another shift");
    MarkovMeasure m = mu.with_block_length(std::max(mu.block_length(), psi.memory()));
    Eigen::VectorXd v = on_blocks(m, psi);
    return Lifted{std::move(m), std::move(v)};
}

// C_0 … C_{count−1} of a centered observable on a lifted chain.
std::vector<double> autocorrelations(const MarkovChain& c, const Eigen::VectorXd& centered, int count) {
    std::vector<double> out;
    out.reserve(count);
    Eigen::RowVectorXd r = c.pi.cwiseProduct(centered).transpose();
    for (int k = 0; k < count; ++k) {
        if (k > 0) r = r * c.q;
        out.push_back(r.dot(centered));
    }
    return out;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

double correlation(const MarkovMeasure& mu, const FiniteMemoryFunction& f, const FiniteMemoryFunction& g, int n) {
    if (n < 0) throw Error(ErrorKind::InvalidArgument, "correlation lag must be >= 0");
    const int l = std::max({mu.block_length(), f.memory(), g.memory()});
    const MarkovMeasure m = mu.with_block_length(l);
    const Eigen::VectorXd fv = on_blocks(m, f);
    const Eigen::VectorXd gv = on_blocks(m, g);
    const auto& c = m.chain;
    const Eigen::VectorXd f_hat = fv.array() - c.pi.dot(fv);
    Eigen::RowVectorXd r = c.pi.cwiseProduct(f_hat).transpose();
    for (int k = 0; k < n; ++k) r = r * c.q;
    // Σ r = 0, so pairing with g equals pairing with g − E[g]
    return r.dot(gv);
}

VarianceReport asymptotic_variance(const MarkovMeasure& mu, const FiniteMemoryFunction& psi) {
    const Lifted lf = lift(mu, psi);
    const auto& c = lf.measure.chain;
    const Eigen::VectorXd centered = lf.values.array() - c.pi.dot(lf.values);

    VarianceReport r;
    r.variance = c.pi.dot(centered.cwiseProduct(centered));

    // Green–Kubo: stop after two consecutive terms below 1e-15·Var
    double sum = r.variance;
    if (r.variance > 0.0) {
        Eigen::RowVectorXd row = c.pi.cwiseProduct(centered).transpose();
        int small = 0;
        const int cap = 10'000'000;
        int k = 1;
        for (; k <= cap; ++k) {
            row = row * c.q;
            const double ck = row.dot(centered);
            sum += 2.0 * ck;
            small = std::abs(ck) < 1e-15 * r.variance ? small + 1 : 0;
            if (small >= 2) break;
        }
        if (k > cap) throw Error(ErrorKind::NoConvergence, "Green-Kubo series did not settle");
        r.terms = k;
    }
    r.green_kubo = sum;

    // resolvent: (I − Q + 1πᵀ)u = Qψ̂; the rank-one term pins π·u = 0
    const int n = c.size();
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - c.q + Eigen::VectorXd::Ones(n) * c.pi.transpose();
    const Eigen::VectorXd rhs = c.q * centered;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) throw Error(ErrorKind::SolveFailure, "resolvent system is singular");
    const Eigen::VectorXd u = lu.solve(rhs);
    const double residual = (a * u - rhs).lpNorm<Eigen::Infinity>();
    if (!(residual <= 1e-9 * std::max(1.0, rhs.lpNorm<Eigen::Infinity>())))
        throw Error(ErrorKind::SolveFailure, "resolvent solve is ill-conditioned");
    r.resolvent = r.variance + 2.0 * c.pi.dot(centered.cwiseProduct(u));
    r.value = r.resolvent;

    if (std::abs(r.green_kubo - r.resolvent) > 1e-9 * std::max(1.0, std::abs(r.resolvent)))
        throw Error(ErrorKind::SolveFailure, "Green-Kubo and resolvent variances disagree");
    return r;
}

double finite_variance(const MarkovMeasure& mu, const FiniteMemoryFunction& psi, int n) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
    const Lifted lf = lift(mu, psi);
    const auto& c = lf.measure.chain;
    const Eigen::VectorXd centered = lf.values.array() - c.pi.dot(lf.values);
    const std::vector<double> ck = autocorrelations(c, centered, n);
    double v = n * ck[0];
    for (int k = 1; k < n; ++k) v += 2.0 * (n - k) * ck[k];
    return v;
}

CohomologyReport cohomology_check(const MarkovMeasure& mu, const FiniteMemoryFunction& psi, double tol) {
    const Lifted lf = lift(mu, psi);
    const auto& c = lf.measure.chain;
    const auto& graph = c.blocks.space;
    const int n = c.size();
    CohomologyReport r;
    r.mean = c.pi.dot(lf.values);
    const Eigen::VectorXd centered = lf.values.array() - r.mean;

    // ψ̂(u) = U(u) − U(w) along every edge u → w
    Eigen::VectorXd u = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::quiet_NaN());
    u(0) = 0.0;
    std::deque<int> queue{0};
    while (!queue.empty()) {
        const int x = queue.front();
        queue.pop_front();
        for (int y = 0; y < n; ++y) {
            if (graph.allowed(x, y) && std::isnan(u(y))) {
                u(y) = u(x) - centered(x);
                queue.push_back(y);
            }
            if (graph.allowed(y, x) && std::isnan(u(y))) {
                u(y) = centered(y) + u(x);
                queue.push_back(y);
            }
        }
    }
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (graph.allowed(x, y)) r.max_defect = std::max(r.max_defect, std::abs(centered(x) - u(x) + u(y)));
    r.degenerate = r.max_defect <= tol * std::max(1.0, lf.values.lpNorm<Eigen::Infinity>());
    r.blocks = c.blocks.blocks;
    r.witness = std::move(u);
    return r;
}

Cumulant::Cumulant(FiniteMemoryFunction phi, FiniteMemoryFunction psi, SolverOptions opts)
    : phi_(std::move(phi)), psi_(std::move(psi)), opts_(opts), state_(std::make_shared<State>()) {
    if (!(phi_.space() == psi_.space())) throw Error(ErrorKind::InvalidArgument, "observable lives on another shift");
}

Cumulant::Point& Cumulant::point(double s, bool with_measure) const {
    {
        std::lock_guard lock(state_->mutex);
        auto it = state_->cache.find(s);
        if (it != state_->cache.end() && (!with_measure || it->second.measure)) return it->second;
    }
    const FiniteMemoryFunction f = s == 0.0 ? phi_ : affine_combine(phi_, psi_, s);
    const SolvedSystem sys = solve(f, opts_);
    Point p;
    p.pressure = sys.eigen.pressure;
    if (with_measure) p.measure = gibbs_measure(sys.transfer, sys.eigen);
    std::lock_guard lock(state_->mutex);
    auto [it, inserted] = state_->cache.try_emplace(s, std::move(p));
    if (!inserted && with_measure && !it->second.measure) it->second = std::move(p);
    return it->second;
}

double Cumulant::base_pressure() const { return point(0.0, false).pressure; }
double Cumulant::pressure(double s) const { return point(s, false).pressure; }
double Cumulant::operator()(double s) const { return s == 0.0 ? 0.0 : pressure(s) - base_pressure(); }
GibbsMeasure Cumulant::measure(double s) const { return *point(s, true).measure; }

double Cumulant::derivative(double s) const {
    Point& p = point(s, true);
    std::lock_guard lock(state_->mutex);
    if (!p.mean) p.mean = expectation(p.measure->measure, psi_);
    return *p.mean;
}

double Cumulant::second_derivative(double s) const {
    Point& p = point(s, true);
    {
        std::lock_guard lock(state_->mutex);
        if (p.variance) return *p.variance;
    }
    const double v = asymptotic_variance(p.measure->measure, psi_).value;
    std::lock_guard lock(state_->mutex);
    p.variance = v;
    return v;
}

std::pair<double, double> attainable_range(const Cumulant& c, double s_max) {
    return {c.derivative(-s_max), c.derivative(s_max)};
}

RateFunctionPoint rate_function(const Cumulant& c, double t, double s_max) {
    if (!std::isfinite(t)) throw Error(ErrorKind::OutOfRange, "t must be finite");
    const auto [lo_t, hi_t] = attainable_range(c, s_max);
    if (hi_t - lo_t <= 1e-12 * std::max(1.0, std::abs(hi_t))) {
        // ψ is cohomologous to a constant: I is 0 at that constant and +∞ elsewhere
        if (std::abs(t - c.derivative(0.0)) <= 1e-9 * std::max(1.0, std::abs(t))) return {t, 0.0, 0.0, 0.0};
        throw Error(ErrorKind::OutOfRange, "observable is cohomologous to a constant");
    }
    if (!(t > lo_t && t < hi_t)) throw Error(ErrorKind::OutOfRange, "t outside the attainable-mean interval");

    const double ftol = 1e-14 * std::max(1.0, std::abs(t));
    double lo = -s_max, hi = s_max;
    double s = 0.0;
    bool converged = false;
    for (int iter = 0; iter < 400; ++iter) {
        const double g = c.derivative(s) - t;
        if (std::abs(g) <= ftol) {
            converged = true;
            break;
        }
        (g < 0.0 ? lo : hi) = s;
        if (hi - lo <= 1e-15 * std::max(1.0, std::abs(s))) {
            converged = true;
            break;
        }
        // Newton while the bracket is narrow enough to trust the local model
        double next = std::numeric_limits<double>::quiet_NaN();
        if (hi - lo < 1.0) {
            const double curv = c.second_derivative(s);
            if (curv > 0.0) next = s - g / curv;
        }
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == s) {
            converged = true;
            break;
        }
        s = next;
    }
    if (!converged) throw Error(ErrorKind::NoConvergence, "rate-function solve did not converge");
    const double lam = c(s);
    return {t, s, std::max(0.0, s * t - lam), lam};
}

DerivativeCheck pressure_derivative_check(const FiniteMemoryFunction& phi, const FiniteMemoryFunction& psi,
                                          double step) {
    if (!(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "step must be positive");
    const Cumulant c(phi, psi);
    const double p0 = c.pressure(0.0), pp = c.pressure(step), pm = c.pressure(-step);
    DerivativeCheck r;
    r.fd_first = (pp - pm) / (2.0 * step);
    r.fd_second = (pp - 2.0 * p0 + pm) / (step * step);
    r.analytic_first = c.derivative(0.0);
    r.analytic_second = c.second_derivative(0.0);
    r.first_error = std::abs(r.fd_first - r.analytic_first);
    r.second_error = std::abs(r.fd_second - r.analytic_second);
    return r;
}

double LatticeDistribution::mean() const {
    double m = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) m += probs[k] * value(k);
    return m;
}

double LatticeDistribution::variance() const {
    const double m = mean();
    double v = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) v += probs[k] * (value(k) - m) * (value(k) - m);
    return v;
}

Lattice detect_lattice(const FiniteMemoryFunction& psi, double tol) {
    std::vector<double> values;
    for (const auto& [w, v] : psi.table()) values.push_back(v);
    const double a = *std::min_element(values.begin(), values.end());
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, v - a);
    const double eps = tol * std::max(1.0, scale);
    auto euclid = [eps](double x, double y) {
        while (y > eps) {
            double r = std::fmod(x, y);
            if (y - r <= eps) r = 0.0;
            x = y;
            y = r;
        }
        return x;
    };
    double b = 0.0;
    for (double v : values) {
        const double d = v - a;
        if (d <= eps) continue;
        b = b == 0.0 ? d : euclid(std::max(b, d), std::min(b, d));
    }
    if (b == 0.0) return {a, 0.0};
    constexpr double max_index = 1e6;
    for (double v : values) {
        const double q = (v - a) / b;
        if (q > max_index || std::abs(q - std::round(q)) * b > eps)
            throw Error(ErrorKind::NotLattice, "observable values are not commensurable");
    }
    return {a, b};
}

LatticeDistribution exact_birkhoff_distribution(const MarkovMeasure& mu, const FiniteMemoryFunction& psi, int n,
                                                kernels::Execution exec, double cell_cap) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
    const Lattice lat = detect_lattice(psi);
    const Lifted lf = lift(mu, psi);
    const auto& c = lf.measure.chain;
    const int states = c.size();
    const double span = lat.span > 0.0 ? lat.span : 1.0;

    kernels::DpStep step;
    step.states = states;
    step.incoming.resize(states);
    step.increment.resize(states);
    for (int w = 0; w < states; ++w) {
        step.increment[w] = static_cast<int>(std::lround((lf.values(w) - lat.offset) / span));
        step.max_increment = std::max(step.max_increment, step.increment[w]);
        for (int u = 0; u < states; ++u)
            if (c.q(u, w) > 0.0) step.incoming[w].emplace_back(u, c.q(u, w));
    }
    const double final_width = static_cast<double>(n) * step.max_increment + 1.0;
    if (static_cast<double>(n) * states * final_width > cell_cap)
        throw Error(ErrorKind::SizeGuard, "Birkhoff distribution exceeds the DP cell cap");

    int width = step.max_increment + 1;
    std::vector<double> cur(static_cast<std::size_t>(states) * width, 0.0), next;
    for (int u = 0; u < states; ++u) cur[static_cast<std::size_t>(u) * width + step.increment[u]] = c.pi(u);
    for (int j = 1; j < n; ++j) {
        if (exec == kernels::Execution::Parallel)
            kernels::parallel::dp_step(step, cur, width, next);
        else
            kernels::serial::dp_step(step, cur, width, next);
        width += step.max_increment;
        cur.swap(next);
    }
    LatticeDistribution d;
    d.n = n;
    d.offset = lat.offset;
    d.span = span;
    d.probs.assign(width, 0.0);
    for (int u = 0; u < states; ++u)
        for (int k = 0; k < width; ++k) d.probs[k] += cur[static_cast<std::size_t>(u) * width + k];
    return d;
}

CltDiagnostics clt_diagnostics(const LatticeDistribution& d, double mean, double xi2) {
    if (!(xi2 > 0.0)) throw Error(ErrorKind::DegenerateVariance, "asymptotic variance is zero");
    const double scale = std::sqrt(xi2 * d.n);
    double below = 0.0, ks = 0.0;
    for (std::size_t k = 0; k < d.probs.size(); ++k) {
        const double phi = normal_cdf((d.value(k) - d.n * mean) / scale);
        const double at = below + d.probs[k];
        ks = std::max({ks, std::abs(below - phi), std::abs(at - phi)});
        below = at;
    }
    return {d.n, ks, std::sqrt(static_cast<double>(d.n)) * ks};
}

double local_limit_check(const LatticeDistribution& d, double mean, double xi2) {
    if (!(xi2 > 0.0)) throw Error(ErrorKind::DegenerateVariance, "asymptotic variance is zero");
    const double xi_rootn = std::sqrt(xi2 * d.n);
    const double inv_root_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    double worst = 0.0;
    for (std::size_t k = 0; k < d.probs.size(); ++k) {
        if (d.probs[k] <= 0.0) continue;
        const double z = (d.value(k) - d.n * mean) / xi_rootn;
        worst = std::max(worst, std::abs(xi_rootn * d.probs[k] / d.span - inv_root_2pi * std::exp(-0.5 * z * z)));
    }
    return worst;
}

std::vector<LdpRow> ldp_empirical(const std::vector<LatticeDistribution>& laws, double a, double b, double mean,
                                  const std::function<double(double)>& rate) {
    if (!(a <= b)) throw Error(ErrorKind::InvalidArgument, "interval must satisfy a <= b");
    double rate_inf = 0.0;
    if (mean < a)
        rate_inf = rate(a);
    else if (mean > b)
        rate_inf = rate(b);
    std::vector<LdpRow> rows;
    for (const auto& d : laws) {
        LdpRow row;
        row.n = d.n;
        for (std::size_t k = 0; k < d.probs.size(); ++k) {
            const double t = d.value(k) / d.n;
            if (t >= a - 1e-9 && t <= b + 1e-9) row.probability += d.probs[k];
        }
        row.rate_inf = rate_inf;
        if (row.probability > 0.0) {
            row.empirical_rate = -std::log(row.probability) / d.n;
            row.gap = std::abs(row.empirical_rate - rate_inf);
        } else {
            row.zero_probability = true;
            row.empirical_rate = row.gap = std::numeric_limits<double>::infinity();
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace gibbslab
