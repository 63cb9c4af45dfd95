#include "gibbslab/cone.hpp"

#include <cmath>
#include <limits>

#include "gibbslab/error.hpp"
#include "gibbslab/transfer.hpp"

namespace gibbslab {

namespace {

void require_positive(const Eigen::VectorXd& v, const char* name) {
    if (v.size() == 0) throw Error(ErrorKind::InvalidArgument, std::string(name) + " is empty");
    for (int i = 0; i < v.size(); ++i)
        if (!(v(i) > 0.0)) throw Error(ErrorKind::NonPositive, std::string(name) + " has a non-positive entry");
}

}  // namespace

double hilbert_metric(const Eigen::VectorXd& f, const Eigen::VectorXd& g) {
    require_positive(f, "f");
    require_positive(g, "g");
    if (f.size() != g.size()) throw Error(ErrorKind::InvalidArgument, "vectors differ in length");
    // log-space keeps tiny ratios from underflowing
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < f.size(); ++i) {
        const double r = std::log(f(i)) - std::log(g(i));
        hi = std::max(hi, r);
        lo = std::min(lo, r);
    }
    return hi - lo;
}

double oscillation_ratio(const Eigen::VectorXd& g) {
    require_positive(g, "g");
    return g.maxCoeff() / g.minCoeff();
}

bool in_cone(const Eigen::VectorXd& g, double delta) {
    require_positive(g, "g");
    return std::log(g.maxCoeff()) - std::log(g.minCoeff()) <= delta;
}

double ConeConstants::kappa(double delta) const {
    if (!(delta > threshold_delta)) throw Error(ErrorKind::OutOfRange, "kappa needs delta > delta'");
    return std::tanh(delta_prime / 4.0) / std::tanh(delta / 4.0);
}

ConeConstants cone_constants(const FiniteMemoryFunction& potential) {
    const ShiftSpace& s = potential.space();
    const int m = s.mixing_time();
    ConeConstants c;
    c.delta_prime = m * potential.var(0) + potential.total_variation() + m * std::log(s.alphabet_size());
    c.n0 = 2 * m;
    c.threshold_delta = c.delta_prime;
    return c;
}

bool ContractionTrace::within_kappa(double slack) const {
    for (const auto& s : steps)
        if (s.step > 0 && s.in_cone && s.factor > kappa + slack) return false;
    return true;
}

ContractionTrace contraction_trace(const TransferSystem& t, const EigenData& e, const Eigen::VectorXd& f,
                                   const Eigen::VectorXd& g, int k, double delta) {
    if (k < 1) throw Error(ErrorKind::InvalidArgument, "trace length must be >= 1");
    const ConeConstants cc = cone_constants(t.potential);
    ContractionTrace tr;
    tr.delta = delta > 0.0 ? delta : 2.0 * cc.delta_prime;
    tr.kappa = cc.kappa(tr.delta);

    // 𝓛^{n₀} on functions, scaled by λ^{-n₀}
    const Eigen::MatrixXd op = t.matrix.transpose() / e.lambda;
    Eigen::MatrixXd block = Eigen::MatrixXd::Identity(t.size(), t.size());
    for (int i = 0; i < cc.n0; ++i) block = op * block;

    if ((block.array() > 0.0).all()) {
        double diam = 0.0;
        const int n = t.size();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        diam = std::max(diam, std::log(block(i, a)) + std::log(block(j, b)) - std::log(block(j, a)) -
                                                  std::log(block(i, b)));
        tr.image_diameter = diam;
        tr.birkhoff_bound = std::tanh(diam / 4.0);
    } else {
        tr.image_diameter = std::numeric_limits<double>::infinity();
        tr.birkhoff_bound = 1.0;
    }

    Eigen::VectorXd x = f, y = g;
    double prev = hilbert_metric(x, y);
    tr.steps.push_back({0, prev, 0.0, in_cone(x, tr.delta) && in_cone(y, tr.delta)});
    for (int j = 1; j <= k; ++j) {
        const bool pre_in_cone = in_cone(x, tr.delta) && in_cone(y, tr.delta);
        x = block * x;
        y = block * y;
        x /= x.maxCoeff();
        y /= y.maxCoeff();
        const double theta = hilbert_metric(x, y);
        // below this θ the ratio is rounding noise
        const double factor = prev > 1e-12 ? theta / prev : 0.0;
        tr.steps.push_back({j, theta, factor, pre_in_cone});
        prev = theta;
    }
    return tr;
}

}  // namespace gibbslab
