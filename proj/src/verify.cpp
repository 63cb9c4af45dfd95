#include "gibbslab/verify.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "gibbslab/error.hpp"
#include "gibbslab/stats.hpp"
#include "gibbslab/transfer.hpp"

namespace gibbslab {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

}  // namespace

VerifyReport verify_characterizations(const FiniteMemoryFunction& phi, const FiniteMemoryFunction& psi,
                                      const VerifyOptions& opts) {
    const SolvedSystem sys = solve(phi);
    const EigenData& e = sys.eigen;
    const GibbsMeasure g = gibbs_measure(sys.transfer, e);
    VerifyReport r;

    {
        const JacobianCheck j = jacobian_identity(g.measure, g);
        r.entries.push_back({"i", "jacobian", j.max_rel_error, opts.tol, j.max_rel_error <= opts.tol,
                             fmt("relative error against bare exp(P - phi): %.3g", j.max_rel_error_literal)});
    }
    {
        const GibbsScanReport s = gibbs_ratio_scan(g.measure, phi, e.pressure, opts.n_max);
        const double excess = std::max(std::log(s.max_ratio / s.c2), std::log(s.c1 / s.min_ratio));
        std::string detail = fmt("ratios in [%.6g, %.6g]", s.min_ratio, s.max_ratio);
        if (!s.within_band && s.pass) detail += "; V = 0, band stable in n";
        r.entries.push_back({"ii", "gibbs_band", excess, 0.0, s.pass, detail});
    }
    {
        double res_nu = e.residual_nu;
        std::string detail = "solver eigendata";
        if (opts.candidate_nu) {
            Eigen::VectorXd nu = *opts.candidate_nu;
            if (nu.size() != sys.transfer.size())
                throw Error(ErrorKind::InvalidArgument, "candidate nu has the wrong length");
            nu /= nu.sum();
            res_nu = (sys.transfer.matrix * nu - e.lambda * nu).lpNorm<1>();
            detail = "candidate nu";
        }
        const double metric = std::max(e.residual_h, res_nu) / e.lambda;
        r.entries.push_back({"iii", "eigen_residual", metric, opts.tol, metric <= opts.tol, detail});
    }
    {
        const MarkovMeasure& mu = opts.candidate_measure ? *opts.candidate_measure : g.measure;
        const double defect = variational_defect(mu, phi, e.pressure);
        r.entries.push_back({"iv", "variational_defect", std::abs(defect), opts.tol, std::abs(defect) <= opts.tol,
                             fmt("P - h - int(phi) = %.17g", defect)});
    }
    {
        const Cumulant c(phi, psi);
        const double mean = c.derivative(0.0);
        double rate = std::numeric_limits<double>::infinity();
        double curvature = 0.0;
        std::string detail;
        try {
            rate = rate_function(c, mean).rate;
            curvature = c.second_derivative(0.0);
            detail = fmt("mean %.17g, curvature %.17g", mean, curvature);
        } catch (const Error& err) {
            detail = err.what();
        }
        const bool pass = std::abs(rate) <= opts.rate_tol && curvature > 0.0;
        r.entries.push_back({"v", "rate_at_mean", std::abs(rate), opts.rate_tol, pass, detail});
    }
    r.pass = true;
    for (const auto& x : r.entries) r.pass = r.pass && x.pass;
    return r;
}

}  // namespace gibbslab
