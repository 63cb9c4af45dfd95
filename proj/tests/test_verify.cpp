#include <doctest.h>

#include "gibbslab/builtins.hpp"
#include "gibbslab/gibbs.hpp"
#include "gibbslab/verify.hpp"

using namespace gibbslab;
using doctest::Approx;

namespace {

std::vector<std::string> failing(const VerifyReport& r) {
    std::vector<std::string> ids;
    for (const auto& e : r.entries)
        if (!e.pass) ids.push_back(e.id);
    return ids;
}

}  // namespace

TEST_CASE("all five characterizations hold on the built-ins") {
    for (const auto& name : builtin_names()) {
        const Model m = builtin_model(name);
        const auto r = verify_characterizations(m.potential, observable_or_default(m));
        REQUIRE(r.entries.size() == 5);
        CHECK(r.entries[0].id == "i");
        CHECK(r.entries[4].id == "v");
        CHECK_MESSAGE(r.pass, name);
        CHECK(failing(r).empty());
    }
    const Model is = builtin_model("ising", {.beta = -0.8, .field = 0.6});
    CHECK(verify_characterizations(is.potential, observable_or_default(is)).pass);
}

TEST_CASE("a fair-coin candidate fails only the variational check") {
    const Model m = builtin_model("bernoulli");
    VerifyOptions opts;
    opts.candidate_measure = product_measure(m.space, {0.5, 0.5});
    const auto r = verify_characterizations(m.potential, observable_or_default(m), opts);
    CHECK_FALSE(r.pass);
    CHECK(failing(r) == std::vector<std::string>{"iv"});
    CHECK(r.entries[3].metric == Approx(-0.5 * std::log(0.21) - std::log(2.0)));
}

TEST_CASE("a perturbed eigenmeasure fails only the residual check") {
    for (const auto& name : builtin_names()) {
        const Model m = builtin_model(name);
        const auto s = solve(m.potential);
        VerifyOptions opts;
        Eigen::VectorXd nu = s.eigen.nu;
        nu(0) *= 1.05;
        opts.candidate_nu = nu;
        const auto r = verify_characterizations(m.potential, observable_or_default(m), opts);
        CHECK(failing(r) == std::vector<std::string>{"iii"});
        // the exact eigenvector rescaled still passes
        opts.candidate_nu = 3.0 * s.eigen.nu;
        CHECK(verify_characterizations(m.potential, observable_or_default(m), opts).pass);
    }
}

TEST_CASE("a cohomologically trivial observable fails the curvature check") {
    const Model m = builtin_model("ising");
    const auto r = verify_characterizations(m.potential, FiniteMemoryFunction::constant(m.space, 1.0));
    CHECK(failing(r) == std::vector<std::string>{"v"});
}
