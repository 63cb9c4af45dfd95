#include <doctest.h>

#include <cmath>

#include "gibbslab/builtins.hpp"
#include "gibbslab/sampler.hpp"
#include "gibbslab/stats.hpp"

using namespace gibbslab;
using doctest::Approx;
using kernels::Execution;

namespace {

// Reference SplitMix64 (Vigna): state += golden; mix(state).
struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

std::uint64_t finalizer(std::uint64_t z) {
    SplitMix64 s{z - 0x9e3779b97f4a7c15ULL};
    return s.next();
}

// upper 1e-4 quantiles of χ² with 1, 2, 3 degrees of freedom
double chi2_threshold(int dof) {
    switch (dof) {
        case 1: return 15.13671;
        case 2: return 18.42068;
        case 3: return 21.10751;
        case 4: return 23.51274;
        case 5: return 25.74483;
        case 6: return 27.85634;
        default: return std::numeric_limits<double>::infinity();
    }
}

GibbsMeasure builtin_gibbs(const std::string& name, const BuiltinParams& p = {}) {
    return gibbs_measure(builtin_model(name, p).potential);
}

}  // namespace

TEST_CASE("counter generator is SplitMix64 keyed per stream") {
    for (std::uint64_t seed : {0ULL, 42ULL, 0xdeadbeefULL})
        for (std::uint64_t stream : {0ULL, 1ULL, 977ULL}) {
            const std::uint64_t key = finalizer(seed ^ finalizer(stream + 0x632be59bd9b4e019ULL));
            CHECK(CounterRng::mix64(stream) == finalizer(stream));
            SplitMix64 ref{key};
            CounterRng rng(seed, stream);
            for (int i = 0; i < 20; ++i) CHECK(rng.next() == ref.next());
        }
    CounterRng r(7, 0);
    for (int i = 0; i < 1000; ++i) {
        const double u = r.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    CHECK(CounterRng(1, 0).next() != CounterRng(1, 1).next());
    CHECK(CounterRng(1, 0).next() != CounterRng(2, 0).next());
}

TEST_CASE("paths are reproducible and admissible") {
    const auto b = builtin_gibbs("bernoulli");
    CHECK(sample_path(b.measure, 500, 9) == sample_path(b.measure, 500, 9));
    CHECK(sample_path(b.measure, 500, 9) != sample_path(b.measure, 500, 10));
    CHECK(sample_path(b.measure, 500, 9) == sample_trial_path(b.measure, 500, 9, 0));

    // first symbols straight from the reference generator through the inverse CDF
    const Word p = sample_path(b.measure, 8, 123);
    CounterRng rng(123, 0);
    for (int i = 0; i < 8; ++i) CHECK(p[i] == (rng.uniform() < 0.7 ? 0 : 1));

    const auto g = builtin_gibbs("golden-mean");
    const Word gp = sample_path(g.measure, 100000, 5);
    CHECK(gp.size() == 100000);
    for (std::size_t i = 1; i < gp.size(); ++i) REQUIRE_FALSE((gp[i - 1] == 1 && gp[i] == 1));

    const auto is2 = builtin_gibbs("ising", {.beta = 0.3, .field = 0.2});
    const auto lifted = is2.measure.with_block_length(3);
    const Word lp = sample_path(lifted, 50, 1);
    CHECK(lp.size() == 50);
    CHECK(sample_path(lifted, 2, 1).size() == 2);
}

TEST_CASE("symbol frequency") {
    const auto b = builtin_gibbs("bernoulli");
    const int n = 100000;
    const Word p = sample_path(b.measure, n, 2024);
    double ones = 0;
    for (Symbol s : p) ones += s == 0;
    CHECK(std::abs(ones / n - 0.7) <= 4.0 * std::sqrt(0.21 / n));
}

TEST_CASE("transition chi-square does not reject on the built-ins") {
    const std::vector<GibbsMeasure> ms = {builtin_gibbs("bernoulli"), builtin_gibbs("ising"),
                                          builtin_gibbs("golden-mean"),
                                          builtin_gibbs("ising", {.beta = 0.4, .field = 0.5})};
    for (const auto& g : ms) {
        const auto cs = transition_chi_square(g.measure, sample_path(g.measure, 100000, 77));
        CHECK(cs.dof >= 1);
        CHECK(cs.statistic < chi2_threshold(cs.dof));
    }
    // a path from the wrong chain is rejected
    const auto fair = builtin_gibbs("bernoulli", {.p = 0.5});
    const auto wrong = transition_chi_square(ms[0].measure, sample_path(fair.measure, 100000, 77));
    CHECK(wrong.statistic > chi2_threshold(wrong.dof));
}

TEST_CASE("empirical Birkhoff sums") {
    const auto b = builtin_gibbs("bernoulli");
    const auto c = empirical_birkhoff(b.measure, FiniteMemoryFunction::constant(b.measure.space, 0.5), {.seed = 1, .n = 30, .trials = 50});
    for (double x : c.samples) CHECK(x == 15.0);
    CHECK(c.var_over_n == 0.0);

    const auto ind = indicator(b.measure.space, 0);
    const auto exact = exact_birkhoff_distribution(b.measure, ind, 256);
    const SampleConfig cfg{.seed = 11, .n = 256, .trials = 100000};
    const auto e = empirical_birkhoff(b.measure, ind, cfg, &exact);
    REQUIRE(e.ks.has_value());
    CHECK(*e.ks <= 0.01);
    CHECK(std::abs(e.mean / 256 - 0.7) <= 4 * std::sqrt(0.21) / std::sqrt(256.0 * 100000));

    const auto is = builtin_gibbs("ising");
    const auto spin = builtin_model("ising").observable.value();
    const auto ei = empirical_birkhoff(is.measure, spin, cfg);
    CHECK(ei.var_over_n == Approx(std::exp(2.0)).epsilon(0.05));
    CHECK(std::abs(ei.mean / 256) <= 4 * std::exp(1.0) / std::sqrt(256.0 * 100000));
}

TEST_CASE("trials match their paths and do not depend on the worker count") {
    const auto is = builtin_gibbs("ising", {.beta = 0.5, .field = 0.3});
    const auto spin = builtin_model("ising").observable.value();
    const SampleConfig cfg{.seed = 3, .n = 64, .trials = 2000};
    const auto s = empirical_birkhoff(is.measure, spin, cfg, nullptr, Execution::Serial);
    const auto p = empirical_birkhoff(is.measure, spin, cfg, nullptr, Execution::Parallel);
    CHECK(s.samples == p.samples);
    CHECK(s.mean == p.mean);
    CHECK(s.var_over_n == p.var_over_n);
    for (std::uint64_t t : {0ULL, 17ULL, 1999ULL}) {
        const Word path = sample_trial_path(is.measure, 64, 3, t);
        CHECK(spin.birkhoff_sum(path, 64) == s.samples[t]);
    }
}
