#pragma once

// Data-parallel kernels. Each kernel has a serial reference and an OpenMP
// variant; both produce bit-identical results (every output cell is computed
// by one thread with a fixed summation order, reductions happen serially).

#include <cstddef>
#include <vector>

#ifdef GIBBSLAB_HAVE_OPENMP
#include <omp.h>
#endif

namespace gibbslab::kernels {

/// Sparse pull-form description of one step of the Birkhoff-sum recursion.
/// Cell (state u, index k) holds P(block = u, accumulated index = k).
struct DpStep {
    int states = 0;
    /// For destination w: sources (u, Q(u→w)) in increasing u.
    std::vector<std::vector<std::pair<int, double>>> incoming;
    /// Lattice increment contributed by entering w.
    std::vector<int> increment;
    int max_increment = 0;
};

enum class Execution { Serial, Parallel };

int max_threads();

namespace serial {

/// out has width `width + step.max_increment` per state.
void dp_step(const DpStep& step, const std::vector<double>& in, int width, std::vector<double>& out);

template <class Item, class Fn>
std::vector<double> map(const std::vector<Item>& items, Fn&& fn) {
    std::vector<double> out(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) out[i] = fn(items[i]);
    return out;
}

template <class Fn>
std::vector<double> generate(std::size_t count, Fn&& fn) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
}

}  // namespace serial

namespace parallel {

void dp_step(const DpStep& step, const std::vector<double>& in, int width, std::vector<double>& out);

template <class Item, class Fn>
std::vector<double> map(const std::vector<Item>& items, Fn&& fn) {
    std::vector<double> out(items.size());
    const auto n = static_cast<long>(items.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) out[i] = fn(items[i]);
    return out;
}

template <class Fn>
std::vector<double> generate(std::size_t count, Fn&& fn) {
    std::vector<double> out(count);
    const auto n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 0; i < n; ++i) out[i] = fn(static_cast<std::size_t>(i));
    return out;
}

}  // namespace parallel

/// Fixed-order sum.
double ordered_sum(const std::vector<double>& v);

}  // namespace gibbslab::kernels
