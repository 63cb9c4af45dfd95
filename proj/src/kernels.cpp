#include "gibbslab/kernels.hpp"

namespace gibbslab::kernels {

int max_threads() {
#ifdef GIBBSLAB_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace {

inline double pull_cell(const DpStep& step, const std::vector<double>& in, int width, int w, int k) {
    const int src = k - step.increment[w];
    if (src < 0 || src >= width) return 0.0;
    double acc = 0.0;
    for (const auto& [u, q] : step.incoming[w]) acc += in[static_cast<std::size_t>(u) * width + src] * q;
    return acc;
}

}  // namespace

namespace serial {

void dp_step(const DpStep& step, const std::vector<double>& in, int width, std::vector<double>& out) {
    const int out_width = width + step.max_increment;
    out.assign(static_cast<std::size_t>(step.states) * out_width, 0.0);
    for (int w = 0; w < step.states; ++w)
        for (int k = 0; k < out_width; ++k)
            out[static_cast<std::size_t>(w) * out_width + k] = pull_cell(step, in, width, w, k);
}

}  // namespace serial

namespace parallel {

void dp_step(const DpStep& step, const std::vector<double>& in, int width, std::vector<double>& out) {
    const int out_width = width + step.max_increment;
    out.assign(static_cast<std::size_t>(step.states) * out_width, 0.0);
    const long cells = static_cast<long>(step.states) * out_width;
#pragma omp parallel for schedule(static)
    for (long c = 0; c < cells; ++c) {
        const int w = static_cast<int>(c / out_width);
        const int k = static_cast<int>(c % out_width);
        out[static_cast<std::size_t>(c)] = pull_cell(step, in, width, w, k);
    }
}

}  // namespace parallel

double ordered_sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

}  // namespace gibbslab::kernels
