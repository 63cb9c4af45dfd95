#include "gibbslab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gibbslab/error.hpp"

namespace gibbslab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_word(const Word& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(w[i] + 1);
    }
    return s;
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0,1)");
}

}  // namespace

std::size_t FiniteMemoryFunction::code(std::span<const Symbol> word) const {
    std::size_t c = 0;
    const auto n = static_cast<std::size_t>(space_.alphabet_size());
    for (int k = 0; k < memory_; ++k) c = c * n + static_cast<std::size_t>(word[k]);
    return c;
}

FiniteMemoryFunction FiniteMemoryFunction::from_function(const ShiftSpace& space, int memory,
                                                         const std::function<double(std::span<const Symbol>)>& fn,
                                                         double alpha) {
    if (memory < 1) throw Error(ErrorKind::InvalidArgument, "memory must be >= 1");
    check_alpha(alpha);
    check_enumeration_size(std::pow(static_cast<double>(space.alphabet_size()), memory), "potential table");
    std::size_t size = 1;
    for (int k = 0; k < memory; ++k) size *= static_cast<std::size_t>(space.alphabet_size());
    FiniteMemoryFunction f(space, memory, std::vector<double>(size, kNaN), alpha);
    for (const Word& w : space.enumerate_words(memory)) f.values_[f.code(w)] = fn(w);
    return f;
}

FiniteMemoryFunction FiniteMemoryFunction::from_table(const ShiftSpace& space, int memory,
                                                      const std::map<Word, double>& values, double alpha) {
    for (const auto& [w, v] : values) {
        if (static_cast<int>(w.size()) != memory)
            throw Error(ErrorKind::Schema, "word '" + format_word(w) + "' does not have length " + std::to_string(memory));
        if (!space.admissible(w)) throw Error(ErrorKind::Schema, "word '" + format_word(w) + "' is not admissible");
        if (!std::isfinite(v)) throw Error(ErrorKind::Schema, "value for '" + format_word(w) + "' is not finite");
    }
    return from_function(
        space, memory,
        [&](std::span<const Symbol> w) {
            auto it = values.find(Word(w.begin(), w.end()));
            if (it == values.end())
                throw Error(ErrorKind::Schema, "missing value for admissible word '" + format_word(Word(w.begin(), w.end())) + "'");
            return it->second;
        },
        alpha);
}

FiniteMemoryFunction FiniteMemoryFunction::constant(const ShiftSpace& space, double c, double alpha) {
    return from_function(space, 1, [c](std::span<const Symbol>) { return c; }, alpha);
}

double FiniteMemoryFunction::operator()(std::span<const Symbol> word) const {
    if (static_cast<int>(word.size()) < memory_)
        throw Error(ErrorKind::TooShort, "word shorter than the memory");
    const double v = values_[code(word)];
    if (std::isnan(v)) throw Error(ErrorKind::InvalidArgument, "word is not admissible");
    return v;
}

std::vector<std::pair<Word, double>> FiniteMemoryFunction::table() const {
    std::vector<std::pair<Word, double>> out;
    for (const Word& w : space_.enumerate_words(memory_)) out.emplace_back(w, values_[code(w)]);
    return out;
}

double FiniteMemoryFunction::var(int n) const {
    if (n < 0) throw Error(ErrorKind::InvalidArgument, "variation scale must be >= 0");
    if (n >= memory_) return 0.0;
    // group m-words by their first n symbols; words are lexicographic so groups are contiguous
    const auto t = table();
    double result = 0.0;
    std::size_t start = 0;
    while (start < t.size()) {
        std::size_t end = start;
        double lo = t[start].second, hi = lo;
        while (end < t.size() && std::equal(t[start].first.begin(), t[start].first.begin() + n, t[end].first.begin())) {
            lo = std::min(lo, t[end].second);
            hi = std::max(hi, t[end].second);
            ++end;
        }
        result = std::max(result, hi - lo);
        start = end;
    }
    return result;
}

double FiniteMemoryFunction::total_variation() const {
    double v = 0.0;
    for (int n = 0; n < memory_; ++n) v += var(n);
    return v;
}

double FiniteMemoryFunction::holder_seminorm(double alpha) const {
    check_alpha(alpha);
    double s = 0.0;
    for (int n = 0; n < memory_; ++n) s = std::max(s, var(n) / std::pow(alpha, n));
    return s;
}

double FiniteMemoryFunction::sup_norm() const {
    return std::max(std::abs(min_value()), std::abs(max_value()));
}

double FiniteMemoryFunction::min_value() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : values_)
        if (!std::isnan(v)) m = std::min(m, v);
    return m;
}

double FiniteMemoryFunction::max_value() const {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : values_)
        if (!std::isnan(v)) m = std::max(m, v);
    return m;
}

double FiniteMemoryFunction::birkhoff_sum(std::span<const Symbol> x, int n) const {
    if (n < 0) throw Error(ErrorKind::InvalidArgument, "n must be >= 0");
    if (static_cast<long>(x.size()) < static_cast<long>(n) + memory_ - 1)
        throw Error(ErrorKind::TooShort, "point prefix too short for the Birkhoff sum");
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += (*this)(x.subspan(k, memory_));
    return s;
}

FiniteMemoryFunction FiniteMemoryFunction::lifted(int memory) const {
    if (memory < memory_) throw Error(ErrorKind::InvalidArgument, "cannot lower the memory of a function");
    if (memory == memory_) return *this;
    return from_function(space_, memory, [this](std::span<const Symbol> w) { return (*this)(w); }, alpha_);
}

FiniteMemoryFunction FiniteMemoryFunction::with_alpha(double alpha) const {
    check_alpha(alpha);
    FiniteMemoryFunction f = *this;
    f.alpha_ = alpha;
    return f;
}

FiniteMemoryFunction affine_combine(const FiniteMemoryFunction& f, const FiniteMemoryFunction& g, double s) {
    if (!(f.space() == g.space())) throw Error(ErrorKind::InvalidArgument, "functions live on different shift spaces");
    const int m = std::max(f.memory(), g.memory());
    return FiniteMemoryFunction::from_function(
        f.space(), m, [&](std::span<const Symbol> w) { return f(w) + s * g(w); }, f.alpha());
}

FiniteMemoryFunction add_constant(const FiniteMemoryFunction& f, double c) {
    return FiniteMemoryFunction::from_function(
        f.space(), f.memory(), [&](std::span<const Symbol> w) { return f(w) + c; }, f.alpha());
}

FiniteMemoryFunction indicator(const ShiftSpace& space, Symbol symbol) {
    if (symbol < 0 || symbol >= space.alphabet_size()) throw Error(ErrorKind::InvalidArgument, "symbol out of range");
    return FiniteMemoryFunction::from_function(space, 1, [symbol](std::span<const Symbol> w) {
        return w[0] == symbol ? 1.0 : 0.0;
    });
}

}  // namespace gibbslab
