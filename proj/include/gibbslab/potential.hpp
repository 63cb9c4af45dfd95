#pragma once

#include <functional>
#include <map>
#include <span>
#include <vector>

#include "gibbslab/shift_space.hpp"

namespace gibbslab {

/// A potential or observable depending on the first `memory` coordinates,
/// stored as a value table over the admissible m-words of its shift space.
class FiniteMemoryFunction {
public:
    static constexpr double kDefaultAlpha = 0.5;

    /// Every admissible m-word must be present; inadmissible keys are rejected.
    static FiniteMemoryFunction from_table(const ShiftSpace& space, int memory,
                                           const std::map<Word, double>& values,
                                           double alpha = kDefaultAlpha);
    static FiniteMemoryFunction from_function(const ShiftSpace& space, int memory,
                                              const std::function<double(std::span<const Symbol>)>& fn,
                                              double alpha = kDefaultAlpha);
    static FiniteMemoryFunction constant(const ShiftSpace& space, double c, double alpha = kDefaultAlpha);

    const ShiftSpace& space() const noexcept { return space_; }
    int memory() const noexcept { return memory_; }
    double alpha() const noexcept { return alpha_; }

    /// Value on any word of length >= memory (only the leading m symbols matter).
    double operator()(std::span<const Symbol> word) const;

    /// (word, value) pairs over admissible m-words, lexicographic.
    std::vector<std::pair<Word, double>> table() const;

    double var(int n) const;
    double total_variation() const;
    double holder_seminorm(double alpha) const;
    double sup_norm() const;
    double min_value() const;
    double max_value() const;

    /// Σ_{k<n} f(x_k … x_{k+m−1}); throws TooShort when |x| < n + m − 1.
    double birkhoff_sum(std::span<const Symbol> x, int n) const;

    /// Same function viewed with a larger memory (extra coordinates ignored).
    FiniteMemoryFunction lifted(int memory) const;

    /// Same table with a different metric parameter.
    FiniteMemoryFunction with_alpha(double alpha) const;

private:
    FiniteMemoryFunction(ShiftSpace space, int memory, std::vector<double> values, double alpha)
        : space_(std::move(space)), memory_(memory), values_(std::move(values)), alpha_(alpha) {}

    std::size_t code(std::span<const Symbol> word) const;

    ShiftSpace space_;
    int memory_;
    std::vector<double> values_;  // indexed by base-N code; NaN off the admissible set
    double alpha_;
};

/// f + s·g at memory max(m_f, m_g).
FiniteMemoryFunction affine_combine(const FiniteMemoryFunction& f, const FiniteMemoryFunction& g, double s);

/// f + c.
FiniteMemoryFunction add_constant(const FiniteMemoryFunction& f, double c);

/// Indicator of x_0 == symbol.
FiniteMemoryFunction indicator(const ShiftSpace& space, Symbol symbol);

}  // namespace gibbslab
