#pragma once

#include <string>
#include <vector>

#include "gibbslab/model_io.hpp"

namespace gibbslab {

struct BuiltinParams {
    double p = 0.7;      // bernoulli: probability of symbol 1
    double beta = 1.0;   // ising coupling
    double field = 0.0;  // ising external field h
    double a = 0.0;      // golden-mean weight on symbol 1
    double alpha = FiniteMemoryFunction::kDefaultAlpha;
};

/// bernoulli:   full 2-shift, φ = log p on symbol 1, log(1−p) on symbol 2;
///              observable 1_[1] − p.
/// ising:       full 2-shift with spins +1 (symbol 1) and −1 (symbol 2),
///              φ = βx₀x₁ + (h/2)(x₀ + x₁); observable x₀.
/// golden-mean: A = [[1,1],[1,0]], φ = a·1_[1]; observable 1_[1].
Model builtin_model(const std::string& name, const BuiltinParams& params = {});

std::vector<std::string> builtin_names();

/// The model's observable, or 1_[1] when it has none.
FiniteMemoryFunction observable_or_default(const Model& m);

}  // namespace gibbslab
