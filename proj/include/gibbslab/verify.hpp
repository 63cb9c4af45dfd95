#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gibbslab/gibbs.hpp"
#include "gibbslab/potential.hpp"

namespace gibbslab {

struct VerifyOptions {
    double tol = 1e-10;       // Jacobian, residual and defect checks
    double rate_tol = 1e-9;   // |I(mean)|
    int n_max = 12;           // Gibbs scan depth
    /// Replaces the equilibrium state in the variational check only.
    std::optional<MarkovMeasure> candidate_measure;
    /// Replaces ν in the eigen-residual check only (renormalized to Σν = 1).
    std::optional<Eigen::VectorXd> candidate_nu;
};

struct VerifyEntry {
    std::string id;    // "i" … "v"
    std::string name;
    double metric = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyEntry> entries;
    bool pass = false;
};

/// The five characterizations of the equilibrium state of φ:
///  (i)   shift Jacobian of μ equals e^{P−φ}·h∘σ/h, max relative error
///  (ii)  Gibbs ratio scan within e^{∓2V} (or a stable band when V = 0)
///  (iii) eigen residuals max(‖𝓛h − λh‖∞, ‖𝓛*ν − λν‖₁)/λ
///  (iv)  |P − h(μ) − ∫φ dμ|
///  (v)   |I(∫ψ dμ)| with curvature ξ² > 0
VerifyReport verify_characterizations(const FiniteMemoryFunction& phi, const FiniteMemoryFunction& psi,
                                      const VerifyOptions& opts = {});

}  // namespace gibbslab
