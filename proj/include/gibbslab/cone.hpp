#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gibbslab/potential.hpp"

namespace gibbslab {

struct TransferSystem;
struct EigenData;

/// Hilbert projective metric log(max(f/g) / min(f/g)); throws NonPositive.
double hilbert_metric(const Eigen::VectorXd& f, const Eigen::VectorXd& g);

/// sup g / inf g.
double oscillation_ratio(const Eigen::VectorXd& g);

/// g ∈ 𝒫_δ, i.e. sup g / inf g ≤ e^δ.
bool in_cone(const Eigen::VectorXd& g, double delta);

struct ConeConstants {
    double delta_prime = 0.0;  // M var₀ + V + M log N
    int n0 = 0;                // 2M
    double threshold_delta = 0.0;  // κ(δ) < 1 requires δ > this

    /// tanh(δ′/4) / tanh(δ/4).
    double kappa(double delta) const;
};

ConeConstants cone_constants(const FiniteMemoryFunction& potential);

struct TraceStep {
    int step = 0;
    double theta = 0.0;
    double factor = 0.0;   // θ_j / θ_{j−1}; 0 at j = 0
    bool in_cone = true;   // both pre-image iterates inside 𝒫_δ
};

struct ContractionTrace {
    std::vector<TraceStep> steps;
    double delta = 0.0;
    double kappa = 0.0;
    /// Projective diameter Δ of the image of 𝓛^{n₀} and Birkhoff's tanh(Δ/4);
    /// infinite / 1 when 𝓛^{n₀} has a zero entry.
    double image_diameter = 0.0;
    double birkhoff_bound = 1.0;

    /// Every in-cone factor is at most κ + slack.
    bool within_kappa(double slack = 1e-12) const;
};

/// θ(𝓛^{j n₀} f, 𝓛^{j n₀} g) for j = 0..k. `delta` ≤ 0 selects 2δ′.
ContractionTrace contraction_trace(const TransferSystem& t, const EigenData& e, const Eigen::VectorXd& f,
                                   const Eigen::VectorXd& g, int k, double delta = 0.0);

}  // namespace gibbslab
