#pragma once

#include "obsa/lti_model.hpp"
#include "obsa/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace obsa {

/// Monte-Carlo containment experiment configuration. Noise draws are keyed by
/// (seed, trial_index), so any execution order reproduces the same streams.
struct BenchConfig {
    enum class Sampling {
        boundary,  // ||W||_2 exactly equal to the noise bound
        interior   // uniform in the energy ball
    };

    int trials = 1;
    std::uint64_t seed = 0;
    int horizon = 16;
    NoiseModel noise{};
    Sampling sampling = Sampling::boundary;
    bool record_trials = false;
};

struct TrialRecord {
    double quadratic_form = 0.0;  // error form against G_{o,N}
    double error_norm = 0.0;
};

struct BenchResult {
    double containment_fraction = 0.0;
    double max_quadratic_form = 0.0;
    double worst_case_error_norm = 0.0;
    int trials = 0;
    std::optional<std::vector<TrialRecord>> records;
};

/// x_hat = G^-1 Q^T Y through a linear solve (no explicit inversion); the
/// horizon is inferred from the stacked output length. Noise-free outputs
/// recover the initial state exactly. Throws UnobservableError when the
/// Gramian is rank deficient.
Vector least_squares_estimate(const LdtSystem& sys, const Vector& stacked_outputs);

/// Deterministic stacked noise draw of length horizon * output_dim for the
/// given trial. Boundary sampling places the vector exactly on the energy
/// sphere; interior sampling is uniform in the ball (radius u^{1/(Nm)}).
Vector sample_noise(const BenchConfig& cfg, int output_dim, int trial_index);

/// Runs the least-squares observer on noisy output sequences and aggregates
/// the realized error quadratic forms against G_{o,N}. The result does not
/// depend on the initial state (the error is a function of the noise only);
/// x0 defaults to the origin. Only the sequence two-norm noise model is
/// supported for containment; other models raise AssumptionError.
BenchResult run_containment_experiment(const LdtSystem& sys,
                                       const BenchConfig& cfg,
                                       const std::optional<Vector>& x0 = {});

/// Covariance error bound ||G_{o,N}^-1||_2 ||Lambda||_2 for the least-squares
/// observer under zero-mean noise with covariance Lambda. Returns +inf when
/// the Gramian is singular.
double covariance_error_bound(const LdtSystem& sys, int steps,
                              const Matrix& covariance);

}  // namespace obsa
