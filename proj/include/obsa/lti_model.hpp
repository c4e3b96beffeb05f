#pragma once

#include "obsa/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace obsa {

/// Linear discrete-time plant x_{k+1} = A x_k, y_k = C x_k.
///
/// Dimensions are inferred from the matrix shapes: A is n x n and C is m x n.
/// The optional scale vectors carry physical rated values used for
/// normalization; absent means the model is already dimensionless.
struct LdtSystem {
    std::string name;
    Matrix A;
    Matrix C;
    std::optional<Vector> rated_states;   // n entries, > 0
    std::optional<Vector> rated_outputs;  // m entries, > 0
    std::optional<Vector> shared_ranges;  // n entries, > 0

    int state_dim() const { return static_cast<int>(A.rows()); }
    int output_dim() const { return static_cast<int>(C.rows()); }
};

/// Bounded measurement-noise family: a norm bound applied either to every
/// sample w_k or to the stacked sequence W_N.
struct NoiseModel {
    enum class Scope { per_sample, sequence };
    enum class Norm { one, two, infinity };

    Scope scope = Scope::sequence;
    Norm norm = Norm::two;
    double bound = 1.0;

    /// Only the sequence two-norm (energy) model has ellipsoid theory behind it.
    bool is_sequence_energy() const {
        return scope == Scope::sequence && norm == Norm::two;
    }
};

struct NormalizationSpec {
    enum class Mode { rated, shared_range };

    /// divide_output maps each output into [-1, 1] by dividing with its rated
    /// value (the physically consistent choice and the default);
    /// multiply_output applies the scale as a plain gain instead.
    enum class Direction { divide_output, multiply_output };

    Mode mode = Mode::rated;
    Vector state_scale;   // diagonal of P, length n, > 0
    Vector output_scale;  // per-output scale, length m, > 0
    Direction direction = Direction::divide_output;
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
};

/// Controllability-side pair (A_c, B_c) obtained by transposition.
struct DualSystem {
    std::string name;
    Matrix A;  // A_c = A^T
    Matrix B;  // B_c = C^T
};

/// Checks dimension consistency, finiteness and scale positivity. Collects
/// every problem instead of stopping at the first one; never throws.
ValidationReport validate_system(const LdtSystem& sys);

/// Similarity transform with P = diag(state_scale) plus output scaling:
/// returns (P^-1 A P, C' P) where C' depends on spec.direction.
LdtSystem normalize_rated(const LdtSystem& sys, const NormalizationSpec& spec);

/// Same transform driven by shared target intervals (spec.mode = shared_range).
LdtSystem normalize_shared(const LdtSystem& sys, const NormalizationSpec& spec);

DualSystem dualize(const LdtSystem& sys);
LdtSystem dualize(const DualSystem& dual);

/// Builds the rated-mode spec from the system's own rated vectors
/// (all-ones for any that are absent).
NormalizationSpec rated_spec_for(const LdtSystem& sys,
                                 NormalizationSpec::Direction direction =
                                     NormalizationSpec::Direction::divide_output);

/// Shared-range spec: P from shared_ranges, output scale from rated_outputs.
NormalizationSpec shared_spec_for(const LdtSystem& sys,
                                  NormalizationSpec::Direction direction =
                                      NormalizationSpec::Direction::divide_output);

}  // namespace obsa
