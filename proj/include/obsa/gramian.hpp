#pragma once

#include "obsa/lti_model.hpp"
#include "obsa/types.hpp"

#include <optional>

namespace obsa {

/// A Gramian together with its factor matrix and spectral summary.
///
/// For observability bundles Q is the stacked Nm x n observability matrix and
/// G = Q^T Q; for reachability bundles Q is the n x Nm controllability matrix
/// and G = Q Q^T. Q is absent on infinite horizons. G is symmetrized after
/// computation.
struct GramianBundle {
    Horizon horizon = Horizon::finite(1);
    std::optional<Matrix> Q;
    Matrix G;
    int rank = 0;
    double min_eig = 0.0;
    double max_eig = 0.0;
    double determinant = 0.0;

    int dim() const { return static_cast<int>(G.rows()); }
    bool full_rank() const { return rank == dim(); }
};

struct RankInfo {
    int rank = 0;
    bool is_observable = false;
};

double spectral_radius(const Matrix& a);

/// Stacked block matrix [C; CA; ...; CA^(N-1)].
Matrix observability_matrix(const LdtSystem& sys, int steps);

/// G = sum_{k<N} (C A^k)^T (C A^k). Throws std::overflow_error if the sum
/// leaves the finite range (unstable A at large N).
GramianBundle observability_gramian(const LdtSystem& sys, int steps);

/// Infinite-horizon Gramian, the solution of G = A^T G A + C^T C.
/// Requires spectral radius < 1 - 1e-9; throws AssumptionError otherwise.
/// Solved by a dense Kronecker linearization for n <= 30 and by
/// squaring/doubling accumulation above.
GramianBundle infinite_observability_gramian(const LdtSystem& sys);

/// Dispatches to the finite or infinite observability Gramian.
GramianBundle gramian_for(const LdtSystem& sys, Horizon horizon);

/// G_c = sum_{k<N} A_c^k B_c B_c^T (A_c^k)^T; the infinite case needs
/// spectral radius < 1.
GramianBundle reachability_gramian(const Matrix& a_c, const Matrix& b_c,
                                   Horizon horizon);

/// Numerical rank of the observability matrix at horizon N >= n. Singular
/// values below max(Nm, n) * eps * sigma_max count as zero.
RankInfo observability_rank(const LdtSystem& sys, int steps);

namespace detail {

// Both solve G = A^T G A + S for symmetric S; exposed for cross-checking.
Matrix solve_stein_kronecker(const Matrix& a, const Matrix& s);
Matrix solve_stein_doubling(const Matrix& a, const Matrix& s);

}  // namespace detail

}  // namespace obsa
