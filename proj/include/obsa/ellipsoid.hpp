#pragma once

#include "obsa/gramian.hpp"
#include "obsa/lti_model.hpp"
#include "obsa/types.hpp"

#include <optional>
#include <vector>

namespace obsa {

/// Quadratic-form geometry built from a Gramian G:
///   error_set  = { x : x^T G x <= 1 }      (feasible state-estimation errors)
///   image_set  = { z : z^T G^-1 z <= 1 }   (image of the unit output ball)
struct Ellipsoid {
    enum class Kind { error_set, image_set };
    Kind kind = Kind::error_set;
    Matrix G;
    Horizon horizon = Horizon::finite(1);
};

Ellipsoid error_ellipsoid(const GramianBundle& bundle);
Ellipsoid image_ellipsoid(const GramianBundle& bundle);

/// Radii/volume summary. radii is sorted descending (radii[0] is the longest
/// semi-axis) and axes.col(i) is the unit direction of radii[i]. An error set
/// built from a rank-deficient Gramian has infinite volume, inf radii entries
/// and the null-space directions listed in unbounded_directions.
struct EllipsoidMetrics {
    Vector radii;
    double volume = 0.0;
    double hypersphere_coefficient = 0.0;
    Matrix axes;
    std::vector<Vector> unbounded_directions;

    bool bounded() const { return unbounded_directions.empty(); }
};

/// Unit-ball volume factor H_n = pi^(n/2) / Gamma(n/2 + 1), with Gamma
/// evaluated by the downward recursion seeded at Gamma(1/2) and Gamma(1).
double hypersphere_coefficient(int n);

/// radii_i = mu_{n-i+1}^{-1/2}(G) descending, volume = H_n det(G)^{-1/2}.
EllipsoidMetrics error_ellipsoid_metrics(const GramianBundle& bundle);

/// radii_i = mu_i^{1/2}(G) descending, volume = H_n det(G)^{1/2}.
EllipsoidMetrics image_ellipsoid_metrics(const GramianBundle& bundle);

struct Membership {
    bool inside = false;
    double value = 0.0;  // the quadratic form; 1 on the boundary
};

/// Evaluates the membership quadratic form. Throws UnobservableError for
/// image-set membership with a singular Gramian.
Membership contains(const Ellipsoid& e, const Vector& x);

/// Boundary intersections d * f with d = (f^T G f)^{-1/2} (error set) or
/// d = (f^T G^-1 f)^{-1/2} (image set). Directions must be unit vectors;
/// a direction in the null space raises UnobservableError.
std::vector<Vector> boundary_points(const Ellipsoid& e,
                                    const std::vector<Vector>& directions);

/// Convenience sweep of equally spaced angles for 2-D systems.
std::vector<Vector> boundary_sweep_2d(const Ellipsoid& e, int samples = 256);

/// Smallest N <= n_max whose feasible error set excludes e_b, i.e. the first
/// N with e_b^T G_{o,N} e_b > 1; nullopt when no horizon up to n_max does.
std::optional<int> min_samples_for_error(const LdtSystem& sys, const Vector& e_b,
                                         int n_max);

/// Set containment S_A <= S_B of the error sets, decided through the Loewner
/// order: G_A - G_B has min eigenvalue >= -1e-10 * (1 + ||G_A||_2).
bool feasible_set_containment(const GramianBundle& a, const GramianBundle& b);

}  // namespace obsa
