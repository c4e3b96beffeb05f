#pragma once

#include "obsa/lti_model.hpp"
#include "obsa/types.hpp"

namespace obsa {

/// Eigendecomposition of the state matrix with reporting-friendly
/// normalization: unit 2-norm right eigenvectors whose largest-magnitude
/// entry is rotated to the positive real axis, eigenvalues sorted by
/// (real, imag). Every quantity derived from it downstream is invariant
/// under the phase choice.
struct EigenStructure {
    ComplexVector eigenvalues;
    ComplexMatrix right_eigenvectors;  // columns p_i
    double det_p_abs = 0.0;
    bool distinct = false;
    double max_modulus = 0.0;
    double min_gap = 0.0;  // min pairwise |lambda_i - lambda_j|

    /// Rows q_i of P^-1, scaled so q_i p_i = 1.
    ComplexMatrix left_eigenvectors() const;
};

EigenStructure eigen_structure(const LdtSystem& sys);

/// Modal output coupling |C p_i|; needs a single output but no stability.
Vector modal_observability(const LdtSystem& sys);

/// Closed-form det(G_{o,inf}) for single-output systems with distinct
/// eigenvalues, all moduli < 1:
///
///   det = |prod_{i<j} (l_j - l_i) / (1 - conj(l_i) l_j)|^2 / |det P|^2
///         * prod_i |C p_i|^2 / (1 - |l_i|^2)
///
/// Writing each C A^k in the eigenbasis gives G = P^-H M P^-1 with the
/// Cauchy kernel M_ij = conj(C p_i)(C p_j) / (1 - conj(l_i) l_j); the
/// determinant above is exact for any diagonalizable A, which is why det(P)
/// enters inverted and the pair denominators carry a conjugate. For real
/// spectra and orthonormal eigenvectors it coincides with the plain-product
/// form [|det P| F1]^2 prod F2_i^2 built from the shape factors below.
double analytic_infinite_determinant(const LdtSystem& sys);

struct AnalyticVolumes {
    double vol_error = 0.0;  // H_n det^{-1/2}; infinite when det = 0
    double vol_image = 0.0;  // H_n det^{+1/2}
};

AnalyticVolumes analytic_volumes(const LdtSystem& sys);

/// Deconstructed size/shape factors of the infinite-horizon ellipsoids.
///   F1        eigenvalue evenness, prod_{i<j} |l_j - l_i| / |1 - l_i l_j|
///   F1_{ij}   one pairwise factor (zero diagonal)
///   F2_i      |C p_i| (1 - |l_i|^2)^{-1/2}, circumscribed-box half side of
///             the image ellipsoid along eigendirection i
///   F3_i      modal observability |C p_i|
struct ShapeFactorReport {
    EigenStructure eigen;
    double f1 = 0.0;
    Matrix f1_pairwise;
    Vector f2;
    Vector f3;
    double det_p_abs = 0.0;
    double analytic_det = 0.0;
    double vol_error_inf = 0.0;
    double vol_image_inf = 0.0;
};

ShapeFactorReport shape_factors(const LdtSystem& sys);

}  // namespace obsa
