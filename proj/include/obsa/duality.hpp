#pragma once

#include "obsa/lti_model.hpp"
#include "obsa/types.hpp"

namespace obsa {

/// Residuals of the observability/reachability duality identities
///   vol(error set) * vol(reach set) = H_n^2
///   r_i(error set) * r_{n-i+1}(reach set) = 1
/// for the dual pair (A^T, C^T). Residuals rather than booleans are the
/// primary output so regressions are graded.
struct DualityReport {
    Horizon horizon = Horizon::finite(1);
    double vol_product_residual = 0.0;  // relative to H_n^2
    Vector radii_residuals;
    bool pass = false;
    bool rank_deficient = false;
    double tolerance = 0.0;
};

DualityReport verify_duality(const LdtSystem& sys, Horizon horizon,
                             double tol = 1e-9);

}  // namespace obsa
