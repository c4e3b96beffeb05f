#include "obsa/duality.hpp"

#include "obsa/ellipsoid.hpp"
#include "obsa/gramian.hpp"

#include <cmath>
#include <limits>

namespace obsa {

DualityReport verify_duality(const LdtSystem& sys, Horizon horizon, double tol) {
    const int n = sys.state_dim();

    DualityReport report;
    report.horizon = horizon;
    report.tolerance = tol;

    const GramianBundle obs = gramian_for(sys, horizon);
    const DualSystem dual = dualize(sys);
    const GramianBundle reach = reachability_gramian(dual.A, dual.B, horizon);

    if (!obs.full_rank()) {
        report.rank_deficient = true;
        report.vol_product_residual = std::numeric_limits<double>::infinity();
        report.radii_residuals =
            Vector::Constant(n, std::numeric_limits<double>::infinity());
        report.pass = false;
        return report;
    }

    const EllipsoidMetrics err = error_ellipsoid_metrics(obs);
    const EllipsoidMetrics reach_metrics = image_ellipsoid_metrics(reach);

    const double h = err.hypersphere_coefficient;
    report.vol_product_residual =
        std::abs(err.volume * reach_metrics.volume - h * h) / (h * h);

    report.radii_residuals.resize(n);
    for (int i = 0; i < n; ++i) {
        report.radii_residuals(i) =
            std::abs(err.radii(i) * reach_metrics.radii(n - 1 - i) - 1.0);
    }

    report.pass = report.vol_product_residual <= tol &&
                  (report.radii_residuals.array() <= tol).all();
    return report;
}

}  // namespace obsa
