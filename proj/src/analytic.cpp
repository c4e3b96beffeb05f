#include "obsa/analytic.hpp"

#include "obsa/ellipsoid.hpp"
#include "obsa/gramian.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <sstream>

namespace obsa {

namespace {

using Complex = std::complex<double>;

void require_valid(const LdtSystem& sys) {
    const ValidationReport rep = validate_system(sys);
    if (!rep.ok) {
        std::ostringstream msg;
        msg << "invalid system";
        for (const auto& e : rep.errors) msg << "; " << e;
        throw std::invalid_argument(msg.str());
    }
}

void require_single_output(const LdtSystem& sys) {
    if (sys.output_dim() != 1) {
        std::ostringstream msg;
        msg << "analytic path requires a single output, got m = "
            << sys.output_dim();
        throw AssumptionError(msg.str());
    }
}

void require_distinct(const EigenStructure& st) {
    if (!st.distinct) {
        std::ostringstream msg;
        msg << "analytic path requires distinct eigenvalues; min gap "
            << st.min_gap << " is below threshold";
        throw AssumptionError(msg.str());
    }
}

void require_stable(const EigenStructure& st) {
    if (!(st.max_modulus < 1.0)) {
        std::ostringstream msg;
        msg << "analytic path requires all eigenvalue moduli < 1, got "
            << st.max_modulus;
        throw AssumptionError(msg.str());
    }
}

ComplexVector output_couplings(const LdtSystem& sys, const EigenStructure& st) {
    const ComplexMatrix c = sys.C.cast<Complex>();
    return (c * st.right_eigenvectors).row(0);
}

}  // namespace

ComplexMatrix EigenStructure::left_eigenvectors() const {
    return right_eigenvectors.partialPivLu().solve(
        ComplexMatrix::Identity(right_eigenvectors.rows(),
                                right_eigenvectors.cols()));
}

EigenStructure eigen_structure(const LdtSystem& sys) {
    require_valid(sys);
    Eigen::EigenSolver<Matrix> es(sys.A);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("eigen_structure: eigensolver failed");
    }

    const Eigen::Index n = sys.A.rows();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    const ComplexVector raw = es.eigenvalues();
    std::sort(order.begin(), order.end(), [&raw](int a, int b) {
        if (raw(a).real() != raw(b).real()) return raw(a).real() < raw(b).real();
        return raw(a).imag() < raw(b).imag();
    });

    EigenStructure st;
    st.eigenvalues.resize(n);
    st.right_eigenvectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        st.eigenvalues(i) = raw(order[i]);
        ComplexVector p = es.eigenvectors().col(order[i]);
        p /= p.norm();
        // Rotate the largest entry onto the positive real axis so reports are
        // reproducible; all derived factors are phase invariant anyway.
        Eigen::Index imax = 0;
        p.cwiseAbs().maxCoeff(&imax);
        const Complex pivot = p(imax);
        if (std::abs(pivot) > 0.0) p *= std::conj(pivot) / std::abs(pivot);
        st.right_eigenvectors.col(i) = p;
    }

    st.det_p_abs = std::abs(st.right_eigenvectors.determinant());
    st.max_modulus = st.eigenvalues.cwiseAbs().maxCoeff();

    st.min_gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            st.min_gap =
                std::min(st.min_gap, std::abs(st.eigenvalues(i) - st.eigenvalues(j)));
        }
    }
    if (n == 1) st.min_gap = std::numeric_limits<double>::infinity();
    st.distinct = st.min_gap > 1e-8 * std::max(1.0, st.max_modulus);
    return st;
}

Vector modal_observability(const LdtSystem& sys) {
    require_single_output(sys);
    const EigenStructure st = eigen_structure(sys);
    return output_couplings(sys, st).cwiseAbs();
}

double analytic_infinite_determinant(const LdtSystem& sys) {
    require_single_output(sys);
    const EigenStructure st = eigen_structure(sys);
    require_distinct(st);
    require_stable(st);

    const Eigen::Index n = st.eigenvalues.size();
    Complex pair_prod = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            pair_prod *= (st.eigenvalues(j) - st.eigenvalues(i)) /
                         (1.0 - std::conj(st.eigenvalues(i)) * st.eigenvalues(j));
        }
    }

    const ComplexVector couplings = output_couplings(sys, st);
    double modal = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        modal *= std::norm(couplings(i)) / (1.0 - std::norm(st.eigenvalues(i)));
    }

    return std::norm(pair_prod) / (st.det_p_abs * st.det_p_abs) * modal;
}

AnalyticVolumes analytic_volumes(const LdtSystem& sys) {
    const double det = analytic_infinite_determinant(sys);
    const double h = hypersphere_coefficient(sys.state_dim());
    AnalyticVolumes vols;
    vols.vol_image = h * std::sqrt(det);
    vols.vol_error =
        det > 0.0 ? h / std::sqrt(det) : std::numeric_limits<double>::infinity();
    return vols;
}

ShapeFactorReport shape_factors(const LdtSystem& sys) {
    require_single_output(sys);
    EigenStructure st = eigen_structure(sys);
    require_distinct(st);
    require_stable(st);

    const Eigen::Index n = st.eigenvalues.size();
    ShapeFactorReport report;
    report.f1_pairwise = Matrix::Zero(n, n);
    report.f1 = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            report.f1_pairwise(i, j) =
                std::abs(st.eigenvalues(i) - st.eigenvalues(j)) /
                std::abs(1.0 - st.eigenvalues(i) * st.eigenvalues(j));
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            report.f1 *= report.f1_pairwise(i, j);
        }
    }

    const ComplexVector couplings = output_couplings(sys, st);
    report.f3 = couplings.cwiseAbs();
    report.f2.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        report.f2(i) = report.f3(i) / std::sqrt(1.0 - std::norm(st.eigenvalues(i)));
    }

    report.det_p_abs = st.det_p_abs;
    report.analytic_det = analytic_infinite_determinant(sys);
    const double h = hypersphere_coefficient(sys.state_dim());
    report.vol_image_inf = h * std::sqrt(report.analytic_det);
    report.vol_error_inf = report.analytic_det > 0.0
                               ? h / std::sqrt(report.analytic_det)
                               : std::numeric_limits<double>::infinity();
    report.eigen = std::move(st);
    return report;
}

}  // namespace obsa
