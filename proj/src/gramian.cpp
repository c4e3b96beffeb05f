#include "obsa/gramian.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <sstream>

namespace obsa {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kStabilityMargin = 1e-9;

Matrix symmetrized(const Matrix& g) { return 0.5 * (g + g.transpose()); }

void require_valid(const LdtSystem& sys) {
    const ValidationReport rep = validate_system(sys);
    if (!rep.ok) {
        std::ostringstream msg;
        msg << "invalid system";
        for (const auto& e : rep.errors) msg << "; " << e;
        throw std::invalid_argument(msg.str());
    }
}

// Spectral summary shared by all bundle constructors. The rank argument is
// taken from the factor matrix when available; otherwise it is derived from
// the eigenvalues with an n * eps relative threshold.
void fill_spectral_fields(GramianBundle& bundle, std::optional<int> rank_hint) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(bundle.G);
    const Vector eigs = es.eigenvalues();
    bundle.min_eig = eigs.minCoeff();
    bundle.max_eig = eigs.maxCoeff();

    double det = 1.0;
    for (Eigen::Index i = 0; i < eigs.size(); ++i) {
        det *= std::max(eigs(i), 0.0);
    }
    bundle.determinant = det;

    if (rank_hint) {
        bundle.rank = *rank_hint;
    } else {
        const double tol =
            static_cast<double>(eigs.size()) * kEps * std::max(bundle.max_eig, 0.0);
        int r = 0;
        for (Eigen::Index i = 0; i < eigs.size(); ++i) {
            if (eigs(i) > tol) ++r;
        }
        bundle.rank = r;
    }
}

int factor_rank(const Matrix& q) {
    Eigen::JacobiSVD<Matrix> svd(q);
    const Vector sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    const double tol =
        static_cast<double>(std::max(q.rows(), q.cols())) * kEps * sv(0);
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > tol) ++r;
    }
    return r;
}

void require_convergent(const Matrix& a, const char* what) {
    const double rho = spectral_radius(a);
    if (!(rho < 1.0 - kStabilityMargin)) {
        std::ostringstream msg;
        msg << what << " diverges: spectral radius " << rho << " >= 1";
        throw AssumptionError(msg.str());
    }
}

}  // namespace

double spectral_radius(const Matrix& a) {
    if (a.rows() == 0) throw std::invalid_argument("spectral_radius: empty matrix");
    Eigen::EigenSolver<Matrix> es(a, /*computeEigenvectors=*/false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix observability_matrix(const LdtSystem& sys, int steps) {
    require_valid(sys);
    if (steps < 1) {
        throw std::invalid_argument("observability_matrix: steps must be >= 1");
    }
    const Eigen::Index n = sys.A.rows();
    const Eigen::Index m = sys.C.rows();
    Matrix q(steps * m, n);
    Matrix row = sys.C;
    for (int k = 0; k < steps; ++k) {
        q.middleRows(k * m, m) = row;
        if (k + 1 < steps) row = row * sys.A;
    }
    return q;
}

GramianBundle observability_gramian(const LdtSystem& sys, int steps) {
    const Matrix q = observability_matrix(sys, steps);
    GramianBundle bundle;
    bundle.horizon = Horizon::finite(steps);
    bundle.G = symmetrized(q.transpose() * q);
    if (!bundle.G.allFinite()) {
        throw std::overflow_error(
            "observability_gramian: non-finite result (unstable system at large "
            "horizon)");
    }
    bundle.Q = q;
    fill_spectral_fields(bundle, factor_rank(q));
    return bundle;
}

GramianBundle infinite_observability_gramian(const LdtSystem& sys) {
    require_valid(sys);
    require_convergent(sys.A, "infinite-horizon observability Gramian");

    const Matrix s = symmetrized(sys.C.transpose() * sys.C);
    const Matrix g = sys.A.rows() <= 30 ? detail::solve_stein_kronecker(sys.A, s)
                                        : detail::solve_stein_doubling(sys.A, s);
    GramianBundle bundle;
    bundle.horizon = Horizon::infinite();
    bundle.G = symmetrized(g);
    fill_spectral_fields(bundle, std::nullopt);
    return bundle;
}

GramianBundle gramian_for(const LdtSystem& sys, Horizon horizon) {
    return horizon.is_infinite() ? infinite_observability_gramian(sys)
                                 : observability_gramian(sys, horizon.steps());
}

GramianBundle reachability_gramian(const Matrix& a_c, const Matrix& b_c,
                                   Horizon horizon) {
    if (a_c.rows() != a_c.cols()) {
        throw std::invalid_argument("reachability_gramian: A_c must be square");
    }
    if (b_c.rows() != a_c.rows()) {
        throw std::invalid_argument(
            "reachability_gramian: B_c row count must match A_c");
    }
    const Eigen::Index n = a_c.rows();
    const Eigen::Index m = b_c.cols();

    GramianBundle bundle;
    bundle.horizon = horizon;
    if (horizon.is_infinite()) {
        require_convergent(a_c, "infinite-horizon reachability Gramian");
        // G = A_c G A_c^T + B_c B_c^T is the Stein identity for A_c^T.
        const Matrix s = symmetrized(b_c * b_c.transpose());
        const Matrix at = a_c.transpose();
        bundle.G = symmetrized(n <= 30 ? detail::solve_stein_kronecker(at, s)
                                       : detail::solve_stein_doubling(at, s));
        fill_spectral_fields(bundle, std::nullopt);
        return bundle;
    }

    const int steps = horizon.steps();
    Matrix q(n, steps * m);
    Matrix col = b_c;
    for (int k = 0; k < steps; ++k) {
        q.middleCols(k * m, m) = col;
        if (k + 1 < steps) col = a_c * col;
    }
    bundle.G = symmetrized(q * q.transpose());
    if (!bundle.G.allFinite()) {
        throw std::overflow_error("reachability_gramian: non-finite result");
    }
    bundle.Q = q;
    fill_spectral_fields(bundle, factor_rank(q));
    return bundle;
}

RankInfo observability_rank(const LdtSystem& sys, int steps) {
    require_valid(sys);
    if (steps < sys.state_dim()) {
        throw std::invalid_argument(
            "observability_rank: steps must be >= state dimension");
    }
    const int r = factor_rank(observability_matrix(sys, steps));
    return RankInfo{r, r == sys.state_dim()};
}

namespace detail {

Matrix solve_stein_kronecker(const Matrix& a, const Matrix& s) {
    const Eigen::Index n = a.rows();
    // vec(A^T G A) = (A^T kron A^T) vec(G) with column-stacking vec.
    Matrix k(n * n, n * n);
    const Matrix at = a.transpose();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            k.block(i * n, j * n, n, n) = at(i, j) * at;
        }
    }
    Matrix system = Matrix::Identity(n * n, n * n) - k;
    Eigen::Map<const Vector> rhs(s.data(), n * n);
    Vector g_vec = system.partialPivLu().solve(rhs);
    return Eigen::Map<const Matrix>(g_vec.data(), n, n);
}

Matrix solve_stein_doubling(const Matrix& a, const Matrix& s) {
    Matrix g = s;
    Matrix m = a;
    for (int iter = 0; iter < 200; ++iter) {
        const Matrix term = m.transpose() * g * m;
        g += term;
        if (term.norm() <= 1e-18 * g.norm()) break;
        m = m * m;
    }
    return g;
}

}  // namespace detail

}  // namespace obsa
