#include "obsa/ellipsoid.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace obsa {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();

double gamma_by_recursion(double s) {
    if (s == 0.5) return std::sqrt(std::numbers::pi);
    if (s == 1.0) return 1.0;
    return (s - 1.0) * gamma_by_recursion(s - 1.0);
}

struct Spectrum {
    Vector eigs;  // ascending
    Matrix vecs;  // matching columns
    double zero_tol;
};

Spectrum psd_spectrum(const Matrix& g) {
    if (g.rows() != g.cols()) {
        throw std::invalid_argument("ellipsoid: Gramian must be square");
    }
    if (!g.isApprox(g.transpose(), 1e-10)) {
        throw std::invalid_argument("ellipsoid: Gramian must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (g + g.transpose()));
    Spectrum sp;
    sp.eigs = es.eigenvalues();
    sp.vecs = es.eigenvectors();
    sp.zero_tol = static_cast<double>(g.rows()) * kEps *
                  std::max(sp.eigs.maxCoeff(), 0.0);
    return sp;
}

void check_dimension(const Ellipsoid& e, const Vector& x) {
    if (x.size() != e.G.rows()) {
        throw std::invalid_argument("ellipsoid: vector dimension mismatch");
    }
}

}  // namespace

Ellipsoid error_ellipsoid(const GramianBundle& bundle) {
    return Ellipsoid{Ellipsoid::Kind::error_set, bundle.G, bundle.horizon};
}

Ellipsoid image_ellipsoid(const GramianBundle& bundle) {
    return Ellipsoid{Ellipsoid::Kind::image_set, bundle.G, bundle.horizon};
}

double hypersphere_coefficient(int n) {
    if (n < 1) throw std::invalid_argument("hypersphere_coefficient: n must be >= 1");
    return std::pow(std::numbers::pi, 0.5 * n) /
           gamma_by_recursion(0.5 * n + 1.0);
}

EllipsoidMetrics error_ellipsoid_metrics(const GramianBundle& bundle) {
    const Spectrum sp = psd_spectrum(bundle.G);
    const int n = static_cast<int>(sp.eigs.size());

    EllipsoidMetrics metrics;
    metrics.hypersphere_coefficient = hypersphere_coefficient(n);
    metrics.radii.resize(n);
    metrics.axes.resize(n, n);

    // Ascending eigenvalues give descending radii directly.
    double volume = metrics.hypersphere_coefficient;
    for (int i = 0; i < n; ++i) {
        const double mu = sp.eigs(i);
        metrics.axes.col(i) = sp.vecs.col(i);
        if (mu <= sp.zero_tol) {
            metrics.radii(i) = kInf;
            metrics.unbounded_directions.push_back(sp.vecs.col(i));
        } else {
            metrics.radii(i) = 1.0 / std::sqrt(mu);
            volume *= metrics.radii(i);
        }
    }
    metrics.volume = metrics.unbounded_directions.empty() ? volume : kInf;
    return metrics;
}

EllipsoidMetrics image_ellipsoid_metrics(const GramianBundle& bundle) {
    const Spectrum sp = psd_spectrum(bundle.G);
    const int n = static_cast<int>(sp.eigs.size());

    EllipsoidMetrics metrics;
    metrics.hypersphere_coefficient = hypersphere_coefficient(n);
    metrics.radii.resize(n);
    metrics.axes.resize(n, n);

    double volume = metrics.hypersphere_coefficient;
    for (int i = 0; i < n; ++i) {
        const double mu = std::max(sp.eigs(n - 1 - i), 0.0);
        metrics.radii(i) = std::sqrt(mu);
        metrics.axes.col(i) = sp.vecs.col(n - 1 - i);
        volume *= metrics.radii(i);
    }
    metrics.volume = volume;  // zero for a degenerate (flat) image set
    return metrics;
}

Membership contains(const Ellipsoid& e, const Vector& x) {
    check_dimension(e, x);
    if (e.kind == Ellipsoid::Kind::error_set) {
        const double value = x.dot(e.G * x);
        return Membership{value <= 1.0, value};
    }

    const Spectrum sp = psd_spectrum(e.G);
    if (sp.eigs.minCoeff() <= sp.zero_tol) {
        throw UnobservableError(
            "image-set membership undefined: singular Gramian");
    }
    const Vector w = sp.vecs.transpose() * x;
    const double value = (w.array().square() / sp.eigs.array()).sum();
    return Membership{value <= 1.0, value};
}

std::vector<Vector> boundary_points(const Ellipsoid& e,
                                    const std::vector<Vector>& directions) {
    std::optional<Spectrum> sp;
    if (e.kind == Ellipsoid::Kind::image_set) sp = psd_spectrum(e.G);

    const double scale = e.G.cwiseAbs().maxCoeff();
    const double null_tol = static_cast<double>(e.G.rows()) * kEps * scale;

    std::vector<Vector> points;
    points.reserve(directions.size());
    for (const Vector& f : directions) {
        check_dimension(e, f);
        if (std::abs(f.norm() - 1.0) > 1e-9) {
            throw std::invalid_argument(
                "boundary_points: directions must have unit 2-norm");
        }
        double q;
        if (e.kind == Ellipsoid::Kind::error_set) {
            q = f.dot(e.G * f);
        } else {
            const Vector w = sp->vecs.transpose() * f;
            q = 0.0;
            for (Eigen::Index i = 0; i < w.size(); ++i) {
                if (sp->eigs(i) <= sp->zero_tol) {
                    if (w(i) * w(i) > kEps) {
                        throw UnobservableError(
                            "boundary_points: direction leaves the Gramian range");
                    }
                    continue;
                }
                q += w(i) * w(i) / sp->eigs(i);
            }
        }
        if (q <= null_tol) {
            std::ostringstream msg;
            msg << "boundary_points: unbounded direction (f^T G f = " << q << ")";
            throw UnobservableError(msg.str());
        }
        points.push_back(f / std::sqrt(q));
    }
    return points;
}

std::vector<Vector> boundary_sweep_2d(const Ellipsoid& e, int samples) {
    if (e.G.rows() != 2) {
        throw std::invalid_argument("boundary_sweep_2d: needs a 2-D system");
    }
    if (samples < 1) {
        throw std::invalid_argument("boundary_sweep_2d: samples must be >= 1");
    }
    std::vector<Vector> dirs;
    dirs.reserve(samples);
    for (int k = 0; k < samples; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / samples;
        dirs.push_back((Vector(2) << std::cos(theta), std::sin(theta)).finished());
    }
    return boundary_points(e, dirs);
}

std::optional<int> min_samples_for_error(const LdtSystem& sys, const Vector& e_b,
                                         int n_max) {
    if (e_b.size() != sys.state_dim()) {
        throw std::invalid_argument("min_samples_for_error: dimension mismatch");
    }
    if (e_b.norm() == 0.0) {
        throw std::invalid_argument("min_samples_for_error: e_b must be nonzero");
    }
    if (n_max < 1) {
        throw std::invalid_argument("min_samples_for_error: n_max must be >= 1");
    }
    // e_b^T G_{o,N} e_b accumulated one output block at a time.
    Vector v = e_b;
    double form = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        form += (sys.C * v).squaredNorm();
        if (form > 1.0) return n;
        v = sys.A * v;
    }
    return std::nullopt;
}

bool feasible_set_containment(const GramianBundle& a, const GramianBundle& b) {
    if (a.G.rows() != b.G.rows()) {
        throw std::invalid_argument("feasible_set_containment: dimension mismatch");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.G - b.G);
    const double norm_a = std::max(std::abs(a.max_eig), std::abs(a.min_eig));
    return es.eigenvalues().minCoeff() >= -1e-10 * (1.0 + norm_a);
}

}  // namespace obsa
