#include "obsa/bench.hpp"

#include "obsa/gramian.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace obsa {

namespace {

// Containment is decided with a small absolute slack on the quadratic form so
// that draws landing exactly on the sphere are not misclassified by roundoff.
constexpr double kContainmentSlack = 1e-10;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Per-trial random stream: fully determined by (seed, stream), independent of
// call order. Normals come from an explicit Box-Muller transform so the byte
// stream does not depend on the standard library's distribution internals.
class KeyedStream {
public:
    KeyedStream(std::uint64_t seed, std::uint64_t stream)
        : rng_(splitmix64(seed ^ splitmix64(stream))) {}

    double uniform01() {
        // (0, 1), never exactly zero, 53-bit resolution
        return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

private:
    std::mt19937_64 rng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

GramianBundle observable_bundle(const LdtSystem& sys, int steps) {
    const GramianBundle bundle = observability_gramian(sys, steps);
    if (!bundle.full_rank()) {
        std::ostringstream msg;
        msg << "system is not observable at horizon " << steps << " (rank "
            << bundle.rank << " of " << bundle.dim() << ")";
        throw UnobservableError(msg.str());
    }
    return bundle;
}

}  // namespace

Vector least_squares_estimate(const LdtSystem& sys,
                              const Vector& stacked_outputs) {
    const int m = sys.output_dim();
    if (stacked_outputs.size() == 0 || stacked_outputs.size() % m != 0) {
        throw std::invalid_argument(
            "least_squares_estimate: output length must be a positive multiple "
            "of the output dimension");
    }
    const int steps = static_cast<int>(stacked_outputs.size()) / m;
    const GramianBundle bundle = observable_bundle(sys, steps);
    return bundle.G.ldlt().solve(bundle.Q->transpose() * stacked_outputs);
}

Vector sample_noise(const BenchConfig& cfg, int output_dim, int trial_index) {
    if (cfg.horizon < 1 || output_dim < 1) {
        throw std::invalid_argument("sample_noise: bad dimensions");
    }
    const int len = cfg.horizon * output_dim;
    KeyedStream stream(cfg.seed, static_cast<std::uint64_t>(trial_index));

    Vector w(len);
    double norm = 0.0;
    do {
        for (int i = 0; i < len; ++i) w(i) = stream.normal();
        norm = w.norm();
    } while (norm == 0.0);
    w *= cfg.noise.bound / norm;

    if (cfg.sampling == BenchConfig::Sampling::interior) {
        w *= std::pow(stream.uniform01(), 1.0 / len);
    }
    return w;
}

BenchResult run_containment_experiment(const LdtSystem& sys,
                                       const BenchConfig& cfg,
                                       const std::optional<Vector>& x0) {
    if (cfg.trials < 1) {
        throw std::invalid_argument("run_containment_experiment: trials must be >= 1");
    }
    if (!cfg.noise.is_sequence_energy()) {
        throw AssumptionError(
            "noise model unsupported for ellipsoid validation: containment needs "
            "the sequence two-norm (energy) model");
    }
    const GramianBundle bundle = observable_bundle(sys, cfg.horizon);
    const Matrix& q = *bundle.Q;
    const auto solver = bundle.G.ldlt();

    Vector initial = x0 ? *x0 : Vector::Zero(sys.state_dim());
    if (initial.size() != sys.state_dim()) {
        throw std::invalid_argument("run_containment_experiment: x0 dimension mismatch");
    }

    const double bound_sq = cfg.noise.bound * cfg.noise.bound;
    BenchResult result;
    result.trials = cfg.trials;
    if (cfg.record_trials) result.records.emplace();

    int contained = 0;
    for (int t = 0; t < cfg.trials; ++t) {
        const Vector w = sample_noise(cfg, sys.output_dim(), t);
        const Vector y = q * initial + w;
        const Vector estimate = solver.solve(q.transpose() * y);
        const Vector error = estimate - initial;

        const double form = error.dot(bundle.G * error);
        const double norm = error.norm();
        if (form <= bound_sq + kContainmentSlack) ++contained;
        result.max_quadratic_form = std::max(result.max_quadratic_form, form);
        result.worst_case_error_norm = std::max(result.worst_case_error_norm, norm);
        if (result.records) result.records->push_back(TrialRecord{form, norm});
    }
    result.containment_fraction =
        static_cast<double>(contained) / static_cast<double>(cfg.trials);
    return result;
}

double covariance_error_bound(const LdtSystem& sys, int steps,
                              const Matrix& covariance) {
    const int m = sys.output_dim();
    if (covariance.rows() != m || covariance.cols() != m) {
        throw std::invalid_argument("covariance_error_bound: Lambda must be m x m");
    }
    if (!covariance.isApprox(covariance.transpose(), 1e-10)) {
        throw std::invalid_argument("covariance_error_bound: Lambda must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> lam(
        0.5 * (covariance + covariance.transpose()));
    const double lam_max = lam.eigenvalues().maxCoeff();
    const double lam_min = lam.eigenvalues().minCoeff();
    if (lam_min < -1e-12 * std::max(1.0, lam_max)) {
        throw std::invalid_argument(
            "covariance_error_bound: Lambda must be positive semidefinite");
    }

    const GramianBundle bundle = observability_gramian(sys, steps);
    if (!bundle.full_rank() || bundle.min_eig <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return std::max(lam_max, 0.0) / bundle.min_eig;
}

}  // namespace obsa
