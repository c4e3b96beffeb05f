#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>

namespace obsa {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Analysis horizon: either a finite sample count N >= 1 or the
/// infinite-horizon limit.
class Horizon {
public:
    static Horizon finite(int steps) {
        if (steps < 1) {
            throw std::invalid_argument("Horizon: steps must be >= 1, got " +
                                        std::to_string(steps));
        }
        return Horizon(steps);
    }
    static Horizon infinite() { return Horizon(); }

    bool is_infinite() const noexcept { return !steps_.has_value(); }

    int steps() const {
        if (!steps_) {
            throw std::logic_error("Horizon: infinite horizon has no step count");
        }
        return *steps_;
    }

    std::string str() const { return steps_ ? std::to_string(*steps_) : "inf"; }

private:
    Horizon() = default;
    explicit Horizon(int steps) : steps_(steps) {}

    std::optional<int> steps_;
};

/// A required modelling assumption does not hold (unstable state matrix for an
/// infinite horizon, repeated eigenvalues or multiple outputs on the analytic
/// path, unsupported noise model). CLI exit code 4.
class AssumptionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The operation needs an observable system (nonsingular Gramian) and the
/// input is rank deficient. CLI exit code 3.
class UnobservableError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace obsa
