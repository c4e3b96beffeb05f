#include "obsa/lti_model.hpp"

#include <sstream>

namespace obsa {

namespace {

void check_scale_vector(const char* label, const std::optional<Vector>& v,
                        Eigen::Index expected, ValidationReport& rep) {
    if (!v) return;
    if (v->size() != expected) {
        std::ostringstream msg;
        msg << label << " has " << v->size() << " entries, expected " << expected;
        rep.ok = false;
        rep.errors.push_back(msg.str());
        return;
    }
    for (Eigen::Index i = 0; i < v->size(); ++i) {
        const double x = (*v)(i);
        if (!std::isfinite(x) || x <= 0.0) {
            std::ostringstream msg;
            msg << label << "[" << i << "] = " << x << " is not strictly positive";
            rep.ok = false;
            rep.errors.push_back(msg.str());
        }
    }
}

Vector require_positive(const Vector& v, Eigen::Index expected, const char* label) {
    if (v.size() != expected) {
        std::ostringstream msg;
        msg << label << " has " << v.size() << " entries, expected " << expected;
        throw std::invalid_argument(msg.str());
    }
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v(i)) || v(i) <= 0.0) {
            std::ostringstream msg;
            msg << label << "[" << i << "] = " << v(i) << " must be > 0";
            throw std::invalid_argument(msg.str());
        }
    }
    return v;
}

LdtSystem apply_normalization(const LdtSystem& sys, const NormalizationSpec& spec) {
    const Eigen::Index n = sys.A.rows();
    const Eigen::Index m = sys.C.rows();
    const Vector p = require_positive(spec.state_scale, n, "state_scale");
    const Vector y = require_positive(spec.output_scale, m, "output_scale");

    LdtSystem out = sys;
    out.A = p.cwiseInverse().asDiagonal() * sys.A * p.asDiagonal();
    Matrix c = sys.C * p.asDiagonal();
    if (spec.direction == NormalizationSpec::Direction::divide_output) {
        c = y.cwiseInverse().asDiagonal() * c;
    } else {
        c = y.asDiagonal() * c;
    }
    out.C = c;
    // Scales are consumed by the transform; the result is dimensionless.
    out.rated_states.reset();
    out.rated_outputs.reset();
    out.shared_ranges.reset();
    return out;
}

}  // namespace

ValidationReport validate_system(const LdtSystem& sys) {
    ValidationReport rep;
    auto fail = [&rep](const std::string& msg) {
        rep.ok = false;
        rep.errors.push_back(msg);
    };

    if (sys.A.rows() == 0 || sys.A.cols() == 0) {
        fail("state matrix A is empty");
    } else if (sys.A.rows() != sys.A.cols()) {
        std::ostringstream msg;
        msg << "state matrix A must be square, got " << sys.A.rows() << "x"
            << sys.A.cols();
        fail(msg.str());
    }
    if (sys.C.rows() < 1) {
        fail("output matrix C needs at least one row");
    }
    if (sys.A.rows() > 0 && sys.C.cols() != sys.A.rows()) {
        std::ostringstream msg;
        msg << "output matrix C has " << sys.C.cols() << " columns, expected "
            << sys.A.rows();
        fail(msg.str());
    }
    if (sys.A.size() > 0 && !sys.A.allFinite()) {
        fail("state matrix A contains non-finite entries");
    }
    if (sys.C.size() > 0 && !sys.C.allFinite()) {
        fail("output matrix C contains non-finite entries");
    }

    check_scale_vector("rated_states", sys.rated_states, sys.A.rows(), rep);
    check_scale_vector("rated_outputs", sys.rated_outputs, sys.C.rows(), rep);
    check_scale_vector("shared_ranges", sys.shared_ranges, sys.A.rows(), rep);
    return rep;
}

LdtSystem normalize_rated(const LdtSystem& sys, const NormalizationSpec& spec) {
    if (spec.mode != NormalizationSpec::Mode::rated) {
        throw std::invalid_argument("normalize_rated requires spec.mode = rated");
    }
    return apply_normalization(sys, spec);
}

LdtSystem normalize_shared(const LdtSystem& sys, const NormalizationSpec& spec) {
    if (spec.mode != NormalizationSpec::Mode::shared_range) {
        throw std::invalid_argument(
            "normalize_shared requires spec.mode = shared_range");
    }
    return apply_normalization(sys, spec);
}

DualSystem dualize(const LdtSystem& sys) {
    return DualSystem{sys.name, sys.A.transpose(), sys.C.transpose()};
}

LdtSystem dualize(const DualSystem& dual) {
    LdtSystem sys;
    sys.name = dual.name;
    sys.A = dual.A.transpose();
    sys.C = dual.B.transpose();
    return sys;
}

NormalizationSpec rated_spec_for(const LdtSystem& sys,
                                 NormalizationSpec::Direction direction) {
    NormalizationSpec spec;
    spec.mode = NormalizationSpec::Mode::rated;
    spec.direction = direction;
    spec.state_scale =
        sys.rated_states ? *sys.rated_states : Vector::Ones(sys.state_dim());
    spec.output_scale =
        sys.rated_outputs ? *sys.rated_outputs : Vector::Ones(sys.output_dim());
    return spec;
}

NormalizationSpec shared_spec_for(const LdtSystem& sys,
                                  NormalizationSpec::Direction direction) {
    NormalizationSpec spec;
    spec.mode = NormalizationSpec::Mode::shared_range;
    spec.direction = direction;
    spec.state_scale =
        sys.shared_ranges ? *sys.shared_ranges : Vector::Ones(sys.state_dim());
    spec.output_scale =
        sys.rated_outputs ? *sys.rated_outputs : Vector::Ones(sys.output_dim());
    return spec;
}

}  // namespace obsa
