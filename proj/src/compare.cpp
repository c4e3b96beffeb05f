#include "obsa/compare.hpp"

#include "obsa/analytic.hpp"
#include "obsa/ellipsoid.hpp"
#include "obsa/gramian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace obsa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double median_of(std::vector<double> values) {
    std::erase_if(values, [](double v) { return !std::isfinite(v) || v <= 0.0; });
    if (values.empty()) return 1.0;
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

bool violates_floors(const RankingPolicy& policy, MetricRow& row) {
    bool violated = false;
    if (policy.min_radius_floor) {
        if (!(row.r_min >= *policy.min_radius_floor)) {
            std::ostringstream msg;
            msg << "r_min " << row.r_min << " below floor "
                << *policy.min_radius_floor;
            row.constraint_violations.push_back(msg.str());
            violated = true;
        }
    }
    if (policy.evenness_floor) {
        if (!row.f1) {
            row.constraint_violations.push_back(
                "evenness floor set but F1 unavailable: " +
                (row.analytic_note.empty() ? std::string("analytic factors not computed")
                                           : row.analytic_note));
            violated = true;
        } else if (!(*row.f1 >= *policy.evenness_floor)) {
            std::ostringstream msg;
            msg << "F1 " << *row.f1 << " below floor " << *policy.evenness_floor;
            row.constraint_violations.push_back(msg.str());
            violated = true;
        }
    }
    return violated;
}

}  // namespace

MetricRow metric_report(const LdtSystem& sys, Horizon horizon, bool analytic) {
    MetricRow row;
    row.candidate = sys.name;
    row.horizon = horizon;
    row.state_dim = sys.state_dim();

    GramianBundle bundle;
    if (horizon.is_infinite() &&
        !(spectral_radius(sys.A) < 1.0 - 1e-9)) {
        // No infinite-horizon Gramian to report; rank the candidate last with
        // an explicit reason rather than failing the whole comparison.
        row.observable = false;
        row.rank = 0;
        row.vol_error = kInf;
        row.vol_image = kInf;
        row.r_min = kInf;
        row.r_max = kInf;
        row.det_g = kInf;
        row.constraint_violations.push_back(
            "infinite-horizon Gramian diverges: spectral radius >= 1");
        row.analytic_note = "infinite-horizon Gramian diverges";
        return row;
    }

    bundle = gramian_for(sys, horizon);
    const EllipsoidMetrics err = error_ellipsoid_metrics(bundle);
    const EllipsoidMetrics img = image_ellipsoid_metrics(bundle);

    row.rank = bundle.rank;
    row.observable = bundle.full_rank();
    row.vol_error = err.volume;
    row.vol_image = img.volume;
    row.r_max = err.radii(0);
    row.r_min = err.radii(err.radii.size() - 1);
    row.det_g = bundle.determinant;
    if (!row.observable) {
        std::ostringstream msg;
        msg << "unobservable: Gramian rank " << bundle.rank << " of "
            << sys.state_dim();
        row.constraint_violations.push_back(msg.str());
    }

    if (analytic) {
        try {
            const ShapeFactorReport factors = shape_factors(sys);
            row.f1 = factors.f1;
            row.f2 = factors.f2;
            row.f3 = factors.f3;
        } catch (const AssumptionError& e) {
            row.analytic_note = e.what();
        }
    } else {
        row.analytic_note = "analytic factors not requested";
    }
    return row;
}

RankingResult rank_candidates(std::vector<MetricRow> rows,
                              const RankingPolicy& policy) {
    if (rows.empty()) {
        throw std::invalid_argument("rank_candidates: need at least one row");
    }
    if (policy.mode == RankingPolicy::Mode::weighted_sum &&
        policy.weight_vol_error <= 0.0 && policy.weight_r_max <= 0.0 &&
        policy.weight_inv_f1 <= 0.0) {
        throw std::invalid_argument(
            "rank_candidates: weighted_sum needs at least one positive weight");
    }

    RankingResult result;

    std::vector<MetricRow> eligible;
    for (MetricRow& row : rows) {
        if (violates_floors(policy, row)) {
            result.excluded.push_back(std::move(row));
        } else {
            eligible.push_back(std::move(row));
        }
    }
    if (eligible.empty()) {
        result.note = "no candidate satisfies the policy floors";
        return result;
    }

    // Median normalization for the weighted mode, over eligible rows only.
    double med_vol = 1.0, med_rmax = 1.0, med_invf1 = 1.0;
    if (policy.mode == RankingPolicy::Mode::weighted_sum) {
        std::vector<double> vols, rmaxs, invf1s;
        for (const MetricRow& row : eligible) {
            vols.push_back(row.vol_error);
            rmaxs.push_back(row.r_max);
            if (row.f1 && *row.f1 > 0.0) invf1s.push_back(1.0 / *row.f1);
        }
        med_vol = median_of(vols);
        med_rmax = median_of(rmaxs);
        med_invf1 = median_of(invf1s);
    }

    auto score_of = [&](const MetricRow& row) -> double {
        if (policy.mode == RankingPolicy::Mode::constrained_volume) {
            return row.vol_error;
        }
        double score = 0.0;
        if (policy.weight_vol_error > 0.0) {
            score += policy.weight_vol_error * row.vol_error / med_vol;
        }
        if (policy.weight_r_max > 0.0) {
            score += policy.weight_r_max * row.r_max / med_rmax;
        }
        if (policy.weight_inv_f1 > 0.0) {
            if (row.f1 && *row.f1 > 0.0) {
                score += policy.weight_inv_f1 * (1.0 / *row.f1) / med_invf1;
            } else {
                score = kInf;  // cannot grade evenness for this candidate
            }
        }
        return score;
    };

    for (MetricRow& row : eligible) {
        const double score = score_of(row);
        result.ranked.push_back(RankedCandidate{std::move(row), score});
    }

    std::stable_sort(result.ranked.begin(), result.ranked.end(),
                     [](const RankedCandidate& a, const RankedCandidate& b) {
                         if (a.score != b.score) return a.score < b.score;
                         if (a.row.r_max != b.row.r_max) return a.row.r_max < b.row.r_max;
                         return a.row.candidate < b.row.candidate;
                     });

    for (std::size_t i = 1; i < result.ranked.size(); ++i) {
        const RankedCandidate& prev = result.ranked[i - 1];
        const RankedCandidate& cur = result.ranked[i];
        if (prev.score == cur.score) {
            std::ostringstream msg;
            msg << prev.row.candidate << " vs " << cur.row.candidate
                << ": tie on score";
            if (prev.row.r_max != cur.row.r_max) {
                msg << ", resolved by r_max";
            } else {
                msg << " and r_max, resolved by label";
            }
            result.tie_breaks.push_back(msg.str());
        }
    }
    return result;
}

}  // namespace obsa
