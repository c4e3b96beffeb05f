#pragma once

#include "obsa/lti_model.hpp"
#include "obsa/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace obsa {

/// One candidate's observability metrics. r_min/r_max are the extreme radii
/// of the error ellipsoid; analytic factors are present only when the
/// closed-form assumptions hold (analytic_note says why otherwise).
struct MetricRow {
    std::string candidate;
    Horizon horizon = Horizon::finite(1);
    int state_dim = 0;
    int rank = 0;
    bool observable = false;
    double vol_error = 0.0;
    double vol_image = 0.0;
    double r_min = 0.0;
    double r_max = 0.0;
    double det_g = 0.0;
    std::optional<double> f1;
    std::optional<Vector> f2;
    std::optional<Vector> f3;
    std::string analytic_note;
    std::vector<std::string> constraint_violations;
};

/// Computes the numeric metrics (always) and the analytic shape factors
/// (when requested and the assumptions hold). Degenerate systems yield
/// infinite-volume rows instead of errors.
MetricRow metric_report(const LdtSystem& sys, Horizon horizon, bool analytic);

/// Smaller error-ellipsoid volume means stronger observe ability, so both
/// modes rank ascending. Floors filter candidates before ranking; weighted
/// scores normalize each metric by the candidate-set median so the weights
/// are scale free.
struct RankingPolicy {
    enum class Mode { constrained_volume, weighted_sum };

    Mode mode = Mode::constrained_volume;
    std::optional<double> min_radius_floor;  // require r_min >= floor
    std::optional<double> evenness_floor;    // require F1 >= floor
    double weight_vol_error = 0.0;
    double weight_r_max = 0.0;
    double weight_inv_f1 = 0.0;
};

struct RankedCandidate {
    MetricRow row;
    double score = 0.0;
};

struct RankingResult {
    std::vector<RankedCandidate> ranked;  // best first
    std::vector<MetricRow> excluded;      // floor violations, reasons on the row
    std::vector<std::string> tie_breaks;  // how equal scores were resolved
    std::string note;                     // set when the ranking came out empty
};

/// Deterministic: ties on the score break by r_max ascending, then by
/// candidate label.
RankingResult rank_candidates(std::vector<MetricRow> rows,
                              const RankingPolicy& policy);

}  // namespace obsa
