#include "obsa/cli.hpp"

#include "obsa/analytic.hpp"
#include "obsa/bench.hpp"
#include "obsa/compare.hpp"
#include "obsa/duality.hpp"
#include "obsa/ellipsoid.hpp"
#include "obsa/gramian.hpp"
#include "obsa/lti_model.hpp"
#include "obsa/model_io.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace obsa {

namespace {

using nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;
constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitUnobservable = 3;
constexpr int kExitAssumption = 4;

// JSON has no infinity; keep the information as a string instead of null.
ordered_json json_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

ordered_json json_vector(const Vector& v) {
    ordered_json arr = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(json_real(v(i)));
    return arr;
}

ordered_json json_matrix(const Matrix& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(json_real(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

void flatten_json(const ordered_json& node, const std::string& prefix,
                  std::ostream& out) {
    if (node.is_object()) {
        for (const auto& [key, value] : node.items()) {
            flatten_json(value, prefix.empty() ? key : prefix + "." + key, out);
        }
    } else if (node.is_array()) {
        std::size_t i = 0;
        for (const auto& value : node) {
            flatten_json(value, prefix + "[" + std::to_string(i++) + "]", out);
        }
    } else if (node.is_number_float()) {
        out << csv_escape(prefix) << "," << format_g9(node.get<double>()) << "\n";
    } else if (node.is_string()) {
        out << csv_escape(prefix) << "," << csv_escape(node.get<std::string>())
            << "\n";
    } else {
        out << csv_escape(prefix) << "," << node.dump() << "\n";
    }
}

void emit_text(const std::string& text, const std::string& output_path,
               std::ostream& out) {
    if (output_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(output_path, std::ios::binary);
    if (!file) {
        throw std::invalid_argument("cannot open output file: " + output_path);
    }
    file << text;
}

void emit_report(const ordered_json& report, const std::string& format,
                 const std::string& output_path, std::ostream& out) {
    std::ostringstream text;
    if (format == "csv") {
        flatten_json(report, "", text);
    } else {
        text << report.dump(2) << "\n";
    }
    emit_text(text.str(), output_path, out);
}

LdtSystem load_validated(const std::string& path, std::ostream& err) {
    LoadedModel loaded = load_model_file(path);
    for (const auto& w : loaded.warnings) {
        err << "warning: " << path << ": " << w << "\n";
    }
    const ValidationReport rep = validate_system(loaded.system);
    if (!rep.ok) {
        std::ostringstream msg;
        msg << "invalid model " << path;
        for (const auto& e : rep.errors) msg << "; " << e;
        throw std::invalid_argument(msg.str());
    }
    return loaded.system;
}

ordered_json model_summary(const LdtSystem& sys) {
    ordered_json j;
    j["name"] = sys.name;
    j["states"] = sys.state_dim();
    j["outputs"] = sys.output_dim();
    return j;
}

ordered_json horizon_json(Horizon h) {
    if (h.is_infinite()) return "inf";
    return h.steps();
}

ordered_json gramian_json(const GramianBundle& bundle) {
    ordered_json j;
    j["rank"] = bundle.rank;
    j["observable"] = bundle.full_rank();
    j["min_eig"] = json_real(bundle.min_eig);
    j["max_eig"] = json_real(bundle.max_eig);
    j["determinant"] = json_real(bundle.determinant);
    j["G"] = json_matrix(bundle.G);
    return j;
}

ordered_json metrics_json(const EllipsoidMetrics& metrics) {
    ordered_json j;
    j["radii"] = json_vector(metrics.radii);
    j["volume"] = json_real(metrics.volume);
    j["hypersphere_coefficient"] = json_real(metrics.hypersphere_coefficient);
    ordered_json axes = ordered_json::array();
    for (Eigen::Index i = 0; i < metrics.axes.cols(); ++i) {
        axes.push_back(json_vector(metrics.axes.col(i)));
    }
    j["axes"] = std::move(axes);
    ordered_json unbounded = ordered_json::array();
    for (const auto& dir : metrics.unbounded_directions) {
        unbounded.push_back(json_vector(dir));
    }
    j["unbounded_directions"] = std::move(unbounded);
    return j;
}

ordered_json factors_json(const ShapeFactorReport& report) {
    ordered_json j;
    ordered_json eigs = ordered_json::array();
    for (Eigen::Index i = 0; i < report.eigen.eigenvalues.size(); ++i) {
        ordered_json e;
        e["re"] = report.eigen.eigenvalues(i).real();
        e["im"] = report.eigen.eigenvalues(i).imag();
        e["modulus"] = std::abs(report.eigen.eigenvalues(i));
        eigs.push_back(std::move(e));
    }
    j["eigenvalues"] = std::move(eigs);
    j["det_p_abs"] = json_real(report.det_p_abs);
    j["f1"] = json_real(report.f1);
    j["f1_pairwise"] = json_matrix(report.f1_pairwise);
    j["f2"] = json_vector(report.f2);
    j["f3"] = json_vector(report.f3);
    j["analytic_determinant"] = json_real(report.analytic_det);
    j["vol_error_inf"] = json_real(report.vol_error_inf);
    j["vol_image_inf"] = json_real(report.vol_image_inf);
    return j;
}

Horizon make_horizon(bool infinite, int steps) {
    return infinite ? Horizon::infinite() : Horizon::finite(steps);
}

Vector parse_number_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            values.push_back(std::stod(item, &pos));
            while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw std::invalid_argument("cannot parse number list entry '" + item + "'");
        }
    }
    if (values.empty()) {
        throw std::invalid_argument("empty number list");
    }
    return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

RankingPolicy parse_policy_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open policy file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("cannot parse policy file " + path + ": " + e.what());
    }

    RankingPolicy policy;
    if (doc.contains("mode")) {
        const std::string mode = doc["mode"].get<std::string>();
        if (mode == "constrained_volume") {
            policy.mode = RankingPolicy::Mode::constrained_volume;
        } else if (mode == "weighted_sum") {
            policy.mode = RankingPolicy::Mode::weighted_sum;
        } else {
            throw std::invalid_argument("policy mode must be constrained_volume or weighted_sum");
        }
    }
    if (doc.contains("floors")) {
        const auto& floors = doc["floors"];
        if (floors.contains("r_min")) policy.min_radius_floor = floors["r_min"].get<double>();
        if (floors.contains("f1")) policy.evenness_floor = floors["f1"].get<double>();
    }
    if (doc.contains("weights")) {
        const auto& weights = doc["weights"];
        if (weights.contains("vol_error")) policy.weight_vol_error = weights["vol_error"].get<double>();
        if (weights.contains("r_max")) policy.weight_r_max = weights["r_max"].get<double>();
        if (weights.contains("inv_f1")) policy.weight_inv_f1 = weights["inv_f1"].get<double>();
    }
    return policy;
}

// ---------------------------------------------------------------------------
// command option structs

struct ValidateOpts {
    std::string model;
    std::string format = "json";
    std::string output;
};

struct AnalyzeOpts {
    std::string model;
    int steps = 16;
    bool infinite = false;
    bool analytic = false;
    bool require_observable = false;
    std::string format = "json";
    std::string output;
};

struct FactorsOpts {
    std::string model;
    std::string format = "json";
    std::string output;
};

struct DualOpts {
    std::string model;
    int steps = 16;
    bool infinite = false;
    double tolerance = 1e-9;
    std::string format = "json";
    std::string output;
};

struct BoundaryOpts {
    std::string model;
    int steps = 16;
    bool infinite = false;
    int samples = 256;
    std::string format = "csv";
    std::string output;
};

struct BenchOpts {
    std::string model;
    int steps = 16;
    int trials = 10000;
    std::uint64_t seed = 0;
    std::string sampling = "boundary";
    std::string dump_trials;
    std::string format = "json";
    std::string output;
};

struct CompareOpts {
    std::vector<std::string> models;
    int steps = 16;
    bool infinite = false;
    bool analytic = false;
    std::string normalize = "auto";
    std::string direction = "divide";
    std::string policy_file;
    std::string format = "table";
    std::string output;
};

struct MinSamplesOpts {
    std::string model;
    std::string error_bound;
    int n_max = 64;
    std::string format = "json";
    std::string output;
};

// ---------------------------------------------------------------------------
// command handlers

int cmd_validate(const ValidateOpts& opts, std::ostream& out, std::ostream& err) {
    LoadedModel loaded;
    ordered_json report;
    report["schema_version"] = kSchemaVersion;
    report["command"] = "validate";
    try {
        loaded = load_model_file(opts.model);
    } catch (const std::invalid_argument& e) {
        report["valid"] = false;
        report["errors"] = ordered_json::array({e.what()});
        report["warnings"] = ordered_json::array();
        emit_report(report, opts.format, opts.output, out);
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    const ValidationReport rep = validate_system(loaded.system);
    report["model"] = model_summary(loaded.system);
    report["valid"] = rep.ok;
    report["errors"] = rep.errors;
    ordered_json warnings = ordered_json::array();
    for (const auto& w : loaded.warnings) warnings.push_back(w);
    for (const auto& w : rep.warnings) warnings.push_back(w);
    report["warnings"] = std::move(warnings);
    emit_report(report, opts.format, opts.output, out);
    return rep.ok ? kExitOk : kExitUsage;
}

int cmd_analyze(const AnalyzeOpts& opts, std::ostream& out, std::ostream& err) {
    const LdtSystem sys = load_validated(opts.model, err);
    const Horizon horizon = make_horizon(opts.infinite, opts.steps);
    const GramianBundle bundle = gramian_for(sys, horizon);

    if (opts.require_observable && !bundle.full_rank()) {
        throw UnobservableError("model is unobservable at horizon " + horizon.str() +
                                " (rank " + std::to_string(bundle.rank) + " of " +
                                std::to_string(bundle.dim()) + ")");
    }

    ordered_json report;
    report["schema_version"] = kSchemaVersion;
    report["command"] = "analyze";
    report["model"] = model_summary(sys);
    report["horizon"] = horizon_json(horizon);
    report["verdict"] = bundle.full_rank() ? "observable" : "unobservable";
    report["gramian"] = gramian_json(bundle);
    report["error_ellipsoid"] = metrics_json(error_ellipsoid_metrics(bundle));
    report["image_ellipsoid"] = metrics_json(image_ellipsoid_metrics(bundle));

    if (opts.analytic) {
        if (!opts.infinite) {
            report["analytic"] = "analytic factors apply to the infinite horizon; "
                                 "pass --infinite";
        } else {
            report["analytic"] = factors_json(shape_factors(sys));
        }
    }
    emit_report(report, opts.format, opts.output, out);
    return kExitOk;
}

int cmd_factors(const FactorsOpts& opts, std::ostream& out, std::ostream& err) {
    const LdtSystem sys = load_validated(opts.model, err);
    const ShapeFactorReport factors = shape_factors(sys);

    ordered_json report;
    report["schema_version"] = kSchemaVersion;
    report["command"] = "factors";
    report["model"] = model_summary(sys);
    report["factors"] = factors_json(factors);
    emit_report(report, opts.format, opts.output, out);
    return kExitOk;
}

int cmd_dual(const DualOpts& opts, std::ostream& out, std::ostream& err) {
    const LdtSystem sys = load_validated(opts.model, err);
    const Horizon horizon = make_horizon(opts.infinite, opts.steps);
    const DualityReport rep = verify_duality(sys, horizon, opts.tolerance);

    ordered_json report;
    report["schema_version"] = kSchemaVersion;
    report["command"] = "dual";
    report["model"] = model_summary(sys);
    report["horizon"] = horizon_json(horizon);
    report["tolerance"] = json_real(rep.tolerance);
    report["vol_product_residual"] = json_real(rep.vol_product_residual);
    report["radii_residuals"] = json_vector(rep.radii_residuals);
    report["rank_deficient"] = rep.rank_deficient;
    report["pass"] = rep.pass;
    emit_report(report, opts.format, opts.output, out);
    return kExitOk;
}

int cmd_boundary(const BoundaryOpts& opts, std::ostream& out, std::ostream& err) {
    const LdtSystem sys = load_validated(opts.model, err);
    if (sys.state_dim() != 2) {
        throw std::invalid_argument("boundary export needs a 2-D model, got n = " +
                                    std::to_string(sys.state_dim()));
    }
    const Horizon horizon = make_horizon(opts.infinite, opts.steps);
    const GramianBundle bundle = gramian_for(sys, horizon);
    if (!bundle.full_rank()) {
        throw UnobservableError(
            "boundary export needs an observable model; error set is unbounded");
    }

    const auto error_pts = boundary_sweep_2d(error_ellipsoid(bundle), opts.samples);
    const auto image_pts = boundary_sweep_2d(image_ellipsoid(bundle), opts.samples);

    std::ostringstream text;
    if (opts.format == "json") {
        ordered_json report;
        report["schema_version"] = kSchemaVersion;
        report["command"] = "boundary";
        report["model"] = model_summary(sys);
        report["horizon"] = horizon_json(horizon);
        ordered_json epts = ordered_json::array();
        for (const auto& p : error_pts) epts.push_back(json_vector(p));
        ordered_json ipts = ordered_json::array();
        for (const auto& p : image_pts) ipts.push_back(json_vector(p));
        report["error_boundary"] = std::move(epts);
        report["image_boundary"] = std::move(ipts);
        text << report.dump(2) << "\n";
    } else {
        text << "set,x1,x2\n";
        for (const auto& p : error_pts) {
            text << "error," << format_g9(p(0)) << "," << format_g9(p(1)) << "\n";
        }
        for (const auto& p : image_pts) {
            text << "image," << format_g9(p(0)) << "," << format_g9(p(1)) << "\n";
        }
    }
    emit_text(text.str(), opts.output, out);
    return kExitOk;
}

int cmd_bench(const BenchOpts& opts, std::ostream& out, std::ostream& err) {
    const LdtSystem sys = load_validated(opts.model, err);

    BenchConfig cfg;
    cfg.trials = opts.trials;
    cfg.seed = opts.seed;
    cfg.horizon = opts.steps;
    cfg.noise = NoiseModel{};  // sequence two-norm, bound 1
    cfg.sampling = opts.sampling == "interior" ? BenchConfig::Sampling::interior
                                               : BenchConfig::Sampling::boundary;
    cfg.record_trials = !opts.dump_trials.empty();

    const BenchResult result = run_containment_experiment(sys, cfg);

    if (!opts.dump_trials.empty() && result.records) {
        std::ostringstream csv;
        csv << "trial,quadratic_form,error_norm\n";
        for (std::size_t i = 0; i < result.records->size(); ++i) {
            csv << i << "," << format_g9((*result.records)[i].quadratic_form) << ","
                << format_g9((*result.records)[i].error_norm) << "\n";
        }
        emit_text(csv.str(), opts.dump_trials, out);
    }

    ordered_json report;
    report["schema_version"] = kSchemaVersion;
    report["command"] = "bench";
    report["model"] = model_summary(sys);
    report["horizon"] = opts.steps;
    report["trials"] = result.trials;
    report["seed"] = opts.seed;
    report["sampling"] = opts.sampling;
    report["noise"] = {{"scope", "sequence"}, {"norm", "two"}, {"bound", 1.0}};
    report["containment_fraction"] = json_real(result.containment_fraction);
    report["max_quadratic_form"] = json_real(result.max_quadratic_form);
    report["worst_case_error_norm"] = json_real(result.worst_case_error_norm);
    emit_report(report, opts.format, opts.output, out);
    return kExitOk;
}

LdtSystem normalize_for_compare(const LdtSystem& sys, const std::string& mode,
                                NormalizationSpec::Direction direction) {
    if (mode == "none") return sys;
    if (mode == "rated") return normalize_rated(sys, rated_spec_for(sys, direction));
    if (mode == "shared") return normalize_shared(sys, shared_spec_for(sys, direction));
    // auto: prefer shared target intervals, then rated values, else untouched
    if (sys.shared_ranges) {
        return normalize_shared(sys, shared_spec_for(sys, direction));
    }
    if (sys.rated_states || sys.rated_outputs) {
        return normalize_rated(sys, rated_spec_for(sys, direction));
    }
    return sys;
}

std::string ranking_table(const RankingResult& result) {
    std::ostringstream table;
    table << std::left << std::setw(5) << "rank" << std::setw(20) << "candidate"
          << std::setw(15) << "score" << std::setw(15) << "vol_error"
          << std::setw(15) << "r_min" << std::setw(15) << "r_max" << std::setw(15)
          << "F1" << "violations\n";
    int rank = 1;
    for (const auto& entry : result.ranked) {
        const MetricRow& row = entry.row;
        table << std::left << std::setw(5) << rank++ << std::setw(20)
              << row.candidate << std::setw(15) << format_g9(entry.score)
              << std::setw(15) << format_g9(row.vol_error) << std::setw(15)
              << format_g9(row.r_min) << std::setw(15) << format_g9(row.r_max)
              << std::setw(15) << (row.f1 ? format_g9(*row.f1) : "-");
        bool first = true;
        for (const auto& v : row.constraint_violations) {
            table << (first ? "" : "; ") << v;
            first = false;
        }
        table << "\n";
    }
    for (const auto& row : result.excluded) {
        table << std::left << std::setw(5) << "-" << std::setw(20) << row.candidate
              << "excluded: ";
        bool first = true;
        for (const auto& v : row.constraint_violations) {
            table << (first ? "" : "; ") << v;
            first = false;
        }
        table << "\n";
    }
    if (!result.note.empty()) table << result.note << "\n";
    for (const auto& t : result.tie_breaks) table << "tie-break: " << t << "\n";
    return table.str();
}

ordered_json row_json(const MetricRow& row) {
    ordered_json j;
    j["candidate"] = row.candidate;
    j["horizon"] = horizon_json(row.horizon);
    j["rank"] = row.rank;
    j["observable"] = row.observable;
    j["vol_error"] = json_real(row.vol_error);
    j["vol_image"] = json_real(row.vol_image);
    j["r_min"] = json_real(row.r_min);
    j["r_max"] = json_real(row.r_max);
    j["det_g"] = json_real(row.det_g);
    if (row.f1) j["f1"] = json_real(*row.f1);
    if (row.f2) j["f2"] = json_vector(*row.f2);
    if (row.f3) j["f3"] = json_vector(*row.f3);
    if (!row.analytic_note.empty()) j["analytic_note"] = row.analytic_note;
    j["constraint_violations"] = row.constraint_violations;
    return j;
}

int cmd_compare(const CompareOpts& opts, std::ostream& out, std::ostream& err) {
    const Horizon horizon = make_horizon(opts.infinite, opts.steps);
    const auto direction = opts.direction == "multiply"
                               ? NormalizationSpec::Direction::multiply_output
                               : NormalizationSpec::Direction::divide_output;

    std::vector<MetricRow> rows;
    for (const auto& path : opts.models) {
        const LdtSystem raw = load_validated(path, err);
        const LdtSystem sys = normalize_for_compare(raw, opts.normalize, direction);
        rows.push_back(metric_report(sys, horizon, opts.analytic));
    }

    RankingPolicy policy;
    if (!opts.policy_file.empty()) policy = parse_policy_file(opts.policy_file);
    const RankingResult result = rank_candidates(std::move(rows), policy);

    if (opts.format == "table") {
        emit_text(ranking_table(result), opts.output, out);
        return kExitOk;
    }
    if (opts.format == "csv") {
        std::ostringstream csv;
        csv << "rank,candidate,score,vol_error,r_min,r_max,f1,violations\n";
        int rank = 1;
        for (const auto& entry : result.ranked) {
            const MetricRow& row = entry.row;
            std::string violations;
            for (const auto& v : row.constraint_violations) {
                if (!violations.empty()) violations += "; ";
                violations += v;
            }
            csv << rank++ << "," << csv_escape(row.candidate) << ","
                << format_g9(entry.score) << "," << format_g9(row.vol_error) << ","
                << format_g9(row.r_min) << "," << format_g9(row.r_max) << ","
                << (row.f1 ? format_g9(*row.f1) : "") << ","
                << csv_escape(violations) << "\n";
        }
        emit_text(csv.str(), opts.output, out);
        return kExitOk;
    }

    ordered_json report;
    report["schema_version"] = kSchemaVersion;
    report["command"] = "compare";
    report["horizon"] = horizon_json(horizon);
    report["normalize"] = opts.normalize;
    ordered_json ranking = ordered_json::array();
    int rank = 1;
    for (const auto& entry : result.ranked) {
        ordered_json j = row_json(entry.row);
        j["ranking_position"] = rank++;
        j["score"] = json_real(entry.score);
        ranking.push_back(std::move(j));
    }
    report["ranking"] = std::move(ranking);
    ordered_json excluded = ordered_json::array();
    for (const auto& row : result.excluded) excluded.push_back(row_json(row));
    report["excluded"] = std::move(excluded);
    report["tie_breaks"] = result.tie_breaks;
    if (!result.note.empty()) report["note"] = result.note;
    emit_report(report, "json", opts.output, out);
    return kExitOk;
}

int cmd_minsamples(const MinSamplesOpts& opts, std::ostream& out,
                   std::ostream& err) {
    const LdtSystem sys = load_validated(opts.model, err);
    const Vector e_b = parse_number_list(opts.error_bound);
    const auto result = min_samples_for_error(sys, e_b, opts.n_max);

    ordered_json report;
    report["schema_version"] = kSchemaVersion;
    report["command"] = "minsamples";
    report["model"] = model_summary(sys);
    report["e_b"] = json_vector(e_b);
    report["n_max"] = opts.n_max;
    if (result) {
        report["min_samples"] = *result;
    } else {
        report["min_samples"] = nullptr;
    }
    emit_report(report, opts.format, opts.output, out);
    return kExitOk;
}

}  // namespace

std::string format_g9(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"observe-ability analysis for linear discrete-time systems"};
    app.name("obsa");
    app.require_subcommand(1);

    ValidateOpts validate_opts;
    auto* validate = app.add_subcommand("validate", "check a model document");
    validate->add_option("model", validate_opts.model, "model JSON file")->required();
    validate->add_option("--format", validate_opts.format)->check(CLI::IsMember({"json", "csv"}));
    validate->add_option("-o,--output", validate_opts.output, "write the report to a file");

    AnalyzeOpts analyze_opts;
    auto* analyze = app.add_subcommand(
        "analyze", "Gramian, ellipsoid metrics and observability verdict");
    analyze->add_option("model", analyze_opts.model)->required();
    auto* analyze_steps = analyze->add_option("--steps", analyze_opts.steps, "finite horizon")
                              ->check(CLI::PositiveNumber);
    analyze->add_flag("--infinite", analyze_opts.infinite, "infinite horizon")
        ->excludes(analyze_steps);
    analyze->add_flag("--analytic", analyze_opts.analytic,
                      "include closed-form factors (infinite horizon)");
    analyze->add_flag("--require-observable", analyze_opts.require_observable);
    analyze->add_option("--format", analyze_opts.format)->check(CLI::IsMember({"json", "csv"}));
    analyze->add_option("-o,--output", analyze_opts.output);

    FactorsOpts factors_opts;
    auto* factors = app.add_subcommand("factors", "closed-form shape factors");
    factors->add_option("model", factors_opts.model)->required();
    factors->add_option("--format", factors_opts.format)->check(CLI::IsMember({"json", "csv"}));
    factors->add_option("-o,--output", factors_opts.output);

    DualOpts dual_opts;
    auto* dual = app.add_subcommand("dual", "observability/reachability duality residuals");
    dual->add_option("model", dual_opts.model)->required();
    auto* dual_steps = dual->add_option("--steps", dual_opts.steps)->check(CLI::PositiveNumber);
    dual->add_flag("--infinite", dual_opts.infinite)->excludes(dual_steps);
    dual->add_option("--tolerance", dual_opts.tolerance)->check(CLI::PositiveNumber);
    dual->add_option("--format", dual_opts.format)->check(CLI::IsMember({"json", "csv"}));
    dual->add_option("-o,--output", dual_opts.output);

    BoundaryOpts boundary_opts;
    auto* boundary = app.add_subcommand("boundary", "2-D ellipsoid boundary export");
    boundary->add_option("model", boundary_opts.model)->required();
    auto* boundary_steps = boundary->add_option("--steps", boundary_opts.steps)->check(CLI::PositiveNumber);
    boundary->add_flag("--infinite", boundary_opts.infinite)->excludes(boundary_steps);
    boundary->add_option("--samples", boundary_opts.samples)->check(CLI::PositiveNumber);
    boundary->add_option("--format", boundary_opts.format)->check(CLI::IsMember({"csv", "json"}));
    boundary->add_option("-o,--output", boundary_opts.output);

    BenchOpts bench_opts;
    auto* bench = app.add_subcommand("bench", "Monte-Carlo containment experiment");
    bench->add_option("model", bench_opts.model)->required();
    bench->add_option("--steps", bench_opts.steps)->check(CLI::PositiveNumber);
    bench->add_option("--trials", bench_opts.trials)->check(CLI::PositiveNumber);
    bench->add_option("--seed", bench_opts.seed);
    bench->add_option("--sampling", bench_opts.sampling)
        ->check(CLI::IsMember({"boundary", "interior"}));
    bench->add_option("--dump-trials", bench_opts.dump_trials,
                      "write per-trial records to a CSV file");
    bench->add_option("--format", bench_opts.format)->check(CLI::IsMember({"json", "csv"}));
    bench->add_option("-o,--output", bench_opts.output);

    CompareOpts compare_opts;
    auto* compare = app.add_subcommand("compare", "normalize, grade and rank candidate models");
    compare->add_option("models", compare_opts.models, "two or more model files")
        ->required()
        ->expected(2, -1);
    auto* compare_steps = compare->add_option("--steps", compare_opts.steps)->check(CLI::PositiveNumber);
    compare->add_flag("--infinite", compare_opts.infinite)->excludes(compare_steps);
    compare->add_flag("--analytic", compare_opts.analytic);
    compare->add_option("--normalize", compare_opts.normalize)
        ->check(CLI::IsMember({"auto", "rated", "shared", "none"}));
    compare->add_option("--scale-direction", compare_opts.direction)
        ->check(CLI::IsMember({"divide", "multiply"}));
    compare->add_option("--policy", compare_opts.policy_file, "ranking policy JSON");
    compare->add_option("--format", compare_opts.format)
        ->check(CLI::IsMember({"table", "json", "csv"}));
    compare->add_option("-o,--output", compare_opts.output);

    MinSamplesOpts minsamples_opts;
    auto* minsamples = app.add_subcommand(
        "minsamples", "fewest samples before a target error bound is excluded");
    minsamples->add_option("model", minsamples_opts.model)->required();
    minsamples->add_option("--error-bound", minsamples_opts.error_bound,
                           "comma-separated target error vector")
        ->required();
    minsamples->add_option("--nmax", minsamples_opts.n_max)->check(CLI::PositiveNumber);
    minsamples->add_option("--format", minsamples_opts.format)->check(CLI::IsMember({"json", "csv"}));
    minsamples->add_option("-o,--output", minsamples_opts.output);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << app.version() << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (validate->parsed()) return cmd_validate(validate_opts, out, err);
        if (analyze->parsed()) return cmd_analyze(analyze_opts, out, err);
        if (factors->parsed()) return cmd_factors(factors_opts, out, err);
        if (dual->parsed()) return cmd_dual(dual_opts, out, err);
        if (boundary->parsed()) return cmd_boundary(boundary_opts, out, err);
        if (bench->parsed()) return cmd_bench(bench_opts, out, err);
        if (compare->parsed()) return cmd_compare(compare_opts, out, err);
        if (minsamples->parsed()) return cmd_minsamples(minsamples_opts, out, err);
    } catch (const UnobservableError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUnobservable;
    } catch (const AssumptionError& e) {
        err << "error: " << e.what() << "\n";
        return kExitAssumption;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::overflow_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    err << "error: no command given\n";
    return kExitUsage;
}

}  // namespace obsa
