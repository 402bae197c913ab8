#include "hqc/jobio.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace hqc {

using nlohmann::json;

// ------------------------------- Configuration -------------------------------

const std::map<std::string, double>& default_tolerances() {
    static const std::map<std::string, double> defaults = {
        {"gate_unitarity", 1e-7}, // holonomy gate defect
        {"op_unitarity", 1e-10},  // constructed operator defect
        {"loop_closure", 1e-12},
        {"det_phase_match", 1e-6}, // arg det gate vs integral of tr A
        {"kernel", 1e-9},          // degeneracy tolerance for the Kerr kernel
    };
    return defaults;
}

JobConfig default_config() {
    JobConfig config;
    config.tolerances = default_tolerances();
    return config;
}

void apply_tolerance_override(JobConfig& config, const std::string& spec_text) {
    const auto eq = spec_text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= spec_text.size()) {
        throw ValidationError("--tol expects name=value, got '" + spec_text + "'");
    }
    const std::string name = spec_text.substr(0, eq);
    if (default_tolerances().find(name) == default_tolerances().end()) {
        std::string known;
        for (const auto& [k, v] : default_tolerances()) known += (known.empty() ? "" : ", ") + k;
        throw ValidationError("unknown tolerance '" + name + "' (known: " + known + ")");
    }
    double value = 0.0;
    try {
        std::size_t used = 0;
        value = std::stod(spec_text.substr(eq + 1), &used);
        if (used != spec_text.size() - eq - 1) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
        throw ValidationError("--tol " + name + ": cannot parse value '" +
                              spec_text.substr(eq + 1) + "'");
    }
    if (value <= 0.0) throw ValidationError("--tol " + name + ": value must be positive");
    config.tolerances[name] = value;
}

void validate_config(const JobConfig& config) {
    if (config.model == ModelKind::n_qubit && config.n < 2) {
        throw ValidationError("n_qubit jobs require n >= 2");
    }
    if (config.model == ModelKind::two_qubit && config.n != 2) {
        throw ValidationError("two_qubit jobs have n = 2");
    }
    if (config.cutoff < 2) throw ValidationError("cutoff must be >= 2");
    if (config.n_segments < 8) throw ValidationError("segments must be >= 8");
    if (config.samples < 1) throw ValidationError("samples must be >= 1");
    if (config.eps <= 0.0) throw ValidationError("eps must be positive");
    if (config.step <= 0.0) throw ValidationError("step must be positive");
    if (config.out_path.empty()) throw ValidationError("output path must not be empty");
    for (const auto& [name, value] : config.tolerances) {
        if (value <= 0.0) throw ValidationError("tolerance " + name + " must be positive");
    }
}

ModelSpec spec_from(const JobConfig& config) {
    validate_config(config);
    return config.model == ModelKind::two_qubit ? two_qubit_model(config.cutoff)
                                                : n_qubit_model(config.n, config.cutoff);
}

// ------------------------------- Input files ---------------------------------

namespace {

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("'" + path + "': " + e.what());
    }
}

// Naming-only spec: coordinate names depend on the kind and n alone.
ModelSpec naming_spec(ModelKind kind, int n) {
    ModelSpec spec;
    spec.kind = kind;
    spec.n = n;
    spec.cutoff = 2;
    return spec;
}

Eigen::VectorXd coords_from_object(const ModelSpec& spec, const json& obj,
                                   const std::string& where) {
    if (!obj.is_object()) {
        throw ValidationError(where + ": expected an object of coordinate values");
    }
    Eigen::VectorXd coords = Eigen::VectorXd::Zero(coord_count(spec));
    for (const auto& [key, value] : obj.items()) {
        int idx = 0;
        try {
            idx = coord_index(spec, key);
        } catch (const ValidationError& e) {
            throw ValidationError(where + ": " + e.what());
        }
        if (!value.is_number()) {
            throw ValidationError(where + ": coordinate '" + key + "' must be a number");
        }
        coords(idx) = value.get<double>();
    }
    return coords;
}

json coords_to_object(const ModelSpec& spec, const Eigen::VectorXd& coords) {
    json obj = json::object();
    for (int c = 0; c < coord_count(spec); ++c) obj[coord_name(spec, c)] = coords(c);
    return obj;
}

ModelKind parse_model_name(const std::string& name, const std::string& where) {
    if (name == "two_qubit") return ModelKind::two_qubit;
    if (name == "n_qubit") return ModelKind::n_qubit;
    throw ValidationError(where + ": unknown model '" + name +
                          "' (expected two_qubit or n_qubit)");
}

LoopPath parse_loop_json(const json& j, const std::string& source) {
    if (!j.is_object()) throw ValidationError(source + ": loop file must be a JSON object");
    if (!j.contains("model")) throw ValidationError(source + ": missing 'model'");
    const ModelKind kind = parse_model_name(j["model"].get<std::string>(), source);
    int n = 2;
    if (kind == ModelKind::n_qubit) {
        if (!j.contains("n")) throw ValidationError(source + ": n_qubit loops need 'n'");
        n = j["n"].get<int>();
        if (n < 2) throw ValidationError(source + ": n must be >= 2");
    } else if (j.contains("n") && j["n"].get<int>() != 2) {
        throw ValidationError(source + ": two_qubit loops have n = 2");
    }
    const ModelSpec names = naming_spec(kind, n);

    if (!j.contains("segments") || !j["segments"].is_array() || j["segments"].empty()) {
        throw ValidationError(source + ": 'segments' must be a non-empty array");
    }

    LoopPath loop;
    loop.model = kind;
    loop.n = n;
    int index = 0;
    for (const json& js : j["segments"]) {
        const std::string where = source + ": segment " + std::to_string(index);
        if (!js.is_object() || !js.contains("kind")) {
            throw ValidationError(where + ": expected an object with 'kind'");
        }
        const std::string kind_name = js["kind"].get<std::string>();
        if (kind_name == "line") {
            if (!js.contains("from") || !js.contains("to")) {
                throw ValidationError(where + ": line segments need 'from' and 'to'");
            }
            loop.segments.push_back(
                line_segment(coords_from_object(names, js["from"], where + " from"),
                             coords_from_object(names, js["to"], where + " to")));
        } else if (kind_name == "arc") {
            for (const char* field : {"plane", "radius", "angle_start", "angle_end"}) {
                if (!js.contains(field)) {
                    throw ValidationError(where + ": arc segments need '" + std::string(field) +
                                          "'");
                }
            }
            if (!js["plane"].is_array() || js["plane"].size() != 2) {
                throw ValidationError(where + ": 'plane' must name two coordinates");
            }
            const int c0 = coord_index(names, js["plane"][0].get<std::string>());
            const int c1 = coord_index(names, js["plane"][1].get<std::string>());
            const json center = js.contains("center") ? js["center"] : json::object();
            loop.segments.push_back(arc_segment(
                coords_from_object(names, center, where + " center"),
                js["radius"].get<double>(), c0, c1, js["angle_start"].get<double>(),
                js["angle_end"].get<double>()));
        } else {
            throw ValidationError(where + ": unknown kind '" + kind_name +
                                  "' (expected line or arc)");
        }
        ++index;
    }
    return loop;
}

json loop_to_json(const LoopPath& loop) {
    const ModelSpec names = naming_spec(loop.model, loop.n);
    json j;
    j["model"] = model_name(loop.model);
    j["n"] = loop.n;
    j["segments"] = json::array();
    for (const PathSegment& s : loop.segments) {
        json js;
        if (s.kind == PathSegment::Kind::line) {
            js["kind"] = "line";
            js["from"] = coords_to_object(names, s.from);
            js["to"] = coords_to_object(names, s.to);
        } else {
            js["kind"] = "arc";
            js["plane"] = {coord_name(names, s.plane0), coord_name(names, s.plane1)};
            js["center"] = coords_to_object(names, s.center);
            js["radius"] = s.radius;
            js["angle_start"] = s.angle_start;
            js["angle_end"] = s.angle_end;
        }
        j["segments"].push_back(std::move(js));
    }
    return j;
}

json matrix_to_json(const Matrix& m) {
    json entries = json::array();
    for (long r = 0; r < m.rows(); ++r) {
        for (long c = 0; c < m.cols(); ++c) {
            entries.push_back({m(r, c).real(), m(r, c).imag()});
        }
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

json config_to_json(const JobConfig& config) {
    json tol = json::object();
    for (const auto& [name, value] : config.tolerances) tol[name] = value;
    return json{{"model", model_name(config.model)}, {"n", config.n},
                {"cutoff", config.cutoff},           {"segments", config.n_segments},
                {"seed", config.seed},               {"samples", config.samples},
                {"eps", config.eps},                 {"step", config.step},
                {"tolerances", std::move(tol)}};
}

void write_report(const JobConfig& config, const json& body) {
    std::ofstream out(config.out_path);
    if (!out) throw ValidationError("cannot write report to '" + config.out_path + "'");
    out << body.dump(2) << '\n';
    if (!out) throw ValidationError("failed while writing '" + config.out_path + "'");
}

double wrap_angle(double a) {
    while (a > M_PI) a -= 2.0 * M_PI;
    while (a <= -M_PI) a += 2.0 * M_PI;
    return a;
}

} // namespace

LoopPath parse_loop_file(const std::string& path) {
    return parse_loop_json(load_json(path), path);
}

LoopPath parse_loop_text(const std::string& text, const std::string& source_name) {
    try {
        return parse_loop_json(json::parse(text), source_name);
    } catch (const json::parse_error& e) {
        throw ValidationError(source_name + ": " + e.what());
    }
}

ParamPoint parse_point_file(const ModelSpec& spec, const std::string& path) {
    const json j = load_json(path);
    return point_from_coords(spec, coords_from_object(spec, j, path));
}

// --------------------------------- Jobs --------------------------------------

void run_holonomy_job(const JobConfig& config, const LoopPath& loop) {
    const ModelSpec spec = spec_from(config);
    HolonomyOptions options;
    options.with_discretization_history = true;
    options.with_cutoff_history = true;
    options.closure_tol = config.tolerances.at("loop_closure");

    const HolonomyReport result = holonomy(spec, loop, config.n_segments, options);
    const double phase_integral = det_phase_integral(spec, loop, config.n_segments);
    const double phase_gap = std::abs(wrap_angle(phase_integral - result.det_phase));

    json j;
    j["report"] = "holonomy";
    j["config"] = config_to_json(config);
    j["loop"] = loop_to_json(loop);
    j["gate"] = matrix_to_json(result.gate);
    j["segments_used"] = result.segments_used;
    j["unitarity_defect"] = result.unitarity_defect;
    j["det_phase"] = result.det_phase;
    j["det_phase_integral"] = phase_integral;
    j["det_phase_gap"] = phase_gap;
    j["discretization_history"] = json::array();
    for (const auto& [count, dist] : result.discretization_history) {
        j["discretization_history"].push_back({{"segments", count}, {"gate_distance", dist}});
    }
    j["cutoff_history"] = json::array();
    for (const auto& [cut, dist] : result.cutoff_history) {
        j["cutoff_history"].push_back({{"cutoff", cut}, {"gate_distance", dist}});
    }
    write_report(config, j);

    if (result.unitarity_defect > config.tolerances.at("gate_unitarity")) {
        throw ToleranceError("holonomy gate unitarity defect " +
                             std::to_string(result.unitarity_defect) + " exceeds tolerance " +
                             std::to_string(config.tolerances.at("gate_unitarity")));
    }
    if (phase_gap > config.tolerances.at("det_phase_match")) {
        throw ToleranceError("det phase gap " + std::to_string(phase_gap) +
                             " exceeds tolerance " +
                             std::to_string(config.tolerances.at("det_phase_match")));
    }
}

void run_connection_job(const JobConfig& config, const ParamPoint& point) {
    const ModelSpec spec = spec_from(config);
    const std::vector<std::string> warnings = validate_point(spec, point);
    const ConnectionSample sample = connection_at(spec, point);

    json j;
    j["report"] = "connection";
    j["config"] = config_to_json(config);
    j["point"] = coords_to_object(spec, point.coords);
    j["warnings"] = warnings;
    j["components"] = json::array();
    double worst = 0.0;
    for (int c = 0; c < coord_count(spec); ++c) {
        const Matrix& a = sample.components[static_cast<std::size_t>(c)];
        const double defect = antihermitian_defect(a);
        worst = std::max(worst, defect);
        j["components"].push_back({{"coord", coord_name(spec, c)},
                                   {"matrix", matrix_to_json(a)},
                                   {"antihermiticity_defect", defect}});
    }
    j["max_antihermiticity_defect"] = worst;
    write_report(config, j);
}

void run_curvature_job(const JobConfig& config, const ParamPoint& point, int mu, int nu) {
    const ModelSpec spec = spec_from(config);
    const std::vector<std::string> warnings = validate_point(spec, point);
    const CurvatureSample sample = curvature_at(spec, point, mu, nu, config.step);

    json j;
    j["report"] = "curvature";
    j["config"] = config_to_json(config);
    j["point"] = coords_to_object(spec, point.coords);
    j["warnings"] = warnings;
    j["mu"] = coord_name(spec, mu);
    j["nu"] = coord_name(spec, nu);
    j["matrix"] = matrix_to_json(sample.f);
    j["antihermiticity_defect"] = antihermitian_defect(sample.f);
    j["trace"] = {sample.f.trace().real(), sample.f.trace().imag()};
    write_report(config, j);
}

void run_rank_probe(const JobConfig& config, const ParamPoint& base_point) {
    const ModelSpec spec = spec_from(config);
    const RankReport report =
        holonomy_algebra_rank(spec, base_point, config.samples, config.eps, config.seed);

    json j;
    j["report"] = "rank_probe";
    j["config"] = config_to_json(config);
    j["base_point"] = coords_to_object(spec, base_point.coords);
    j["rank"] = report.rank;
    j["dim_su"] = report.dim_su;
    j["dim_u"] = report.dim_u;
    j["max_abs_trace"] = report.max_abs_trace;
    j["eps_ratio"] = report.eps_ratio;
    j["samples"] = report.samples;
    j["verdict"] = verdict_name(report.verdict);
    write_report(config, j);
}

void run_convergence_sweep(const JobConfig& config, const LoopPath& loop,
                           const std::vector<int>& cutoffs) {
    if (cutoffs.empty()) throw ValidationError("sweep: cutoff list must not be empty");
    for (std::size_t i = 1; i < cutoffs.size(); ++i) {
        if (cutoffs[i] <= cutoffs[i - 1]) {
            throw ValidationError("sweep: cutoffs must be strictly ascending");
        }
    }
    if (cutoffs.front() < 2) throw ValidationError("sweep: cutoffs must be >= 2");
    validate_config(config);

    std::vector<Matrix> gates;
    for (int cut : cutoffs) {
        JobConfig point_config = config;
        point_config.cutoff = cut;
        const ModelSpec spec = spec_from(point_config); // throws ResourceError past the budget
        gates.push_back(holonomy(spec, loop, config.n_segments).gate);
    }

    json j;
    j["report"] = "convergence_sweep";
    j["config"] = config_to_json(config);
    j["loop"] = loop_to_json(loop);
    j["table"] = json::array();
    for (std::size_t i = 0; i < cutoffs.size(); ++i) {
        j["table"].push_back({{"cutoff", cutoffs[i]},
                              {"gate_distance", (gates[i] - gates.back()).norm()}});
    }
    j["final_gap"] = cutoffs.size() > 1
                         ? (gates[gates.size() - 2] - gates.back()).norm()
                         : 0.0;
    write_report(config, j);
}

} // namespace hqc
