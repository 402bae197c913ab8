// jobio.hpp — Job configuration, loop-description files, and JSON report writers
// behind the CLI verbs. Reports are deterministic for a fixed (config, input, seed).

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hqc/holonomy.hpp"

namespace hqc {

// Resolved job settings; every report embeds these verbatim.
struct JobConfig {
    ModelKind     model{ModelKind::two_qubit};
    int           n{2};
    int           cutoff{16};
    int           n_segments{1024};
    std::uint64_t seed{1};
    int           samples{200};  // rank probe
    double        eps{0.05};     // plaquette size (rank probe / curvature checks)
    double        step{1e-4};    // curvature finite-difference step
    std::string   out_path{"report.json"};
    std::map<std::string, double> tolerances; // resolved: defaults + overrides
};

// Named tolerances with their defaults; --tol only accepts these names.
const std::map<std::string, double>& default_tolerances();

JobConfig default_config();

// Applies a "name=value" override; throws ValidationError for unknown names.
void apply_tolerance_override(JobConfig& config, const std::string& spec_text);

// Positivity and model constraints (the CLI requires n >= 2).
void validate_config(const JobConfig& config);

ModelSpec spec_from(const JobConfig& config);

// ------------------------------- Input files ---------------------------------

// Loop files are JSON: {"model": "two_qubit"|"n_qubit", ["n": k,]
//   "segments": [{"kind":"line","from":{coord:val,...},"to":{...}}
//               |{"kind":"arc","plane":[c0,c1],"center":{...},"radius":r,
//                 "angle_start":a0,"angle_end":a1}, ...]}
// Coordinates are named alphaJ_re, alphaJ_im, betaJ_re, betaJ_im, lambdaJ_re,
// lambdaJ_im, muJ_re, muJ_im; omitted coordinates are zero. Closure is the
// caller's job (validate_loop), unknown names and malformed fields throw here.
LoopPath parse_loop_file(const std::string& path);
LoopPath parse_loop_text(const std::string& text, const std::string& source_name);

// Point files are JSON objects {coord_name: value, ...}; omitted coords are 0.
ParamPoint parse_point_file(const ModelSpec& spec, const std::string& path);

// --------------------------------- Jobs --------------------------------------
// Each job writes its JSON report to config.out_path, then throws
// ToleranceError if a configured tolerance failed (the report is still on disk).

void run_holonomy_job(const JobConfig& config, const LoopPath& loop);
void run_connection_job(const JobConfig& config, const ParamPoint& point);
void run_curvature_job(const JobConfig& config, const ParamPoint& point, int mu, int nu);
void run_rank_probe(const JobConfig& config, const ParamPoint& base_point);
void run_convergence_sweep(const JobConfig& config, const LoopPath& loop,
                           const std::vector<int>& cutoffs);

} // namespace hqc
