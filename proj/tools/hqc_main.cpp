// hqc — CLI front end: connection, holonomy, curvature, rank-probe, sweep.

#include <cstdio>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hqc/jobio.hpp"

namespace {

using namespace hqc;

struct CommonArgs {
    std::string              model{"two_qubit"};
    int                      n{2};
    int                      cutoff{16};
    int                      segments{1024};
    std::uint64_t            seed{1};
    std::string              out{"report.json"};
    std::vector<std::string> tol_overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--model", args.model, "Model preset: two_qubit or n_qubit")
        ->check(CLI::IsMember({"two_qubit", "n_qubit"}));
    cmd->add_option("--n", args.n, "Qubit count for n_qubit (>= 2)");
    cmd->add_option("--cutoff", args.cutoff, "Per-mode Fock cutoff");
    cmd->add_option("--segments", args.segments, "Path discretization segments");
    cmd->add_option("--seed", args.seed, "Random seed for sampled computations");
    cmd->add_option("--out", args.out, "Report output path");
    cmd->add_option("--tol", args.tol_overrides, "Tolerance override name=value (repeatable)");
}

JobConfig config_from(const CommonArgs& args) {
    JobConfig config = default_config();
    config.model = args.model == "two_qubit" ? ModelKind::two_qubit : ModelKind::n_qubit;
    config.n = args.model == "two_qubit" ? 2 : args.n;
    config.cutoff = args.cutoff;
    config.n_segments = args.segments;
    config.seed = args.seed;
    config.out_path = args.out;
    for (const std::string& t : args.tol_overrides) apply_tolerance_override(config, t);
    validate_config(config);
    return config;
}

ParamPoint load_point(const JobConfig& config, const std::string& path) {
    const ModelSpec spec = spec_from(config);
    if (path.empty()) return origin_point(spec);
    return parse_point_file(spec, path);
}

LoopPath load_loop(JobConfig& config, const CLI::App* cmd, const std::string& path) {
    const LoopPath loop = parse_loop_file(path);
    // The loop file fixes the model; an explicit --model/--n must agree.
    if (cmd->count("--model") > 0 && loop.model != config.model) {
        throw ValidationError("loop file model disagrees with --model");
    }
    if (loop.model == ModelKind::n_qubit && cmd->count("--n") > 0 && loop.n != config.n) {
        throw ValidationError("loop file n disagrees with --n");
    }
    config.model = loop.model;
    config.n = loop.n;
    validate_config(config);
    return loop;
}

void print_warnings(const JobConfig& config, const ParamPoint& point) {
    for (const std::string& w : validate_point(spec_from(config), point)) {
        std::cerr << "warning: " << w << '\n';
    }
}

std::vector<int> parse_cutoff_list(const std::string& text) {
    std::vector<int> cutoffs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            cutoffs.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw ValidationError("--cutoffs: cannot parse '" + item + "'");
        }
    }
    return cutoffs;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Holonomic quantum gate engine: connection, curvature, and "
                 "path-ordered holonomies of the optical Kerr-qubit models"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string loop_path, point_path, coords_arg, cutoffs_arg{"8,12,16,24"};
    int samples = 200;
    double eps = 0.05, step = 1e-4;

    CLI::App* connection = app.add_subcommand("connection", "Connection form A at a point");
    add_common(connection, args);
    connection->add_option("--point", point_path, "JSON point file (default: origin)");

    CLI::App* holonomy_cmd = app.add_subcommand("holonomy", "Path-ordered holonomy of a loop");
    add_common(holonomy_cmd, args);
    holonomy_cmd->add_option("--loop", loop_path, "JSON loop file")->required();

    CLI::App* curvature = app.add_subcommand("curvature", "Curvature F_mu_nu at a point");
    add_common(curvature, args);
    curvature->add_option("--coords", coords_arg, "Coordinate pair, e.g. alpha1_re,alpha1_im")
        ->required();
    curvature->add_option("--point", point_path, "JSON point file (default: origin)");
    curvature->add_option("--step", step, "Finite-difference step for dA");

    CLI::App* rank = app.add_subcommand("rank-probe", "Holonomy-algebra rank estimate");
    add_common(rank, args);
    rank->add_option("--samples", samples, "Plaquette samples");
    rank->add_option("--eps", eps, "Plaquette edge length");
    rank->add_option("--base", point_path, "JSON base-point file (default: origin)");

    CLI::App* sweep = app.add_subcommand("sweep", "Cutoff-convergence sweep of a loop");
    add_common(sweep, args);
    sweep->add_option("--loop", loop_path, "JSON loop file")->required();
    sweep->add_option("--cutoffs", cutoffs_arg, "Ascending cutoff list, e.g. 8,12,16,24");

    CLI11_PARSE(app, argc, argv);

    try {
        JobConfig config = config_from(args);
        config.samples = samples;
        config.eps = eps;
        config.step = step;
        validate_config(config);

        if (connection->parsed()) {
            const ParamPoint point = load_point(config, point_path);
            print_warnings(config, point);
            run_connection_job(config, point);
            std::cout << "connection report written to " << config.out_path << '\n';
        } else if (holonomy_cmd->parsed()) {
            const LoopPath loop = load_loop(config, holonomy_cmd, loop_path);
            run_holonomy_job(config, loop);
            std::cout << "holonomy report written to " << config.out_path << '\n';
        } else if (curvature->parsed()) {
            const auto comma = coords_arg.find(',');
            if (comma == std::string::npos) {
                throw ValidationError("--coords expects two names separated by a comma");
            }
            const ModelSpec spec = spec_from(config);
            const int mu = coord_index(spec, coords_arg.substr(0, comma));
            const int nu = coord_index(spec, coords_arg.substr(comma + 1));
            const ParamPoint point = load_point(config, point_path);
            print_warnings(config, point);
            run_curvature_job(config, point, mu, nu);
            std::cout << "curvature report written to " << config.out_path << '\n';
        } else if (rank->parsed()) {
            const ParamPoint base = load_point(config, point_path);
            print_warnings(config, base);
            run_rank_probe(config, base);
            std::cout << "rank-probe report written to " << config.out_path << '\n';
        } else if (sweep->parsed()) {
            const LoopPath loop = load_loop(config, sweep, loop_path);
            run_convergence_sweep(config, loop, parse_cutoff_list(cutoffs_arg));
            std::cout << "sweep report written to " << config.out_path << '\n';
        }
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << '\n';
        return 4;
    } catch (const ToleranceError& e) {
        std::cerr << "tolerance failure: " << e.what() << '\n';
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
