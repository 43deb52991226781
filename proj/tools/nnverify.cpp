// Pipeline driver: partition -> preprocess -> abstract -> verify, plus a
// closed-loop simulator and scaling benchmarks. All outputs are plain files;
// reruns with the same inputs produce byte-identical artifacts.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nnv/abstraction/abstraction.hpp"
#include "nnv/errors.hpp"
#include "nnv/io/artifacts.hpp"
#include "nnv/io/svg.hpp"
#include "nnv/network/network.hpp"

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Options {
    std::string workspace_path;
    std::string network_path;
    std::string dynamics_path;
    std::string out_dir = "out";
    int lasers = 4;
    double heading = 0.0;
    std::string primary = "";  // comma list, 1-based; empty = all lasers
    bool include_boundary_vertices = true;
    bool strict_closed = false;
    bool refine_intra = false;
    int workers = 1;
    double lp_tol = 1e-7;
    long long max_lp_calls = 0;
    double time_budget_s = 0.0;
};

std::vector<int> parse_primary(const std::string& text, int lasers) {
    std::vector<int> out;
    if (text.empty()) {
        for (int i = 1; i <= lasers; ++i) out.push_back(i);
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stoi(item));
    }
    return out;
}

nnv::geom::LidarSpec lidar_from(const Options& opt) {
    return nnv::geom::LidarSpec(opt.lasers, opt.heading,
                                parse_primary(opt.primary, opt.lasers));
}

nnv::smc::SmcConfig smc_config(const Options& opt) {
    nnv::smc::SmcConfig cfg;
    cfg.lp_tol = opt.lp_tol;
    cfg.max_lp_calls = opt.max_lp_calls;
    cfg.time_budget_s = opt.time_budget_s;
    return cfg;
}

struct PartitionStage {
    nnv::geom::WorkspaceSpec workspace;
    nnv::geom::LidarSpec lidar;
    nnv::geom::PartitionResult partition;
    std::vector<std::optional<nnv::imaging::AffineImagingMap>> maps;
    double elapsed_s = 0.0;
};

PartitionStage run_partition(const Options& opt) {
    auto t0 = Clock::now();
    auto workspace = nnv::geom::load_workspace(opt.workspace_path);
    auto lidar = lidar_from(opt);
    nnv::geom::PartitionOptions popts;
    popts.include_boundary_vertices = opt.include_boundary_vertices;
    auto partition = nnv::geom::wksp_partition(workspace, lidar, popts);
    auto maps = nnv::imaging::build_imaging_maps(partition, lidar, workspace);
    PartitionStage stage{std::move(workspace), lidar, std::move(partition),
                         std::move(maps), 0.0};
    stage.elapsed_s = seconds_since(t0);
    return stage;
}

struct PreprocessStage {
    std::vector<std::vector<nnv::smc::Conflict>> conflicts;
    std::vector<int> feasible_counts;
    double elapsed_s = 0.0;
};

PreprocessStage run_preprocess(const PartitionStage& stage,
                               const nnv::nn::NeuralNetwork& net,
                               const nnv::abstraction::StateBounds& bounds,
                               const Options& opt) {
    auto t0 = Clock::now();
    size_t regions = stage.partition.fine_regions.size();
    PreprocessStage out;
    out.conflicts.resize(regions);
    out.feasible_counts.assign(regions, 0);

    std::vector<nnv::abstraction::Interval> hull_box;
    for (int i = 0; i < bounds.aux_dims(); ++i) {
        hull_box.push_back({bounds.lower[i], bounds.upper[i]});
    }
    auto cfg = smc_config(opt);
    for (size_t i = 0; i < regions; ++i) {
        if (!stage.maps[i]) continue;
        nnv::abstraction::StateCell cell{stage.partition.fine_regions[i],
                                         hull_box};
        auto result =
            nnv::smc::preprocess_region(cell, *stage.maps[i], net, cfg);
        out.conflicts[i] = std::move(result.conflicts);
        out.feasible_counts[i] =
            static_cast<int>(result.feasible_phases.size());
    }
    out.elapsed_s = seconds_since(t0);
    return out;
}

void write_partition_outputs(const PartitionStage& stage, const fs::path& dir) {
    nnv::io::write_text_file(
        (dir / "partition.json").string(),
        nnv::io::partition_to_json(stage.partition, stage.maps));
    nnv::io::write_text_file(
        (dir / "partition.svg").string(),
        nnv::io::partition_to_svg(stage.workspace, stage.partition));
}

int cmd_partition(const Options& opt) {
    fs::create_directories(opt.out_dir);
    PartitionStage stage = run_partition(opt);
    write_partition_outputs(stage, opt.out_dir);
    std::cout << "regions: " << stage.partition.fine_regions.size() << " ("
              << stage.partition.free_region_count() << " free), aggregates: "
              << stage.partition.aggregate_regions.size() << ", time: "
              << stage.elapsed_s << " s\n";
    return 0;
}

int cmd_preprocess(const Options& opt) {
    fs::create_directories(opt.out_dir);
    PartitionStage stage = run_partition(opt);
    auto net = nnv::nn::load_network(opt.network_path);
    auto dyn_spec = nnv::io::load_dynamics(opt.dynamics_path);
    PreprocessStage pre = run_preprocess(stage, net, dyn_spec.bounds, opt);

    for (size_t i = 0; i < pre.conflicts.size(); ++i) {
        if (!stage.maps[i]) continue;
        nnv::io::write_text_file(
            (fs::path(opt.out_dir) /
             ("conflicts_region_" + std::to_string(i) + ".json"))
                .string(),
            nnv::io::conflicts_to_json(pre.conflicts[i]));
    }
    long long total_conflicts = 0;
    for (const auto& c : pre.conflicts) total_conflicts += c.size();
    std::cout << "regions preprocessed: "
              << stage.partition.free_region_count()
              << ", conflicts: " << total_conflicts
              << ", time: " << pre.elapsed_s << " s\n";
    return 0;
}

struct VerifyArtifacts {
    nnv::io::ReportData report;
    int exit_code = 0;
};

VerifyArtifacts run_verify(const Options& opt) {
    fs::create_directories(opt.out_dir);
    fs::path dir(opt.out_dir);

    PartitionStage stage = run_partition(opt);
    write_partition_outputs(stage, dir);

    auto net = nnv::nn::load_network(opt.network_path);
    nnv::nn::validate(net);
    auto dyn_spec = nnv::io::load_dynamics(opt.dynamics_path);

    PreprocessStage pre = run_preprocess(stage, net, dyn_spec.bounds, opt);
    for (size_t i = 0; i < pre.conflicts.size(); ++i) {
        if (!stage.maps[i]) continue;
        nnv::io::write_text_file(
            (dir / ("conflicts_region_" + std::to_string(i) + ".json"))
                .string(),
            nnv::io::conflicts_to_json(pre.conflicts[i]));
    }

    auto t_abs = Clock::now();
    auto space =
        nnv::abstraction::build_states(stage.partition, dyn_spec.bounds);
    auto unsafe0 = nnv::abstraction::initial_unsafe(
        stage.partition, stage.workspace, space, opt.strict_closed);
    nnv::abstraction::TransitionOptions topts;
    topts.refine_intra = opt.refine_intra;
    topts.workers = opt.workers;
    topts.smc = smc_config(opt);
    auto ts = nnv::abstraction::compute_transitions(
        space, stage.partition, dyn_spec.bounds, dyn_spec.dynamics, net,
        stage.workspace, stage.maps, pre.conflicts, unsafe0, topts);
    double transitions_s = seconds_since(t_abs);

    auto t_fp = Clock::now();
    auto fp = nnv::abstraction::unsafe_fixed_point(ts);
    double fixed_point_s = seconds_since(t_fp);

    auto cells = nnv::abstraction::safe_set(fp, space, stage.partition,
                                            dyn_spec.bounds);

    nnv::io::write_text_file((dir / "abstraction.json").string(),
                             nnv::io::abstraction_to_json(ts, fp));
    nnv::io::write_text_file((dir / "safe_set.json").string(),
                             nnv::io::safe_set_to_json(cells));

    std::vector<int> safe_regions;
    for (int s : fp.safe) safe_regions.push_back(space.states[s].region);
    nnv::io::write_text_file(
        (dir / "safe_set.svg").string(),
        nnv::io::partition_to_svg(stage.workspace, stage.partition,
                                  safe_regions));

    VerifyArtifacts out;
    out.report.fine_regions =
        static_cast<int>(stage.partition.fine_regions.size());
    out.report.free_regions = stage.partition.free_region_count();
    out.report.aggregate_regions =
        static_cast<int>(stage.partition.aggregate_regions.size());
    out.report.states = space.state_count();
    long long edge_count = 0;
    for (const auto& row : ts.transitions) edge_count += row.size();
    out.report.transitions = edge_count;
    out.report.resource_limited_pairs = ts.resource_limited_pairs;
    for (const auto& c : pre.conflicts) {
        out.report.conflicts_per_region.push_back(static_cast<int>(c.size()));
    }
    out.report.feasible_phases_per_region = pre.feasible_counts;
    out.report.unsafe0 = static_cast<int>(unsafe0.size());
    out.report.safe_states = static_cast<int>(fp.safe.size());
    out.report.unsafe_states = static_cast<int>(fp.unsafe.size());
    out.report.times = {stage.elapsed_s, pre.elapsed_s, transitions_s,
                        fixed_point_s};

    nnv::io::write_text_file((dir / "report.json").string(),
                             nnv::io::report_to_json(out.report));
    nnv::io::write_text_file((dir / "report.txt").string(),
                             nnv::io::report_to_text(out.report));

    out.exit_code = ts.resource_limited_pairs > 0 ? 1 : 0;
    return out;
}

int cmd_verify(const Options& opt) {
    VerifyArtifacts result = run_verify(opt);
    std::cout << nnv::io::report_to_text(result.report);
    if (result.exit_code != 0) {
        std::cout << "verification incomplete: " <<
            result.report.resource_limited_pairs
                  << " pairs kept conservatively after hitting budgets\n";
    }
    return result.exit_code;
}

int cmd_simulate(const Options& opt, const std::string& x0_text, int steps) {
    fs::create_directories(opt.out_dir);
    auto workspace = nnv::geom::load_workspace(opt.workspace_path);
    auto net = nnv::nn::load_network(opt.network_path);
    auto dyn_spec = nnv::io::load_dynamics(opt.dynamics_path);
    auto lidar = lidar_from(opt);

    std::vector<double> x0;
    std::stringstream ss(x0_text);
    std::string item;
    while (std::getline(ss, item, ',')) x0.push_back(std::stod(item));
    if (static_cast<int>(x0.size()) != dyn_spec.dynamics.state_dim()) {
        throw nnv::InputError("--x0 must have one value per state dimension");
    }

    auto sim = nnv::abstraction::simulate(dyn_spec.dynamics, net, workspace,
                                          lidar, dyn_spec.bounds, x0, steps);

    std::ostringstream traj;
    traj << "{\n  \"format_version\": 1,\n  \"safe\": "
         << (sim.safe ? "true" : "false")
         << ",\n  \"out_of_bounds\": " << (sim.out_of_bounds ? "true" : "false")
         << ",\n  \"violation_step\": " << sim.violation_step
         << ",\n  \"trajectory\": [\n";
    for (size_t i = 0; i < sim.trajectory.size(); ++i) {
        traj << "    [";
        for (size_t j = 0; j < sim.trajectory[i].size(); ++j) {
            if (j) traj << ", ";
            traj << sim.trajectory[i][j];
        }
        traj << "]" << (i + 1 < sim.trajectory.size() ? "," : "") << "\n";
    }
    traj << "  ]\n}\n";
    nnv::io::write_text_file(
        (fs::path(opt.out_dir) / "trajectory.json").string(), traj.str());

    std::cout << (sim.safe ? "safe" : "unsafe") << " after "
              << sim.trajectory.size() - 1 << " steps\n";
    return 0;
}

// Deterministic benchmark families. Workspaces: a fixed square boundary with
// two regular-polygon obstacles whose vertex counts sum to the requested
// total. Networks: seeded uniform weights.
nnv::geom::WorkspaceSpec bench_workspace(int obstacle_vertices) {
    using nnv::geom::ConvexPolygon;
    using nnv::geom::Point2;
    int k1 = obstacle_vertices / 2;
    int k2 = obstacle_vertices - k1;
    auto regular = [](int k, Point2 c, double radius, double phase) {
        std::vector<Point2> v;
        for (int i = 0; i < k; ++i) {
            double a = phase + i * 2.0 * std::numbers::pi / k;
            v.push_back({c.x + radius * std::cos(a), c.y + radius * std::sin(a)});
        }
        return ConvexPolygon(v);
    };
    ConvexPolygon boundary({{0, 0}, {20, 0}, {20, 20}, {0, 20}});
    return nnv::geom::WorkspaceSpec(
        boundary, {regular(k1, {6.0, 7.0}, 2.0, 0.3),
                   regular(k2, {13.5, 12.5}, 2.0, 1.1)});
}

int cmd_bench(const Options& opt, const std::string& mode,
              const std::string& vertices_list, const std::string& lasers_list,
              const std::string& neurons_list, int hidden_layers) {
    fs::create_directories(opt.out_dir);
    auto parse_list = [](const std::string& text) {
        std::vector<int> out;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) out.push_back(std::stoi(item));
        }
        return out;
    };

    if (mode == "partition") {
        std::ostringstream csv;
        csv << "format_version,vertices,lasers,regions,time_s\n";
        for (int v : parse_list(vertices_list)) {
            for (int n : parse_list(lasers_list)) {
                auto workspace = bench_workspace(v);
                std::vector<int> primary;
                for (int i = 1; i <= n; ++i) primary.push_back(i);
                nnv::geom::LidarSpec lidar(n, 0.0, primary);
                auto t0 = Clock::now();
                auto part = nnv::geom::wksp_partition(workspace, lidar);
                auto maps =
                    nnv::imaging::build_imaging_maps(part, lidar, workspace);
                double dt = seconds_since(t0);
                csv << "1," << v << "," << n << ","
                    << part.fine_regions.size() << "," << dt << "\n";
                std::cout << "vertices " << v << " lasers " << n << ": "
                          << part.fine_regions.size() << " regions, " << dt
                          << " s\n";
            }
        }
        nnv::io::write_text_file(
            (fs::path(opt.out_dir) / "bench_partition.csv").string(),
            csv.str());
        return 0;
    }

    if (mode == "preprocess") {
        auto workspace = bench_workspace(8);
        nnv::geom::LidarSpec lidar(8, 0.0, {1, 2, 3, 4, 5, 6, 7, 8});
        auto part = nnv::geom::wksp_partition(workspace, lidar);
        auto maps = nnv::imaging::build_imaging_maps(part, lidar, workspace);
        // Deterministic region choice: the largest free region.
        int pick = -1;
        double best = -1.0;
        for (size_t i = 0; i < part.fine_regions.size(); ++i) {
            if (!maps[i]) continue;
            if (part.fine_regions[i].area() > best) {
                best = part.fine_regions[i].area();
                pick = static_cast<int>(i);
            }
        }

        std::ostringstream csv;
        csv << "format_version,hidden_layers,total_neurons,feasible_phases,"
               "conflicts,time_s\n";
        for (int neurons : parse_list(neurons_list)) {
            int per_layer = neurons / std::max(1, hidden_layers);
            std::vector<int> widths(hidden_layers, per_layer);
            // Seeded network; small weights keep phase counts moderate.
            std::mt19937_64 rng(9000 + neurons);
            nnv::nn::NeuralNetwork net;
            net.input_dim = 16;
            net.output_dim = 2;
            int prev = net.input_dim;
            auto wgen = [&rng]() {
                return ((rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0) * 0.35;
            };
            for (int wdt : widths) {
                nnv::nn::Layer layer;
                layer.W = nnv::nn::Matrix(wdt, prev);
                for (double& x : layer.W.data) x = wgen();
                for (int i = 0; i < wdt; ++i) layer.w.push_back(wgen());
                net.layers.push_back(std::move(layer));
                prev = wdt;
            }
            nnv::nn::Layer outl;
            outl.W = nnv::nn::Matrix(2, prev);
            for (double& x : outl.W.data) x = wgen();
            outl.w = {0.0, 0.0};
            net.layers.push_back(std::move(outl));

            nnv::abstraction::StateCell cell{part.fine_regions[pick], {}};
            auto t0 = Clock::now();
            auto result =
                nnv::smc::preprocess_region(cell, *maps[pick], net,
                                            smc_config(opt));
            double dt = seconds_since(t0);
            csv << "1," << hidden_layers << "," << neurons << ","
                << result.feasible_phases.size() << ","
                << result.conflicts.size() << "," << dt << "\n";
            std::cout << "neurons " << neurons << ": "
                      << result.feasible_phases.size() << " phases, "
                      << result.conflicts.size() << " conflicts, " << dt
                      << " s\n";
        }
        nnv::io::write_text_file(
            (fs::path(opt.out_dir) / "bench_preprocess.csv").string(),
            csv.str());
        return 0;
    }

    throw nnv::InputError("unknown bench mode: " + mode);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Safe-set verification for LiDAR-driven ReLU controllers"};
    app.require_subcommand(1);

    Options opt;
    std::string x0_text = "0,0";
    int steps = 100;
    std::string bench_mode = "partition";
    std::string bench_vertices = "8,10,12";
    std::string bench_lasers = "8,38";
    std::string bench_neurons = "16,32";
    int bench_hidden = 1;

    auto add_common = [&](CLI::App* cmd, bool needs_net) {
        cmd->add_option("--workspace", opt.workspace_path,
                        "workspace JSON path")
            ->required();
        cmd->add_option("--lasers", opt.lasers, "number of LiDAR lasers");
        cmd->add_option("--heading", opt.heading, "LiDAR heading [rad]");
        cmd->add_option("--primary", opt.primary,
                        "comma-separated primary laser indices (default all)");
        cmd->add_flag("!--no-boundary-vertices",
                      opt.include_boundary_vertices,
                      "skip boundary vertices when casting partition rays");
        cmd->add_option("--out", opt.out_dir, "output directory");
        cmd->add_option("--workers", opt.workers, "parallel worker count");
        cmd->add_option("--lp-tol", opt.lp_tol, "LP feasibility tolerance")
            ->envname("NNV_LP_TOL");
        cmd->add_option("--max-lp-calls", opt.max_lp_calls,
                        "LP call budget per query (0 = unlimited)")
            ->envname("NNV_MAX_LP_CALLS");
        cmd->add_option("--time-budget-s", opt.time_budget_s,
                        "wall-clock budget per query in seconds (0 = unlimited)")
            ->envname("NNV_TIME_BUDGET_S");
        if (needs_net) {
            cmd->add_option("--network", opt.network_path, "network JSON path")
                ->required();
            cmd->add_option("--dynamics", opt.dynamics_path,
                            "dynamics JSON path")
                ->required();
        }
    };

    CLI::App* partition = app.add_subcommand("partition",
                                             "compute the workspace partition");
    add_common(partition, false);

    CLI::App* preprocess =
        app.add_subcommand("preprocess", "enumerate feasible ReLU phases");
    add_common(preprocess, true);

    CLI::App* abstract_cmd = app.add_subcommand(
        "abstract", "build the finite-state abstraction");
    add_common(abstract_cmd, true);
    abstract_cmd->add_flag("--strict-closed", opt.strict_closed,
                           "mark every obstacle-touching region unsafe");
    abstract_cmd->add_flag("--refine-intra", opt.refine_intra,
                           "also check intra-aggregate pairs");

    CLI::App* verify =
        app.add_subcommand("verify", "full pipeline: compute the safe set");
    add_common(verify, true);
    verify->add_flag("--strict-closed", opt.strict_closed,
                     "mark every obstacle-touching region unsafe");
    verify->add_flag("--refine-intra", opt.refine_intra,
                     "also check intra-aggregate pairs");

    CLI::App* simulate =
        app.add_subcommand("simulate", "closed-loop trajectory rollout");
    add_common(simulate, true);
    simulate->add_option("--x0", x0_text, "initial state, comma separated");
    simulate->add_option("--steps", steps, "number of steps");

    CLI::App* bench = app.add_subcommand("bench", "scaling benchmarks");
    bench->add_option("--mode", bench_mode, "partition | preprocess");
    bench->add_option("--vertices", bench_vertices,
                      "obstacle vertex totals (partition mode)");
    bench->add_option("--bench-lasers", bench_lasers,
                      "laser counts (partition mode)");
    bench->add_option("--neurons", bench_neurons,
                      "total neuron counts (preprocess mode)");
    bench->add_option("--hidden-layers", bench_hidden,
                      "hidden layer count (preprocess mode)");
    bench->add_option("--out", opt.out_dir, "output directory");
    bench->add_option("--lp-tol", opt.lp_tol, "LP feasibility tolerance")
        ->envname("NNV_LP_TOL");

    try {
        app.parse(argc, argv);
        if (partition->parsed()) return cmd_partition(opt);
        if (preprocess->parsed()) return cmd_preprocess(opt);
        if (abstract_cmd->parsed() || verify->parsed()) return cmd_verify(opt);
        if (simulate->parsed()) return cmd_simulate(opt, x0_text, steps);
        if (bench->parsed()) {
            return cmd_bench(opt, bench_mode, bench_vertices, bench_lasers,
                             bench_neurons, bench_hidden);
        }
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const nnv::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
