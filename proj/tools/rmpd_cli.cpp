// Command-line front end: plan, bench, render, sdf.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rmpd/bench.hpp"
#include "rmpd/render.hpp"
#include "rmpd/simd/kernels.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::string format;
};

rmpd::State parse_state(const std::string& text) {
    std::vector<double> coords;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument("bad coordinate '" + item + "'");
        coords.push_back(v);
    }
    if (coords.empty()) throw std::invalid_argument("empty state");
    return rmpd::State(std::move(coords));
}

std::string state_text(const rmpd::State& s) {
    std::string out;
    char buf[32];
    for (std::size_t i = 0; i < s.dim(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", s[i]);
        out += (i ? "," : "") + std::string(buf);
    }
    return out;
}

json path_json(const rmpd::Path& path) {
    json arr = json::array();
    for (const auto& p : path.waypoints) arr.push_back(std::vector<double>(p.coords().begin(), p.coords().end()));
    return arr;
}

// One waypoint per line, comma separated.
rmpd::Path read_path_file(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open path file " + file.string());
    rmpd::Path path;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        path.waypoints.push_back(parse_state(line));
    }
    return path;
}

void write_file(const fs::path& file, const std::string& text) {
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << text;
}

fs::path output_path(const Globals& g, const std::string& explicit_path, const std::string& fallback) {
    if (!explicit_path.empty()) return explicit_path;
    return fs::path(g.out_dir.empty() ? "." : g.out_dir) / fallback;
}

rmpd::SignedDistanceField field_for(const rmpd::World& world, double resolution) {
    return rmpd::build_sdf(world, resolution > 0.0 ? resolution : world.default_sdf_resolution());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Recursive mid-point displacement planners and benchmark harness"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    Globals g;
    app.add_option("--seed", g.seed, "RNG seed (bench: overrides base_seed)");
    app.add_option("--out-dir", g.out_dir, "Directory for generated files");
    app.add_option("--format", g.format, "Output format: text|json for plan, markdown|csv for bench, csv|json for sdf");

    // plan
    auto* plan = app.add_subcommand("plan", "Plan a single query and print the path and metrics");
    std::string plan_world, plan_world_format = "auto", planner = "crmpd", start_text, goal_text, plan_svg,
                                plan_path_out, plan_spec;
    bool no_post = false;
    double plan_sdf_res = 0.0, plan_budget = 5.0;
    plan->add_option("--world", plan_world, "World file (.pgm, .txt, .json)")->required();
    plan->add_option("--world-format", plan_world_format, "auto|pgm|text|json");
    plan->add_option("--planner", planner, "rrt|rrt_connect|rrt_star|prm|rmpd|crmpd");
    plan->add_option("--start", start_text, "Start state, comma separated")->required();
    plan->add_option("--goal", goal_text, "Goal state, comma separated")->required();
    plan->add_option("--sdf-resolution", plan_sdf_res, "Field cell size (crmpd)");
    plan->add_option("--time-budget", plan_budget, "Seconds (baseline planners)");
    plan->add_option("--planner-config", plan_spec, "Benchmark spec whose first matching planner config is used");
    plan->add_flag("--no-postprocess", no_post, "Skip shortcutting and smoothing");
    plan->add_option("--svg", plan_svg, "Also render the result to this SVG file (2-D only)");
    plan->add_option("--path-out", plan_path_out, "Write the final path, one waypoint per line");

    // bench
    auto* bench = app.add_subcommand("bench", "Run a benchmark spec");
    std::string bench_spec;
    std::size_t bench_threads = 0, bench_trials = 0;
    bench->add_option("spec", bench_spec, "Benchmark spec (JSON)")->required();
    bench->add_option("--threads", bench_threads, "Worker threads (0 keeps the spec value)");
    bench->add_option("--trials", bench_trials, "Override the trial count");

    // render
    auto* render = app.add_subcommand("render", "Render a 2-D world, optional field and paths to SVG");
    std::string render_world, render_world_format = "auto", render_out;
    std::vector<std::string> render_paths;
    bool render_sdf = false;
    double render_res = 0.0;
    render->add_option("--world", render_world, "World file")->required();
    render->add_option("--world-format", render_world_format, "auto|pgm|text|json");
    render->add_option("--path", render_paths, "Path file(s), one waypoint per line; label=file also accepted");
    render->add_flag("--sdf", render_sdf, "Underlay the signed distance field");
    render->add_option("--sdf-resolution", render_res, "Field cell size");
    render->add_option("-o,--output", render_out, "SVG file (default <out-dir>/render.svg)");

    // sdf
    auto* sdf_cmd = app.add_subcommand("sdf", "Build a signed distance field and dump it");
    std::string sdf_world, sdf_world_format = "auto", sdf_out, sdf_method = "auto";
    double sdf_res = 0.0;
    sdf_cmd->add_option("--world", sdf_world, "World file")->required();
    sdf_cmd->add_option("--world-format", sdf_world_format, "auto|pgm|text|json");
    sdf_cmd->add_option("--resolution", sdf_res, "Cell size (default: world default)");
    sdf_cmd->add_option("--method", sdf_method, "auto|exhaustive|transform");
    sdf_cmd->add_option("-o,--output", sdf_out, "Output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*plan) {
            const auto world = rmpd::load_world(plan_world, rmpd::parse_world_format(plan_world_format));
            rmpd::PlannerSpec ps;
            ps.name = planner;
            ps.label = planner;
            rmpd::PostprocessParams post;
            if (!plan_spec.empty()) {
                const rmpd::BenchmarkSpec spec = rmpd::load_benchmark_spec(plan_spec);
                for (const auto& candidate : spec.planners) {
                    if (candidate.name == planner) {
                        ps = candidate;
                        break;
                    }
                }
                post = spec.postprocess;
            }
            if (!rmpd::is_planner_name(ps.name)) {
                std::string names;
                for (const auto& n : rmpd::planner_names()) names += " " + n;
                std::cerr << "unknown planner '" << ps.name << "'; valid:" << names << "\n";
                return 2;
            }
            const rmpd::State start = parse_state(start_text);
            const rmpd::State goal = parse_state(goal_text);
            std::optional<rmpd::SignedDistanceField> field;
            if (ps.needs_sdf()) field.emplace(field_for(*world, plan_sdf_res));
            const std::uint64_t seed = g.seed.value_or(1);
            rmpd::SeededRng rng(seed);
            rmpd::CollisionCounter counter;
            const auto t0 = std::chrono::steady_clock::now();
            const rmpd::PlanResult result =
                rmpd::run_planner(ps, *world, field ? &*field : nullptr, counter, rng, start, goal, plan_budget);
            const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

            rmpd::Path final_path = result.path;
            std::uint64_t post_checks = 0;
            if (result.ok() && !no_post) {
                rmpd::CollisionCounter post_counter;
                rmpd::SeededRng post_rng(rmpd::mix_seed(seed));
                final_path = rmpd::postprocess(*world, post_counter, post_rng, result.path, post).path;
                post_checks = post_counter.count();
            }
            const std::size_t m = post.smoothness_samples;
            if (g.format == "json") {
                json out{{"planner", ps.name},
                         {"status", std::string(rmpd::status_name(result.status))},
                         {"seed", seed},
                         {"planning_time_s", elapsed},
                         {"collision_checks", counter.count()},
                         {"segment_checks", result.stats.segment_checks},
                         {"sampler_calls", result.stats.sampler_calls}};
                if (result.ok()) {
                    out["raw_path"] = path_json(result.path);
                    out["path"] = path_json(final_path);
                    out["length"] = rmpd::path_length(final_path);
                    out["q_smt"] = rmpd::smoothness_q(final_path, m);
                    out["raw_length"] = rmpd::path_length(result.path);
                    out["post_collision_checks"] = post_checks;
                }
                std::cout << out.dump(2) << "\n";
            } else {
                std::cout << "planner: " << ps.name << "\nstatus: " << rmpd::status_name(result.status)
                          << "\nseed: " << seed << "\nplanning_time_s: " << elapsed
                          << "\ncollision_checks: " << counter.count()
                          << "\nsegment_checks: " << result.stats.segment_checks
                          << "\nsampler_calls: " << result.stats.sampler_calls << "\n";
                if (result.ok()) {
                    std::cout << "raw_length: " << rmpd::path_length(result.path)
                              << "\nlength: " << rmpd::path_length(final_path)
                              << "\nq_smt: " << rmpd::smoothness_q(final_path, m)
                              << "\nwaypoints: " << final_path.size() << "\n";
                    for (const auto& p : final_path.waypoints) std::cout << "  " << state_text(p) << "\n";
                }
            }
            if (result.ok() && !plan_path_out.empty()) {
                std::string text;
                for (const auto& p : final_path.waypoints) text += state_text(p) + "\n";
                write_file(output_path(g, plan_path_out, "path.csv"), text);
            }
            if (!plan_svg.empty()) {
                std::vector<rmpd::LabeledPath> paths;
                if (result.ok()) {
                    paths.emplace_back(ps.name + " raw", result.path);
                    if (!no_post) paths.emplace_back(ps.name, final_path);
                }
                write_file(output_path(g, plan_svg, "plan.svg"),
                           rmpd::render_svg(*world, field ? &*field : nullptr, paths));
            }
            return result.ok() ? 0 : 1;
        }

        if (*bench) {
            rmpd::BenchmarkSpec spec = rmpd::load_benchmark_spec(bench_spec);
            if (g.seed) spec.base_seed = *g.seed;
            if (!g.out_dir.empty()) spec.output_dir = g.out_dir;
            if (bench_threads > 0) spec.threads = bench_threads;
            if (bench_trials > 0) spec.trials = bench_trials;
            const rmpd::ReportFormat format =
                rmpd::parse_report_format(g.format.empty() ? "markdown" : g.format);
            std::cerr << "kernels: " << rmpd::simd::isa_name(rmpd::simd::active_isa()) << "\n";
            const rmpd::BenchmarkReport report = rmpd::run_benchmark(spec);
            rmpd::write_benchmark_outputs(report, spec.output_dir);
            std::cout << rmpd::emit_report(report, format);
            std::cerr << "wrote " << spec.output_dir.string() << "\n";
            return 0;
        }

        if (*render) {
            const auto world = rmpd::load_world(render_world, rmpd::parse_world_format(render_world_format));
            std::optional<rmpd::SignedDistanceField> field;
            if (render_sdf) field.emplace(field_for(*world, render_res));
            std::vector<rmpd::LabeledPath> paths;
            for (const std::string& item : render_paths) {
                const auto eq = item.find('=');
                const std::string label = eq == std::string::npos ? fs::path(item).stem().string() : item.substr(0, eq);
                const std::string file = eq == std::string::npos ? item : item.substr(eq + 1);
                paths.emplace_back(label, read_path_file(file));
            }
            const fs::path out = output_path(g, render_out, "render.svg");
            write_file(out, rmpd::render_svg(*world, field ? &*field : nullptr, paths));
            std::cerr << "wrote " << out.string() << "\n";
            return 0;
        }

        if (*sdf_cmd) {
            const auto world = rmpd::load_world(sdf_world, rmpd::parse_world_format(sdf_world_format));
            rmpd::SdfMethod method = rmpd::SdfMethod::automatic;
            if (sdf_method == "exhaustive") method = rmpd::SdfMethod::exhaustive;
            else if (sdf_method == "transform") method = rmpd::SdfMethod::distance_transform;
            else if (sdf_method != "auto") throw std::invalid_argument("unknown method '" + sdf_method + "'");
            const double res = sdf_res > 0.0 ? sdf_res : world->default_sdf_resolution();
            const rmpd::SignedDistanceField field = rmpd::build_sdf(*world, res, method);
            std::string text;
            if (g.format == "json") {
                json out{{"origin", std::vector<double>(field.origin().coords().begin(), field.origin().coords().end())},
                         {"resolution", field.resolution()},
                         {"shape", std::vector<std::size_t>(field.shape().begin(), field.shape().end())},
                         {"values", std::vector<double>(field.values().begin(), field.values().end())}};
                text = out.dump() + "\n";
            } else {
                for (std::size_t d = 0; d < field.dim(); ++d) text += "i" + std::to_string(d) + ",";
                text += "value\n";
                char buf[32];
                for (std::size_t i = 0; i < field.cell_count(); ++i) {
                    for (std::size_t c : field.cell_of_flat(i)) text += std::to_string(c) + ",";
                    std::snprintf(buf, sizeof buf, "%.17g", field.values()[i]);
                    text += std::string(buf) + "\n";
                }
            }
            if (sdf_out.empty() && g.out_dir.empty()) std::cout << text;
            else write_file(output_path(g, sdf_out, g.format == "json" ? "sdf.json" : "sdf.csv"), text);
            return 0;
        }
    } catch (const rmpd::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
