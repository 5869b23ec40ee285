#include "rmpd/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <charconv>
#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "rmpd/json_lines.hpp"

namespace rmpd {

const std::vector<std::string>& planner_names() {
    static const std::vector<std::string> names{"rrt", "rrt_connect", "rrt_star", "prm", "rmpd", "crmpd"};
    return names;
}

bool is_planner_name(std::string_view name) {
    const auto& names = planner_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

namespace {

std::string joined_planner_names() {
    std::string out;
    for (const auto& n : planner_names()) out += (out.empty() ? "" : ", ") + n;
    return out;
}

bool is_rmpd_family(const std::string& name) { return name == "rmpd" || name == "crmpd"; }

}  // namespace

void BenchmarkSpec::validate() const {
    if (trials == 0) throw std::invalid_argument("trials must be at least 1");
    if (!(time_budget_s > 0.0)) throw std::invalid_argument("time_budget_s must be positive");
    if (queries.empty()) throw std::invalid_argument("queries must not be empty");
    if (planners.empty()) throw std::invalid_argument("planners must not be empty");
    if (threads == 0) throw std::invalid_argument("threads must be at least 1");
    postprocess.validate();
    std::set<std::string> labels;
    for (const auto& p : planners) {
        if (!is_planner_name(p.name)) {
            throw std::invalid_argument("unknown planner '" + p.name + "' (valid: " + joined_planner_names() + ")");
        }
        if (!labels.insert(p.label).second) throw std::invalid_argument("duplicate planner label '" + p.label + "'");
        if (is_rmpd_family(p.name)) p.rmpd.validate();
        else p.baseline.validate();
    }
    for (const auto& q : queries) {
        if (q.start.dim() != q.goal.dim()) throw std::invalid_argument("query start and goal dimensions differ");
    }
}

BenchmarkSpec parse_benchmark_spec(std::string_view text, const std::string& file,
                                   const std::filesystem::path& base_dir) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(file, JsonLineIndex::line_at_offset(text, e.byte == 0 ? 0 : e.byte - 1), "syntax", e.what());
    }
    const JsonLineIndex index(text);
    auto fail = [&](const std::string& pointer, const std::string& message) {
        return ParseError(file, index.line_of(pointer), pointer.empty() ? "/" : pointer, message);
    };
    if (!doc.is_object()) throw fail("", "expected an object");

    auto check_keys = [&](const json& obj, const std::string& pointer, std::initializer_list<const char*> allowed) {
        for (const auto& [key, _] : obj.items()) {
            if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
                std::string names;
                for (const char* a : allowed) names += (names.empty() ? "" : ", ") + std::string(a);
                throw fail(pointer + "/" + key, "unknown field (expected one of: " + names + ")");
            }
        }
    };
    auto number = [&](const json& v, const std::string& pointer) {
        if (!v.is_number()) throw fail(pointer, "expected a number");
        return v.get<double>();
    };
    auto count = [&](const json& v, const std::string& pointer) {
        if (!v.is_number_integer() || v.get<long long>() < 0) throw fail(pointer, "expected a non-negative integer");
        return static_cast<std::size_t>(v.get<long long>());
    };
    auto string = [&](const json& v, const std::string& pointer) {
        if (!v.is_string()) throw fail(pointer, "expected a string");
        return v.get<std::string>();
    };
    auto state = [&](const json& v, const std::string& pointer) {
        if (!v.is_array() || v.empty()) throw fail(pointer, "expected a non-empty array of numbers");
        std::vector<double> coords;
        for (std::size_t i = 0; i < v.size(); ++i) coords.push_back(number(v[i], pointer + "/" + std::to_string(i)));
        return State(std::move(coords));
    };

    check_keys(doc, "", {"name", "world", "queries", "planners", "trials", "time_budget_s", "base_seed",
                         "postprocess", "sdf_resolution", "output_dir", "threads"});
    BenchmarkSpec spec;
    auto resolve = [&](const std::string& p) {
        std::filesystem::path path(p);
        return path.is_absolute() ? path : base_dir / path;
    };

    if (doc.contains("name")) spec.name = string(doc["name"], "/name");
    if (!doc.contains("world")) throw fail("", "missing field 'world'");
    const json& world = doc["world"];
    if (world.is_string()) {
        spec.world_path = resolve(world.get<std::string>());
    } else if (world.is_object()) {
        check_keys(world, "/world", {"path", "format"});
        if (!world.contains("path")) throw fail("/world", "missing field 'path'");
        spec.world_path = resolve(string(world["path"], "/world/path"));
        if (world.contains("format")) {
            try {
                spec.world_format = parse_world_format(string(world["format"], "/world/format"));
            } catch (const std::invalid_argument& e) {
                throw fail("/world/format", e.what());
            }
        }
    } else {
        throw fail("/world", "expected a path string or an object");
    }

    if (!doc.contains("queries") || !doc["queries"].is_array()) throw fail("/queries", "expected an array");
    for (std::size_t i = 0; i < doc["queries"].size(); ++i) {
        const std::string base = "/queries/" + std::to_string(i);
        const json& q = doc["queries"][i];
        if (!q.is_object() || !q.contains("start") || !q.contains("goal")) {
            throw fail(base, "expected {\"start\": [...], \"goal\": [...]}");
        }
        check_keys(q, base, {"start", "goal"});
        spec.queries.push_back({state(q["start"], base + "/start"), state(q["goal"], base + "/goal")});
    }

    if (!doc.contains("planners") || !doc["planners"].is_array()) throw fail("/planners", "expected an array");
    for (std::size_t i = 0; i < doc["planners"].size(); ++i) {
        const std::string base = "/planners/" + std::to_string(i);
        const json& p = doc["planners"][i];
        PlannerSpec planner;
        const json* config = nullptr;
        if (p.is_string()) {
            planner.name = p.get<std::string>();
        } else if (p.is_object()) {
            check_keys(p, base, {"name", "label", "config"});
            if (!p.contains("name")) throw fail(base, "missing field 'name'");
            planner.name = string(p["name"], base + "/name");
            if (p.contains("label")) planner.label = string(p["label"], base + "/label");
            if (p.contains("config")) config = &p["config"];
        } else {
            throw fail(base, "expected a planner name or object");
        }
        if (!is_planner_name(planner.name)) {
            throw fail(p.is_string() ? base : base + "/name",
                       "unknown planner '" + planner.name + "' (valid: " + joined_planner_names() + ")");
        }
        if (planner.label.empty()) planner.label = planner.name;
        if (config != nullptr) {
            const std::string cbase = base + "/config";
            if (!config->is_object()) throw fail(cbase, "expected an object");
            if (is_rmpd_family(planner.name)) {
                check_keys(*config, cbase, {"n_max", "sigma_fraction", "max_sampler_iters", "lambda", "h", "k",
                                            "epsilon", "max_egd_iters", "midpoint_rule", "seed_rule",
                                            "collision_step"});
                RmpdConfig& c = planner.rmpd;
                for (const auto& [key, v] : config->items()) {
                    const std::string at = cbase + "/" + key;
                    if (key == "n_max") c.n_max = count(v, at);
                    else if (key == "sigma_fraction") c.sigma_fraction = number(v, at);
                    else if (key == "max_sampler_iters") c.max_sampler_iters = count(v, at);
                    else if (key == "lambda") c.lambda = number(v, at);
                    else if (key == "h") c.h = number(v, at);
                    else if (key == "k") c.k = count(v, at);
                    else if (key == "epsilon") c.epsilon = number(v, at);
                    else if (key == "max_egd_iters") c.max_egd_iters = count(v, at);
                    else if (key == "collision_step") c.collision_step = number(v, at);
                    else if (key == "midpoint_rule") {
                        const std::string rule = string(v, at);
                        if (rule == "weighted_average") c.midpoint_rule = MidpointRule::weighted_average;
                        else if (rule == "greedy_min_cost") c.midpoint_rule = MidpointRule::greedy_min_cost;
                        else throw fail(at, "expected weighted_average or greedy_min_cost");
                    } else if (key == "seed_rule") {
                        const std::string rule = string(v, at);
                        if (rule == "naive_midpoint") c.seed_rule = SeedRule::naive_midpoint;
                        else if (rule == "greedy_k_samples") c.seed_rule = SeedRule::greedy_k_samples;
                        else throw fail(at, "expected naive_midpoint or greedy_k_samples");
                    }
                }
                try {
                    c.validate();
                } catch (const std::invalid_argument& e) {
                    throw fail(cbase, e.what());
                }
            } else {
                check_keys(*config, cbase, {"step_size", "goal_bias", "rewire_gamma", "prm_k", "prm_samples",
                                            "max_iterations", "time_budget_s", "collision_step"});
                BaselineConfig& c = planner.baseline;
                for (const auto& [key, v] : config->items()) {
                    const std::string at = cbase + "/" + key;
                    if (key == "step_size") c.step_size = number(v, at);
                    else if (key == "goal_bias") c.goal_bias = number(v, at);
                    else if (key == "rewire_gamma") c.rewire_gamma = number(v, at);
                    else if (key == "prm_k") c.prm_k = count(v, at);
                    else if (key == "prm_samples") c.prm_samples = count(v, at);
                    else if (key == "max_iterations") c.max_iterations = count(v, at);
                    else if (key == "collision_step") c.collision_step = number(v, at);
                    else if (key == "time_budget_s") {
                        c.time_budget_s = number(v, at);
                        planner.baseline_time_budget_set = true;
                    }
                }
                try {
                    c.validate();
                } catch (const std::invalid_argument& e) {
                    throw fail(cbase, e.what());
                }
            }
        }
        spec.planners.push_back(std::move(planner));
    }

    if (doc.contains("trials")) spec.trials = count(doc["trials"], "/trials");
    if (doc.contains("time_budget_s")) spec.time_budget_s = number(doc["time_budget_s"], "/time_budget_s");
    if (doc.contains("base_seed")) {
        const json& s = doc["base_seed"];
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
            throw fail("/base_seed", "expected a non-negative integer");
        }
        spec.base_seed = s.get<std::uint64_t>();
    }
    if (doc.contains("postprocess")) {
        const json& pp = doc["postprocess"];
        if (!pp.is_object()) throw fail("/postprocess", "expected an object");
        check_keys(pp, "/postprocess",
                   {"shortcut_attempts_per_waypoint", "spline_rounds", "smoothness_samples", "collision_step"});
        for (const auto& [key, v] : pp.items()) {
            const std::string at = "/postprocess/" + key;
            if (key == "shortcut_attempts_per_waypoint") spec.postprocess.shortcut_attempts_per_waypoint = count(v, at);
            else if (key == "spline_rounds") spec.postprocess.spline_rounds = count(v, at);
            else if (key == "smoothness_samples") spec.postprocess.smoothness_samples = count(v, at);
            else if (key == "collision_step") spec.postprocess.collision_step = number(v, at);
        }
    }
    if (doc.contains("sdf_resolution")) spec.sdf_resolution = number(doc["sdf_resolution"], "/sdf_resolution");
    if (doc.contains("output_dir")) spec.output_dir = resolve(string(doc["output_dir"], "/output_dir"));
    else spec.output_dir = base_dir / "bench_out" / spec.name;
    if (doc.contains("threads")) spec.threads = count(doc["threads"], "/threads");

    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw fail("", e.what());
    }
    return spec;
}

BenchmarkSpec load_benchmark_spec(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    return parse_benchmark_spec(text, path.string(), path.parent_path());
}

PlanResult run_planner(const PlannerSpec& planner, const World& world, const SignedDistanceField* sdf,
                       CollisionCounter& counter, SeededRng& rng, const State& start, const State& goal,
                       double time_budget_s) {
    const std::string& n = planner.name;
    if (n == "rmpd") return plan_rmpd(world, counter, rng, planner.rmpd, start, goal);
    if (n == "crmpd") {
        if (sdf == nullptr) throw std::invalid_argument("crmpd needs a signed distance field");
        return plan_crmpd(world, counter, rng, *sdf, planner.rmpd, start, goal);
    }
    BaselineConfig config = planner.baseline;
    if (!planner.baseline_time_budget_set) config.time_budget_s = time_budget_s;
    if (n == "rrt") return plan_rrt(world, counter, rng, config, start, goal);
    if (n == "rrt_connect") return plan_rrt_connect(world, counter, rng, config, start, goal);
    if (n == "rrt_star") return plan_rrt_star(world, counter, rng, config, start, goal);
    if (n == "prm") return plan_prm(world, counter, rng, config, start, goal);
    throw std::invalid_argument("unknown planner '" + n + "' (valid: " + joined_planner_names() + ")");
}

namespace {

TrialRecord run_one(const BenchmarkSpec& spec, const World& world, const SignedDistanceField* sdf,
                    std::size_t planner_index, std::size_t query, std::size_t trial) {
    const PlannerSpec& planner = spec.planners[planner_index];
    const Query& q = spec.queries[query];
    TrialRecord record;
    record.planner = planner.label;
    record.planner_index = planner_index;
    record.query = query;
    record.trial = trial;
    record.seed = spec.base_seed + trial;

    SeededRng rng(record.seed);
    CollisionCounter counter;
    const auto t0 = std::chrono::steady_clock::now();
    PlanResult result = run_planner(planner, world, sdf, counter, rng, q.start, q.goal, spec.time_budget_s);
    const auto t1 = std::chrono::steady_clock::now();
    record.planning_time_s = std::chrono::duration<double>(t1 - t0).count();
    record.status = result.status;
    record.collision_checks = counter.count();
    record.stats = result.stats;
    if (result.ok()) {
        const std::size_t m = spec.postprocess.smoothness_samples;
        record.raw_path = result.path;
        record.raw = measure_path(record.raw_path, m);
        PostprocessParams params = spec.postprocess;
        if (!(params.collision_step > 0.0)) {
            params.collision_step = resolve_collision_step(
                world, is_rmpd_family(planner.name) ? planner.rmpd.collision_step : planner.baseline.collision_step);
        }
        CollisionCounter post_counter;
        SeededRng post_rng(mix_seed(record.seed));
        record.post_path = postprocess(world, post_counter, post_rng, record.raw_path, params).path;
        record.post = measure_path(record.post_path, m);
        record.post_collision_checks = post_counter.count();
    }
    return record;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

}  // namespace

std::vector<TrialRecord> run_trials(const BenchmarkSpec& spec, const World& world, const SignedDistanceField* sdf) {
    spec.validate();
    for (const auto& q : spec.queries) {
        if (q.start.dim() != world.dim()) throw std::invalid_argument("query dimension does not match the world");
    }
    for (const auto& p : spec.planners) {
        if (p.needs_sdf() && sdf == nullptr) throw std::invalid_argument(p.label + " needs a signed distance field");
    }
    const std::size_t per_planner = spec.queries.size() * spec.trials;
    const std::size_t total = spec.planners.size() * per_planner;
    std::vector<TrialRecord> records(total);
    auto job = [&](std::size_t i) {
        const std::size_t planner = i / per_planner;
        const std::size_t query = (i % per_planner) / spec.trials;
        const std::size_t trial = i % spec.trials;
        records[i] = run_one(spec, world, sdf, planner, query, trial);
    };

    const std::size_t threads = std::min(spec.threads, total);
    if (threads <= 1) {
        for (std::size_t i = 0; i < total; ++i) job(i);
        return records;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            (void)t;
            while (!failed.load()) {
                const std::size_t i = next.fetch_add(1);
                if (i >= total) return;
                try {
                    job(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return records;
}

std::vector<PlannerSummary> summarize(const BenchmarkSpec& spec, const std::vector<TrialRecord>& records) {
    std::vector<PlannerSummary> out(spec.planners.size());
    std::vector<std::vector<double>> times(out.size()), checks(out.size());
    for (std::size_t p = 0; p < out.size(); ++p) out[p].planner = spec.planners[p].label;
    for (const TrialRecord& r : records) {
        PlannerSummary& s = out.at(r.planner_index);
        ++s.trials;
        times[r.planner_index].push_back(r.planning_time_s);
        checks[r.planner_index].push_back(static_cast<double>(r.collision_checks));
        if (!r.success()) continue;
        ++s.successes;
        s.mean_time_s += r.planning_time_s;
        s.mean_length += r.post.length;
        s.mean_q_smt += r.post.q_smt;
        s.mean_collision_checks += static_cast<double>(r.collision_checks);
    }
    for (std::size_t p = 0; p < out.size(); ++p) {
        PlannerSummary& s = out[p];
        s.success_rate = s.trials == 0 ? 0.0 : 100.0 * static_cast<double>(s.successes) / static_cast<double>(s.trials);
        s.median_time_s = median(times[p]);
        s.median_collision_checks = median(checks[p]);
        if (s.successes == 0) continue;
        const double n = static_cast<double>(s.successes);
        s.mean_time_s /= n;
        s.mean_length /= n;
        s.mean_q_smt /= n;
        s.mean_collision_checks /= n;
    }

    auto normalize = [&](double PlannerSummary::*field, std::optional<double> PlannerSummary::*target) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& s : out) {
            if (s.successes > 0) best = std::min(best, s.*field);
        }
        for (auto& s : out) {
            if (s.successes == 0) continue;
            if (best > 0.0) s.*target = s.*field / best;
            else s.*target = s.*field == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
        }
    };
    normalize(&PlannerSummary::mean_time_s, &PlannerSummary::norm_time);
    normalize(&PlannerSummary::mean_length, &PlannerSummary::norm_length);
    normalize(&PlannerSummary::mean_q_smt, &PlannerSummary::norm_q_smt);
    normalize(&PlannerSummary::mean_collision_checks, &PlannerSummary::norm_collision_checks);
    return out;
}

BenchmarkReport run_benchmark(const BenchmarkSpec& spec, const World& world) {
    BenchmarkReport report;
    report.name = spec.name;
    std::optional<SignedDistanceField> sdf;
    if (std::any_of(spec.planners.begin(), spec.planners.end(), [](const auto& p) { return p.needs_sdf(); })) {
        const auto t0 = std::chrono::steady_clock::now();
        const double res = spec.sdf_resolution > 0.0 ? spec.sdf_resolution : world.default_sdf_resolution();
        sdf.emplace(build_sdf(world, res));
        report.sdf_build_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    report.records = run_trials(spec, world, sdf ? &*sdf : nullptr);
    report.planners = summarize(spec, report.records);
    return report;
}

BenchmarkReport run_benchmark(const BenchmarkSpec& spec) {
    const auto world = load_world(spec.world_path, spec.world_format);
    return run_benchmark(spec, *world);
}

std::string trials_csv(const std::vector<TrialRecord>& records) {
    std::string out =
        "planner,query,trial,seed,status,success,collision_checks,segment_checks,sampler_calls,iterations,"
        "raw_length,raw_q_smt,raw_waypoints,post_length,post_q_smt,post_waypoints,post_collision_checks\n";
    for (const TrialRecord& r : records) {
        out += r.planner + "," + std::to_string(r.query) + "," + std::to_string(r.trial) + "," +
               std::to_string(r.seed) + "," + std::string(status_name(r.status)) + "," + (r.success() ? "1" : "0") +
               "," + std::to_string(r.collision_checks) + "," + std::to_string(r.stats.segment_checks) + "," +
               std::to_string(r.stats.sampler_calls) + "," + std::to_string(r.stats.iterations) + "," +
               format_double(r.raw.length) + "," + format_double(r.raw.q_smt) + "," +
               std::to_string(r.raw.waypoint_count) + "," + format_double(r.post.length) + "," +
               format_double(r.post.q_smt) + "," + std::to_string(r.post.waypoint_count) + "," +
               std::to_string(r.post_collision_checks) + "\n";
    }
    return out;
}

std::string timings_csv(const std::vector<TrialRecord>& records) {
    std::string out = "planner,query,trial,seed,planning_time_s\n";
    for (const TrialRecord& r : records) {
        out += r.planner + "," + std::to_string(r.query) + "," + std::to_string(r.trial) + "," +
               std::to_string(r.seed) + "," + format_double(r.planning_time_s) + "\n";
    }
    return out;
}

void write_benchmark_outputs(const BenchmarkReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto write = [&](const char* name, const std::string& text) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
        out << text;
    };
    write("trials.csv", trials_csv(report.records));
    write("timings.csv", timings_csv(report.records));
    write("report.csv", emit_report(report, ReportFormat::csv, ReportTable::normalized));
    write("report_raw.csv", emit_report(report, ReportFormat::csv, ReportTable::raw));
    write("report.md", emit_report(report, ReportFormat::markdown));
}

}  // namespace rmpd
