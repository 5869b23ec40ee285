#pragma once

// Seeded multi-trial benchmark runner, its JSON spec loader and the aggregated report.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rmpd/baselines.hpp"
#include "rmpd/planner.hpp"
#include "rmpd/postprocess.hpp"
#include "rmpd/rmpd.hpp"
#include "rmpd/sdf.hpp"
#include "rmpd/world.hpp"
#include "rmpd/world_io.hpp"

namespace rmpd {

/// Registered planner names, in report order.
[[nodiscard]] const std::vector<std::string>& planner_names();
[[nodiscard]] bool is_planner_name(std::string_view name);

struct PlannerSpec {
    std::string name;   // registry name
    std::string label;  // report label, defaults to name
    RmpdConfig rmpd;
    BaselineConfig baseline;
    bool baseline_time_budget_set = false;  // config overrides the spec-level budget

    [[nodiscard]] bool needs_sdf() const noexcept { return name == "crmpd"; }
};

struct Query {
    State start;
    State goal;
};

struct BenchmarkSpec {
    std::string name = "benchmark";
    std::filesystem::path world_path;
    WorldFormat world_format = WorldFormat::automatic;
    std::vector<Query> queries;
    std::vector<PlannerSpec> planners;
    std::size_t trials = 30;
    double time_budget_s = 5.0;
    std::uint64_t base_seed = 1;
    PostprocessParams postprocess;
    double sdf_resolution = 0.0;  // <= 0: world default
    std::filesystem::path output_dir = "bench_out";
    std::size_t threads = 1;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// Parses a spec document. Relative paths resolve against base_dir.
[[nodiscard]] BenchmarkSpec parse_benchmark_spec(std::string_view text, const std::string& file,
                                                 const std::filesystem::path& base_dir);
[[nodiscard]] BenchmarkSpec load_benchmark_spec(const std::filesystem::path& path);

/// Runs one planner query. sdf is required for planners that need it.
PlanResult run_planner(const PlannerSpec& planner, const World& world, const SignedDistanceField* sdf,
                       CollisionCounter& counter, SeededRng& rng, const State& start, const State& goal,
                       double time_budget_s);

struct TrialRecord {
    std::string planner;  // label
    std::size_t planner_index = 0;
    std::size_t query = 0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    PlanStatus status = PlanStatus::budget_exhausted;
    double planning_time_s = 0.0;
    std::uint64_t collision_checks = 0;  // planning phase only
    PlanStats stats;
    PathMetrics raw;
    PathMetrics post;
    std::uint64_t post_collision_checks = 0;
    Path raw_path;
    Path post_path;

    [[nodiscard]] bool success() const noexcept { return status == PlanStatus::success; }
};

struct PlannerSummary {
    std::string planner;
    std::size_t trials = 0;
    std::size_t successes = 0;
    double success_rate = 0.0;  // percent, over all trials
    // Means over successful trials.
    double mean_time_s = 0.0;
    double mean_length = 0.0;
    double mean_q_smt = 0.0;
    double mean_collision_checks = 0.0;
    // Medians over all trials.
    double median_time_s = 0.0;
    double median_collision_checks = 0.0;
    // Mean / best mean across planners with at least one success.
    std::optional<double> norm_time;
    std::optional<double> norm_length;
    std::optional<double> norm_q_smt;
    std::optional<double> norm_collision_checks;
};

struct BenchmarkReport {
    std::string name;
    std::vector<PlannerSummary> planners;
    std::vector<TrialRecord> records;
    double sdf_build_s = 0.0;
};

/// Runs every planner x query x trial. Records are ordered (planner, query, trial) whatever
/// the thread count.
[[nodiscard]] std::vector<TrialRecord> run_trials(const BenchmarkSpec& spec, const World& world,
                                                  const SignedDistanceField* sdf);

[[nodiscard]] std::vector<PlannerSummary> summarize(const BenchmarkSpec& spec,
                                                    const std::vector<TrialRecord>& records);

/// Loads the world, builds the field if needed, runs and aggregates. Does not write files.
[[nodiscard]] BenchmarkReport run_benchmark(const BenchmarkSpec& spec);

/// Same, reusing an already-loaded world.
[[nodiscard]] BenchmarkReport run_benchmark(const BenchmarkSpec& spec, const World& world);

/// trials.csv: deterministic per-trial records (no timing columns).
[[nodiscard]] std::string trials_csv(const std::vector<TrialRecord>& records);
/// timings.csv: wall-clock planning time per trial.
[[nodiscard]] std::string timings_csv(const std::vector<TrialRecord>& records);

enum class ReportFormat { csv, markdown };
enum class ReportTable { normalized, raw };

[[nodiscard]] ReportFormat parse_report_format(std::string_view name);

/// Columns: planner, Time, Length, q_smt, #CC, SR(%). Markdown holds both tables; csv holds
/// the requested one.
[[nodiscard]] std::string emit_report(const BenchmarkReport& report, ReportFormat format,
                                      ReportTable table = ReportTable::normalized);

/// Writes trials.csv, timings.csv, report.csv, report_raw.csv and report.md into dir.
void write_benchmark_outputs(const BenchmarkReport& report, const std::filesystem::path& dir);

}  // namespace rmpd
