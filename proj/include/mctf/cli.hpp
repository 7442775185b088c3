#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mctf/metrics.hpp"
#include "mctf/solver.hpp"

namespace mctf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDivergence = 3;

/// Positive integer; sets SolverConfig::threads when the config does not.
inline constexpr const char* kThreadsEnv = "MCTF_NUM_THREADS";

using json = nlohmann::json;

/// "a,b,c" with three positive integers.
Shape parse_triple(const std::string& text, const char* what);

/// Flat config object. Keys mirror SolverConfig fields; per-mode fields accept
/// a number (applied to all modes) or a 3-element array. "C" sets tau = C * lambda
/// and cannot be combined with "tau". Unknown keys are rejected.
SolverConfig config_from_json(const json& j, SolverConfig base = {});
json config_to_json(const SolverConfig& c);

json report_to_json(const QualityReport& q);
QualityReport report_from_json(const json& j);

/// Everything needed to rerun one completion.
struct RunRecord {
    SolverConfig config;
    std::string input;
    std::string mask;
    Shape shape{};
    /// "auto" or "explicit".
    std::string rank_source = "explicit";
    double sr = 0.0;
    std::optional<std::uint64_t> seed;
    int iterations = 0;
    bool converged = false;
    double final_objective = 0.0;
    double final_rel_change = 0.0;
    double wall_time_s = 0.0;
    std::optional<double> rse;
    std::optional<QualityReport> quality;
    std::string trace_path;
};

json record_to_json(const RunRecord& r);
RunRecord record_from_json(const json& j);

/// One batch of completion runs: every input x sr x variant x seed, in that
/// nesting order. Relative paths are resolved against `base_dir`.
struct ExperimentSpec {
    std::vector<std::string> inputs;
    std::vector<double> sampling_ratios;
    std::vector<std::string> variants{"mctf", "ncmctf"};
    std::vector<std::uint64_t> seeds{0};
    /// "auto" or "r1,r2,r3".
    std::string ranks = "auto";
    /// <= 0: the reference's max |value|.
    double peak = 0.0;
    double scale_ratio = 1.0;
    json config = json::object();
    std::string output_csv = "experiment.csv";
    /// Per-slice psnr/ssim curves per row when non-empty.
    std::string slices_dir;
    std::filesystem::path base_dir;
};

ExperimentSpec experiment_from_json(const json& j, const std::filesystem::path& base_dir);

/// Fixed column order; no timing columns so reruns are byte-identical.
std::string experiment_csv_header();

/// Runs the grid and returns the CSV text (header included).
std::string run_experiment(const ExperimentSpec& spec, const SolverConfig& base);

/// Entry point shared by the executable and the tests; `args` excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mctf::cli
