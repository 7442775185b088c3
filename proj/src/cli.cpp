#include "mctf/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "mctf/data_io.hpp"

namespace mctf::cli {

namespace {

// Shortest decimal that parses back to the same double.
std::string num(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or_inf(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ArgumentError("cannot write " + path.string());
    out << text;
    if (!out) throw ArgumentError("write failed for " + path.string());
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ArgumentError(path.string() + ": " + e.what());
    }
}

std::array<double, 3> per_mode(const json& v) {
    if (v.is_number()) {
        const double x = v.get<double>();
        return {x, x, x};
    }
    if (!v.is_array() || v.size() != 3) throw ArgumentError("per-mode value must be a number or a 3-element array");
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

Ranks ranks_from_json(const json& v) {
    if (v.is_string()) return parse_triple(v.get<std::string>(), "ranks");
    if (!v.is_array() || v.size() != 3) throw ArgumentError("ranks must be \"r1,r2,r3\" or a 3-element array");
    Ranks r{};
    for (std::size_t k = 0; k < 3; ++k) {
        r[k] = v[k].get<Index>();
        if (r[k] <= 0) throw ArgumentError("ranks must be positive");
    }
    return r;
}

json triple_json(const std::array<Index, 3>& t) { return json::array({t[0], t[1], t[2]}); }
json triple_json(const std::array<double, 3>& t) { return json::array({t[0], t[1], t[2]}); }

int threads_from_env() {
    const char* raw = std::getenv(kThreadsEnv);
    if (raw == nullptr || *raw == '\0') return 1;
    int n = 0;
    const std::string s(raw);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), n);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || n <= 0)
        throw ArgumentError(std::string(kThreadsEnv) + " must be a positive integer, got '" + s + "'");
    return n;
}

// Config file (if any) with the environment thread count unless the file sets one.
SolverConfig load_config(const std::string& path) {
    json j = path.empty() ? json::object() : read_json(path);
    SolverConfig c = config_from_json(j);
    if (!j.contains("threads")) c.threads = threads_from_env();
    return c;
}

std::string trace_csv(const CompletionResult& r) {
    std::string s = "iter,objective,rel_change\n";
    for (std::size_t i = 0; i < r.objective_trace.size(); ++i)
        s += std::to_string(i + 1) + "," + num(r.objective_trace[i]) + "," + num(r.rel_change_trace[i]) + "\n";
    return s;
}

std::string slices_csv(const QualityReport& q) {
    std::string s = "slice,psnr,ssim\n";
    for (std::size_t k = 0; k < q.psnr_per_slice.size(); ++k)
        s += std::to_string(k) + "," + num(q.psnr_per_slice[k]) + "," + num(q.ssim_per_slice[k]) + "\n";
    return s;
}

double rse(const Tensor3& est, const Tensor3& ref) {
    const double base = fro_norm(ref);
    if (base == 0.0) throw ArgumentError("reference tensor is zero; relative error undefined");
    return fro_norm(est - ref) / base;
}

Ranks resolve_ranks(const std::string& text, const Shape& shape) {
    return text == "auto" ? rank_heuristic(shape) : parse_triple(text, "ranks");
}

// --- subcommands --------------------------------------------------------

struct SynthArgs {
    std::string shape, ranks, structure = "shared", out, factors;
    std::uint64_t seed = 0;
    double noise = 0.0;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
    const Shape shape = parse_triple(a.shape, "shape");
    const Ranks ranks = parse_triple(a.ranks, "ranks");
    const SyntheticData d = synth_mctf(shape, ranks, a.seed, a.noise, parse_core_structure(a.structure));
    save_tensor(d.tensor, a.out);

    json f;
    f["shape"] = triple_json(shape);
    f["ranks"] = triple_json(ranks);
    f["seed"] = a.seed;
    f["noise"] = a.noise;
    f["structure"] = a.structure;
    f["alpha"] = triple_json(d.factors.alpha);
    f["X"] = json::array();
    f["G"] = json::array();
    for (std::size_t k = 0; k < 3; ++k) {
        const Matrix& x = d.factors.X[k];
        f["X"].push_back({{"rows", x.rows()}, {"cols", x.cols()}, {"data", std::vector<double>(x.data(), x.data() + x.size())}});
        const Tensor3& g = d.factors.G[k];
        f["G"].push_back({{"shape", triple_json(g.shape())}, {"data", g.buffer()}});
    }
    const std::string sidecar = a.factors.empty() ? a.out + ".factors.json" : a.factors;
    write_text(sidecar, f.dump(2) + "\n");
    out << "wrote " << a.out << " and " << sidecar << "\n";
    return kExitOk;
}

struct MaskArgs {
    std::string input, shape, out;
    double sr = 0.0;
    std::uint64_t seed = 0;
};

int cmd_mask(const MaskArgs& a, std::ostream& out) {
    if (a.input.empty() == a.shape.empty()) throw ArgumentError("give exactly one of --input or --shape");
    const Shape shape = a.input.empty() ? parse_triple(a.shape, "shape") : load_tensor(a.input).shape();
    const ObservationMask m = sample_uniform(shape, a.sr, a.seed);
    save_mask(m, a.out);
    out << "wrote " << a.out << " (" << m.count() << " observed of " << Tensor3::count(shape) << ")\n";
    return kExitOk;
}

struct CompleteArgs {
    std::string input, mask, variant, ranks, config, out, record, trace_out, ref;
    std::optional<std::uint64_t> seed;
    std::optional<int> max_iter;
    std::optional<double> stop_tol, peak;
};

int cmd_complete(const CompleteArgs& a, std::ostream& out) {
    const Tensor3 input = load_tensor(a.input);
    const ObservationMask mask = load_mask(a.mask);
    if (input.shape() != mask.shape()) throw ArgumentError("input and mask shapes differ");

    RunRecord rec;
    rec.config = load_config(a.config);
    const bool config_has_ranks = !a.config.empty() && read_json(a.config).contains("ranks");
    if (!a.variant.empty()) rec.config.variant = parse_variant(a.variant);
    if (a.max_iter) rec.config.max_iter = *a.max_iter;
    if (a.stop_tol) rec.config.stop_tol = *a.stop_tol;
    if (!a.ranks.empty()) {
        rec.config.ranks = resolve_ranks(a.ranks, input.shape());
        rec.rank_source = a.ranks == "auto" ? "auto" : "explicit";
    } else if (!config_has_ranks) {
        rec.config.ranks = rank_heuristic(input.shape());
        rec.rank_source = "auto";
    }

    const Tensor3 observed = apply_mask(input, mask);
    const auto start = std::chrono::steady_clock::now();
    const CompletionResult result = solve(observed, mask, rec.config);
    rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    save_tensor(result.Y_hat, a.out);

    rec.input = a.input;
    rec.mask = a.mask;
    rec.shape = input.shape();
    rec.sr = mask.sampling_ratio();
    rec.seed = a.seed;
    rec.iterations = result.iterations;
    rec.converged = result.converged;
    rec.final_objective = result.objective_trace.back();
    rec.final_rel_change = result.rel_change_trace.back();
    if (!a.trace_out.empty()) {
        write_text(a.trace_out, trace_csv(result));
        rec.trace_path = a.trace_out;
    }
    if (!a.ref.empty()) {
        const Tensor3 ref = load_tensor(a.ref);
        if (ref.shape() != input.shape()) throw ArgumentError("reference shape differs from input");
        rec.rse = rse(result.Y_hat, ref);
        rec.quality = evaluate(ref, result.Y_hat, a.peak ? *a.peak : default_peak(ref));
    }
    const std::string record_path = a.record.empty() ? a.out + ".run.json" : a.record;
    write_text(record_path, record_to_json(rec).dump(2) + "\n");
    out << to_string(rec.config.variant) << ": " << result.iterations << " iterations, "
        << (result.converged ? "converged" : "not converged");
    if (rec.rse) out << ", rse " << num(*rec.rse);
    out << "\nwrote " << a.out << " and " << record_path << "\n";
    return kExitOk;
}

struct MetricsArgs {
    std::string ref, est, out, slices_out;
    std::optional<double> peak;
    double scale_ratio = 1.0;
};

int cmd_metrics(const MetricsArgs& a, std::ostream& out) {
    const Tensor3 ref = load_tensor(a.ref);
    const Tensor3 est = load_tensor(a.est);
    const QualityReport q = evaluate(ref, est, a.peak ? *a.peak : default_peak(ref), a.scale_ratio);
    const std::string text = report_to_json(q).dump(2) + "\n";
    if (a.out.empty())
        out << text;
    else
        write_text(a.out, text);
    if (!a.slices_out.empty()) write_text(a.slices_out, slices_csv(q));
    return kExitOk;
}

struct ExperimentArgs {
    std::string spec, out;
};

int cmd_experiment(const ExperimentArgs& a, std::ostream& out) {
    const std::filesystem::path spec_path(a.spec);
    const json j = read_json(spec_path);
    ExperimentSpec spec = experiment_from_json(j, spec_path.parent_path());
    if (!a.out.empty()) spec.output_csv = std::filesystem::absolute(a.out).string();
    SolverConfig base = config_from_json(spec.config);
    if (!spec.config.contains("threads")) base.threads = threads_from_env();
    const std::string csv = run_experiment(spec, base);
    const std::filesystem::path target = spec.base_dir / spec.output_csv;
    write_text(target, csv);
    out << "wrote " << target.string() << "\n";
    return kExitOk;
}

}  // namespace

Shape parse_triple(const std::string& text, const char* what) {
    Shape t{};
    std::size_t pos = 0;
    for (std::size_t k = 0; k < 3; ++k) {
        const std::size_t end = k < 2 ? text.find(',', pos) : text.size();
        if (end == std::string::npos) throw ArgumentError(std::string(what) + " must be three comma-separated integers");
        const std::string item = text.substr(pos, end - pos);
        long long v = 0;
        const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
        if (res.ec != std::errc{} || res.ptr != item.data() + item.size() || item.empty())
            throw ArgumentError(std::string(what) + ": '" + item + "' is not an integer");
        if (v <= 0) throw ArgumentError(std::string(what) + " must be positive");
        t[k] = static_cast<Index>(v);
        pos = end + 1;
    }
    return t;
}

SolverConfig config_from_json(const json& j, SolverConfig c) {
    if (!j.is_object()) throw ArgumentError("config must be a JSON object");
    if (j.contains("C") && j.contains("tau")) throw ArgumentError("config sets both C and tau");
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "variant")
                c.variant = parse_variant(v.get<std::string>());
            else if (key == "ranks")
                c.ranks = ranks_from_json(v);
            else if (key == "alpha")
                c.alpha = per_mode(v);
            else if (key == "tau")
                c.tau = per_mode(v);
            else if (key == "lambda")
                c.lambda = per_mode(v);
            else if (key == "rho")
                c.rho = per_mode(v);
            else if (key == "rho_growth")
                c.rho_growth = v.get<double>();
            else if (key == "mu_max")
                c.mu_max = v.get<double>();
            else if (key == "log_eps")
                c.log_eps = v.get<double>();
            else if (key == "stop_tol")
                c.stop_tol = v.get<double>();
            else if (key == "max_iter")
                c.max_iter = v.get<int>();
            else if (key == "init")
                c.init = parse_init_mode(v.get<std::string>());
            else if (key == "threads")
                c.threads = v.get<int>();
            else if (key != "C")
                throw ArgumentError("unknown config key '" + key + "'");
        }
        if (!j.contains("tau")) {
            const double ratio = j.value("C", 1.0);
            for (std::size_t k = 0; k < 3; ++k) c.tau[k] = ratio * c.lambda[k];
        }
    } catch (const json::exception& e) {
        throw ArgumentError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

json config_to_json(const SolverConfig& c) {
    return {
        {"variant", to_string(c.variant)},
        {"ranks", triple_json(c.ranks)},
        {"alpha", triple_json(c.alpha)},
        {"tau", triple_json(c.tau)},
        {"lambda", triple_json(c.lambda)},
        {"rho", triple_json(c.rho)},
        {"rho_growth", c.rho_growth},
        {"mu_max", c.mu_max},
        {"log_eps", c.log_eps},
        {"stop_tol", c.stop_tol},
        {"max_iter", c.max_iter},
        {"init", to_string(c.init)},
        {"threads", c.threads},
    };
}

json report_to_json(const QualityReport& q) {
    return {
        {"psnr", q.psnr},
        {"ssim", q.ssim},
        {"ergas", q.ergas},
        {"sam", q.sam},
        {"sam_skipped", q.sam_skipped},
        {"peak", q.peak},
        {"scale_ratio", q.scale_ratio},
        {"per_slice", {{"psnr", q.psnr_per_slice}, {"ssim", q.ssim_per_slice}}},
    };
}

QualityReport report_from_json(const json& j) {
    QualityReport q;
    q.psnr = j.at("psnr").get<double>();
    q.ssim = j.at("ssim").get<double>();
    q.ergas = j.at("ergas").get<double>();
    q.sam = j.at("sam").get<double>();
    q.sam_skipped = j.at("sam_skipped").get<Index>();
    q.peak = j.at("peak").get<double>();
    q.scale_ratio = j.at("scale_ratio").get<double>();
    q.psnr_per_slice = j.at("per_slice").at("psnr").get<std::vector<double>>();
    q.ssim_per_slice = j.at("per_slice").at("ssim").get<std::vector<double>>();
    return q;
}

json record_to_json(const RunRecord& r) {
    json j;
    j["config"] = config_to_json(r.config);
    j["variant"] = to_string(r.config.variant);
    j["input"] = r.input;
    j["mask"] = r.mask;
    j["shape"] = triple_json(r.shape);
    j["ranks"] = triple_json(r.config.ranks);
    j["rank_source"] = r.rank_source;
    j["sr"] = r.sr;
    j["seed"] = r.seed ? json(*r.seed) : json(nullptr);
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["final_objective"] = finite_or_null(r.final_objective);
    j["final_rel_change"] = finite_or_null(r.final_rel_change);
    j["wall_time_s"] = r.wall_time_s;
    j["rse"] = r.rse ? json(*r.rse) : json(nullptr);
    j["quality"] = r.quality ? report_to_json(*r.quality) : json(nullptr);
    j["objective_trace"] = r.trace_path;
    return j;
}

RunRecord record_from_json(const json& j) {
    try {
        RunRecord r;
        r.config = config_from_json(j.at("config"));
        if (j.at("variant").get<std::string>() != to_string(r.config.variant))
            throw ArgumentError("run record variant disagrees with its config");
        r.input = j.at("input").get<std::string>();
        r.mask = j.at("mask").get<std::string>();
        r.shape = ranks_from_json(j.at("shape"));
        r.rank_source = j.at("rank_source").get<std::string>();
        r.sr = j.at("sr").get<double>();
        if (!j.at("seed").is_null()) r.seed = j.at("seed").get<std::uint64_t>();
        r.iterations = j.at("iterations").get<int>();
        r.converged = j.at("converged").get<bool>();
        r.final_objective = number_or_inf(j.at("final_objective"));
        r.final_rel_change = number_or_inf(j.at("final_rel_change"));
        r.wall_time_s = j.at("wall_time_s").get<double>();
        if (!j.at("rse").is_null()) r.rse = j.at("rse").get<double>();
        if (!j.at("quality").is_null()) r.quality = report_from_json(j.at("quality"));
        r.trace_path = j.at("objective_trace").get<std::string>();
        return r;
    } catch (const json::exception& e) {
        throw ArgumentError(std::string("run record: ") + e.what());
    }
}

ExperimentSpec experiment_from_json(const json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) throw ArgumentError("experiment spec must be a JSON object");
    ExperimentSpec s;
    s.base_dir = base_dir;
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "inputs")
                s.inputs = v.get<std::vector<std::string>>();
            else if (key == "sampling_ratios")
                s.sampling_ratios = v.get<std::vector<double>>();
            else if (key == "variants")
                s.variants = v.get<std::vector<std::string>>();
            else if (key == "seeds")
                s.seeds = v.get<std::vector<std::uint64_t>>();
            else if (key == "ranks")
                s.ranks = v.is_string() ? v.get<std::string>() : [&] {
                    const Ranks r = ranks_from_json(v);
                    return std::to_string(r[0]) + "," + std::to_string(r[1]) + "," + std::to_string(r[2]);
                }();
            else if (key == "peak")
                s.peak = v.get<double>();
            else if (key == "scale_ratio")
                s.scale_ratio = v.get<double>();
            else if (key == "config")
                s.config = v;
            else if (key == "output_csv")
                s.output_csv = v.get<std::string>();
            else if (key == "slices_dir")
                s.slices_dir = v.get<std::string>();
            else
                throw ArgumentError("unknown experiment key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw ArgumentError(std::string("experiment spec: ") + e.what());
    }
    if (s.inputs.empty()) throw ArgumentError("experiment spec needs at least one input");
    if (s.sampling_ratios.empty()) throw ArgumentError("experiment spec needs at least one sampling ratio");
    if (s.variants.empty() || s.seeds.empty()) throw ArgumentError("experiment spec needs variants and seeds");
    for (const auto& v : s.variants) parse_variant(v);
    if (s.ranks != "auto") parse_triple(s.ranks, "ranks");
    return s;
}

std::string experiment_csv_header() {
    return "input,sr,variant,seed,r1,r2,r3,iterations,converged,objective,rse,psnr,ssim,ergas,sam,sam_skipped";
}

std::string run_experiment(const ExperimentSpec& spec, const SolverConfig& base) {
    std::string csv = experiment_csv_header() + "\n";
    const std::filesystem::path slices = spec.slices_dir.empty() ? std::filesystem::path{} : spec.base_dir / spec.slices_dir;
    if (!slices.empty()) std::filesystem::create_directories(slices);
    for (const std::string& input : spec.inputs) {
        const Tensor3 ref = load_tensor(spec.base_dir / input);
        const double peak = spec.peak > 0.0 ? spec.peak : default_peak(ref);
        SolverConfig config = base;
        config.ranks = resolve_ranks(spec.ranks, ref.shape());
        for (double sr : spec.sampling_ratios)
            for (const std::string& variant : spec.variants)
                for (std::uint64_t seed : spec.seeds) {
                    const ObservationMask mask = sample_uniform(ref.shape(), sr, seed);
                    config.variant = parse_variant(variant);
                    const CompletionResult result = solve(apply_mask(ref, mask), mask, config);
                    const QualityReport q = evaluate(ref, result.Y_hat, peak, spec.scale_ratio);
                    std::ostringstream row;
                    row << input << ',' << num(sr) << ',' << to_string(config.variant) << ',' << seed << ','
                        << config.ranks[0] << ',' << config.ranks[1] << ',' << config.ranks[2] << ','
                        << result.iterations << ',' << (result.converged ? 1 : 0) << ','
                        << num(result.objective_trace.back()) << ',' << num(rse(result.Y_hat, ref)) << ','
                        << num(q.psnr) << ',' << num(q.ssim) << ',' << num(q.ergas) << ',' << num(q.sam) << ','
                        << q.sam_skipped << '\n';
                    csv += row.str();
                    if (!slices.empty()) {
                        const std::string name = std::filesystem::path(input).stem().string() + "_sr" + num(sr) + "_" +
                                                 to_string(config.variant) + "_s" + std::to_string(seed) + ".csv";
                        write_text(slices / name, slices_csv(q));
                    }
                }
    }
    return csv;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Low-rank tensor completion with multi-modal core tensor factorization"};
    app.name("mctf");
    app.require_subcommand(1);

    SynthArgs synth;
    auto* s = app.add_subcommand("synth", "Generate a synthetic low-rank tensor and its factors");
    s->add_option("--shape", synth.shape, "I1,I2,I3")->required();
    s->add_option("--ranks", synth.ranks, "r1,r2,r3")->required();
    s->add_option("--seed", synth.seed, "Generator seed");
    s->add_option("--noise", synth.noise, "Std. deviation of additive Gaussian noise");
    s->add_option("--structure", synth.structure, "shared or independent cores");
    s->add_option("--out", synth.out, "Output tensor (TNS1)")->required();
    s->add_option("--factors", synth.factors, "Factor sidecar JSON (default <out>.factors.json)");

    MaskArgs mask;
    auto* m = app.add_subcommand("mask", "Sample a uniform observation mask");
    m->add_option("--input", mask.input, "Tensor whose shape the mask takes");
    m->add_option("--shape", mask.shape, "I1,I2,I3 (instead of --input)");
    m->add_option("--sr", mask.sr, "Sampling ratio in [0, 1]")->required();
    m->add_option("--seed", mask.seed, "Sampling seed");
    m->add_option("--out", mask.out, "Output mask file")->required();

    CompleteArgs complete;
    auto* c = app.add_subcommand("complete", "Complete a partially observed tensor");
    c->add_option("--input", complete.input, "Observed tensor (TNS1); unobserved entries are ignored")->required();
    c->add_option("--mask", complete.mask, "Observation mask")->required();
    c->add_option("--variant", complete.variant, "mctf or ncmctf");
    c->add_option("--ranks", complete.ranks, "auto or r1,r2,r3");
    c->add_option("--config", complete.config, "Solver config JSON");
    c->add_option("--max-iter", complete.max_iter, "Iteration cap");
    c->add_option("--stop-tol", complete.stop_tol, "Relative-change stopping threshold");
    c->add_option("--out", complete.out, "Completed tensor (TNS1)")->required();
    c->add_option("--record", complete.record, "Run record JSON (default <out>.run.json)");
    c->add_option("--trace-out", complete.trace_out, "Objective trace CSV");
    c->add_option("--ref", complete.ref, "Ground truth for error and quality indices");
    c->add_option("--peak", complete.peak, "Peak value for PSNR/SSIM (default max |ref|)");
    c->add_option("--seed", complete.seed, "Mask seed, recorded in the run record");

    MetricsArgs metrics;
    auto* q = app.add_subcommand("metrics", "Quality indices of an estimate against a reference");
    q->add_option("--ref", metrics.ref, "Reference tensor")->required();
    q->add_option("--est", metrics.est, "Estimated tensor")->required();
    q->add_option("--peak", metrics.peak, "Peak value (default max |ref|)");
    q->add_option("--scale-ratio", metrics.scale_ratio, "ERGAS resolution ratio");
    q->add_option("--out", metrics.out, "Report JSON (default stdout)");
    q->add_option("--slices-out", metrics.slices_out, "Per-slice CSV");

    ExperimentArgs experiment;
    auto* e = app.add_subcommand("experiment", "Run a mask/complete/metrics grid from a JSON spec");
    e->add_option("--spec", experiment.spec, "Experiment spec JSON")->required();
    e->add_option("--out", experiment.out, "Override the spec's output CSV");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& ex) {
        const int code = app.exit(ex, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*s) return cmd_synth(synth, out);
        if (*m) return cmd_mask(mask, out);
        if (*c) return cmd_complete(complete, out);
        if (*q) return cmd_metrics(metrics, out);
        return cmd_experiment(experiment, out);
    } catch (const DivergenceError& ex) {
        err << "error: diverged: " << ex.what() << "\n";
        return kExitDivergence;
    } catch (const NumericalError& ex) {
        err << "error: " << ex.what() << "\n";
        return kExitDivergence;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace mctf::cli
