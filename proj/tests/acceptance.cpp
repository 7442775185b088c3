// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
// gating criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "mctf/cli.hpp"
#include "mctf/data_io.hpp"
#include "mctf/metrics.hpp"
#include "mctf/prox.hpp"
#include "mctf/solver.hpp"
#include "oracles.hpp"

using namespace mctf;
namespace fs = std::filesystem;

namespace {

/// Path to a user-supplied 150x150x181 TNS1 tensor; enables criterion 9.
constexpr const char* kReferenceDataEnv = "MCTF_REFERENCE_DATA";

struct Verdict {
    bool pass = true;
    bool skipped = false;
    std::string detail;
};

// Worst value of each named quantity against its tolerance.
class Ledger {
public:
    void at_most(const std::string& what, double value, double limit) {
        auto it = std::find_if(rows_.begin(), rows_.end(), [&](const Row& r) { return r.what == what; });
        if (it == rows_.end()) {
            rows_.push_back({what, value, limit, true});
            it = rows_.end() - 1;
        }
        it->worst = std::max(it->worst, value);
        if (!(value <= limit)) it->ok = false;
    }
    void require(const std::string& what, bool ok) { at_most(what, ok ? 0.0 : 1.0, 0.0); }

    Verdict verdict() const {
        Verdict v;
        std::ostringstream s;
        for (const Row& r : rows_) {
            if (!s.str().empty()) s << "; ";
            s << r.what << " " << r.worst << (r.ok ? " <= " : " > ") << r.limit;
            v.pass = v.pass && r.ok;
        }
        v.detail = s.str();
        return v;
    }

private:
    struct Row {
        std::string what;
        double worst, limit;
        bool ok;
    };
    std::vector<Row> rows_;
};

struct Criterion {
    int id;
    std::string name;
    double time_limit_s;
    std::function<Verdict()> body;
    bool gating = true;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- 1

Verdict algebraic_identities() {
    Ledger L;
    Rng rng(1001);
    std::vector<Shape> shapes{{64, 64, 64}, {64, 1, 7}, {1, 1, 1}, {63, 2, 64}};
    for (int i = 0; i < 16; ++i) shapes.push_back(oracle::random_shape(rng, 64));
    for (const Shape& s : shapes) {
        const Tensor3 t = oracle::random_tensor(s, rng);
        for (int n = 1; n <= 3; ++n) {
            L.require("fold(unfold) bitwise", fold(unfold(t, n), n, s) == t);
            L.require("unfold entrywise", unfold(t, n) == oracle::unfold(t, n));
            L.require("permutation round-trip bitwise", permute_from_mode3(permute_to_mode3(t, n), n) == t);
            L.require("permutation index rule", permute_to_mode3(t, n) == oracle::rotate(t, n));

            const Matrix m = oracle::random_matrix(1 + static_cast<Index>(rng.below(6)), s[static_cast<std::size_t>(n - 1)], rng);
            const Tensor3 p = mode_n_product(t, m, n);
            L.at_most("mode product vs unfolding identity", oracle::rel_diff(p, fold(m * unfold(t, n), n, p.shape())), 1e-12);
            if (t.size() <= 40000) L.at_most("mode product vs direct sum", oracle::rel_diff(p, oracle::mode_product(t, m, n)), 1e-12);

            const ComplexTensor3 f = fft_mode(t, n);
            L.at_most("fft round-trip", oracle::rel_diff(ifft_mode(f, n), t), 1e-10);
            const double e = fro_norm(t) * fro_norm(t);
            const double pf = fro_norm(f) * fro_norm(f);
            L.at_most("Parseval", std::abs(pf - static_cast<double>(s[static_cast<std::size_t>(n - 1)]) * e) / std::max(pf, 1e-300), 1e-9);
            if (s[static_cast<std::size_t>(n - 1)] <= 32 && t.size() <= 20000) {
                const ComplexTensor3 direct = permute_from_mode3(oracle::dft3(oracle::to_complex(oracle::rotate(t, n)), -1), n);
                L.at_most("fft vs direct DFT", fro_norm(ComplexTensor3(f - direct)) / std::max(fro_norm(direct), 1e-300), 1e-10);
            }
        }
    }
    return L.verdict();
}

// ---------------------------------------------------------------- 2

Verdict prox_oracles() {
    Ledger L;
    Rng rng(1002);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix m = oracle::random_matrix(2 + static_cast<Index>(rng.below(10)), 2 + static_cast<Index>(rng.below(10)), rng);
        const Eigen::VectorXd s = oracle::singular_values(m);
        const double delta = s(0) * rng.uniform();
        const Eigen::VectorXd expected = (s.array() - delta).max(0.0);
        L.at_most("svt singular values", (oracle::singular_values(svt(m, delta)) - expected).norm(), 1e-8);
    }

    const Matrix m = oracle::random_matrix(6, 5, rng);
    const double delta = 0.7;
    auto objective = [&](const Matrix& x) { return delta * oracle::singular_values(x).sum() + 0.5 * (x - m).squaredNorm(); };
    const Matrix x = svt(m, delta);
    for (int k = 0; k < 200; ++k) {
        Matrix d = oracle::random_matrix(6, 5, rng);
        d *= rng.uniform() * m.norm() / d.norm();
        L.at_most("svt objective excess over perturbations", objective(x) - objective(x + d), 1e-12);
    }

    const double eps = 1e-2;
    for (int trial = 0; trial < 8; ++trial) {
        const Shape s = oracle::random_shape(rng, 8);
        const Tensor3 t = oracle::random_tensor(s, rng);
        for (int n = 1; n <= 3; ++n) {
            const double d = 0.3 + rng.uniform();
            const Tensor3 e1 = oracle::transform_prox(t, n, [&](double v) { return v - d; });
            L.at_most("tnn_prox vs slice oracle", fro_norm(tnn_prox(t, n, d) - e1), 1e-8 * (1.0 + fro_norm(e1)));
            const Tensor3 e2 = oracle::transform_prox(t, n, [&](double v) { return v - d / (v + eps); });
            L.at_most("log_tnn_prox vs slice oracle", fro_norm(log_tnn_prox(t, n, d, eps) - e2), 1e-8 * (1.0 + fro_norm(e2)));
        }
    }
    return L.verdict();
}

// ---------------------------------------------------------------- 3

SolverState random_state(Rng& rng, const Shape& shape, const Ranks& ranks) {
    SolverState s;
    for (int n = 1; n <= 3; ++n) {
        const auto k = static_cast<std::size_t>(n - 1);
        const Shape g = with_dim(shape, n, ranks[k]);
        s.X[k] = oracle::random_matrix(shape[k], ranks[k], rng);
        s.Z[k] = oracle::random_matrix(shape[k], ranks[k], rng);
        s.gamma_x[k] = oracle::random_matrix(shape[k], ranks[k], rng);
        s.G[k] = oracle::random_tensor(g, rng);
        s.J[k] = oracle::random_tensor(g, rng);
        s.gamma_g[k] = oracle::random_tensor(g, rng);
        s.rho[k] = 0.5 + 1.5 * rng.uniform();
    }
    s.Y = oracle::random_tensor(shape, rng);
    return s;
}

Verdict block_optimality() {
    Ledger L;
    Rng rng(1003);
    for (int trial = 0; trial < 10; ++trial) {
        const Shape shape = {3 + static_cast<Index>(rng.below(5)), 3 + static_cast<Index>(rng.below(5)), 3 + static_cast<Index>(rng.below(5))};
        const Ranks ranks = {1 + static_cast<Index>(rng.below(3)), 1 + static_cast<Index>(rng.below(3)), 1 + static_cast<Index>(rng.below(3))};
        SolverConfig c;
        c.variant = trial % 2 == 0 ? Variant::convex : Variant::log;
        c.ranks = ranks;
        c.alpha = {0.5, 0.3, 0.2};
        c.tau = {0.4, 0.7, 0.2};
        c.lambda = {0.3, 0.5, 0.6};
        c.log_eps = 0.05;
        const SolverState before = random_state(rng, shape, ranks);

        SolverState s = before;
        update_X(s, c);
        for (int n = 1; n <= 3; ++n) {
            const auto k = static_cast<std::size_t>(n - 1);
            const Matrix anchor = 0.5 * (before.Z[k] - before.gamma_x[k] / before.rho[k] + before.X[k]);
            const Matrix g = oracle::unfold(before.G[k], n);
            const Matrix grad = c.alpha[k] * (s.X[k] * g - oracle::unfold(before.Y, n)) * g.transpose() + 2.0 * before.rho[k] * (s.X[k] - anchor);
            L.at_most("update_X stationarity", grad.norm() / (1.0 + s.X[k].norm()), 1e-8);
        }

        s = before;
        update_G(s, c);
        for (int n = 1; n <= 3; ++n) {
            const auto k = static_cast<std::size_t>(n - 1);
            const Tensor3 anchor = (before.J[k] - before.gamma_g[k] * (1.0 / before.rho[k]) + before.G[k]) * 0.5;
            const Matrix& x = before.X[k];
            const Matrix gn = oracle::unfold(s.G[k], n);
            const Matrix grad = c.alpha[k] * x.transpose() * (x * gn - oracle::unfold(before.Y, n)) + 2.0 * before.rho[k] * (gn - oracle::unfold(anchor, n));
            const double scale = 2.0 * before.rho[k] * fro_norm(s.G[k]) + c.alpha[k] * fro_norm(before.Y) * x.norm();
            L.at_most("update_G stationarity", grad.norm() / scale, 1e-8);
        }

        s = before;
        update_Z(s, c);
        for (std::size_t k = 0; k < 3; ++k) {
            const Matrix target = before.X[k] + before.gamma_x[k] / before.rho[k];
            const double t = c.tau[k] / before.rho[k];
            const Matrix expected = c.variant == Variant::convex
                                        ? oracle::shrink_singular_values(target, [&](double v) { return v - t; })
                                        : oracle::shrink_singular_values(target, [&](double v) { return v - t / (v + c.log_eps); });
            L.at_most("update_Z vs prox oracle", oracle::rel_diff(s.Z[k], expected), 1e-8);
        }

        s = before;
        update_J(s, c);
        for (int n = 1; n <= 3; ++n) {
            const auto k = static_cast<std::size_t>(n - 1);
            const Tensor3 target = before.G[k] + before.gamma_g[k] * (1.0 / before.rho[k]);
            const double t = c.lambda[k] / before.rho[k];
            const Tensor3 expected = c.variant == Variant::convex
                                         ? oracle::transform_prox(target, n, [&](double v) { return v - t; })
                                         : oracle::transform_prox(target, n, [&](double v) { return v - t / (v + c.log_eps); });
            L.at_most("update_J vs prox oracle", fro_norm(s.J[k] - expected) / (1.0 + fro_norm(expected)), 1e-8);
        }
    }
    return L.verdict();
}

// ---------------------------------------------------------------- 4, 6

struct RecoveryRun {
    double sr;
    std::uint64_t seed;
    CompletionResult result;
    double rse;
    double seconds;
};

const std::vector<RecoveryRun>& recovery_suite() {
    static const std::vector<RecoveryRun> runs = [] {
        std::vector<RecoveryRun> out;
        const Shape shape{20, 20, 20};
        SolverConfig c;
        c.ranks = {2, 2, 2};
        for (double sr : {0.6, 0.3})
            for (std::uint64_t seed : {1u, 2u, 3u}) {
                const Tensor3 truth = synth_mctf(shape, c.ranks, seed).tensor;
                const ObservationMask mask = sample_uniform(shape, sr, seed);
                const auto t0 = std::chrono::steady_clock::now();
                CompletionResult r = solve(apply_mask(truth, mask), mask, c);
                const double secs = seconds_since(t0);
                const double err = oracle::rel_diff(r.Y_hat, truth);
                out.push_back({sr, seed, std::move(r), err, secs});
            }
        return out;
    }();
    return runs;
}

Verdict synthetic_recovery() {
    Ledger L;
    for (const RecoveryRun& r : recovery_suite()) {
        const std::string tag = r.sr == 0.6 ? "SR 0.6" : "SR 0.3";
        L.at_most("rse " + tag, r.rse, r.sr == 0.6 ? 1e-2 : 5e-2);
        L.at_most("iterations", r.result.iterations, 500);
        L.at_most("seconds per run", r.seconds, 60.0);
    }
    return L.verdict();
}

Verdict objective_behavior() {
    Ledger L;
    for (const RecoveryRun& r : recovery_suite()) {
        const auto& f = r.result.objective_trace;
        double worst = 0.0;
        for (std::size_t k = 0; k + 5 < f.size(); ++k) worst = std::max(worst, (f[k + 5] - f[k]) / std::abs(f[k]));
        L.at_most("5-window objective increase (relative)", worst, 0.0);
        L.require("converged", r.result.converged);
        L.at_most("final relative change / 1e-5", r.result.rel_change_trace.back() / 1e-5, 1.0);
    }
    return L.verdict();
}

// ---------------------------------------------------------------- 5

Verdict nonconvex_trend() {
    const Shape shape{30, 30, 30};
    const Ranks ranks{2, 2, 2};
    const double sr = 0.1;
    SolverConfig c;
    c.ranks = ranks;
    c.lambda = {1.0, 1.0, 1.0};
    c.tau = c.lambda;

    double sum_nc = 0.0, sum_cv = 0.0;
    int wins = 0;
    std::ostringstream per;
    for (std::uint64_t seed = 101; seed <= 110; ++seed) {
        const Tensor3 truth = synth_mctf(shape, ranks, seed).tensor;
        const double rms = fro_norm(truth) / std::sqrt(static_cast<double>(truth.size()));
        const Tensor3 noisy = synth_mctf(shape, ranks, seed, 0.01 * rms).tensor;
        const ObservationMask mask = sample_uniform(shape, sr, seed);
        const Tensor3 observed = apply_mask(noisy, mask);
        const double peak = default_peak(truth);
        c.variant = Variant::convex;
        const double cv = psnr(truth, solve(observed, mask, c).Y_hat, peak);
        c.variant = Variant::log;
        const double nc = psnr(truth, solve(observed, mask, c).Y_hat, peak);
        sum_cv += cv;
        sum_nc += nc;
        if (nc > cv) ++wins;
        per << (seed == 101 ? "" : " ") << std::lround(100.0 * (nc - cv)) / 100.0;
    }
    Verdict v;
    v.pass = sum_nc / 10.0 >= sum_cv / 10.0 - 0.5 && wins >= 6;
    std::ostringstream s;
    s << "mean PSNR ncmctf " << sum_nc / 10.0 << " dB vs mctf " << sum_cv / 10.0 << " dB; ncmctf better on " << wins
      << "/10 (need 6); per-instance gain [" << per.str() << "]";
    v.detail = s.str();
    return v;
}

// ---------------------------------------------------------------- 7

Verdict metric_fixtures() {
    Ledger L;
    Rng rng(1007);
    Tensor3 ref(Shape{12, 13, 4});
    for (double& v : ref.data()) v = 1.0 + rng.uniform();
    const QualityReport q = evaluate(ref, ref, default_peak(ref));
    L.require("identical psnr == 100", q.psnr == 100.0);
    L.require("identical ssim == 1", q.ssim == 1.0);
    L.require("identical ergas == 0", q.ergas == 0.0);
    L.require("identical sam == 0", q.sam == 0.0);

    L.at_most("psnr of constant 0.1 error vs 20 dB", std::abs(psnr(Tensor3({4, 4, 3}), Tensor3::constant({4, 4, 3}, 0.1), 1.0) - 20.0), 1e-9);

    Tensor3 band = Tensor3::constant({2, 2, 1}, 2.0);
    Tensor3 off = band;
    for (Index p = 0; p < 4; ++p) off[p] += p % 2 == 0 ? 1.0 : -1.0;
    L.at_most("ergas of mean 2, rmse 1 vs 50", std::abs(ergas(band, off) - 50.0), 1e-9);

    Tensor3 x({3, 2, 2}), y({3, 2, 2});
    for (Index p = 0; p < 6; ++p) {
        x[p] = 1.0;
        y[p + 6] = 1.0;
    }
    L.at_most("sam of orthogonal fibers vs pi/2", std::abs(sam(x, y) - std::numbers::pi / 2.0), 1e-9);
    return L.verdict();
}

// ---------------------------------------------------------------- 8

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    if (code != 0) std::fprintf(stderr, "%s", err.str().c_str());
    return code;
}

Verdict pipeline_determinism() {
    Ledger L;
    const fs::path dir = fs::temp_directory_path() / "mctf_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    L.require("synth", cli({"synth", "--shape", "16,16,16", "--ranks", "2,2,2", "--seed", "8", "--out", (dir / "t.tns").string()}) == 0);
    std::ofstream(dir / "spec.json") << R"({"inputs": ["t.tns"], "sampling_ratios": [0.2, 0.5], "variants": ["mctf", "ncmctf"],
        "seeds": [3, 4], "ranks": "2,2,2", "config": {"max_iter": 150}})";
    const std::string spec = (dir / "spec.json").string();

    ::unsetenv(cli::kThreadsEnv);
    L.require("run 1", cli({"experiment", "--spec", spec, "--out", (dir / "a.csv").string()}) == 0);
    L.require("run 2", cli({"experiment", "--spec", spec, "--out", (dir / "b.csv").string()}) == 0);
    ::setenv(cli::kThreadsEnv, "3", 1);
    L.require("run with 3 threads", cli({"experiment", "--spec", spec, "--out", (dir / "c.csv").string()}) == 0);
    ::unsetenv(cli::kThreadsEnv);

    const std::string a = slurp(dir / "a.csv");
    L.require("9 lines", std::count(a.begin(), a.end(), '\n') == 9);
    L.require("rerun byte-identical", a == slurp(dir / "b.csv"));
    L.require("thread count byte-identical", a == slurp(dir / "c.csv"));
    return L.verdict();
}

// ---------------------------------------------------------------- 9

Verdict reference_pipeline() {
    Verdict v;
    const char* path = std::getenv(kReferenceDataEnv);
    if (path == nullptr || *path == '\0') {
        v.skipped = true;
        v.detail = std::string("set ") + kReferenceDataEnv + " to a 150x150x181 TNS1 tensor to run";
        return v;
    }
    const fs::path input = fs::absolute(path);
    const Tensor3 t = load_tensor(input);
    if (t.shape() != Shape{150, 150, 181}) {
        v.pass = false;
        v.detail = "expected shape 150x150x181";
        return v;
    }
    const fs::path dir = fs::temp_directory_path() / "mctf_acceptance_reference";
    fs::create_directories(dir);
    cli::json spec = {{"inputs", {input.string()}}, {"sampling_ratios", {0.05, 0.1, 0.2, 0.3}}, {"output_csv", (dir / "table.csv").string()}};
    std::ofstream(dir / "spec.json") << spec.dump(2);
    v.pass = cli({"experiment", "--spec", (dir / "spec.json").string()}) == 0;
    const std::string csv = slurp(dir / "table.csv");
    v.pass = v.pass && std::count(csv.begin(), csv.end(), '\n') == 9;
    v.detail = "wrote " + (dir / "table.csv").string();
    return v;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "algebraic identities", 10.0, algebraic_identities},
        {2, "prox oracles", 30.0, prox_oracles},
        {3, "solver block optimality", 30.0, block_optimality},
        {4, "synthetic recovery", 6 * 60.0, synthetic_recovery},
        {5, "ncmctf vs mctf trend", 300.0, nonconvex_trend},
        {6, "objective behaviour and convergence", 6 * 60.0, objective_behavior},
        {7, "metric fixtures", 5.0, metric_fixtures},
        {8, "pipeline determinism", 600.0, pipeline_determinism},
        {9, "reference data pipeline", 3600.0, reference_pipeline, false},
    };
    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.body();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        const double secs = seconds_since(t0);
        if (!v.skipped && secs > c.time_limit_s) {
            v.pass = false;
            v.detail += "; runtime over limit";
        }
        const char* status = v.skipped ? "SKIP" : v.pass ? "PASS" : "FAIL";
        std::printf("%s %d %s (%.2f s, limit %.0f s): %s\n", status, c.id, c.name.c_str(), secs, c.time_limit_s, v.detail.c_str());
        std::fflush(stdout);
        if (!v.pass && !v.skipped && c.gating) ++failures;
    }
    std::printf("%d gating criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
