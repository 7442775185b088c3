#include "mctf/solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "mctf/prox.hpp"

namespace mctf {

namespace {

constexpr std::size_t at(int mode) { return static_cast<std::size_t>(mode - 1); }

// Runs f(1), f(2), f(3), on separate threads when threads > 1. Each call
// only touches its own mode's blocks.
template <typename F>
void for_each_mode(int threads, F&& f) {
    if (threads <= 1) {
        for (int n = 1; n <= 3; ++n) f(n);
        return;
    }
    std::array<std::exception_ptr, 3> errors{};
    {
        std::vector<std::jthread> workers;
        for (int n = 1; n <= 3; ++n) {
            workers.emplace_back([&, n] {
                try {
                    f(n);
                } catch (...) {
                    errors[at(n)] = std::current_exception();
                }
            });
            if (static_cast<int>(workers.size()) >= threads) workers.clear();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

void check_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ArgumentError(std::string(name) + " must be positive and finite");
}

void check_non_negative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ArgumentError(std::string(name) + " must be non-negative and finite");
}

// Leading r eigenvectors of A A^T, i.e. the leading left singular vectors of A.
Matrix leading_left_vectors(const Matrix& a, Index r) {
    if (a.norm() == 0.0) return Matrix::Zero(a.rows(), r);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(a * a.transpose());
    const Matrix& v = eig.eigenvectors();  // ascending eigenvalues
    Matrix x(a.rows(), r);
    for (Index c = 0; c < r; ++c) x.col(c) = v.col(a.rows() - 1 - c);
    return x;
}

void require_finite(const Matrix& m, const char* block, int iter) {
    if (!m.allFinite()) throw DivergenceError(block, iter);
}

void require_finite(const Tensor3& t, const char* block, int iter) {
    if (!all_finite(t)) throw DivergenceError(block, iter);
}

}  // namespace

std::string to_string(Variant v) { return v == Variant::convex ? "mctf" : "ncmctf"; }

Variant parse_variant(const std::string& s) {
    if (s == "mctf" || s == "convex") return Variant::convex;
    if (s == "ncmctf" || s == "log") return Variant::log;
    throw ArgumentError("unknown variant '" + s + "' (expected mctf or ncmctf)");
}

std::string to_string(InitMode m) { return m == InitMode::svd ? "svd" : "zero"; }

InitMode parse_init_mode(const std::string& s) {
    if (s == "svd") return InitMode::svd;
    if (s == "zero") return InitMode::zero;
    throw ArgumentError("unknown init mode '" + s + "' (expected svd or zero)");
}

void SolverConfig::validate() const {
    double alpha_sum = 0.0;
    for (int n = 1; n <= 3; ++n) {
        const auto k = at(n);
        if (ranks[k] <= 0) throw ArgumentError("ranks must be positive");
        check_non_negative(alpha[k], "alpha");
        check_non_negative(tau[k], "tau");
        check_non_negative(lambda[k], "lambda");
        check_positive(rho[k], "rho");
        alpha_sum += alpha[k];
    }
    if (std::abs(alpha_sum - 1.0) > 1e-9) throw ArgumentError("alpha must sum to 1");
    if (!(rho_growth >= 1.0)) throw ArgumentError("rho_growth must be >= 1");
    check_positive(mu_max, "mu_max");
    check_positive(log_eps, "log_eps");
    if (!(stop_tol > 0.0)) throw ArgumentError("stop_tol must be positive");
    if (max_iter <= 0) throw ArgumentError("max_iter must be positive");
    if (threads <= 0) throw ArgumentError("threads must be positive");
}

void SolverConfig::validate(const Shape& shape) const {
    validate();
    for (int n = 1; n <= 3; ++n) {
        const Index others = Tensor3::count(shape) / shape[at(n)];
        if (ranks[at(n)] > std::min(shape[at(n)], others))
            throw ArgumentError("rank r" + std::to_string(n) + " = " + std::to_string(ranks[at(n)]) +
                                " exceeds the mode-" + std::to_string(n) + " unfolding size");
    }
}

MctfFactors SolverState::factors(const ModeWeights& alpha) const {
    MctfFactors f;
    f.X = X;
    f.G = G;
    f.alpha = alpha;
    return f;
}

double objective(const SolverState& state, const SolverConfig& config) {
    double total = 0.0;
    for (int n = 1; n <= 3; ++n) {
        const auto k = at(n);
        const Tensor3 residual = state.Y - mode_n_product(state.G[k], state.X[k], n);
        const double r = fro_norm(residual);
        total += 0.5 * config.alpha[k] * r * r;
        if (config.variant == Variant::convex) {
            total += config.tau[k] * nuclear_norm(state.X[k]);
            total += config.lambda[k] * tensor_nuclear_norm(state.G[k], n);
        } else {
            total += config.tau[k] * log_norm(state.X[k], config.log_eps);
            total += config.lambda[k] * tensor_log_norm(state.G[k], n, config.log_eps);
        }
    }
    return total;
}

SolverState init_state(const Tensor3& observed, const ObservationMask& mask, const SolverConfig& config) {
    config.validate(observed.shape());
    if (mask.shape() != observed.shape()) throw ArgumentError("mask shape does not match the observation");
    SolverState s;
    s.Y = project(observed, mask);
    s.rho = config.rho;
    for (int n = 1; n <= 3; ++n) {
        const auto k = at(n);
        const Index r = config.ranks[k];
        if (config.init == InitMode::zero) {
            s.X[k] = Matrix::Zero(observed.dim(n), r);
            s.G[k] = Tensor3(with_dim(observed.shape(), n, r));
        } else {
            s.X[k] = leading_left_vectors(unfold(s.Y, n), r);
            s.G[k] = mode_n_product(s.Y, s.X[k].transpose(), n);
        }
        s.Z[k] = s.X[k];
        s.J[k] = s.G[k];
        s.gamma_x[k] = Matrix::Zero(s.X[k].rows(), s.X[k].cols());
        s.gamma_g[k] = Tensor3(s.G[k].shape());
    }
    return s;
}

void update_Z(SolverState& s, const SolverConfig& config) {
    for_each_mode(config.threads, [&](int n) {
        const auto k = at(n);
        const Matrix target = s.X[k] + s.gamma_x[k] / s.rho[k];
        const double threshold = config.tau[k] / s.rho[k];
        if (threshold == 0.0)
            s.Z[k] = target;
        else if (config.variant == Variant::convex)
            s.Z[k] = svt(target, threshold);
        else
            s.Z[k] = log_svt(target, threshold, config.log_eps);
    });
}

void update_X(SolverState& s, const SolverConfig& config) {
    for_each_mode(config.threads, [&](int n) {
        const auto k = at(n);
        const double a = config.alpha[k];
        const double rho = s.rho[k];
        const Matrix anchor = 0.5 * (s.Z[k] - s.gamma_x[k] / rho + s.X[k]);
        const Matrix g = unfold(s.G[k], n);
        // X (a G G^T + 2 rho I) = a Y_(n) G^T + 2 rho anchor
        Matrix system = a * (g * g.transpose());
        system.diagonal().array() += 2.0 * rho;
        Matrix rhs = 2.0 * rho * anchor;
        if (a != 0.0) rhs.noalias() += a * (unfold(s.Y, n) * g.transpose());
        s.X[k] = system.ldlt().solve(rhs.transpose()).transpose();
    });
}

void update_G(SolverState& s, const SolverConfig& config) {
    for_each_mode(config.threads, [&](int n) {
        const auto k = at(n);
        const double a = config.alpha[k];
        const double rho = s.rho[k];
        // (a X^T X + 2 rho I) G_(n) = a X^T Y_(n) + 2 rho anchor_(n)
        Tensor3 rhs = (s.J[k] - s.gamma_g[k] * (1.0 / rho) + s.G[k]) * rho;
        if (a != 0.0) rhs += mode_n_product(s.Y, a * s.X[k].transpose(), n);
        Matrix system = a * (s.X[k].transpose() * s.X[k]);
        system.diagonal().array() += 2.0 * rho;
        const Matrix inverse = system.ldlt().solve(Matrix::Identity(system.rows(), system.cols()));
        s.G[k] = mode_n_product(rhs, inverse, n);
    });
}

void update_J(SolverState& s, const SolverConfig& config) {
    for_each_mode(config.threads, [&](int n) {
        const auto k = at(n);
        Tensor3 target = s.G[k] + s.gamma_g[k] * (1.0 / s.rho[k]);
        const double threshold = config.lambda[k] / s.rho[k];
        if (threshold == 0.0)
            s.J[k] = std::move(target);
        else if (config.variant == Variant::convex)
            s.J[k] = tnn_prox(target, n, threshold);
        else
            s.J[k] = log_tnn_prox(target, n, threshold, config.log_eps);
    });
}

void update_Y(SolverState& s, const ObservationMask& mask, const Tensor3& observed, const SolverConfig& config) {
    if (mask.shape() != s.Y.shape() || observed.shape() != s.Y.shape())
        throw ArgumentError("update_Y: mask/observation shape mismatch");
    std::array<Tensor3, 3> blend;
    for_each_mode(config.threads, [&](int n) {
        const auto k = at(n);
        const double rho = s.rho[k];
        Tensor3 term = mode_n_product(s.G[k], s.X[k], n);
        term += s.Y * rho;
        blend[k] = term * (config.alpha[k] / (1.0 + rho));
    });
    Tensor3 next = blend[0];
    next += blend[1];
    next += blend[2];
    for (Index o : mask.offsets()) next[o] = observed[o];
    s.Y = std::move(next);
}

void update_multipliers(SolverState& s) {
    for (std::size_t k = 0; k < 3; ++k) {
        s.gamma_x[k] += (s.X[k] - s.Z[k]) * s.rho[k];
        s.gamma_g[k] += (s.G[k] - s.J[k]) * s.rho[k];
    }
}

CompletionResult solve(const Tensor3& observed, const ObservationMask& mask, const SolverConfig& config,
                       const IterationObserver& observer) {
    if (mask.shape() != observed.shape()) throw ArgumentError("mask shape does not match the observation");
    if (mask.empty()) throw ArgumentError("observation mask is empty");
    for (Index o : mask.offsets())
        if (!std::isfinite(observed[o])) throw ArgumentError("observed entries must be finite");
    SolverState s = init_state(observed, mask, config);
    CompletionResult result;

    auto check_matrices = [&](const std::array<Matrix, 3>& blocks, const char* name) {
        for (const auto& b : blocks) require_finite(b, name, s.iter + 1);
    };
    auto check_tensors = [&](const std::array<Tensor3, 3>& blocks, const char* name) {
        for (const auto& b : blocks) require_finite(b, name, s.iter + 1);
    };
    for (const auto& x : s.X) require_finite(x, "init_state", 0);
    for (const auto& g : s.G) require_finite(g, "init_state", 0);

    while (s.iter < config.max_iter) {
        const Tensor3 previous = s.Y;

        update_Z(s, config);
        check_matrices(s.Z, "update_Z");
        update_X(s, config);
        check_matrices(s.X, "update_X");
        update_G(s, config);
        check_tensors(s.G, "update_G");
        update_J(s, config);
        check_tensors(s.J, "update_J");
        update_Y(s, mask, observed, config);
        require_finite(s.Y, "update_Y", s.iter + 1);
        update_multipliers(s);
        check_matrices(s.gamma_x, "update_multipliers");
        check_tensors(s.gamma_g, "update_multipliers");

        for (auto& rho : s.rho) rho = std::min(config.rho_growth * rho, config.mu_max);
        ++s.iter;

        const double base = fro_norm(previous);
        const double change = fro_norm(s.Y - previous);
        double rel = 0.0;
        if (base > 0.0)
            rel = change / base;
        else if (change > 0.0)
            rel = std::numeric_limits<double>::infinity();

        result.objective_trace.push_back(objective(s, config));
        result.rel_change_trace.push_back(rel);
        if (observer) observer(s);
        if (rel < config.stop_tol) {
            result.converged = true;
            break;
        }
    }

    result.iterations = s.iter;
    result.factors = s.factors(config.alpha);
    result.Y_hat = std::move(s.Y);
    return result;
}

double flop_estimate(const Shape& shape, const Ranks& ranks) {
    const double total = static_cast<double>(Tensor3::count(shape));
    double cost = 0.0;
    double min_sum = 0.0;
    for (int n = 1; n <= 3; ++n) {
        const double in = static_cast<double>(shape[at(n)]);
        const double rn = static_cast<double>(ranks[at(n)]);
        const double sn = total / in;
        cost += in * rn * rn + in * rn * sn + rn * rn * sn;
        min_sum += std::min(in, static_cast<double>(shape[at(n % 3 + 1)]));
    }
    return cost + total * (std::log(total) + min_sum);
}

}  // namespace mctf
