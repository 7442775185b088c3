#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mctf/factors.hpp"
#include "mctf/mask.hpp"

namespace mctf {

/// convex: nuclear norm on X_n and transform-domain TNN on G_n (MCTF).
/// log:    log-sum of singular values in both places (NC-MCTF).
enum class Variant { convex, log };

/// svd:  X_n from the leading left singular vectors of the zero-filled observation.
/// zero: all blocks start at zero. This is a fixed point of the updates and is
///       kept only for comparison.
enum class InitMode { svd, zero };

std::string to_string(Variant v);
Variant parse_variant(const std::string& s);
std::string to_string(InitMode m);
InitMode parse_init_mode(const std::string& s);

struct SolverConfig {
    Variant variant = Variant::convex;
    Ranks ranks{1, 1, 1};
    ModeWeights alpha{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    std::array<double, 3> tau{0.1, 0.1, 0.1};
    std::array<double, 3> lambda{0.1, 0.1, 0.1};
    /// Initial per-mode penalty; serves as both ALM penalty and proximal weight.
    std::array<double, 3> rho{1e-2, 1e-2, 1e-2};
    /// rho_n <- min(rho_growth * rho_n, mu_max) after every outer iteration.
    double rho_growth = 1.05;
    double mu_max = 1e6;
    double log_eps = 1e-3;
    double stop_tol = 1e-5;
    int max_iter = 500;
    InitMode init = InitMode::svd;
    /// Per-mode block updates run on up to this many threads. Results do not depend on it.
    int threads = 1;

    /// Throws ArgumentError on any violated constraint; `shape` checks r_n <= I_n.
    void validate(const Shape& shape) const;
    void validate() const;
};

struct SolverState {
    std::array<Matrix, 3> X;
    std::array<Matrix, 3> Z;
    std::array<Matrix, 3> gamma_x;
    std::array<Tensor3, 3> G;
    std::array<Tensor3, 3> J;
    std::array<Tensor3, 3> gamma_g;
    /// Current penalty per mode (grows geometrically up to mu_max).
    std::array<double, 3> rho{};
    Tensor3 Y;
    int iter = 0;

    MctfFactors factors(const ModeWeights& alpha) const;
};

struct CompletionResult {
    Tensor3 Y_hat;
    MctfFactors factors;
    int iterations = 0;
    bool converged = false;
    std::vector<double> objective_trace;
    std::vector<double> rel_change_trace;
};

/// Called after every outer iteration with the updated state.
using IterationObserver = std::function<void(const SolverState&)>;

/// Objective of the completion model: sum_n alpha_n/2 ||Y - G_n x_n X_n||^2
/// plus tau_n * (nuclear or log norm of X_n) plus lambda_n * (TNN or tensor log
/// norm of G_n along mode n).
double objective(const SolverState& state, const SolverConfig& config);

SolverState init_state(const Tensor3& observed, const ObservationMask& mask, const SolverConfig& config);

/// Z_n <- prox_{tau_n/rho_n}(X_n + GammaX_n / rho_n).
void update_Z(SolverState& state, const SolverConfig& config);
/// X_n <- argmin alpha_n/2 ||Y - G_n x_n X_n||^2 + rho_n ||X_n - (Z_n - GammaX_n/rho_n + X_n)/2||^2.
void update_X(SolverState& state, const SolverConfig& config);
/// G_n <- argmin alpha_n/2 ||Y - G_n x_n X_n||^2 + rho_n ||G_n - (J_n - GammaG_n/rho_n + G_n)/2||^2.
void update_G(SolverState& state, const SolverConfig& config);
/// J_n <- TNN prox_{lambda_n/rho_n}(G_n + GammaG_n / rho_n) along mode n.
void update_J(SolverState& state, const SolverConfig& config);
/// Unobserved entries <- sum_n alpha_n (G_n x_n X_n + rho_n Y) / (1 + rho_n);
/// observed entries <- observed values.
void update_Y(SolverState& state, const ObservationMask& mask, const Tensor3& observed, const SolverConfig& config);
/// GammaX_n += rho_n (X_n - Z_n), GammaG_n += rho_n (G_n - J_n).
void update_multipliers(SolverState& state);

/// Runs Z, X, G, J, Y, multiplier updates until ||Y+ - Y|| / ||Y|| < stop_tol
/// or max_iter. Throws DivergenceError naming the block that went non-finite.
CompletionResult solve(const Tensor3& observed, const ObservationMask& mask, const SolverConfig& config,
                       const IterationObserver& observer = {});

/// Per-iteration operation-count estimate of the solver (see README).
double flop_estimate(const Shape& shape, const Ranks& ranks);

}  // namespace mctf
