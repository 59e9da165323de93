#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "wafermc/operators.hpp"
#include "wafermc/types.hpp"

namespace wafermc {

/// Parameters of the continuation solve. Fields left empty are resolved
/// automatically from the problem:
///   tau        -> 1 / norm_bound^2 (monotone-descent step for the
///                 quadratic data term),
///   mu_initial -> 0.25 * sigma_max(A*(b)).
/// mu_final must be supplied before solving; solve_completion and
/// solve_type_regularized default it to 1/lambda.
struct SolverConfig {
    std::optional<double> mu_final;
    std::optional<double> mu_initial;
    double mu_decay = 0.25;
    std::optional<double> tau;
    double inner_tol = 1e-4;
    int max_inner_iters = 500;
    int max_total_iters = 20000;
};

/// Rejects invalid field values: mu_decay outside (0,1), non-positive
/// tolerances or iteration caps, mu_final > mu_initial when both explicit.
void validate_config(const SolverConfig& config);

enum class Termination { Converged, MaxIterations };

struct TraceRecord {
    double mu = 0.0;
    int inner_iteration = 0;      // 1-based within the current mu phase
    double objective = 0.0;       // mu*||X||_* + 0.5*||A(X)-b||^2 at the new iterate
    double residual_norm = 0.0;   // ||A(X)-b||_2
    double iterate_change = 0.0;  // ||X_{k+1}-X_k||_F
    int rank = 0;                 // singular values surviving the shrinkage
};

struct SolverTrace {
    std::vector<TraceRecord> records;
    Termination termination = Termination::Converged;
    bool degenerate_problem = false;  // empty operator: zero map is the minimizer
    int total_iterations = 0;
    int phases = 0;
};

struct CompletionResult {
    WaferMap x;
    SolverTrace trace;
    SolverConfig config_used;
};

struct ShrinkResult {
    WaferMap x;
    Eigen::VectorXd sigmas_before;
    Eigen::VectorXd sigmas_after;
};

/// Singular value shrinkage, the proximal map of theta * nuclear norm:
/// X = U diag(max(sigma_i - theta, 0)) V^T for an SVD Y = U diag(sigma) V^T.
ShrinkResult shrink_singular_values(const WaferMap& y, double theta);

/// Expands the automatic fields of a config against a concrete problem and
/// checks explicit tau against the step-size stability bound
/// tau * norm_bound^2 < 2. The returned config has every field set.
SolverConfig resolve_auto_parameters(const SamplingOperator& op, const Eigen::VectorXd& b,
                                     const SolverConfig& config);

/// Geometric continuation schedule mu_initial, mu_initial*decay, ...,
/// ending exactly at mu_final. Requires a resolved config.
std::vector<double> mu_schedule(const SolverConfig& resolved);

/// mu*||X||_* + 0.5*||A(X)-b||_2^2.
double objective_value(const SamplingOperator& op, const Eigen::VectorXd& b, const WaferMap& x, double mu);

/// Fixed-point continuation with singular value thresholding. For each mu
/// in the schedule, iterates
///     Y = X - tau * A*(A(X) - b);  X = shrink(Y, tau*mu)
/// until the relative iterate change drops below inner_tol or the
/// iteration caps are hit, warm-starting every phase from the previous
/// phase's iterate. X starts at the zero map unless x0 is given.
CompletionResult fpc_solve(const SamplingOperator& op, const Eigen::VectorXd& b, const SolverConfig& config);
CompletionResult fpc_solve(const SamplingOperator& op, const Eigen::VectorXd& b, const SolverConfig& config,
                           const WaferMap& x0);

}  // namespace wafermc
