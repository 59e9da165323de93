#include "wafermc/solver.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <string>

namespace wafermc {

namespace {

struct MatrixShrink {
    Eigen::MatrixXd x;
    Eigen::VectorXd sigmas_before;
    Eigen::VectorXd sigmas_after;
};

MatrixShrink shrink_matrix(const Eigen::MatrixXd& y, double theta) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
    MatrixShrink out;
    out.sigmas_before = svd.singularValues();
    out.sigmas_after = (out.sigmas_before.array() - theta).max(0.0);
    out.x = svd.matrixU() * out.sigmas_after.asDiagonal() * svd.matrixV().transpose();
    return out;
}

int shrunk_rank(const Eigen::VectorXd& sigmas_after) {
    return static_cast<int>((sigmas_after.array() > 0.0).count());
}

void require_matching_b(const SamplingOperator& op, const Eigen::VectorXd& b) {
    if (static_cast<std::size_t>(b.size()) != op.size()) {
        throw ValidationError("data vector length " + std::to_string(b.size()) +
                              " does not match operator term count " + std::to_string(op.size()));
    }
}

}  // namespace

void validate_config(const SolverConfig& config) {
    auto positive = [](const std::optional<double>& v, const char* name) {
        if (v && (!(*v > 0.0) || !std::isfinite(*v))) {
            throw ValidationError(std::string(name) + " must be positive and finite");
        }
    };
    positive(config.mu_final, "mu_final");
    positive(config.mu_initial, "mu_initial");
    positive(config.tau, "tau");
    if (!(config.mu_decay > 0.0) || !(config.mu_decay < 1.0)) {
        throw ValidationError("mu_decay must lie in (0, 1)");
    }
    if (!(config.inner_tol > 0.0) || !std::isfinite(config.inner_tol)) {
        throw ValidationError("inner_tol must be positive and finite");
    }
    if (config.max_inner_iters < 1) throw ValidationError("max_inner_iters must be at least 1");
    if (config.max_total_iters < 1) throw ValidationError("max_total_iters must be at least 1");
    if (config.mu_final && config.mu_initial && *config.mu_final > *config.mu_initial) {
        throw ValidationError("mu_final must not exceed mu_initial");
    }
}

ShrinkResult shrink_singular_values(const WaferMap& y, double theta) {
    if (!(theta >= 0.0) || !std::isfinite(theta)) {
        throw ValidationError("shrinkage threshold must be non-negative and finite");
    }
    MatrixShrink s = shrink_matrix(to_matrix(y), theta);
    return {map_from_matrix(s.x), std::move(s.sigmas_before), std::move(s.sigmas_after)};
}

SolverConfig resolve_auto_parameters(const SamplingOperator& op, const Eigen::VectorXd& b,
                                     const SolverConfig& config) {
    validate_config(config);
    require_matching_b(op, b);
    if (!config.mu_final) {
        throw ValidationError("mu_final must be set before solving");
    }
    SolverConfig out = config;

    const double nb = op.norm_bound();
    if (out.tau) {
        if (*out.tau * nb * nb >= 2.0) {
            throw ValidationError("tau violates step-size stability: tau * norm_bound^2 must be < 2");
        }
    } else {
        // 1/L for the data-term gradient; the operator's rows are orthogonal
        // so L = norm_bound^2. An empty operator has no data term and any
        // step works.
        out.tau = nb > 0.0 ? 1.0 / (nb * nb) : 1.0;
    }

    if (!out.mu_initial) {
        double mu1 = *out.mu_final;
        if (op.size() > 0) {
            Eigen::BDCSVD<Eigen::MatrixXd> svd(op.apply_adjoint_matrix(b));
            const double sigma_max = svd.singularValues()(0);
            if (!std::isfinite(sigma_max)) {
                throw NumericalError("singular values of A*(b) overflow; rescale the input data");
            }
            mu1 = 0.25 * sigma_max;
        }
        // A start below mu_final collapses the schedule to a single phase.
        out.mu_initial = std::max(mu1, *out.mu_final);
    }
    return out;
}

std::vector<double> mu_schedule(const SolverConfig& resolved) {
    if (!resolved.mu_initial || !resolved.mu_final) {
        throw ValidationError("mu_schedule requires a resolved config");
    }
    validate_config(resolved);
    std::vector<double> schedule;
    double mu = *resolved.mu_initial;
    while (mu > *resolved.mu_final) {
        schedule.push_back(mu);
        mu *= resolved.mu_decay;
    }
    schedule.push_back(*resolved.mu_final);
    return schedule;
}

double objective_value(const SamplingOperator& op, const Eigen::VectorXd& b, const WaferMap& x, double mu) {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw ValidationError("mu must be positive and finite");
    }
    require_matching_b(op, b);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(to_matrix(x));
    const double nuclear = svd.singularValues().sum();
    const double residual = (op.apply(x) - b).squaredNorm();
    return mu * nuclear + 0.5 * residual;
}

CompletionResult fpc_solve(const SamplingOperator& op, const Eigen::VectorXd& b, const SolverConfig& config) {
    return fpc_solve(op, b, config, WaferMap::zero(op.rows(), op.cols()));
}

CompletionResult fpc_solve(const SamplingOperator& op, const Eigen::VectorXd& b, const SolverConfig& config,
                           const WaferMap& x0) {
    if (x0.rows() != op.rows() || x0.cols() != op.cols()) {
        throw ValidationError("initial iterate dimensions do not match operator domain");
    }
    SolverConfig resolved = resolve_auto_parameters(op, b, config);
    SolverTrace trace;

    if (op.size() == 0) {
        // No data term: mu*||X||_* alone is minimized by the zero map.
        trace.degenerate_problem = true;
        trace.termination = Termination::Converged;
        return {WaferMap::zero(op.rows(), op.cols()), std::move(trace), std::move(resolved)};
    }

    const double tau = *resolved.tau;
    const std::vector<double> schedule = mu_schedule(resolved);
    trace.phases = static_cast<int>(schedule.size());

    Eigen::MatrixXd x = to_matrix(x0);
    Eigen::VectorXd residual = op.apply(x) - b;

    bool budget_exhausted = false;
    bool last_phase_converged = false;
    for (double mu : schedule) {
        const double threshold = tau * mu;
        last_phase_converged = false;
        for (int k = 1; k <= resolved.max_inner_iters; ++k) {
            Eigen::MatrixXd y = x - tau * op.apply_adjoint_matrix(residual);
            if (!y.allFinite()) {
                throw NumericalError("non-finite gradient iterate at total iteration " +
                                     std::to_string(trace.total_iterations + 1) + " (mu=" + std::to_string(mu) +
                                     "); step size too large for this data");
            }
            MatrixShrink s = shrink_matrix(y, threshold);
            if (!s.x.allFinite()) {
                throw NumericalError("non-finite shrinkage output at total iteration " +
                                     std::to_string(trace.total_iterations + 1) + " (mu=" + std::to_string(mu) +
                                     ")");
            }
            const double change = (s.x - x).norm();
            const double scale = std::max(1.0, x.norm());
            x = std::move(s.x);
            residual = op.apply(x) - b;

            TraceRecord rec;
            rec.mu = mu;
            rec.inner_iteration = k;
            rec.residual_norm = residual.norm();
            rec.objective = mu * s.sigmas_after.sum() + 0.5 * residual.squaredNorm();
            rec.iterate_change = change;
            rec.rank = shrunk_rank(s.sigmas_after);
            trace.records.push_back(rec);
            ++trace.total_iterations;

            if (change / scale < resolved.inner_tol) {
                last_phase_converged = true;
                break;
            }
            if (trace.total_iterations >= resolved.max_total_iters) {
                budget_exhausted = true;
                break;
            }
        }
        if (budget_exhausted) break;
    }

    trace.termination =
        (budget_exhausted || !last_phase_converged) ? Termination::MaxIterations : Termination::Converged;
    return {map_from_matrix(x), std::move(trace), std::move(resolved)};
}

}  // namespace wafermc
