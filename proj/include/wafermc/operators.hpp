#pragma once

#include <Eigen/Core>
#include <vector>

#include "wafermc/types.hpp"

namespace wafermc {

/// One output component of a sampling operator: y_k = weight * X(row, col).
struct SamplingTerm {
    int row = 0;
    int col = 0;
    double weight = 1.0;
};

/// Entry-sampling linear map from an m x n grid to a vector, one component
/// per term. Term coordinates are distinct, so the operator's rows are
/// orthogonal and its operator norm equals the largest weight exactly;
/// that value is exposed as norm_bound(). Immutable; apply/apply_adjoint
/// are pure.
class SamplingOperator {
public:
    SamplingOperator(int rows, int cols, std::vector<SamplingTerm> terms);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return terms_.size(); }
    const std::vector<SamplingTerm>& terms() const { return terms_; }
    double norm_bound() const { return norm_bound_; }

    /// y_k = weight_k * X(i_k, j_k).
    Eigen::VectorXd apply(const WaferMap& x) const;
    Eigen::VectorXd apply(const Eigen::MatrixXd& x) const;

    /// Dense scatter: zero map except entry (i_k, j_k) = weight_k * y_k.
    WaferMap apply_adjoint(const Eigen::VectorXd& y) const;
    Eigen::MatrixXd apply_adjoint_matrix(const Eigen::VectorXd& y) const;

private:
    int rows_;
    int cols_;
    std::vector<SamplingTerm> terms_;
    double norm_bound_;
};

/// A sampling operator together with its data vector b.
struct SampledProblem {
    SamplingOperator op;
    Eigen::VectorXd b;
};

/// Realizes the plain data term over the observed set: one unit-weight term
/// per observation, b_k = observed value, in entry order.
SampledProblem build_mask_operator(const ObservationSet& obs);

/// Stacks the observed set (unit weight) with the pseudo-target set at
/// weight sqrt(eta/lambda), scaling the pseudo targets into b by the same
/// weight. With mu = 1/lambda, lambda times the resulting quadratic-form
/// objective reproduces the type-regularized objective exactly. eta = 0
/// omits the pseudo terms entirely.
SampledProblem build_stacked_operator(const ObservationSet& obs, const ObservationSet& pseudo,
                                      double lambda, double eta);

}  // namespace wafermc
