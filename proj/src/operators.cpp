#include "wafermc/operators.hpp"

#include <cmath>
#include <unordered_set>
#include <utility>

namespace wafermc {

namespace {

std::string coord(int i, int j) {
    return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

}  // namespace

SamplingOperator::SamplingOperator(int rows, int cols, std::vector<SamplingTerm> terms)
    : rows_(rows), cols_(cols), terms_(std::move(terms)), norm_bound_(0.0) {
    if (rows_ < 1 || cols_ < 1) {
        throw ValidationError("operator domain dimensions must be positive, got " + std::to_string(rows_) + "x" +
                              std::to_string(cols_));
    }
    std::unordered_set<std::int64_t> seen;
    seen.reserve(terms_.size());
    for (const SamplingTerm& t : terms_) {
        if (t.row < 0 || t.row >= rows_ || t.col < 0 || t.col >= cols_) {
            throw ValidationError("operator term " + coord(t.row, t.col) + " out of bounds for " +
                                  std::to_string(rows_) + "x" + std::to_string(cols_) + " domain");
        }
        if (!(t.weight > 0.0) || !std::isfinite(t.weight)) {
            throw ValidationError("operator weight at " + coord(t.row, t.col) + " must be positive and finite");
        }
        const std::int64_t key = static_cast<std::int64_t>(t.row) * cols_ + t.col;
        if (!seen.insert(key).second) {
            throw ValidationError("duplicate operator term at " + coord(t.row, t.col));
        }
        norm_bound_ = std::max(norm_bound_, t.weight);
    }
}

Eigen::VectorXd SamplingOperator::apply(const WaferMap& x) const {
    if (x.rows() != rows_ || x.cols() != cols_) {
        throw ValidationError("map dimensions " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                              " do not match operator domain " + std::to_string(rows_) + "x" +
                              std::to_string(cols_));
    }
    Eigen::VectorXd y(static_cast<Eigen::Index>(terms_.size()));
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        const SamplingTerm& t = terms_[k];
        y[static_cast<Eigen::Index>(k)] = t.weight * x(t.row, t.col);
    }
    return y;
}

Eigen::VectorXd SamplingOperator::apply(const Eigen::MatrixXd& x) const {
    if (x.rows() != rows_ || x.cols() != cols_) {
        throw ValidationError("matrix dimensions do not match operator domain");
    }
    Eigen::VectorXd y(static_cast<Eigen::Index>(terms_.size()));
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        const SamplingTerm& t = terms_[k];
        y[static_cast<Eigen::Index>(k)] = t.weight * x(t.row, t.col);
    }
    return y;
}

WaferMap SamplingOperator::apply_adjoint(const Eigen::VectorXd& y) const {
    if (static_cast<std::size_t>(y.size()) != terms_.size()) {
        throw ValidationError("vector length " + std::to_string(y.size()) + " does not match operator term count " +
                              std::to_string(terms_.size()));
    }
    std::vector<double> values(static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_), 0.0);
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        const SamplingTerm& t = terms_[k];
        values[static_cast<std::size_t>(t.row) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(t.col)] =
            t.weight * y[static_cast<Eigen::Index>(k)];
    }
    return WaferMap(rows_, cols_, std::move(values));
}

Eigen::MatrixXd SamplingOperator::apply_adjoint_matrix(const Eigen::VectorXd& y) const {
    if (static_cast<std::size_t>(y.size()) != terms_.size()) {
        throw ValidationError("vector length does not match operator term count");
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows_, cols_);
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        const SamplingTerm& t = terms_[k];
        m(t.row, t.col) = t.weight * y[static_cast<Eigen::Index>(k)];
    }
    return m;
}

SampledProblem build_mask_operator(const ObservationSet& obs) {
    std::vector<SamplingTerm> terms;
    terms.reserve(obs.size());
    Eigen::VectorXd b(static_cast<Eigen::Index>(obs.size()));
    for (std::size_t k = 0; k < obs.size(); ++k) {
        const Observation& e = obs.entries()[k];
        terms.push_back({e.row, e.col, 1.0});
        b[static_cast<Eigen::Index>(k)] = e.value;
    }
    return {SamplingOperator(obs.rows(), obs.cols(), std::move(terms)), std::move(b)};
}

SampledProblem build_stacked_operator(const ObservationSet& obs, const ObservationSet& pseudo, double lambda,
                                      double eta) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw ValidationError("lambda must be positive and finite");
    }
    if (eta < 0.0 || !std::isfinite(eta)) {
        throw ValidationError("eta must be non-negative and finite");
    }
    if (obs.rows() != pseudo.rows() || obs.cols() != pseudo.cols()) {
        throw ValidationError("observed and pseudo sets have different grid dimensions");
    }
    std::unordered_set<std::int64_t> observed;
    observed.reserve(obs.size());
    for (const Observation& e : obs.entries()) {
        observed.insert(static_cast<std::int64_t>(e.row) * obs.cols() + e.col);
    }
    for (const Observation& e : pseudo.entries()) {
        if (observed.count(static_cast<std::int64_t>(e.row) * obs.cols() + e.col)) {
            throw ValidationError("pseudo set overlaps observed set at " + coord(e.row, e.col));
        }
    }

    const std::size_t extra = eta > 0.0 ? pseudo.size() : 0;
    std::vector<SamplingTerm> terms;
    terms.reserve(obs.size() + extra);
    Eigen::VectorXd b(static_cast<Eigen::Index>(obs.size() + extra));
    for (std::size_t k = 0; k < obs.size(); ++k) {
        const Observation& e = obs.entries()[k];
        terms.push_back({e.row, e.col, 1.0});
        b[static_cast<Eigen::Index>(k)] = e.value;
    }
    if (eta > 0.0) {
        const double w = std::sqrt(eta / lambda);
        for (std::size_t k = 0; k < pseudo.size(); ++k) {
            const Observation& e = pseudo.entries()[k];
            terms.push_back({e.row, e.col, w});
            b[static_cast<Eigen::Index>(obs.size() + k)] = w * e.value;
        }
    }
    return {SamplingOperator(obs.rows(), obs.cols(), std::move(terms)), std::move(b)};
}

}  // namespace wafermc
