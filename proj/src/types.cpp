#include "wafermc/types.hpp"

#include <cmath>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace wafermc {

namespace {

std::string coord(int i, int j) {
    return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

std::string shape(int rows, int cols) {
    return std::to_string(rows) + "x" + std::to_string(cols);
}

void check_shape(int rows, int cols, const char* what) {
    if (rows < 1 || cols < 1) {
        throw ValidationError(std::string(what) + " dimensions must be positive, got " + shape(rows, cols));
    }
}

}  // namespace

WaferMap::WaferMap(int rows, int cols, std::vector<double> values, std::string unit_label)
    : rows_(rows), cols_(cols), values_(std::move(values)), unit_label_(std::move(unit_label)) {
    check_shape(rows_, cols_, "map");
    const std::size_t expected = static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_);
    if (values_.size() != expected) {
        throw ValidationError("map value count " + std::to_string(values_.size()) + " does not match " +
                              shape(rows_, cols_) + " grid (" + std::to_string(expected) + " cells)");
    }
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!std::isfinite(values_[k])) {
            const int i = static_cast<int>(k / static_cast<std::size_t>(cols_));
            const int j = static_cast<int>(k % static_cast<std::size_t>(cols_));
            throw ValidationError("non-finite map value at " + coord(i, j));
        }
    }
}

WaferMap WaferMap::zero(int rows, int cols) {
    check_shape(rows, cols, "map");
    return WaferMap(rows, cols,
                    std::vector<double>(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0));
}

double WaferMap::frobenius_norm() const {
    double sum = 0.0;
    for (double v : values_) sum += v * v;
    return std::sqrt(sum);
}

Eigen::MatrixXd to_matrix(const WaferMap& map) {
    Eigen::MatrixXd m(map.rows(), map.cols());
    for (int i = 0; i < map.rows(); ++i)
        for (int j = 0; j < map.cols(); ++j) m(i, j) = map(i, j);
    return m;
}

WaferMap map_from_matrix(const Eigen::MatrixXd& m, std::string unit_label) {
    std::vector<double> values(static_cast<std::size_t>(m.rows()) * static_cast<std::size_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            values[static_cast<std::size_t>(i) * static_cast<std::size_t>(m.cols()) + static_cast<std::size_t>(j)] =
                m(i, j);
    return WaferMap(static_cast<int>(m.rows()), static_cast<int>(m.cols()), std::move(values),
                    std::move(unit_label));
}

void validate_entries(int rows, int cols, std::span<const Observation> entries) {
    check_shape(rows, cols, "grid");
    std::unordered_set<std::int64_t> seen;
    seen.reserve(entries.size());
    for (const Observation& e : entries) {
        if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols) {
            throw ValidationError("observation index " + coord(e.row, e.col) + " out of bounds for " +
                                  shape(rows, cols) + " grid");
        }
        if (!std::isfinite(e.value)) {
            throw ValidationError("non-finite observation value at " + coord(e.row, e.col));
        }
        const std::int64_t key = static_cast<std::int64_t>(e.row) * cols + e.col;
        if (!seen.insert(key).second) {
            throw ValidationError("duplicate observation index " + coord(e.row, e.col));
        }
    }
}

ObservationSet::ObservationSet(int rows, int cols, std::vector<Observation> entries, ObservationRole role)
    : rows_(rows), cols_(cols), entries_(std::move(entries)), role_(role) {
    validate_entries(rows_, cols_, entries_);
}

DeviceTypeMap::DeviceTypeMap(int rows, int cols, std::vector<int> labels)
    : rows_(rows), cols_(cols), labels_(std::move(labels)) {
    check_shape(rows_, cols_, "type map");
    const std::size_t expected = static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_);
    if (labels_.size() != expected) {
        throw ValidationError("type map label count " + std::to_string(labels_.size()) + " does not match " +
                              shape(rows_, cols_) + " grid");
    }
    int max_label = 0;
    for (std::size_t k = 0; k < labels_.size(); ++k) {
        if (labels_[k] < 0) {
            const int i = static_cast<int>(k / static_cast<std::size_t>(cols_));
            const int j = static_cast<int>(k % static_cast<std::size_t>(cols_));
            throw ValidationError("negative type label at " + coord(i, j));
        }
        max_label = std::max(max_label, labels_[k]);
    }
    num_types_ = max_label + 1;
}

void validate_pairing(const WaferMap& map, const ObservationSet& obs) {
    if (map.rows() != obs.rows() || map.cols() != obs.cols()) {
        throw ValidationError("observation set dimensions " + shape(obs.rows(), obs.cols()) +
                              " do not match map dimensions " + shape(map.rows(), map.cols()));
    }
    validate_entries(map.rows(), map.cols(), obs.entries());
}

}  // namespace wafermc
