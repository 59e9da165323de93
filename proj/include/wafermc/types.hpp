#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wafermc/errors.hpp"

namespace wafermc {

/// Dense m x n grid of real-valued measurements, row-major storage.
/// Construction rejects empty grids, size mismatches and non-finite
/// values; instances are immutable afterwards and safe to share across
/// threads.
class WaferMap {
public:
    WaferMap(int rows, int cols, std::vector<double> values, std::string unit_label = {});

    static WaferMap zero(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const std::vector<double>& values() const { return values_; }
    const std::string& unit_label() const { return unit_label_; }

    double operator()(int i, int j) const {
        return values_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j)];
    }

    double frobenius_norm() const;

private:
    int rows_;
    int cols_;
    std::vector<double> values_;
    std::string unit_label_;
};

Eigen::MatrixXd to_matrix(const WaferMap& map);
WaferMap map_from_matrix(const Eigen::MatrixXd& m, std::string unit_label = {});

/// One sampled grid entry.
struct Observation {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

enum class ObservationRole { PrimaryOmega, PseudoOmegaPrime };

/// Validates a raw entry list against a grid shape: indices in bounds,
/// no duplicate (i, j) pairs, finite values. Shared by ObservationSet
/// construction and validate_pairing; errors name the offending
/// coordinates.
void validate_entries(int rows, int cols, std::span<const Observation> entries);

/// A set of sampled entries over an m x n grid, tagged as the primary
/// observed set or as a pseudo-target set over unobserved cells.
/// Immutable after construction.
class ObservationSet {
public:
    ObservationSet(int rows, int cols, std::vector<Observation> entries,
                   ObservationRole role = ObservationRole::PrimaryOmega);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const std::vector<Observation>& entries() const { return entries_; }
    ObservationRole role() const { return role_; }
    std::size_t size() const { return entries_.size(); }

private:
    int rows_;
    int cols_;
    std::vector<Observation> entries_;
    ObservationRole role_;
};

/// Integer type label per grid cell (layout pattern / device type).
/// Labels are non-negative; the number of types is max label + 1.
class DeviceTypeMap {
public:
    DeviceTypeMap(int rows, int cols, std::vector<int> labels);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const std::vector<int>& labels() const { return labels_; }
    int num_types() const { return num_types_; }

    int label(int i, int j) const {
        return labels_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j)];
    }

private:
    int rows_;
    int cols_;
    std::vector<int> labels_;
    int num_types_;
};

/// Per-type mean of observed values. A type with no observed entries is
/// absent (nullopt), not zero.
struct TypeAverages {
    struct Stat {
        double mean = 0.0;
        std::size_t count = 0;  // >= 1 whenever present
    };
    std::vector<std::optional<Stat>> mean_by_type;  // indexed by type label
};

/// Checks that an observation set is usable with a map: equal grid
/// dimensions and all entry invariants against the map's shape.
void validate_pairing(const WaferMap& map, const ObservationSet& obs);

}  // namespace wafermc
