#pragma once

#include <cstdint>
#include <optional>

#include "wafermc/solver.hpp"
#include "wafermc/types.hpp"

namespace wafermc {

/// Recipe for a synthetic ground-truth map: a rank-r product of seeded
/// Gaussian factors scaled to unit RMS, plus optional per-type additive
/// offsets, plus optional white noise (std noise_sigma, in units of the
/// low-rank part's RMS). Deterministic per seed.
struct SyntheticSpec {
    int rows = 0;
    int cols = 0;
    int rank = 1;
    double noise_sigma = 0.0;
    std::optional<DeviceTypeMap> type_map;
    std::vector<double> type_offsets;  // indexed by type label when type_map is set
    std::uint64_t seed = 0;
};

struct SyntheticData {
    WaferMap map;
    std::optional<DeviceTypeMap> types;
    int true_rank;  // rank of the low-rank part, before offsets and noise
};

SyntheticData generate_synthetic(const SyntheticSpec& spec);

/// Random per-cell labels in [0, num_types), seeded.
DeviceTypeMap generate_type_map(int rows, int cols, int num_types, std::uint64_t seed);

/// Draws round(fraction * m * n) distinct entries uniformly without
/// replacement, values copied from the map, entries in row-major order.
ObservationSet sample_uniform(const WaferMap& m, double fraction, std::uint64_t seed);

/// Arithmetic mean of observed values per type label; types without any
/// observed entry are marked absent.
TypeAverages compute_type_averages(const ObservationSet& obs, const DeviceTypeMap& types);

/// Pseudo-target set over every unobserved cell whose type has at least
/// one observed sibling; each value is that type's observed mean.
/// Disjoint from the observed set by construction.
ObservationSet build_pseudo_targets(const ObservationSet& obs, const DeviceTypeMap& types,
                                    const TypeAverages& averages);

/// ||X - M||_F / ||M||_F. Rejects a zero-norm reference.
double relative_error(const WaferMap& x, const WaferMap& reference);

/// Sum of singular values.
double nuclear_norm(const WaferMap& x);

/// Inputs to the sample-count estimate C * n^(5/4) * r * ln(n); requires
/// n >= m >= r >= 1 and C > 0. Diagnostic only.
struct SampleBoundParams {
    int m = 1;
    int n = 1;
    int r = 1;
    double c = 1.0;
};

double candes_recht_bound_raw(const SampleBoundParams& p);
long long candes_recht_bound(const SampleBoundParams& p);

/// Penalized completion over the observed entries: builds the mask
/// operator and runs the continuation solver with mu_final defaulting
/// to 1/lambda.
CompletionResult solve_completion(const ObservationSet& obs, double lambda, SolverConfig config = {});

/// Type-regularized completion: observed data term at weight lambda plus
/// pseudo targets (per-type observed means over eligible unobserved cells)
/// at weight eta, reduced to the stacked operator form and solved with
/// mu_final defaulting to 1/lambda. eta = 0 reduces to solve_completion.
CompletionResult solve_type_regularized(const ObservationSet& obs, const DeviceTypeMap& types, double lambda,
                                        double eta, SolverConfig config = {});

}  // namespace wafermc
