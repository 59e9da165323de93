#include "wafermc/problems.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "wafermc/rng.hpp"

namespace wafermc {

namespace {

void require_same_grid(int r1, int c1, int r2, int c2, const char* a, const char* b) {
    if (r1 != r2 || c1 != c2) {
        throw ValidationError(std::string(a) + " dimensions " + std::to_string(r1) + "x" + std::to_string(c1) +
                              " do not match " + b + " dimensions " + std::to_string(r2) + "x" +
                              std::to_string(c2));
    }
}

}  // namespace

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
    if (spec.rows < 1 || spec.cols < 1) {
        throw ValidationError("synthetic grid dimensions must be positive");
    }
    if (spec.rank < 1 || spec.rank > std::min(spec.rows, spec.cols)) {
        throw ValidationError("synthetic rank must lie in [1, min(rows, cols)]");
    }
    if (spec.noise_sigma < 0.0 || !std::isfinite(spec.noise_sigma)) {
        throw ValidationError("noise_sigma must be non-negative and finite");
    }
    if (spec.type_map) {
        require_same_grid(spec.type_map->rows(), spec.type_map->cols(), spec.rows, spec.cols, "type map",
                          "synthetic grid");
        if (static_cast<int>(spec.type_offsets.size()) < spec.type_map->num_types()) {
            throw ValidationError("type_offsets covers " + std::to_string(spec.type_offsets.size()) +
                                  " types but the type map has " + std::to_string(spec.type_map->num_types()));
        }
        for (double o : spec.type_offsets) {
            if (!std::isfinite(o)) throw ValidationError("non-finite type offset");
        }
    }

    Rng rng(spec.seed);
    const int m = spec.rows, n = spec.cols, r = spec.rank;
    // Draw order is pinned (L row-major, then R row-major, then noise
    // row-major) so a seed reproduces the same map exactly.
    Eigen::MatrixXd left(m, r);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < r; ++k) left(i, k) = rng.gaussian();
    Eigen::MatrixXd right(n, r);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < r; ++k) right(j, k) = rng.gaussian();

    Eigen::MatrixXd map = left * right.transpose();
    const double rms = std::sqrt(map.squaredNorm() / (static_cast<double>(m) * n));
    if (rms > 0.0) map /= rms;

    if (spec.type_map) {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) map(i, j) += spec.type_offsets[spec.type_map->label(i, j)];
    }
    if (spec.noise_sigma > 0.0) {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) map(i, j) += spec.noise_sigma * rng.gaussian();
    }
    return {map_from_matrix(map), spec.type_map, spec.rank};
}

DeviceTypeMap generate_type_map(int rows, int cols, int num_types, std::uint64_t seed) {
    if (rows < 1 || cols < 1) throw ValidationError("type map dimensions must be positive");
    if (num_types < 1) throw ValidationError("num_types must be at least 1");
    Rng rng(seed);
    std::vector<int> labels(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
    for (std::size_t k = 0; k < labels.size(); ++k) {
        labels[k] = static_cast<int>(rng.below(static_cast<std::uint64_t>(num_types)));
    }
    return DeviceTypeMap(rows, cols, std::move(labels));
}

ObservationSet sample_uniform(const WaferMap& m, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0) || !(fraction <= 1.0)) {
        throw ValidationError("sampling fraction must lie in (0, 1]");
    }
    const std::int64_t cells = static_cast<std::int64_t>(m.rows()) * m.cols();
    const std::int64_t count = std::llround(fraction * static_cast<double>(cells));

    // Partial Fisher-Yates over all cell indices, then row-major order.
    std::vector<std::int64_t> idx(static_cast<std::size_t>(cells));
    std::iota(idx.begin(), idx.end(), std::int64_t{0});
    Rng rng(seed);
    for (std::int64_t t = 0; t < count; ++t) {
        const std::int64_t pick = t + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(cells - t)));
        std::swap(idx[static_cast<std::size_t>(t)], idx[static_cast<std::size_t>(pick)]);
    }
    idx.resize(static_cast<std::size_t>(count));
    std::sort(idx.begin(), idx.end());

    std::vector<Observation> entries;
    entries.reserve(idx.size());
    for (std::int64_t cell : idx) {
        const int i = static_cast<int>(cell / m.cols());
        const int j = static_cast<int>(cell % m.cols());
        entries.push_back({i, j, m(i, j)});
    }
    return ObservationSet(m.rows(), m.cols(), std::move(entries), ObservationRole::PrimaryOmega);
}

TypeAverages compute_type_averages(const ObservationSet& obs, const DeviceTypeMap& types) {
    require_same_grid(obs.rows(), obs.cols(), types.rows(), types.cols(), "observation set", "type map");
    std::vector<double> sums(static_cast<std::size_t>(types.num_types()), 0.0);
    std::vector<std::size_t> counts(static_cast<std::size_t>(types.num_types()), 0);
    for (const Observation& e : obs.entries()) {
        const auto t = static_cast<std::size_t>(types.label(e.row, e.col));
        sums[t] += e.value;
        counts[t] += 1;
    }
    TypeAverages out;
    out.mean_by_type.resize(sums.size());
    for (std::size_t t = 0; t < sums.size(); ++t) {
        if (counts[t] > 0) {
            out.mean_by_type[t] = TypeAverages::Stat{sums[t] / static_cast<double>(counts[t]), counts[t]};
        }
    }
    return out;
}

ObservationSet build_pseudo_targets(const ObservationSet& obs, const DeviceTypeMap& types,
                                    const TypeAverages& averages) {
    require_same_grid(obs.rows(), obs.cols(), types.rows(), types.cols(), "observation set", "type map");
    if (averages.mean_by_type.size() != static_cast<std::size_t>(types.num_types())) {
        throw ValidationError("type averages cover " + std::to_string(averages.mean_by_type.size()) +
                              " types but the type map has " + std::to_string(types.num_types()));
    }
    std::vector<char> observed(static_cast<std::size_t>(obs.rows()) * static_cast<std::size_t>(obs.cols()), 0);
    for (const Observation& e : obs.entries()) {
        observed[static_cast<std::size_t>(e.row) * obs.cols() + e.col] = 1;
    }
    std::vector<Observation> entries;
    for (int i = 0; i < obs.rows(); ++i) {
        for (int j = 0; j < obs.cols(); ++j) {
            if (observed[static_cast<std::size_t>(i) * obs.cols() + j]) continue;
            const auto& stat = averages.mean_by_type[static_cast<std::size_t>(types.label(i, j))];
            if (stat) entries.push_back({i, j, stat->mean});
        }
    }
    return ObservationSet(obs.rows(), obs.cols(), std::move(entries), ObservationRole::PseudoOmegaPrime);
}

double relative_error(const WaferMap& x, const WaferMap& reference) {
    require_same_grid(x.rows(), x.cols(), reference.rows(), reference.cols(), "estimate", "reference");
    double diff = 0.0, ref = 0.0;
    for (std::size_t k = 0; k < x.values().size(); ++k) {
        const double d = x.values()[k] - reference.values()[k];
        diff += d * d;
        ref += reference.values()[k] * reference.values()[k];
    }
    if (ref <= 0.0) {
        throw ValidationError("relative error undefined for a zero-norm reference map");
    }
    return std::sqrt(diff) / std::sqrt(ref);
}

double nuclear_norm(const WaferMap& x) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(to_matrix(x));
    return svd.singularValues().sum();
}

double candes_recht_bound_raw(const SampleBoundParams& p) {
    if (p.r < 1 || p.m < p.r || p.n < p.m) {
        throw ValidationError("sample bound requires n >= m >= r >= 1");
    }
    if (!(p.c > 0.0) || !std::isfinite(p.c)) {
        throw ValidationError("sample bound constant C must be positive and finite");
    }
    return p.c * std::pow(static_cast<double>(p.n), 1.25) * static_cast<double>(p.r) *
           std::log(static_cast<double>(p.n));
}

long long candes_recht_bound(const SampleBoundParams& p) {
    return static_cast<long long>(std::ceil(candes_recht_bound_raw(p)));
}

CompletionResult solve_completion(const ObservationSet& obs, double lambda, SolverConfig config) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw ValidationError("lambda must be positive and finite");
    }
    if (!config.mu_final) config.mu_final = 1.0 / lambda;
    SampledProblem problem = build_mask_operator(obs);
    return fpc_solve(problem.op, problem.b, config);
}

CompletionResult solve_type_regularized(const ObservationSet& obs, const DeviceTypeMap& types, double lambda,
                                        double eta, SolverConfig config) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw ValidationError("lambda must be positive and finite");
    }
    if (eta < 0.0 || !std::isfinite(eta)) {
        throw ValidationError("eta must be non-negative and finite");
    }
    if (!config.mu_final) config.mu_final = 1.0 / lambda;
    const TypeAverages averages = compute_type_averages(obs, types);
    const ObservationSet pseudo = build_pseudo_targets(obs, types, averages);
    SampledProblem problem = build_stacked_operator(obs, pseudo, lambda, eta);
    return fpc_solve(problem.op, problem.b, config);
}

}  // namespace wafermc
