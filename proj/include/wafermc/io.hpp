#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "wafermc/solver.hpp"
#include "wafermc/types.hpp"

namespace wafermc {

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

/// Writes content to a sibling temp file and renames it into place, so a
/// failed run never leaves a partial output file.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);

// Plain-text formats, all with a "rows cols" first line:
//   map:   rows lines of whitespace-separated decimal values
//   obs:   one "i j value" line per observation
//   types: rows lines of integer labels
// Writers emit shortest round-trip decimals; write then read reproduces
// every value exactly. Readers reject malformed content with
// "path:line[:column]" diagnostics.

WaferMap read_wafer_map(const std::filesystem::path& path);
void write_wafer_map(const WaferMap& map, const std::filesystem::path& path);

ObservationSet read_observation_set(const std::filesystem::path& path);
void write_observation_set(const ObservationSet& obs, const std::filesystem::path& path);

DeviceTypeMap read_device_type_map(const std::filesystem::path& path);
void write_device_type_map(const DeviceTypeMap& types, const std::filesystem::path& path);

/// Binary PGM (P5), one pixel per cell, linear min-max scaling to 0..255.
/// A constant map renders mid-gray (128).
void render_heatmap(const WaferMap& map, const std::filesystem::path& path);

/// Two maps side by side in one image separated by a 2-pixel white gutter,
/// scaled jointly so the panels are comparable. Row counts must match.
void render_heatmap_pair(const WaferMap& left, const WaferMap& right, const std::filesystem::path& path);

/// Provenance record for one solve, serialized as JSON. Timing lives in
/// its own subtree so that identical seeded runs compare byte-identical
/// once "timing" is dropped.
struct RunManifest {
    std::string tool_version;
    std::vector<std::string> input_paths;
    SolverConfig config;  // fully resolved
    std::optional<double> lambda;
    std::optional<double> eta;
    std::optional<double> sample_fraction;
    std::optional<std::uint64_t> seed;
    std::optional<double> relative_error;
    int total_iterations = 0;
    int phases = 0;
    std::string termination;  // "converged" | "max-iters"
    bool degenerate_problem = false;
    double wall_clock_seconds = 0.0;
};

std::string manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& text);

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);

}  // namespace wafermc
