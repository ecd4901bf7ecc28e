#pragma once

// CSV, SVG and run-manifest output for figure runs.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "squeezeamp/experiments.hpp"

namespace squeezeamp {

inline constexpr std::string_view kCsvHeader = "sweep_x,N_or_lambda,mean_infidelity,stderr,samples,leakage_max";

/// Header plus one LF-terminated row per record; doubles use %.17g so the
/// text round-trips exactly, and the Trotter-limit series is written as inf.
std::string format_csv(const std::vector<ResultRecord>& records);
std::vector<ResultRecord> parse_csv(std::string_view text);

/// Throws on empty records (leaving no file behind) or an unwritable path.
void emit_csv(const std::vector<ResultRecord>& records, const std::filesystem::path& path);

struct PlotLabels {
  std::string title;
  std::string x_label;
  std::string series_label;  // "lambda2" or "N"
  bool log_x = false;
};

/// Static SVG line chart, log-scale y axis, one polyline per series in order
/// of first appearance. Non-positive infidelities are drawn at the axis floor.
std::string render_svg(const std::vector<ResultRecord>& records, const PlotLabels& labels);
void emit_plot(const std::vector<ResultRecord>& records, const std::filesystem::path& path,
               const PlotLabels& labels);
PlotLabels plot_labels(const ExperimentConfig& cfg);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
std::string config_hash(const ExperimentConfig& cfg);

/// JSON manifest: resolved config, its hash, seed, versions, calibrations,
/// timing and the names of the files written next to it.
std::string make_manifest(const RunResult& run, const std::vector<std::string>& files);

struct OutputPaths {
  std::filesystem::path csv;
  std::filesystem::path svg;
  std::filesystem::path manifest;
};
/// Writes <figure>.csv, <figure>.svg and <figure>.manifest.json into `dir`.
OutputPaths write_outputs(const RunResult& run, const std::filesystem::path& dir);

}  // namespace squeezeamp
