#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "onebit/experiment.hpp"
#include "onebit/fusion.hpp"
#include "onebit/model.hpp"
#include "onebit/trigger.hpp"

namespace onebit {

/// Locale-free, 17 significant digits.
std::string format_real(double v);

/// Columns: t, Y_1..Y_K, B, A, M.
void write_paths_csv(const std::filesystem::path& file, const SensorPaths& paths, const PathStats& stats);

/// Columns: sensor, kind, time, bit, overshoot. Per sensor in time order, B before A on ties.
void write_messages_csv(const std::filesystem::path& file, const MessageLog& log);

struct EstimateRecord {
  std::uint64_t replication = 0;
  double gamma_or_t = 0.0;
  EstimateResult result;
};

/// Columns: replication, estimator, gamma_or_t, value, stop_time, info_used, messages_used.
void write_estimates_csv(const std::filesystem::path& file, const std::vector<EstimateRecord>& rows);

void write_rows_csv(const std::filesystem::path& file, const std::vector<ReplicationRow>& rows);
void write_aggregates_csv(const std::filesystem::path& file, const std::vector<Aggregate>& aggregates);

/// Writes <stem>_rows.csv, <stem>_aggregates.csv and <stem>_summary.json into dir.
/// Returns the files written.
std::vector<std::filesystem::path> write_report(const std::filesystem::path& dir, const std::string& stem,
                                                const ExperimentReport& report, const std::string& config_text);

/// "<name>_<16 hex digits of the config hash>_<seed>".
std::string output_stem(const std::string& name, const std::string& config_text, std::uint64_t seed);

/// Generic table writer used by suites and the density subcommand.
void write_table_csv(const std::filesystem::path& file, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

}  // namespace onebit
