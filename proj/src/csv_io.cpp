#include "onebit/csv_io.hpp"

#include <fstream>

#include <fmt/format.h>
#include <json.hpp>

#include "onebit/config.hpp"
#include "onebit/errors.hpp"

namespace onebit {

namespace {

std::ofstream open_out(const std::filesystem::path& file) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidSpec, fmt::format("cannot write '{}'", file.string()));
  return out;
}

std::string opt(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

nlohmann::json opt_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

}  // namespace

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

void write_paths_csv(const std::filesystem::path& file, const SensorPaths& paths, const PathStats& stats) {
  auto out = open_out(file);
  out << "t";
  for (std::size_t i = 0; i < paths.Y.size(); ++i) out << ",Y_" << i + 1;
  out << ",B,A,M\n";
  for (std::size_t k = 0; k < paths.grid.size(); ++k) {
    out << format_real(paths.grid.time(k));
    for (const auto& y : paths.Y) out << ',' << format_real(y[k]);
    out << ',' << format_real(stats.B[k]) << ',' << format_real(stats.A[k]) << ',' << format_real(stats.M[k]) << '\n';
  }
}

void write_messages_csv(const std::filesystem::path& file, const MessageLog& log) {
  auto out = open_out(file);
  out << "sensor,kind,time,bit,overshoot\n";
  for (std::size_t i = 0; i < log.sensors.size(); ++i) {
    const auto& s = log.sensors[i];
    std::size_t bi = 0, ai = 0;
    while (bi < s.b.size() || ai < s.a.size()) {
      if (ai >= s.a.size() || (bi < s.b.size() && s.b[bi].time <= s.a[ai].time)) {
        const auto& m = s.b[bi++];
        out << i + 1 << ",B," << format_real(m.time) << ',' << m.bit << ',' << format_real(m.overshoot) << '\n';
      } else {
        out << i + 1 << ",A," << format_real(s.a[ai++].time) << ",,\n";
      }
    }
  }
}

void write_estimates_csv(const std::filesystem::path& file, const std::vector<EstimateRecord>& rows) {
  auto out = open_out(file);
  out << "replication,estimator,gamma_or_t,value,stop_time,info_used,messages_used\n";
  for (const auto& r : rows)
    out << r.replication << ',' << to_string(r.result.estimator) << ',' << format_real(r.gamma_or_t) << ','
        << format_real(r.result.value) << ',' << opt(r.result.stop_time) << ',' << format_real(r.result.info_used)
        << ',' << r.result.messages_used << '\n';
}

void write_rows_csv(const std::filesystem::path& file, const std::vector<ReplicationRow>& rows) {
  auto out = open_out(file);
  out << "replication,point,h,estimator,status,value,error,standardized,stop_time,info_used,true_info,"
         "messages,sensor_messages,eta_sum,eta_count,paired_diff\n";
  for (const auto& r : rows) {
    std::string per;
    for (std::size_t i = 0; i < r.sensor_messages.size(); ++i)
      per += (i ? ";" : "") + std::to_string(r.sensor_messages[i]);
    out << r.replication << ',' << format_real(r.point) << ',' << format_real(r.h) << ',' << to_string(r.estimator)
        << ',' << (r.ok() ? "ok" : r.failure) << ',' << format_real(r.value) << ',' << format_real(r.error) << ','
        << format_real(r.standardized) << ',' << opt(r.stop_time) << ',' << format_real(r.info_used) << ','
        << format_real(r.true_info) << ',' << r.messages << ',' << per << ',' << format_real(r.eta_sum) << ','
        << r.eta_count << ',' << opt(r.paired_diff) << '\n';
  }
}

void write_aggregates_csv(const std::filesystem::path& file, const std::vector<Aggregate>& aggregates) {
  auto out = open_out(file);
  out << "point,h,estimator,n_ok,n_failed,mean,variance,bias,std_mean,std_var,std_var_se,ks_D,ks_p,"
         "messages_per_time,eta_mean,eta_se,eta_count,paired_bias,paired_se\n";
  for (const auto& a : aggregates)
    out << format_real(a.point) << ',' << format_real(a.h) << ',' << to_string(a.estimator) << ',' << a.n_ok << ','
        << a.n_failed << ',' << format_real(a.mean) << ',' << format_real(a.variance) << ',' << format_real(a.bias)
        << ',' << format_real(a.std_mean) << ',' << format_real(a.std_var) << ',' << format_real(a.std_var_se) << ','
        << opt(a.ks_D) << ',' << opt(a.ks_p) << ',' << format_real(a.messages_per_time) << ','
        << format_real(a.eta_mean) << ',' << format_real(a.eta_se) << ',' << a.eta_count << ','
        << opt(a.paired_bias) << ',' << opt(a.paired_se) << '\n';
}

std::string output_stem(const std::string& name, const std::string& config_text, std::uint64_t seed) {
  return fmt::format("{}_{:016x}_{}", name, fnv1a64(config_text), seed);
}

std::vector<std::filesystem::path> write_report(const std::filesystem::path& dir, const std::string& stem,
                                                const ExperimentReport& report, const std::string& config_text) {
  const auto rows = dir / (stem + "_rows.csv");
  const auto aggs = dir / (stem + "_aggregates.csv");
  const auto summary = dir / (stem + "_summary.json");
  write_rows_csv(rows, report.rows);
  write_aggregates_csv(aggs, report.aggregates);

  nlohmann::ordered_json j;
  j["config_hash"] = fmt::format("{:016x}", fnv1a64(config_text));
  j["master_seed"] = report.config.master_seed;
  j["regime"] = std::string(to_string(report.config.regime));
  j["replications"] = report.config.replications;
  auto& ag = j["aggregates"] = nlohmann::ordered_json::array();
  for (const auto& a : report.aggregates) {
    ag.push_back({{"point", a.point},
                  {"h", a.h},
                  {"estimator", std::string(to_string(a.estimator))},
                  {"n_ok", a.n_ok},
                  {"n_failed", a.n_failed},
                  {"mean", a.mean},
                  {"variance", a.variance},
                  {"bias", a.bias},
                  {"standardized_mean", a.std_mean},
                  {"standardized_variance", a.std_var},
                  {"standardized_variance_se", a.std_var_se},
                  {"ks_D", opt_json(a.ks_D)},
                  {"ks_p", opt_json(a.ks_p)},
                  {"messages_per_time", a.messages_per_time},
                  {"eta_mean", a.eta_mean},
                  {"eta_count", a.eta_count},
                  {"paired_bias", opt_json(a.paired_bias)}});
  }
  auto& au = j["audits"] = nlohmann::ordered_json::array();
  for (const auto& a : report.audits) {
    au.push_back({{"point", a.point},
                  {"h", a.h},
                  {"replications", a.replications},
                  {"failing_replications", a.failing_replications},
                  {"delta_total", a.worst.delta_total},
                  {"c_total", a.worst.c_total},
                  {"max_B_gap", a.worst.max_B_gap},
                  {"max_A_gap", a.worst.max_A_gap},
                  {"min_A_gap", a.worst.min_A_gap},
                  {"b_violations", a.worst.b_violations},
                  {"a_upper_violations", a.worst.a_upper_violations},
                  {"a_lower_violations", a.worst.a_lower_violations},
                  {"sensor_violations", a.worst.sensor_violations}});
  }
  std::size_t failed = 0;
  for (const auto& r : report.rows) failed += r.ok() ? 0 : 1;
  j["failed_rows"] = failed;
  j["warnings"] = report.warnings;
  auto out = open_out(summary);
  out << j.dump(2) << '\n';
  return {rows, aggs, summary};
}

void write_table_csv(const std::filesystem::path& file, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  auto out = open_out(file);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_real(r[i]);
    out << '\n';
  }
}

}  // namespace onebit
