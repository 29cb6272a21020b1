#include "onebit/trigger.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "onebit/errors.hpp"

namespace onebit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Time at which the segment (t0, v0) -> (t1, v1) reaches `level`, kept inside (t0, t1]
// and strictly after `last`.
double crossing_time(double t0, double t1, double v0, double v1, double level, double last) {
  double t = t1;
  const double dv = v1 - v0;
  if (dv != 0.0) t = t0 + (level - v0) / dv * (t1 - t0);
  if (!(t > t0)) t = std::nextafter(t0, kInf);
  if (t > t1) t = t1;
  if (!(t > last)) t = std::nextafter(last, kInf);
  return t;
}

std::size_t sampling_stride(const TriggerConfig& cfg, const TimeGrid& grid) {
  const double ratio = cfg.h / grid.dt();
  const double r = std::round(ratio);
  if (r < 1.0 || std::abs(ratio - r) > 1e-6 * std::max(1.0, r))
    throw Error(ErrorKind::InvalidSpec,
                fmt::format("sampling period {} is not a multiple of the grid step {}", cfg.h, grid.dt()));
  return static_cast<std::size_t>(r);
}

}  // namespace

void validate_trigger(const TriggerConfig& cfg, const TimeGrid& grid) {
  if (!(cfg.delta_up > 0.0) || !(cfg.delta_down > 0.0))
    throw Error(ErrorKind::InvalidSpec, "B-trigger thresholds must be positive");
  if (cfg.c && !(*cfg.c > 0.0)) throw Error(ErrorKind::InvalidSpec, "A-trigger increment c must be positive");
  if (cfg.mode == TriggerMode::DiscreteSampling) {
    if (!(cfg.h > 0.0)) throw Error(ErrorKind::InvalidSpec, "sampling period h must be positive");
    sampling_stride(cfg, grid);
  }
}

std::size_t MessageLog::b_count() const {
  std::size_t n = 0;
  for (const auto& s : sensors) n += s.b.size();
  return n;
}

std::size_t MessageLog::a_count() const {
  std::size_t n = 0;
  for (const auto& s : sensors) n += s.a.size();
  return n;
}

std::vector<BMessage> run_b_trigger(const std::vector<double>& b_path, const TimeGrid& grid,
                                    const TriggerConfig& cfg) {
  validate_trigger(cfg, grid);
  if (b_path.size() != grid.size()) throw Error(ErrorKind::GridMismatch, "B path does not match its grid");
  std::vector<BMessage> out;
  const double up = cfg.delta_up;
  const double down = cfg.delta_down;
  double ref = b_path[0];
  double last = -kInf;

  if (cfg.mode == TriggerMode::Continuous) {
    for (std::size_t k = 1; k < b_path.size(); ++k) {
      const double v = b_path[k];
      // A single step may cross several bands; the reference moves by exactly one band each time.
      while (true) {
        if (v - ref >= up) {
          const double level = ref + up;
          last = crossing_time(grid.time(k - 1), grid.time(k), b_path[k - 1], v, level, last);
          out.push_back({last, 1, 0.0});
          ref = level;
        } else if (v - ref <= -down) {
          const double level = ref - down;
          last = crossing_time(grid.time(k - 1), grid.time(k), b_path[k - 1], v, level, last);
          out.push_back({last, 0, 0.0});
          ref = level;
        } else {
          break;
        }
      }
    }
    return out;
  }

  const std::size_t stride = sampling_stride(cfg, grid);
  for (std::size_t k = stride; k < b_path.size(); k += stride) {
    const double inc = b_path[k] - ref;
    if (inc >= up) {
      out.push_back({grid.time(k), 1, inc - up});
    } else if (inc <= -down) {
      out.push_back({grid.time(k), 0, -(inc + down)});
    } else {
      continue;
    }
    ref = b_path[k];
  }
  return out;
}

std::vector<AMessage> run_a_trigger(const std::vector<double>& a_path, const TimeGrid& grid,
                                    std::optional<double> c) {
  if (!c) return {};
  if (!(*c > 0.0)) throw Error(ErrorKind::InvalidSpec, "A-trigger increment c must be positive");
  if (a_path.size() != grid.size()) throw Error(ErrorKind::GridMismatch, "A path does not match its grid");
  std::vector<AMessage> out;
  std::size_t n = 0;
  double last = -kInf;
  for (std::size_t k = 1; k < a_path.size(); ++k) {
    const double v = a_path[k];
    if (v < a_path[k - 1])
      throw Error(ErrorKind::NonMonotoneInput, fmt::format("A decreases at t={}", grid.time(k)));
    while (v >= static_cast<double>(n + 1) * *c) {
      const double level = static_cast<double>(n + 1) * *c;
      last = crossing_time(grid.time(k - 1), grid.time(k), a_path[k - 1], v, level, last);
      out.push_back({last});
      ++n;
    }
  }
  return out;
}

MessageLog run_triggers(const PathStats& stats, const std::vector<TriggerConfig>& cfg) {
  if (static_cast<int>(cfg.size()) != stats.sensors)
    throw Error(ErrorKind::InvalidSpec,
                fmt::format("{} trigger configs given for {} sensors", cfg.size(), stats.sensors));
  MessageLog log;
  log.horizon = stats.grid.t_end;
  log.sensors.resize(cfg.size());
  for (int i = 0; i < stats.sensors; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    log.sensors[ui].b = run_b_trigger(stats.B_i[ui], stats.grid, cfg[ui]);
    log.sensors[ui].a = run_a_trigger(stats.A_i(i), stats.grid, cfg[ui].c);
  }
  return log;
}

Renewals extract_renewals(const MessageLog& log, int sensor, double t) {
  if (sensor < 0 || sensor >= static_cast<int>(log.sensors.size()))
    throw Error(ErrorKind::InvalidSpec, fmt::format("no sensor {}", sensor));
  if (t < 0.0 || t > log.horizon)
    throw Error(ErrorKind::OutOfHorizon, fmt::format("t={} outside [0, {}]", t, log.horizon));
  Renewals r;
  double prev = 0.0;
  for (const auto& msg : log.sensors[static_cast<std::size_t>(sensor)].b) {
    if (msg.time > t) break;
    r.deltas.push_back(msg.time - prev);
    r.bits.push_back(msg.bit);
    prev = msg.time;
  }
  r.m = r.deltas.size();
  return r;
}

}  // namespace onebit
