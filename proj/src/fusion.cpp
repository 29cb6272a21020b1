#include "onebit/fusion.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

#include "onebit/errors.hpp"

namespace onebit {

namespace {

void check_horizon(double t, double horizon) {
  if (!(t >= 0.0) || t > horizon)
    throw Error(ErrorKind::OutOfHorizon, fmt::format("t={} outside [0, {}]", t, horizon));
}

constexpr std::array<std::string_view, 5> kEstimatorNames{
    "centralized_fixed", "centralized_sequential", "decentralized_fixed", "decentralized_sequential",
    "timing_only"};

}  // namespace

std::string_view to_string(EstimatorKind kind) { return kEstimatorNames[static_cast<std::size_t>(kind)]; }

EstimatorKind estimator_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kEstimatorNames.size(); ++i)
    if (kEstimatorNames[i] == name) return static_cast<EstimatorKind>(i);
  throw Error(ErrorKind::InvalidSpec, fmt::format("unknown estimator '{}'", name));
}

bool is_sequential(EstimatorKind kind) {
  return kind == EstimatorKind::CentralizedSequential || kind == EstimatorKind::DecentralizedSequential;
}

FusionState reconstruct(const MessageLog& log, const Model& model, const std::vector<TriggerConfig>& cfg) {
  const int k = model.sensors();
  const auto uk = static_cast<std::size_t>(k);
  if (log.sensors.size() != uk)
    throw Error(ErrorKind::InconsistentLog,
                fmt::format("log has {} sensors, model has {}", log.sensors.size(), k));
  if (cfg.size() != uk)
    throw Error(ErrorKind::InconsistentLog, fmt::format("{} trigger configs for {} sensors", cfg.size(), k));

  FusionState st(model);
  st.horizon_ = log.horizon;
  st.b_times_.resize(uk);
  st.b_prefix_.resize(uk);
  st.a_times_.resize(uk);
  st.c_.assign(uk, 0.0);
  const bool random_info = !model.info_deterministic();

  for (std::size_t i = 0; i < uk; ++i) {
    const auto& s = log.sensors[i];
    const auto& c = cfg[i];
    auto& times = st.b_times_[i];
    auto& prefix = st.b_prefix_[i];
    prefix.push_back(0.0);
    double acc = 0.0;
    double prev = -1.0;
    for (const auto& m : s.b) {
      if (m.bit != 0 && m.bit != 1)
        throw Error(ErrorKind::InconsistentLog, fmt::format("sensor {} sent bit {}", i + 1, m.bit));
      if (!(m.time > prev) || m.time > log.horizon)
        throw Error(ErrorKind::InconsistentLog, fmt::format("sensor {} B-message times out of order", i + 1));
      prev = m.time;
      // Same operation as the sensor's reference update, so both sides agree bit for bit.
      acc = m.bit == 1 ? acc + c.delta_up : acc - c.delta_down;
      times.push_back(m.time);
      prefix.push_back(acc);
    }
    st.delta_total_ += c.delta_max();

    if (!s.a.empty() && !c.c)
      throw Error(ErrorKind::InconsistentLog, fmt::format("sensor {} sent A-messages without c", i + 1));
    if (random_info) {
      if (!c.c)
        throw Error(ErrorKind::InvalidSpec,
                    fmt::format("sensor {} needs an A-trigger increment c: its information is random", i + 1));
      st.c_[i] = *c.c;
      prev = -1.0;
      for (const auto& m : s.a) {
        if (!(m.time > prev) || m.time > log.horizon)
          throw Error(ErrorKind::InconsistentLog, fmt::format("sensor {} A-message times out of order", i + 1));
        prev = m.time;
        st.a_times_[i].push_back(m.time);
      }
      st.c_total_ += (1.0 + model.random_cross_count(static_cast<int>(i))) * st.c_[i];
    }
  }
  return st;
}

std::size_t FusionState::b_index(int i, double t) const {
  const auto& v = b_times_[static_cast<std::size_t>(i)];
  return static_cast<std::size_t>(std::upper_bound(v.begin(), v.end(), t) - v.begin());
}

std::size_t FusionState::a_index(int i, double t) const {
  const auto& v = a_times_[static_cast<std::size_t>(i)];
  return static_cast<std::size_t>(std::upper_bound(v.begin(), v.end(), t) - v.begin());
}

double FusionState::tB_i(int i, double t) const { return b_prefix_[static_cast<std::size_t>(i)][b_index(i, t)]; }

double FusionState::tB(double t) const {
  double acc = 0.0;
  for (int i = 0; i < sensors(); ++i) acc += tB_i(i, t);
  return acc;
}

double FusionState::tA_i(int i, double t) const {
  if (model_.sensor_info_deterministic(i)) return model_.sensor_info(i, t);
  return static_cast<double>(a_index(i, t)) * c_[static_cast<std::size_t>(i)];
}

double FusionState::tA(double t) const {
  if (model_.info_deterministic()) return model_.total_info(t);
  double acc = 0.0;
  for (int i = 0; i < sensors(); ++i) acc += (1.0 + model_.random_cross_count(i)) * tA_i(i, t);
  return acc + model_.deterministic_cross_sum(t);
}

double FusionState::checkA_i(int i, double t) const {
  if (model_.kind() != ModelKind::BrownianConstant)
    throw Error(ErrorKind::InvalidSpec, "timing-only information is defined for BrownianConstant only");
  const std::size_t n = b_index(i, t);
  if (n == 0) return 0.0;
  const double x = model_.spec().x[static_cast<std::size_t>(i)];
  // The inter-arrival times telescope to the last message time.
  return x * x * b_times_[static_cast<std::size_t>(i)][n - 1];
}

double FusionState::checkA(double t) const {
  double acc = 0.0;
  for (int i = 0; i < sensors(); ++i) acc += checkA_i(i, t);
  return acc;
}

std::size_t FusionState::b_messages(double t) const {
  std::size_t n = 0;
  for (int i = 0; i < sensors(); ++i) n += b_index(i, t);
  return n;
}

std::size_t FusionState::a_messages(double t) const {
  std::size_t n = 0;
  for (int i = 0; i < sensors(); ++i) n += a_index(i, t);
  return n;
}

std::vector<double> FusionState::a_jump_times() const {
  std::vector<double> out;
  for (const auto& v : a_times_) out.insert(out.end(), v.begin(), v.end());
  std::sort(out.begin(), out.end());
  return out;
}

EstimateResult estimate_fixed(const FusionState& state, double t) {
  if (!state.model().info_deterministic())
    throw Error(ErrorKind::InvalidSpec, "fixed-horizon decentralized estimator needs deterministic information");
  check_horizon(t, state.horizon());
  const double a = state.model().total_info(t);
  if (!(a > 0.0)) throw Error(ErrorKind::ZeroInformation, fmt::format("A_t = {} at t={}", a, t));
  EstimateResult r;
  r.estimator = EstimatorKind::DecentralizedFixed;
  r.value = state.tB(t) / a;
  r.info_used = a;
  r.messages_used = state.b_messages(t);
  return r;
}

EstimateResult estimate_sequential(const FusionState& state, double gamma) {
  const double c = state.c_total();
  if (!(gamma > c) || !(gamma > 0.0))
    throw Error(ErrorKind::GammaTooSmall, fmt::format("gamma={} must exceed c={}", gamma, c));
  const double level = gamma - c;
  const double horizon = state.horizon();
  double stop = 0.0;

  if (state.model().info_deterministic()) {
    if (state.tA(horizon) < level)
      throw Error(ErrorKind::HorizonExhausted,
                  fmt::format("A reaches only {} of {} by t={}", state.tA(horizon), level, horizon));
    double lo = 0.0, hi = horizon;
    for (int it = 0; it < 200 && std::nextafter(lo, hi) < hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (state.tA(mid) >= level ? hi : lo) = mid;
    }
    stop = hi;
  } else {
    bool found = false;
    for (double t : state.a_jump_times()) {
      if (state.tA(t) >= level) {
        stop = t;
        found = true;
        break;
      }
    }
    if (!found)
      throw Error(ErrorKind::HorizonExhausted,
                  fmt::format("tA reaches only {} of {} by t={}", state.tA(horizon), level, horizon));
  }

  EstimateResult r;
  r.estimator = EstimatorKind::DecentralizedSequential;
  r.info_used = state.tA(stop);
  r.value = state.tB(stop) / r.info_used;
  r.stop_time = stop;
  r.messages_used = state.b_messages(stop) + state.a_messages(stop);
  return r;
}

EstimateResult estimate_timing_only(const FusionState& state, double t) {
  check_horizon(t, state.horizon());
  const double a = state.checkA(t);
  if (!(a > 0.0)) throw Error(ErrorKind::NoMessages, fmt::format("no B-messages by t={}", t));
  EstimateResult r;
  r.estimator = EstimatorKind::TimingOnly;
  r.value = state.tB(t) / a;
  r.info_used = a;
  r.messages_used = state.b_messages(t);
  return r;
}

std::vector<EstimateResult> centralized_estimates(const PathStats& stats, double t, std::optional<double> gamma) {
  check_horizon(t, stats.grid.t_end);
  std::vector<EstimateResult> out;
  const double a = interpolate(stats.A, stats.grid, t);
  if (!(a > 0.0)) throw Error(ErrorKind::ZeroInformation, fmt::format("A_t = {} at t={}", a, t));
  EstimateResult fixed;
  fixed.estimator = EstimatorKind::CentralizedFixed;
  fixed.value = interpolate(stats.B, stats.grid, t) / a;
  fixed.info_used = a;
  out.push_back(fixed);

  if (gamma) {
    if (!(*gamma > 0.0)) throw Error(ErrorKind::GammaTooSmall, "gamma must be positive");
    const auto& A = stats.A;
    const auto it = std::find_if(A.begin(), A.end(), [&](double v) { return v >= *gamma; });
    if (it == A.end())
      throw Error(ErrorKind::HorizonExhausted,
                  fmt::format("A reaches only {} of {} by t={}", A.back(), *gamma, stats.grid.t_end));
    const auto k = static_cast<std::size_t>(it - A.begin());
    double s = 0.0;
    if (k > 0) {
      const double t0 = stats.grid.time(k - 1), t1 = stats.grid.time(k);
      s = t0 + (*gamma - A[k - 1]) / (A[k] - A[k - 1]) * (t1 - t0);
      s = std::clamp(s, t0, t1);
    }
    EstimateResult seq;
    seq.estimator = EstimatorKind::CentralizedSequential;
    seq.value = interpolate(stats.B, stats.grid, s) / *gamma;
    seq.info_used = *gamma;
    seq.stop_time = s;
    out.push_back(seq);
  }
  return out;
}

LogLikelihood centralized_loglik(double lambda, double B_t, double A_t) {
  return {lambda * B_t - 0.5 * lambda * lambda * A_t, B_t - lambda * A_t};
}

}  // namespace onebit
