#include "onebit/first_passage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "onebit/errors.hpp"

namespace onebit {

namespace {

using std::numbers::pi;

void check_problem(const ExitProblem& p) {
  if (!(p.delta > 0.0) || p.x == 0.0 || !std::isfinite(p.x) || !std::isfinite(p.lambda))
    throw Error(ErrorKind::InvalidSpec, "exit problem needs delta > 0 and finite x != 0");
}

// |h(t; m)| summed over every image with |4n+1| x >= m0, spacing 4x; valid for m0 >= sqrt(t).
double tail_majorant(double t, double x, double m0) {
  const double norm = 1.0 / std::sqrt(2.0 * pi * t * t * t);
  const double e = std::exp(-m0 * m0 / (2.0 * t));
  return 2.0 * (m0 * norm * e + t * norm * e / (4.0 * x));
}

template <class F>
double integrate_panel(F&& f, double lo, double hi, double tol, double& err) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double e = 0.0;
  double v = GK::integrate(f, lo, hi, 0, tol, &e);
  // Tail panels carry almost no mass; a relative tolerance would refine them forever.
  if (e > tol * 1e-3) v = GK::integrate(f, lo, hi, 15, tol, &e);
  err += e;
  return v;
}

}  // namespace

double ExitProblem::barrier() const { return delta / std::abs(x); }

double kernel_h(double t, double x) {
  if (!(t > 0.0)) throw Error(ErrorKind::NonPositiveTime, fmt::format("h needs t > 0, got {}", t));
  return x / std::sqrt(2.0 * pi * t * t * t) * std::exp(-x * x / (2.0 * t));
}

double series_g(double t, double x, const SeriesControl& ctl) {
  if (!(t > 0.0) || !(x > 0.0))
    throw Error(ErrorKind::NonPositiveInputs, fmt::format("g needs t > 0 and x > 0, got t={}, x={}", t, x));
  double sum = kernel_h(t, x);
  const double root_t = std::sqrt(t);
  for (long n = 1;; ++n) {
    const double m0 = static_cast<double>(4 * (n - 1) + 3) * x;
    if (m0 >= root_t && tail_majorant(t, x, m0) < ctl.abs_tol) break;
    sum += kernel_h(t, static_cast<double>(4 * n + 1) * x) + kernel_h(t, static_cast<double>(-4 * n + 1) * x);
  }
  // Alternating images cancel at large t; round-off must not produce a negative density.
  return std::max(sum, 0.0);
}

JointDensity joint_density(const ExitProblem& p, double t, const SeriesControl& ctl) {
  check_problem(p);
  if (!(t > 0.0)) throw Error(ErrorKind::NonPositiveTime, fmt::format("density needs t > 0, got {}", t));
  const double g = series_g(t, p.barrier(), ctl);
  const double lx = p.lambda * p.x;
  const double decay = -0.5 * lx * lx * t;
  return {std::exp(p.lambda * p.delta + decay) * g, std::exp(-p.lambda * p.delta + decay) * g};
}

double exit_tail_limit(const ExitProblem& p, double tol) {
  check_problem(p);
  const double a = p.barrier();
  const double lx = p.lambda * p.x;
  // g(t; a) <= pi/(4a^2) exp(-pi^2 t / 8a^2) once the spectral series is alternating-decreasing.
  const double kappa = pi * pi / (8.0 * a * a) + 0.5 * lx * lx;
  const double lead = 2.0 * pi / (4.0 * a * a * kappa);
  const double t = (std::abs(p.lambda) * p.delta + std::log(lead) - std::log(tol)) / kappa;
  return std::max(t, 2.0 * a * a);
}

ExitFunctionals exit_functionals(const ExitProblem& p, const SeriesControl& ctl) {
  check_problem(p);
  const double a = p.barrier();
  const double tol = ctl.quad_rel_tol;
  double t_max = ctl.t_max > 0.0 ? ctl.t_max : exit_tail_limit(p, tol * 1e-2);
  // Moments need a longer tail than the mass; extend until the t^2-weighted tail is negligible too.
  if (ctl.t_max <= 0.0) t_max *= 1.0 + 2.0 * std::log1p(t_max) / std::max(1.0, std::log(1.0 / tol));

  auto up = [&](double t) { return t > 0.0 ? joint_density(p, t, ctl).up : 0.0; };
  auto both = [&](double t) {
    if (!(t > 0.0)) return 0.0;
    const auto d = joint_density(p, t, ctl);
    return d.up + d.down;
  };

  ExitFunctionals out;
  double m1 = 0.0, m2 = 0.0, err = 0.0;
  double lo = 0.0;
  double hi = a * a / 32.0;
  while (lo < t_max) {
    hi = std::min(hi, t_max);
    out.prob_up += integrate_panel(up, lo, hi, tol, err);
    out.total += integrate_panel(both, lo, hi, tol, err);
    m1 += integrate_panel([&](double t) { return t * both(t); }, lo, hi, tol, err);
    m2 += integrate_panel([&](double t) { return t * t * both(t); }, lo, hi, tol, err);
    lo = hi;
    hi *= 2.0;
  }
  if (!(err <= tol * std::max(1.0, m2)) || !std::isfinite(m2))
    throw Error(ErrorKind::QuadratureFailure,
                fmt::format("quadrature error {} exceeds tolerance {} on (0, {}]", err, tol, t_max));
  out.mean_delta = m1 / out.total;
  out.var_delta = m2 / out.total - out.mean_delta * out.mean_delta;
  return out;
}

MomentAsymptotics delta_moment_asymptotics(const ExitProblem& p) {
  check_problem(p);
  if (p.lambda == 0.0) throw Error(ErrorKind::ZeroDrift, "moment asymptotics need lambda != 0");
  const double l = std::abs(p.lambda);
  const double x2 = p.x * p.x;
  return {p.delta / (l * x2), p.delta / (l * l * l * x2 * x2)};
}

std::vector<double> exit_time_cdf(const ExitProblem& p, const std::vector<double>& sorted_times,
                                  const SeriesControl& ctl) {
  check_problem(p);
  auto both = [&](double t) {
    if (!(t > 0.0)) return 0.0;
    const auto d = joint_density(p, t, ctl);
    return d.up + d.down;
  };
  std::vector<double> out;
  out.reserve(sorted_times.size());
  double acc = 0.0;
  double prev = 0.0;
  for (double t : sorted_times) {
    if (t < prev) throw Error(ErrorKind::InvalidSpec, "exit_time_cdf needs ascending times");
    if (t > prev) {
      acc += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(both, prev, t, 8, 1e-10);
      prev = t;
    }
    out.push_back(std::min(acc, 1.0));
  }
  return out;
}

}  // namespace onebit
