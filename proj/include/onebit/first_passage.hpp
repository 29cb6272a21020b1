#pragma once

#include <vector>

namespace onebit {

/// Two-sided exit of B = x Y from (-delta, delta), with Y a Brownian motion with drift lambda x.
struct ExitProblem {
  double delta = 1.0;
  double x = 1.0;
  double lambda = 0.0;

  /// Effective barrier delta / |x| in units of the driving Brownian motion.
  double barrier() const;
};

struct SeriesControl {
  double abs_tol = 1e-14;
  double quad_rel_tol = 1e-10;
  double t_max = 0.0;  // 0 selects the upper limit from the exit-time tail bound
};

/// h(t; x) = x / sqrt(2 pi t^3) exp(-x^2 / 2t). Throws Error(NonPositiveTime).
double kernel_h(double t, double x);

/// g(t; x) = sum over n in Z of h(t; (4n+1) x), truncated symmetrically once the
/// Gaussian tail majorant drops below ctl.abs_tol. Throws Error(NonPositiveInputs).
double series_g(double t, double x, const SeriesControl& ctl = {});

struct JointDensity {
  double up = 0.0;
  double down = 0.0;
};

/// Densities of (delta_1, z_1 = 1) and (delta_1, z_1 = 0). Throws Error(NonPositiveTime).
JointDensity joint_density(const ExitProblem& p, double t, const SeriesControl& ctl = {});

struct ExitFunctionals {
  double prob_up = 0.0;
  double total = 0.0;  // integral of both densities (1 up to quadrature error)
  double mean_delta = 0.0;
  double var_delta = 0.0;
};

/// Integrates the joint densities on (0, t_max]. Throws Error(QuadratureFailure).
ExitFunctionals exit_functionals(const ExitProblem& p, const SeriesControl& ctl = {});

struct MomentAsymptotics {
  double mean = 0.0;
  double var = 0.0;
};

/// Leading-order mean delta/(|lambda| x^2) and variance delta/(|lambda|^3 x^4).
/// Throws Error(ZeroDrift).
MomentAsymptotics delta_moment_asymptotics(const ExitProblem& p);

/// Exit-time CDF at each of the (ascending) times, by integrating the densities
/// panel by panel between consecutive points.
std::vector<double> exit_time_cdf(const ExitProblem& p, const std::vector<double>& sorted_times,
                                  const SeriesControl& ctl = {});

/// Upper integration limit beyond which the exit-time survival mass is below tol.
double exit_tail_limit(const ExitProblem& p, double tol);

}  // namespace onebit
