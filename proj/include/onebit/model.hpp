#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "onebit/time_function.hpp"

namespace onebit {

enum class ModelKind {
  BrownianConstant,     // X^i = x_i, independent unit Brownian noise
  GaussianDetInfo,      // X^i = b_i(t), alpha = rho(t); information is deterministic
  OrnsteinUhlenbeck,    // X^i = Y^i, alpha^{ii} constant, independent sensors
  SquareRootDiffusion,  // X^i = x_i, alpha^{ii} = Y^i
  CorrelatedDiffusion,  // X^i = Y^i, alpha = sigma(t) sigma(t)'
};

/// Declarative description of the K-sensor system. Only the fields relevant to
/// `kind` are read; the rest must be left empty.
struct ModelSpec {
  ModelKind kind = ModelKind::BrownianConstant;
  int sensors = 1;
  std::vector<double> x;
  std::vector<TimeFunction> b;
  std::vector<std::vector<TimeFunction>> rho;
  std::vector<double> alpha;
  std::vector<std::vector<TimeFunction>> sigma;
  // Starting level of each square-root diffusion (the process is absorbed at 0).
  std::vector<double> y0;
  // deterministic_cross[i][j]: A^{ij} known in closed form. Empty selects the kind's default.
  std::vector<std::vector<bool>> deterministic_cross;
  double magnitude_cap = 1e12;

  bool operator==(const ModelSpec&) const = default;
};

struct TimeGrid {
  double t_end = 1.0;
  std::size_t n_steps = 1;

  double dt() const { return t_end / static_cast<double>(n_steps); }
  double time(std::size_t k) const {
    return k == n_steps ? t_end : static_cast<double>(k) * dt();
  }
  std::size_t size() const { return n_steps + 1; }

  /// Grid covering [0, t_end] with (at least) `steps_per_unit` steps per unit time.
  static TimeGrid with_resolution(double t_end, double steps_per_unit);

  bool operator==(const TimeGrid&) const = default;
};

/// Validated model with coefficient evaluators and closed-form deterministic information.
class Model {
 public:
  const ModelSpec& spec() const { return spec_; }
  ModelKind kind() const { return spec_.kind; }
  int sensors() const { return spec_.sensors; }

  /// A = <B,B> deterministic (fixed-horizon regime).
  bool info_deterministic() const;
  /// A^i deterministic.
  bool sensor_info_deterministic(int i) const;
  bool cross_deterministic(int i, int j) const;
  /// d_i: number of j != i whose cross-variation A^{ij} is random.
  int random_cross_count(int i) const { return random_cross_[static_cast<std::size_t>(i)]; }

  /// Closed-form A^i(t); requires sensor_info_deterministic(i).
  double sensor_info(int i, double t) const;
  /// Closed-form A^{ij}(t), i != j; requires cross_deterministic(i, j).
  double cross_info(int i, int j, double t) const;
  /// Sum of A^{ij}(t) over ordered pairs i != j outside the random set.
  double deterministic_cross_sum(double t) const;
  /// Closed-form A(t); requires info_deterministic().
  double total_info(double t) const;

  /// Drift integrand X^i at time t given sensor i's current state.
  double integrand(int i, double t, double y_i) const;

 private:
  friend Model build_model(const ModelSpec& spec);
  explicit Model(ModelSpec spec) : spec_(std::move(spec)) {}

  ModelSpec spec_;
  std::vector<int> random_cross_;
  // GaussianDetInfo: b_i b_j rho_ij, row-major K x K.
  std::vector<TimeFunction> info_density_;
};

/// Validates the spec and precomputes closed-form information integrands.
/// Throws Error(InvalidSpec).
Model build_model(const ModelSpec& spec);

/// Positive-semidefinite Cholesky factor (row-major, lower). Zero pivots give zero columns;
/// returns false when the matrix is not PSD within a relative tolerance.
bool psd_cholesky(const std::vector<double>& m, int n, std::vector<double>& lower);

struct SensorPaths {
  TimeGrid grid;
  std::vector<std::vector<double>> Y;  // K x (n_steps + 1)
  double lambda_true = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;
};

/// Euler-Maruyama paths under P_lambda. Noise comes from the counter-based stream
/// (seed, replication), so extending the grid horizon leaves the common prefix unchanged.
/// Throws Error(NumericalBlowup) when |Y| exceeds the model's magnitude cap.
SensorPaths simulate_paths(const Model& model, double lambda, const TimeGrid& grid,
                           std::uint64_t seed, std::uint64_t replication = 0);

/// Pathwise statistics on the grid. Diagonal of A_ij holds A^i.
struct PathStats {
  TimeGrid grid;
  int sensors = 0;
  std::vector<std::vector<double>> B_i;
  std::vector<std::vector<double>> A_ij;  // row-major K x K, each a path
  std::vector<double> B;
  std::vector<double> A;
  std::vector<double> M;

  const std::vector<double>& A_i(int i) const {
    return A_ij[static_cast<std::size_t>(i * sensors + i)];
  }
  const std::vector<double>& cross(int i, int j) const {
    return A_ij[static_cast<std::size_t>(i * sensors + j)];
  }
};

/// Ito (left-endpoint) integrals for B^i; (co)variations from model coefficients.
/// Throws Error(GridMismatch) when the paths do not fit the model or their grid.
PathStats path_statistics(const SensorPaths& paths, const Model& model);

/// Linear interpolation of a grid path at time t (clamped to the grid).
double interpolate(const std::vector<double>& path, const TimeGrid& grid, double t);

}  // namespace onebit
