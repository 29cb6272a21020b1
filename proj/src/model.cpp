#include "onebit/model.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "onebit/errors.hpp"
#include "onebit/rng.hpp"

namespace onebit {

namespace {

std::size_t idx(int i, int j, int k) { return static_cast<std::size_t>(i * k + j); }

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InvalidSpec, what);
}

void require_square(const std::vector<std::vector<TimeFunction>>& m, int k, const char* name) {
  require(static_cast<int>(m.size()) == k, fmt::format("{} must have {} rows", name, k));
  for (const auto& row : m)
    require(static_cast<int>(row.size()) == k, fmt::format("{} must be {}x{}", name, k, k));
}

// alpha_ij(t) = sum_k sigma_ik(t) sigma_jk(t)
TimeFunction alpha_entry(const std::vector<std::vector<TimeFunction>>& sigma, int i, int j) {
  TimeFunction acc = TimeFunction::constant(0.0);
  for (std::size_t k = 0; k < sigma.size(); ++k)
    acc = acc + sigma[static_cast<std::size_t>(i)][k] * sigma[static_cast<std::size_t>(j)][k];
  return acc;
}

}  // namespace

bool psd_cholesky(const std::vector<double>& m, int n, std::vector<double>& lower) {
  lower.assign(static_cast<std::size_t>(n * n), 0.0);
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(m[idx(i, i, n)]));
  const double tol = 1e-12 * std::max(scale, 1.0);
  for (int j = 0; j < n; ++j) {
    double d = m[idx(j, j, n)];
    for (int k = 0; k < j; ++k) d -= lower[idx(j, k, n)] * lower[idx(j, k, n)];
    if (d < -tol) return false;
    if (d <= tol) {
      // Zero pivot: the rest of the column must vanish for the matrix to be PSD.
      for (int i = j + 1; i < n; ++i) {
        double s = m[idx(i, j, n)];
        for (int k = 0; k < j; ++k) s -= lower[idx(i, k, n)] * lower[idx(j, k, n)];
        if (std::abs(s) > 1e-9 * std::max(scale, 1.0)) return false;
      }
      continue;
    }
    const double piv = std::sqrt(d);
    lower[idx(j, j, n)] = piv;
    for (int i = j + 1; i < n; ++i) {
      double s = m[idx(i, j, n)];
      for (int k = 0; k < j; ++k) s -= lower[idx(i, k, n)] * lower[idx(j, k, n)];
      lower[idx(i, j, n)] = s / piv;
    }
  }
  return true;
}

TimeGrid TimeGrid::with_resolution(double t_end, double steps_per_unit) {
  if (!(t_end > 0.0) || !(steps_per_unit > 0.0))
    throw Error(ErrorKind::InvalidSpec, "grid horizon and resolution must be positive");
  const auto n = static_cast<std::size_t>(std::ceil(t_end * steps_per_unit - 1e-9));
  return TimeGrid{t_end, std::max<std::size_t>(n, 1)};
}

Model build_model(const ModelSpec& spec) {
  const int k = spec.sensors;
  require(k >= 1, "at least one sensor is required");
  require(spec.magnitude_cap > 0.0, "magnitude_cap must be positive");
  const auto uk = static_cast<std::size_t>(k);

  Model model(spec);
  ModelSpec& s = model.spec_;

  switch (s.kind) {
    case ModelKind::BrownianConstant:
    case ModelKind::SquareRootDiffusion:
      require(s.x.size() == uk, fmt::format("x must have {} entries", k));
      for (double xi : s.x) require(xi != 0.0 && std::isfinite(xi), "every x_i must be finite and nonzero");
      if (s.kind == ModelKind::SquareRootDiffusion) {
        if (s.y0.empty()) s.y0.assign(uk, 1.0);
        require(s.y0.size() == uk, fmt::format("y0 must have {} entries", k));
        for (double v : s.y0) require(v > 0.0, "square-root diffusion start levels must be positive");
      }
      break;
    case ModelKind::GaussianDetInfo: {
      require(s.b.size() == uk, fmt::format("b must have {} entries", k));
      require_square(s.rho, k, "rho");
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          require(s.rho[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
                      s.rho[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)],
                  "rho must be symmetric");
      std::vector<double> probes;
      for (const auto& row : s.rho)
        for (const auto& f : row) {
          auto p = f.probe_points();
          probes.insert(probes.end(), p.begin(), p.end());
        }
      std::vector<double> m(uk * uk), lower;
      for (double t : probes) {
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j)
            m[idx(i, j, k)] = s.rho[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)](t);
        require(psd_cholesky(m, k, lower), fmt::format("rho is not positive semidefinite at t={}", t));
      }
      model.info_density_.resize(uk * uk);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          model.info_density_[idx(i, j, k)] = s.b[static_cast<std::size_t>(i)] *
                                              s.b[static_cast<std::size_t>(j)] *
                                              s.rho[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      break;
    }
    case ModelKind::OrnsteinUhlenbeck:
      require(s.alpha.size() == uk, fmt::format("alpha must have {} entries", k));
      for (double a : s.alpha) require(a > 0.0 && std::isfinite(a), "every alpha_ii must be positive");
      break;
    case ModelKind::CorrelatedDiffusion:
      require_square(s.sigma, k, "sigma");
      break;
  }

  // Cross-variation mask: default to the truthful mask, then check user-supplied flags.
  auto cross_is_zero = [&](int i, int j) {
    if (s.kind != ModelKind::CorrelatedDiffusion) return true;
    return alpha_entry(s.sigma, i, j).is_identically_zero();
  };
  if (s.deterministic_cross.empty()) {
    s.deterministic_cross.assign(uk, std::vector<bool>(uk, true));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        if (i != j) s.deterministic_cross[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = cross_is_zero(i, j);
  }
  require(s.deterministic_cross.size() == uk, "deterministic_cross must be KxK");
  for (int i = 0; i < k; ++i) {
    const auto& row = s.deterministic_cross[static_cast<std::size_t>(i)];
    require(row.size() == uk, "deterministic_cross must be KxK");
    require(row[static_cast<std::size_t>(i)], "deterministic_cross must have a true diagonal");
    for (int j = 0; j < k; ++j) {
      require(row[static_cast<std::size_t>(j)] ==
                  s.deterministic_cross[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)],
              "deterministic_cross must be symmetric");
      if (i == j || !row[static_cast<std::size_t>(j)]) continue;
      if (s.kind == ModelKind::CorrelatedDiffusion)
        require(cross_is_zero(i, j),
                fmt::format("A^{{{}{}}} is random (sigma sigma' has a nonzero entry) but flagged deterministic",
                            i + 1, j + 1));
    }
    if (s.kind == ModelKind::BrownianConstant || s.kind == ModelKind::GaussianDetInfo)
      for (bool flag : row) require(flag, "cross-variations of this model are deterministic; mask must be all true");
  }

  model.random_cross_.assign(uk, 0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (i != j && !s.deterministic_cross[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
        ++model.random_cross_[static_cast<std::size_t>(i)];
  return model;
}

bool Model::info_deterministic() const {
  return spec_.kind == ModelKind::BrownianConstant || spec_.kind == ModelKind::GaussianDetInfo;
}

bool Model::sensor_info_deterministic(int) const { return info_deterministic(); }

bool Model::cross_deterministic(int i, int j) const {
  return spec_.deterministic_cross[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
}

double Model::sensor_info(int i, double t) const {
  const auto ui = static_cast<std::size_t>(i);
  switch (spec_.kind) {
    case ModelKind::BrownianConstant: return spec_.x[ui] * spec_.x[ui] * t;
    case ModelKind::GaussianDetInfo: return info_density_[idx(i, i, sensors())].integral(t);
    default: throw Error(ErrorKind::InvalidSpec, "sensor information is random for this model");
  }
}

double Model::cross_info(int i, int j, double t) const {
  if (!cross_deterministic(i, j))
    throw Error(ErrorKind::InvalidSpec, "cross-variation is random for this pair");
  if (spec_.kind == ModelKind::GaussianDetInfo) return info_density_[idx(i, j, sensors())].integral(t);
  return 0.0;  // every other catalog model has a deterministic cross term only when it vanishes
}

double Model::deterministic_cross_sum(double t) const {
  if (spec_.kind != ModelKind::GaussianDetInfo) return 0.0;
  double acc = 0.0;
  for (int i = 0; i < sensors(); ++i)
    for (int j = 0; j < sensors(); ++j)
      if (i != j && cross_deterministic(i, j)) acc += cross_info(i, j, t);
  return acc;
}

double Model::total_info(double t) const {
  if (!info_deterministic()) throw Error(ErrorKind::InvalidSpec, "information is random for this model");
  double acc = 0.0;
  for (int i = 0; i < sensors(); ++i) acc += sensor_info(i, t);
  return acc + deterministic_cross_sum(t);
}

double Model::integrand(int i, double t, double y_i) const {
  const auto ui = static_cast<std::size_t>(i);
  switch (spec_.kind) {
    case ModelKind::BrownianConstant:
    case ModelKind::SquareRootDiffusion: return spec_.x[ui];
    case ModelKind::GaussianDetInfo: return spec_.b[ui](t);
    case ModelKind::OrnsteinUhlenbeck:
    case ModelKind::CorrelatedDiffusion: return y_i;
  }
  return 0.0;
}

namespace {

// Evaluates sigma(t) (CorrelatedDiffusion) or chol(rho(t)) (GaussianDetInfo), caching
// the factor while the coefficients are constant.
class NoiseFactor {
 public:
  NoiseFactor(const ModelSpec& s) : s_(s), k_(s.sensors) {
    const auto& m = s.kind == ModelKind::GaussianDetInfo ? s.rho : s.sigma;
    constant_ = std::all_of(m.begin(), m.end(), [](const auto& row) {
      return std::all_of(row.begin(), row.end(), [](const TimeFunction& f) { return f.is_constant(); });
    });
    if (constant_) update(0.0);
  }

  // Returns (factor, alpha) at time t, row-major.
  void at(double t) {
    if (!constant_) update(t);
  }
  const std::vector<double>& factor() const { return factor_; }
  const std::vector<double>& alpha() const { return alpha_; }

 private:
  void update(double t) {
    const auto n = static_cast<std::size_t>(k_ * k_);
    alpha_.resize(n);
    if (s_.kind == ModelKind::GaussianDetInfo) {
      for (int i = 0; i < k_; ++i)
        for (int j = 0; j < k_; ++j)
          alpha_[idx(i, j, k_)] = s_.rho[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)](t);
      if (!psd_cholesky(alpha_, k_, factor_))
        throw Error(ErrorKind::InvalidSpec, fmt::format("rho is not positive semidefinite at t={}", t));
    } else {
      factor_.resize(n);
      for (int i = 0; i < k_; ++i)
        for (int j = 0; j < k_; ++j)
          factor_[idx(i, j, k_)] = s_.sigma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)](t);
      for (int i = 0; i < k_; ++i)
        for (int j = 0; j < k_; ++j) {
          double a = 0.0;
          for (int m = 0; m < k_; ++m) a += factor_[idx(i, m, k_)] * factor_[idx(j, m, k_)];
          alpha_[idx(i, j, k_)] = a;
        }
    }
  }

  const ModelSpec& s_;
  int k_;
  bool constant_ = false;
  std::vector<double> factor_;
  std::vector<double> alpha_;
};

}  // namespace

SensorPaths simulate_paths(const Model& model, double lambda, const TimeGrid& grid,
                           std::uint64_t seed, std::uint64_t replication) {
  if (!(grid.t_end > 0.0) || grid.n_steps == 0)
    throw Error(ErrorKind::GridMismatch, "grid must have a positive horizon and at least one step");
  const ModelSpec& s = model.spec();
  const int k = s.sensors;
  const auto uk = static_cast<std::size_t>(k);
  const std::size_t n = grid.n_steps;
  const double dt = grid.dt();
  const double sqdt = std::sqrt(dt);
  const double cap = s.magnitude_cap;

  SensorPaths out{grid, std::vector<std::vector<double>>(uk, std::vector<double>(n + 1, 0.0)), lambda,
                  seed, replication};
  auto& Y = out.Y;
  if (s.kind == ModelKind::SquareRootDiffusion)
    for (std::size_t i = 0; i < uk; ++i) Y[i][0] = s.y0[i];

  NormalSource normal(replication_stream(seed, replication));
  std::vector<double> z(uk), y(uk);
  auto blowup = [&](std::size_t step) {
    throw Error(ErrorKind::NumericalBlowup,
                fmt::format("|Y| exceeded {} at t={} (grid too coarse or horizon too long)", cap,
                            grid.time(step)));
  };

  switch (s.kind) {
    case ModelKind::BrownianConstant:
      for (std::size_t step = 1; step <= n; ++step)
        for (std::size_t i = 0; i < uk; ++i) {
          const double v = Y[i][step - 1] + lambda * s.x[i] * dt + sqdt * normal();
          Y[i][step] = v;
          if (std::abs(v) > cap) blowup(step);
        }
      break;
    case ModelKind::OrnsteinUhlenbeck:
      for (std::size_t step = 1; step <= n; ++step)
        for (std::size_t i = 0; i < uk; ++i) {
          const double prev = Y[i][step - 1];
          const double v = prev + lambda * s.alpha[i] * prev * dt + std::sqrt(s.alpha[i]) * sqdt * normal();
          Y[i][step] = v;
          if (std::abs(v) > cap) blowup(step);
        }
      break;
    case ModelKind::SquareRootDiffusion:
      // Full truncation: the negative part is clipped in both coefficients.
      for (std::size_t step = 1; step <= n; ++step)
        for (std::size_t i = 0; i < uk; ++i) {
          const double prev = Y[i][step - 1];
          const double pos = std::max(prev, 0.0);
          const double v = prev + lambda * s.x[i] * pos * dt + std::sqrt(pos) * sqdt * normal();
          Y[i][step] = v;
          if (std::abs(v) > cap) blowup(step);
        }
      break;
    case ModelKind::GaussianDetInfo:
    case ModelKind::CorrelatedDiffusion: {
      NoiseFactor noise(s);
      for (std::size_t step = 1; step <= n; ++step) {
        const double t = grid.time(step - 1);
        noise.at(t);
        const auto& L = noise.factor();
        const auto& a = noise.alpha();
        for (std::size_t i = 0; i < uk; ++i) {
          y[i] = Y[i][step - 1];
          z[i] = normal();
        }
        for (int i = 0; i < k; ++i) {
          double drift = 0.0;
          double diff = 0.0;
          for (int j = 0; j < k; ++j) {
            drift += model.integrand(j, t, y[static_cast<std::size_t>(j)]) * a[idx(i, j, k)];
            diff += L[idx(i, j, k)] * z[static_cast<std::size_t>(j)];
          }
          const double v = y[static_cast<std::size_t>(i)] + lambda * drift * dt + sqdt * diff;
          Y[static_cast<std::size_t>(i)][step] = v;
          if (std::abs(v) > cap) blowup(step);
        }
      }
      break;
    }
  }
  return out;
}

PathStats path_statistics(const SensorPaths& paths, const Model& model) {
  const ModelSpec& s = model.spec();
  const int k = s.sensors;
  const auto uk = static_cast<std::size_t>(k);
  const TimeGrid& grid = paths.grid;
  const std::size_t n = grid.n_steps;
  if (paths.Y.size() != uk)
    throw Error(ErrorKind::GridMismatch, fmt::format("paths have {} sensors, model has {}", paths.Y.size(), k));
  for (const auto& y : paths.Y)
    if (y.size() != grid.size()) throw Error(ErrorKind::GridMismatch, "path length does not match its grid");

  PathStats st;
  st.grid = grid;
  st.sensors = k;
  st.B_i.assign(uk, std::vector<double>(n + 1, 0.0));
  st.A_ij.assign(uk * uk, std::vector<double>(n + 1, 0.0));
  const double dt = grid.dt();
  const auto& Y = paths.Y;

  for (std::size_t i = 0; i < uk; ++i) {
    auto& Bi = st.B_i[i];
    const auto& y = Y[i];
    switch (s.kind) {
      case ModelKind::BrownianConstant:
      case ModelKind::SquareRootDiffusion: {
        const double xi = s.x[i];
        for (std::size_t step = 1; step <= n; ++step) Bi[step] = Bi[step - 1] + xi * (y[step] - y[step - 1]);
        break;
      }
      case ModelKind::GaussianDetInfo:
        for (std::size_t step = 1; step <= n; ++step)
          Bi[step] = Bi[step - 1] + s.b[i](grid.time(step - 1)) * (y[step] - y[step - 1]);
        break;
      case ModelKind::OrnsteinUhlenbeck:
      case ModelKind::CorrelatedDiffusion:
        for (std::size_t step = 1; step <= n; ++step) Bi[step] = Bi[step - 1] + y[step - 1] * (y[step] - y[step - 1]);
        break;
    }
  }

  if (model.info_deterministic()) {
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        auto& a = st.A_ij[idx(i, j, k)];
        for (std::size_t step = 0; step <= n; ++step) {
          const double t = grid.time(step);
          a[step] = i == j ? model.sensor_info(i, t) : model.cross_info(i, j, t);
        }
      }
  } else {
    switch (s.kind) {
      case ModelKind::OrnsteinUhlenbeck:
        for (int i = 0; i < k; ++i) {
          auto& a = st.A_ij[idx(i, i, k)];
          const auto& y = Y[static_cast<std::size_t>(i)];
          const double al = s.alpha[static_cast<std::size_t>(i)];
          for (std::size_t step = 1; step <= n; ++step)
            a[step] = a[step - 1] + al * y[step - 1] * y[step - 1] * dt;
        }
        break;
      case ModelKind::SquareRootDiffusion:
        for (int i = 0; i < k; ++i) {
          auto& a = st.A_ij[idx(i, i, k)];
          const auto& y = Y[static_cast<std::size_t>(i)];
          const double x2 = s.x[static_cast<std::size_t>(i)] * s.x[static_cast<std::size_t>(i)];
          for (std::size_t step = 1; step <= n; ++step)
            a[step] = a[step - 1] + x2 * std::max(y[step - 1], 0.0) * dt;
        }
        break;
      case ModelKind::CorrelatedDiffusion: {
        NoiseFactor noise(s);
        for (std::size_t step = 1; step <= n; ++step) {
          noise.at(grid.time(step - 1));
          const auto& al = noise.alpha();
          for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
              auto& a = st.A_ij[idx(i, j, k)];
              a[step] = a[step - 1] + Y[static_cast<std::size_t>(i)][step - 1] *
                                          Y[static_cast<std::size_t>(j)][step - 1] * al[idx(i, j, k)] * dt;
            }
        }
        break;
      }
      default: break;
    }
  }

  st.B.assign(n + 1, 0.0);
  st.A.assign(n + 1, 0.0);
  st.M.assign(n + 1, 0.0);
  for (std::size_t step = 0; step <= n; ++step) {
    double b = 0.0, a = 0.0;
    for (std::size_t i = 0; i < uk; ++i) b += st.B_i[i][step];
    for (std::size_t p = 0; p < uk * uk; ++p) a += st.A_ij[p][step];
    st.B[step] = b;
    st.A[step] = a;
    st.M[step] = b - paths.lambda_true * a;
  }
  return st;
}

double interpolate(const std::vector<double>& path, const TimeGrid& grid, double t) {
  if (t <= 0.0) return path.front();
  if (t >= grid.t_end) return path.back();
  const double u = t / grid.dt();
  auto k = static_cast<std::size_t>(u);
  if (k >= grid.n_steps) k = grid.n_steps - 1;
  const double frac = u - static_cast<double>(k);
  return path[k] + frac * (path[k + 1] - path[k]);
}

}  // namespace onebit
