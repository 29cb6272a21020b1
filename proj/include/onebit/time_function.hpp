#pragma once

#include <vector>

namespace onebit {

/// Deterministic coefficient b(t), rho(t) or sigma(t), restricted to piecewise
/// polynomials on [0, inf) so that products and integrals stay in closed form.
///
/// Piece p covers [breaks[p-1], breaks[p]) with implicit outer bounds 0 and +inf;
/// each piece holds polynomial coefficients in absolute time, lowest degree first.
class TimeFunction {
 public:
  enum class Form { Constant, Polynomial, PiecewiseConstant, PiecewisePolynomial };

  TimeFunction() : TimeFunction(constant(0.0)) {}

  static TimeFunction constant(double value);
  static TimeFunction polynomial(std::vector<double> coeffs);
  static TimeFunction piecewise_constant(std::vector<double> breaks, std::vector<double> values);
  static TimeFunction piecewise_polynomial(std::vector<double> breaks,
                                           std::vector<std::vector<double>> pieces);

  double operator()(double t) const;

  /// Exact integral over [0, t].
  double integral(double t) const;

  TimeFunction operator*(const TimeFunction& other) const;
  TimeFunction operator+(const TimeFunction& other) const;

  bool is_identically_zero() const;
  bool is_constant() const;

  /// Points at which the function is probed for validation: 0, every break,
  /// piece midpoints, and a few points past the last break.
  std::vector<double> probe_points() const;

  Form form() const { return form_; }
  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<std::vector<double>>& pieces() const { return pieces_; }

  bool operator==(const TimeFunction& other) const {
    return form_ == other.form_ && breaks_ == other.breaks_ && pieces_ == other.pieces_;
  }

 private:
  TimeFunction(Form form, std::vector<double> breaks, std::vector<std::vector<double>> pieces);

  std::size_t piece_index(double t) const;

  Form form_;
  std::vector<double> breaks_;
  std::vector<std::vector<double>> pieces_;
  std::vector<double> cumulative_;  // integral from 0 to breaks_[p]
};

}  // namespace onebit
