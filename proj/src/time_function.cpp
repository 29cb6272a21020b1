#include "onebit/time_function.hpp"

#include <algorithm>
#include <cmath>

#include "onebit/errors.hpp"

namespace onebit {

namespace {

double horner(const std::vector<double>& c, double t) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

// Antiderivative evaluated at t (zero constant term).
double antiderivative(const std::vector<double>& c, double t) {
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * t + c[k] / static_cast<double>(k + 1);
  return acc * t;
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<double> poly_add(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

std::vector<double> merged_breaks(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Representative interior point of piece p of a merged partition.
double piece_point(const std::vector<double>& breaks, std::size_t p) {
  const double lo = p == 0 ? 0.0 : breaks[p - 1];
  if (p == breaks.size()) return lo + 1.0;
  return 0.5 * (lo + breaks[p]);
}

template <class Combine>
TimeFunction combine(const TimeFunction& f, const TimeFunction& g, Combine op) {
  const auto breaks = merged_breaks(f.breaks(), g.breaks());
  std::vector<std::vector<double>> pieces;
  pieces.reserve(breaks.size() + 1);
  for (std::size_t p = 0; p <= breaks.size(); ++p) {
    const double t = piece_point(breaks, p);
    const auto fi = std::upper_bound(f.breaks().begin(), f.breaks().end(), t) - f.breaks().begin();
    const auto gi = std::upper_bound(g.breaks().begin(), g.breaks().end(), t) - g.breaks().begin();
    pieces.push_back(op(f.pieces()[fi], g.pieces()[gi]));
  }
  return TimeFunction::piecewise_polynomial(breaks, std::move(pieces));
}

}  // namespace

TimeFunction::TimeFunction(Form form, std::vector<double> breaks,
                           std::vector<std::vector<double>> pieces)
    : form_(form), breaks_(std::move(breaks)), pieces_(std::move(pieces)) {
  if (pieces_.size() != breaks_.size() + 1)
    throw Error(ErrorKind::InvalidSpec, "time function needs exactly one more piece than breaks");
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    if (!(breaks_[i] > 0.0) || (i > 0 && !(breaks_[i] > breaks_[i - 1])))
      throw Error(ErrorKind::InvalidSpec, "time function breaks must be positive and increasing");
  }
  for (auto& piece : pieces_) {
    if (piece.empty()) piece.push_back(0.0);
    for (double c : piece)
      if (!std::isfinite(c)) throw Error(ErrorKind::InvalidSpec, "non-finite time function coefficient");
  }
  cumulative_.resize(breaks_.size());
  double acc = 0.0;
  double lo = 0.0;
  for (std::size_t p = 0; p < breaks_.size(); ++p) {
    acc += antiderivative(pieces_[p], breaks_[p]) - antiderivative(pieces_[p], lo);
    cumulative_[p] = acc;
    lo = breaks_[p];
  }
}

TimeFunction TimeFunction::constant(double value) {
  return TimeFunction(Form::Constant, {}, {{value}});
}

TimeFunction TimeFunction::polynomial(std::vector<double> coeffs) {
  return TimeFunction(Form::Polynomial, {}, {std::move(coeffs)});
}

TimeFunction TimeFunction::piecewise_constant(std::vector<double> breaks, std::vector<double> values) {
  std::vector<std::vector<double>> pieces;
  for (double v : values) pieces.push_back({v});
  return TimeFunction(Form::PiecewiseConstant, std::move(breaks), std::move(pieces));
}

TimeFunction TimeFunction::piecewise_polynomial(std::vector<double> breaks,
                                                std::vector<std::vector<double>> pieces) {
  return TimeFunction(Form::PiecewisePolynomial, std::move(breaks), std::move(pieces));
}

std::size_t TimeFunction::piece_index(double t) const {
  return static_cast<std::size_t>(std::upper_bound(breaks_.begin(), breaks_.end(), t) -
                                  breaks_.begin());
}

double TimeFunction::operator()(double t) const {
  if (breaks_.empty()) return horner(pieces_[0], t);
  return horner(pieces_[piece_index(t)], t);
}

double TimeFunction::integral(double t) const {
  if (t <= 0.0) return 0.0;
  const std::size_t p = piece_index(t);
  const double lo = p == 0 ? 0.0 : breaks_[p - 1];
  const double base = p == 0 ? 0.0 : cumulative_[p - 1];
  return base + antiderivative(pieces_[p], t) - antiderivative(pieces_[p], lo);
}

TimeFunction TimeFunction::operator*(const TimeFunction& other) const {
  return combine(*this, other, poly_mul);
}

TimeFunction TimeFunction::operator+(const TimeFunction& other) const {
  return combine(*this, other, poly_add);
}

bool TimeFunction::is_identically_zero() const {
  for (const auto& piece : pieces_)
    for (double c : piece)
      if (c != 0.0) return false;
  return true;
}

bool TimeFunction::is_constant() const {
  const double v = pieces_[0][0];
  for (const auto& piece : pieces_) {
    if (piece[0] != v) return false;
    for (std::size_t k = 1; k < piece.size(); ++k)
      if (piece[k] != 0.0) return false;
  }
  return true;
}

std::vector<double> TimeFunction::probe_points() const {
  std::vector<double> pts{0.0};
  double lo = 0.0;
  for (double b : breaks_) {
    pts.push_back(0.5 * (lo + b));
    pts.push_back(b);
    lo = b;
  }
  for (double step : {0.5, 1.0, 10.0, 100.0}) pts.push_back(lo + step);
  return pts;
}

}  // namespace onebit
