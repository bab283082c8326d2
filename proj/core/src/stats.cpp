#include "elab/stats.hpp"

#include <cmath>
#include <limits>

#include "elab/error.hpp"

namespace elab {

double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw Error(ErrorCode::config_error, "slope fit needs two or more (x, y) pairs");
  const std::size_t n = xs.size();
  double sx = 0, sy = 0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (xs[i] <= 0 || ys[i] <= 0)
      throw Error(ErrorCode::config_error, "slope fit needs positive values");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / double(n);
  const double my = sy / double(n);
  double num = 0, den = 0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  if (den == 0) throw Error(ErrorCode::config_error, "slope fit needs distinct x values");
  return num / den;
}

double chi_square_uniform_stat(const std::vector<std::uint64_t>& counts) {
  if (counts.empty()) throw Error(ErrorCode::config_error, "chi-square needs at least one bin");
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw Error(ErrorCode::config_error, "chi-square needs a nonzero total");
  const double expected = double(total) / double(counts.size());
  double stat = 0;
  for (auto c : counts) {
    const double d = double(c) - expected;
    stat += d * d / expected;
  }
  return stat;
}

namespace {

// Q(a, x) by power series around 0: P(a, x) computed, Q = 1 - P.
double gamma_q_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= x / (a + double(k));
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-15) break;
  }
  const double p = sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  return 1.0 - p;
}

// Q(a, x) by Lentz continued fraction, stable for x > a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int k = 1; k < 500; ++k) {
    const double an = -double(k) * (double(k) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace

double regularized_gamma_upper(double a, double x) {
  if (a <= 0 || x < 0) return std::numeric_limits<double>::quiet_NaN();
  if (x == 0) return 1.0;
  if (x < a + 1.0) return gamma_q_series(a, x);
  return gamma_q_cf(a, x);
}

double chi_square_survival(double stat, int dof) {
  if (dof < 1) throw Error(ErrorCode::config_error, "chi-square needs dof >= 1");
  if (stat <= 0) return 1.0;
  return regularized_gamma_upper(double(dof) / 2.0, stat / 2.0);
}

} // namespace elab
