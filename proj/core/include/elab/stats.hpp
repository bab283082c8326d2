#ifndef ELAB_STATS_HPP
#define ELAB_STATS_HPP

#include <cstdint>
#include <vector>

namespace elab {

// Least-squares slope of ln(y) against ln(x).  Inputs must be positive and
// the same length (>= 2).
double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

// Pearson chi-square statistic of observed counts against a uniform
// distribution over the bins.
double chi_square_uniform_stat(const std::vector<std::uint64_t>& counts);

// Upper tail P(X >= stat) for a chi-square variable with `dof` degrees of
// freedom, via the regularized incomplete gamma function.
double chi_square_survival(double stat, int dof);

// Regularized upper incomplete gamma Q(a, x) for a > 0, x >= 0.
double regularized_gamma_upper(double a, double x);

} // namespace elab

#endif
