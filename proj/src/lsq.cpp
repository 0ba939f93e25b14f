#include "steiner/detail/lsq.hpp"

#include <cmath>
#include <stdexcept>

namespace steiner::detail {

LsqFit least_squares(const std::vector<std::vector<double>>& columns,
                     const std::vector<double>& y) {
  const size_t p = columns.size();
  const size_t m = y.size();
  if (p == 0 || m < p) throw std::invalid_argument("least_squares: underdetermined");
  for (const auto& c : columns)
    if (c.size() != m) throw std::invalid_argument("least_squares: ragged columns");

  // Work matrix [A | y], column-major; Householder triangularization.
  std::vector<std::vector<double>> a(p + 1);
  for (size_t j = 0; j < p; ++j) a[j] = columns[j];
  a[p] = y;

  for (size_t k = 0; k < p; ++k) {
    double norm = 0.0;
    for (size_t i = k; i < m; ++i) norm += a[k][i] * a[k][i];
    norm = std::sqrt(norm);
    if (norm == 0.0) throw std::invalid_argument("least_squares: rank-deficient");
    if (a[k][k] > 0) norm = -norm;
    // v = x - norm*e_k, applied implicitly
    std::vector<double> v(m - k);
    for (size_t i = k; i < m; ++i) v[i - k] = a[k][i];
    v[0] -= norm;
    double vnorm2 = 0.0;
    for (double t : v) vnorm2 += t * t;
    if (vnorm2 == 0.0) continue;
    for (size_t j = k; j <= p; ++j) {
      double dot = 0.0;
      for (size_t i = k; i < m; ++i) dot += v[i - k] * a[j][i];
      const double f = 2.0 * dot / vnorm2;
      for (size_t i = k; i < m; ++i) a[j][i] -= f * v[i - k];
    }
    a[k][k] = norm;
  }

  // Back substitution on R (p x p) against Q^T y (first p entries of a[p]).
  LsqFit fit;
  fit.coef.assign(p, 0.0);
  for (size_t k = p; k-- > 0;) {
    double s = a[p][k];
    for (size_t j = k + 1; j < p; ++j) s -= a[j][k] * fit.coef[j];
    fit.coef[k] = s / a[k][k];
  }

  double rss = 0.0;
  for (size_t i = p; i < m; ++i) rss += a[p][i] * a[p][i];
  fit.residual_rms = std::sqrt(rss / static_cast<double>(m));
  const double dof = static_cast<double>(m > p ? m - p : 1);
  const double s2 = rss / dof;

  // cov = s2 * R^{-1} R^{-T}: build R^{-1} column by column and
  // accumulate row-wise squared norms for the diagonal.
  fit.stderr_.assign(p, 0.0);
  std::vector<double> rowsq(p, 0.0);
  for (size_t col = 0; col < p; ++col) {
    std::vector<double> x(p, 0.0);
    for (size_t k = p; k-- > 0;) {
      double s = (k == col) ? 1.0 : 0.0;
      for (size_t j = k + 1; j < p; ++j) s -= a[j][k] * x[j];
      x[k] = s / a[k][k];
    }
    for (size_t i = 0; i < p; ++i) rowsq[i] += x[i] * x[i];
  }
  for (size_t i = 0; i < p; ++i) fit.stderr_[i] = std::sqrt(s2 * rowsq[i]);
  return fit;
}

}  // namespace steiner::detail
