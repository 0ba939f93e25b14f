#include "steiner/zeros.hpp"

#include <algorithm>
#include <cmath>

#include "steiner/detail/lsq.hpp"

namespace steiner {

namespace {

// Initial guesses from the Newton polygon: the upper convex hull of
// (k, ln|b_k|) splits the degree into edges; each edge of horizontal run
// q contributes q guesses on the circle whose radius balances its two
// endpoint terms. Standard starting set for Aberth on polynomials whose
// coefficients span many orders of magnitude.
std::vector<Complex> initial_guesses(const std::vector<double>& lb) {
  const int n = static_cast<int>(lb.size()) - 1;  // degree
  std::vector<int> hull;  // indices of hull vertices, increasing k
  for (int k = 0; k <= n; ++k) {
    if (lb[static_cast<size_t>(k)] == neg_inf) continue;
    while (hull.size() >= 2) {
      const int a = hull[hull.size() - 2];
      const int b = hull[hull.size() - 1];
      // drop b if it lies below segment a-k
      const double sl_ab = (lb[static_cast<size_t>(b)] - lb[static_cast<size_t>(a)]) / (b - a);
      const double sl_ak = (lb[static_cast<size_t>(k)] - lb[static_cast<size_t>(a)]) / (k - a);
      if (sl_ab <= sl_ak)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(k);
  }
  std::vector<Complex> w;
  w.reserve(static_cast<size_t>(n));
  const double golden = 0.7548776662466927;  // irrational angle offset
  int edge_idx = 0;
  for (size_t e = 0; e + 1 < hull.size(); ++e, ++edge_idx) {
    const int k1 = hull[e], k2 = hull[e + 1];
    const int q = k2 - k1;
    const double radius = std::exp(
        (lb[static_cast<size_t>(k1)] - lb[static_cast<size_t>(k2)]) / q);
    for (int i = 0; i < q; ++i) {
      const double ang =
          2.0 * M_PI * ((i + 0.5) / q + golden * edge_idx + 0.13);
      w.push_back(std::polar(radius, ang));
    }
  }
  while (static_cast<int>(w.size()) < n)
    w.push_back(std::polar(1.0, 2.0 * M_PI * golden * w.size()));
  return w;
}

}  // namespace

ZeroSet find_zeros(const TruncatedSteinerFunction& f, int max_iter) {
  if (f.degree < 1)
    throw ValidationError("find_zeros: degree must be >= 1");
  const double r = f.scale_radius;
  const double lnr = std::log(r);
  std::vector<double> lb(f.logc.size());
  for (size_t k = 0; k < f.logc.size(); ++k)
    lb[k] = f.logc[k] == neg_inf ? neg_inf
                                 : f.logc[k] + static_cast<double>(k) * lnr;

  std::vector<Complex> w = initial_guesses(lb);
  std::vector<bool> done(w.size(), false);

  int it = 0;
  bool converged = false;
  for (; it < max_iter; ++it) {
    double max_step = 0.0;
    for (size_t i = 0; i < w.size(); ++i) {
      if (done[i]) continue;
      const auto ev = detail::scaled_poly_eval(lb, w[i]);
      if (std::abs(ev.value) == 0.0) {
        done[i] = true;
        continue;
      }
      const Complex newton = ev.value / ev.deriv;
      Complex repulsion{0.0, 0.0};
      for (size_t j = 0; j < w.size(); ++j) {
        if (j != i) repulsion += 1.0 / (w[i] - w[j]);
      }
      const Complex denom = 1.0 - newton * repulsion;
      const Complex step = denom == Complex{0.0, 0.0} ? newton : newton / denom;
      w[i] -= step;
      const double rel = std::abs(step) / (1.0 + std::abs(w[i]));
      max_step = std::max(max_step, rel);
      if (rel < 2e-15) done[i] = true;
    }
    if (max_step < 2e-15) {
      converged = true;
      break;
    }
  }

  // Newton polish
  for (auto& wi : w) {
    for (int s = 0; s < 3; ++s) {
      const auto ev = detail::scaled_poly_eval(lb, wi);
      if (std::abs(ev.deriv) == 0.0) break;
      const Complex step = ev.value / ev.deriv;
      if (std::abs(step) > 0.5 * (1.0 + std::abs(wi))) break;  // cluster
      wi -= step;
    }
  }

  ZeroSet out;
  out.iterations = it;
  out.zeros.resize(w.size());
  for (size_t i = 0; i < w.size(); ++i) {
    Zero& zr = out.zeros[i];
    zr.z = w[i] * r;
    const auto ev = detail::scaled_poly_eval(lb, w[i]);
    const double scale = detail::log_poly_abs(lb, std::abs(w[i]));
    zr.residual_rel =
        std::exp(std::log(std::max(std::abs(ev.value), 1e-300)) +
                 ev.log_scale - scale);
  }
  std::sort(out.zeros.begin(), out.zeros.end(),
            [](const Zero& a, const Zero& b) {
              return std::abs(a.z) < std::abs(b.z);
            });

  // multiplicity flags by proximity
  for (size_t i = 0; i + 1 < out.zeros.size(); ++i) {
    const double d = std::abs(out.zeros[i].z - out.zeros[i + 1].z);
    if (d < 1e-7 * (1.0 + std::abs(out.zeros[i].z))) {
      out.zeros[i].multiple = true;
      out.zeros[i + 1].multiple = true;
    }
  }

  // Reliable radius: truncation zeros approximate the entire function's
  // zeros only where the dropped tail is negligible against the
  // coefficient scale. Beyond it, roots are truncation artifacts.
  if (f.truncated_infinite && f.v1 > 0.0) {
    double lo = 0.0, hi = f.scale_radius;
    while (detail::log_chevet_tail(f.v1, hi, f.degree) <
           detail::log_poly_abs(lb, hi / r) - 9.0 * M_LN10) {
      hi *= 2.0;
      if (hi > 1e300) break;
    }
    for (int s = 0; s < 200 && hi < 1e300; ++s) {
      const double mid = 0.5 * (lo + hi);
      const bool ok =
          detail::log_chevet_tail(f.v1, mid, f.degree) <
          detail::log_poly_abs(lb, mid / r) - 9.0 * M_LN10;
      (ok ? lo : hi) = mid;
    }
    out.reliable_radius = lo;
    for (auto& zr : out.zeros)
      zr.artifact = std::abs(zr.z) > out.reliable_radius;
  }

  if (!converged) {
    throw ZeroFindError("find_zeros: Aberth iteration did not converge within " +
                            std::to_string(max_iter) + " sweeps",
                        std::move(out));
  }
  return out;
}

ExponentEstimate convergence_exponent(const ZeroSet& zs, Window rank_window) {
  ExponentEstimate out;
  const int n_zeros = static_cast<int>(zs.zeros.size());
  if (n_zeros < 10)
    throw ValidationError("convergence_exponent: need at least 10 zeros");
  if (rank_window.lo < 1 || rank_window.hi > n_zeros ||
      rank_window.length() < 3)
    throw ValidationError("convergence_exponent: bad rank window");

  bool any_above = false;
  const int m = rank_window.length();
  std::vector<double> x(m), c1(m), y(m);
  for (int i = 0; i < m; ++i) {
    const int rank = rank_window.lo + i;
    const double mod = std::abs(zs.zeros[static_cast<size_t>(rank - 1)].z);
    if (mod > 1.05) any_above = true;
    x[i] = std::log(std::max(mod, 1e-300));
    c1[i] = 1.0;
    y[i] = std::log(static_cast<double>(rank));
  }
  if (!any_above) {
    out.ill_conditioned = true;
    logging::warn("convergence_exponent: zero moduli <= 1+eps across the "
                  "window; ln|z_n| has no leverage");
  }
  const auto fit = detail::least_squares({x, c1}, y);
  out.exponent = fit.coef[0];
  out.stderr_ = fit.stderr_[0];
  return out;
}

Complex hadamard_eval(const ZeroSet& zs, Complex c, Complex z) {
  Complex prod = std::exp(c * z);
  for (const Zero& zr : zs.zeros) {
    if (zr.artifact) continue;
    prod *= 1.0 - z / zr.z;
  }
  return prod;
}

CompareResult hadamard_compare(const TruncatedSteinerFunction& f,
                               const ZeroSet& zs, Complex c,
                               std::span<const Complex> points) {
  CompareResult out;
  for (const Complex& z : points) {
    bool on_zero = false;
    for (const Zero& zr : zs.zeros) {
      if (std::abs(z - zr.z) < 1e-12 * (1.0 + std::abs(zr.z))) {
        on_zero = true;
        break;
      }
    }
    if (on_zero) {
      ++out.skipped;
      logging::info("hadamard_compare: sample point on a zero, skipped");
      continue;
    }
    const Complex fv = eval_series(f, z).value;
    const Complex rv = hadamard_eval(zs, c, z);
    if (std::abs(fv) == 0.0) {
      ++out.skipped;
      continue;
    }
    out.max_rel_dev = std::max(out.max_rel_dev, std::abs(fv - rv) / std::abs(fv));
  }
  return out;
}

}  // namespace steiner
