#include "steiner/steiner_function.hpp"

#include <algorithm>
#include <cmath>

namespace steiner {

TruncatedSteinerFunction build_function(const VolumeSequence& v, int degree) {
  if (degree < 0 || degree > v.k_max)
    throw ValidationError("build_function: degree must be in [0, k_max]");
  TruncatedSteinerFunction f;
  const int last = std::min(degree, v.last_finite());
  f.degree = last;
  f.logc.assign(v.logV.begin(), v.logV.begin() + last + 1);
  f.v1 = v.k_max >= 1 && v.log_at(1) != neg_inf ? std::exp(v.log_at(1)) : 0.0;
  // The truncation dropped mass iff finite coefficients were cut, or the
  // source sequence continues past k_max (no termination in range).
  const bool terminates_in_range =
      v.last_finite() < v.k_max ||
      (v.dimension.has_value() && *v.dimension <= v.k_max);
  f.truncated_infinite = last < v.last_finite() || !terminates_in_range;
  // coefficient balancing: |c_N| w^N = 1 at |w| = 1
  f.scale_radius =
      f.degree > 0 ? std::exp(-f.logc[static_cast<size_t>(f.degree)] / f.degree)
                   : 1.0;
  return f;
}

namespace detail {

ScaledEval scaled_poly_eval(const std::vector<double>& log_coeffs, Complex w) {
  // Horner from the top coefficient down; value and derivative share one
  // running exponent E so their ratio stays exact.
  ScaledEval r;
  double E = 0.0;
  Complex p{0.0, 0.0}, dp{0.0, 0.0};
  for (int k = static_cast<int>(log_coeffs.size()) - 1; k >= 0; --k) {
    dp = dp * w + p;
    p = p * w;
    const double lc = log_coeffs[static_cast<size_t>(k)];
    if (lc != neg_inf) p += std::exp(lc - E);
    const double mag = std::max(std::abs(p), std::abs(dp));
    if (mag > 1e220 || (mag > 0.0 && mag < 1e-220)) {
      const double shift = std::log(mag);
      p *= std::exp(-shift);
      dp *= std::exp(-shift);
      E += shift;
    }
  }
  r.value = p;
  r.deriv = dp;
  r.log_scale = E;
  return r;
}

double log_poly_abs(const std::vector<double>& log_coeffs, double x) {
  if (x < 0.0) throw ValidationError("log_poly_abs: x must be >= 0");
  const double lx = x == 0.0 ? neg_inf : std::log(x);
  double acc = neg_inf;
  for (size_t k = 0; k < log_coeffs.size(); ++k) {
    if (log_coeffs[k] == neg_inf) continue;
    const double t =
        log_coeffs[k] + (x == 0.0 ? (k == 0 ? 0.0 : neg_inf)
                                  : static_cast<double>(k) * lx);
    acc = log_add(acc, t);
  }
  return acc;
}

double log_chevet_tail(double v1, double x, int N) {
  const double a = v1 * x;
  if (a <= 0.0) return neg_inf;
  const double q = a / (N + 2.0);
  const double head =
      (N + 1.0) * std::log(a) - std::lgamma(static_cast<double>(N) + 2.0);
  if (q < 1.0) return head - std::log1p(-q);
  return a;  // ln(sum) <= ln(e^a); degree far too low for this radius
}

}  // namespace detail

EvalResult eval_series(const TruncatedSteinerFunction& f, Complex z) {
  EvalResult out;
  const double r = f.scale_radius;
  const Complex w = z / r;
  // balanced coefficients b_k = c_k r^k
  std::vector<double> lb(f.logc.size());
  const double lnr = std::log(r);
  for (size_t k = 0; k < f.logc.size(); ++k)
    lb[k] = f.logc[k] == neg_inf ? neg_inf
                                 : f.logc[k] + static_cast<double>(k) * lnr;
  const auto ev = detail::scaled_poly_eval(lb, w);
  out.value = ev.value * std::exp(ev.log_scale);

  if (f.truncated_infinite) {
    const double lt = detail::log_chevet_tail(f.v1, std::abs(z), f.degree);
    out.tail_bound = std::exp(lt);
  } else {
    out.tail_bound = 0.0;
  }
  const double mag = std::abs(out.value);
  out.degree_too_low = out.tail_bound > 0.1 * mag;
  if (out.degree_too_low)
    logging::warn("eval_series: degree too low at |z|=" +
                  std::to_string(std::abs(z)) + " (tail bound " +
                  std::to_string(out.tail_bound) + ")");
  return out;
}

BoxEval eval_box_product(const BoxSpec& spec, Complex z) {
  spec.validate();
  BoxEval out;
  long J;
  double tail = 0.0;
  if (spec.is_rule()) {
    // match the sequence generator's explicit-head resolution
    J = spec.j_cut.value_or(std::max<long>(4096, 0));
    if (!spec.j_cut.has_value()) {
      // enough factors that the omitted product is a pure exp(|z| t) nudge
      J = 65536;
    }
    tail = spec.tail_sum_bound(J);
  } else {
    J = static_cast<long>(spec.sides.size());
  }
  const long j_first =
      spec.is_rule() && spec.rule->kind == BoxRule::Kind::log_squared ? 2 : 1;

  double log_mag = 0.0;
  double arg = 0.0;
  bool zero = false;
  for (long j = j_first; j <= J; ++j) {
    const Complex fac = 1.0 + spec.side(j) * z;
    const double m = std::abs(fac);
    if (m == 0.0) {
      zero = true;
      break;
    }
    log_mag += std::log(m);
    arg += std::arg(fac);
  }
  out.factors = J - j_first + 1;
  out.log_tail_factor = std::abs(z) * tail;
  out.value = zero ? Complex{0.0, 0.0}
                   : std::polar(std::exp(log_mag), arg);
  return out;
}

Complex hyper0F2(double alpha, double beta, Complex z) {
  for (double g : {alpha, beta}) {
    if (g <= 0.0 && g == std::floor(g))
      throw ValidationError("hyper0F2: parameter is a non-positive integer");
  }
  Complex term{1.0, 0.0};
  Complex sum{1.0, 0.0};
  int quiet = 0;
  for (long k = 0; k < 100000; ++k) {
    const double kd = static_cast<double>(k);
    term *= z / ((alpha + kd) * (beta + kd) * (kd + 1.0));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) {
      if (++quiet >= 30) return sum;
    } else {
      quiet = 0;
    }
  }
  throw NumericError("hyper0F2: series did not converge within 1e5 terms");
}

Complex spiral_closed_form(Complex z) {
  const Complex w = M_PI * z * z / 4.0;
  return hyper0F2(0.5, 1.0, w) + 2.0 * z * hyper0F2(1.5, 1.5, w);
}

Complex bridge_closed_form(Complex z) {
  const Complex w = M_PI * z * z / 4.0;
  return hyper0F2(0.5, 1.5, w) + 0.5 * M_PI * z * hyper0F2(1.5, 2.0, w);
}

}  // namespace steiner
