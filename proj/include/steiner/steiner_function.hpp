#pragma once

#include <complex>
#include <vector>

#include "steiner/volumes.hpp"

namespace steiner {

using Complex = std::complex<double>;

/// Degree-N Taylor truncation of f_K(z) = sum_k V_k z^k. Coefficients
/// are non-negative and stored as logs; evaluation works in the scaled
/// variable w = z / scale_radius to keep intermediates representable.
struct TruncatedSteinerFunction {
  std::vector<double> logc;  // ln V_k, k = 0..degree
  int degree = 0;
  double scale_radius = 1.0;
  double v1 = 0.0;                 // V_1 of the source sequence (tail bounds)
  bool truncated_infinite = false; // source continues past the kept degree
};

/// Copies logV into logc, truncating at the requested degree or the last
/// finite entry, whichever is smaller. scale_radius = exp(-logc[N]/N).
TruncatedSteinerFunction build_function(const VolumeSequence& v, int degree);

struct EvalResult {
  Complex value{0.0, 0.0};
  double tail_bound = 0.0;     // Chevet bound on the dropped series tail
  bool degree_too_low = false; // tail bound exceeds 10% of |value|
};

/// Horner evaluation in the scaled variable, with exponent tracking so
/// that interior coefficient humps cannot overflow.
EvalResult eval_series(const TruncatedSteinerFunction& f, Complex z);

struct BoxEval {
  Complex value{0.0, 0.0};
  double log_tail_factor = 0.0;  // ln of the omitted-factor bound exp(|z| t)
  long factors = 0;
};

/// Partial product prod_{j<=J} (1 + l_j z) with log-magnitude
/// accumulation; J is the spec's resolved truncation (rules) or the
/// full side list.
BoxEval eval_box_product(const BoxSpec& spec, Complex z);

/// 0F2(alpha, beta; z) = sum_k z^k / ((alpha)_k (beta)_k k!), term-ratio
/// recurrence; stops after 30 consecutive negligible terms (the pi z^2/4
/// argument interleaves even/odd magnitudes).
Complex hyper0F2(double alpha, double beta, Complex z);

/// Closed form for the Wiener-spiral hull:
/// 0F2(1/2, 1; pi z^2/4) + 2z 0F2(3/2, 3/2; pi z^2/4).
Complex spiral_closed_form(Complex z);

/// Closed form for the spiral-bridge hull:
/// 0F2(1/2, 3/2; pi z^2/4) + (pi z/2) 0F2(3/2, 2; pi z^2/4).
Complex bridge_closed_form(Complex z);

namespace detail {

// p(w) and p'(w) for a polynomial given by log-coefficients, evaluated
// with a shared tracked exponent: p = value * e^log_scale.
struct ScaledEval {
  Complex value{0.0, 0.0};
  Complex deriv{0.0, 0.0};
  double log_scale = 0.0;
};

ScaledEval scaled_poly_eval(const std::vector<double>& log_coeffs, Complex w);

// sum_k exp(log_coeffs[k]) * x^k for real x >= 0, log-domain, returns ln.
double log_poly_abs(const std::vector<double>& log_coeffs, double x);

// Chevet tail bound ln( sum_{k>N} (v1 x)^k / k! ) for x >= 0.
double log_chevet_tail(double v1, double x, int N);

}  // namespace detail

}  // namespace steiner
