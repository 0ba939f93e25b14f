#pragma once

#include <span>

#include "steiner/growth.hpp"
#include "steiner/steiner_function.hpp"

namespace steiner {

struct Zero {
  Complex z{0.0, 0.0};
  double residual_rel = 0.0;  // |p(z)| / sum_k c_k |z|^k after polish
  bool artifact = false;      // beyond the truncation's reliable radius
  bool multiple = false;      // clustered with another root
};

struct ZeroSet {
  std::vector<Zero> zeros;  // sorted by modulus, ascending
  double reliable_radius = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

/// Thrown when the simultaneous iteration stalls; carries what converged.
class ZeroFindError : public NumericError {
 public:
  ZeroFindError(const std::string& msg, ZeroSet partial)
      : NumericError(msg), partial_(std::move(partial)) {}
  const ZeroSet& partial() const { return partial_; }

 private:
  ZeroSet partial_;
};

/// All degree-many roots of the truncated polynomial by Aberth-Ehrlich
/// simultaneous iteration on balanced coefficients, Newton-polished.
/// Initial guesses come from the Newton polygon of the log-coefficients.
ZeroSet find_zeros(const TruncatedSteinerFunction& f, int max_iter = 500);

struct ExponentEstimate {
  double exponent = 0.0;  // slope of ln n against ln|z_n|
  double stderr_ = 0.0;
  bool ill_conditioned = false;  // |z_n| ~ 1 throughout the window
};

/// Convergence exponent of the zero moduli over a rank window (1-based,
/// inclusive); for canonical products this estimates the order.
ExponentEstimate convergence_exponent(const ZeroSet& zs, Window rank_window);

/// e^(cz) prod_j (1 - z/z_j) over the non-artifact zeros.
Complex hadamard_eval(const ZeroSet& zs, Complex c, Complex z);

struct CompareResult {
  double max_rel_dev = 0.0;
  int skipped = 0;  // sample points that landed on a zero
};

/// Max over sample points of |f - reconstruction| / |f|.
CompareResult hadamard_compare(const TruncatedSteinerFunction& f,
                               const ZeroSet& zs, Complex c,
                               std::span<const Complex> points);

}  // namespace steiner
