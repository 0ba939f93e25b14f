#pragma once

#include <vector>

namespace steiner::detail {

/// Ordinary least squares via Householder QR. Columns of the design
/// matrix are passed as column vectors; rows must agree in length.
struct LsqFit {
  std::vector<double> coef;
  std::vector<double> stderr_;  // per-coefficient standard errors
  double residual_rms = 0.0;
};

LsqFit least_squares(const std::vector<std::vector<double>>& columns,
                     const std::vector<double>& y);

}  // namespace steiner::detail
