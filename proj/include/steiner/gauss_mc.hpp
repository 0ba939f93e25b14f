#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "steiner/volumes.hpp"

namespace steiner {

struct McEstimate {
  double value = 0.0;
  double stderr_ = 0.0;  // sample standard deviation / sqrt(n)
  long n_samples = 0;
  uint64_t seed = 0;
  std::string method;
  double lambda = 0.0;
  double ess = 0.0;  // effective sample size (importance sampling)
  int workers = 1;
};

/// Euclidean distance from x to the box [0,l_1] x ... x [0,l_d].
double dist_to_box(std::span<const double> x, std::span<const double> sides);

/// Exact Steiner polynomial sum_{k=0}^{d} kappa_{d-k} V_k lambda^{d-k}
/// for a finite-dimensional sequence embedded in R^d.
double steiner_polynomial_value(const VolumeSequence& v, int d, double lambda);

/// Rejection estimate of Vol_d(K + lambda B^d): uniform samples on
/// prod [-lambda, l_j + lambda], acceptance where dist <= lambda.
McEstimate tube_volume_mc(std::span<const double> sides, double lambda,
                          long n, uint64_t seed, int workers = 1);

/// Importance-sampled Gaussian tube integral int exp(-pi dist^2(x,K)) dx
/// (= W(K)); proposal is an isotropic Gaussian at the box center with
/// the given scale (default max(l)/2 + 3).
McEstimate wills_mc(std::span<const double> sides, long n, uint64_t seed,
                    double proposal_scale = -1.0, int workers = 1);

/// Expectation-side of the infinite-dimensional tube formula:
/// E exp(sup_{t in K} [sqrt(2 pi) lambda xi(t) - pi lambda^2 |t|^2]),
/// coordinate-separable over a box with the closed-form 1-D maximizer
/// t* = clamp(a/(2b), 0, l). Antithetic pairs (N, -N) per sample.
/// Targets f_K(lambda) = prod (1 + l_j lambda).
McEstimate tsirelson_mc(std::span<const double> sides, double lambda, long n,
                        uint64_t seed, int workers = 1);

}  // namespace steiner
