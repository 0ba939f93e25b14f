#include "steiner/gauss_mc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

#include "steiner/rng.hpp"

namespace steiner {

namespace {

struct Accum {
  double sum = 0.0, sum_c = 0.0;    // Kahan-compensated value sum
  double sum2 = 0.0, sum2_c = 0.0;  // and squared-value sum

  void add(double v) {
    double y = v - sum_c;
    double t = sum + y;
    sum_c = (t - sum) - y;
    sum = t;
    const double v2 = v * v;
    y = v2 - sum2_c;
    t = sum2 + y;
    sum2_c = (t - sum2) - y;
    sum2 = t;
  }
};

// Deterministic sharding: worker w of W takes sample indices congruent
// to w mod W; partials are combined in worker order, so the result is a
// pure function of (seed, n, W).
McEstimate run_sharded(long n, uint64_t seed, int workers,
                       const std::function<double(SampleRng&)>& sample) {
  if (n < 1000) throw ValidationError("mc: need n >= 1e3 samples");
  if (workers < 1) throw ValidationError("mc: workers must be >= 1");
  const int W = workers;
  std::vector<Accum> parts(static_cast<size_t>(W));

  auto work = [&](int w) {
    Accum acc;
    for (long i = w; i < n; i += W) {
      SampleRng rng(seed, static_cast<uint64_t>(i));
      acc.add(sample(rng));
    }
    parts[static_cast<size_t>(w)] = acc;
  };

  if (W == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(W));
    for (int w = 0; w < W; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }

  Accum total;
  for (const auto& p : parts) {
    total.sum += p.sum;
    total.sum2 += p.sum2;
  }
  const double nd = static_cast<double>(n);
  const double mean = total.sum / nd;
  const double var =
      std::max(0.0, (total.sum2 - nd * mean * mean) / (nd - 1.0));
  McEstimate est;
  est.value = mean;
  est.stderr_ = std::sqrt(var / nd);
  est.n_samples = n;
  est.seed = seed;
  est.workers = W;
  est.ess = total.sum2 > 0.0 ? total.sum * total.sum / total.sum2 : nd;
  return est;
}

void check_sides(std::span<const double> sides) {
  if (sides.empty()) throw ValidationError("mc: empty side list");
  for (double l : sides)
    if (!(l >= 0.0) || !std::isfinite(l))
      throw ValidationError("mc: sides must be finite and >= 0");
}

}  // namespace

double dist_to_box(std::span<const double> x, std::span<const double> sides) {
  if (x.size() != sides.size())
    throw ValidationError("dist_to_box: dimension mismatch");
  double s = 0.0;
  for (size_t j = 0; j < x.size(); ++j) {
    const double c = std::max({x[j] - sides[j], 0.0, -x[j]});
    s += c * c;
  }
  return std::sqrt(s);
}

double steiner_polynomial_value(const VolumeSequence& v, int d,
                                double lambda) {
  if (lambda < 0.0) throw ValidationError("steiner polynomial: lambda >= 0");
  if (v.last_finite() > d)
    throw ValidationError(
        "steiner polynomial: sequence dimension exceeds ambient d");
  double s = 0.0;
  for (int k = std::min(d, v.k_max); k >= 0; --k) {
    const double lv = v.log_at(k);
    if (lv == neg_inf) continue;
    s += kappa(d - k) * std::exp(lv) * std::pow(lambda, d - k);
  }
  return s;
}

McEstimate tube_volume_mc(std::span<const double> sides, double lambda,
                          long n, uint64_t seed, int workers) {
  check_sides(sides);
  if (!(lambda > 0.0)) throw ValidationError("tube mc: lambda must be > 0");
  const size_t d = sides.size();
  double bound_vol = 1.0;
  for (double l : sides) bound_vol *= l + 2.0 * lambda;

  std::vector<double> ls(sides.begin(), sides.end());
  auto est = run_sharded(n, seed, workers, [&, lambda, d](SampleRng& rng) {
    double s2 = 0.0;
    for (size_t j = 0; j < d; ++j) {
      const double x = -lambda + rng.next_unit() * (ls[j] + 2.0 * lambda);
      const double c = std::max({x - ls[j], 0.0, -x});
      s2 += c * c;
    }
    return s2 <= lambda * lambda ? 1.0 : 0.0;
  });
  // Acceptance-fraction estimate scales by the bounding volume; the
  // sample variance of the indicator is the binomial p(1-p) n/(n-1).
  est.value *= bound_vol;
  est.stderr_ *= bound_vol;
  est.method = "tube";
  est.lambda = lambda;
  return est;
}

McEstimate wills_mc(std::span<const double> sides, long n, uint64_t seed,
                    double proposal_scale, int workers) {
  check_sides(sides);
  const size_t d = sides.size();
  if (proposal_scale <= 0.0) {
    double lmax = 0.0;
    for (double l : sides) lmax = std::max(lmax, l);
    proposal_scale = lmax / 2.0 + 3.0;  // box plus the Gaussian collar
  }
  const double s = proposal_scale;
  const double log_norm = 0.5 * d * std::log(2.0 * M_PI * s * s);
  std::vector<double> ls(sides.begin(), sides.end());

  auto est = run_sharded(n, seed, workers, [&, s, d](SampleRng& rng) {
    double dist2 = 0.0, n2 = 0.0;
    for (size_t j = 0; j < d; ++j) {
      const double nj = rng.next_normal();
      n2 += nj * nj;
      const double x = 0.5 * ls[j] + s * nj;
      const double c = std::max({x - ls[j], 0.0, -x});
      dist2 += c * c;
    }
    // weight = exp(-pi dist^2) / q(x), q the proposal density
    return std::exp(-M_PI * dist2 + log_norm + 0.5 * n2);
  });
  est.method = "wills";
  if (est.ess < static_cast<double>(n) / 100.0)
    logging::warn("wills_mc: effective sample size " +
                  std::to_string(est.ess) +
                  " below n/100; adjust the proposal scale");
  return est;
}

McEstimate tsirelson_mc(std::span<const double> sides, double lambda, long n,
                        uint64_t seed, int workers) {
  check_sides(sides);
  if (lambda < 0.0) throw ValidationError("tsirelson mc: lambda must be >= 0");
  if (lambda == 0.0) {
    // both sides of the identity degenerate to V_0 = 1
    McEstimate est;
    est.value = 1.0;
    est.stderr_ = 0.0;
    est.n_samples = n;
    est.seed = seed;
    est.workers = workers;
    est.method = "tsirelson";
    est.lambda = 0.0;
    return est;
  }
  const size_t d = sides.size();
  const double b = M_PI * lambda * lambda;
  const double sq2pi_l = std::sqrt(2.0 * M_PI) * lambda;
  std::vector<double> ls(sides.begin(), sides.end());

  auto sup_exp = [&, b, d](std::span<const double> normals, double sign) {
    double g = 0.0;
    for (size_t j = 0; j < d; ++j) {
      const double a = sq2pi_l * sign * normals[j];
      const double t = std::clamp(a / (2.0 * b), 0.0, ls[j]);
      g += a * t - b * t * t;
    }
    return std::exp(g);
  };

  auto est = run_sharded(n, seed, workers, [&, d](SampleRng& rng) {
    double normals[64];
    std::vector<double> heap;
    double* nm = normals;
    if (d > 64) {
      heap.resize(d);
      nm = heap.data();
    }
    for (size_t j = 0; j < d; ++j) nm[j] = rng.next_normal();
    const std::span<const double> ns(nm, d);
    // antithetic pair (N, -N): unbiased, trims the heavy right tail
    return 0.5 * (sup_exp(ns, 1.0) + sup_exp(ns, -1.0));
  });
  est.method = "tsirelson";
  est.lambda = lambda;
  return est;
}

}  // namespace steiner
