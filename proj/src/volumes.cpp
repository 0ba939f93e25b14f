#include "steiner/volumes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace steiner {

namespace {

constexpr double kSlackTol = 1e-9;
// Rule boxes: literal truncation is used when the analytic 1e-12 tail
// rule lands below this many factors; otherwise the infinite tail is
// aggregated through power sums.
constexpr long kLiteralJCap = 50000;
constexpr long kUserJCap = 5000000;
constexpr int kTailPowerSums = 48;

double ln_factorial(long k) { return std::lgamma(static_cast<double>(k) + 1.0); }

}  // namespace

double log_kappa(long j) {
  if (j < 0) throw ValidationError("kappa: j must be >= 0");
  const double jd = static_cast<double>(j);
  return 0.5 * jd * std::log(M_PI) - std::lgamma(0.5 * jd + 1.0);
}

double kappa(long j) { return std::exp(log_kappa(j)); }

std::string to_string(SeqSource s) {
  switch (s) {
    case SeqSource::spiral: return "spiral";
    case SeqSource::bridge: return "bridge";
    case SeqSource::box: return "box";
    case SeqSource::user: return "user";
  }
  return "user";
}

SeqSource seq_source_from_string(const std::string& s) {
  if (s == "spiral") return SeqSource::spiral;
  if (s == "bridge") return SeqSource::bridge;
  if (s == "box") return SeqSource::box;
  if (s == "user") return SeqSource::user;
  throw ValidationError("unknown sequence source: " + s);
}

std::string to_string(BoxRule::Kind k) {
  switch (k) {
    case BoxRule::Kind::power_law: return "power_law";
    case BoxRule::Kind::exponential: return "exponential";
    case BoxRule::Kind::log_squared: return "log_squared";
  }
  return "power_law";
}

int VolumeSequence::last_finite() const {
  int last = 0;
  for (int k = 0; k <= k_max; ++k) {
    if (logV[static_cast<size_t>(k)] != neg_inf) last = k;
  }
  return last;
}

// ---------------------------------------------------------------------------
// BoxSpec
// ---------------------------------------------------------------------------

BoxSpec BoxSpec::explicit_sides(std::vector<double> sides) {
  BoxSpec s;
  // Canonical descending order: makes e_k independent of the input
  // permutation bit-for-bit.
  std::sort(sides.begin(), sides.end(), std::greater<>());
  s.sides = std::move(sides);
  s.validate();
  return s;
}

BoxSpec BoxSpec::from_rule(BoxRule::Kind kind, double param,
                           std::optional<long> j_cut) {
  BoxSpec s;
  s.rule = BoxRule{kind, param};
  s.j_cut = j_cut;
  s.validate();
  return s;
}

void BoxSpec::validate() const {
  if (rule.has_value() && !sides.empty())
    throw ValidationError("box spec: provide either sides or a rule, not both");
  if (!rule.has_value()) {
    if (sides.empty()) throw ValidationError("box spec: no sides given");
    if (j_cut.has_value())
      throw ValidationError("box spec: j_cut applies to rule boxes only");
    for (double l : sides) {
      if (!(l > 0.0) || !std::isfinite(l))
        throw ValidationError("box spec: sides must be strictly positive");
    }
    return;
  }
  switch (rule->kind) {
    case BoxRule::Kind::power_law:
      // alpha <= 1 gives V_1 = sum j^-alpha = inf: not Gaussian bounded.
      if (!(rule->param > 1.0))
        throw ValidationError("power_law rule requires alpha > 1 (V_1 finite)");
      break;
    case BoxRule::Kind::exponential:
      if (!(rule->param > 0.0))
        throw ValidationError("exponential rule requires c > 0 (V_1 finite)");
      break;
    case BoxRule::Kind::log_squared:
      break;
  }
  if (j_cut.has_value()) {
    if (*j_cut < 1) throw ValidationError("j_cut must be >= 1");
    if (*j_cut > kUserJCap)
      throw ValidationError("j_cut too large (cap 5e6 factors)");
  }
}

double BoxSpec::log_side(long j) const {
  if (!rule.has_value()) return std::log(sides[static_cast<size_t>(j - 1)]);
  const double jd = static_cast<double>(j);
  switch (rule->kind) {
    case BoxRule::Kind::power_law:
      return -rule->param * std::log(jd);
    case BoxRule::Kind::exponential:
      return -rule->param * jd;
    case BoxRule::Kind::log_squared: {
      // l_j = 1/(j ln^2 j), defined for j >= 2
      const double L = std::log(jd);
      return -std::log(jd) - 2.0 * std::log(L);
    }
  }
  return neg_inf;
}

double BoxSpec::side(long j) const { return std::exp(log_side(j)); }

double BoxSpec::tail_sum_bound(long J) const {
  if (!rule.has_value()) return 0.0;
  const double Jd = static_cast<double>(J);
  switch (rule->kind) {
    case BoxRule::Kind::power_law: {
      const double a = rule->param;
      return std::pow(Jd, 1.0 - a) / (a - 1.0);  // integral bound
    }
    case BoxRule::Kind::exponential: {
      const double c = rule->param;
      return std::exp(-c * (Jd + 1.0)) / (1.0 - std::exp(-c));
    }
    case BoxRule::Kind::log_squared:
      return 1.0 / std::log(Jd);  // integral of 1/(x ln^2 x)
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Closed-form generators
// ---------------------------------------------------------------------------

VolumeSequence spiral_volume_sequence(int k_max) {
  if (k_max < 0) throw ValidationError("k_max must be >= 0");
  VolumeSequence v;
  v.k_max = k_max;
  v.source = SeqSource::spiral;
  v.logV.resize(static_cast<size_t>(k_max) + 1);
  for (int k = 0; k <= k_max; ++k)
    v.logV[static_cast<size_t>(k)] = log_kappa(k) - ln_factorial(k);
  v.logV[0] = 0.0;
  return v;
}

VolumeSequence bridge_volume_sequence(int k_max) {
  if (k_max < 0) throw ValidationError("k_max must be >= 0");
  VolumeSequence v;
  v.k_max = k_max;
  v.source = SeqSource::bridge;
  v.logV.resize(static_cast<size_t>(k_max) + 1);
  for (int k = 0; k <= k_max; ++k)
    v.logV[static_cast<size_t>(k)] =
        log_kappa(k + 1) - M_LN2 - ln_factorial(k);
  v.logV[0] = 0.0;  // kappa_1/2 = 1 exactly
  return v;
}

VolumeSequence user_volume_sequence(const std::vector<double>& values) {
  if (values.empty()) throw ValidationError("user sequence: empty");
  if (values[0] != 1.0)
    throw ValidationError("user sequence: V_0 must equal 1");
  std::vector<double> logV(values.size());
  for (size_t k = 0; k < values.size(); ++k) {
    if (!(values[k] >= 0.0))
      throw ValidationError("user sequence: negative entry at k=" +
                            std::to_string(k));
    logV[k] = values[k] == 0.0 ? neg_inf : std::log(values[k]);
  }
  return user_volume_sequence_log(std::move(logV));
}

VolumeSequence user_volume_sequence_log(std::vector<double> logV) {
  if (logV.empty()) throw ValidationError("user sequence: empty");
  if (logV[0] != 0.0)
    throw ValidationError("user sequence: logV[0] must equal 0");
  for (double x : logV) {
    if (std::isnan(x) || x == std::numeric_limits<double>::infinity())
      throw ValidationError("user sequence: entries must be finite or -inf");
  }
  VolumeSequence v;
  v.k_max = static_cast<int>(logV.size()) - 1;
  v.source = SeqSource::user;
  v.logV = std::move(logV);
  return v;
}

// ---------------------------------------------------------------------------
// Box convolution machinery
// ---------------------------------------------------------------------------

namespace detail {

std::vector<double> convolve_sides_log(const std::vector<double>& log_sides,
                                       int k_max) {
  std::vector<double> e(static_cast<size_t>(k_max) + 1, neg_inf);
  e[0] = 0.0;
  long lim = 0;  // highest index that can be finite so far
  for (size_t j = 0; j < log_sides.size(); ++j) {
    const double ll = log_sides[j];
    lim = std::min<long>(k_max, lim + 1);
    for (long k = lim; k >= 1; --k) {
      const size_t ks = static_cast<size_t>(k);
      e[ks] = log_add(e[ks], ll + e[ks - 1]);
    }
  }
  return e;
}

std::vector<double> tail_exp_log_coeffs(const std::vector<double>& p,
                                        int k_max) {
  const int M = static_cast<int>(p.size()) - 1;
  // b_m = (-1)^(m+1) p_m / m stored as (log magnitude, sign)
  std::vector<double> lb(static_cast<size_t>(M) + 1, neg_inf);
  std::vector<double> sb(static_cast<size_t>(M) + 1, 0.0);
  for (int m = 1; m <= M; ++m) {
    if (p[static_cast<size_t>(m)] > 0.0) {
      lb[static_cast<size_t>(m)] =
          std::log(p[static_cast<size_t>(m)]) - std::log(m);
      sb[static_cast<size_t>(m)] = (m % 2 == 1) ? 1.0 : -1.0;
    }
  }
  // E_k = (1/k) sum_m m b_m E_{k-m}: signed log-sum-exp accumulation.
  // All E_k are elementary symmetric values of a positive multiset, so
  // the result of each accumulation is positive; the signed corrections
  // are hierarchically small in the validity regime.
  std::vector<double> logE(static_cast<size_t>(k_max) + 1, neg_inf);
  logE[0] = 0.0;
  std::vector<double> args, signs;
  for (int k = 1; k <= k_max; ++k) {
    args.clear();
    signs.clear();
    double mx = neg_inf;
    for (int m = 1; m <= std::min(M, k); ++m) {
      const size_t ms = static_cast<size_t>(m);
      if (lb[ms] == neg_inf) continue;
      const double le = logE[static_cast<size_t>(k - m)];
      if (le == neg_inf) continue;
      const double a = std::log(static_cast<double>(m)) + lb[ms] + le;
      args.push_back(a);
      signs.push_back(sb[ms]);
      mx = std::max(mx, a);
    }
    if (args.empty() || mx == neg_inf) continue;
    double s = 0.0;
    for (size_t i = 0; i < args.size(); ++i)
      s += signs[i] * std::exp(args[i] - mx);
    if (s <= 0.0) continue;  // cancelled to noise; genuinely negligible
    logE[static_cast<size_t>(k)] =
        mx + std::log(s) - std::log(static_cast<double>(k));
  }
  return logE;
}

namespace {

// sum_{j >= a} j^(-s) via Euler-Maclaurin (s/a small) or direct
// summation (steep decay). Accurate to ~1e-14 relative for a >= 256.
double tail_zeta(double s, double a) {
  if (s / a >= 0.02) {
    double tot = 0.0;
    for (double j = a;; j += 1.0) {
      const double t = std::pow(j, -s);
      tot += t;
      if (t < 1e-18 * tot) break;
      if (j > a + 6e6) break;
    }
    return tot;
  }
  const double integral = std::pow(a, 1.0 - s) / (s - 1.0);
  const double h = std::pow(a, -s);
  const double h1 = -s * std::pow(a, -s - 1.0);
  const double h3 = -s * (s + 1) * (s + 2) * std::pow(a, -s - 3.0);
  const double h5 =
      -s * (s + 1) * (s + 2) * (s + 3) * (s + 4) * std::pow(a, -s - 5.0);
  return integral + 0.5 * h - h1 / 12.0 + h3 / 720.0 - h5 / 30240.0;
}

// sum_{j >= a} j^(-m) (ln j)^(-2m). m = 1 has the closed integral
// 1/ln(a); m >= 2 sums directly and closes with Simpson on
// int e^{-(m-1)u} u^{-2m} du, u = ln x.
double tail_logsq_power(int m, double a) {
  if (m == 1) {
    const double L = std::log(a);
    const double h = 1.0 / (a * L * L);
    const double hp = -(1.0 / (a * a * L * L)) * (1.0 + 2.0 / L);
    return 1.0 / L + 0.5 * h - hp / 12.0;
  }
  double tot = 0.0;
  double j = a;
  for (;; j += 1.0) {
    const double t =
        std::pow(j, -static_cast<double>(m)) * std::pow(std::log(j), -2.0 * m);
    tot += t;
    if (t < 1e-18 * tot) break;
    if (j > a + 200000) break;
  }
  const double u0 = std::log(j);
  const double u1 = u0 + 60.0 / (m - 1);
  const int N = 2000;  // even panel count
  const double hstep = (u1 - u0) / N;
  double integral = 0.0;
  for (int i = 0; i <= N; ++i) {
    const double u = u0 + hstep * i;
    const double f = std::exp(-(m - 1) * u) * std::pow(u, -2.0 * m);
    const double w = (i == 0 || i == N) ? 1.0 : ((i % 2 == 1) ? 4.0 : 2.0);
    integral += w * f;
  }
  integral *= hstep / 3.0;
  return tot + integral;
}

}  // namespace

std::vector<double> tail_power_sums(const BoxRule& rule, long j0, int m_max) {
  std::vector<double> p(static_cast<size_t>(m_max) + 1, 0.0);
  const double a = static_cast<double>(j0) + 1.0;
  for (int m = 1; m <= m_max; ++m) {
    switch (rule.kind) {
      case BoxRule::Kind::power_law:
        p[static_cast<size_t>(m)] = tail_zeta(rule.param * m, a);
        break;
      case BoxRule::Kind::log_squared:
        p[static_cast<size_t>(m)] = tail_logsq_power(m, a);
        break;
      case BoxRule::Kind::exponential: {
        const double x = std::exp(-rule.param * m);
        p[static_cast<size_t>(m)] = std::pow(x, a) / (1.0 - x);
        break;
      }
    }
  }
  return p;
}

std::vector<double> log_conv(const std::vector<double>& a,
                             const std::vector<double>& b, int k_max) {
  std::vector<double> out(static_cast<size_t>(k_max) + 1, neg_inf);
  std::vector<double> terms;
  for (int k = 0; k <= k_max; ++k) {
    terms.clear();
    for (int i = 0; i <= k; ++i) {
      if (i >= static_cast<int>(a.size())) break;
      const int j = k - i;
      if (j >= static_cast<int>(b.size())) continue;
      const double t = a[static_cast<size_t>(i)] + b[static_cast<size_t>(j)];
      if (t != neg_inf) terms.push_back(t);
    }
    out[static_cast<size_t>(k)] = log_sum(terms);
  }
  return out;
}

namespace {

// Smallest J with analytic tail(J) <= 1e-12 * head(J), or LONG_MAX when
// that J is astronomically beyond reach (slow-decay rules).
long j_cut_for_tail_rule(const BoxSpec& spec) {
  const BoxRule& rule = *spec.rule;
  // head lower bound from the first few sides
  double head = 0.0;
  for (long j = (rule.kind == BoxRule::Kind::log_squared ? 2 : 1); j <= 64;
       ++j)
    head += spec.side(j);
  const double target = 1e-12 * head;
  switch (rule.kind) {
    case BoxRule::Kind::exponential: {
      const double c = rule.param;
      // e^{-c(J+1)}/(1-e^{-c}) <= target
      const double J =
          (-std::log(target * (1.0 - std::exp(-c)))) / c - 1.0;
      return static_cast<long>(std::ceil(std::max(1.0, J)));
    }
    case BoxRule::Kind::power_law: {
      const double a = rule.param;
      // J^{1-a}/(a-1) <= target
      const double lnJ = std::log(target * (a - 1.0)) / (1.0 - a);
      if (lnJ > 40.0) return std::numeric_limits<long>::max();
      return static_cast<long>(std::ceil(std::exp(lnJ)));
    }
    case BoxRule::Kind::log_squared:
      // 1/ln J <= target needs J = e^{1/target}: never reachable.
      return std::numeric_limits<long>::max();
  }
  return std::numeric_limits<long>::max();
}

std::vector<double> collect_log_sides(const BoxSpec& spec, long J) {
  std::vector<double> ls;
  const long j_first = (spec.is_rule() &&
                        spec.rule->kind == BoxRule::Kind::log_squared)
                           ? 2
                           : 1;
  ls.reserve(static_cast<size_t>(J));
  for (long j = j_first; j <= J; ++j) ls.push_back(spec.log_side(j));
  return ls;
}

}  // namespace

VolumeSequence box_volume_sequence_tuned(const BoxSpec& spec, int k_max,
                                         double head_scale) {
  spec.validate();
  if (k_max < 0) throw ValidationError("k_max must be >= 0");

  VolumeSequence v;
  v.k_max = k_max;
  v.source = SeqSource::box;

  std::ostringstream note;

  if (!spec.is_rule()) {
    const int d = static_cast<int>(spec.sides.size());
    std::vector<double> ls(spec.sides.size());
    for (size_t i = 0; i < spec.sides.size(); ++i)
      ls[i] = std::log(spec.sides[i]);
    v.logV = convolve_sides_log(ls, k_max);
    v.dimension = d;
    v.tail_error = "exact (explicit finite box, no truncation)";
    v.logV[0] = 0.0;
    return v;
  }

  const long floor_j = std::max<long>(256, 4L * std::max(k_max, 1));
  const long j_rule = j_cut_for_tail_rule(spec);

  if (spec.j_cut.has_value()) {
    // User-pinned truncation: literal finite box with j_cut sides.
    const long J = *spec.j_cut;
    v.logV = convolve_sides_log(collect_log_sides(spec, J), k_max);
    const double t = spec.tail_sum_bound(J);
    note << "truncated at j_cut=" << J << "; omitted tail sum <= " << t
         << "; e_k defect <= tail_sum * e_{k-1}";
    v.tail_error = note.str();
    if (J < static_cast<long>(k_max)) v.dimension = static_cast<int>(J);
    v.logV[0] = 0.0;
    return v;
  }

  const long literal_j =
      std::max(floor_j, j_rule == std::numeric_limits<long>::max()
                            ? std::numeric_limits<long>::max()
                            : j_rule);
  if (literal_j <= kLiteralJCap) {
    const long J = static_cast<long>(
        std::min<double>(static_cast<double>(kUserJCap),
                         std::ceil(static_cast<double>(literal_j) * head_scale)));
    v.logV = convolve_sides_log(collect_log_sides(spec, J), k_max);
    const double t = spec.tail_sum_bound(J);
    note << "auto-truncated at J=" << J << "; omitted tail sum <= " << t
         << " (<= 1e-12 of head); e_k defect <= tail_sum * e_{k-1}";
    v.tail_error = note.str();
    v.logV[0] = 0.0;
    return v;
  }

  // Slow-decay rule: explicit head + exact aggregation of the infinite
  // tail. Head size keeps the tail hierarchically small:
  // l_{J0} * k_max / p_1 <= ~0.2.
  long j0 = floor_j;
  if (spec.rule->kind == BoxRule::Kind::power_law) {
    const double a = spec.rule->param;
    j0 = std::max<long>(
        j0, static_cast<long>(std::ceil(5.0 * (a - 1.0) * k_max)));
  }
  j0 = static_cast<long>(std::ceil(static_cast<double>(j0) * head_scale));

  const std::vector<double> head =
      convolve_sides_log(collect_log_sides(spec, j0), k_max);
  const std::vector<double> p = tail_power_sums(*spec.rule, j0, kTailPowerSums);
  const std::vector<double> tail = tail_exp_log_coeffs(p, k_max);
  v.logV = log_conv(head, tail, k_max);
  note << "infinite tail beyond J0=" << j0
       << " aggregated exactly via power sums (m<=" << kTailPowerSums
       << "); residual O(1e-12) relative";
  v.tail_error = note.str();
  v.logV[0] = 0.0;
  return v;
}

}  // namespace detail

VolumeSequence box_volume_sequence(const BoxSpec& spec, int k_max) {
  return detail::box_volume_sequence_tuned(spec, k_max, 1.0);
}

// ---------------------------------------------------------------------------
// Validators, m_k, Wills
// ---------------------------------------------------------------------------

SequenceCheck validate_ulc(const VolumeSequence& v) {
  SequenceCheck r;
  r.check = "ultra-log-concavity";
  for (int k = 1; k + 1 <= v.k_max; ++k) {
    const double a = v.log_at(k - 1);
    const double b = v.log_at(k);
    const double c = v.log_at(k + 1);
    if (a == neg_inf || b == neg_inf || c == neg_inf) continue;
    const double slack =
        2.0 * b - a - c - std::log((k + 1.0) / static_cast<double>(k));
    if (slack < r.worst_slack) r.worst_slack = slack;
    if (slack < -kSlackTol && r.pass) {
      r.pass = false;
      r.first_fail_k = k;
    }
  }
  return r;
}

SequenceCheck validate_chevet(const VolumeSequence& v) {
  SequenceCheck r;
  r.check = "chevet";
  if (v.k_max < 1) return r;
  const double logV1 = v.log_at(1);
  for (int k = 1; k <= v.k_max; ++k) {
    const double lv = v.log_at(k);
    if (lv == neg_inf) continue;
    if (logV1 == neg_inf) {
      // V_1 = 0 forces V_k = 0 for k >= 1; a finite V_k violates.
      r.pass = false;
      r.first_fail_k = k;
      r.worst_slack = neg_inf;
      return r;
    }
    const double slack = k * logV1 - ln_factorial(k) - lv;
    if (slack < r.worst_slack) r.worst_slack = slack;
    if (slack < -kSlackTol && r.pass) {
      r.pass = false;
      r.first_fail_k = k;
    }
  }
  return r;
}

std::vector<double> mk_sequence(const VolumeSequence& v) {
  std::vector<double> m;
  if (v.k_max < 1) return m;
  m.resize(static_cast<size_t>(v.k_max));
  for (int k = 0; k < v.k_max; ++k) {
    const double a = v.log_at(k);
    const double b = v.log_at(k + 1);
    if (a == neg_inf) {
      if (b != neg_inf)
        throw ValidationError(
            "inconsistent sequence: V_k = 0 followed by V_{k+1} > 0 at k=" +
            std::to_string(k));
      m[static_cast<size_t>(k)] = 0.0;  // 0/0 := 0
    } else if (b == neg_inf) {
      m[static_cast<size_t>(k)] = 0.0;
    } else {
      m[static_cast<size_t>(k)] = std::exp(b - a + std::log(k + 1.0));
    }
  }
  return m;
}

WillsResult wills(const VolumeSequence& v) {
  WillsResult r;
  r.log_value = log_sum(v.logV);
  r.value = std::exp(r.log_value);
  const double v1 = v.k_max >= 1 ? std::exp(v.log_at(1)) : 0.0;
  // Chevet tail: sum_{k>K} V_1^k/k! <= V_1^{K+1}/(K+1)! * 1/(1-q)
  const long K = v.k_max;
  const double q = v1 / (K + 2.0);
  if (q < 1.0) {
    r.remainder_bound = std::exp((K + 1.0) * std::log(std::max(v1, 1e-300)) -
                                 ln_factorial(K + 1)) /
                        (1.0 - q);
    if (v1 == 0.0) r.remainder_bound = 0.0;
  } else {
    r.remainder_bound = std::exp(v1);  // k_max too small to bound usefully
    logging::warn("wills: k_max too small for a useful tail bound");
  }
  r.within_exp_v1 = r.log_value <= v1 + kSlackTol;
  if (!r.within_exp_v1)
    logging::warn("wills: W exceeds exp(V_1); sequence is not Chevet-consistent");
  return r;
}

}  // namespace steiner
