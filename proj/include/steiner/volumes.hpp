#pragma once

#include <optional>
#include <string>
#include <vector>

#include "steiner/common.hpp"

namespace steiner {

/// ln of the unit j-ball volume, kappa_j = pi^(j/2) / Gamma(j/2 + 1).
double log_kappa(long j);
double kappa(long j);

enum class SeqSource { spiral, bridge, box, user };

std::string to_string(SeqSource s);
SeqSource seq_source_from_string(const std::string& s);

/// Intrinsic-volume sequence in log storage. logV[k] = ln V_k(K);
/// -inf encodes V_k = 0. Once -inf, all later entries are -inf.
struct VolumeSequence {
  std::vector<double> logV;
  int k_max = 0;  // logV.size() - 1
  SeqSource source = SeqSource::user;
  std::string tail_error;        // truncation note, box sources
  std::optional<int> dimension;  // ambient dimension, finite boxes only

  double log_at(int k) const { return logV[static_cast<size_t>(k)]; }
  double value_at(int k) const { return std::exp(log_at(k)); }
  /// Index of the last finite entry, or -1 if none beyond V_0... V_0 is
  /// always finite, so >= 0.
  int last_finite() const;
};

struct BoxRule {
  enum class Kind { power_law, exponential, log_squared };
  Kind kind;
  double param = 0.0;  // alpha for power_law, c for exponential; unused otherwise
};

std::string to_string(BoxRule::Kind k);

/// Rectangular parallelepiped prod_j [0, l_j], explicit or rule-generated.
struct BoxSpec {
  std::vector<double> sides;      // explicit form (sorted descending on ingest)
  std::optional<BoxRule> rule;    // rule form
  std::optional<long> j_cut;      // rule form only; nullopt = auto

  static BoxSpec explicit_sides(std::vector<double> sides);
  static BoxSpec from_rule(BoxRule::Kind kind, double param,
                           std::optional<long> j_cut = std::nullopt);

  bool is_rule() const { return rule.has_value(); }
  void validate() const;     // throws ValidationError
  double side(long j) const; // 1-based; rule or explicit
  double log_side(long j) const;
  /// Analytic upper bound on sum_{j>J} l_j (rules only).
  double tail_sum_bound(long J) const;
};

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// V_k = kappa_k / k!  (closed convex hull of the Wiener spiral).
VolumeSequence spiral_volume_sequence(int k_max);

/// V_k = kappa_{k+1} / (2 k!)  (closed convex hull of the spiral bridge).
VolumeSequence bridge_volume_sequence(int k_max);

/// V_k = e_k(l_1, l_2, ...), the elementary symmetric functions of the
/// side lengths. Explicit lists convolve exactly; rule boxes either
/// truncate at an analytically chosen J_cut or aggregate the infinite
/// tail exactly (see tail_error on the result).
VolumeSequence box_volume_sequence(const BoxSpec& spec, int k_max);

/// Ingests raw V_k values (linear domain). No structural validation
/// beyond values[0] = 1 and non-negativity; run the validators next.
VolumeSequence user_volume_sequence(const std::vector<double>& values);

/// Ingests a log-domain sequence (interchange format).
VolumeSequence user_volume_sequence_log(std::vector<double> logV);

// ---------------------------------------------------------------------------
// Validators and derived quantities
// ---------------------------------------------------------------------------

struct SequenceCheck {
  bool pass = true;
  int first_fail_k = -1;
  double worst_slack = std::numeric_limits<double>::infinity();
  std::string check;
};

/// Ultra-log-concavity: V_k^2 >= ((k+1)/k) V_{k+1} V_{k-1}, checked in
/// log domain with slack tolerance 1e-9. The all-zero tail of
/// finite-dimensional sequences passes vacuously.
SequenceCheck validate_ulc(const VolumeSequence& v);

/// V_k <= V_1^k / k!, log domain, slack 1e-9.
SequenceCheck validate_chevet(const VolumeSequence& v);

/// m_k = (k+1) V_{k+1} / V_k for 0 <= k < k_max, with 0/0 := 0.
/// V_k = 0 with V_{k+1} > 0 is rejected as corrupt data.
std::vector<double> mk_sequence(const VolumeSequence& v);

struct WillsResult {
  double value = 1.0;
  double log_value = 0.0;
  double remainder_bound = 0.0;  // Chevet tail sum_{k>k_max} V_1^k/k!
  bool within_exp_v1 = true;     // W <= exp(V_1) + tolerance
};

/// Wills functional W = sum_k V_k via log-sum-exp.
WillsResult wills(const VolumeSequence& v);

namespace detail {

// Reference sequential convolution of factors (1 + l_j z) in the log
// domain; returns ln e_k for k <= k_max. Exposed for oracle tests.
std::vector<double> convolve_sides_log(const std::vector<double>& log_sides,
                                       int k_max);

// ln E_k of the series exp(sum_m (-1)^(m+1) p_m z^m / m), i.e. the
// elementary symmetric functions of a side multiset given its power
// sums p_m (power_sums[0] unused). Valid when the side set is
// hierarchically small: l_max * k_max / p_1 <= ~0.25.
std::vector<double> tail_exp_log_coeffs(const std::vector<double>& power_sums,
                                        int k_max);

// Power sums p_m = sum_{j>J0} l_j^m for a rule box, m = 1..m_max,
// via Euler-Maclaurin / direct summation hybrids.
std::vector<double> tail_power_sums(const BoxRule& rule, long j0, int m_max);

// ln of the convolution of two log-domain coefficient arrays.
std::vector<double> log_conv(const std::vector<double>& a,
                             const std::vector<double>& b, int k_max);

// Head size used by box_volume_sequence; head_scale > 1 enlarges the
// explicit head (stability testing).
VolumeSequence box_volume_sequence_tuned(const BoxSpec& spec, int k_max,
                                         double head_scale);

}  // namespace detail

}  // namespace steiner
