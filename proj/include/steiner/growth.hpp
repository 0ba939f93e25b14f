#pragma once

#include <optional>
#include <string>

#include "steiner/volumes.hpp"

namespace steiner {

/// Inclusive index range used by the regression estimators.
struct Window {
  int lo = 0;
  int hi = 0;
  int length() const { return hi - lo + 1; }
};

/// Default fit window [k_max/5, k_max]: drops the pre-asymptotic head,
/// keeps 80% of the data.
Window default_window(int k_max);

struct OrderEstimate {
  double rho_raw = 0.0;   // 1 / fitted n*ln(n) coefficient, unclamped
  double rho = 0.0;       // clamped into [0, 1]
  double stderr_ = 0.0;   // delta-method standard error of rho
  double naive_rho = 0.0; // pointwise n ln n / (-ln V_n) at the window end
  double residual_rms = 0.0;
  bool terminating = false;  // finite-dimensional shortcut: rho = 0
  bool grows = false;        // n*ln(n) coefficient <= 0 (not a GB profile)
  Window window;
};

/// Order from Taylor coefficients: least-squares fit of -ln V_n against
/// {n ln n, n, ln n, 1}; rho = 1/(leading coefficient). Terminating
/// sequences return rho = 0 immediately.
OrderEstimate estimate_order_from_coeffs(const VolumeSequence& v, Window w);

/// Order from the m_k ratios: fit of -ln(m_k/k) against {ln k, 1};
/// rho = 1/slope.
OrderEstimate estimate_order_from_mk(const VolumeSequence& v, Window w);

/// Type via (sigma e rho)^(1/rho) = lim n^(1/rho) |V_n|^(1/n), evaluated
/// as t_n = exp(ln n / rho + ln V_n / n) averaged over a short trailing
/// window ending at n_eval; sigma = t^rho / (e rho).
double estimate_type(const VolumeSequence& v, double rho, int n_eval);

struct MkDecay {
  std::optional<double> exponent;  // nullopt: m_k does not decay
  double fitted_slope = 0.0;
  double stderr_ = 0.0;
};

/// Slope of ln m_k against ln k over the window.
MkDecay mk_decay_exponent(const VolumeSequence& v, Window w);

struct OscBounds {
  double lower = 0.0;  // no rigorous positive lower bound from finite data
  double upper = 0.0;  // last m_k: rigorous by monotonicity
  double trailing_drop = 0.0;  // m_end / m at 3/4 of the range (1 = flat)
  std::string note;
};

OscBounds oscillation_bounds(const VolumeSequence& v);

enum class GcClass { GC, NotGC, Inconclusive };
std::string to_string(GcClass c);

enum class GvVerdict { consistent, violated };
std::string to_string(GvVerdict v);

struct GaoVitaleResult {
  GvVerdict verdict = GvVerdict::consistent;
  double exponent = 0.0;        // fitted decay exponent over the window
  bool msqrtk_increasing = false;  // m_k sqrt(k) increasing on trailing half
  double drop_factor = 0.0;     // m(window start) / m(window end)
  Window window;
};

/// Numerical check of the m_k decay-rate dichotomy: "violated" needs the
/// fitted exponent above -1/2 + margin, m_k*sqrt(k) increasing across
/// the trailing half, and an overall >= 2x decrease of m_k.
GaoVitaleResult gao_vitale_test(const VolumeSequence& v, Window w,
                                double margin = 0.05);

struct GrowthReport {
  double rho_hat = 0.0;
  double rho_raw = 0.0;
  double rho_stderr = 0.0;
  double naive_rho = 0.0;
  double residual = 0.0;           // order-fit RMS
  double rho_from_mk = 0.0;        // consistency diagnostic
  std::optional<double> sigma_hat; // nullopt renders as "undefined"
  std::optional<double> mk_decay_exponent_hat;  // nullopt: "none"
  double mk_decay_slope = 0.0;
  double osc_upper = 0.0;
  double osc_trailing_drop = 0.0;
  bool terminating = false;
  Window window;
  GcClass classification = GcClass::Inconclusive;
  std::optional<GaoVitaleResult> gao_vitale;
  std::string diagnostics;
};

/// Deterministic function of the report fields: GC when the order CI is
/// below 1 or the oscillation bound is under gc_threshold and still
/// falling; NotGC when the m_k tail is flat above the threshold with
/// rho consistent with 1. A verdict on a truncation, not a proof.
GcClass classify_gc(const GrowthReport& r, double gc_threshold = 1e-3);

struct AnalyzeOptions {
  std::optional<Window> window;       // default [k_max/5, k_max]
  std::optional<double> rho_plug;     // force sigma with this rho
  double gc_threshold = 1e-3;
  bool run_gao_vitale = true;
};

/// Full pipeline over one sequence (order, type, decay, oscillation,
/// classification, conjecture check). ULC failures raise ValidationError:
/// estimation on non-ULC data is out of contract.
GrowthReport analyze_sequence(const VolumeSequence& v,
                              const AnalyzeOptions& opt = {});

}  // namespace steiner
