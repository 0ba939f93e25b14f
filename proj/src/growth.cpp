#include "steiner/growth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "steiner/detail/lsq.hpp"

namespace steiner {

namespace {

constexpr int kMinWindow = 8;

void check_window(Window w, int lo_min, int hi_max, const char* who) {
  if (w.lo < lo_min || w.hi > hi_max || w.lo > w.hi)
    throw ValidationError(std::string(who) + ": window out of range");
  if (w.length() < kMinWindow)
    throw ValidationError(std::string(who) + ": window shorter than 8 points");
}

bool finite_on(const VolumeSequence& v, int lo, int hi) {
  for (int k = lo; k <= hi; ++k)
    if (v.log_at(k) == neg_inf) return false;
  return true;
}

}  // namespace

Window default_window(int k_max) {
  return Window{std::max(2, k_max / 5), k_max};
}

std::string to_string(GcClass c) {
  switch (c) {
    case GcClass::GC: return "GC";
    case GcClass::NotGC: return "NotGC";
    case GcClass::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::string to_string(GvVerdict v) {
  return v == GvVerdict::violated ? "violated" : "consistent";
}

OrderEstimate estimate_order_from_coeffs(const VolumeSequence& v, Window w) {
  OrderEstimate est;
  est.window = w;
  if (v.last_finite() < v.k_max) {
    // Finite-dimensional: the function is a polynomial, order 0.
    est.terminating = true;
    est.rho = est.rho_raw = 0.0;
    return est;
  }
  check_window(w, 2, v.k_max, "estimate_order_from_coeffs");
  if (!finite_on(v, w.lo, w.hi))
    throw ValidationError("estimate_order_from_coeffs: -inf inside window");

  const int n = w.length();
  std::vector<double> c_nlnn(n), c_n(n), c_lnn(n), c_1(n), y(n);
  for (int i = 0; i < n; ++i) {
    const double nn = w.lo + i;
    c_nlnn[i] = nn * std::log(nn);
    c_n[i] = nn;
    c_lnn[i] = std::log(nn);
    c_1[i] = 1.0;
    y[i] = -v.log_at(w.lo + i);
  }
  const auto fit = detail::least_squares({c_nlnn, c_n, c_lnn, c_1}, y);
  const double a = fit.coef[0];
  est.residual_rms = fit.residual_rms;
  est.naive_rho =
      w.hi * std::log(static_cast<double>(w.hi)) / (-v.log_at(w.hi));
  if (a <= 0.0) {
    est.grows = true;
    est.rho_raw = a == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / a;
    est.rho = std::clamp(est.rho_raw, 0.0, 1.0);
    est.stderr_ = std::numeric_limits<double>::infinity();
    logging::warn("order fit: n*ln(n) coefficient <= 0; sequence grows, "
                  "not a valid GB profile");
    return est;
  }
  est.rho_raw = 1.0 / a;
  est.rho = std::clamp(est.rho_raw, 0.0, 1.0);
  est.stderr_ = fit.stderr_[0] / (a * a);  // delta method
  return est;
}

OrderEstimate estimate_order_from_mk(const VolumeSequence& v, Window w) {
  OrderEstimate est;
  est.window = w;
  const auto m = mk_sequence(v);
  check_window(w, 1, static_cast<int>(m.size()) - 1, "estimate_order_from_mk");
  for (int k = w.lo; k <= w.hi; ++k) {
    if (!(m[static_cast<size_t>(k)] > 0.0))
      throw ValidationError(
          "estimate_order_from_mk: m_k = 0 inside window (finite-dimensional; "
          "rho = 0)");
  }
  const int n = w.length();
  std::vector<double> c_lnk(n), c_1(n), y(n);
  for (int i = 0; i < n; ++i) {
    const double k = w.lo + i;
    c_lnk[i] = std::log(k);
    c_1[i] = 1.0;
    y[i] = -std::log(m[static_cast<size_t>(w.lo + i)] / k);
  }
  const auto fit = detail::least_squares({c_lnk, c_1}, y);
  const double slope = fit.coef[0];
  est.residual_rms = fit.residual_rms;
  if (slope <= 0.0) {
    est.grows = true;
    est.rho_raw = std::numeric_limits<double>::infinity();
    est.rho = 1.0;
    est.stderr_ = std::numeric_limits<double>::infinity();
    return est;
  }
  est.rho_raw = 1.0 / slope;
  est.rho = std::clamp(est.rho_raw, 0.0, 1.0);
  est.stderr_ = fit.stderr_[0] / (slope * slope);
  return est;
}

double estimate_type(const VolumeSequence& v, double rho, int n_eval) {
  if (!(rho > 0.0) || rho > 1.0)
    throw ValidationError("estimate_type: need 0 < rho <= 1 "
                          "(type undefined at order 0 in this formula)");
  if (n_eval < 1 || n_eval > v.k_max)
    throw ValidationError("estimate_type: n_eval out of range");
  if (v.log_at(n_eval) == neg_inf)
    throw ValidationError("estimate_type: V_{n_eval} = 0");
  // short trailing window for stability
  const int wnd = std::clamp(n_eval / 40, 1, 64);
  double acc = 0.0;
  int cnt = 0;
  for (int n = std::max(1, n_eval - wnd + 1); n <= n_eval; ++n) {
    if (v.log_at(n) == neg_inf) continue;
    acc += std::log(static_cast<double>(n)) / rho + v.log_at(n) / n;
    ++cnt;
  }
  const double ln_t = acc / cnt;
  return std::exp(rho * ln_t) / (M_E * rho);
}

MkDecay mk_decay_exponent(const VolumeSequence& v, Window w) {
  MkDecay out;
  const auto m = mk_sequence(v);
  check_window(w, 1, static_cast<int>(m.size()) - 1, "mk_decay_exponent");
  const int n = w.length();
  std::vector<double> c_lnk(n), c_1(n), y(n);
  for (int i = 0; i < n; ++i) {
    const int k = w.lo + i;
    if (!(m[static_cast<size_t>(k)] > 0.0))
      throw ValidationError("mk_decay_exponent: m_k = 0 inside window");
    c_lnk[i] = std::log(static_cast<double>(k));
    c_1[i] = 1.0;
    y[i] = std::log(m[static_cast<size_t>(k)]);
  }
  const auto fit = detail::least_squares({c_lnk, c_1}, y);
  out.fitted_slope = fit.coef[0];
  out.stderr_ = fit.stderr_[0];
  if (out.fitted_slope > -0.01) {
    out.exponent = std::nullopt;  // positive limit, no decay
  } else {
    out.exponent = out.fitted_slope;
  }
  return out;
}

OscBounds oscillation_bounds(const VolumeSequence& v) {
  OscBounds b;
  const auto ulc = validate_ulc(v);
  if (!ulc.pass)
    throw ValidationError("oscillation_bounds: sequence is not ULC; "
                          "m_k monotonicity unavailable");
  const auto m = mk_sequence(v);
  if (m.empty()) {
    b.note = "single-entry sequence: no ratio information";
    return b;
  }
  b.upper = m.back();
  const size_t i34 = (m.size() * 3) / 4;
  const double m34 = m[std::min(i34, m.size() - 1)];
  b.trailing_drop = m34 > 0.0 ? m.back() / m34 : 0.0;
  std::ostringstream n;
  n << "upper bound = m_{" << m.size() - 1
    << "} (rigorous: m_k is non-increasing); trailing drop factor "
    << b.trailing_drop
    << "; no rigorous positive lower bound exists from finitely many terms";
  b.note = n.str();
  return b;
}

GaoVitaleResult gao_vitale_test(const VolumeSequence& v, Window w,
                                double margin) {
  GaoVitaleResult r;
  r.window = w;
  const auto m = mk_sequence(v);
  check_window(w, 1, static_cast<int>(m.size()) - 1, "gao_vitale_test");
  const auto decay = mk_decay_exponent(v, w);
  r.exponent = decay.fitted_slope;

  // (b) m_k sqrt(k) increasing across the trailing half of the window
  const int half = w.lo + w.length() / 2;
  r.msqrtk_increasing = true;
  double prev = m[static_cast<size_t>(half)] * std::sqrt(half);
  for (int k = half + 1; k <= w.hi; ++k) {
    const double cur = m[static_cast<size_t>(k)] * std::sqrt(k);
    if (cur <= prev) {
      r.msqrtk_increasing = false;
      break;
    }
    prev = cur;
  }

  // (c) overall decrease: evidence that lim m_k = 0
  const double m_lo = m[static_cast<size_t>(w.lo)];
  const double m_hi = m[static_cast<size_t>(w.hi)];
  r.drop_factor = m_hi > 0.0 ? m_lo / m_hi : std::numeric_limits<double>::infinity();

  const bool slow = r.exponent > -0.5 + margin;
  r.verdict = (slow && r.msqrtk_increasing && r.drop_factor >= 2.0)
                  ? GvVerdict::violated
                  : GvVerdict::consistent;
  return r;
}

GcClass classify_gc(const GrowthReport& r, double gc_threshold) {
  if (r.rho_hat + 2.0 * r.rho_stderr < 1.0) return GcClass::GC;
  if (r.osc_upper < gc_threshold && r.osc_trailing_drop <= 0.98)
    return GcClass::GC;
  const bool flat = r.osc_trailing_drop >= 0.99;
  const bool rho_near_one =
      std::abs(r.rho_hat - 1.0) <= 0.02 + 2.0 * r.rho_stderr;
  if (flat && r.osc_upper >= gc_threshold && rho_near_one)
    return GcClass::NotGC;
  return GcClass::Inconclusive;
}

GrowthReport analyze_sequence(const VolumeSequence& v,
                              const AnalyzeOptions& opt) {
  const auto ulc = validate_ulc(v);
  if (!ulc.pass) {
    std::ostringstream e;
    e << "analyze: sequence fails ultra-log-concavity at k=" << ulc.first_fail_k
      << " (worst slack " << ulc.worst_slack << "); estimation refused";
    throw ValidationError(e.str());
  }

  GrowthReport rep;
  rep.window = opt.window.value_or(default_window(v.k_max));
  std::ostringstream diag;

  try {
    const auto ord = estimate_order_from_coeffs(v, rep.window);
    rep.rho_hat = ord.rho;
    rep.rho_raw = ord.rho_raw;
    rep.rho_stderr = ord.stderr_;
    rep.naive_rho = ord.naive_rho;
    rep.residual = ord.residual_rms;
    rep.terminating = ord.terminating;
    if (ord.grows) diag << "order fit: non-GB growth profile. ";
  } catch (const ValidationError& e) {
    diag << "order fit unavailable: " << e.what() << ". ";
    rep.rho_hat = rep.rho_raw = 0.0;
    rep.rho_stderr = std::numeric_limits<double>::infinity();
  }

  if (!rep.terminating) {
    try {
      Window mw{rep.window.lo, std::min(rep.window.hi, v.k_max - 1)};
      rep.rho_from_mk = estimate_order_from_mk(v, mw).rho;
      const auto decay = mk_decay_exponent(v, mw);
      rep.mk_decay_exponent_hat = decay.exponent;
      rep.mk_decay_slope = decay.fitted_slope;
    } catch (const ValidationError& e) {
      diag << "m_k fits unavailable: " << e.what() << ". ";
    }
  }

  const auto osc = oscillation_bounds(v);
  rep.osc_upper = osc.upper;
  rep.osc_trailing_drop = osc.trailing_drop;

  double sigma_rho = 0.0;
  if (opt.rho_plug.has_value()) {
    sigma_rho = *opt.rho_plug;
  } else if (!rep.terminating &&
             std::abs(rep.rho_hat - 1.0) <= 0.02 + 2.0 * rep.rho_stderr) {
    sigma_rho = 1.0;  // rho consistent with 1: plug the boundary value
  }
  if (sigma_rho > 0.0) {
    const int n_eval = v.last_finite();
    try {
      rep.sigma_hat = estimate_type(v, sigma_rho, n_eval);
    } catch (const ValidationError& e) {
      diag << "type estimate unavailable: " << e.what() << ". ";
    }
  }

  if (opt.run_gao_vitale && !rep.terminating) {
    try {
      Window gw{std::max(8, v.k_max / 40), v.k_max - 1};
      rep.gao_vitale = gao_vitale_test(v, gw);
    } catch (const ValidationError& e) {
      diag << "gao-vitale test unavailable: " << e.what() << ". ";
    }
  }

  rep.classification = classify_gc(rep, opt.gc_threshold);
  rep.diagnostics = diag.str();
  return rep;
}

}  // namespace steiner
