#include "steiner/serialize.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>

namespace steiner {

namespace {

std::string fmt(double x) {
  std::ostringstream o;
  o.precision(17);
  o << x;
  return o.str();
}

}  // namespace

Json seq_to_json(const VolumeSequence& v) {
  Json j;
  j["source"] = to_string(v.source);
  j["k_max"] = v.k_max;
  Json arr = Json::array();
  for (double x : v.logV) {
    if (x == neg_inf)
      arr.push_back("-inf");
    else
      arr.push_back(x);
  }
  j["logV"] = std::move(arr);
  j["tail_error"] = v.tail_error;
  if (v.dimension.has_value()) j["dimension"] = *v.dimension;
  return j;
}

VolumeSequence seq_from_json(const Json& j) {
  std::vector<double> logV;
  if (j.contains("logV")) {
    for (const auto& x : j.at("logV")) {
      if (x.is_string()) {
        const std::string s = x.get<std::string>();
        if (s != "-inf")
          throw ValidationError("sequence json: bad logV entry '" + s + "'");
        logV.push_back(neg_inf);
      } else {
        logV.push_back(x.get<double>());
      }
    }
  } else if (j.contains("values")) {
    std::vector<double> vals = j.at("values").get<std::vector<double>>();
    return user_volume_sequence(vals);
  } else {
    throw ValidationError("sequence json: need 'logV' or 'values'");
  }
  VolumeSequence v = user_volume_sequence_log(std::move(logV));
  if (j.contains("source"))
    v.source = seq_source_from_string(j.at("source").get<std::string>());
  if (j.contains("tail_error"))
    v.tail_error = j.at("tail_error").get<std::string>();
  if (j.contains("dimension")) v.dimension = j.at("dimension").get<int>();
  return v;
}

std::string seq_to_csv(const VolumeSequence& v, bool with_mk) {
  std::ostringstream o;
  o << (with_mk ? "k,V_k,logV_k,m_k\n" : "k,V_k,logV_k\n");
  std::vector<double> m;
  if (with_mk) m = mk_sequence(v);
  for (int k = 0; k <= v.k_max; ++k) {
    const double lv = v.log_at(k);
    o << k << ",";
    o << (lv == neg_inf ? "0" : fmt(std::exp(lv))) << ",";
    o << (lv == neg_inf ? "-inf" : fmt(lv));
    if (with_mk) {
      o << ",";
      if (k < static_cast<int>(m.size())) o << fmt(m[static_cast<size_t>(k)]);
    }
    o << "\n";
  }
  return o.str();
}

Json box_spec_to_json(const BoxSpec& s) {
  Json j;
  if (s.is_rule()) {
    j["rule"] = to_string(s.rule->kind);
    j["param"] = s.rule->param;
    if (s.j_cut.has_value())
      j["j_cut"] = *s.j_cut;
    else
      j["j_cut"] = "auto";
  } else {
    j["sides"] = s.sides;
  }
  return j;
}

BoxSpec box_spec_from_json(const Json& j) {
  if (j.contains("sides"))
    return BoxSpec::explicit_sides(j.at("sides").get<std::vector<double>>());
  if (!j.contains("rule"))
    throw ValidationError("box json: need 'sides' or 'rule'");
  const std::string r = j.at("rule").get<std::string>();
  BoxRule::Kind kind;
  if (r == "power_law")
    kind = BoxRule::Kind::power_law;
  else if (r == "exponential")
    kind = BoxRule::Kind::exponential;
  else if (r == "log_squared")
    kind = BoxRule::Kind::log_squared;
  else
    throw ValidationError("box json: unknown rule '" + r + "'");
  const double param = j.value("param", 0.0);
  std::optional<long> j_cut;
  if (j.contains("j_cut") && !j.at("j_cut").is_string())
    j_cut = j.at("j_cut").get<long>();
  return BoxSpec::from_rule(kind, param, j_cut);
}

Json growth_report_to_json(const GrowthReport& r) {
  Json j;
  j["rho_hat"] = r.rho_hat;
  j["rho_raw"] = std::isfinite(r.rho_raw) ? Json(r.rho_raw) : Json("inf");
  j["rho_stderr"] =
      std::isfinite(r.rho_stderr) ? Json(r.rho_stderr) : Json("inf");
  j["rho_from_mk"] = r.rho_from_mk;
  j["naive_rho"] = r.naive_rho;
  j["residual"] = r.residual;
  j["sigma_hat"] = r.sigma_hat.has_value() ? Json(*r.sigma_hat) : Json("undefined");
  j["mk_decay_exponent_hat"] = r.mk_decay_exponent_hat.has_value()
                                   ? Json(*r.mk_decay_exponent_hat)
                                   : Json("none");
  j["mk_decay_slope"] = r.mk_decay_slope;
  j["osc_lower"] = 0.0;
  j["osc_upper"] = r.osc_upper;
  j["osc_trailing_drop"] = r.osc_trailing_drop;
  j["terminating"] = r.terminating;
  j["window"] = Json::array({r.window.lo, r.window.hi});
  j["classification"] = to_string(r.classification);
  if (r.gao_vitale.has_value()) {
    const auto& g = *r.gao_vitale;
    j["gao_vitale"] = Json{{"verdict", to_string(g.verdict)},
                           {"exponent", g.exponent},
                           {"msqrtk_increasing", g.msqrtk_increasing},
                           {"drop_factor", g.drop_factor},
                           {"window", Json::array({g.window.lo, g.window.hi})}};
  }
  if (!r.diagnostics.empty()) j["diagnostics"] = r.diagnostics;
  return j;
}

std::string growth_to_csv(const VolumeSequence& v) {
  std::ostringstream o;
  o << "k,m_k,ln_k,ln_m_k,naive_rho_n\n";
  const auto m = mk_sequence(v);
  for (int k = 1; k <= v.k_max; ++k) {
    o << k << ",";
    const double mk =
        k < static_cast<int>(m.size()) ? m[static_cast<size_t>(k)] : 0.0;
    o << fmt(mk) << "," << fmt(std::log(static_cast<double>(k))) << ",";
    o << (mk > 0.0 ? fmt(std::log(mk)) : "-inf") << ",";
    const double lv = v.log_at(k);
    if (k >= 2 && lv != neg_inf && lv < 0.0)
      o << fmt(k * std::log(static_cast<double>(k)) / (-lv));
    o << "\n";
  }
  return o.str();
}

Json mc_estimate_to_json(const McEstimate& e) {
  Json j;
  j["value"] = e.value;
  j["stderr"] = e.stderr_;
  j["n"] = e.n_samples;
  j["seed"] = e.seed;
  j["method"] = e.method;
  j["lambda"] = e.lambda;
  j["ess"] = e.ess;
  j["workers"] = e.workers;
  return j;
}

Json zero_set_to_json(const ZeroSet& z) {
  Json arr = Json::array();
  for (const auto& zr : z.zeros) {
    arr.push_back(Json{{"re", zr.z.real()},
                       {"im", zr.z.imag()},
                       {"residual", zr.residual_rel},
                       {"artifact_flag", zr.artifact},
                       {"multiple", zr.multiple}});
  }
  Json j;
  j["zeros"] = std::move(arr);
  j["reliable_radius"] = std::isfinite(z.reliable_radius)
                             ? Json(z.reliable_radius)
                             : Json("inf");
  j["iterations"] = z.iterations;
  return j;
}

std::string eval_grid_csv_header() { return "re_z,im_z,re_f,im_f\n"; }

}  // namespace steiner
