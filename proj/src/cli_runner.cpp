#include "steiner/cli_runner.hpp"

#include <CLI11.hpp>
#include <complex>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>

#include "steiner/gauss_mc.hpp"
#include "steiner/growth.hpp"
#include "steiner/serialize.hpp"
#include "steiner/steiner_function.hpp"
#include "steiner/zeros.hpp"

namespace steiner {

namespace {

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size())
      throw ValidationError("cannot parse number '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError("empty numeric list");
  return out;
}

Complex parse_complex(const std::string& s) {
  const auto v = parse_doubles(s);
  if (v.size() == 1) return Complex{v[0], 0.0};
  if (v.size() == 2) return Complex{v[0], v[1]};
  throw ValidationError("--z expects 're' or 're,im'");
}

struct FamilyOptions {
  std::string family = "spiral";
  std::string sides;
  std::string rule;
  double param = 0.0;
  std::string jcut = "auto";
  std::string file;
  int kmax = -1;  // resolved: explicit boxes default to their dimension

  int resolved_kmax() const {
    if (kmax >= 0) return kmax;
    if (family == "box" && !sides.empty())
      return static_cast<int>(parse_doubles(sides).size());
    return 2000;
  }
};

void add_family_flags(CLI::App* cmd, FamilyOptions& f) {
  cmd->add_option("--family", f.family, "spiral | bridge | box | user")
      ->check(CLI::IsMember({"spiral", "bridge", "box", "user"}));
  cmd->add_option("--sides", f.sides, "comma-separated box side lengths");
  cmd->add_option("--rule", f.rule,
                  "box side rule: power_law | exponential | log_squared");
  cmd->add_option("--param", f.param, "rule parameter (alpha or c)");
  cmd->add_option("--jcut", f.jcut, "rule truncation index or 'auto'");
  cmd->add_option("--file", f.file, "sequence JSON file (user family)");
  cmd->add_option("--kmax", f.kmax, "largest intrinsic-volume index");
}

BoxSpec box_from_options(const FamilyOptions& f) {
  if (!f.sides.empty()) {
    if (!f.rule.empty())
      throw ValidationError("give either --sides or --rule, not both");
    return BoxSpec::explicit_sides(parse_doubles(f.sides));
  }
  if (f.rule.empty())
    throw ValidationError("box family needs --sides or --rule");
  BoxRule::Kind kind;
  if (f.rule == "power_law")
    kind = BoxRule::Kind::power_law;
  else if (f.rule == "exponential")
    kind = BoxRule::Kind::exponential;
  else if (f.rule == "log_squared")
    kind = BoxRule::Kind::log_squared;
  else
    throw ValidationError("unknown rule '" + f.rule + "'");
  std::optional<long> jc;
  if (f.jcut != "auto") jc = std::stol(f.jcut);
  return BoxSpec::from_rule(kind, f.param, jc);
}

VolumeSequence sequence_from_options(const FamilyOptions& f) {
  const int kmax = f.resolved_kmax();
  if (f.family == "spiral") return spiral_volume_sequence(kmax);
  if (f.family == "bridge") return bridge_volume_sequence(kmax);
  if (f.family == "box") return box_volume_sequence(box_from_options(f), kmax);
  // user
  if (f.file.empty()) throw ValidationError("user family needs --file");
  std::ifstream in(f.file);
  if (!in) throw ValidationError("cannot open '" + f.file + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ValidationError(std::string("bad sequence JSON: ") + e.what());
  }
  return seq_from_json(j);
}

Json family_echo(const FamilyOptions& f) {
  Json j;
  j["family"] = f.family;
  j["kmax"] = f.resolved_kmax();
  if (!f.sides.empty()) j["sides"] = f.sides;
  if (!f.rule.empty()) {
    j["rule"] = f.rule;
    j["param"] = f.param;
    j["jcut"] = f.jcut;
  }
  if (!f.file.empty()) j["file"] = f.file;
  return j;
}

std::optional<Window> parse_window(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const auto v = parse_doubles(s);
  if (v.size() != 2) throw ValidationError("--window expects 'lo,hi'");
  return Window{static_cast<int>(v[0]), static_cast<int>(v[1])};
}

void emit(const Json& config, const Json& result, const std::string& format,
          const std::string& csv_payload, const std::string& out_path,
          std::ostream& out) {
  std::string payload;
  if (format == "json") {
    Json j;
    j["config"] = config;
    j["result"] = result;
    payload = j.dump(2) + "\n";
  } else {
    payload = "# config: " + config.dump() + "\n" + csv_payload;
  }
  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw ValidationError("cannot write '" + out_path + "'");
    f << payload;
  } else {
    out << payload;
  }
}

// ---------------------------------------------------------------------------

struct CommonOut {
  std::string format = "json";
  std::string out_path;
};

void add_out_flags(CLI::App* cmd, CommonOut& o) {
  cmd->add_option("--format", o.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", o.out_path, "write the payload to a file");
}

int cmd_volumes(const FamilyOptions& fam, const CommonOut& o,
                std::ostream& out) {
  const VolumeSequence v = sequence_from_options(fam);
  Json config = family_echo(fam);
  config["subcommand"] = "volumes";
  config["format"] = o.format;
  emit(config, seq_to_json(v), o.format, seq_to_csv(v, true), o.out_path, out);
  return 0;
}

int cmd_analyze(const FamilyOptions& fam, const CommonOut& o,
                const std::string& window, double rho_plug,
                double gc_threshold, std::ostream& out) {
  const VolumeSequence v = sequence_from_options(fam);
  AnalyzeOptions opt;
  opt.window = parse_window(window);
  if (rho_plug > 0.0) opt.rho_plug = rho_plug;
  opt.gc_threshold = gc_threshold;

  const auto ulc = validate_ulc(v);
  const auto chevet = validate_chevet(v);
  const GrowthReport rep = analyze_sequence(v, opt);

  Json config = family_echo(fam);
  config["subcommand"] = "analyze";
  if (!window.empty()) config["window"] = window;
  if (rho_plug > 0.0) config["rho"] = rho_plug;
  config["gc_threshold"] = gc_threshold;
  config["format"] = o.format;

  Json result = growth_report_to_json(rep);
  result["validators"] =
      Json{{"ulc", Json{{"pass", ulc.pass},
                        {"first_fail_k", ulc.first_fail_k},
                        {"worst_slack", ulc.worst_slack}}},
           {"chevet", Json{{"pass", chevet.pass},
                           {"first_fail_k", chevet.first_fail_k},
                           {"worst_slack", chevet.worst_slack}}}};
  emit(config, result, o.format, growth_to_csv(v), o.out_path, out);
  return 0;
}

int cmd_eval(const FamilyOptions& fam, const CommonOut& o,
             const std::string& zstr, int degree, std::ostream& out) {
  FamilyOptions f = fam;
  if (degree > f.resolved_kmax()) f.kmax = degree;
  const Complex z = parse_complex(zstr);
  const VolumeSequence v = sequence_from_options(f);
  const auto fn = build_function(v, std::min(degree, v.k_max));
  const EvalResult ev = eval_series(fn, z);

  Json result;
  result["re"] = ev.value.real();
  result["im"] = ev.value.imag();
  result["tail_bound"] = ev.tail_bound;
  result["degree_too_low"] = ev.degree_too_low;
  result["degree"] = fn.degree;

  // cross-check against the second evaluation path where one exists
  std::optional<Complex> other;
  std::string method;
  if (f.family == "spiral") {
    other = spiral_closed_form(z);
    method = "hypergeometric_closed_form";
  } else if (f.family == "bridge") {
    other = bridge_closed_form(z);
    method = "hypergeometric_closed_form";
  } else if (f.family == "box") {
    other = eval_box_product(box_from_options(f), z).value;
    method = "factor_product";
  }
  if (other.has_value()) {
    const double denom = std::max(std::abs(*other), 1e-300);
    result["cross_check"] = Json{
        {"method", method},
        {"re", other->real()},
        {"im", other->imag()},
        {"delta_rel", std::abs(ev.value - *other) / denom}};
  }

  Json config = family_echo(f);
  config["subcommand"] = "eval";
  config["z"] = zstr;
  config["degree"] = degree;
  config["format"] = o.format;

  std::ostringstream csv;
  csv << eval_grid_csv_header() << z.real() << "," << z.imag() << ","
      << ev.value.real() << "," << ev.value.imag() << "\n";
  emit(config, result, o.format, csv.str(), o.out_path, out);
  return 0;
}

int cmd_zeros(const FamilyOptions& fam, const CommonOut& o, int degree,
              const std::string& exp_window, int max_iter, std::ostream& out) {
  FamilyOptions f = fam;
  if (degree <= 0) {
    // whole polynomial for finite boxes, else a stable default
    degree = (f.family == "box" && !f.sides.empty())
                 ? static_cast<int>(parse_doubles(f.sides).size())
                 : 120;
  }
  if (degree > f.resolved_kmax()) f.kmax = degree;
  const VolumeSequence v = sequence_from_options(f);
  const auto fn = build_function(v, std::min(degree, v.k_max));
  const ZeroSet zs = find_zeros(fn, max_iter);

  Json result = zero_set_to_json(zs);
  if (!exp_window.empty()) {
    const auto w = parse_window(exp_window);
    const auto ee = convergence_exponent(zs, *w);
    result["convergence_exponent"] = Json{{"exponent", ee.exponent},
                                          {"stderr", ee.stderr_},
                                          {"ill_conditioned", ee.ill_conditioned}};
  }

  Json config = family_echo(f);
  config["subcommand"] = "zeros";
  config["degree"] = degree;
  if (!exp_window.empty()) config["exponent_window"] = exp_window;
  config["format"] = o.format;

  std::ostringstream csv;
  csv << "re,im,residual,artifact\n";
  for (const auto& zr : zs.zeros)
    csv << zr.z.real() << "," << zr.z.imag() << "," << zr.residual_rel << ","
        << (zr.artifact ? 1 : 0) << "\n";
  emit(config, result, o.format, csv.str(), o.out_path, out);
  return 0;
}

struct McOptions {
  std::string sides;
  double lambda = 0.5;
  long samples = 1000000;
  uint64_t seed = 1;
  int workers = 1;
  double proposal_scale = -1.0;
};

int cmd_mc(const std::string& method, const McOptions& m, const CommonOut& o,
           std::ostream& out) {
  const auto sides = parse_doubles(m.sides);
  McEstimate est;
  if (method == "tube") {
    est = tube_volume_mc(sides, m.lambda, m.samples, m.seed, m.workers);
  } else if (method == "wills") {
    est = wills_mc(sides, m.samples, m.seed, m.proposal_scale, m.workers);
  } else {
    est = tsirelson_mc(sides, m.lambda, m.samples, m.seed, m.workers);
  }

  Json result = mc_estimate_to_json(est);
  // analytic targets for convenience
  if (method == "tube") {
    const auto v = box_volume_sequence(BoxSpec::explicit_sides(sides),
                                       static_cast<int>(sides.size()));
    result["exact"] = steiner_polynomial_value(
        v, static_cast<int>(sides.size()), m.lambda);
  } else {
    double prod = 1.0;
    for (double l : sides)
      prod *= 1.0 + l * (method == "wills" ? 1.0 : m.lambda);
    result["exact"] = prod;
  }

  Json config;
  config["subcommand"] = "mc";
  config["method"] = method;
  config["sides"] = m.sides;
  config["lambda"] = m.lambda;
  config["samples"] = m.samples;
  config["seed"] = m.seed;
  config["workers"] = m.workers;
  if (m.proposal_scale > 0.0) config["proposal_scale"] = m.proposal_scale;
  config["format"] = o.format;

  std::ostringstream csv;
  csv << "method,value,stderr,n,seed\n"
      << method << "," << est.value << "," << est.stderr_ << ","
      << est.n_samples << "," << est.seed << "\n";
  emit(config, result, o.format, csv.str(), o.out_path, out);
  return 0;
}

int cmd_counterexample(int kmax, const CommonOut& o, std::ostream& out) {
  FamilyOptions f;
  f.family = "box";
  f.rule = "power_law";
  f.param = 1.25;
  f.kmax = kmax;
  const VolumeSequence v = sequence_from_options(f);
  const GrowthReport rep = analyze_sequence(v, {});

  Json config = family_echo(f);
  config["subcommand"] = "counterexample";
  config["format"] = o.format;

  Json result;
  result["report"] = growth_report_to_json(rep);
  if (rep.gao_vitale.has_value()) {
    result["gao_vitale_verdict"] = to_string(rep.gao_vitale->verdict);
    result["summary"] =
        std::string("m_k decays strictly slower than k^(-1/2) while still "
                    "vanishing: dichotomy ") +
        to_string(rep.gao_vitale->verdict);
  }
  emit(config, result, o.format, growth_to_csv(v), o.out_path, out);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out) {
  CLI::App app{"intrinsic-volume sequences, Steiner entire functions, and "
               "Gaussian-identity Monte Carlo checks"};
  app.require_subcommand(1);

  FamilyOptions fam;
  CommonOut o;
  std::string window, zstr = "0.5", exp_window;
  double rho_plug = 0.0, gc_threshold = 1e-3;
  int degree = 0, zeros_max_iter = 500, ce_kmax = 2000;
  McOptions mco;
  std::string mc_method;

  auto* c_vol = app.add_subcommand("volumes", "generate a V_k sequence");
  add_family_flags(c_vol, fam);
  add_out_flags(c_vol, o);

  auto* c_an = app.add_subcommand("analyze",
                                  "order/type/oscillation estimates and GC "
                                  "classification");
  add_family_flags(c_an, fam);
  add_out_flags(c_an, o);
  c_an->add_option("--window", window, "fit window 'lo,hi'");
  c_an->add_option("--rho", rho_plug, "plug this order into the type formula");
  c_an->add_option("--gc-threshold", gc_threshold,
                   "oscillation threshold for the GC verdict");

  auto* c_ev = app.add_subcommand("eval", "evaluate the Steiner function");
  add_family_flags(c_ev, fam);
  add_out_flags(c_ev, o);
  c_ev->add_option("--z", zstr, "evaluation point 're' or 're,im'");
  c_ev->add_option("--degree", degree, "truncation degree")->required();

  auto* c_ze = app.add_subcommand("zeros", "roots of the truncation");
  add_family_flags(c_ze, fam);
  add_out_flags(c_ze, o);
  c_ze->add_option("--degree", degree, "truncation degree (default: box "
                                       "dimension, else 120)");
  c_ze->add_option("--window", exp_window,
                   "rank window 'lo,hi' for the convergence exponent");
  c_ze->add_option("--zeros-max-iter", zeros_max_iter, "iteration cap")
      ->group("");  // hidden

  auto* c_mc = app.add_subcommand("mc", "Monte Carlo identity checks");
  c_mc->require_subcommand(1);
  for (const char* name : {"tube", "wills", "tsirelson"}) {
    auto* sub = c_mc->add_subcommand(
        name, std::string("estimate the ") + name + " identity");
    sub->add_option("--sides", mco.sides, "box side lengths")->required();
    sub->add_option("--lambda", mco.lambda, "tube radius / series argument");
    sub->add_option("--samples", mco.samples, "sample count");
    sub->add_option("--seed", mco.seed, "PRNG seed");
    sub->add_option("--workers", mco.workers, "deterministic shard count");
    sub->add_option("--proposal-scale", mco.proposal_scale,
                    "importance-sampling proposal scale (wills)");
    add_out_flags(sub, o);
    sub->callback([&mc_method, name] { mc_method = name; });
  }

  auto* c_ce = app.add_subcommand(
      "counterexample",
      "analyze the power_law(1.25) box: m_k -> 0 slower than k^(-1/2)");
  c_ce->add_option("--kmax", ce_kmax, "largest index (default 2000)");
  add_out_flags(c_ce, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    logging::error(std::string("argument error: ") + e.what());
    return 2;
  }

  try {
    if (c_vol->parsed()) return cmd_volumes(fam, o, out);
    if (c_an->parsed())
      return cmd_analyze(fam, o, window, rho_plug, gc_threshold, out);
    if (c_ev->parsed()) return cmd_eval(fam, o, zstr, degree, out);
    if (c_ze->parsed())
      return cmd_zeros(fam, o, degree, exp_window, zeros_max_iter, out);
    if (c_mc->parsed()) return cmd_mc(mc_method, mco, o, out);
    if (c_ce->parsed()) return cmd_counterexample(ce_kmax, o, out);
    logging::error("no subcommand given");
    return 2;
  } catch (const ValidationError& e) {
    logging::error(e.what());
    return 2;
  } catch (const NumericError& e) {
    logging::error(e.what());
    return 3;
  } catch (const std::exception& e) {
    logging::error(std::string("unexpected: ") + e.what());
    return 3;
  }
}

}  // namespace steiner
