#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "loglim/loglim.hpp"
#include "paper_suite.hpp"
#include "svg.hpp"

using namespace loglim;

namespace {

// Bad input: exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A check that ran and failed: exit code 1.
class CheckFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string input;
  std::string config_file;
  std::string t_schedule;
  std::size_t samples = 0;
  std::string box;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string format;
  std::string out;
  std::vector<std::string> only;
  std::vector<std::string> params;
  bool polynomial = false;
  std::size_t dim = 0;
  // command specific
  double t = 0.0;
  std::string lambda;
  std::string cover;
  std::string target;
  std::string h;
  std::string series;
};

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> split_numbers(const std::string& text, std::size_t want, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(field, &used));
      if (field.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(field);
    } catch (const std::exception&) {
      throw UsageError(flag + ": malformed number '" + field + "'");
    }
  }
  if (want && out.size() != want) throw UsageError(flag + " expects " + std::to_string(want) + " comma-separated values");
  return out;
}

// Defaults, then the [sampler] section of --config, then LOGLIM_SEED, then flags.
SamplerConfig sampler_config(const RunConfig& rc, SamplerConfig cfg = {}) {
  if (!rc.config_file.empty()) {
    boost::property_tree::ptree tree;
    try {
      boost::property_tree::read_ini(rc.config_file, tree);
      auto s = tree.get_child_optional("sampler");
      if (s) {
        cfg.box_min = s->get("box_min", cfg.box_min);
        cfg.box_max = s->get("box_max", cfg.box_max);
        cfg.samples_per_t = s->get("samples", cfg.samples_per_t);
        cfg.t0 = s->get("t0", cfg.t0);
        cfg.t_ratio = s->get("t_ratio", cfg.t_ratio);
        cfg.t_count = s->get("t_count", cfg.t_count);
        cfg.eta0 = s->get("eta0", cfg.eta0);
        cfg.radius = s->get("radius", cfg.radius);
        cfg.cluster_tolerance = s->get("cluster_tolerance", cfg.cluster_tolerance);
        cfg.seed = s->get("seed", cfg.seed);
        cfg.refine_lines = s->get("refine_lines", cfg.refine_lines);
        cfg.line_grid = s->get("line_grid", cfg.line_grid);
        cfg.merge_window = s->get("merge_window", cfg.merge_window);
        cfg.threads = s->get("threads", cfg.threads);
      }
    } catch (const boost::property_tree::ptree_error& e) {
      throw UsageError(std::string("config: ") + e.what());
    }
  }
  if (const char* env = std::getenv("LOGLIM_SEED")) {
    try {
      cfg.seed = std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError("LOGLIM_SEED is not an unsigned integer");
    }
  }
  if (rc.seed_set) cfg.seed = rc.seed;
  if (!rc.t_schedule.empty()) {
    auto v = split_numbers(rc.t_schedule, 3, "--t-schedule");
    if (!(v[2] >= 1.0) || v[2] != std::floor(v[2])) throw UsageError("--t-schedule: count must be a positive integer");
    cfg.t0 = v[0];
    cfg.t_ratio = v[1];
    cfg.t_count = static_cast<std::size_t>(v[2]);
  }
  if (rc.samples) cfg.samples_per_t = rc.samples;
  if (!rc.box.empty()) {
    auto v = split_numbers(rc.box, 2, "--box");
    cfg.box_min = v[0];
    cfg.box_max = v[1];
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

std::uint64_t seed_of(const RunConfig& rc) { return sampler_config(rc).seed; }

ParameterEnvironment environment(const RunConfig& rc) {
  ParameterEnvironment env;
  for (const auto& p : rc.params) {
    auto eq = p.find('=');
    if (eq == std::string::npos) throw UsageError("--param expects name=value, got '" + p + "'");
    double v = split_numbers(p.substr(eq + 1), 1, "--param")[0];
    env.set(p.substr(0, eq), v);
  }
  return env;
}

Formula load_formula(const RunConfig& rc) {
  std::string text = read_text(rc.input);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
  return rc.polynomial ? normalize_polynomial(text) : parse_formula(text);
}

std::size_t dimension_of(const Formula& f, const RunConfig& rc) {
  auto vars = free_variables(f);
  std::size_t n = vars.empty() ? 1 : *vars.rbegin() + 1;
  if (rc.dim) {
    if (rc.dim < n) throw UsageError("--dim is smaller than the highest variable index");
    n = rc.dim;
  }
  return n;
}

PointCloud load_points(const std::string& path) {
  std::istringstream in(read_text(path));
  return ingest_points(in);
}

bool is_csv(const std::string& path) { return path.size() > 4 && path.substr(path.size() - 4) == ".csv"; }

std::string format_or(const RunConfig& rc, const std::string& fallback, std::initializer_list<const char*> allowed) {
  std::string f = rc.format.empty() ? fallback : rc.format;
  for (const char* a : allowed)
    if (f == a) return f;
  throw UsageError("format '" + f + "' is not available for this command");
}

// Writes to --out, or stdout.
template <class Fn>
void emit(const RunConfig& rc, Fn&& write) {
  if (rc.out.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream f(rc.out);
  if (!f) throw UsageError("cannot write " + rc.out);
  write(f);
}

nlohmann::json directions_json(const DirectionCloud& d) {
  nlohmann::json dirs = nlohmann::json::array();
  for (const auto& u : d.directions) dirs.push_back(u);
  return {{"dimension", d.dimension}, {"origin_member", d.origin_member}, {"directions", dirs}};
}

// Commands ----------------------------------------------------------------------

int cmd_dequantize(const RunConfig& rc) {
  std::string fmt = format_or(rc, "csv", {"csv", "json"});
  Formula f = load_formula(rc);
  TropicalFormula trop = dequantize_formula(f);
  ParameterEnvironment env = environment(rc);
  std::vector<Atom> atoms;
  map_atoms<Atom>(f, [&](const Atom& a) {
    atoms.push_back(a);
    return a;
  });
  bool bound = true;
  for (const auto& p : parameters_of(f))
    if (!env.contains(p)) bound = false;
  emit(rc, [&](std::ostream& out) {
    if (fmt == "json") {
      nlohmann::json j{{"formula", to_string(f)}, {"tropical", to_string(trop)}};
      nlohmann::json cs = nlohmann::json::array();
      for (const auto& a : atoms) {
        nlohmann::json e{{"atom", to_string(a)}};
        if (bound) e["constants"] = {sandwich_constant(a.lhs, env), sandwich_constant(a.rhs, env)};
        cs.push_back(e);
      }
      j["atoms"] = cs;
      out << j.dump(2) << '\n';
      return;
    }
    out << to_string(trop) << '\n';
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      out << "# atom " << i + 1 << ": ";
      if (bound)
        out << "C_lhs = " << format_double(sandwich_constant(atoms[i].lhs, env))
            << ", C_rhs = " << format_double(sandwich_constant(atoms[i].rhs, env)) << '\n';
      else
        out << "constants need every parameter bound with --param\n";
    }
  });
  return 0;
}

int cmd_amoeba(const RunConfig& rc) {
  std::string fmt = format_or(rc, "csv", {"csv", "svg"});
  SamplerConfig cfg = sampler_config(rc);
  PointCloud logs;
  double t = rc.t > 0.0 ? rc.t : cfg.t_values().back();
  if (!(t > 0.0 && t < 1.0)) throw UsageError("--t must lie in (0,1)");
  if (is_csv(rc.input)) {
    logs = amoeba_at(load_points(rc.input), t);
  } else {
    Formula f = load_formula(rc);
    std::size_t n = dimension_of(f, rc);
    cfg.t0 = t;
    cfg.t_count = 1;
    PointCloud x = sample_log_members(formula_membership(f, n, environment(rc)), cfg, 0);
    // log10 -> Log_{1/t}
    logs = PointCloud{n, {}, Space::Log};
    for (auto p : x.points) {
      for (double& c : p) c /= std::log10(1.0 / t);
      logs.points.push_back(std::move(p));
    }
  }
  if (fmt == "svg" && logs.dimension != 2) throw UsageError("SVG output is only drawn for planar sets");
  emit(rc, [&](std::ostream& out) {
    if (fmt == "svg") {
      svg::scatter(out, logs);
      return;
    }
    for (const auto& p : logs.points) {
      for (std::size_t i = 0; i < p.size(); ++i) out << (i ? "," : "") << format_double(p[i]);
      out << '\n';
    }
  });
  return 0;
}

int cmd_limit_set(const RunConfig& rc) {
  std::string fmt = format_or(rc, "csv", {"csv", "svg", "json"});
  SamplerConfig cfg = sampler_config(rc);
  LimitEstimate est;
  if (is_csv(rc.input)) {
    est = estimate_limit_directions(load_points(rc.input), cfg);
  } else {
    Formula f = load_formula(rc);
    est = estimate_limit_directions(f, environment(rc), cfg, dimension_of(f, rc));
  }
  for (const auto& w : cfg.warnings()) std::cerr << "warning: " << w << '\n';
  auto inv = check_cone_invariance(est.per_t, cfg.cluster_tolerance);
  if (inv.flagged) std::cerr << "warning: " << inv.message << '\n';
  if (fmt == "svg" && est.cloud.dimension != 2) throw UsageError("SVG output is only drawn for planar sets");
  emit(rc, [&](std::ostream& out) {
    if (fmt == "svg") {
      svg::directions(out, est.cloud);
    } else if (fmt == "json") {
      nlohmann::json j = directions_json(est.cloud);
      j["t_values"] = est.t_values;
      j["samples"] = est.samples;
      out << j.dump(2) << '\n';
    } else {
      write_direction_csv(out, est.cloud);
    }
  });
  return 0;
}

int cmd_cells(const RunConfig& rc) {
  format_or(rc, "json", {"json"});
  Formula f = load_formula(rc);
  PolyhedralComplex k = tropical_formula_cells(dequantize_formula(f), dimension_of(f, rc));
  emit(rc, [&](std::ostream& out) { out << to_json(k).dump(2) << '\n'; });
  return 0;
}

// Coefficient c t^v contributes the weight -v.
NewtonData newton_data(const PuiseuxPolynomial& p) {
  NewtonData nd;
  for (const auto& [w, c] : p.coefficients()) {
    nd.support.push_back(w);
    nd.weights.push_back(-to_double(valuation(c)));
  }
  return nd;
}

int cmd_dual_fan(const RunConfig& rc) {
  std::string fmt = format_or(rc, "json", {"json", "csv", "svg"});
  PuiseuxPolynomial p = parse_puiseux_polynomial(read_text(rc.input));
  PolyhedralComplex fan = dual_fan(newton_data(p));
  if (fmt == "svg" && fan.dimension() != 2) throw UsageError("SVG output is only drawn for planar sets");
  emit(rc, [&](std::ostream& out) {
    if (fmt == "json") {
      out << to_json(fan).dump(2) << '\n';
      return;
    }
    DirectionCloud d{fan.dimension(), complex_sphere_samples(fan, 3600), false};
    if (fmt == "svg")
      svg::directions(out, DirectionCloud{fan.dimension(), {}, false}, fan);
    else
      write_direction_csv(out, d);
  });
  return 0;
}

int cmd_puiseux_eval(const RunConfig& rc) {
  format_or(rc, "csv", {"csv"});
  if (!(rc.t > 0.0 && rc.t < 1.0)) throw UsageError("--t in (0,1) is required");
  emit(rc, [&](std::ostream& out) {
    if (!rc.series.empty()) {
      PuiseuxSeries s = parse_puiseux_series(rc.series);
      out << to_string(s) << " at t = " << format_double(rc.t) << ": " << format_double(s.evaluate(rc.t)) << '\n';
      return;
    }
    PuiseuxPolynomial p = parse_puiseux_polynomial(read_text(rc.input));
    RealPolynomial r = instantiate(p, rc.t);
    out << to_string(r) << '\n';
    if (r.dimension == 1)
      for (double x : positive_roots(r))
        out << "root " << format_double(x) << " Log_{1/t} " << format_double(std::log(x) / -std::log(rc.t)) << '\n';
  });
  return 0;
}

int cmd_patchwork(const RunConfig& rc) {
  std::string fmt = format_or(rc, "csv", {"csv", "json"});
  PuiseuxPolynomial p = parse_puiseux_polynomial(read_text(rc.input));
  if (rc.lambda.empty()) throw UsageError("--lambda is required");
  std::vector<Rational> lambda;
  std::stringstream ss(rc.lambda);
  std::string field;
  while (std::getline(ss, field, ',')) lambda.push_back(parse_rational(field));
  if (lambda.size() != p.dimension()) throw UsageError("--lambda has the wrong number of entries");
  MembershipConfig mc;
  mc.seed = seed_of(rc);
  MembershipResult r = lambda_membership_hypersurface(p, lambda, mc);
  emit(rc, [&](std::ostream& out) {
    if (fmt == "json") {
      nlohmann::json j{{"verdict", to_string(r.verdict)}, {"initial_form", to_string(r.initial)}};
      if (r.witness) j["witness"] = *r.witness;
      out << j.dump(2) << '\n';
      return;
    }
    out << "initial form: " << to_string(r.initial) << '\n' << "verdict: " << to_string(r.verdict) << '\n';
    if (r.witness) {
      out << "witness:";
      for (double w : *r.witness) out << ' ' << format_double(w);
      out << '\n';
    }
  });
  return 0;
}

int cmd_exact(const RunConfig& rc) {
  format_or(rc, "csv", {"csv"});
  if (rc.cover.empty()) throw UsageError("--cover is required");
  Formula f = load_formula(rc);
  std::size_t n = dimension_of(f, rc);
  std::vector<ConeSpec> cover;
  try {
    cover = load_cover(rc.cover);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("cover: ") + e.what());
  }
  for (const auto& c : cover)
    if (c.dimension() != n) throw UsageError("cover cone of dimension " + std::to_string(c.dimension()));
  SamplerConfig cfg = sampler_config(rc);
  PointCloud sample = sample_log_members(formula_membership(f, n, environment(rc)), cfg, cfg.t_count - 1);
  std::optional<Rational> h;
  if (!rc.h.empty())
    h = parse_rational(rc.h);
  else
    h = find_guard_threshold(sample, cover);
  if (!h) throw CheckFailed("no guard threshold 10^-k (k <= 6) clears the sample");
  Formula psi = assemble_exact(f, cover, *h, sample);
  std::optional<ExactnessReport> rep;
  if (!rc.target.empty()) {
    PolyhedralComplex target = complex_from_json(nlohmann::json::parse(read_text(rc.target)), n);
    rep = verify_exactness(psi, target);
  }
  emit(rc, [&](std::ostream& out) {
    out << to_string(psi) << '\n';
    out << "# h = " << to_string(*h) << ", sample size " << sample.points.size() << '\n';
    if (rep)
      out << "# grid points " << rep->checked << ", extra " << rep->extra.size() << ", missing " << rep->missing.size()
          << '\n';
  });
  if (rep && rep->disagreements() > 0) throw CheckFailed("assembled formula disagrees with the target on the grid");
  return 0;
}

int cmd_paper_suite(const RunConfig& rc) {
  std::string fmt = format_or(rc, "csv", {"csv", "svg"});
  suite::Options o;
  o.seed = seed_of(rc);
  o.out = rc.out;
  o.svg = fmt == "svg";
  std::vector<std::string> only;
  for (const auto& item : rc.only) {
    std::stringstream ss(item);
    std::string id;
    while (std::getline(ss, id, ','))
      if (!id.empty()) only.push_back(id);
  }
  std::vector<suite::Row> rows;
  try {
    rows = suite::run_suite(o, only);
  } catch (const suite::UnknownFixture& e) {
    throw UsageError(e.what());
  }
  suite::write_table(std::cout, rows);
  for (const auto& r : rows)
    if (!r.pass) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Logarithmic limit sets of semi-algebraic sets"};
  app.require_subcommand(1);
  RunConfig rc;

  auto common = [&](CLI::App* c) {
    c->add_option("--config", rc.config_file, "INI file with a [sampler] section")->check(CLI::ExistingFile);
    c->add_option("--t-schedule", rc.t_schedule, "t0,ratio,count");
    c->add_option("--samples", rc.samples, "box samples per t");
    c->add_option("--box", rc.box, "log10 box min,max");
    c->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& s) {
      rc.seed = s;
      rc.seed_set = true;
    }, "random seed (also LOGLIM_SEED)");
    c->add_option("--format", rc.format, "csv | svg | json");
    c->add_option("--out", rc.out, "output file (directory for paper-suite)");
  };
  auto formula_input = [&](CLI::App* c) {
    c->add_option("input", rc.input, "formula file, '-' for stdin")->required();
    c->add_flag("--polynomial", rc.polynomial, "input is a polynomial equation to normalize");
    c->add_option("--param", rc.params, "parameter binding name=value");
    c->add_option("--dim", rc.dim, "ambient dimension");
  };

  auto* deq = app.add_subcommand("dequantize", "print the tropical formula and sandwich constants");
  common(deq);
  formula_input(deq);
  auto* amo = app.add_subcommand("amoeba", "amoeba at one t from a formula or a point CSV");
  common(amo);
  formula_input(amo);
  amo->add_option("--t", rc.t, "deformation parameter");
  auto* lim = app.add_subcommand("limit-set", "estimate limit directions from a formula or a point CSV");
  common(lim);
  formula_input(lim);
  auto* cel = app.add_subcommand("cells", "polyhedral cells of the dequantized formula");
  common(cel);
  formula_input(cel);
  auto* fan = app.add_subcommand("dual-fan", "dual fan of a Puiseux polynomial");
  common(fan);
  fan->add_option("input", rc.input, "Puiseux polynomial file")->required();
  auto* pev = app.add_subcommand("puiseux-eval", "instantiate a Puiseux polynomial or series at t");
  common(pev);
  pev->add_option("input", rc.input, "Puiseux polynomial file");
  pev->add_option("--series", rc.series, "series text instead of a polynomial file");
  pev->add_option("--t", rc.t, "deformation parameter")->required();
  auto* pat = app.add_subcommand("patchwork", "membership of a point lambda in the non-archimedean amoeba");
  common(pat);
  pat->add_option("input", rc.input, "Puiseux polynomial file")->required();
  pat->add_option("--lambda", rc.lambda, "comma-separated rationals")->required();
  auto* exa = app.add_subcommand("exact", "assemble and verify an exact description");
  common(exa);
  formula_input(exa);
  exa->add_option("--cover", rc.cover, "cone cover JSON")->required();
  exa->add_option("--target", rc.target, "polyhedral complex JSON to verify against");
  exa->add_option("--threshold", rc.h, "guard threshold h (default: searched)");
  auto* sui = app.add_subcommand("paper-suite", "run the worked-example checks");
  common(sui);
  sui->add_option("--only", rc.only, "fixture ids (repeatable or comma-separated)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*deq) return cmd_dequantize(rc);
    if (*amo) return cmd_amoeba(rc);
    if (*lim) return cmd_limit_set(rc);
    if (*cel) return cmd_cells(rc);
    if (*fan) return cmd_dual_fan(rc);
    if (*pev) {
      if (rc.input.empty() && rc.series.empty()) throw UsageError("give a polynomial file or --series");
      return cmd_puiseux_eval(rc);
    }
    if (*pat) return cmd_patchwork(rc);
    if (*exa) return cmd_exact(rc);
    if (*sui) return cmd_paper_suite(rc);
  } catch (const CheckFailed& e) {
    std::cerr << "check failed: " << e.what() << '\n';
    return 1;
  } catch (const ExhaustionFailed& e) {
    std::cerr << "check failed: " << e.what() << '\n';
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const IngestError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
