#include "mls/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "CLI11.hpp"
#include "mls/acceptance.hpp"
#include "mls/config.hpp"
#include "mls/manhattan.hpp"
#include "mls/report.hpp"

namespace mls {

namespace {

namespace fs = std::filesystem;

struct Context {
  RunConfig cfg;
  int workers = 1;
  fs::path out_dir;
  std::ostream& out;

  EnumOptions enum_options() const {
    EnumOptions o;
    o.workers = workers;
    if (cfg.census) {
      o.max_rows = cfg.census->max_rows;
      o.bracket_depth = cfg.census->bracket_depth;
    }
    return o;
  }

  const CensusSettings& census() const {
    if (!cfg.census) throw Error(ErrorKind::Config, cfg.source + ": missing [census] section");
    return *cfg.census;
  }

  MetricHandle d() const { return cfg.metric(census().metric); }

  MetricHandle d_star() const {
    if (!census().metric_star) throw Error(ErrorKind::Config, cfg.source + ": census.metric_star: required here");
    return cfg.metric(*census().metric_star);
  }

  void write(const std::string& name, const std::string& content) const { write_file(out_dir / name, content); }
};

GrowthEstimate select(GrowthEstimate g, const std::string& estimator) {
  if (estimator == "linear") {
    g.rate = g.linear_fit;
    g.method = "linear-fit";
  } else if (estimator == "corrected") {
    g.rate = g.corrected_fit;
    g.method = "prefactor-corrected-fit";
  }
  return g;
}

double measured_growth(const Context& c, const MetricHandle& m, double radius) {
  return growth_rate(count_ball(m, radius, Filter::all(), c.enum_options())).annulus;
}

// Filters needing growth rates get them from the two balls at the census radius.
Filter make_filter(const Context& c, const std::string& fallback = "all") {
  const CensusSettings& s = c.census();
  const std::string kind = s.filter == "all" ? fallback : s.filter;
  if (kind == "all") return Filter::all();
  if (kind == "commutator") return Filter::commutator_subgroup();
  if (kind == "homology") return Filter::homology_class(s.homology);
  if (kind == "subgroup") {
    std::vector<ReducedWord> gens;
    const Alphabet alphabet(c.cfg.rank);
    for (const auto& w : s.subgroup) gens.push_back(parse_word(alphabet, w));
    return Filter::subgroup(stallings_build(c.cfg.rank, gens));
  }
  if (kind == "tolerance") return Filter::tolerance(s.tol_c, s.tol_p);
  const double v = measured_growth(c, c.d(), s.radius);
  const double v_star = measured_growth(c, c.d_star(), s.radius);
  return Filter::equality(v, v_star, s.rel_tol);
}

std::string classes_csv(const ConjCensus& census) {
  std::string s = "class,ell_lower,ell_upper,ell_star_lower,ell_star_upper,straddles\n";
  for (const auto& r : census.rows) {
    s += to_string(r.cls.word()) + "," + format_double(r.ell.lower) + "," + format_double(r.ell.upper) + ",";
    if (r.ell_star) s += format_double(r.ell_star->lower) + "," + format_double(r.ell_star->upper);
    else s += ",";
    s += r.straddles ? ",1\n" : ",0\n";
  }
  return s;
}

CurveSamples make_curve(const Context& c) {
  const CensusSettings& s = c.census();
  const auto d_star = c.d_star();
  const double v_star = c.cfg.curve.v_d_star ? *c.cfg.curve.v_d_star
                                             : measured_growth(c, d_star, c.cfg.curve.star_radius.value_or(s.radius));
  const auto h = joint_histogram(c.d(), d_star, s.radius, c.enum_options());
  const auto grid = uniform_grid(0, c.cfg.curve.grid_max.value_or(v_star), c.cfg.curve.grid_points);
  auto curve = sample_theta(h, grid, v_star, c.cfg.curve.window);
  c.write("curve.csv", curve_csv(curve));
  c.write("curve.json", dump(to_json(curve)));
  return curve;
}

int cmd_ball(const Context& c) {
  const CensusSettings& s = c.census();
  const auto census = s.metric_star ? enumerate_joint_elements(c.d(), c.d_star(), s.radius, c.enum_options())
                                    : enumerate_elements(c.d(), s.radius, c.enum_options());
  const auto counts = ball_counts(census, make_filter(c));
  c.write("census.csv", census_csv(census));
  c.write("counts.csv", counts_csv(counts));
  c.out << "ball: " << census.rows.size() << " elements within radius " << format_double(s.radius) << ", "
        << (counts.empty() ? 0 : counts.back().N) << " pass filter " << s.filter << "\n";
  return 0;
}

int cmd_conj(const Context& c) {
  const CensusSettings& s = c.census();
  const auto census = s.metric_star ? enumerate_joint_conjugacy(c.d(), c.d_star(), s.radius, c.enum_options())
                                    : enumerate_conjugacy(c.d(), s.radius, c.enum_options());
  const auto counts = class_counts(census, make_filter(c));
  c.write("classes.csv", classes_csv(census));
  c.write("counts.csv", counts_csv(counts));
  c.out << "conj: " << census.rows.size() << " classes within radius " << format_double(s.radius)
        << (census.exact ? " (exact lengths)" : " (bracketed lengths)") << "\n";
  return 0;
}

int cmd_growth(const Context& c) {
  const CensusSettings& s = c.census();
  const Filter filter = make_filter(c);
  const CountingSequence counts =
      s.counts == "classes" ? class_counts(enumerate_conjugacy(c.d(), s.radius, c.enum_options()), filter)
                            : count_ball(c.d(), s.radius, filter, c.enum_options());
  const auto g = select(growth_rate(counts, s.window),
                        s.estimator.empty() ? (s.counts == "classes" ? "corrected" : "annulus") : s.estimator);
  c.write("counts.csv", counts_csv(counts));
  c.write("growth.json", dump(to_json(g)));
  c.out << "growth: rate " << format_double(g.rate) << " (" << g.method << ")\n";
  return 0;
}

int cmd_curve(const Context& c) {
  const auto curve = make_curve(c);
  c.out << "curve: theta(0) " << format_double(curve.theta.front()) << ", theta(end) "
        << format_double(curve.theta.back()) << ", " << (curve.convex ? "convex" : "not convex") << "\n";
  return 0;
}

int cmd_beta(const Context& c) {
  const auto curve = make_curve(c);
  auto report = beta(curve);
  const auto census = enumerate_joint_conjugacy(c.d(), c.d_star(), c.census().radius, c.enum_options());
  attach_dilation(report, dilation(census));
  Json j = to_json(report);
  j["bounds"] = to_json(check_bounds(report));
  c.write("beta.json", dump(j));
  c.out << "beta: " << format_double(report.beta) << " (normalized " << format_double(report.beta_bar)
        << ", Delta " << format_double(report.delta_thurston) << ")\n";
  return 0;
}

int cmd_dilation(const Context& c) {
  const auto census = enumerate_joint_conjugacy(c.d(), c.d_star(), c.census().radius, c.enum_options());
  const auto dil = dilation(census);
  c.write("dilation.json", dump(to_json(dil)));
  c.out << "dilation: Dil(d,d*) >= " << format_double(dil.dil_ab) << ", Dil(d*,d) >= " << format_double(dil.dil_ba)
        << "\n";
  return 0;
}

int cmd_tau(const Context& c) {
  const double T = c.census().radius;
  const auto h = joint_histogram(c.d(), c.d_star(), T, c.enum_options());
  const auto tau = intersection_number(h);
  const auto dil = dilation(enumerate_joint_conjugacy(c.d(), c.d_star(), T, c.enum_options()));
  Json j = to_json(tau);
  j["dilation"] = to_json(dil);
  j["within_dilations"] = tau_within_dilations(tau.tau, dil);
  c.write("tau.json", dump(j));
  c.out << "tau: " << format_double(tau.tau) << " at radius " << format_double(T) << "\n";
  return 0;
}

int cmd_correlate(const Context& c) {
  const CensusSettings& s = c.census();
  const auto census = enumerate_joint_conjugacy(c.d(), c.d_star(), s.radius, c.enum_options());
  const Filter mode = make_filter(c, "equality");
  if (mode.kind() != Filter::Kind::Equality && mode.kind() != Filter::Kind::Tolerance) {
    throw Error(ErrorKind::Config, c.cfg.source + ": census.filter: correlate needs equality or tolerance");
  }
  const auto counts = correlation_census(census, mode);
  const auto g = select(growth_rate(counts, s.window), s.estimator.empty() ? "corrected" : s.estimator);
  c.write("counts.csv", counts_csv(counts));
  c.write("growth.json", dump(to_json(g)));
  c.out << "correlate: " << (counts.empty() ? 0 : counts.back().N) << " classes, rate " << format_double(g.rate)
        << " (" << g.method << ")\n";
  return 0;
}

ProductOptions product_options(const Context& c, const JsrSettings& j) {
  ProductOptions o;
  o.workers = c.workers;
  o.budget = j.budget;
  o.seed = c.cfg.seed;
  o.samples_per_length = j.samples;
  return o;
}

const JsrSettings& jsr_settings(const Context& c) {
  if (!c.cfg.jsr) throw Error(ErrorKind::Config, c.cfg.source + ": missing [jsr] section");
  return *c.cfg.jsr;
}

int cmd_jsr(const Context& c) {
  const JsrSettings& j = jsr_settings(c);
  const auto e = jsr_estimate(c.cfg.matrix_set(j.matrices), j.depth, product_options(c, j));
  c.write("jsr.json", dump(to_json(e)));
  c.out << "jsr: [" << format_double(e.lower) << ", " << format_double(e.upper) << "] at depth " << e.depth << "\n";
  return 0;
}

int cmd_bochi(const Context& c) {
  const JsrSettings& j = jsr_settings(c);
  const auto b = bochi_bound(c.cfg.matrix_set(j.matrices), j.c_m, j.d_m, product_options(c, j));
  c.write("bochi.json", dump(to_json(b)));
  c.out << "bochi: " << format_double(b.value) << (b.subsampled ? " (subsampled)" : "") << "\n";
  return 0;
}

int cmd_jtl(const Context& c) {
  if (!c.cfg.jtl) throw Error(ErrorKind::Config, c.cfg.source + ": missing [jtl] section");
  const JtlSettings& j = *c.cfg.jtl;
  std::vector<ReducedWord> S;
  const Alphabet alphabet(c.cfg.rank);
  for (const auto& w : j.semigroup) S.push_back(parse_word(alphabet, w));
  const auto e = joint_translation_length(c.cfg.metric(j.metric), S, j.depth, j.budget);
  c.write("jtl.json", dump(to_json(e)));
  c.out << "jtl: [" << format_double(e.lower) << ", " << format_double(e.upper) << "] at depth " << e.depth << "\n";
  return 0;
}

BoundReport evaluate_bound(const BoundSettings& b, const std::string& source) {
  std::set<std::string> used;
  auto get = [&](const std::string& k) -> double {
    const auto it = b.params.find(k);
    if (it == b.params.end()) throw Error(ErrorKind::Config, source + ": bound." + k + ": missing required field");
    used.insert(k);
    return it->second;
  };
  auto opt = [&](const std::string& k) -> std::optional<double> {
    if (!b.params.count(k)) return std::nullopt;
    return get(k);
  };
  auto integer = [&](const std::string& k) {
    const double v = get(k);
    if (v != std::floor(v)) throw Error(ErrorKind::Config, source + ": bound." + k + ": must be an integer");
    return static_cast<int>(v);
  };
  BoundReport r;
  if (b.formula == "rigidity-hyperbolic") {
    r = rigidity_bound_hyperbolic(get("L"), get("eta"), get("alpha"), get("delta"), opt("K").value_or(kDefaultK));
  } else if (b.formula == "rigidity-anosov") {
    std::optional<int> d_m;
    if (b.params.count("d_m")) d_m = integer("d_m");
    r = rigidity_bound_anosov(get("L"), get("eta"), get("alpha"), integer("m"), opt("c_m"), d_m);
  } else if (b.formula == "geometry-bounds") {
    r = geometry_bounds(integer("n"), get("simplicial_volume"), get("lambda"), get("Lambda"), get("i_g"),
                        opt("C_n").value_or(1.0));
  } else if (b.formula == "butt-constants") {
    r = butt_constants(integer("n"), get("simplicial_volume"), get("lambda"), get("Lambda"), get("i_g"), get("eps0"),
                       opt("K").value_or(kDefaultK), get("R"), opt("C_n").value_or(1.0));
  } else {
    throw Error(ErrorKind::Config, source + ": bound.formula: unknown formula '" + b.formula +
                                       "' (rigidity-hyperbolic, rigidity-anosov, geometry-bounds, butt-constants)");
  }
  for (const auto& [k, v] : b.params) {
    if (!used.count(k)) throw Error(ErrorKind::Config, source + ": bound." + k + ": unknown field");
  }
  return r;
}

int cmd_bound(const Context& c, const BoundSettings& spec) {
  const auto r = evaluate_bound(spec, c.cfg.source);
  c.write("bound.json", bound_report_json(r) + "\n");
  c.out << "bound " << r.formula << ": " << format_double(r.value) << "\n";
  return 0;
}

int cmd_scenario(const Context& c, const std::string& name) {
  if (name != "acceptance") throw Error(ErrorKind::Config, "unknown scenario '" + name + "' (acceptance)");
  AcceptanceOptions o;
  o.output_dir = c.out_dir / "acceptance";
  o.workers = c.workers;
  o.seed = c.cfg.seed == 1 ? o.seed : c.cfg.seed;
  const auto results = run_acceptance(o);
  int passed = 0;
  for (const auto& r : results) {
    c.out << format_result(r) << "\n";
    passed += r.pass ? 1 : 0;
  }
  c.out << "scenario acceptance: " << passed << "/" << results.size() << " criteria passed\n";
  return passed == static_cast<int>(results.size()) ? 0 : 4;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Config: return 1;
    case ErrorKind::BudgetExceeded: return 3;
    default: return 2;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Manhattan curves, length-spectrum rigidity and joint spectra on free groups", "mls"};
  app.require_subcommand(1);
  int workers = 0;
  app.add_option("--workers", workers, "Override the configured worker count")->check(CLI::PositiveNumber);

  std::string config_path;
  std::vector<std::string> extra;
  std::map<std::string, CLI::App*> subs;
  const std::vector<std::pair<const char*, const char*>> described{
      {"ball", "Element census and ball counts"},
      {"conj", "Conjugacy-class census and class counts"},
      {"growth", "Counting sequence and growth estimate"},
      {"curve", "Manhattan curve samples of the census pair"},
      {"beta", "Curve, beta and the dilation bounds"},
      {"dilation", "Census dilations of the metric pair"},
      {"tau", "Intersection number of the metric pair"},
      {"correlate", "Classes with correlated lengths and their growth"},
      {"jsr", "Joint spectral radius sandwich"},
      {"bochi", "Spectral-radius upper bound for the joint spectral radius"},
      {"jtl", "Joint translation length sandwich"}};
  for (const auto& [name, help] : described) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("config", config_path, "Config file")->required();
    subs[name] = sub;
  }
  auto* bound = app.add_subcommand("bound", "Evaluate a closed-form bound from a config or inline key=value pairs");
  bound->add_option("args", extra, "Config path, or formula followed by key=value")->required();
  auto* scenario = app.add_subcommand("scenario", "Run a named scenario");
  std::string scenario_name;
  scenario->add_option("name", scenario_name)->required();
  scenario->add_option("config", config_path, "Optional config for [run] settings");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  }

  try {
    std::optional<BoundSettings> inline_bound;
    if (bound->parsed()) {
      static const std::set<std::string> formulas{"rigidity-hyperbolic", "rigidity-anosov", "geometry-bounds",
                                                  "butt-constants"};
      if (formulas.count(extra.front())) {
        BoundSettings b;
        b.formula = extra.front();
        for (std::size_t i = 1; i < extra.size(); ++i) {
          const auto eq = extra[i].find('=');
          if (eq == std::string::npos) throw Error(ErrorKind::Config, "argument '" + extra[i] + "' is not key=value");
          try {
            std::size_t pos = 0;
            const std::string v = extra[i].substr(eq + 1);
            b.params[extra[i].substr(0, eq)] = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
          } catch (const std::logic_error&) {
            throw Error(ErrorKind::Config, "argument '" + extra[i] + "': value is not a number");
          }
        }
        inline_bound = b;
      } else {
        if (extra.size() != 1) throw Error(ErrorKind::Config, "bound takes a config path or a formula name");
        config_path = extra.front();
      }
    }

    RunConfig cfg = config_path.empty() ? parse_config("", "<defaults>") : load_config(config_path);
    fs::path out_dir = "mls-out";
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) out_dir = env;
    if (cfg.output_dir) out_dir = *cfg.output_dir;
    Context c{cfg, workers > 0 ? workers : cfg.workers, out_dir, out};

    if (bound->parsed()) {
      if (inline_bound) return cmd_bound(c, *inline_bound);
      if (!cfg.bound) throw Error(ErrorKind::Config, cfg.source + ": missing [bound] section");
      return cmd_bound(c, *cfg.bound);
    }
    if (scenario->parsed()) return cmd_scenario(c, scenario_name);

    static const std::map<std::string, std::function<int(const Context&)>> commands{
        {"ball", cmd_ball},   {"conj", cmd_conj},         {"growth", cmd_growth},       {"curve", cmd_curve},
        {"beta", cmd_beta},   {"dilation", cmd_dilation}, {"tau", cmd_tau},             {"correlate", cmd_correlate},
        {"jsr", cmd_jsr},     {"bochi", cmd_bochi},       {"jtl", cmd_jtl}};
    for (const auto& [name, sub] : subs) {
      if (sub->parsed()) return commands.at(name)(c);
    }
    err << "no subcommand\n";
    return 1;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace mls
