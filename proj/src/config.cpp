#include "mls/config.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace mls {

namespace {

namespace pt = boost::property_tree;

[[noreturn]] void fail(const std::string& source, int line, const std::string& field, const std::string& msg) {
  std::string where = source;
  if (line > 0) where += ":" + std::to_string(line);
  throw Error(ErrorKind::Config, where + ": " + field + ": " + msg);
}

// Line numbers of section headers and keys; the property tree drops them.
std::map<std::string, int> scan_lines(const std::string& text) {
  std::map<std::string, int> out;
  std::istringstream is(text);
  std::string line;
  std::string section;
  for (int n = 1; std::getline(is, line); ++n) {
    boost::trim(line);
    if (line.empty() || line[0] == ';' || line[0] == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = boost::trim_copy(line.substr(1, line.size() - 2));
      out.emplace(section, n);
    } else if (const auto eq = line.find('='); eq != std::string::npos) {
      out.emplace(section + "\n" + boost::trim_copy(line.substr(0, eq)), n);
    }
  }
  return out;
}

// Boost's INI reader treats only ';' as a comment marker.
std::string strip_hash_comments(const std::string& text) {
  std::istringstream is(text);
  std::ostringstream os;
  std::string line;
  while (std::getline(is, line)) {
    const auto first = line.find_first_not_of(" \t");
    if (first != std::string::npos && line[first] == '#') line.clear();
    os << line << '\n';
  }
  return os.str();
}

class Reader {
 public:
  Reader(const ConfigSection& s, const std::string& source) : s_(s), source_(source) {}

  bool has(const std::string& key) const { return s_.values.count(key) != 0; }

  [[noreturn]] void error(const std::string& key, const std::string& msg) const {
    const auto it = s_.lines.find(key);
    fail(source_, it == s_.lines.end() ? s_.line : it->second, s_.name + "." + key, msg);
  }

  std::string str(const std::string& key) const {
    const auto it = s_.values.find(key);
    if (it == s_.values.end()) error(key, "missing required field");
    return it->second;
  }

  std::string str(const std::string& key, const std::string& fallback) const {
    return has(key) ? str(key) : fallback;
  }

  double real(const std::string& key) const {
    const std::string v = str(key);
    try {
      std::size_t pos = 0;
      const double d = std::stod(v, &pos);
      if (pos != v.size()) error(key, "not a number: '" + v + "'");
      return d;
    } catch (const std::logic_error&) {
      error(key, "not a number: '" + v + "'");
    }
  }

  std::optional<double> opt_real(const std::string& key) const {
    if (!has(key) || str(key).empty()) return std::nullopt;
    return real(key);
  }

  double real(const std::string& key, double fallback) const { return opt_real(key).value_or(fallback); }

  long long integer(const std::string& key) const {
    const std::string v = str(key);
    long long out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size()) error(key, "not an integer: '" + v + "'");
    return out;
  }

  long long integer(const std::string& key, long long fallback) const { return has(key) ? integer(key) : fallback; }

  long long positive(const std::string& key, long long fallback) const {
    const long long v = integer(key, fallback);
    if (v <= 0) error(key, "must be positive");
    return v;
  }

  std::vector<std::string> list(const std::string& key) const {
    std::vector<std::string> parts;
    const std::string v = str(key);
    boost::split(parts, v, boost::is_any_of(" ,\t"), boost::token_compress_on);
    parts.erase(std::remove(parts.begin(), parts.end(), std::string{}), parts.end());
    return parts;
  }

  std::vector<double> reals(const std::string& key) const {
    std::vector<double> out;
    for (const auto& p : list(key)) {
      try {
        std::size_t pos = 0;
        out.push_back(std::stod(p, &pos));
        if (pos != p.size()) error(key, "not a number: '" + p + "'");
      } catch (const std::logic_error&) {
        error(key, "not a number: '" + p + "'");
      }
    }
    return out;
  }

  std::vector<ReducedWord> words(const std::string& key, int rank) const {
    std::vector<ReducedWord> out;
    const Alphabet alphabet(rank);
    for (const auto& p : list(key)) {
      try {
        out.push_back(parse_word(alphabet, p));
      } catch (const Error& e) {
        error(key, "bad word '" + p + "': " + e.what());
      }
    }
    return out;
  }

  const ConfigSection& section() const { return s_; }

 private:
  const ConfigSection& s_;
  const std::string& source_;
};

void reject_unknown(const Reader& r, const std::set<std::string>& known) {
  for (const auto& [k, v] : r.section().values) {
    if (!known.count(k)) r.error(k, "unknown field");
  }
}

MatrixSettings parse_matrices(const Reader& r, const std::string& name) {
  MatrixSettings m;
  m.name = name;
  m.dim = static_cast<int>(r.positive("dim", 2));
  if (r.has("random")) {
    m.random_count = static_cast<std::size_t>(r.positive("random", 1));
    m.lo = r.real("lo", -1);
    m.hi = r.real("hi", 1);
    if (!(m.lo < m.hi)) r.error("hi", "must exceed lo");
  }
  for (int i = 0;; ++i) {
    const std::string key = "m" + std::to_string(i);
    if (!r.has(key)) break;
    const auto v = r.reals(key);
    if (v.size() != static_cast<std::size_t>(m.dim) * static_cast<std::size_t>(m.dim)) {
      r.error(key, "expected " + std::to_string(m.dim * m.dim) + " row-major entries");
    }
    MatrixX<double> A(m.dim, m.dim);
    for (int a = 0; a < m.dim; ++a) {
      for (int b = 0; b < m.dim; ++b) A(a, b) = v[static_cast<std::size_t>(a * m.dim + b)];
    }
    m.matrices.push_back(std::move(A));
  }
  if (m.matrices.empty() && m.random_count == 0) r.error("m0", "matrix set needs m0, m1, ... or random = count");
  for (const auto& [k, v] : r.section().values) {
    const bool numbered = k.size() > 1 && k[0] == 'm' && std::all_of(k.begin() + 1, k.end(), ::isdigit);
    if (!numbered && k != "dim" && k != "random" && k != "lo" && k != "hi") r.error(k, "unknown field");
    if (numbered && static_cast<std::size_t>(std::stoul(k.substr(1))) >= m.matrices.size()) {
      r.error(k, "matrices must be numbered m0, m1, ... without gaps");
    }
  }
  return m;
}

CensusSettings parse_census(const Reader& r) {
  reject_unknown(r, {"metric", "metric_star", "radius", "max_rows", "bracket_depth", "filter", "homology",
                     "subgroup", "c", "p", "rel_tol", "counts", "window", "estimator"});
  CensusSettings c;
  c.metric = r.str("metric");
  if (r.has("metric_star")) c.metric_star = r.str("metric_star");
  c.radius = r.real("radius");
  if (!(c.radius >= 0)) r.error("radius", "must be >= 0");
  c.max_rows = static_cast<std::size_t>(r.positive("max_rows", 20'000'000));
  c.bracket_depth = static_cast<int>(r.positive("bracket_depth", 16));
  c.filter = r.str("filter", "all");
  static const std::set<std::string> filters{"all", "commutator", "homology", "subgroup", "tolerance", "equality"};
  if (!filters.count(c.filter)) r.error("filter", "unknown filter '" + c.filter + "'");
  if (c.filter == "homology") {
    for (double v : r.reals("homology")) {
      if (v != std::floor(v)) r.error("homology", "entries must be integers");
      c.homology.push_back(static_cast<int>(v));
    }
  }
  if (c.filter == "subgroup") c.subgroup = r.list("subgroup");
  c.tol_c = r.real("c", 1);
  c.tol_p = r.real("p", 0.5);
  c.rel_tol = r.real("rel_tol", 1e-9);
  c.counts = r.str("counts", "elements");
  if (c.counts != "elements" && c.counts != "classes") r.error("counts", "expected elements or classes");
  c.window = static_cast<std::size_t>(r.positive("window", 4));
  c.estimator = r.str("estimator", "");
  if (!c.estimator.empty() && c.estimator != "annulus" && c.estimator != "linear" && c.estimator != "corrected") {
    r.error("estimator", "expected annulus, linear or corrected");
  }
  return c;
}

CurveSettings parse_curve(const Reader& r) {
  reject_unknown(r, {"grid_points", "grid_max", "v_d_star", "star_radius", "window"});
  CurveSettings c;
  c.grid_points = static_cast<std::size_t>(r.positive("grid_points", 21));
  if (c.grid_points < 3) r.error("grid_points", "need at least 3 points");
  c.grid_max = r.opt_real("grid_max");
  c.v_d_star = r.opt_real("v_d_star");
  c.star_radius = r.opt_real("star_radius");
  c.window = static_cast<std::size_t>(r.positive("window", 6));
  return c;
}

JsrSettings parse_jsr(const Reader& r) {
  reject_unknown(r, {"matrices", "depth", "budget", "samples", "c_m", "d_m"});
  JsrSettings j;
  j.matrices = r.str("matrices");
  j.depth = static_cast<int>(r.positive("depth", 8));
  j.budget = static_cast<std::uint64_t>(r.positive("budget", 50'000'000));
  j.samples = static_cast<std::uint64_t>(r.positive("samples", 200'000));
  j.c_m = r.opt_real("c_m");
  if (r.has("d_m")) j.d_m = static_cast<int>(r.positive("d_m", 1));
  return j;
}

JtlSettings parse_jtl(const Reader& r) {
  reject_unknown(r, {"metric", "semigroup", "depth", "budget"});
  JtlSettings j;
  j.metric = r.str("metric");
  j.semigroup = r.list("semigroup");
  if (j.semigroup.empty()) r.error("semigroup", "needs at least one word");
  j.depth = static_cast<int>(r.positive("depth", 6));
  j.budget = static_cast<std::uint64_t>(r.positive("budget", 5'000'000));
  return j;
}

BoundSettings parse_bound(const Reader& r) {
  BoundSettings b;
  b.formula = r.str("formula");
  for (const auto& [k, v] : r.section().values) {
    if (k != "formula") b.params[k] = r.real(k);
  }
  return b;
}

std::uint64_t name_stream(const std::string& name) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
  pt::ptree tree;
  try {
    std::istringstream is(strip_hash_comments(text));
    pt::ini_parser::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(source, static_cast<int>(e.line()), "syntax", e.message());
  }
  const auto lines = scan_lines(text);

  // Boost drops empty sections, so headers are validated from the scan.
  static const std::set<std::string> heads{"run", "metric", "matrices", "census", "curve", "jsr", "jtl", "bound"};
  for (const auto& [key, line] : lines) {
    if (key.find('\n') == std::string::npos && !heads.count(boost::trim_copy(key.substr(0, key.find(':'))))) {
      fail(source, line, key, "unknown section");
    }
  }

  RunConfig cfg;
  cfg.source = source;
  std::vector<ConfigSection> sections;
  for (const auto& [name, body] : tree) {
    ConfigSection s;
    s.name = name;
    if (auto it = lines.find(name); it != lines.end()) s.line = it->second;
    if (!body.data().empty()) fail(source, s.line, name, "key outside any section");
    for (const auto& [k, v] : body) {
      s.values[k] = boost::trim_copy(v.data());
      if (auto it = lines.find(name + "\n" + k); it != lines.end()) s.lines[k] = it->second;
    }
    sections.push_back(std::move(s));
  }

  for (const auto& s : sections) {
    const Reader r(s, source);
    const auto colon = s.name.find(':');
    const std::string head = s.name.substr(0, colon);
    const std::string tag = colon == std::string::npos ? "" : boost::trim_copy(s.name.substr(colon + 1));
    if (head == "run") {
      reject_unknown(r, {"rank", "seed", "workers", "output_dir"});
      cfg.rank = static_cast<int>(r.integer("rank", 2));
      if (cfg.rank < 2 || cfg.rank > 16) r.error("rank", "must lie in [2, 16]");
      cfg.seed = static_cast<std::uint64_t>(r.integer("seed", 1));
      cfg.workers = static_cast<int>(r.positive("workers", 1));
      if (r.has("output_dir")) cfg.output_dir = r.str("output_dir");
    } else if (head == "metric") {
      if (tag.empty()) fail(source, s.line, s.name, "metric sections are named [metric:NAME]");
      cfg.metric_sections.push_back(s);
    } else if (head == "matrices") {
      if (tag.empty()) fail(source, s.line, s.name, "matrix sections are named [matrices:NAME]");
      cfg.matrices[tag] = parse_matrices(r, tag);
    } else if (head == "census") {
      cfg.census = parse_census(r);
    } else if (head == "curve") {
      cfg.curve = parse_curve(r);
    } else if (head == "jsr") {
      cfg.jsr = parse_jsr(r);
    } else if (head == "jtl") {
      cfg.jtl = parse_jtl(r);
    } else if (head == "bound") {
      cfg.bound = parse_bound(r);
    } else {
      fail(source, s.line, s.name, "unknown section");
    }
  }

  // Resolve every reference up front so errors surface before any work.
  for (const auto& s : cfg.metric_sections) cfg.metric(s.name.substr(s.name.find(':') + 1));
  auto check_ref = [&](const std::string& section, const std::string& field, const std::string& name) {
    bool found = false;
    for (const auto& s : cfg.metric_sections) found = found || boost::trim_copy(s.name.substr(s.name.find(':') + 1)) == name;
    if (!found) {
      const auto it = lines.find(section + "\n" + field);
      fail(source, it == lines.end() ? 0 : it->second, section + "." + field, "unknown metric '" + name + "'");
    }
  };
  if (cfg.census) {
    check_ref("census", "metric", cfg.census->metric);
    if (cfg.census->metric_star) check_ref("census", "metric_star", *cfg.census->metric_star);
  }
  if (cfg.jtl) check_ref("jtl", "metric", cfg.jtl->metric);
  if (cfg.jsr && !cfg.matrices.count(cfg.jsr->matrices)) {
    const auto it = lines.find("jsr\nmatrices");
    fail(source, it == lines.end() ? 0 : it->second, "jsr.matrices", "unknown matrix set '" + cfg.jsr->matrices + "'");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::Config, path.string() + ": cannot open config");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), path.string());
}

MatrixSet<double> RunConfig::matrix_set(const std::string& name) const {
  const auto it = matrices.find(name);
  if (it == matrices.end()) throw Error(ErrorKind::Config, source + ": unknown matrix set '" + name + "'");
  const MatrixSettings& m = it->second;
  if (m.random_count == 0) return MatrixSet<double>(m.matrices);
  std::seed_seq seq{seed, name_stream(name)};
  std::mt19937_64 rng(seq);
  auto random = random_matrix_set<double>(rng, m.dim, m.random_count, m.lo, m.hi).matrices();
  std::vector<MatrixX<double>> all = m.matrices;
  all.insert(all.end(), random.begin(), random.end());
  return MatrixSet<double>(std::move(all));
}

MetricHandle RunConfig::metric(const std::string& name) const {
  std::vector<std::string> stack;
  std::function<MetricHandle(const std::string&, const ConfigSection*, const std::string&)> build;
  build = [&](const std::string& n, const ConfigSection* from, const std::string& field) -> MetricHandle {
    const ConfigSection* s = nullptr;
    for (const auto& sec : metric_sections) {
      if (boost::trim_copy(sec.name.substr(sec.name.find(':') + 1)) == n) s = &sec;
    }
    if (!s) {
      if (from) Reader(*from, source).error(field, "unknown metric '" + n + "'");
      throw Error(ErrorKind::Config, source + ": unknown metric '" + n + "'");
    }
    if (std::find(stack.begin(), stack.end(), n) != stack.end()) {
      Reader(*from, source).error(field, "metric definitions form a cycle through '" + n + "'");
    }
    stack.push_back(n);
    const Reader r(*s, source);
    MetricOptions opt;
    opt.delta = r.opt_real("delta");
    opt.alpha_rg = r.opt_real("alpha");
    opt.coned_universe_radius = static_cast<int>(r.positive("universe_radius", 6));
    const std::string kind = r.str("kind");
    MetricHandle out = [&]() -> MetricHandle {
      try {
        if (kind == "word") {
          reject_unknown(r, {"kind", "generators", "delta", "alpha"});
          if (!r.has("generators")) return MetricHandle::word(GeneratingSet::standard_basis(rank), opt);
          return MetricHandle::word(GeneratingSet::from_words(rank, r.words("generators", rank)), opt);
        }
        if (kind == "pullback") {
          reject_unknown(r, {"kind", "inner", "images", "inverse_images", "delta", "alpha"});
          const auto images = r.words("images", rank);
          const auto inverse_images = r.words("inverse_images", rank);
          if (images.size() != static_cast<std::size_t>(rank)) r.error("images", "needs one image per generator");
          MetricHandle inner = build(r.str("inner"), s, "inner");
          return MetricHandle::pulled_back(Automorphism(images, inverse_images), inner, opt);
        }
        if (kind == "combination") {
          reject_unknown(r, {"kind", "s", "d1", "t", "d2", "delta", "alpha"});
          MetricHandle d1 = build(r.str("d1"), s, "d1");
          MetricHandle d2 = build(r.str("d2"), s, "d2");
          return MetricHandle::combination(r.real("s"), d1, r.real("t"), d2, opt);
        }
        if (kind == "matrix-log-norm" || kind == "symmetrized-matrix-log-norm") {
          reject_unknown(r, {"kind", "matrices", "delta", "alpha"});
          const std::string set = r.str("matrices");
          if (!matrices.count(set)) r.error("matrices", "unknown matrix set '" + set + "'");
          const auto mats = matrix_set(set).matrices();
          if (mats.size() != static_cast<std::size_t>(rank)) r.error("matrices", "needs one matrix per generator");
          Representation<double> rho(mats);
          return kind == "matrix-log-norm" ? MetricHandle::matrix_log_norm(rho, opt)
                                           : MetricHandle::symmetrized_matrix_log_norm(rho, opt);
        }
        if (kind == "coned-off") {
          reject_unknown(r, {"kind", "generators", "subgroup", "universe_radius", "delta", "alpha"});
          const GeneratingSet S = r.has("generators") ? GeneratingSet::from_words(rank, r.words("generators", rank))
                                                      : GeneratingSet::standard_basis(rank);
          return MetricHandle::coned_off(S, stallings_build(rank, r.words("subgroup", rank)), opt);
        }
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::Config) throw;
        r.error("kind", e.what());
      }
      r.error("kind", "unknown metric kind '" + kind + "'");
    }();
    stack.pop_back();
    return out;
  };
  return build(name, nullptr, "");
}

}  // namespace mls
