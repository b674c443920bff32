#include "mls/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace mls {

namespace {

constexpr double kLog2 = 0.69314718055994530942;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::PreconditionViolated, what);
}

}  // namespace

SandwichEstimate joint_translation_length(const MetricHandle& psi, std::span<const ReducedWord> S, int N,
                                          std::uint64_t budget) {
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "depth must be >= 1");
  if (S.empty()) throw Error(ErrorKind::InvalidArgument, "empty semigroup generating set");
  if (detail::product_count(S.size(), N) > budget) {
    throw Error(ErrorKind::BudgetExceeded, "|S|^N words exceed the budget");
  }
  std::vector<double> max_psi(static_cast<std::size_t>(N) + 1, -std::numeric_limits<double>::infinity());
  double lower = 0;
  // Level by level: products of length j are the reduced words of S^j.
  std::vector<ReducedWord> level{ReducedWord{}};
  for (int j = 1; j <= N; ++j) {
    std::vector<ReducedWord> next;
    next.reserve(level.size() * S.size());
    for (const auto& w : level) {
      for (const auto& s : S) next.push_back(multiply(w, s));
    }
    const auto k = static_cast<std::size_t>(j);
    for (const auto& w : next) {
      max_psi[k] = std::max(max_psi[k], psi.distance(w));
      lower = std::max(lower, translation_length(psi, w).lower / j);
    }
    level = std::move(next);
  }
  SandwichEstimate e;
  e.depth = N;
  e.lower = lower;
  e.upper = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= N; ++n) e.upper = std::min(e.upper, max_psi[static_cast<std::size_t>(n)] / n);
  e.upper = std::max(e.upper, 0.0);
  return e;
}

double BoundReport::output(const std::string& name) const {
  for (const auto& [k, v] : outputs) {
    if (k == name) return v;
  }
  throw Error(ErrorKind::InvalidArgument, "no output named " + name);
}

BoundReport rigidity_bound_anosov(double L, double eta, double alpha_rg, int m, std::optional<double> c_m,
                                  std::optional<int> d_m) {
  require(m >= 2, "matrix dimension must be >= 2");
  const double c = c_m.value_or(bochi_default_c(m));
  const int d = d_m.value_or(bochi_default_d(m));
  require(eta > 0, "eta must be > 0");
  require(alpha_rg >= 0, "alpha must be >= 0");
  const double gap = L - d * (alpha_rg + 1);
  require(gap > 0, "L must exceed d_m (alpha + 1)");
  BoundReport r;
  r.formula = "rigidity-anosov";
  r.inputs = {{"L", L}, {"eta", eta}, {"alpha", alpha_rg}, {"m", m}, {"c_m", c}, {"d_m", d}};
  r.value = c * d / gap + eta * (L / gap);
  return r;
}

BoundReport rigidity_bound_hyperbolic(double L, double eta, double alpha_rg, double delta, double K) {
  require(eta >= 0, "eta must be >= 0");
  require(alpha_rg >= 0 && delta >= 0 && K > 0, "alpha, delta must be >= 0 and K > 0");
  const double gap = L - 2 * (alpha_rg + 1);
  require(gap > 0, "L must exceed 2 (alpha + 1)");
  BoundReport r;
  r.formula = "rigidity-hyperbolic";
  r.inputs = {{"L", L}, {"eta", eta}, {"alpha", alpha_rg}, {"delta", delta}, {"K", K}};
  r.value = 2 * K * delta / gap + eta * (L / gap);
  return r;
}

BoundReport geometry_bounds(int n, double simplicial_volume, double lambda, double Lambda, double i_g, double C_n) {
  require(n >= 2, "dimension must be >= 2");
  require(simplicial_volume > 0 && lambda > 0 && Lambda > 0 && i_g > 0 && C_n > 0, "inputs must be positive");
  require(Lambda >= lambda, "Lambda must be >= lambda");
  const double vol = C_n * simplicial_volume * std::pow(lambda, -n);
  const double diam = vol * std::pow(i_g, 1 - n);
  BoundReport r;
  r.formula = "geometry-bounds";
  r.inputs = {{"n", n}, {"simplicial_volume", simplicial_volume}, {"lambda", lambda},
              {"Lambda", Lambda}, {"i_g", i_g}, {"C_n", C_n}};
  r.outputs = {
      {"vol_bound", vol},
      {"diam_bound", diam},
      {"hyperbolicity", kLog2 / lambda},
      {"rough_geodesic", 2 * diam + 1},
      {"v_lower", lambda / C_n},
      {"v_upper", Lambda * (n - 1)},
      {"delta", Lambda / lambda * (n - 1) * kLog2},
      {"alpha", Lambda * (n - 1) * (2 * diam + 1)},
  };
  r.value = r.output("alpha");
  return r;
}

BoundReport butt_constants(int n, double simplicial_volume, double lambda, double Lambda, double i_g, double eps0,
                           double K, double R, double C_n) {
  require(n >= 2, "dimension must be >= 2");
  require(eps0 > 0 && eps0 < 1, "eps0 must lie in (0, 1)");
  require(simplicial_volume > 0 && lambda > 0 && Lambda > 0 && i_g > 0 && C_n > 0 && R > 0,
          "inputs must be positive");
  require(K >= 0, "K must be >= 0");
  require(Lambda >= lambda, "Lambda must be >= lambda");
  const double base = 2 * C_n * simplicial_volume * std::pow(lambda, -n);
  const double L_hat_star = base * std::pow((1 - eps0) * i_g, 1 - n) + 2;
  const double L_hat = base * std::pow(i_g, n - 1) + 2;  // exponent n - 1 as printed
  const double k_term = 2 * K * std::log(2.0) / lambda;
  const double C_lower = 2 * (L_hat_star / (1 - eps0) + k_term);
  const double C_upper = 2 * R * (L_hat * (1 + eps0) + k_term);
  const double L0 = 2 * std::max({R * L_hat, L_hat_star, (1 - eps0) * i_g}) + 1;
  const double P = 1 / (1 - eps0) + 2 * (L_hat_star / (1 - eps0) + k_term) / (2 * L_hat_star);
  BoundReport r;
  r.formula = "butt-constants";
  r.inputs = {{"n", n},       {"simplicial_volume", simplicial_volume}, {"lambda", lambda}, {"Lambda", Lambda},
              {"i_g", i_g},   {"eps0", eps0}, {"K", K}, {"R", R}, {"C_n", C_n}};
  r.outputs = {{"L_hat_star", L_hat_star}, {"L_hat", L_hat}, {"C_lower", C_lower}, {"C_upper", C_upper},
               {"C", std::max(C_lower, C_upper)}, {"L0", L0}, {"P", P}};
  r.value = r.output("C");
  return r;
}

std::string bound_report_json(const BoundReport& r) {
  nlohmann::ordered_json j;
  j["formula"] = r.formula;
  nlohmann::ordered_json in = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.inputs) in[k] = v;
  j["inputs"] = in;
  j["value"] = r.value;
  if (!r.outputs.empty()) {
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.outputs) out[k] = v;
    j["outputs"] = out;
  }
  return j.dump(2);
}

DominationProfile domination_profile(const Representation<double>& rho, const ElementCensus& c) {
  if (rho.dim() < 2) throw Error(ErrorKind::InvalidArgument, "domination needs dimension >= 2");
  DominationProfile p;
  for (int i = 0; i < rho.rank(); ++i) {
    const auto& A = rho.letter(generator(i));
    const bool identity = A.isIdentity(1e-12);
    if (!identity && std::abs(spectral_radius(A) - 1) <= 1e-9) p.parabolic_generator = true;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double n = 0;
  p.min_log_ratio = std::numeric_limits<double>::infinity();
  for (const auto& row : c.rows) {
    const ReducedWord w = row.word.unpack();
    if (w.empty()) continue;
    const auto [s1, s2] = top_singular_values(rho(w));
    if (!(s2 > 0)) continue;
    const double y = std::log(s1 / s2);
    const double x = row.d;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    n += 1;
    p.min_log_ratio = std::min(p.min_log_ratio, y);
  }
  p.samples = static_cast<std::size_t>(n);
  if (n >= 2) {
    const double denom = n * sxx - sx * sx;
    p.slope = denom > 0 ? (n * sxy - sx * sy) / denom : 0.0;
    p.intercept = (sy - p.slope * sx) / n;
  }
  if (n == 0) p.min_log_ratio = 0;
  p.dominated = p.slope > 1e-6;
  return p;
}

}  // namespace mls
