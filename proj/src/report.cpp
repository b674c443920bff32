#include "mls/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "mls/error.hpp"

namespace mls {

namespace {

// JSON has no infinities; they are written as strings.
Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorKind::Config, "cannot write " + path.string());
  os << content;
}

std::string counts_csv(const CountingSequence& counts) {
  std::ostringstream os;
  write_counts_csv(os, counts);
  return os.str();
}

std::string curve_csv(const CurveSamples& curve) {
  std::ostringstream os;
  write_curve_csv(os, curve);
  return os.str();
}

std::string census_csv(const ElementCensus& census) {
  std::ostringstream os;
  write_census_csv(os, census);
  return os.str();
}

Json to_json(const GrowthEstimate& g) {
  Json j;
  j["rate"] = g.rate;
  j["method"] = g.method;
  j["annulus"] = g.annulus;
  j["linear_fit"] = g.linear_fit;
  j["corrected_fit"] = g.corrected_fit;
  j["prefactor"] = g.prefactor;
  j["window"] = {g.window_min, g.window_max};
  j["residual"] = g.residual;
  j["degenerate"] = g.degenerate;
  return j;
}

Json to_json(const CurveSamples& c) {
  Json j;
  j["v_d"] = c.v_d;
  j["v_d_star"] = c.v_d_star;
  j["radius"] = c.radius;
  j["window"] = c.window;
  j["monotone"] = c.monotone;
  j["convex"] = c.convex;
  j["max_convexity_defect"] = c.max_convexity_defect;
  return j;
}

Json to_json(const BetaReport& r) { return Json::parse(beta_report_json(r)); }

Json to_json(const DilationReport& d) {
  Json j;
  j["dil_ab"] = number(d.dil_ab);
  j["dil_ba"] = number(d.dil_ba);
  j["dil_ab_census_upper"] = number(d.dil_ab_upper);
  j["dil_ba_census_upper"] = number(d.dil_ba_upper);
  j["witness_ab"] = d.witness_ab.is_identity() ? "" : to_string(d.witness_ab.word());
  j["witness_ba"] = d.witness_ba.is_identity() ? "" : to_string(d.witness_ba.word());
  j["delta_thurston"] = number(d.delta());
  return j;
}

Json to_json(const BoundCheck& b) {
  Json j;
  j["tanh_bound"] = b.tanh_bound;
  j["alpha_bound"] = b.alpha_bound;
  j["beta_ok"] = b.beta_ok;
  j["alpha_ok"] = b.alpha_ok;
  j["inconclusive"] = b.inconclusive;
  return j;
}

Json to_json(const SandwichEstimate& s) {
  Json j;
  j["lower"] = number(s.lower);
  j["upper"] = number(s.upper);
  j["depth"] = s.depth;
  j["subsampled"] = s.subsampled;
  return j;
}

Json to_json(const BochiResult& b) {
  Json j;
  j["value"] = b.value;
  j["c_m"] = b.c_m;
  j["d_m"] = b.d_m;
  j["subsampled"] = b.subsampled;
  if (b.subsampled) j["note"] = "randomized lower estimate of the right-hand side";
  return j;
}

Json to_json(const BoundReport& r) { return Json::parse(bound_report_json(r)); }

Json to_json(const IntersectionNumber& t) {
  Json j;
  j["tau"] = t.tau;
  j["tau_previous_radius"] = t.tau_prev;
  j["radius"] = t.radius;
  return j;
}

Json to_json(const ConjugateCountCheck& c) {
  Json j;
  j["count"] = c.count;
  j["ell"] = c.ell;
  j["lhs"] = number(c.lhs);
  j["rhs"] = c.rhs;
  j["holds"] = c.holds;
  return j;
}

Json to_json(const DominationProfile& p) {
  Json j;
  j["slope"] = p.slope;
  j["intercept"] = p.intercept;
  j["min_log_ratio"] = p.min_log_ratio;
  j["samples"] = p.samples;
  j["dominated"] = p.dominated;
  j["parabolic_generator"] = p.parabolic_generator;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace mls
