#include "mls/manhattan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "mls/error.hpp"

namespace mls {

namespace {

constexpr double kSlack = 1e-9;
constexpr double kGolden = 0.6180339887498949;

double log_sum_exp(const std::vector<double>& xs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

struct Fit {
  double slope;
  double stderr_;
};

Fit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  double ssr = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (my + slope * (x[i] - mx));
    ssr += r * r;
  }
  const double se = x.size() > 2 ? std::sqrt(ssr / (n - 2) / sxx) : 0.0;
  return {slope, se};
}

double interpolate(std::span<const double> xs, std::span<const double> ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - xs.begin());
  const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

}  // namespace

double CurveSamples::at(double a) const { return interpolate(grid, theta, a); }

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "grid needs >= 2 points");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

CurveSamples sample_theta(const JointHistogram& h, std::span<const double> grid, double v_d_star, std::size_t window) {
  if (window < 3) throw Error(ErrorKind::InvalidArgument, "window needs >= 3 annuli");
  if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw Error(ErrorKind::InvalidArgument, "grid must increase strictly");
  }
  const int top = static_cast<int>(std::floor(h.radius + kSlack));
  if (top < 6 || static_cast<std::size_t>(top) < window) {
    throw Error(ErrorKind::InsufficientAnnuli, "census radius " + std::to_string(top) + " has fewer than " +
                                                   std::to_string(std::max<std::size_t>(6, window)) + " annuli");
  }
  // Cells grouped by annulus index ceil(d).
  const int first = top - static_cast<int>(window) + 1;
  std::vector<std::vector<const HistogramCell*>> annuli(window);
  for (const auto& c : h.cells) {
    const int k = static_cast<int>(std::ceil(c.d - kSlack));
    if (k >= first && k <= top) annuli[static_cast<std::size_t>(k - first)].push_back(&c);
  }
  for (const auto& a : annuli) {
    if (a.empty()) throw Error(ErrorKind::InsufficientAnnuli, "empty annulus in the fit window");
  }

  CurveSamples out;
  out.grid.assign(grid.begin(), grid.end());
  out.radius = h.radius;
  out.window = window;
  out.v_d_star = v_d_star;
  std::vector<double> xs(window), ys(window), terms;
  for (std::size_t i = 0; i < window; ++i) xs[i] = static_cast<double>(first) + static_cast<double>(i);
  auto theta_at = [&](double a) {
    for (std::size_t i = 0; i < window; ++i) {
      terms.clear();
      for (const HistogramCell* c : annuli[i]) terms.push_back(std::log(static_cast<double>(c->count)) - a * c->d_star);
      ys[i] = log_sum_exp(terms);
    }
    return least_squares(xs, ys);
  };
  for (double a : grid) {
    const Fit f = theta_at(a);
    out.theta.push_back(f.slope);
    out.stderr_.push_back(f.stderr_);
  }
  out.v_d = theta_at(0.0).slope;

  for (std::size_t i = 1; i < out.theta.size(); ++i) {
    if (out.theta[i] > out.theta[i - 1] + 1e-12) out.monotone = false;
  }
  for (std::size_t i = 1; i + 1 < out.theta.size(); ++i) {
    const double a0 = out.grid[i - 1], a1 = out.grid[i], a2 = out.grid[i + 1];
    const double w = (a1 - a0) / (a2 - a0);
    const double chord = out.theta[i - 1] + w * (out.theta[i + 1] - out.theta[i - 1]);
    const double defect = out.theta[i] - chord;
    out.max_convexity_defect = std::max(out.max_convexity_defect, defect);
    const double slack = 1e-3 + 2 * std::max({out.stderr_[i - 1], out.stderr_[i], out.stderr_[i + 1]});
    if (defect > slack) out.convex = false;
  }
  return out;
}

BetaReport beta_of_normalized(std::span<const double> t_grid, std::span<const double> theta_tilde) {
  const std::size_t n = t_grid.size();
  if (n < 3 || theta_tilde.size() != n) throw Error(ErrorKind::InvalidArgument, "normalized curve needs >= 3 points");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = 1 - t_grid[i] - theta_tilde[i];
  const std::size_t k = static_cast<std::size_t>(std::max_element(g.begin(), g.end()) - g.begin());

  BetaReport r;
  double t_star = t_grid[k];
  double best = g[k];
  if (k == 0 || k + 1 == n) {
    const std::size_t nb = k == 0 ? 1 : n - 2;
    if (best > 1e-3 && std::abs(g[k] - g[nb]) > 1e-9) {
      throw Error(ErrorKind::GridTooCoarse, "maximum of the normalized gap sits at the grid end t=" +
                                                std::to_string(t_grid[k]));
    }
  } else {
    // Golden-section search on the quadratic through the three points around
    // the grid maximum.
    const double x0 = t_grid[k - 1], x1 = t_grid[k], x2 = t_grid[k + 1];
    const double y0 = g[k - 1], y1 = g[k], y2 = g[k + 1];
    auto q = [&](double x) {
      return y0 * (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2)) + y1 * (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2)) +
             y2 * (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
    };
    double lo = x0, hi = x2;
    double c = hi - kGolden * (hi - lo), d = lo + kGolden * (hi - lo);
    for (int it = 0; it < 100 && hi - lo > 1e-12; ++it) {
      if (q(c) > q(d)) {
        hi = d;
      } else {
        lo = c;
      }
      c = hi - kGolden * (hi - lo);
      d = lo + kGolden * (hi - lo);
    }
    const double t = 0.5 * (lo + hi);
    if (q(t) > best) {
      best = q(t);
      t_star = t;
    }
  }
  r.beta_bar = std::max(0.0, best);
  r.alpha_sym = 1 - r.beta_bar;
  r.xi = t_star;
  r.beta = r.beta_bar;
  r.rough_similarity = r.beta_bar <= 0.01;
  attach_dilation(r, DilationReport{1, 1, 1, 1, {}, {}});
  return r;
}

BetaReport beta(const CurveSamples& curve) {
  if (curve.grid.front() > kSlack || curve.grid.back() < curve.v_d_star - 1e-6) {
    throw Error(ErrorKind::PreconditionViolated, "curve grid must cover [0, v_d*]");
  }
  if (!(curve.v_d > 0) || !(curve.v_d_star > 0)) throw Error(ErrorKind::PreconditionViolated, "growth rates must be positive");
  // Normalized samples at the grid points inside [0, v*], plus t = 1.
  std::vector<double> t, th;
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    const double ti = curve.grid[i] / curve.v_d_star;
    if (ti >= 1 - 1e-12) break;
    t.push_back(ti);
    th.push_back(curve.theta[i] / curve.v_d);
  }
  t.push_back(1.0);
  th.push_back(curve.at(curve.v_d_star) / curve.v_d);
  BetaReport r = beta_of_normalized(t, th);
  r.xi *= curve.v_d_star;
  r.beta = curve.v_d * r.beta_bar;
  return r;
}

double DilationReport::delta() const { return std::log(dil_ab * dil_ba); }

DilationReport dilation(const ConjCensus& c) {
  if (!c.joint) throw Error(ErrorKind::InvalidArgument, "dilation needs a joint census");
  DilationReport r;
  bool any = false;
  for (const auto& row : c.rows) {
    if (row.cls.is_identity()) continue;
    const LengthBracket& a = row.ell;
    const LengthBracket& b = *row.ell_star;
    any = true;
    auto ratio = [](double num, double den) {
      return den > 0 ? num / den : std::numeric_limits<double>::infinity();
    };
    const double ab = ratio(a.lower, b.upper);
    const double ba = ratio(b.lower, a.upper);
    if (ab > r.dil_ab) {
      r.dil_ab = ab;
      r.witness_ab = row.cls;
    }
    if (ba > r.dil_ba) {
      r.dil_ba = ba;
      r.witness_ba = row.cls;
    }
    r.dil_ab_upper = std::max(r.dil_ab_upper, ratio(a.upper, b.lower));
    r.dil_ba_upper = std::max(r.dil_ba_upper, ratio(b.upper, a.lower));
  }
  if (!any) throw Error(ErrorKind::EmptyCensus, "no non-identity classes");
  return r;
}

void attach_dilation(BetaReport& r, const DilationReport& dil) {
  r.dil_ab = dil.dil_ab;
  r.dil_ba = dil.dil_ba;
  r.delta_thurston = std::max(0.0, dil.delta());
  r.tanh_bound = std::tanh(r.delta_thurston / 4);
  r.alpha_bound = 2 / (std::exp(r.delta_thurston / 2) + 1);
  r.witness_ab = dil.witness_ab.is_identity() ? "" : to_string(dil.witness_ab.word());
  r.witness_ba = dil.witness_ba.is_identity() ? "" : to_string(dil.witness_ba.word());
}

BoundCheck check_bounds(const BetaReport& r, double tol) {
  BoundCheck b{};
  b.tanh_bound = std::tanh(r.delta_thurston / 4);
  b.alpha_bound = 2 / (std::exp(r.delta_thurston / 2) + 1);
  b.beta_ok = r.beta_bar <= b.tanh_bound + tol;
  b.alpha_ok = r.alpha_sym >= b.alpha_bound - tol;
  b.inconclusive = !b.beta_ok;
  return b;
}

bool tau_within_dilations(double tau, const DilationReport& dil, double tol) {
  return tau >= 1 / dil.dil_ab - tol && tau <= dil.dil_ba + tol;
}

void write_curve_csv(std::ostream& os, const CurveSamples& c) {
  os << "a,theta,stderr\n";
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    os << format_double(c.grid[i]) << ',' << format_double(c.theta[i]) << ',' << format_double(c.stderr_[i]) << '\n';
  }
}

std::string beta_report_json(const BetaReport& r) {
  nlohmann::ordered_json j;
  j["beta"] = r.beta;
  j["beta_bar"] = r.beta_bar;
  j["xi"] = r.xi;
  j["alpha_sym"] = r.alpha_sym;
  j["dil_ab"] = r.dil_ab;
  j["dil_ba"] = r.dil_ba;
  j["witness_ab"] = r.witness_ab;
  j["witness_ba"] = r.witness_ba;
  j["delta_thurston"] = r.delta_thurston;
  j["tanh_bound"] = r.tanh_bound;
  j["alpha_bound"] = r.alpha_bound;
  j["rough_similarity"] = r.rough_similarity;
  return j.dump(2);
}

}  // namespace mls
