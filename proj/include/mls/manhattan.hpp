#pragma once

// Manhattan curve sampling and the invariants read off it.

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mls/census.hpp"

namespace mls {

struct CurveSamples {
  std::vector<double> grid;   // increasing a values
  std::vector<double> theta;  // theta(a)
  std::vector<double> stderr_;
  double v_d = 0;       // theta(0), the slope of log sphere sizes
  double v_d_star = 0;  // supplied, measured on the d* ball
  double radius = 0;
  std::size_t window = 0;
  bool monotone = true;
  double max_convexity_defect = 0;  // max over consecutive triples, before slack
  bool convex = true;               // defect <= 1e-3 + 2 stderr on every triple

  /// Piecewise-linear interpolant of theta; clamps outside the grid.
  double at(double a) const;
};

/// theta(a) is the least-squares slope in T of log W_a(T) over the top `window`
/// annuli, W_a(T) = sum over T-1 < d <= T of exp(-a d*).
CurveSamples sample_theta(const JointHistogram& h, std::span<const double> grid, double v_d_star,
                          std::size_t window = 6);

/// n evenly spaced points on [lo, hi].
std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

struct BetaReport {
  double beta = 0;
  double beta_bar = 0;
  double xi = 0;         // tangency point, in units of a
  double alpha_sym = 0;  // t + theta~(t) at the tangency, both metrics at unit growth
  double dil_ab = 1;
  double dil_ba = 1;
  double delta_thurston = 0;
  double tanh_bound = 0;
  double alpha_bound = 1;  // 2/(exp(Delta/2) + 1)
  bool rough_similarity = false;
  std::string witness_ab;
  std::string witness_ba;
};

/// Maximizes 1 - t - theta~(t) with theta~(t) = theta(t v*)/v over t in [0, 1].
/// Throws GridTooCoarse when the maximum sits at an end of the grid with a
/// nonzero slope there.
BetaReport beta(const CurveSamples& curve);

/// Same maximization for a normalized curve given as a function on [0, 1].
BetaReport beta_of_normalized(std::span<const double> t_grid, std::span<const double> theta_tilde);

struct DilationReport {
  double dil_ab = 0;        // max of l_d.lower / l_d*.upper, a lower bound of Dil(d, d*)
  double dil_ba = 0;
  double dil_ab_upper = 0;  // max of l_d.upper / l_d*.lower over the census
  double dil_ba_upper = 0;
  CyclicWord witness_ab;
  CyclicWord witness_ba;
  double delta() const;     // log(dil_ab dil_ba)
};
DilationReport dilation(const ConjCensus& c);

/// Copies census dilations into the report and recomputes the derived bounds.
void attach_dilation(BetaReport& r, const DilationReport& dil);

struct BoundCheck {
  double tanh_bound;
  double alpha_bound;
  bool beta_ok;        // beta_bar <= tanh(Delta/4) + tol
  bool alpha_ok;       // alpha_sym >= 2/(exp(Delta/2)+1) - tol
  bool inconclusive;   // beta check failed; census Delta under-estimates the true one
};
BoundCheck check_bounds(const BetaReport& r, double tol = 0.02);

/// 1/Dil(d, d*) <= tau(d*/d) <= Dil(d*, d), with census dilations.
bool tau_within_dilations(double tau, const DilationReport& dil, double tol = 0.0);

void write_curve_csv(std::ostream& os, const CurveSamples& c);
std::string beta_report_json(const BetaReport& r);

}  // namespace mls
