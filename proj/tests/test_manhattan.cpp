#include <cmath>
#include <sstream>

#include "doctest.h"
#include "mls/error.hpp"
#include "mls/manhattan.hpp"

using namespace mls;

namespace {

MetricHandle basis() { return MetricHandle::word(GeneratingSet::standard_basis(2)); }

MetricHandle prime() {
  return MetricHandle::word(GeneratingSet::from_words(2, {parse_word("a"), parse_word("b"), parse_word("ab")}));
}

const double kLog3 = std::log(3.0);
const double kLog4 = std::log(4.0);

}  // namespace

TEST_CASE("self-pair curve is the anti-diagonal") {
  const auto h = joint_histogram(basis(), basis(), 10);
  const auto grid = uniform_grid(0, kLog3, 11);
  CHECK(grid.front() == 0);
  CHECK(grid.back() == kLog3);
  const auto c = sample_theta(h, grid, kLog3);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(c.theta[i] == doctest::Approx(kLog3 - grid[i]).epsilon(1e-12));
  CHECK(c.monotone);
  CHECK(c.convex);
  const auto b = beta(c);
  CHECK(b.beta == doctest::Approx(0).epsilon(1e-9));
  std::ostringstream os;
  write_curve_csv(os, c);
  CHECK(os.str().rfind("a,theta,stderr\n", 0) == 0);
}

TEST_CASE("short censuses cannot support the slope window") {
  const auto h = joint_histogram(basis(), basis(), 4);
  const auto grid = uniform_grid(0, kLog3, 5);
  CHECK_THROWS_AS(sample_theta(h, grid, kLog3), Error);
}

TEST_CASE("normalized beta of a known curve") {
  // theta~(t) = (1 - t)^2 gives 1 - t - theta~ = t (1 - t), maximal 1/4 at 1/2.
  std::vector<double> t, th;
  for (int i = 0; i <= 20; ++i) {
    t.push_back(i / 20.0);
    th.push_back((1 - i / 20.0) * (1 - i / 20.0));
  }
  const auto b = beta_of_normalized(t, th);
  CHECK(b.beta_bar == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(b.alpha_sym == doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("maximum at the grid edge with a slope is reported") {
  std::vector<double> t, th;
  for (int i = 0; i <= 10; ++i) {
    t.push_back(i / 10.0);
    th.push_back(1 - 1.2 * i / 10.0);  // 1 - t - theta~ = t/5 still rising at t = 1
  }
  CHECK_THROWS_AS(beta_of_normalized(t, th), Error);
}

TEST_CASE("basis against the augmented set") {
  const auto census = enumerate_joint_conjugacy(basis(), prime(), 8);
  const auto dil = dilation(census);
  CHECK(dil.dil_ab == doctest::Approx(2.0));  // l_S(ab) = 2, l_S'(ab) = 1
  CHECK(dil.dil_ba == doctest::Approx(1.0));
  CHECK(dil.delta() == doctest::Approx(std::log(2.0)));
  CHECK(tau_within_dilations(1.0, dil));

  const auto h = joint_histogram(basis(), prime(), 10);
  const auto c = sample_theta(h, uniform_grid(0, kLog4, 21), kLog4);
  CHECK(c.theta.front() == doctest::Approx(kLog3).epsilon(1e-9));
  CHECK(std::abs(c.theta.back()) < 0.05);
  CHECK(c.convex);
  auto r = beta(c);
  attach_dilation(r, dil);
  CHECK(r.tanh_bound == doctest::Approx(std::tanh(std::log(2.0) / 4)));
  CHECK(r.alpha_bound == doctest::Approx(2 / (std::exp(std::log(2.0) / 2) + 1)));
  const auto bc = check_bounds(r);
  CHECK(bc.beta_ok);
  CHECK(bc.alpha_ok);
  CHECK(r.beta_bar > 0);
  CHECK(beta_report_json(r).find("\"beta_bar\"") != std::string::npos);
}

TEST_CASE("curve interpolation clamps") {
  CurveSamples c;
  c.grid = {0, 1, 2};
  c.theta = {2, 1, 0.5};
  CHECK(c.at(-1) == 2);
  CHECK(c.at(0.5) == doctest::Approx(1.5));
  CHECK(c.at(5) == 0.5);
}
