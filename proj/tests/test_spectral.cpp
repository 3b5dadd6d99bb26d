#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "wgqed/boundstates.hpp"
#include "wgqed/selfenergy.hpp"
#include "wgqed/spectral.hpp"

using namespace wgqed;

namespace {

const ModelParams kBase{1.25, 1e-2, 1.0, 0.0};

double k_bar() { return *resonant_wavenumber(kBase); }
double d1() { return *resonant_distance(kBase, 1); }

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

}  // namespace

TEST_CASE("poles at the first resonant distance") {
  const ModelParams p = kBase.with_distance(d1());
  const PoleResult s = find_pole(p, Sector::plus);
  const PoleResult u = find_pole(p, Sector::minus);
  CHECK(s.gamma() <= 1e-8);
  CHECK(u.gamma() == doctest::Approx(8.0 * kPi * 1e-4 / k_bar()).epsilon(0.02));
  CHECK(u.gamma() == doctest::Approx(3.35e-3).epsilon(0.02));
  CHECK(s.defect < 1e-10);
  CHECK(u.defect < 1e-10);
  CHECK(s.sector == Sector::plus);
}

TEST_CASE("free theory") {
  const ModelParams p{1.25, 0.0, 1.0, 3.0};
  for (Sector sec : {Sector::plus, Sector::minus}) {
    const PoleResult r = find_pole(p, sec);
    CHECK(r.z == Complex(1.25, 0.0));
    CHECK(r.gamma() == 0.0);
    CHECK(!std::signbit(r.gamma()));
    CHECK(pole_equation_defect(p, sec, Complex(1.3, -0.1)) == Complex(1.3 - 1.25, -0.1));
    const PoleResult q = perturbative_pole(p, sec);
    CHECK(q.z == Complex(1.25, 0.0));
  }
}

TEST_CASE("detuned stable pole follows the quadratic law") {
  const double d = d1() * 1.02;
  const PoleResult s = find_pole(kBase.with_distance(d), Sector::plus);
  const double pred = 2.0 * kPi * 1e-4 * k_bar() * (d - d1()) * (d - d1());
  CHECK(s.gamma() == doctest::Approx(pred).epsilon(0.10));
}

TEST_CASE("defect vanishes at the bound-state energy") {
  const ResonantBoundState st = solve_resonant_state(kBase, 1);
  const ModelParams p = kBase.with_distance(st.d_n);
  CHECK(std::abs(pole_equation_defect(p, Sector::plus, Complex(st.energy, 0.0))) < 1e-8);
  CHECK(std::abs(pole_equation_defect(p, Sector::minus, Complex(st.energy, 0.0))) > 1e-4);
}

TEST_CASE("explicit second-sheet pole equation agrees with the sheet-II composition") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> re(1.05, 2.0), im(0.01, 0.3), dd(0.5, 10.0);
  for (int i = 0; i < 30; ++i) {
    const ModelParams p = kBase.with_distance(dd(rng));
    const Complex z(re(rng), -im(rng));
    const Complex k = std::sqrt(z * z - 1.0);
    for (Sector s : {Sector::plus, Sector::minus}) {
      const Complex sig = sigma(p, s, z, Sheet::first).total() -
                          4.0 * kPi * kI * (1.0 + sign(s) * std::cos(k * p.distance)) / k;
      const Complex explicit_defect = z - p.omega0 - 1e-4 * sig;
      CHECK(std::abs(explicit_defect - pole_equation_defect(p, s, z)) < 1e-10);
    }
  }
}

TEST_CASE("find_pole input checks") {
  const ModelParams p = kBase.with_distance(5.0);
  CHECK_THROWS_AS(find_pole(p, Sector::plus, Complex(1.25, 0.1)), DomainError);
  SolverOptions opt;
  opt.max_iterations = 1;
  opt.acceptance = 1e-300;
  try {
    find_pole(p, Sector::plus, Complex(1.6, -0.3), opt);
    FAIL("expected a convergence error");
  } catch (const ConvergenceError& e) {
    CHECK(!e.history().empty());
  }
}

TEST_CASE("no pole above the real axis is ever reported") {
  for (double w : {0.95, 1.0, 1.02, 1.1}) {
    const ModelParams p{w, 1e-2, 1.0, 15.0};
    for (Sector s : {Sector::plus, Sector::minus}) {
      const PoleResult r = find_pole(p, s);
      CHECK(r.z.imag() <= 1e-10 * std::max(1.0, std::abs(r.z)));
    }
  }
}

TEST_CASE("trajectory continuation") {
  const ModelParams p{1.0, 1e-2, 1.0, 15.0};
  const std::vector<double> grid = linspace(1.15, 1.21, 25);
  const PoleTrajectory fwd = trace_trajectory(p, Sector::plus, SweepParameter::omega0, grid);
  REQUIRE(fwd.complete());
  REQUIRE(fwd.poles.size() == grid.size());

  std::vector<double> rev(grid.rbegin(), grid.rend());
  const PoleTrajectory bwd = trace_trajectory(p, Sector::plus, SweepParameter::omega0, rev);
  REQUIRE(bwd.complete());
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(std::abs(fwd.poles[i].z - bwd.poles[grid.size() - 1 - i].z) < 1e-9);

  // The plus-sector minimum sits at the n = 3 resonance omega0 = sqrt((3 pi/15)^2 + 1) - 2 lambda^2.
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (fwd.poles[i].gamma() < fwd.poles[best].gamma()) best = i;
  const double res = std::sqrt(std::pow(3.0 * kPi / 15.0, 2) + 1.0) - 2e-4;
  CHECK(std::abs(grid[best] - res) <= grid[1] - grid[0]);
  CHECK(fwd.poles[best].gamma() < 1e-6);

  // Distance sweep works too.
  const PoleTrajectory dist =
      trace_trajectory(kBase, Sector::minus, SweepParameter::distance, linspace(3.0, 5.0, 9));
  CHECK(dist.complete());
}

TEST_CASE("weak-coupling trajectory collapses onto omega0") {
  const ModelParams p{1.0, 1e-5, 1.0, 15.0};
  const std::vector<double> grid = linspace(1.1, 1.3, 11);
  const PoleTrajectory t = trace_trajectory(p, Sector::minus, SweepParameter::omega0, grid);
  REQUIRE(t.complete());
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(t.poles[i].z - grid[i]) < 1e-8);
}

TEST_CASE("trajectory grid validation") {
  const std::vector<double> one{1.1};
  CHECK_THROWS_AS(trace_trajectory(kBase, Sector::plus, SweepParameter::omega0, one), DomainError);
  const std::vector<double> bumpy{1.1, 1.2, 1.15};
  CHECK_THROWS_AS(trace_trajectory(kBase, Sector::plus, SweepParameter::omega0, bumpy), DomainError);
}

TEST_CASE("perturbative poles") {
  const ModelParams p = kBase.with_distance(d1());
  const PoleResult s = perturbative_pole(p, Sector::plus);
  const PoleResult u = perturbative_pole(p, Sector::minus);
  CHECK(s.energy() == doctest::Approx(std::sqrt(k_bar() * k_bar() + 1.0)).epsilon(1e-4));
  CHECK(s.gamma() < 1e-8);
  CHECK(u.gamma() == doctest::Approx(8.0 * kPi * 1e-4 / k_bar()).epsilon(0.01));
  CHECK_THROWS_AS(perturbative_pole(ModelParams{1.0, 1e-2, 1.0, 3.0}, Sector::plus), DomainError);
}

TEST_CASE("perturbative error scales as lambda^4") {
  std::vector<double> lx, ly;
  for (double l : {0.002, 0.005, 0.01, 0.02}) {
    const ModelParams p{1.25, l, 1.0, 5.0};
    const double diff = std::abs(perturbative_pole(p, Sector::minus).z - find_pole(p, Sector::minus).z);
    lx.push_back(std::log(l));
    ly.push_back(std::log(diff));
  }
  const double slope = (ly.back() - ly.front()) / (lx.back() - lx.front());
  CHECK(slope == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("rate ratio") {
  CHECK(rate_ratio(kBase, 1, d1()) == 0.0);
  CHECK(rate_ratio(k_bar(), 1, d1() + 0.1 / k_bar()) == doctest::Approx(0.0025).epsilon(1e-12));
  CHECK(rate_ratio(kBase, 2, 2.0 * d1() - 0.1 / k_bar()) == doctest::Approx(0.0025).epsilon(1e-12));
  CHECK_THROWS_AS(rate_ratio(kBase.with_omega0(0.5), 1, 3.0), DomainError);
  CHECK_THROWS_AS(rate_ratio(0.0, 1, 3.0), DomainError);

  const ModelParams p = kBase.with_distance(d1() + 0.05 / k_bar());
  const double ratio = find_pole(p, Sector::plus).gamma() / find_pole(p, Sector::minus).gamma();
  CHECK(ratio == doctest::Approx(rate_ratio(kBase, 1, p.distance)).epsilon(0.15));
}
