#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "wgqed/boundstates.hpp"
#include "wgqed/oracle.hpp"

using namespace wgqed;

namespace {

const ModelParams kSmall{1.25, 1e-2, 1.0, 1.0};

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double residual(const oracle::DiscretizedModel& m, int i) {
  const auto [e, v] = m.eigenpair(i);
  const oracle::SingleExcitationState hv = m.apply(v);
  const double da = std::abs(hv.c_a - e * v.c_a), db = std::abs(hv.c_b - e * v.c_b);
  return std::sqrt(da * da + db * db + (hv.phi - e * v.phi).squaredNorm());
}

}  // namespace

TEST_CASE("build checks its bounds") {
  CHECK_NOTHROW(oracle::build(kSmall, {201}));
  CHECK_THROWS_AS(oracle::build(kSmall, {200}), DomainError);
  CHECK_THROWS_AS(oracle::build(kSmall, {1}), DomainError);
  CHECK_THROWS_AS(oracle::build(kSmall, {201, 200.0}), DomainError);  // k_max < 8 M
  CHECK_THROWS_AS(oracle::build(kSmall.with_distance(3.0), {201}), DomainError);  // L < 40 d
  try {
    oracle::build(kSmall, {201, 200.0});
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("k_max") != std::string::npos);
  }
}

TEST_CASE("Hamiltonian structure") {
  const oracle::DiscretizedModel m = oracle::build(kSmall, {201});
  CHECK(m.modes() == 201);
  CHECK(m.dk() == doctest::Approx(2.0 * kPi / m.box_length()));
  CHECK(m.k_max() >= 8.0);
  const Eigen::MatrixXcd h = m.hamiltonian();
  CHECK((h - h.adjoint()).norm() <= 1e-14 * h.norm());

  // Dense and matrix-free products agree.
  oracle::SingleExcitationState psi = m.localized(Complex(0.3, 0.1), Complex(-0.2, 0.4));
  for (int j = 0; j < m.modes(); ++j) psi.phi(j) = Complex(std::sin(0.1 * j), std::cos(0.37 * j)) * 0.01;
  Eigen::VectorXcd flat(m.modes() + 2);
  flat << psi.c_a, psi.c_b, psi.phi;
  const Eigen::VectorXcd dense = h * flat;
  const oracle::SingleExcitationState hp = m.apply(psi);
  CHECK(std::abs(dense(0) - hp.c_a) < 1e-14);
  CHECK(std::abs(dense(1) - hp.c_b) < 1e-14);
  CHECK((dense.tail(m.modes()) - hp.phi).norm() < 1e-13);
}

TEST_CASE("eigenpairs") {
  const oracle::DiscretizedModel m = oracle::build(kSmall, {201});
  REQUIRE(m.eigenvalue_count() == 203);
  const Eigen::VectorXd ev = m.eigenvalues();
  for (int i = 1; i < ev.size(); ++i) CHECK(ev(i) >= ev(i - 1));
  for (int i : {0, 1, 17, 100, 202}) {
    CHECK(residual(m, i) < 1e-12);
    const auto [e, v] = m.eigenpair(i);
    CHECK(e == ev(i));
    CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.atomic_weight(i) == doctest::Approx(v.atomic_population()).epsilon(1e-12));
  }
  CHECK_THROWS_AS((void)m.eigenpair(203), DomainError);
}

TEST_CASE("free spectrum") {
  const ModelParams free{1.2345, 0.0, 1.0, 0.7};
  const oracle::DiscretizedModel f = oracle::build(free, {201});
  std::vector<double> expect(f.frequencies());
  expect.push_back(1.2345);
  expect.push_back(1.2345);
  std::sort(expect.begin(), expect.end());
  const Eigen::VectorXd ev = f.eigenvalues();
  for (int i = 0; i < ev.size(); ++i) CHECK(ev(i) == doctest::Approx(expect[i]).epsilon(1e-14));
  for (int i = 0; i < f.eigenvalue_count(); ++i) {
    const double w = f.atomic_weight(i);
    CHECK((w < 1e-24 || std::abs(w - 1.0) < 1e-14));
  }
}

TEST_CASE("dark state at zero distance") {
  const oracle::DiscretizedModel m = oracle::build(kSmall.with_distance(0.0), {201});
  const double h = 1.0 / std::sqrt(2.0);
  const oracle::SingleExcitationState dark = m.localized(h, -h);
  const oracle::SingleExcitationState hd = m.apply(dark);
  CHECK(std::abs(hd.c_a - 1.25 * h) < 1e-14);
  CHECK(std::abs(hd.c_b + 1.25 * h) < 1e-14);
  CHECK(hd.phi.norm() < 1e-14);

  std::vector<double> times;
  for (int i = 0; i <= 20; ++i) times.push_back(10.0 * i);
  const oracle::Evolution ev = oracle::evolve(m, dark, times);
  for (const auto& s : ev.samples) CHECK(s.concurrence == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("evolution conserves norm and energy") {
  const oracle::DiscretizedModel m = oracle::build(kSmall, {401});
  const oracle::SingleExcitationState init = m.localized(1.0, 0.0);
  std::vector<double> times{0.0, 3.0, 17.5, 60.0, 150.0};
  const oracle::Evolution ev = oracle::evolve(m, init, times, true);
  const auto energy = [&](const oracle::SingleExcitationState& s) {
    const oracle::SingleExcitationState hs = m.apply(s);
    return (std::conj(s.c_a) * hs.c_a + std::conj(s.c_b) * hs.c_b + s.phi.dot(hs.phi)).real();
  };
  const double e0 = energy(init);
  for (const auto& s : ev.samples) {
    CHECK(s.norm == doctest::Approx(1.0).epsilon(1e-10));
    REQUIRE(s.phi);
    oracle::SingleExcitationState st{s.c_a, s.c_b, *s.phi};
    CHECK(energy(st) == doctest::Approx(e0).epsilon(1e-10));
    CHECK(s.atomic_population == doctest::Approx(s.population_a + s.population_b));
  }
  CHECK(ev.samples[0].population_a == doctest::Approx(1.0));
  CHECK(ev.samples[0].concurrence == doctest::Approx(0.0).epsilon(1e-12));

  // Amplitude-only path agrees with the full state.
  const auto a = m.expand(init);
  const auto [ca, cb] = m.atomic_amplitudes(a, 60.0);
  CHECK(std::abs(ca - ev.samples[3].c_a) < 1e-12);
  CHECK(std::abs(cb - ev.samples[3].c_b) < 1e-12);

  CHECK_THROWS_AS(oracle::evolve(m, m.localized(1.0, 1.0), times), DomainError);
  CHECK(ev.warnings.empty());
  const std::vector<double> late{0.0, 10.0 * m.box_length()};
  CHECK_FALSE(oracle::evolve(m, init, late).warnings.empty());
}

TEST_CASE("vacuum field profile vanishes") {
  const oracle::DiscretizedModel m = oracle::build(kSmall, {201});
  const std::vector<double> x{-2.0, 0.0, 0.5, 3.0};
  const oracle::FieldProfile f = oracle::field_profile(m, m.localized(1.0, 0.0), x);
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(f.pole_form[i] == 0.0);
    CHECK(f.full[i] == 0.0);
  }
}

TEST_CASE("bound state in the continuum at d_1") {
  const ModelParams base{1.25, 1e-2, 1.0, 0.0};
  const ResonantBoundState st = solve_resonant_state(base, 1);
  const oracle::DiscretizedModel m = oracle::build(base.with_distance(st.d_n), {2001});
  const oracle::BoundStateReport rep = oracle::eigen_bound_states(m);
  // Threshold states below M exist but carry little atomic weight.
  for (const auto& b : rep.below_threshold) CHECK(b.atomic_weight < 0.05);
  REQUIRE(rep.continuum_candidate);
  const oracle::OracleEigenstate& c = *rep.continuum_candidate;
  CHECK(c.parity == Sector::plus);
  CHECK(c.energy == doctest::Approx(st.energy).epsilon(1e-4));
  CHECK(c.atomic_weight == doctest::Approx(st.p_n).epsilon(0.03));

  // Field energy: sin^2 shape and total between the atoms.
  std::vector<double> x;
  for (int i = 0; i <= 400; ++i) x.push_back(st.d_n * i / 400.0);
  const oracle::FieldProfile f = oracle::field_profile(m, c.state, x, c.energy);
  const EnergyDensityProfile e = energy_density(st, x);
  double fg = 0, ff = 0, gg = 0, integral = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    fg += f.pole_form[i] * e.density[i];
    ff += f.pole_form[i] * f.pole_form[i];
    gg += e.density[i] * e.density[i];
    integral += (i == 0 || i + 1 == x.size() ? 0.5 : 1.0) * f.pole_form[i] * (x[1] - x[0]);
  }
  CHECK(fg / std::sqrt(ff * gg) >= 0.95);
  CHECK(integral == doctest::Approx(e.prefactor * st.d_n / 2.0).epsilon(0.05));
}

TEST_CASE("sub-threshold doublet") {
  const ModelParams p{0.8, 1e-2, 1.0, 5.0};
  const OffResonantState an = off_resonant_states(p);
  const oracle::DiscretizedModel m = oracle::build(p, {1001});
  const oracle::BoundStateReport rep = oracle::eigen_bound_states(m);
  REQUIRE(rep.below_threshold.size() == 2);
  const double tol = std::max(2.0 * m.dk(), 1e-4);
  for (const auto& b : rep.below_threshold) {
    CHECK(std::abs(b.energy - (b.parity == Sector::plus ? an.e_plus : an.e_minus)) <= tol);
    CHECK(b.atomic_weight > 0.99);
  }
  CHECK(rep.below_threshold[0].parity == Sector::plus);

  // Doubling N and L barely moves the levels.
  const oracle::BoundStateReport fine = oracle::eigen_bound_states(oracle::build(p, {2001}));
  REQUIRE(fine.below_threshold.size() == 2);
  for (int i = 0; i < 2; ++i)
    CHECK(std::abs(fine.below_threshold[i].energy - rep.below_threshold[i].energy) < 1e-6);

  // Density outside the pair decays at twice the amplitude rate sqrt(M^2 - E^2).
  for (const auto& b : rep.below_threshold) {
    std::vector<double> x, logd;
    for (int i = 0; i <= 240; ++i) x.push_back(p.distance + 1.0 + 6.0 * i / 240);
    const oracle::FieldProfile f = oracle::field_profile(m, b.state, x, b.energy);
    for (double v : f.pole_form) logd.push_back(std::log(v));
    const double q = std::sqrt(1.0 - b.energy * b.energy);
    CHECK(-slope(x, logd) == doctest::Approx(2.0 * q).epsilon(0.10));
  }
}

TEST_CASE("relaxation rate of the decaying component") {
  const ModelParams base{1.25, 1e-2, 1.0, 0.0};
  const ResonantBoundState st = solve_resonant_state(base, 1);
  const oracle::DiscretizedModel m = oracle::build(base.with_distance(st.d_n), {2001});
  const double gu = 8.0 * kPi * 1e-4 / st.k_bar_leading;
  std::vector<double> times;
  for (int i = 0; i <= 300; ++i) times.push_back((0.1 + 2.9 * i / 300) / gu);
  const double h = 1.0 / std::sqrt(2.0);
  const oracle::Evolution ev = oracle::evolve(m, m.localized(h, -h), times);
  REQUIRE(ev.warnings.empty());
  std::vector<double> lp;
  for (const auto& s : ev.samples) lp.push_back(std::log(s.atomic_population));
  CHECK(-slope(times, lp) == doctest::Approx(gu).epsilon(0.05));
}
