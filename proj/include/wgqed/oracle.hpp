// Brute-force reference: the field discretized into N plane-wave modes of a
// periodic box, exact diagonalization of the single-excitation Hamiltonian and
// time evolution by spectral decomposition.
//
// Basis of the lab frame: index 0 = |e_A g_B; vac>, 1 = |g_A e_B; vac>,
// 2 + (j + J) = |g_A g_B; k_j>, k_j = 2 pi j / L, j = -J..J, N = 2J + 1.
// H_{A,j} = g_j, H_{B,j} = g_j e^{i k_j d}, g_j = lambda sqrt(dk / omega_j).
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wgqed/types.hpp"

namespace wgqed::oracle {

struct SingleExcitationState {
  Complex c_a{};
  Complex c_b{};
  /// Amplitude per mode, ordered j = -J..J.
  Eigen::VectorXcd phi;

  [[nodiscard]] double norm() const {
    return std::sqrt(std::norm(c_a) + std::norm(c_b) + phi.squaredNorm());
  }
  [[nodiscard]] double atomic_population() const { return std::norm(c_a) + std::norm(c_b); }
};

struct BuildOptions {
  int modes = 4001;
  /// Box length; unset selects pi N / (8 M), the largest box with k_max >= 8 M.
  std::optional<double> box_length;
};

/// Immutable after build: the Hamiltonian data and its full eigendecomposition.
class DiscretizedModel {
 public:
  [[nodiscard]] const ModelParams& params() const { return params_; }
  [[nodiscard]] double box_length() const { return box_length_; }
  [[nodiscard]] int modes() const { return static_cast<int>(k_.size()); }
  [[nodiscard]] double dk() const { return dk_; }
  [[nodiscard]] double k_max() const { return kPi * modes() / box_length_; }
  [[nodiscard]] const std::vector<double>& wavenumbers() const { return k_; }
  [[nodiscard]] const std::vector<double>& frequencies() const { return omega_; }
  [[nodiscard]] const std::vector<double>& couplings() const { return g_; }

  /// Dense lab-frame Hamiltonian, (2 + N) x (2 + N). Memory grows as N^2.
  [[nodiscard]] Eigen::MatrixXcd hamiltonian() const;
  /// H |psi> without forming H.
  [[nodiscard]] SingleExcitationState apply(const SingleExcitationState& psi) const;

  /// All 2 + N eigenvalues in ascending order.
  [[nodiscard]] Eigen::VectorXd eigenvalues() const;
  [[nodiscard]] int eigenvalue_count() const;
  /// Eigenpair by index in ascending order.
  [[nodiscard]] std::pair<double, SingleExcitationState> eigenpair(int index) const;
  /// Weight |c_A|^2 + |c_B|^2 of an eigenvector.
  [[nodiscard]] double atomic_weight(int index) const;
  /// Parity of an eigenvector under the midpoint reflection: plus or minus atomic sector.
  [[nodiscard]] Sector parity(int index) const;

  /// Time for the fastest relevant photon to cross the box, L / v_g with v_g
  /// the group velocity at the state's mean energy (1 below threshold).
  [[nodiscard]] double recurrence_time(const SingleExcitationState& psi) const;

  [[nodiscard]] SingleExcitationState localized(Complex c_a, Complex c_b) const;

  /// Coefficients of a state in the eigenbasis, one vector per parity block.
  struct Expansion {
    Eigen::VectorXcd even;
    Eigen::VectorXcd odd;
  };
  [[nodiscard]] Expansion expand(const SingleExcitationState& psi) const;
  /// (c_A(t), c_B(t)) in O(N).
  [[nodiscard]] std::pair<Complex, Complex> atomic_amplitudes(const Expansion& a, double t) const;
  [[nodiscard]] SingleExcitationState state_at(const Expansion& a, double t) const;

 private:
  friend DiscretizedModel build(const ModelParams& params, const BuildOptions& opt);

  // Midpoint standing-wave blocks: even = [Psi+, k=0 mode, cos modes j=1..J],
  // odd = [Psi-, sin modes j=1..J]; both real symmetric.
  struct Block {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
  };
  void to_blocks(const SingleExcitationState& psi, Eigen::VectorXcd& even,
                 Eigen::VectorXcd& odd) const;
  SingleExcitationState from_blocks(const Eigen::VectorXcd& even, const Eigen::VectorXcd& odd) const;
  [[nodiscard]] std::pair<bool, int> locate(int index) const;

  ModelParams params_;
  double box_length_ = 0.0;
  double dk_ = 0.0;
  std::vector<double> k_, omega_, g_;
  Block even_, odd_;
  std::vector<std::pair<bool, int>> order_;
};

/// Assembles and diagonalizes. Rejects N even or < 3, k_max < 8 M and
/// L < 40 max(d, 1/M), naming the violated bound.
DiscretizedModel build(const ModelParams& params, const BuildOptions& opt = {});

struct OracleEigenstate {
  double energy = 0.0;
  double atomic_weight = 0.0;
  Sector parity = Sector::plus;
  SingleExcitationState state;
};

struct BoundStateReport {
  Eigen::VectorXd eigenvalues;
  /// Eigenstates below threshold, ascending in energy.
  std::vector<OracleEigenstate> below_threshold;
  /// The in-continuum eigenvector with the largest atomic weight.
  std::optional<OracleEigenstate> continuum_candidate;
};

BoundStateReport eigen_bound_states(const DiscretizedModel& model);

struct EvolutionSample {
  double t = 0.0;
  Complex c_a{};
  Complex c_b{};
  double population_a = 0.0;
  double population_b = 0.0;
  double atomic_population = 0.0;
  double concurrence = 0.0;
  double norm = 0.0;
  /// Filled only when the field is requested.
  std::optional<Eigen::VectorXcd> phi;
};

struct Evolution {
  std::vector<EvolutionSample> samples;
  double recurrence_time = 0.0;
  std::vector<std::string> warnings;
};

/// Exact evolution by spectral decomposition. Throws DomainError for an
/// unnormalized initial state (|norm - 1| > 1e-12).
Evolution evolve(const DiscretizedModel& model, const SingleExcitationState& initial,
                 std::span<const double> times, bool with_field = false);

struct FieldProfile {
  std::vector<double> x;
  /// E |phi~(x)|^2 with phi~(x) = int dk/(2 pi) phi(k) e^{ikx}.
  std::vector<double> pole_form;
  /// Sum of the three normal-ordered terms (momentum, gradient, mass), in the
  /// same normalization as pole_form.
  std::vector<double> full;
  double energy = 0.0;
};

/// energy: the E in the pole form; unset uses <psi|H|psi>.
FieldProfile field_profile(const DiscretizedModel& model, const SingleExcitationState& state,
                           std::span<const double> x, std::optional<double> energy = {});

}  // namespace wgqed::oracle
