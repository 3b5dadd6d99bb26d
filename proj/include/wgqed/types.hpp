// Core value types shared by every module: model parameters, sectors, sheets
// and the exception hierarchy.
//
// Natural units hbar = v = 1 are used throughout; energies are measured in the
// same unit as the waveguide mass M.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace wgqed {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

/// Symmetry sector of the atomic pair: +1 for |Psi+>, -1 for |Psi->.
enum class Sector : int { plus = +1, minus = -1 };

constexpr double sign(Sector s) { return static_cast<double>(static_cast<int>(s)); }
constexpr Sector opposite(Sector s) { return s == Sector::plus ? Sector::minus : Sector::plus; }
/// Bell sector hosting the n-th resonant bound state, s = (-1)^(n+1).
constexpr Sector resonant_sector(int n) { return (n % 2 != 0) ? Sector::plus : Sector::minus; }
inline const char* to_string(Sector s) { return s == Sector::plus ? "plus" : "minus"; }

enum class Sheet { first, second };

/// Side from which a real energy on the cut is approached.
enum class Approach { from_sign, above, below };

/// Physical configuration (omega0, lambda, M, d).
struct ModelParams {
  double omega0 = 1.0;
  double lambda = 0.0;
  double mass = 1.0;
  double distance = 0.0;

  /// Throws DomainError when mass <= 0, lambda < 0 or distance < 0.
  void validate() const;

  /// lambda / M^{3/2} above 0.1 leaves the validated perturbative regime.
  [[nodiscard]] bool nonperturbative() const;

  [[nodiscard]] ModelParams with_distance(double d) const {
    ModelParams p = *this;
    p.distance = d;
    return p;
  }
  [[nodiscard]] ModelParams with_omega0(double w) const {
    ModelParams p = *this;
    p.omega0 = w;
    return p;
  }
};

inline constexpr double kPerturbativeCoupling = 0.1;

// Errors.

/// Input outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation requested exactly at a branch point or on a discontinuity
/// without a side tag.
class SingularInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Quadrature or other numerical procedure failed to meet its tolerance.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double estimated_error, int evaluations)
      : std::runtime_error(what), estimated_error_(estimated_error), evaluations_(evaluations) {}
  [[nodiscard]] double estimated_error() const { return estimated_error_; }
  [[nodiscard]] int evaluations() const { return evaluations_; }

 private:
  double estimated_error_;
  int evaluations_;
};

/// Iterative solver did not converge; carries the iterate history.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<Complex> history)
      : std::runtime_error(what), history_(std::move(history)) {}
  [[nodiscard]] const std::vector<Complex>& history() const { return history_; }

 private:
  std::vector<Complex> history_;
};

}  // namespace wgqed
