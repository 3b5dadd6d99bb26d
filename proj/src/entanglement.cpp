#include "wgqed/entanglement.hpp"

#include <algorithm>
#include <cmath>

namespace wgqed {

double concurrence(const Eigen::Matrix4cd& rho) {
  // sigma_y x sigma_y in the computational basis.
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Eigen::Matrix4cd herm = 0.5 * (rho + rho.adjoint());
  const Eigen::Matrix4cd tilde = yy * herm.conjugate() * yy;

  // sqrt(rho) tilde sqrt(rho) is Hermitian with the same spectrum as rho tilde.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(herm);
  Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::Matrix4cd root = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  const Eigen::Matrix4cd r = root * tilde * root;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> rs(0.5 * (r + r.adjoint()),
                                                     Eigen::EigenvaluesOnly);
  Eigen::Vector4d l = rs.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  std::sort(l.data(), l.data() + 4, std::greater<>());
  return std::max(0.0, l(0) - l(1) - l(2) - l(3));
}

Eigen::Matrix4cd single_excitation_atomic_state(std::complex<double> c_a,
                                                std::complex<double> c_b) {
  Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
  psi(1) = c_b;
  psi(2) = c_a;
  Eigen::Matrix4cd rho = psi * psi.adjoint();
  rho(0, 0) += std::max(0.0, 1.0 - std::norm(c_a) - std::norm(c_b));
  return rho;
}

}  // namespace wgqed
