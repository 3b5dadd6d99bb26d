// Two-qubit concurrence (Wootters).
#pragma once

#include <Eigen/Dense>

namespace wgqed {

/// C(rho) = max(0, l1 - l2 - l3 - l4), l_i the decreasing square roots of the
/// eigenvalues of rho (sy x sy) rho* (sy x sy). rho must be a 4x4 density matrix
/// in the computational basis |00>, |01>, |10>, |11>.
double concurrence(const Eigen::Matrix4cd& rho);

/// Reduced atomic state of c_A |e_A g_B> + c_B |g_A e_B> + |g_A g_B> (x) photon
/// part with norm^2 = 1 - |c_A|^2 - |c_B|^2.
Eigen::Matrix4cd single_excitation_atomic_state(std::complex<double> c_a, std::complex<double> c_b);

}  // namespace wgqed
