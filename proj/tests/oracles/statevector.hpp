#pragma once

// Independent pure-state simulator for the collision circuit. Plain loops over
// amplitudes, no shared code with the library's density-matrix path.
// Qubit 0 is the most significant bit of the basis index.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using State = std::vector<cplx>;
using Gate = std::array<cplx, 4>;  // row-major 2x2

inline std::size_t bit_of(int qubit, int n) { return std::size_t{1} << (n - 1 - qubit); }

inline State zero_state(int n) {
  State s(std::size_t{1} << n, 0.0);
  s[0] = 1.0;
  return s;
}

inline void apply(State& s, const Gate& u, int qubit, int n) {
  const std::size_t m = bit_of(qubit, n);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i & m) continue;
    const cplx a0 = s[i], a1 = s[i | m];
    s[i] = u[0] * a0 + u[1] * a1;
    s[i | m] = u[2] * a0 + u[3] * a1;
  }
}

inline void apply_cnot(State& s, int control, int target, int n) {
  const std::size_t c = bit_of(control, n), t = bit_of(target, n);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((i & c) && !(i & t)) std::swap(s[i], s[i | t]);
  }
}

inline Gate ry(double angle) {
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  return {c, -s, s, c};
}

/// Ancilla rotations first, then ancilla k controls a NOT on the system.
inline State collision_state(double total_time, int n_collisions) {
  const int n = n_collisions + 1;
  const double g = std::acos(std::exp(-total_time / n_collisions));
  State s = zero_state(n);
  for (int k = 1; k <= n_collisions; ++k) apply(s, ry(g), k, n);
  for (int k = 1; k <= n_collisions; ++k) apply_cnot(s, k, 0, n);
  return s;
}

/// Projector components for outcome bit `o` of direction d: 0.5 (I +- d.sigma).
inline Gate projector(const std::array<double, 3>& d, int o) {
  const double sgn = o == 0 ? 1.0 : -1.0;
  const cplx i(0, 1);
  return {0.5 * (1.0 + sgn * d[2]), 0.5 * sgn * (d[0] - i * d[1]), 0.5 * sgn * (d[0] + i * d[1]),
          0.5 * (1.0 - sgn * d[2])};
}

/// Unnormalized conditional 2x2 state of qubit 0 for Alice outcome bits `a`
/// (ancilla 1 most significant) under per-ancilla directions `dirs`.
inline std::array<cplx, 4> conditional_state(const State& psi, int n_collisions,
                                             const std::vector<std::array<double, 3>>& dirs, std::size_t a) {
  const int n = n_collisions + 1;
  State phi = psi;
  for (int k = 1; k <= n_collisions; ++k) {
    const int bit = static_cast<int>((a >> (n_collisions - k)) & 1U);
    apply(phi, projector(dirs[static_cast<std::size_t>(k - 1)], bit), k, n);
  }
  // Tr_E[(I x P) |psi><psi|] = Tr_E |phi><phi| since P is an idempotent projector.
  std::array<cplx, 4> sigma{};
  const std::size_t half = phi.size() / 2;
  for (std::size_t e = 0; e < half; ++e) {
    const cplx u0 = phi[e], u1 = phi[half + e];
    sigma[0] += u0 * std::conj(u0);
    sigma[1] += u0 * std::conj(u1);
    sigma[2] += u1 * std::conj(u0);
    sigma[3] += u1 * std::conj(u1);
  }
  return sigma;
}

/// Bloch vector of a 2x2 (unnormalized) operator, divided by its trace.
inline std::array<double, 4> trace_and_bloch(const std::array<cplx, 4>& m) {
  const double tr = (m[0] + m[3]).real();
  if (tr <= 0.0) return {0, 0, 0, 0};
  return {tr, 2.0 * m[2].real() / tr, 2.0 * m[2].imag() / tr, (m[0] - m[3]).real() / tr};
}

/// Joint distribution over (a, b) for Bob measuring axis `bob_axis` (0 x, 1 y, 2 z).
inline std::vector<double> joint_distribution(const State& psi, int n_collisions,
                                              const std::vector<std::array<double, 3>>& dirs, int bob_axis) {
  const std::size_t outcomes = std::size_t{1} << n_collisions;
  std::vector<double> p(outcomes * 2);
  for (std::size_t a = 0; a < outcomes; ++a) {
    const auto tb = trace_and_bloch(conditional_state(psi, n_collisions, dirs, a));
    const double r = tb[static_cast<std::size_t>(bob_axis) + 1];
    p[a * 2] = tb[0] * 0.5 * (1.0 + r);
    p[a * 2 + 1] = tb[0] * 0.5 * (1.0 - r);
  }
  return p;
}

}  // namespace oracle
