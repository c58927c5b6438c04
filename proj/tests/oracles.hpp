#pragma once

// Naive reference evaluators. They enumerate the kernel entry by entry and
// share no code with the library beyond the model accessors.

#include <cmath>
#include <cstddef>
#include <vector>

#include "pasa/mdp.hpp"
#include "pasa/partition.hpp"
#include "pasa/sarsa.hpp"

namespace oracle {

inline double kernel(const pasa::MdpModel& m, std::size_t s, std::size_t a,
                     std::size_t next) {
  const std::size_t S = m.states();
  double noise = 0.0;
  if (m.noise() == pasa::NoiseKind::kUniform) {
    noise = 1.0 / static_cast<double>(S);
  } else if (S == 1) {
    noise = 1.0;
  } else {
    noise = next == s ? 0.0 : 1.0 / static_cast<double>(S - 1);
  }
  const double point = m.successor(s, a) == next ? 1.0 : 0.0;
  return (1.0 - m.delta()) * point + m.delta() * noise;
}

inline double pi(const pasa::Policy& p, std::size_t s, std::size_t a) {
  if (p.actions() == 1) return 1.0;
  if (a == p.preferred(s)) return 1.0 - p.delta_pi();
  return p.delta_pi() / static_cast<double>(p.actions() - 1);
}

// Row-major S x S.
inline std::vector<double> chain(const pasa::MdpModel& m, const pasa::Policy& p) {
  const std::size_t S = m.states();
  std::vector<double> M(S * S, 0.0);
  for (std::size_t i = 0; i < S; ++i)
    for (std::size_t a = 0; a < m.actions(); ++a)
      for (std::size_t j = 0; j < S; ++j) M[i * S + j] += pi(p, i, a) * kernel(m, i, a, j);
  return M;
}

// Q iterated to a fixed point (row-major S x A).
inline std::vector<double> value_iteration(const pasa::MdpModel& m,
                                           const pasa::Policy& p) {
  const std::size_t S = m.states(), A = m.actions();
  std::vector<double> q(S * A, 0.0), next(S * A);
  for (int it = 0; it < 100000; ++it) {
    double diff = 0.0;
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t a = 0; a < A; ++a) {
        double v = m.reward(s, a);
        for (std::size_t s2 = 0; s2 < S; ++s2)
          for (std::size_t a2 = 0; a2 < A; ++a2)
            v += m.gamma() * kernel(m, s, a, s2) * pi(p, s2, a2) * q[s2 * A + a2];
        diff = std::max(diff, std::abs(v - q[s * A + a]));
        next[s * A + a] = v;
      }
    }
    q.swap(next);
    if (diff == 0.0) break;
  }
  return q;
}

inline double qhat(const pasa::CellValueTable& t, const pasa::CellMap& map,
                   std::size_t s, std::size_t a) {
  for (std::size_t c = 0; c < map.cells(); ++c)
    if (map.members(c).contains(s)) return t(c, a);
  return NAN;
}

// Bellman score L by a plain quadruple loop.
inline double bellman_L(const pasa::CellValueTable& t, const pasa::CellMap& map,
                        const pasa::MdpModel& m, const pasa::Policy& p,
                        const std::vector<double>& psi,
                        const std::vector<bool>* subset = nullptr) {
  const std::size_t S = m.states(), A = m.actions();
  double L = 0.0;
  for (std::size_t s = 0; s < S; ++s) {
    if (subset != nullptr && !(*subset)[s]) continue;
    for (std::size_t a = 0; a < A; ++a) {
      double tq = m.reward(s, a);
      for (std::size_t s2 = 0; s2 < S; ++s2)
        for (std::size_t a2 = 0; a2 < A; ++a2)
          tq += m.gamma() * kernel(m, s, a, s2) * pi(p, s2, a2) * qhat(t, map, s2, a2);
      const double r = tq - qhat(t, map, s, a);
      L += psi[s] * r * r;
    }
  }
  return L;
}

inline double mse(const pasa::CellValueTable& t, const pasa::CellMap& map,
                  const std::vector<double>& q, std::size_t A,
                  const std::vector<double>& psi) {
  double out = 0.0;
  for (std::size_t s = 0; s < psi.size(); ++s)
    for (std::size_t a = 0; a < A; ++a) {
      const double d = q[s * A + a] - qhat(t, map, s, a);
      out += psi[s] * d * d;
    }
  return out;
}

// Stationary distribution by long power iteration on the dense chain.
inline std::vector<double> stationary(const std::vector<double>& M, std::size_t S) {
  std::vector<double> psi(S, 1.0 / static_cast<double>(S)), next(S);
  for (int it = 0; it < 200000; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < S; ++i)
      for (std::size_t j = 0; j < S; ++j) next[j] += psi[i] * M[i * S + j];
    double diff = 0.0;
    for (std::size_t j = 0; j < S; ++j) diff = std::max(diff, std::abs(next[j] - psi[j]));
    psi.swap(next);
    if (diff < 1e-16) break;
  }
  return psi;
}

}  // namespace oracle
