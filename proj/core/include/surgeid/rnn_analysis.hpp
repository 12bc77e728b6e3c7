#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "surgeid/rnn.hpp"

namespace surgeid {

// Three-tier contraction certificate, strongest first:
//   theorem3_ok : || |a| + |w1|/(n+1) ||_inf < 1/(n+1)
//   gersgorin_ok: the three disc conditions with lambda_i = 1/(n+1), p = 1
//   m_psd_ok    : the (n+2)x(n+2) matrix M is PSD (eigenvalue spectrum)
// theorem3_ok implies gersgorin_ok implies m_psd_ok.
struct CertificationReport {
  bool theorem3_ok{false};
  bool gersgorin_ok{false};
  bool m_psd_ok{false};
  double min_eigenvalue_of_m{0.0};
  // max_i(|a_i| + |w1_i|/(n+1)); certificate holds when below 1/(n+1).
  double theorem3_value{0.0};
  std::vector<int> violating_neurons;  // psi_i = 1
};

// Assembles the symmetric certificate matrix
//   [ 2-p   0    -a'       ]
//   [ 0     p    -w1' Lam  ]
//   [ -a  -Lam w1  Lam     ]
Eigen::MatrixXd contraction_lmi_matrix(const RnnWeights& w, double p,
                                       const Eigen::VectorXd& lambda);

// Evaluates all three tiers with lambda_i = 1/(n+1) and p = 1. The PSD tier
// tolerates eigenvalues down to -psd_tol. Requires n > 1.
CertificationReport certify(const RnnWeights& w, double psd_tol = 1e-9);

// Contraction ratio implied by the Theorem-3 quantity:
//   K = (n+1) * max_i(|a_i| + |w1_i|/(n+1)),
// an upper bound on |forward(x1,u) - forward(x2,u)| / |x1 - x2|.
double contraction_ratio_bound(const RnnWeights& w);

// Kinks of the zero-input recurrence on [0, 1]: {0, 1} plus every
// -b_i/w1_i that lands inside, sorted and de-duplicated.
std::vector<double> critical_values(const RnnWeights& w, double dedup_tol = 1e-12);

enum class StabilityClass { stable, stable_oscillatory, unstable, marginal };
const char* to_string(StabilityClass c);

struct Equilibrium {
  double x{0.0};
  double slope{0.0};
  StabilityClass cls{StabilityClass::stable};
};

struct EquilibriumReport {
  std::vector<Equilibrium> equilibria;   // sorted by x
  std::vector<double> critical_values;
  // Set when phi(x) = x holds identically on a segment; the segment is
  // reported as an interval instead of infinitely many equilibria.
  bool has_marginal_segment{false};
  std::vector<std::pair<double, double>> marginal_segments;
};

// Enumerates fixed points of the zero-input map on [0, 1] by solving the
// affine piece between each pair of adjacent critical values in closed
// form. Roots are accepted within +-root_tol of their segment.
EquilibriumReport find_equilibria(const RnnWeights& w, double root_tol = 1e-9);

}  // namespace surgeid
