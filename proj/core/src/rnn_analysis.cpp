#include "surgeid/rnn_analysis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace surgeid {

Eigen::MatrixXd contraction_lmi_matrix(const RnnWeights& w, double p,
                                       const Eigen::VectorXd& lambda) {
  const int n = w.n();
  if (lambda.size() != n) throw std::invalid_argument("contraction_lmi_matrix: lambda size");
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n + 2, n + 2);
  M(0, 0) = 2.0 - p;
  M(1, 1) = p;
  for (int i = 0; i < n; ++i) {
    M(0, 2 + i) = -w.a[i];
    M(2 + i, 0) = -w.a[i];
    M(1, 2 + i) = -lambda[i] * w.w1[i];
    M(2 + i, 1) = -lambda[i] * w.w1[i];
    M(2 + i, 2 + i) = lambda[i];
  }
  return M;
}

CertificationReport certify(const RnnWeights& w, double psd_tol) {
  const int n = w.n();
  if (n <= 1) throw std::invalid_argument("certify: requires n > 1");

  const double lambda = 1.0 / (n + 1);
  const double p = 1.0;
  CertificationReport rep;

  const Eigen::ArrayXd margin = w.a.array().abs() + lambda * w.w1.array().abs();
  rep.theorem3_value = margin.maxCoeff();
  rep.theorem3_ok = rep.theorem3_value < lambda;
  for (int i = 0; i < n; ++i) {
    if (margin[i] > lambda) rep.violating_neurons.push_back(i);
  }

  // Gersgorin disc conditions with equal lambda_i.
  const bool cond1 = (2.0 - p) > w.a.array().abs().sum();
  const bool cond2 = p > lambda * w.w1.array().abs().sum();
  const bool cond3 = (margin < lambda).all();
  rep.gersgorin_ok = cond1 && cond2 && cond3;

  const Eigen::MatrixXd M =
      contraction_lmi_matrix(w, p, Eigen::VectorXd::Constant(n, lambda));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  rep.min_eigenvalue_of_m = es.eigenvalues().minCoeff();
  rep.m_psd_ok = rep.min_eigenvalue_of_m >= -psd_tol;
  return rep;
}

double contraction_ratio_bound(const RnnWeights& w) {
  const int n = w.n();
  const double lambda = 1.0 / (n + 1);
  return (n + 1) * (w.a.array().abs() + lambda * w.w1.array().abs()).maxCoeff();
}

std::vector<double> critical_values(const RnnWeights& w, double dedup_tol) {
  std::vector<double> s{0.0, 1.0};
  for (int i = 0; i < w.n(); ++i) {
    if (w.w1[i] == 0.0) continue;
    const double x = -w.b[i] / w.w1[i];
    if (x >= 0.0 && x <= 1.0) s.push_back(x);
  }
  std::sort(s.begin(), s.end());
  std::vector<double> out;
  for (double x : s) {
    if (out.empty() || x - out.back() > dedup_tol) out.push_back(x);
  }
  return out;
}

const char* to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::stable: return "stable";
    case StabilityClass::stable_oscillatory: return "stable-oscillatory";
    case StabilityClass::unstable: return "unstable";
    case StabilityClass::marginal: return "marginal";
  }
  return "unknown";
}

namespace {

StabilityClass classify_slope(double q) {
  const double aq = std::abs(q);
  if (std::abs(aq - 1.0) < 1e-12) return StabilityClass::marginal;
  if (aq > 1.0) return StabilityClass::unstable;
  return q >= 0.0 ? StabilityClass::stable : StabilityClass::stable_oscillatory;
}

}  // namespace

EquilibriumReport find_equilibria(const RnnWeights& w, double root_tol) {
  EquilibriumReport rep;
  rep.critical_values = critical_values(w);

  const auto& s = rep.critical_values;
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    const double lo = s[k];
    const double hi = s[k + 1];
    const double mid = 0.5 * (lo + hi);

    // The zero-input map is affine on (lo, hi): phi(x) = q x + c with the
    // active set frozen at the midpoint.
    double q = 0.0;
    double c = 0.0;
    for (int i = 0; i < w.n(); ++i) {
      if (w.w1[i] * mid + w.b[i] > 0.0) {
        q += w.a[i] * w.w1[i];
        c += w.a[i] * w.b[i];
      }
    }

    if (q == 1.0) {
      if (std::abs(c) < 1e-12) {
        rep.has_marginal_segment = true;
        rep.marginal_segments.emplace_back(lo, hi);
      }
      continue;
    }
    const double root = c / (1.0 - q);
    if (root < lo - root_tol || root > hi + root_tol) continue;
    const double x_eq = std::clamp(root, 0.0, 1.0);
    if (!rep.equilibria.empty() && std::abs(x_eq - rep.equilibria.back().x) <= root_tol) {
      continue;  // same fixed point seen from the neighbouring segment
    }
    rep.equilibria.push_back({x_eq, q, classify_slope(q)});
  }
  return rep;
}

}  // namespace surgeid
