#include "shapaudit/models/svr.hpp"

#include <cmath>

#include "shapaudit/errors.hpp"

namespace shapaudit {
namespace {

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

double raw_kernel(const RowVector& a, const RowVector& b, double gamma,
                  int degree, double coef0) {
  if (degree <= 0) return std::exp(-gamma * (a - b).squaredNorm());
  return std::pow(gamma * a.dot(b) + coef0, degree);
}

}  // namespace

double kernel_value(const SvrModel& m, const RowVector& a, const RowVector& b) {
  return raw_kernel(a, b, m.gamma, m.degree, m.coef0);
}

SvrModel fit_svr(const Matrix& X, const Vector& y, const SvrParams& p) {
  if (p.C <= 0.0) throw ConfigError("svr C must be > 0");
  if (p.epsilon < 0.0) throw ConfigError("svr epsilon must be >= 0");
  const Index n = X.rows();
  SvrModel m;
  m.support = X;
  m.gamma = p.gamma > 0.0 ? p.gamma : 1.0 / static_cast<double>(X.cols());
  m.degree = p.degree;
  m.coef0 = p.coef0;
  m.beta = Vector::Zero(n);

  // Augmented kernel K~ = K + 1 (bias folded into the kernel).
  Matrix K(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      const double v =
          raw_kernel(X.row(i), X.row(j), m.gamma, m.degree, m.coef0) + 1.0;
      K(i, j) = v;
      K(j, i) = v;
    }
  }

  Vector q = Vector::Zero(n);  // q = K~ beta, maintained incrementally
  for (int pass = 0; pass < p.max_passes; ++pass) {
    double max_delta = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double kii = K(i, i);
      if (kii <= 0.0) continue;
      const double rest = q(i) - kii * m.beta(i);
      double target = soft_threshold(y(i) - rest, p.epsilon) / kii;
      target = std::min(p.C, std::max(-p.C, target));
      const double delta = target - m.beta(i);
      if (delta != 0.0) {
        m.beta(i) = target;
        q += K.col(i) * delta;
        max_delta = std::max(max_delta, std::abs(delta));
      }
    }
    m.passes = pass + 1;
    if (max_delta < p.tol) {
      m.converged = true;
      break;
    }
  }
  return m;
}

Vector predict_svr(const SvrModel& m, const Matrix& X) {
  const double bias = m.beta.sum();  // contribution of the +1 augmentation
  Vector out(X.rows());
  for (Index i = 0; i < X.rows(); ++i) {
    double v = bias;
    for (Index s = 0; s < m.support.rows(); ++s) {
      if (m.beta(s) == 0.0) continue;
      v += m.beta(s) *
           raw_kernel(X.row(i), m.support.row(s), m.gamma, m.degree, m.coef0);
    }
    out(i) = v;
  }
  return out;
}

}  // namespace shapaudit
