#include "shapaudit/models/linear.hpp"

#include <cmath>

#include "shapaudit/errors.hpp"

namespace shapaudit {
namespace {

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

}  // namespace

LinearFit fit_ols(const Matrix& X, const Vector& y) {
  const Index n = X.rows();
  Matrix aug(n, X.cols() + 1);
  aug.leftCols(X.cols()) = X;
  aug.col(X.cols()).setOnes();
  Vector sol = aug.completeOrthogonalDecomposition().solve(y);
  LinearFit fit;
  fit.coef = sol.head(X.cols());
  fit.intercept = sol(X.cols());
  return fit;
}

LinearFit fit_ridge(const Matrix& X, const Vector& y, double lambda) {
  if (lambda < 0.0) throw ConfigError("ridge lambda must be >= 0");
  const Index d = X.cols();
  Matrix aug(X.rows(), d + 1);
  aug.leftCols(d) = X;
  aug.col(d).setOnes();
  Matrix normal = aug.transpose() * aug;
  for (Index j = 0; j < d; ++j) normal(j, j) += lambda;  // intercept unpenalized
  Vector rhs = aug.transpose() * y;
  Vector sol = normal.ldlt().solve(rhs);
  LinearFit fit;
  fit.coef = sol.head(d);
  fit.intercept = sol(d);
  return fit;
}

double elastic_net_objective(const Matrix& X, const Vector& y,
                             const LinearFit& fit, double lambda,
                             double l1_ratio) {
  const double n = static_cast<double>(X.rows());
  Vector r = y - X * fit.coef - Vector::Constant(X.rows(), fit.intercept);
  double obj = r.squaredNorm() / (2.0 * n);
  obj += lambda * l1_ratio * fit.coef.lpNorm<1>();
  obj += 0.5 * lambda * (1.0 - l1_ratio) * fit.coef.squaredNorm();
  return obj;
}

double elastic_net_sweep(const Matrix& X, const Vector& y, LinearFit& fit,
                         double lambda, double l1_ratio) {
  const Index n = X.rows();
  const Index d = X.cols();
  const double nn = static_cast<double>(n);
  const double l1 = lambda * l1_ratio;
  const double l2 = lambda * (1.0 - l1_ratio);

  Vector r = y - X * fit.coef - Vector::Constant(n, fit.intercept);

  // Intercept: unpenalized mean of the residual.
  const double db = r.mean();
  fit.intercept += db;
  r.array() -= db;

  double max_change = 0.0;
  for (Index j = 0; j < d; ++j) {
    const double old = fit.coef(j);
    const double col_sq = X.col(j).squaredNorm() / nn;
    if (col_sq == 0.0) continue;
    const double rho = X.col(j).dot(r) / nn + col_sq * old;
    const double updated = soft_threshold(rho, l1) / (col_sq + l2);
    if (updated != old) {
      r += X.col(j) * (old - updated);
      fit.coef(j) = updated;
      max_change = std::max(max_change, std::abs(updated - old));
    }
  }
  return max_change;
}

CoordinateDescentResult fit_elastic_net(const Matrix& X, const Vector& y,
                                        double lambda, double l1_ratio,
                                        double tol, int max_sweeps) {
  if (lambda < 0.0) throw ConfigError("elastic net lambda must be >= 0");
  if (l1_ratio < 0.0 || l1_ratio > 1.0)
    throw ConfigError("l1_ratio must be in [0, 1]");
  CoordinateDescentResult res;
  res.fit.coef = Vector::Zero(X.cols());
  res.fit.intercept = 0.0;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double change = elastic_net_sweep(X, y, res.fit, lambda, l1_ratio);
    res.sweeps = sweep + 1;
    if (change < tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

Vector predict_linear(const LinearFit& fit, const Matrix& X) {
  return (X * fit.coef).array() + fit.intercept;
}

}  // namespace shapaudit
