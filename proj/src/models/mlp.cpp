#include "shapaudit/models/mlp.hpp"

#include <cmath>
#include <numeric>

#include "shapaudit/errors.hpp"
#include "shapaudit/rng.hpp"

namespace shapaudit {
namespace {

// Forward pass keeping post-activation values for backprop.
void forward_cached(const MlpModel& m, const Matrix& X,
                    std::vector<Matrix>& acts) {
  acts.clear();
  acts.push_back(X);
  for (std::size_t l = 0; l < m.W.size(); ++l) {
    Matrix z = acts.back() * m.W[l];
    z.rowwise() += m.b[l].transpose();
    if (l + 1 < m.W.size()) z = z.cwiseMax(0.0);  // ReLU on hidden layers
    acts.push_back(std::move(z));
  }
}

}  // namespace

Vector mlp_forward(const MlpModel& m, const Matrix& X) {
  Matrix a = X;
  for (std::size_t l = 0; l < m.W.size(); ++l) {
    Matrix z = a * m.W[l];
    z.rowwise() += m.b[l].transpose();
    if (l + 1 < m.W.size()) z = z.cwiseMax(0.0);
    a = std::move(z);
  }
  return a.col(0);
}

double mlp_loss(const MlpModel& m, const Matrix& X, const Vector& y) {
  const Vector pred = mlp_forward(m, X);
  return (pred - y).squaredNorm() / (2.0 * static_cast<double>(X.rows()));
}

std::pair<double, MlpGrads> mlp_loss_grad(const MlpModel& m, const Matrix& X,
                                          const Vector& y) {
  const Index n = X.rows();
  std::vector<Matrix> acts;
  forward_cached(m, X, acts);
  const Vector pred = acts.back().col(0);
  const double loss =
      (pred - y).squaredNorm() / (2.0 * static_cast<double>(n));

  MlpGrads g;
  g.dW.resize(m.W.size());
  g.db.resize(m.b.size());

  // delta holds dLoss/dZ for the current layer, rows = samples.
  Matrix delta = (pred - y) / static_cast<double>(n);
  for (std::size_t l = m.W.size(); l-- > 0;) {
    if (l + 1 < m.W.size()) {
      // Pass through the ReLU: zero where the activation was clipped.
      delta = delta.array() * (acts[l + 1].array() > 0.0).cast<double>();
    }
    g.dW[l] = acts[l].transpose() * delta;
    g.db[l] = delta.colwise().sum();
    if (l > 0) delta = (delta * m.W[l].transpose()).eval();
  }
  return {loss, std::move(g)};
}

MlpModel fit_mlp(const Matrix& X, const Vector& y, const MlpParams& p,
                 Rng& rng) {
  if (p.hidden1 < 1 || p.hidden2 < 1)
    throw ConfigError("mlp hidden layer sizes must be >= 1");
  if (p.batch < 1) throw ConfigError("mlp batch size must be >= 1");
  const Index n = X.rows();
  const Index d = X.cols();

  MlpModel m;
  const std::vector<Index> dims = {d, p.hidden1, p.hidden2, 1};
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const double scale = std::sqrt(2.0 / static_cast<double>(dims[l]));
    Matrix w(dims[l], dims[l + 1]);
    for (Index i = 0; i < w.rows(); ++i)
      for (Index j = 0; j < w.cols(); ++j) w(i, j) = scale * rng.normal();
    m.W.push_back(std::move(w));
    m.b.push_back(Vector::Zero(dims[l + 1]));
  }
  // Start from the mean predictor so arbitrary target scales are reachable.
  m.b.back()(0) = y.mean();

  // Adam state.
  std::vector<Matrix> mW, vW;
  std::vector<Vector> mb, vb;
  for (std::size_t l = 0; l < m.W.size(); ++l) {
    mW.push_back(Matrix::Zero(m.W[l].rows(), m.W[l].cols()));
    vW.push_back(Matrix::Zero(m.W[l].rows(), m.W[l].cols()));
    mb.push_back(Vector::Zero(m.b[l].size()));
    vb.push_back(Vector::Zero(m.b[l].size()));
  }
  const double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;
  long step = 0;

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});

  double best_loss = mlp_loss(m, X, y);
  int stalled = 0;
  for (int epoch = 0; epoch < p.epochs; ++epoch) {
    rng.shuffle(order);
    for (Index start = 0; start < n; start += p.batch) {
      const Index size = std::min<Index>(p.batch, n - start);
      Matrix xb(size, d);
      Vector yb(size);
      for (Index i = 0; i < size; ++i) {
        xb.row(i) = X.row(order[static_cast<std::size_t>(start + i)]);
        yb(i) = y(order[static_cast<std::size_t>(start + i)]);
      }
      auto [loss, g] = mlp_loss_grad(m, xb, yb);
      (void)loss;
      ++step;
      const double corr1 = 1.0 - std::pow(beta1, static_cast<double>(step));
      const double corr2 = 1.0 - std::pow(beta2, static_cast<double>(step));
      for (std::size_t l = 0; l < m.W.size(); ++l) {
        mW[l] = beta1 * mW[l] + (1.0 - beta1) * g.dW[l];
        vW[l].array() =
            beta2 * vW[l].array() + (1.0 - beta2) * g.dW[l].array().square();
        m.W[l].array() -= p.learning_rate * (mW[l].array() / corr1) /
                          ((vW[l].array() / corr2).sqrt() + adam_eps);
        mb[l] = beta1 * mb[l] + (1.0 - beta1) * g.db[l];
        vb[l].array() =
            beta2 * vb[l].array() + (1.0 - beta2) * g.db[l].array().square();
        m.b[l].array() -= p.learning_rate * (mb[l].array() / corr1) /
                          ((vb[l].array() / corr2).sqrt() + adam_eps);
      }
    }
    m.epochs_run = epoch + 1;

    const double loss = mlp_loss(m, X, y);
    if (loss < best_loss * (1.0 - p.plateau_tol)) {
      best_loss = loss;
      stalled = 0;
    } else {
      if (++stalled >= p.plateau_window) {
        m.converged = true;
        break;
      }
    }
  }
  return m;
}

}  // namespace shapaudit
