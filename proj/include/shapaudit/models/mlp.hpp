#pragma once

#include <vector>

#include "shapaudit/types.hpp"

namespace shapaudit {

class Rng;

// Fully-connected ReLU network with a linear scalar output. Weights are
// stored input-major: W[l] maps layer l activations (rows of the matrix)
// to layer l+1.
struct MlpModel {
  std::vector<Matrix> W;
  std::vector<Vector> b;
  bool converged = false;
  int epochs_run = 0;
};

struct MlpParams {
  int hidden1 = 128;
  int hidden2 = 64;
  double learning_rate = 1e-3;
  int batch = 16;
  int epochs = 2000;
  double plateau_tol = 1e-9;  // relative loss improvement counted as progress
  int plateau_window = 100;   // epochs without progress before early stop
};

struct MlpGrads {
  std::vector<Matrix> dW;
  std::vector<Vector> db;
};

Vector mlp_forward(const MlpModel& m, const Matrix& X);

// Loss = 1/(2n) sum (pred - y)^2; returns loss and its parameter gradients.
double mlp_loss(const MlpModel& m, const Matrix& X, const Vector& y);
std::pair<double, MlpGrads> mlp_loss_grad(const MlpModel& m, const Matrix& X,
                                          const Vector& y);

// He fan-in initialization from rng, then minibatch adaptive-moment descent.
MlpModel fit_mlp(const Matrix& X, const Vector& y, const MlpParams& p,
                 Rng& rng);

}  // namespace shapaudit
