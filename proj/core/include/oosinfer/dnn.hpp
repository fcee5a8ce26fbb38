#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "oosinfer/learners.hpp"
#include "oosinfer/losses.hpp"

namespace oosinfer {

/// ReLU feed-forward architecture with explicit capacity bounds: every
/// parameter lives in [-B, B] and every prediction is clamped to [-F, F].
/// tau is the threshold of the clipped-L1 penalty.
struct DnnArchitecture {
  int depth = 1;              // hidden layers
  std::vector<int> widths;    // w_0 .. w_{depth+1}; w_0 = input dim, last = 1
  double weight_bound = 10.0;   // B
  double output_bound = 10.0;   // F
  double clip_threshold = 0.1;  // tau

  /// Uniform-width multilayer perceptron. depth = 0 gives a pure affine
  /// model.
  static DnnArchitecture mlp(int input_dim, int depth, int width, double weight_bound,
                             double output_bound, double clip_threshold);

  void validate() const;
  int param_count() const;
  int input_dim() const { return widths.front(); }

  /// True for indices of bias entries in the flattened parameter vector;
  /// biases are exempt from the clipped-norm penalty.
  std::vector<bool> bias_mask() const;
};

struct DnnOptions {
  double learning_rate = 0.01;
  int epochs = 200;
  int batch = 32;
  std::uint64_t seed = 0;
};

/// Forward pass with the output clamp applied.
double dnn_predict(const DnnArchitecture& arch, const Eigen::VectorXd& theta,
                   const Eigen::Ref<const Eigen::VectorXd>& x);

/// Gradient of loss(y, clamp(m(theta,x))) in theta (data term only, no
/// penalty). Exposed for finite-difference checking.
Eigen::VectorXd dnn_loss_gradient(const DnnArchitecture& arch, const Eigen::VectorXd& theta,
                                  const Eigen::Ref<const Eigen::VectorXd>& x, double y,
                                  const LossSpec& loss);

/// Gradient of the prediction map itself, d m(theta,x) / d theta; the
/// score-weight vector of the zero-mean diagnostic for network learners.
Eigen::VectorXd dnn_model_gradient(const DnnArchitecture& arch, const Eigen::VectorXd& theta,
                                   const Eigen::Ref<const Eigen::VectorXd>& x);

/// Penalized empirical risk on the training rows:
/// (1/R) sum loss(y_t, m(theta, x_t)) + lambda * clipped_norm(weights).
double dnn_objective(const DnnArchitecture& arch, const Eigen::VectorXd& theta,
                     const Eigen::Ref<const Eigen::MatrixXd>& X,
                     const Eigen::Ref<const Eigen::VectorXd>& y, const LossSpec& loss,
                     double lambda);

/// Mini-batch subgradient descent on the clipped-L1-penalized risk with a
/// box projection onto |theta_j| <= B after every step. Deterministic
/// given the seed.
FittedModel fit_dnn(const DesignMatrix& design, const SplitPlan& split,
                    const DnnArchitecture& arch, const LossSpec& loss, const DnnOptions& opt,
                    double lambda);

}  // namespace oosinfer
