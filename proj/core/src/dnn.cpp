#include "oosinfer/dnn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oosinfer/errors.hpp"
#include "oosinfer/rng.hpp"

namespace oosinfer {

DnnArchitecture DnnArchitecture::mlp(int input_dim, int depth, int width, double weight_bound,
                                     double output_bound, double clip_threshold) {
  DnnArchitecture a;
  a.depth = depth;
  a.widths.push_back(input_dim);
  for (int j = 0; j < depth; ++j) a.widths.push_back(width);
  a.widths.push_back(1);
  a.weight_bound = weight_bound;
  a.output_bound = output_bound;
  a.clip_threshold = clip_threshold;
  a.validate();
  return a;
}

void DnnArchitecture::validate() const {
  if (depth < 0) throw ConfigError("network depth must be >= 0");
  if (static_cast<int>(widths.size()) != depth + 2) {
    throw ConfigError("width vector must have depth+2 entries");
  }
  for (int w : widths) {
    if (w < 1) throw ConfigError("all layer widths must be >= 1");
  }
  if (widths.back() != 1) throw ConfigError("output width must be 1");
  if (!(weight_bound > 0.0) || !(output_bound > 0.0) || !(clip_threshold > 0.0)) {
    throw ConfigError("weight bound, output bound and clip threshold must be positive");
  }
}

int DnnArchitecture::param_count() const {
  int n = 0;
  for (std::size_t j = 1; j < widths.size(); ++j) {
    n += widths[j - 1] * widths[j] + widths[j];
  }
  return n;
}

std::vector<bool> DnnArchitecture::bias_mask() const {
  std::vector<bool> mask(param_count(), false);
  int off = 0;
  for (std::size_t j = 1; j < widths.size(); ++j) {
    off += widths[j - 1] * widths[j];
    for (int i = 0; i < widths[j]; ++i) mask[off + i] = true;
    off += widths[j];
  }
  return mask;
}

namespace {

// Views of one layer's weight matrix / bias vector inside the flat bundle.
struct LayerView {
  Eigen::Map<const Eigen::MatrixXd> W;
  Eigen::Map<const Eigen::VectorXd> b;
};

LayerView layer_view(const DnnArchitecture& arch, const Eigen::VectorXd& theta, int layer,
                     int offset) {
  const int rows = arch.widths[layer + 1];
  const int cols = arch.widths[layer];
  return {Eigen::Map<const Eigen::MatrixXd>(theta.data() + offset, rows, cols),
          Eigen::Map<const Eigen::VectorXd>(theta.data() + offset + rows * cols, rows)};
}

int layer_offset(const DnnArchitecture& arch, int layer) {
  int off = 0;
  for (int j = 0; j < layer; ++j) {
    off += arch.widths[j] * arch.widths[j + 1] + arch.widths[j + 1];
  }
  return off;
}

// Forward pass keeping pre-activations for backprop.
double forward(const DnnArchitecture& arch, const Eigen::VectorXd& theta,
               const Eigen::Ref<const Eigen::VectorXd>& x,
               std::vector<Eigen::VectorXd>* activations) {
  if (x.size() != arch.input_dim()) {
    throw std::domain_error("network input dimension mismatch");
  }
  Eigen::VectorXd a = x;
  if (activations) activations->push_back(a);
  const int n_layers = arch.depth + 1;
  for (int j = 0; j < n_layers; ++j) {
    const LayerView lv = layer_view(arch, theta, j, layer_offset(arch, j));
    Eigen::VectorXd z = lv.W * a + lv.b;
    if (j < arch.depth) {
      a = z.cwiseMax(0.0);
      if (activations) activations->push_back(a);
    } else {
      a = z;
    }
  }
  return a(0);
}

}  // namespace

double dnn_predict(const DnnArchitecture& arch, const Eigen::VectorXd& theta,
                   const Eigen::Ref<const Eigen::VectorXd>& x) {
  const double raw = forward(arch, theta, x, nullptr);
  return std::clamp(raw, -arch.output_bound, arch.output_bound);
}

namespace {

// Backward pass from d loss / d output; delta is d loss / d z_j.
Eigen::VectorXd backward(const DnnArchitecture& arch, const Eigen::VectorXd& theta,
                         const std::vector<Eigen::VectorXd>& acts, double dl_dm) {
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(theta.size());
  Eigen::VectorXd delta(1);
  delta(0) = dl_dm;
  for (int j = arch.depth; j >= 0; --j) {
    const int off = layer_offset(arch, j);
    const LayerView lv = layer_view(arch, theta, j, off);
    const Eigen::VectorXd& a_prev = acts[static_cast<std::size_t>(j)];
    const int rows = arch.widths[static_cast<std::size_t>(j) + 1];
    const int cols = arch.widths[static_cast<std::size_t>(j)];
    Eigen::Map<Eigen::MatrixXd>(grad.data() + off, rows, cols) = delta * a_prev.transpose();
    Eigen::Map<Eigen::VectorXd>(grad.data() + off + rows * cols, rows) = delta;
    if (j > 0) {
      Eigen::VectorXd back = lv.W.transpose() * delta;
      // ReLU derivative uses the stored activation (> 0 iff pre-activation > 0).
      for (Eigen::Index i = 0; i < back.size(); ++i) {
        if (acts[static_cast<std::size_t>(j)](i) <= 0.0) back(i) = 0.0;
      }
      delta = std::move(back);
    }
  }
  return grad;
}

}  // namespace

Eigen::VectorXd dnn_loss_gradient(const DnnArchitecture& arch, const Eigen::VectorXd& theta,
                                  const Eigen::Ref<const Eigen::VectorXd>& x, double y,
                                  const LossSpec& loss) {
  std::vector<Eigen::VectorXd> acts;
  acts.reserve(arch.depth + 1);
  const double raw = forward(arch, theta, x, &acts);
  const double m = std::clamp(raw, -arch.output_bound, arch.output_bound);

  double dl_dm;
  switch (loss.kind) {
    case LossKind::MSPE:
      dl_dm = m - y;
      break;
    case LossKind::CrossEntropy: {
      const double lam = 1.0 / (1.0 + std::exp(-m));
      dl_dm = lam - y;
      break;
    }
    default:
      throw ConfigError("network training supports mspe and cross-entropy losses only");
  }
  if (std::abs(raw) >= arch.output_bound) dl_dm = 0.0;  // clamp is flat outside

  return backward(arch, theta, acts, dl_dm);
}

Eigen::VectorXd dnn_model_gradient(const DnnArchitecture& arch, const Eigen::VectorXd& theta,
                                   const Eigen::Ref<const Eigen::VectorXd>& x) {
  std::vector<Eigen::VectorXd> acts;
  acts.reserve(arch.depth + 1);
  const double raw = forward(arch, theta, x, &acts);
  const double dl_dm = std::abs(raw) >= arch.output_bound ? 0.0 : 1.0;
  return backward(arch, theta, acts, dl_dm);
}

double dnn_objective(const DnnArchitecture& arch, const Eigen::VectorXd& theta,
                     const Eigen::Ref<const Eigen::MatrixXd>& X,
                     const Eigen::Ref<const Eigen::VectorXd>& y, const LossSpec& loss,
                     double lambda) {
  double risk = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    risk += loss_value(loss, y(i), dnn_predict(arch, theta, X.row(i).transpose()));
  }
  risk /= static_cast<double>(X.rows());
  if (lambda > 0.0) {
    const std::vector<bool> bias = arch.bias_mask();
    double pen = 0.0;
    for (Eigen::Index j = 0; j < theta.size(); ++j) {
      if (!bias[static_cast<std::size_t>(j)]) {
        pen += std::min(std::abs(theta(j)) / arch.clip_threshold, 1.0);
      }
    }
    risk += lambda * pen;
  }
  return risk;
}

FittedModel fit_dnn(const DesignMatrix& design, const SplitPlan& split,
                    const DnnArchitecture& arch, const LossSpec& loss, const DnnOptions& opt,
                    double lambda) {
  arch.validate();
  if (loss.kind != LossKind::MSPE && loss.kind != LossKind::CrossEntropy) {
    throw ConfigError("network training supports mspe and cross-entropy losses only");
  }
  if (lambda < 0.0) throw std::domain_error("penalty lambda must be non-negative");
  if (opt.batch < 1 || opt.epochs < 1 || !(opt.learning_rate > 0.0)) {
    throw ConfigError("bad training options (learning rate, epochs, batch)");
  }
  const Eigen::Index n = train_row_count(design, split);
  const auto X = design.X.topRows(n);
  const auto y = design.y.head(n);
  if (design.cols() != arch.input_dim()) {
    throw ConfigError("design has " + std::to_string(design.cols()) +
                      " columns, network expects " + std::to_string(arch.input_dim()));
  }
  if (loss.kind == LossKind::CrossEntropy) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (y(i) != 0.0 && y(i) != 1.0) {
        throw std::domain_error("cross-entropy target must be binary");
      }
    }
  }

  Rng rng(opt.seed);
  const int np = arch.param_count();
  const std::vector<bool> bias = arch.bias_mask();

  Eigen::VectorXd theta(np);
  {
    // Fan-in scaled uniform init, biases at zero, projected into the box.
    int off = 0;
    for (int j = 0; j <= arch.depth; ++j) {
      const int rows = arch.widths[j + 1];
      const int cols = arch.widths[j];
      const double r = std::sqrt(6.0 / static_cast<double>(rows + cols));
      for (int k = 0; k < rows * cols; ++k) theta(off + k) = rng.uniform(-r, r);
      off += rows * cols;
      for (int k = 0; k < rows; ++k) theta(off + k) = 0.0;
      off += rows;
    }
    theta = theta.cwiseMax(-arch.weight_bound).cwiseMin(arch.weight_bound);
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = static_cast<int>(i);

  FittedModel model;
  model.kind = LearnerKind::Dnn;
  model.lambda_used = lambda;
  model.arch = std::make_shared<DnnArchitecture>(arch);

  Eigen::VectorXd grad(np);
  for (int epoch = 0; epoch < opt.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(opt.batch)) {
      const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(opt.batch));
      grad.setZero();
      for (std::size_t i = start; i < stop; ++i) {
        const int row = order[i];
        grad += dnn_loss_gradient(arch, theta, X.row(row).transpose(), y(row), loss);
      }
      grad /= static_cast<double>(stop - start);
      if (!grad.allFinite()) {
        throw TrainingDivergenceError("non-finite gradient at epoch " + std::to_string(epoch) +
                                      " (learning rate " + std::to_string(opt.learning_rate) + ")");
      }
      if (lambda > 0.0) {
        for (int jj = 0; jj < np; ++jj) {
          if (bias[static_cast<std::size_t>(jj)]) continue;
          const double a = std::abs(theta(jj));
          if (a > 0.0 && a < arch.clip_threshold) {
            grad(jj) += lambda / arch.clip_threshold * (theta(jj) > 0.0 ? 1.0 : -1.0);
          }
          // |theta| >= tau sits on the flat part of the clipped norm.
        }
      }
      theta -= opt.learning_rate * grad;
      theta = theta.cwiseMax(-arch.weight_bound).cwiseMin(arch.weight_bound);
    }
    const double obj = dnn_objective(arch, theta, X, y, loss, lambda);
    if (!std::isfinite(obj)) {
      throw TrainingDivergenceError("non-finite objective at epoch " + std::to_string(epoch) +
                                    " (learning rate " + std::to_string(opt.learning_rate) + ")");
    }
    model.diagnostics.objective_trace.push_back(obj);
  }

  model.theta = theta;
  model.diagnostics.iterations = opt.epochs;
  model.diagnostics.final_objective = model.diagnostics.objective_trace.back();
  // Stochastic steps rarely give a monotone path; the flag reports whether
  // they did here, matching the contract that converged implies a
  // non-increasing recorded objective.
  bool monotone = true;
  const auto& trace = model.diagnostics.objective_trace;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i] > trace[i - 1] + 1e-12) monotone = false;
  }
  model.diagnostics.converged = monotone;
  return model;
}

}  // namespace oosinfer
