#include "ctshift/mlp.hpp"

#include "ctshift/rng.hpp"

#include <cmath>
#include <string>

namespace ctshift {

namespace {

// Softplus with the stable branch: log(1+exp(z)) = max(z,0) + log1p(exp(-|z|)).
inline double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }
inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

Matrix apply_activation(const Matrix& z, Activation act) {
  if (act == Activation::Relu) return z.cwiseMax(0.0);
  return z.unaryExpr([](double v) { return softplus(v); });
}

Matrix activation_derivative(const Matrix& z, Activation act) {
  if (act == Activation::Relu) {
    return z.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; });
  }
  return z.unaryExpr([](double v) { return sigmoid(v); });
}

struct LayerView {
  Eigen::Map<const Matrix> weight;
  Eigen::Map<const Vector> bias;
};

std::vector<LayerView> map_layers(const std::vector<long>& sizes, const Vector& theta) {
  std::vector<LayerView> layers;
  const double* p = theta.data();
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    long in = sizes[l], out = sizes[l + 1];
    layers.push_back({Eigen::Map<const Matrix>(p, out, in),
                      Eigen::Map<const Vector>(p + out * in, out)});
    p += (in + 1) * out;
  }
  return layers;
}

Matrix forward_fixed(const std::vector<long>& sizes, const Vector& theta, const Matrix& x,
                     Activation act) {
  auto layers = map_layers(sizes, theta);
  Matrix a = x;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    Matrix z = (layers[l].weight * a).colwise() + layers[l].bias;
    a = (l + 1 < layers.size()) ? apply_activation(z, act) : z;
  }
  return a;
}

}  // namespace

void MlpSpec::validate() const {
  require(layer_sizes.size() >= 2, "mlp: need at least input and output layers");
  for (long s : layer_sizes) require(s >= 1, "mlp: layer sizes must be >= 1");
  require(batch_size >= 1, "mlp: batch_size must be >= 1");
  require(dataset_size >= 1, "mlp: dataset_size must be >= 1");
}

long MlpSpec::param_dim() const {
  long total = 0;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    total += (layer_sizes[l] + 1) * layer_sizes[l + 1];
  }
  return total;
}

MlpTask::MlpTask(MlpSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  Rng rng(spec_.seed);

  long in = spec_.layer_sizes.front();
  RngStream input_stream = rng.stream(RngPurpose::DatasetInputs);
  inputs_.resize(in, spec_.dataset_size);
  for (long j = 0; j < spec_.dataset_size; ++j) {
    for (long i = 0; i < in; ++i) inputs_(i, j) = input_stream.normal();
  }

  // Teacher: same architecture, fan-in scaled weights, Softplus hidden units.
  RngStream teacher_stream = rng.stream(RngPurpose::TeacherInit);
  Vector teacher(spec_.param_dim());
  {
    long offset = 0;
    for (std::size_t l = 0; l + 1 < spec_.layer_sizes.size(); ++l) {
      long fan_in = spec_.layer_sizes[l], out = spec_.layer_sizes[l + 1];
      double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
      for (long i = 0; i < fan_in * out; ++i) teacher[offset + i] = scale * teacher_stream.normal();
      offset += fan_in * out;
      for (long i = 0; i < out; ++i) teacher[offset + i] = 0.0;
      offset += out;
    }
  }
  targets_ = forward_fixed(spec_.layer_sizes, teacher, inputs_, Activation::Softplus);
}

std::vector<long> MlpTask::batch_indices(long step) const {
  Rng rng(spec_.seed);
  RngStream stream = rng.stream(RngPurpose::BatchSampling, static_cast<std::uint64_t>(step));
  std::vector<long> idx(static_cast<std::size_t>(spec_.batch_size));
  for (auto& i : idx) {
    i = static_cast<long>(stream.next_u64() % static_cast<std::uint64_t>(spec_.dataset_size));
  }
  return idx;
}

Vector MlpTask::init_params(std::uint64_t param_seed) const {
  Rng rng(param_seed);
  RngStream stream = rng.stream(RngPurpose::ParamInit);
  Vector theta(spec_.param_dim());
  long offset = 0;
  for (std::size_t l = 0; l + 1 < spec_.layer_sizes.size(); ++l) {
    long fan_in = spec_.layer_sizes[l], out = spec_.layer_sizes[l + 1];
    double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (long i = 0; i < fan_in * out; ++i) theta[offset + i] = scale * stream.normal();
    offset += fan_in * out;
    for (long i = 0; i < out; ++i) theta[offset + i] = 0.0;
    offset += out;
  }
  return theta;
}

std::pair<double, Vector> MlpTask::loss_and_grad(const Vector& theta, long step) const {
  require(theta.size() == spec_.param_dim(), "mlp: parameter dimension mismatch");
  const auto& sizes = spec_.layer_sizes;
  auto layers = map_layers(sizes, theta);
  const std::size_t n_layers = layers.size();
  const double batch = static_cast<double>(spec_.batch_size);

  std::vector<long> idx = batch_indices(step);
  Matrix x(sizes.front(), spec_.batch_size);
  Matrix y(sizes.back(), spec_.batch_size);
  for (long j = 0; j < spec_.batch_size; ++j) {
    x.col(j) = inputs_.col(idx[static_cast<std::size_t>(j)]);
    y.col(j) = targets_.col(idx[static_cast<std::size_t>(j)]);
  }

  // Forward, keeping pre-activations and activations for backprop.
  std::vector<Matrix> zs(n_layers), as(n_layers + 1);
  as[0] = x;
  for (std::size_t l = 0; l < n_layers; ++l) {
    zs[l] = (layers[l].weight * as[l]).colwise() + layers[l].bias;
    if (!zs[l].allFinite()) {
      throw NumericError("mlp: non-finite activations at layer " + std::to_string(l + 1) +
                         " (step " + std::to_string(step) + ")");
    }
    as[l + 1] = (l + 1 < n_layers) ? apply_activation(zs[l], spec_.activation) : zs[l];
  }

  Matrix residual = as[n_layers] - y;
  double loss = residual.squaredNorm() / batch;

  Vector grad(theta.size());
  Matrix delta = 2.0 * residual / batch;  // dL/d(output pre-activation)
  long offset = theta.size();
  for (std::size_t l = n_layers; l-- > 0;) {
    long in = sizes[l], out = sizes[l + 1];
    offset -= (in + 1) * out;
    Eigen::Map<Matrix> grad_w(grad.data() + offset, out, in);
    Eigen::Map<Vector> grad_b(grad.data() + offset + out * in, out);
    grad_w = delta * as[l].transpose();
    grad_b = delta.rowwise().sum();
    if (l > 0) {
      delta = (layers[l].weight.transpose() * delta)
                  .cwiseProduct(activation_derivative(zs[l - 1], spec_.activation));
    }
  }
  return {loss, std::move(grad)};
}

double MlpTask::loss(const Vector& theta, long step) const {
  require(theta.size() == spec_.param_dim(), "mlp: parameter dimension mismatch");
  const auto& sizes = spec_.layer_sizes;
  std::vector<long> idx = batch_indices(step);
  Matrix x(sizes.front(), spec_.batch_size);
  Matrix y(sizes.back(), spec_.batch_size);
  for (long j = 0; j < spec_.batch_size; ++j) {
    x.col(j) = inputs_.col(idx[static_cast<std::size_t>(j)]);
    y.col(j) = targets_.col(idx[static_cast<std::size_t>(j)]);
  }
  Matrix pred = forward_fixed(sizes, theta, x, spec_.activation);
  return (pred - y).squaredNorm() / static_cast<double>(spec_.batch_size);
}

Vector MlpTask::grad(const Vector& theta, long step) const {
  return loss_and_grad(theta, step).second;
}

}  // namespace ctshift
