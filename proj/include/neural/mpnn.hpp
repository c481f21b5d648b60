#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "neural/bytes.hpp"
#include "neural/graphs.hpp"

namespace neural {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

inline constexpr std::uint16_t kNrlmVersion = 1;
inline constexpr double kProbabilityClamp = 1e-7;

/// Input channel appended to every node feature: +1 visual, -1 text.
inline constexpr double kVisualTag = 1.0;
inline constexpr double kTextTag = -1.0;

struct MpnnShape {
  std::size_t layers = 3;
  std::size_t hidden = 64;
  std::size_t input_dim = 0;  // graph feature dim + 1 modality channel
};

/// Weights of the message passing classifier. Tensor declaration order
/// (also the checkpoint order): w_msg[0..L), w_upd[0..L), b_upd[0..L), w_in,
/// w_out, b_out. Matrices are row-major.
struct MpnnModel {
  std::size_t layers = 0;
  std::size_t hidden = 0;
  std::size_t input_dim = 0;
  std::vector<Matrix> w_msg;  // H x H
  std::vector<Matrix> w_upd;  // H x 2H, acting on [h || m]
  std::vector<Vector> b_upd;  // H
  Matrix w_in;                // H x D
  Vector w_out;               // H
  double b_out = 0.0;

  static MpnnModel zeros(const MpnnShape& shape);

  MpnnShape shape() const { return {layers, hidden, input_dim}; }
  std::vector<std::span<double>> tensors();
  std::vector<std::span<const double>> tensors() const;
  std::size_t parameter_count() const;

  friend bool operator==(const MpnnModel& a, const MpnnModel& b);
};

/// Gradients share the model layout.
using MpnnGradient = MpnnModel;

/// Glorot-uniform matrices, a = sqrt(6 / (fan_in + fan_out)), drawn from one
/// SplitMix64(seed) stream in declaration order; biases start at zero.
MpnnModel init_model(const MpnnShape& shape, std::uint64_t seed);

/// Intermediate values of one forward pass, all in canonical node order
/// (nodes sorted by modality, then origin, then position).
struct ForwardTrace {
  std::vector<std::uint32_t> order;                  // canonical rank -> node id
  std::vector<std::vector<std::uint32_t>> neighbors;  // by canonical rank, ascending
  Matrix inputs;                                      // n x D
  Matrix input_pre;                                   // n x H, before ReLU
  std::vector<Matrix> hidden;                         // L + 1 matrices n x H
  std::vector<Matrix> neighbor_mean;                  // L matrices n x H
  std::vector<Matrix> update_in;                      // L matrices n x 2H
  std::vector<Matrix> update_pre;                     // L matrices n x H
  Vector readout;                                     // H
  double logit = 0.0;
  double raw_probability = 0.5;
  double probability = 0.5;  // clamped
};

ForwardTrace forward_trace(const MpnnModel& model, const UnifiedGraph& graph);
double forward(const MpnnModel& model, const UnifiedGraph& graph);

/// Binary cross-entropy with p clamped to [1e-7, 1 - 1e-7].
double loss(double probability, int label);

struct LossGradient {
  double loss = 0.0;
  double probability = 0.0;
  MpnnGradient gradient;
};

LossGradient grad(const MpnnModel& model, const UnifiedGraph& graph, int label);

struct TrainConfig {
  std::size_t epochs = 15;
  double learning_rate = 0.03;
  std::uint64_t seed = 0;
};

struct Example {
  UnifiedGraph graph;
  int label = 0;
};

/// Called after each epoch with its index and the mean per-example loss
/// observed during that epoch.
using EpochCallback = std::function<void(std::size_t, double, const MpnnModel&)>;

/// Plain per-example SGD. Epoch e visits examples in a Fisher-Yates
/// permutation drawn from SplitMix64(derive_seed(seed, e)).
MpnnModel train(MpnnModel model, std::span<const Example> dataset, const TrainConfig& config,
                const EpochCallback& on_epoch = {});

std::vector<double> predict(const MpnnModel& model, std::span<const Example> dataset);

/// NRLM: "NRLM" | u16 version | u32 L | u32 H | u32 D | float64 tensors.
Bytes save_model(const MpnnModel& model);
MpnnModel load_model(std::span<const std::uint8_t> bytes);

}  // namespace neural
