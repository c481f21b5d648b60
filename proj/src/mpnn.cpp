#include "neural/mpnn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "neural/error.hpp"
#include "neural/rng.hpp"

namespace neural {

MpnnModel MpnnModel::zeros(const MpnnShape& shape) {
  if (shape.layers == 0 || shape.hidden == 0 || shape.input_dim == 0) {
    fail(ErrorCode::InvalidArgument, "MPNN needs L, H, D >= 1");
  }
  MpnnModel m;
  m.layers = shape.layers;
  m.hidden = shape.hidden;
  m.input_dim = shape.input_dim;
  const auto h = static_cast<Eigen::Index>(shape.hidden);
  for (std::size_t l = 0; l < shape.layers; ++l) {
    m.w_msg.push_back(Matrix::Zero(h, h));
    m.w_upd.push_back(Matrix::Zero(h, 2 * h));
    m.b_upd.push_back(Vector::Zero(h));
  }
  m.w_in = Matrix::Zero(h, static_cast<Eigen::Index>(shape.input_dim));
  m.w_out = Vector::Zero(h);
  m.b_out = 0.0;
  return m;
}

namespace {

template <class Model, class Span>
std::vector<Span> collect(Model& m) {
  std::vector<Span> out;
  for (auto& w : m.w_msg) out.emplace_back(w.data(), static_cast<std::size_t>(w.size()));
  for (auto& w : m.w_upd) out.emplace_back(w.data(), static_cast<std::size_t>(w.size()));
  for (auto& b : m.b_upd) out.emplace_back(b.data(), static_cast<std::size_t>(b.size()));
  out.emplace_back(m.w_in.data(), static_cast<std::size_t>(m.w_in.size()));
  out.emplace_back(m.w_out.data(), static_cast<std::size_t>(m.w_out.size()));
  out.emplace_back(&m.b_out, 1);
  return out;
}

}  // namespace

std::vector<std::span<double>> MpnnModel::tensors() {
  return collect<MpnnModel, std::span<double>>(*this);
}

std::vector<std::span<const double>> MpnnModel::tensors() const {
  return collect<const MpnnModel, std::span<const double>>(*this);
}

std::size_t MpnnModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& t : tensors()) n += t.size();
  return n;
}

bool operator==(const MpnnModel& a, const MpnnModel& b) {
  if (a.layers != b.layers || a.hidden != b.hidden || a.input_dim != b.input_dim) {
    return false;
  }
  const auto ta = a.tensors();
  const auto tb = b.tensors();
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (!std::equal(ta[i].begin(), ta[i].end(), tb[i].begin(), tb[i].end())) return false;
  }
  return true;
}

namespace {

void glorot(SplitMix64& rng, Matrix& w) {
  const double a = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform(-a, a);
}

}  // namespace

MpnnModel init_model(const MpnnShape& shape, std::uint64_t seed) {
  auto m = MpnnModel::zeros(shape);
  SplitMix64 rng(seed);
  for (auto& w : m.w_msg) glorot(rng, w);
  for (auto& w : m.w_upd) glorot(rng, w);
  glorot(rng, m.w_in);
  // w_out is a 1 x H readout row: fan_in H, fan_out 1.
  const double a = std::sqrt(6.0 / static_cast<double>(shape.hidden + 1));
  for (Eigen::Index i = 0; i < m.w_out.size(); ++i) m.w_out[i] = rng.uniform(-a, a);
  return m;
}

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double clamp_probability(double p) {
  return std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
}

bool canonical_less(const UnifiedGraph& g, std::uint32_t a, std::uint32_t b) {
  const auto& na = g.nodes[a];
  const auto& nb = g.nodes[b];
  if (na.modality != nb.modality) return na.modality < nb.modality;
  if (na.origin != nb.origin) return na.origin < nb.origin;
  return a < b;
}

}  // namespace

ForwardTrace forward_trace(const MpnnModel& model, const UnifiedGraph& graph) {
  const std::size_t n = graph.nodes.size();
  if (n == 0) fail(ErrorCode::EmptyGraph, "cannot classify an empty graph");
  if (graph.dim + 1 != model.input_dim) {
    fail(ErrorCode::DimensionMismatch, "graph dim " + std::to_string(graph.dim) +
                                           " + modality channel != model input dim " +
                                           std::to_string(model.input_dim));
  }
  ForwardTrace t;
  t.order.resize(n);
  std::iota(t.order.begin(), t.order.end(), 0u);
  std::sort(t.order.begin(), t.order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return canonical_less(graph, a, b); });
  std::vector<std::uint32_t> rank(n);
  for (std::uint32_t r = 0; r < n; ++r) rank[t.order[r]] = r;

  t.neighbors.assign(n, {});
  for (const auto& e : graph.edges) {
    if (e.a >= n || e.b >= n) fail(ErrorCode::EdgeOutOfRange, "edge endpoint beyond node count");
    t.neighbors[rank[e.a]].push_back(rank[e.b]);
    t.neighbors[rank[e.b]].push_back(rank[e.a]);
  }
  for (auto& list : t.neighbors) std::sort(list.begin(), list.end());

  const auto rows = static_cast<Eigen::Index>(n);
  const auto h = static_cast<Eigen::Index>(model.hidden);
  t.inputs.resize(rows, static_cast<Eigen::Index>(model.input_dim));
  for (std::size_t r = 0; r < n; ++r) {
    const auto& node = graph.nodes[t.order[r]];
    if (node.feature.size() != graph.dim) {
      fail(ErrorCode::DimensionMismatch, "node feature length differs from graph dim");
    }
    for (std::size_t k = 0; k < graph.dim; ++k) {
      t.inputs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = node.feature[k];
    }
    t.inputs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(graph.dim)) =
        node.modality == Modality::Visual ? kVisualTag : kTextTag;
  }

  t.input_pre = t.inputs * model.w_in.transpose();
  t.hidden.push_back(t.input_pre.cwiseMax(0.0));
  for (std::size_t l = 0; l < model.layers; ++l) {
    const Matrix& cur = t.hidden.back();
    Matrix mean = Matrix::Zero(rows, h);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& nb = t.neighbors[i];
      if (nb.empty()) continue;
      auto row = mean.row(static_cast<Eigen::Index>(i));
      for (auto j : nb) row += cur.row(j);
      row /= static_cast<double>(nb.size());
    }
    Matrix cat(rows, 2 * h);
    cat.leftCols(h) = cur;
    cat.rightCols(h) = mean * model.w_msg[l].transpose();
    Matrix pre = cat * model.w_upd[l].transpose();
    pre.rowwise() += model.b_upd[l].transpose();
    t.hidden.push_back(pre.cwiseMax(0.0));
    t.neighbor_mean.push_back(std::move(mean));
    t.update_in.push_back(std::move(cat));
    t.update_pre.push_back(std::move(pre));
  }

  t.readout = Vector::Zero(h);
  for (Eigen::Index r = 0; r < rows; ++r) t.readout += t.hidden.back().row(r).transpose();
  t.readout /= static_cast<double>(n);
  t.logit = model.w_out.dot(t.readout) + model.b_out;
  t.raw_probability = sigmoid(t.logit);
  t.probability = clamp_probability(t.raw_probability);
  return t;
}

double forward(const MpnnModel& model, const UnifiedGraph& graph) {
  return forward_trace(model, graph).probability;
}

double loss(double probability, int label) {
  const double p = clamp_probability(probability);
  return label == 1 ? -std::log(p) : -std::log(1.0 - p);
}

LossGradient grad(const MpnnModel& model, const UnifiedGraph& graph, int label) {
  if (label != 0 && label != 1) fail(ErrorCode::InvalidArgument, "label must be 0 or 1");
  const auto t = forward_trace(model, graph);
  LossGradient out;
  out.probability = t.probability;
  out.loss = loss(t.probability, label);
  out.gradient = MpnnModel::zeros(model.shape());
  auto& g = out.gradient;

  // Inside the clamp, d(loss)/d(logit) = sigma(z) - y; outside it is flat.
  const bool clamped = t.raw_probability < kProbabilityClamp ||
                       t.raw_probability > 1.0 - kProbabilityClamp;
  const double dz = clamped ? 0.0 : t.raw_probability - static_cast<double>(label);

  const std::size_t n = t.order.size();
  const auto rows = static_cast<Eigen::Index>(n);
  const auto h = static_cast<Eigen::Index>(model.hidden);

  g.b_out = dz;
  g.w_out = dz * t.readout;
  Matrix d_hidden(rows, h);
  d_hidden.rowwise() = (dz / static_cast<double>(n)) * model.w_out.transpose();

  for (std::size_t l = model.layers; l-- > 0;) {
    Matrix d_pre = d_hidden.cwiseProduct(
        (t.update_pre[l].array() > 0.0).cast<double>().matrix());
    g.w_upd[l] = d_pre.transpose() * t.update_in[l];
    g.b_upd[l] = d_pre.colwise().sum().transpose();
    Matrix d_cat = d_pre * model.w_upd[l];
    Matrix d_msg = d_cat.rightCols(h);
    g.w_msg[l] = d_msg.transpose() * t.neighbor_mean[l];
    Matrix d_mean = d_msg * model.w_msg[l];

    d_hidden = d_cat.leftCols(h);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& nb = t.neighbors[i];
      if (nb.empty()) continue;
      const auto share = d_mean.row(static_cast<Eigen::Index>(i)) / static_cast<double>(nb.size());
      for (auto j : nb) d_hidden.row(j) += share;
    }
  }
  Matrix d_in_pre = d_hidden.cwiseProduct((t.input_pre.array() > 0.0).cast<double>().matrix());
  g.w_in = d_in_pre.transpose() * t.inputs;
  return out;
}

MpnnModel train(MpnnModel model, std::span<const Example> dataset, const TrainConfig& config,
                const EpochCallback& on_epoch) {
  if (dataset.empty()) fail(ErrorCode::EmptyDataset, "training set is empty");
  if (config.epochs == 0) fail(ErrorCode::InvalidArgument, "epochs must be >= 1");
  if (!(config.learning_rate >= 0.0) || !std::isfinite(config.learning_rate)) {
    fail(ErrorCode::InvalidArgument, "learning rate must be finite and non-negative");
  }
  for (const auto& ex : dataset) {
    if (ex.label != 0 && ex.label != 1) fail(ErrorCode::InvalidArgument, "labels must be 0 or 1");
  }

  std::vector<std::size_t> order(dataset.size());
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    SplitMix64 rng(derive_seed(config.seed, epoch));
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.below(i)]);
    }
    double total = 0.0;
    for (auto idx : order) {
      const auto step = grad(model, dataset[idx].graph, dataset[idx].label);
      total += step.loss;
      auto params = model.tensors();
      const auto grads = step.gradient.tensors();
      for (std::size_t k = 0; k < params.size(); ++k) {
        for (std::size_t e = 0; e < params[k].size(); ++e) {
          params[k][e] -= config.learning_rate * grads[k][e];
        }
      }
    }
    if (on_epoch) on_epoch(epoch, total / static_cast<double>(dataset.size()), model);
  }
  return model;
}

std::vector<double> predict(const MpnnModel& model, std::span<const Example> dataset) {
  std::vector<double> out;
  out.reserve(dataset.size());
  for (const auto& ex : dataset) out.push_back(forward(model, ex.graph));
  return out;
}

Bytes save_model(const MpnnModel& model) {
  ByteWriter out;
  out.put_bytes("NRLM");
  out.put_u16(kNrlmVersion);
  out.put_u32(static_cast<std::uint32_t>(model.layers));
  out.put_u32(static_cast<std::uint32_t>(model.hidden));
  out.put_u32(static_cast<std::uint32_t>(model.input_dim));
  for (const auto& t : model.tensors()) {
    for (double x : t) out.put_f64(x);
  }
  return std::move(out).take();
}

MpnnModel load_model(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  if (in.remaining() < 4 || in.take(4, "magic") != "NRLM") {
    fail(ErrorCode::BadMagic, "expected NRLM magic");
  }
  const auto version = in.u16("version");
  if (version != kNrlmVersion) {
    fail(ErrorCode::UnsupportedVersion, "NRLM version " + std::to_string(version));
  }
  MpnnShape shape;
  shape.layers = in.u32("layers");
  shape.hidden = in.u32("hidden");
  shape.input_dim = in.u32("input dim");
  const unsigned __int128 h = shape.hidden;
  const unsigned __int128 expected =
      8 * (shape.layers * (3 * h * h + h) + h * shape.input_dim + h + 1);
  if (expected > in.remaining()) {
    fail(ErrorCode::Truncated, "checkpoint shorter than its declared shape");
  }
  auto model = MpnnModel::zeros(shape);
  for (auto& t : model.tensors()) {
    for (double& x : t) {
      x = in.f64("weight");
      if (!std::isfinite(x)) fail(ErrorCode::NonFiniteValue, "checkpoint holds a non-finite weight");
    }
  }
  in.expect_end();
  return model;
}

}  // namespace neural
