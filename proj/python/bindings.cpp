#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "neural/attention.hpp"
#include "neural/error.hpp"
#include "neural/fixtures.hpp"
#include "neural/formats.hpp"
#include "neural/metrics.hpp"
#include "neural/mpnn.hpp"
#include "neural/pipeline.hpp"
#include "neural/serialization.hpp"

namespace py = pybind11;
using namespace neural;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Bytes to_bytes(const py::bytes& b) {
  const std::string s = b;
  return Bytes(s.begin(), s.end());
}

py::bytes from_bytes(const Bytes& b) {
  return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}

GrayImage to_image(const Array& a) {
  if (a.ndim() != 2) throw py::value_error("image must be a 2-D array");
  return GrayImage(a.shape(0), a.shape(1), std::vector<double>(a.data(), a.data() + a.size()));
}

Array from_image(const GrayImage& img) {
  Array out({img.height(), img.width()});
  std::copy(img.pixels().begin(), img.pixels().end(), out.mutable_data());
  return out;
}

AttentionMatrix to_attention(const Array& a) {
  if (a.ndim() != 2) throw py::value_error("attention must be a 2-D array");
  return AttentionMatrix(a.shape(0), a.shape(1), std::vector<double>(a.data(), a.data() + a.size()));
}

Array from_attention(const AttentionMatrix& m) {
  Array out({m.num_tokens(), m.num_patches()});
  std::copy(m.weights().begin(), m.weights().end(), out.mutable_data());
  return out;
}

Array from_vector(const std::vector<double>& v) {
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

SalienceVector to_salience(const Array& a) {
  if (a.ndim() != 1) throw py::value_error("salience must be a 1-D array");
  return SalienceVector{std::vector<double>(a.data(), a.data() + a.size())};
}

std::vector<Edge> to_edges(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs) {
  std::vector<Edge> out;
  for (auto [a, b] : pairs) out.push_back(Edge::make(a, b));
  return out;
}

std::vector<std::string> split_tokens(const std::string& s) { return tokenize(s); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Attention-guided patch pruning, graph fusion and MPNN classification.";

  py::exception<Error>(m, "NeuralError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object type = py::module_::import("neural_prune._core").attr("NeuralError");
      py::object err = type(std::string(e.what()));
      err.attr("code") = std::string(to_string(e.code()));
      err.attr("detail") = e.detail();
      PyErr_SetObject(type.ptr(), err.ptr());
    }
  });

  m.attr("PATCH_FEATURE_DIM") = kPatchFeatureDim;

  // images
  m.def("decode_pgm", [](const py::bytes& b) { return from_image(decode_pgm(to_bytes(b))); },
        "Decode a binary PGM (P5) into a float array in [0, 1].", py::arg("data"));
  m.def("encode_pgm", [](const Array& img) { return from_bytes(encode_pgm(to_image(img))); },
        "Encode a [0, 1] float array as 8-bit binary PGM.", py::arg("image"));
  m.def(
      "tile_image",
      [](const Array& img, std::size_t patch_size) {
        const auto grid = tile_image(to_image(img), patch_size);
        Array out({grid.rows, grid.cols, kPatchFeatureDim});
        double* dst = out.mutable_data();
        for (const auto& p : grid.patches) dst = std::copy(p.feature.begin(), p.feature.end(), dst);
        return out;
      },
      "Per-patch features as an array of shape (rows, cols, 66).", py::arg("image"),
      py::arg("patch_size"));

  // attention and pruning
  m.def("load_attention", [](const py::bytes& b) { return from_attention(load_attention(to_bytes(b))); },
        "Parse ATTN bytes into an (M, N) array.", py::arg("data"));
  m.def("save_attention", [](const Array& w) { return from_bytes(save_attention(to_attention(w))); },
        "Serialize an (M, N) row-stochastic array as ATTN bytes.", py::arg("weights"));
  m.def("synth_attention",
        [](std::uint64_t seed, std::size_t tokens, std::size_t patches, double concentration) {
          return from_attention(synth_attention(seed, tokens, patches, concentration));
        },
        "Seeded synthetic attention of shape (tokens, patches).", py::arg("seed"),
        py::arg("tokens"), py::arg("patches"), py::arg("concentration"));
  m.def("aggregate_salience",
        [](const Array& w) { return from_vector(aggregate_salience(to_attention(w)).scores); },
        "Per-patch salience: column sums of the attention matrix.", py::arg("weights"));
  m.def("prune_topk",
        [](const Array& s, double k) { return prune_topk(to_salience(s), k).retained; },
        "Ascending indices of the top max(1, floor(k N)) patches.", py::arg("salience"),
        py::arg("fraction"));
  m.def("prune_threshold",
        [](const Array& s, double tau) { return prune_threshold(to_salience(s), tau).retained; },
        "Ascending indices of patches with salience > tau.", py::arg("salience"), py::arg("tau"));
  m.def("topk_count", &topk_count, "max(1, floor(k N)).", py::arg("total"), py::arg("fraction"));
  m.def("compression_ratio",
        [](std::size_t retained, std::size_t total) {
          return compression_ratio(PrunedSet{std::vector<std::uint32_t>(retained), total, TopKPolicy{}});
        },
        "1 - retained / total.", py::arg("retained"), py::arg("total"));

  // graphs
  m.def("betweenness_centrality",
        [](std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
          return betweenness_centrality(n, to_edges(edges));
        },
        "Unnormalised betweenness of an undirected graph.", py::arg("node_count"), py::arg("edges"));
  m.def("entity_embedding", [](const std::string& text, const std::string& label, std::size_t dim) {
          return from_vector(entity_embedding(text, label, dim));
        },
        "Hashed character-trigram embedding, L2-normalised.", py::arg("text"), py::arg("label"),
        py::arg("dim") = kDefaultEntityDim);
  m.def("normalize_knowledge_graph",
        [](const std::string& doc) { return knowledge_graph_to_json(parse_knowledge_graph(doc)); },
        "Validate a knowledge-graph JSON document and return its canonical form.",
        py::arg("document"));
  m.def(
      "build_graph",
      [](const Array& image, const Array& attention, const std::string& kg_json, double top_k,
         std::size_t patch_size, std::size_t dim) {
        Study study{to_image(image), to_attention(attention), parse_knowledge_graph(kg_json), 0, {}};
        return from_bytes(encode(build_study_graph(study, TopKPolicy{top_k}, patch_size, dim).graph));
      },
      "Tile, prune, fuse with the knowledge graph and return NRLG bytes.", py::arg("image"),
      py::arg("attention"), py::arg("kg_json"), py::arg("top_k"), py::arg("patch_size") = 8,
      py::arg("dim") = kDefaultFeatureDim);
  m.def("decode_json", [](const py::bytes& b) { return graph_to_json(decode(to_bytes(b))); },
        "Decode NRLG bytes into the graph JSON document.", py::arg("data"));
  m.def("encode_json", [](const std::string& doc) { return from_bytes(encode(graph_from_json(doc))); },
        "Encode a graph JSON document as NRLG bytes.", py::arg("document"));

  // metrics
  m.def("auc", [](const std::vector<double>& s, const std::vector<int>& y) { return auc(s, y); },
        "ROC AUC as the pairwise Mann-Whitney statistic.", py::arg("scores"), py::arg("labels"));
  m.def("bleu2",
        [](const std::string& candidate, const std::vector<std::string>& references) {
          std::vector<std::vector<std::string>> refs;
          for (const auto& r : references) refs.push_back(split_tokens(r));
          return bleu2(split_tokens(candidate), refs);
        },
        "Sentence BLEU-2 after lowercase whitespace tokenization.", py::arg("candidate"),
        py::arg("references"));

  // corpus
  m.def("write_synthetic_corpus",
        [](const std::string& dir, std::uint64_t seed, std::size_t count, std::size_t image_size,
           std::size_t patch_size, double positive_rate) {
          const auto corpus = generate_corpus(seed, count, image_size, patch_size, positive_rate);
          write_corpus(dir, corpus);
          return corpus_fingerprint(corpus);
        },
        "Write a seeded synthetic corpus and return its fingerprint.", py::arg("out_dir"),
        py::arg("seed"), py::arg("count") = 1000, py::arg("image_size") = 96,
        py::arg("patch_size") = 8, py::arg("positive_rate") = 0.15);

  // model
  py::class_<MpnnModel>(m, "Model")
      .def_static(
          "create",
          [](std::size_t input_dim, std::size_t layers, std::size_t hidden, std::uint64_t seed) {
            return init_model(MpnnShape{layers, hidden, input_dim + 1}, seed);
          },
          "Glorot-initialised model for graphs of the given feature dim.", py::arg("feature_dim"),
          py::arg("layers") = 3, py::arg("hidden") = 64, py::arg("seed") = 0)
      .def_static("load", [](const py::bytes& b) { return load_model(to_bytes(b)); },
                  "Parse NRLM checkpoint bytes.", py::arg("data"))
      .def("save", [](const MpnnModel& self) { return from_bytes(save_model(self)); },
           "NRLM checkpoint bytes.")
      .def("predict", [](const MpnnModel& self, const py::bytes& g) { return forward(self, decode(to_bytes(g))); },
           "Positive-class probability for one NRLG graph.", py::arg("graph"))
      .def_property_readonly("layers", [](const MpnnModel& self) { return self.layers; })
      .def_property_readonly("hidden", [](const MpnnModel& self) { return self.hidden; })
      .def_property_readonly("parameter_count", &MpnnModel::parameter_count)
      .def("__eq__", [](const MpnnModel& a, const MpnnModel& b) { return a == b; });

  m.def(
      "train",
      [](const MpnnModel& model, const std::vector<std::pair<py::bytes, int>>& data,
         std::size_t epochs, double lr, std::uint64_t seed) {
        std::vector<Example> examples;
        for (const auto& [g, label] : data) examples.push_back({decode(to_bytes(g)), label});
        py::gil_scoped_release release;
        return train(model, examples, TrainConfig{epochs, lr, seed});
      },
      "Per-example SGD over (NRLG bytes, label) pairs; returns the trained model.",
      py::arg("model"), py::arg("data"), py::arg("epochs") = 15, py::arg("learning_rate") = 0.03,
      py::arg("seed") = 0);
}
