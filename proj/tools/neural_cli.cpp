// neural: command-line front end for the attention-guided graph compression
// pipeline. Exit codes: 0 success, 1 usage error, 2 data error.

#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "neural/ablation.hpp"
#include "neural/attention.hpp"
#include "neural/error.hpp"
#include "neural/fixtures.hpp"
#include "neural/formats.hpp"
#include "neural/graphs.hpp"
#include "neural/metrics.hpp"
#include "neural/mpnn.hpp"
#include "neural/patch_grid.hpp"
#include "neural/pruning.hpp"
#include "neural/serialization.hpp"

namespace fs = std::filesystem;
using namespace neural;

namespace {

constexpr const char* kVersion = "neural 1.0.0 (formats: ATTN=1, NRLG=1, NRLM=1)";

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text << std::flush;
  } else {
    write_text_file(out_path, text);
  }
}

void require_distinct(const std::string& in, const std::string& out) {
  if (!in.empty() && !out.empty() && fs::weakly_canonical(in) == fs::weakly_canonical(out)) {
    throw CLI::ValidationError("--out", "output path must differ from input " + in);
  }
}

/// Runs fn(i) for i in [0, n) on `jobs` threads; rethrows the first failure.
template <class Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn&& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex guard;
  std::vector<std::thread> workers;
  for (std::size_t t = 0; t < jobs; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(guard);
          if (!first) first = std::current_exception();
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (first) std::rethrow_exception(first);
}

struct CorpusRow {
  std::string name;
  int label = 0;
};

std::vector<CorpusRow> corpus_rows(const fs::path& dir) {
  std::istringstream in(read_text_file(dir / "labels.csv"));
  std::string line;
  if (!std::getline(in, line) || line != "study,label") {
    fail(ErrorCode::MalformedDocument, "labels.csv must start with \"study,label\"");
  }
  std::vector<CorpusRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    const auto label = comma == std::string::npos ? std::string() : line.substr(comma + 1);
    if (label != "0" && label != "1") fail(ErrorCode::MalformedDocument, "bad labels row: " + line);
    rows.push_back({line.substr(0, comma), label == "1" ? 1 : 0});
  }
  return rows;
}

std::vector<std::pair<UnifiedGraph, int>> load_dataset(const fs::path& listing,
                                                       std::vector<std::string>* names = nullptr) {
  const auto base = listing.parent_path();
  std::vector<std::pair<UnifiedGraph, int>> out;
  for (const auto& entry : dataset_from_csv(read_text_file(listing))) {
    out.emplace_back(decode(read_file(base / entry.graph)), entry.label);
    if (names) names->push_back(entry.graph);
  }
  return out;
}

std::string format_probability(double p) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", p);
  return buf;
}

struct Common {
  std::size_t jobs = 1;
};

// ---- tile ----------------------------------------------------------------------
struct TileArgs {
  std::string image, out;
  std::size_t patch_size = 8;
};

void run_tile(const TileArgs& a) {
  const auto grid = tile_image(decode_pgm(read_file(a.image)), a.patch_size);
  std::string out = "index,row,col";
  for (std::size_t k = 0; k < kPatchFeatureDim; ++k) out += ",f" + std::to_string(k);
  out += "\n";
  char buf[40];
  for (const auto& p : grid.patches) {
    out += std::to_string(p.index) + "," + std::to_string(p.grid_row) + "," +
           std::to_string(p.grid_col);
    for (double v : p.feature) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      out += buf;
    }
    out += "\n";
  }
  std::cerr << "grid " << grid.rows << "x" << grid.cols << ", N = " << grid.size() << "\n";
  emit(a.out, out);
}

// ---- salience -------------------------------------------------------------------
struct SalienceArgs {
  std::string attention, out;
};

void run_salience(const SalienceArgs& a) {
  emit(a.out, salience_to_csv(aggregate_salience(load_attention(read_file(a.attention)))));
}

// ---- prune ----------------------------------------------------------------------
struct PruneArgs {
  std::string salience, attention, corpus, out;
  double tau = 0.0;
  double top_k = 0.0;
  CLI::Option* tau_opt = nullptr;
};

void run_prune(const PruneArgs& a, const Common& common) {
  const PruningPolicy policy =
      a.tau_opt->count() > 0 ? PruningPolicy{ThresholdPolicy{a.tau}} : TopKPolicy{a.top_k};
  if (!a.corpus.empty()) {
    if (a.out.empty()) throw CLI::RequiredError("--out (directory) with --corpus");
    fs::create_directories(a.out);
    const auto rows = corpus_rows(a.corpus);
    parallel_for(rows.size(), common.jobs, [&](std::size_t i) {
      const auto s = aggregate_salience(
          load_attention(read_file(fs::path(a.corpus) / (rows[i].name + ".attn"))));
      write_text_file(fs::path(a.out) / (rows[i].name + ".pruned.json"),
                      pruned_to_json(prune(s, policy)));
    });
    std::cerr << "pruned " << rows.size() << " studies into " << a.out << "\n";
    return;
  }
  const SalienceVector s = a.attention.empty()
                               ? salience_from_csv(read_text_file(a.salience))
                               : aggregate_salience(load_attention(read_file(a.attention)));
  const auto pruned = prune(s, policy);
  std::cerr << "retained " << pruned.retained.size() << " of " << pruned.total
            << ", compression " << compression_ratio(pruned) << "\n";
  emit(a.out, pruned_to_json(pruned));
}

// ---- fuse -----------------------------------------------------------------------
struct FuseArgs {
  std::string image, pruned, kg, corpus, pruned_dir, out;
  std::size_t patch_size = 8;
  std::size_t dim = kDefaultFeatureDim;
  std::size_t entity_dim = kDefaultEntityDim;
  bool image_only = false;
};

Bytes fuse_one(const fs::path& image, const fs::path& pruned_path, const fs::path& kg_path,
               const FuseArgs& a) {
  const auto grid = tile_image(decode_pgm(read_file(image)), a.patch_size);
  const auto pruned = pruned_from_json(read_text_file(pruned_path));
  const auto kg = a.image_only ? dummy_knowledge_graph(a.entity_dim)
                               : parse_knowledge_graph(read_text_file(kg_path), a.entity_dim);
  return encode(fuse(build_visual_graph(grid, pruned), kg, a.dim));
}

void run_fuse(const FuseArgs& a, const Common& common) {
  if (!a.corpus.empty()) {
    if (a.pruned_dir.empty()) throw CLI::RequiredError("--pruned-dir with --corpus");
    fs::create_directories(a.out);
    const fs::path corpus(a.corpus);
    const auto rows = corpus_rows(corpus);
    parallel_for(rows.size(), common.jobs, [&](std::size_t i) {
      const auto& n = rows[i].name;
      write_file(fs::path(a.out) / (n + ".nrlg"),
                 fuse_one(corpus / (n + ".pgm"), fs::path(a.pruned_dir) / (n + ".pruned.json"),
                          corpus / (n + ".kg.json"), a));
    });
    std::vector<DatasetEntry> entries;
    for (const auto& r : rows) entries.push_back({r.name + ".nrlg", r.label});
    write_text_file(fs::path(a.out) / "data.csv", dataset_to_csv(entries));
    std::cerr << "fused " << rows.size() << " studies into " << a.out << "\n";
    return;
  }
  if (a.image.empty() || a.pruned.empty() || (a.kg.empty() && !a.image_only)) {
    throw CLI::RequiredError("--image, --pruned and --kg (or --corpus)");
  }
  for (const auto& in : {a.image, a.pruned, a.kg}) require_distinct(in, a.out);
  const auto bytes = fuse_one(a.image, a.pruned, a.kg, a);
  write_file(a.out, bytes);
  std::cerr << "wrote " << bytes.size() << " bytes to " << a.out << "\n";
}

// ---- encode / decode / stats ----------------------------------------------------
struct CodecArgs {
  std::string in, out, image;
};

void run_encode(const CodecArgs& a) {
  require_distinct(a.in, a.out);
  write_file(a.out, encode(graph_from_json(read_text_file(a.in))));
}

void run_decode(const CodecArgs& a) {
  require_distinct(a.in, a.out);
  emit(a.out, graph_to_json(decode(read_file(a.in))));
}

void run_stats(const CodecArgs& a) {
  const auto bytes = read_file(a.in);
  const auto g = decode(bytes);
  std::size_t visual = 0;
  for (const auto& n : g.nodes) visual += n.modality == Modality::Visual;
  std::ostringstream out;
  out << "nodes=" << g.nodes.size() << "\n"
      << "visual_nodes=" << visual << "\n"
      << "text_nodes=" << g.nodes.size() - visual << "\n"
      << "edges=" << g.edges.size() << "\n"
      << "dim=" << g.dim << "\n"
      << "bridge=" << g.bridge.visual << "," << g.bridge.text << "\n"
      << "bytes=" << bytes.size() << "\n";
  if (!a.image.empty()) {
    const auto original = read_file(a.image).size();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", static_cast<double>(bytes.size()) / original);
    out << "original_bytes=" << original << "\n" << "byte_ratio=" << buf << "\n";
  }
  emit("", out.str());
}

// ---- train / classify / eval ----------------------------------------------------
struct TrainArgs {
  std::string data, out, log;
  std::size_t epochs = TrainConfig{}.epochs;
  double lr = TrainConfig{}.learning_rate;
  std::uint64_t seed = 0;
  std::size_t layers = MpnnShape{}.layers;
  std::size_t hidden = MpnnShape{}.hidden;
};

void run_train(const TrainArgs& a) {
  require_distinct(a.data, a.out);
  std::vector<Example> dataset;
  for (auto& [g, y] : load_dataset(a.data)) dataset.push_back(Example{std::move(g), y});
  if (dataset.empty()) fail(ErrorCode::EmptyDataset, "no graphs listed in " + a.data);
  const MpnnShape shape{a.layers, a.hidden, dataset.front().graph.dim + 1};
  std::string trace = "epoch,loss\n";
  const auto model = train(init_model(shape, a.seed), dataset, {a.epochs, a.lr, a.seed},
                           [&](std::size_t epoch, double mean_loss, const MpnnModel&) {
                             char buf[64];
                             std::snprintf(buf, sizeof buf, "%zu,%.17g\n", epoch, mean_loss);
                             trace += buf;
                           });
  write_file(a.out, save_model(model));
  if (!a.log.empty()) write_text_file(a.log, trace);
  std::cerr << "trained on " << dataset.size() << " graphs, " << a.epochs << " epochs\n";
}

struct ClassifyArgs {
  std::string model, data, out;
  std::vector<std::string> graphs;
};

void run_classify(const ClassifyArgs& a, const Common& common) {
  const auto model = load_model(read_file(a.model));
  std::vector<std::string> names = a.graphs;
  std::vector<UnifiedGraph> graphs;
  if (!a.data.empty()) {
    for (auto& [g, y] : load_dataset(a.data, &names)) graphs.push_back(std::move(g));
  } else {
    for (const auto& path : a.graphs) graphs.push_back(decode(read_file(path)));
  }
  std::vector<double> probs(graphs.size());
  parallel_for(graphs.size(), common.jobs, [&](std::size_t i) { probs[i] = forward(model, graphs[i]); });
  std::string out = "graph,probability\n";
  for (std::size_t i = 0; i < graphs.size(); ++i) out += names[i] + "," + format_probability(probs[i]) + "\n";
  emit(a.out, out);
}

struct EvalArgs {
  std::string model, data, out, candidates, references;
  bool bleu = false;
};

void run_eval(const EvalArgs& a, const Common& common) {
  char buf[64];
  if (a.bleu) {
    if (a.candidates.empty() || a.references.empty()) {
      throw CLI::RequiredError("--candidates and --references with --bleu");
    }
    std::istringstream cand(read_text_file(a.candidates));
    std::istringstream refs(read_text_file(a.references));
    std::string c;
    std::string r;
    double total = 0.0;
    std::size_t count = 0;
    while (std::getline(cand, c)) {
      if (!std::getline(refs, r)) fail(ErrorCode::MalformedDocument, "fewer references than candidates");
      // References for one candidate are separated by " ||| ".
      std::vector<std::vector<std::string>> ref_tokens;
      std::size_t start = 0;
      while (true) {
        const auto sep = r.find("|||", start);
        ref_tokens.push_back(tokenize(r.substr(start, sep == std::string::npos ? sep : sep - start)));
        if (sep == std::string::npos) break;
        start = sep + 3;
      }
      total += bleu2(tokenize(c), ref_tokens);
      ++count;
    }
    if (count == 0) fail(ErrorCode::EmptyCandidate, "no candidate lines");
    std::snprintf(buf, sizeof buf, "bleu2=%.6f\n", total / static_cast<double>(count));
    emit(a.out, buf);
    return;
  }
  if (a.model.empty() || a.data.empty()) throw CLI::RequiredError("--model and --data");
  const auto model = load_model(read_file(a.model));
  std::vector<std::string> names;
  const auto dataset = load_dataset(a.data, &names);
  std::vector<double> probs(dataset.size());
  parallel_for(dataset.size(), common.jobs,
               [&](std::size_t i) { probs[i] = forward(model, dataset[i].first); });
  std::vector<int> labels;
  std::string out = "graph,label,probability\n";
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    labels.push_back(dataset[i].second);
    out += names[i] + "," + std::to_string(dataset[i].second) + "," + format_probability(probs[i]) + "\n";
  }
  const double value = auc(probs, labels);
  std::snprintf(buf, sizeof buf, "auc=%.6f\n", value);
  if (!a.out.empty()) write_text_file(a.out, out);
  std::cout << buf << std::flush;
}

// ---- synth / ablation -----------------------------------------------------------
struct SynthArgs {
  std::string out;
  std::size_t count = 1000;
  std::size_t image_size = 96;
  std::size_t patch_size = 8;
  double positive_rate = 0.15;
  std::size_t tokens = FixtureOptions{}.tokens;
  std::uint64_t seed = 0;
};

void run_synth(const SynthArgs& a) {
  FixtureOptions options;
  options.tokens = a.tokens;
  const auto corpus = generate_corpus(a.seed, a.count, a.image_size, a.patch_size, a.positive_rate, options);
  write_corpus(a.out, corpus);
  std::size_t positives = 0;
  for (const auto& s : corpus) positives += s.label;
  std::cerr << "wrote " << corpus.size() << " studies (" << positives << " positive) to " << a.out << "\n";
}

struct AblationArgs {
  std::string corpus, out;
  std::vector<double> fractions{0.023, 0.05, 0.1, 1.0};
  std::size_t patch_size = 8;
  std::size_t dim = kDefaultFeatureDim;
  std::size_t entity_dim = kDefaultEntityDim;
  std::size_t epochs = TrainConfig{}.epochs;
  double lr = TrainConfig{}.learning_rate;
  std::uint64_t seed = 0;
  std::size_t layers = MpnnShape{}.layers;
  std::size_t hidden = MpnnShape{}.hidden;
  bool image_only = false;
};

void run_ablation(const AblationArgs& a) {
  const auto corpus = read_corpus(a.corpus, a.entity_dim);
  AblationConfig config;
  config.patch_size = a.patch_size;
  config.feature_dim = a.dim;
  config.layers = a.layers;
  config.hidden = a.hidden;
  config.train = TrainConfig{a.epochs, a.lr, a.seed};
  config.image_only = a.image_only;
  emit(a.out, ablation_csv(ablation_sweep(corpus, a.fractions, config)));
}

void add_seed(CLI::App* cmd, std::uint64_t& seed) {
  cmd->add_option("--seed", seed, "Seed for every random draw")->envname("NEURAL_SEED");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attention-guided pruning and multimodal graph compression"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Common common;

  TileArgs tile;
  auto* tile_cmd = app.add_subcommand("tile", "Tile a PGM image and print per-patch features");
  tile_cmd->add_option("--image", tile.image, "Binary PGM (P5)")->required()->check(CLI::ExistingFile);
  tile_cmd->add_option("--patch-size", tile.patch_size, "Patch side in pixels")->check(CLI::PositiveNumber);
  tile_cmd->add_option("--out", tile.out, "Output CSV (default stdout)");

  SalienceArgs sal;
  auto* sal_cmd = app.add_subcommand("salience", "Aggregate an ATTN matrix into per-patch salience");
  sal_cmd->add_option("--attention", sal.attention, "ATTN file")->required()->check(CLI::ExistingFile);
  sal_cmd->add_option("--out", sal.out, "Output CSV (default stdout)");

  PruneArgs pr;
  auto* pr_cmd = app.add_subcommand("prune", "Select salient patches by threshold or top-k");
  auto* pr_sal = pr_cmd->add_option("--salience", pr.salience, "Salience CSV")->check(CLI::ExistingFile);
  auto* pr_att = pr_cmd->add_option("--attention", pr.attention, "ATTN file")->check(CLI::ExistingFile);
  auto* pr_corpus = pr_cmd->add_option("--corpus", pr.corpus, "Corpus directory (batch mode)")->check(CLI::ExistingDirectory);
  pr_sal->excludes(pr_att)->excludes(pr_corpus);
  pr_att->excludes(pr_corpus);
  pr.tau_opt = pr_cmd->add_option("--tau", pr.tau, "Keep patches with salience > tau");
  auto* pr_topk = pr_cmd->add_option("--top-k", pr.top_k, "Keep the top fraction k in (0,1]");
  pr.tau_opt->excludes(pr_topk);
  pr_cmd->add_option("--out", pr.out, "Output JSON, or directory with --corpus");
  pr_cmd->add_option("--jobs", common.jobs, "Worker threads")->check(CLI::PositiveNumber);

  FuseArgs fu;
  auto* fu_cmd = app.add_subcommand("fuse", "Build G1, fuse with the report graph, write NRLG");
  fu_cmd->add_option("--image", fu.image, "Binary PGM (P5)")->check(CLI::ExistingFile);
  fu_cmd->add_option("--pruned", fu.pruned, "Pruned-set JSON")->check(CLI::ExistingFile);
  fu_cmd->add_option("--kg", fu.kg, "Knowledge-graph JSON")->check(CLI::ExistingFile);
  fu_cmd->add_option("--corpus", fu.corpus, "Corpus directory (batch mode)")->check(CLI::ExistingDirectory);
  fu_cmd->add_option("--pruned-dir", fu.pruned_dir, "Directory of <study>.pruned.json")->check(CLI::ExistingDirectory);
  fu_cmd->add_option("--patch-size", fu.patch_size, "Patch side in pixels")->check(CLI::PositiveNumber);
  fu_cmd->add_option("--dim", fu.dim, "Common feature dimension")->check(CLI::PositiveNumber);
  fu_cmd->add_option("--entity-dim", fu.entity_dim, "Entity embedding dimension")->check(CLI::Range(8, 1 << 20));
  fu_cmd->add_flag("--image-only", fu.image_only, "Replace the report graph with one placeholder node");
  fu_cmd->add_option("--out", fu.out, "Output .nrlg, or directory with --corpus")->required();
  fu_cmd->add_option("--jobs", common.jobs, "Worker threads")->check(CLI::PositiveNumber);

  CodecArgs enc;
  auto* enc_cmd = app.add_subcommand("encode", "Encode a graph JSON document as NRLG");
  enc_cmd->add_option("--in", enc.in, "Graph JSON")->required()->check(CLI::ExistingFile);
  enc_cmd->add_option("--out", enc.out, "Output .nrlg")->required();

  CodecArgs dec;
  auto* dec_cmd = app.add_subcommand("decode", "Decode NRLG into graph JSON");
  dec_cmd->add_option("--in", dec.in, "NRLG file")->required()->check(CLI::ExistingFile);
  dec_cmd->add_option("--out", dec.out, "Output JSON (default stdout)");

  CodecArgs st;
  auto* st_cmd = app.add_subcommand("stats", "Report node, edge and byte counts of an NRLG file");
  st_cmd->add_option("--in", st.in, "NRLG file")->required()->check(CLI::ExistingFile);
  st_cmd->add_option("--image", st.image, "Original image, for the byte ratio")->check(CLI::ExistingFile);

  TrainArgs tr;
  auto* tr_cmd = app.add_subcommand("train", "Train the MPNN classifier");
  tr_cmd->add_option("--data", tr.data, "Dataset CSV (graph,label)")->required()->check(CLI::ExistingFile);
  tr_cmd->add_option("--epochs", tr.epochs, "Epochs")->check(CLI::PositiveNumber);
  tr_cmd->add_option("--lr", tr.lr, "Learning rate")->check(CLI::NonNegativeNumber);
  tr_cmd->add_option("--layers", tr.layers, "Message passing layers")->check(CLI::PositiveNumber);
  tr_cmd->add_option("--hidden", tr.hidden, "Hidden width")->check(CLI::PositiveNumber);
  tr_cmd->add_option("--out", tr.out, "Output .nrlm checkpoint")->required();
  tr_cmd->add_option("--log", tr.log, "Per-epoch loss CSV");
  add_seed(tr_cmd, tr.seed);

  ClassifyArgs cl;
  auto* cl_cmd = app.add_subcommand("classify", "Score graphs with a trained model");
  cl_cmd->add_option("--model", cl.model, "NRLM checkpoint")->required()->check(CLI::ExistingFile);
  auto* cl_data = cl_cmd->add_option("--data", cl.data, "Dataset CSV")->check(CLI::ExistingFile);
  auto* cl_graphs = cl_cmd->add_option("graphs", cl.graphs, "NRLG files")->check(CLI::ExistingFile);
  cl_data->excludes(cl_graphs);
  cl_cmd->add_option("--out", cl.out, "Output CSV (default stdout)");
  cl_cmd->add_option("--jobs", common.jobs, "Worker threads")->check(CLI::PositiveNumber);

  EvalArgs ev;
  auto* ev_cmd = app.add_subcommand("eval", "AUC of a model on a dataset, or BLEU-2 of reports");
  ev_cmd->add_option("--model", ev.model, "NRLM checkpoint")->check(CLI::ExistingFile);
  ev_cmd->add_option("--data", ev.data, "Dataset CSV")->check(CLI::ExistingFile);
  ev_cmd->add_option("--out", ev.out, "Per-graph predictions CSV (AUC mode) or result file (BLEU)");
  ev_cmd->add_flag("--bleu", ev.bleu, "Score candidate reports with BLEU-2");
  ev_cmd->add_option("--candidates", ev.candidates, "One candidate report per line")->check(CLI::ExistingFile);
  ev_cmd->add_option("--references", ev.references, "Matching references, alternatives split by |||")->check(CLI::ExistingFile);
  ev_cmd->add_option("--jobs", common.jobs, "Worker threads")->check(CLI::PositiveNumber);

  SynthArgs sy;
  auto* sy_cmd = app.add_subcommand("synth", "Write a synthetic labelled corpus");
  sy_cmd->add_option("--out", sy.out, "Output directory")->required();
  sy_cmd->add_option("--count", sy.count, "Number of studies")->check(CLI::Range(10, 1 << 24));
  sy_cmd->add_option("--image-size", sy.image_size, "Square image side")->check(CLI::PositiveNumber);
  sy_cmd->add_option("--patch-size", sy.patch_size, "Patch side")->check(CLI::PositiveNumber);
  sy_cmd->add_option("--positive-rate", sy.positive_rate, "Fraction of positive studies");
  sy_cmd->add_option("--tokens", sy.tokens, "Report tokens per attention matrix")->check(CLI::PositiveNumber);
  add_seed(sy_cmd, sy.seed);

  AblationArgs ab;
  auto* ab_cmd = app.add_subcommand("ablation", "Sweep top-k fractions: compression vs held-out AUC");
  ab_cmd->add_option("--corpus", ab.corpus, "Corpus directory")->required()->check(CLI::ExistingDirectory);
  ab_cmd->add_option("--fractions", ab.fractions, "Comma-separated top-k fractions")->delimiter(',');
  ab_cmd->add_option("--patch-size", ab.patch_size, "Patch side")->check(CLI::PositiveNumber);
  ab_cmd->add_option("--dim", ab.dim, "Common feature dimension")->check(CLI::PositiveNumber);
  ab_cmd->add_option("--entity-dim", ab.entity_dim, "Entity embedding dimension")->check(CLI::Range(8, 1 << 20));
  ab_cmd->add_option("--epochs", ab.epochs, "Epochs")->check(CLI::PositiveNumber);
  ab_cmd->add_option("--lr", ab.lr, "Learning rate")->check(CLI::NonNegativeNumber);
  ab_cmd->add_option("--layers", ab.layers, "Message passing layers")->check(CLI::PositiveNumber);
  ab_cmd->add_option("--hidden", ab.hidden, "Hidden width")->check(CLI::PositiveNumber);
  ab_cmd->add_flag("--image-only", ab.image_only, "Replace report graphs with a placeholder node");
  ab_cmd->add_option("--out", ab.out, "Output CSV (default stdout)");
  add_seed(ab_cmd, ab.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*tile_cmd) run_tile(tile);
    if (*sal_cmd) run_salience(sal);
    if (*pr_cmd) {
      if (pr.tau_opt->count() == 0 && pr_topk->count() == 0) {
        throw CLI::RequiredError("--tau or --top-k");
      }
      if (pr.salience.empty() && pr.attention.empty() && pr.corpus.empty()) {
        throw CLI::RequiredError("--salience, --attention or --corpus");
      }
      run_prune(pr, common);
    }
    if (*fu_cmd) run_fuse(fu, common);
    if (*enc_cmd) run_encode(enc);
    if (*dec_cmd) run_decode(dec);
    if (*st_cmd) run_stats(st);
    if (*tr_cmd) run_train(tr);
    if (*cl_cmd) {
      if (cl.data.empty() && cl.graphs.empty()) throw CLI::RequiredError("--data or graph files");
      run_classify(cl, common);
    }
    if (*ev_cmd) run_eval(ev, common);
    if (*sy_cmd) run_synth(sy);
    if (*ab_cmd) run_ablation(ab);
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
