#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "cli_runner.hpp"
#include "neural/attention.hpp"
#include "neural/serialization.hpp"

using namespace neural;
namespace fs = std::filesystem;

namespace {

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("version and usage") {
  const auto dir = fresh_dir("neural_cli_usage");
  const auto v = run_cli("--version", dir);
  CHECK(v.exit_code == 0);
  CHECK(v.out.find("neural 1.0.0") != std::string::npos);
  CHECK(run_cli("", dir).exit_code == 1);
  CHECK(run_cli("frobnicate", dir).exit_code == 1);
  CHECK(run_cli("prune --top-k 0.5", dir).exit_code == 1);
  CHECK(run_cli("decode --in /nonexistent/file.nrlg", dir).exit_code == 1);
}

TEST_CASE("typed errors exit with code 2") {
  const auto dir = fresh_dir("neural_cli_errors");
  write_text_file(dir / "bad.nrlg", "XXXXnot a graph");
  const auto r = run_cli("decode --in " + q(dir / "bad.nrlg"), dir);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("BadMagic") != std::string::npos);

  write_file(dir / "a.attn", save_attention(synth_attention(1, 4, 10, 0.5)));
  const auto z = run_cli("prune --attention " + q(dir / "a.attn") + " --top-k 0", dir);
  CHECK(z.exit_code == 2);
  CHECK(z.err.find("InvalidFraction") != std::string::npos);
}

TEST_CASE("salience then top-k prune on 870 patches keeps 20") {
  const auto dir = fresh_dir("neural_cli_prune");
  write_file(dir / "a.attn", save_attention(synth_attention(3, 30, 870, 0.2)));
  REQUIRE(run_cli("salience --attention " + q(dir / "a.attn") + " --out " + q(dir / "s.csv"), dir)
              .exit_code == 0);
  const auto r = run_cli("prune --salience " + q(dir / "s.csv") + " --top-k 0.023", dir);
  REQUIRE(r.exit_code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["total"] == 870);
  CHECK(doc["retained"].size() == 20);
  CHECK(doc["policy"] == "top_k");
  CHECK(std::abs(doc["compression"].get<double>() - 0.977) < 1e-4);
  const auto direct = run_cli("prune --attention " + q(dir / "a.attn") + " --top-k 0.023", dir);
  CHECK(direct.out == r.out);
}

TEST_CASE("synth, fuse, stats, decode and encode agree") {
  const auto dir = fresh_dir("neural_cli_graph");
  REQUIRE(run_cli("synth --out " + q(dir / "corpus") + " --count 10 --image-size 32 --patch-size 8 --seed 4",
                  dir).exit_code == 0);
  const auto study = dir / "corpus" / "study_00000";
  REQUIRE(run_cli("prune --attention " + q(study.string() + ".attn") + " --top-k 0.25 --out " +
                      q(dir / "p.json"), dir).exit_code == 0);
  REQUIRE(run_cli("fuse --image " + q(study.string() + ".pgm") + " --pruned " + q(dir / "p.json") +
                      " --kg " + q(study.string() + ".kg.json") + " --out " + q(dir / "g.nrlg"),
                  dir).exit_code == 0);

  const auto bytes = read_file(dir / "g.nrlg");
  const auto g = decode(bytes);
  const auto stats = run_cli("stats --in " + q(dir / "g.nrlg"), dir);
  REQUIRE(stats.exit_code == 0);
  CHECK(stats.out.find("nodes=" + std::to_string(g.size()) + "\n") != std::string::npos);
  CHECK(stats.out.find("edges=" + std::to_string(g.edges.size()) + "\n") != std::string::npos);
  CHECK(stats.out.find("bytes=" + std::to_string(bytes.size()) + "\n") != std::string::npos);
  CHECK(stats.out.find("visual_nodes=4\n") != std::string::npos);
  REQUIRE(run_cli("decode --in " + q(dir / "g.nrlg") + " --out " + q(dir / "g.json"), dir).exit_code == 0);
  REQUIRE(run_cli("encode --in " + q(dir / "g.json") + " --out " + q(dir / "g2.nrlg"), dir).exit_code == 0);
  CHECK(read_file(dir / "g2.nrlg") == bytes);
  REQUIRE(run_cli("decode --in " + q(dir / "g2.nrlg") + " --out " + q(dir / "g2.json"), dir).exit_code == 0);
  CHECK(read_text_file(dir / "g2.json") == read_text_file(dir / "g.json"));
}

TEST_CASE("bleu mode") {
  const auto dir = fresh_dir("neural_cli_bleu");
  write_text_file(dir / "c.txt", "the cat sat\n");
  write_text_file(dir / "r.txt", "the cat sat down\n");
  const auto r = run_cli("eval --bleu --candidates " + q(dir / "c.txt") + " --references " +
                             q(dir / "r.txt"), dir);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("0.7165") != std::string::npos);
}
