#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cardevo/cli.hpp"
#include "test_util.hpp"

using namespace cardevo;
namespace fs = std::filesystem;

namespace {

const std::string kCards = std::string(CARDEVO_DATA_DIR) + "/cards.txt";

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cardevo");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

struct CommandOutput {
  int status = -1;
  std::string stdout_text;
};

// Runs the real binary for output-sensitive checks.
CommandOutput run_binary(const std::string& args) {
  CommandOutput out;
  std::string cmd = std::string(CARDEVO_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[512];
  while (fgets(buf, sizeof buf, pipe)) out.stdout_text += buf;
  int rc = pclose(pipe);
  out.status = WEXITSTATUS(rc);
  return out;
}

std::string temp_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("cardevo_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

std::string write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  f << content;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

std::string tiny_evolve_config(const std::string& dir) {
  return write_file(dir + "/run.cfg",
                    "representation = linear\n"
                    "scheme = progressive\n"
                    "generations = 2\n"
                    "population = 4\n"
                    "elitism = 1\n"
                    "drafts = 1\n"
                    "rounds = 1\n");
}

std::string directory_fingerprint(const std::string& root) {
  std::vector<std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) files.push_back(e.path().string());
  std::sort(files.begin(), files.end());
  std::string out;
  for (const auto& f : files) {
    out += f.substr(root.size());
    out += ":";
    out += slurp(f);
    out += "\n--\n";
  }
  return out;
}

}  // namespace

TEST_CASE("validate-cards reports the shipped pool") {
  CommandOutput out = run_binary("validate-cards " + kCards);
  CHECK(out.status == 0);
  CHECK(out.stdout_text == "160 cards OK\n");
}

TEST_CASE("validate-cards rejects a broken list") {
  std::string dir = temp_dir("badcards");
  std::string bad = write_file(dir + "/bad.txt", "1 ; A ; creature ; 1 ; 1\n");
  CHECK(run_cli({"validate-cards", bad}) == 2);
}

TEST_CASE("usage errors exit with status one") {
  CHECK(run_cli({"evolve"}) == 1);              // missing required flags
  CHECK(run_cli({"no-such-command"}) == 1);
  CHECK(run_cli({}) == 1);
}

TEST_CASE("evolve is reproducible directory for directory") {
  std::string dir = temp_dir("evolve_repro");
  std::string cfg = tiny_evolve_config(dir);
  REQUIRE(run_cli({"--cards", kCards, "evolve", "--config", cfg, "--seed", "42", "--out",
                   dir + "/run_a", "--silent"}) == 0);
  REQUIRE(run_cli({"--cards", kCards, "evolve", "--config", cfg, "--seed", "42", "--out",
                   dir + "/run_b", "--silent"}) == 0);
  CHECK(directory_fingerprint(dir + "/run_a") == directory_fingerprint(dir + "/run_b"));
  CHECK(fs::exists(dir + "/run_a/run_manifest.txt"));
  CHECK(fs::exists(dir + "/run_a/gen_001/genomes.txt"));
}

TEST_CASE("evolve status lines carry the game accounting") {
  std::string dir = temp_dir("evolve_log");
  std::string cfg = tiny_evolve_config(dir);
  CommandOutput out = run_binary("--cards " + kCards + " evolve --config " + cfg +
                                 " --seed 7 --out " + dir + "/run");
  CHECK(out.status == 0);
  // per-generation share for progressive pop 4 / drafts 1 / rounds 1
  CHECK(out.stdout_text.find("games=12") != std::string::npos);
  CHECK(out.stdout_text.find("gen=0") != std::string::npos);
  CHECK(out.stdout_text.find("gen=1") != std::string::npos);
  CHECK(out.stdout_text.find("total_games=24 expected_games=24") != std::string::npos);

  CommandOutput silent = run_binary("--cards " + kCards + " evolve --config " + cfg +
                                    " --seed 7 --out " + dir + "/run2 --silent");
  CHECK(silent.status == 0);
  CHECK(silent.stdout_text.empty());
}

TEST_CASE("translate emits an equivalent tree genome") {
  std::string dir = temp_dir("translate");
  Rng rng(4);
  GenomeParams p;
  Genome lin = random_genome(Representation::Linear, p, rng);
  save_genome(dir + "/lin.genome", lin);

  REQUIRE(run_cli({"translate", "--in", dir + "/lin.genome", "--repr", "tree", "--out",
                   dir + "/tree.genome"}) == 0);
  Genome tree = load_genome(dir + "/tree.genome");
  CHECK(tree.repr() == Representation::Tree);
  for (const auto& v : testutil::reachable_views(2, 5, 60))
    CHECK(std::abs(evaluate(tree, v) - evaluate(lin, v)) <= 1e-9);

  // Only linear genomes can be translated.
  REQUIRE(run_cli({"translate", "--in", dir + "/tree.genome", "--repr", "tree", "--out",
                   dir + "/again.genome"}) == 2);
}

TEST_CASE("play writes a reproducible transcript") {
  std::string dir = temp_dir("play");
  REQUIRE(run_cli({"--cards", kCards, "play", "--p0", "random", "--p1", "weakop", "--seed", "3",
                   "--transcript", dir + "/a.log"}) == 0);
  REQUIRE(run_cli({"--cards", kCards, "play", "--p0", "random", "--p1", "weakop", "--seed", "3",
                   "--transcript", dir + "/b.log"}) == 0);
  CHECK(slurp(dir + "/a.log") == slurp(dir + "/b.log"));
  CHECK(slurp(dir + "/a.log").find(';') != std::string::npos);

  CommandOutput out = run_binary("--cards " + kCards +
                                 " play --p0 weakop --p1 random --seed 9");
  CHECK(out.status == 0);
  CHECK(out.stdout_text.rfind("winner=", 0) == 0);
}

TEST_CASE("tournament writes matrix and cumulative csv files") {
  std::string dir = temp_dir("tournament");
  REQUIRE(run_cli({"--cards", kCards, "tournament", "--agents", "weakop", "random", "--drafts",
                   "2", "--rounds", "2", "--seed", "5", "--out", dir + "/matrix.csv",
                   "--cumulative", dir + "/rounds.csv"}) == 0);
  std::string matrix = slurp(dir + "/matrix.csv");
  CHECK(matrix.rfind("a,b,mean,std,games", 0) == 0);
  CHECK(matrix.find("weakop,random,") != std::string::npos);
  std::string rounds = slurp(dir + "/rounds.csv");
  CHECK(rounds.rfind("round,agent,value", 0) == 0);
  CHECK(rounds.find("2,weakop,") != std::string::npos);

  // duplicate labels -> runtime error
  CHECK(run_cli({"--cards", kCards, "tournament", "--agents", "weakop", "weakop", "--seed", "5",
                 "--out", dir + "/dup.csv"}) == 2);
}

TEST_CASE("heatmap and progress consume an evolution run") {
  std::string dir = temp_dir("analysis");
  std::string cfg = tiny_evolve_config(dir);
  REQUIRE(run_cli({"--cards", kCards, "evolve", "--config", cfg, "--seed", "11", "--out",
                   dir + "/run", "--silent"}) == 0);

  REQUIRE(run_cli({"--cards", kCards, "heatmap", "--run", dir + "/run", "--out",
                   dir + "/heat.csv", "--drafts", "1", "--rounds", "1", "--seed", "2"}) == 0);
  HeatmapGrid g = load_heatmap_csv(dir + "/heat.csv");
  REQUIRE(g.size() == 2);
  CHECK(g.cells[0][0] == 0.5);
  CHECK(g.cells[0][1] + g.cells[1][0] == Catch::Approx(1.0));

  REQUIRE(run_cli({"--cards", kCards, "heatmap", "--run", dir + "/run", "--out",
                   dir + "/heat.dat", "--gnuplot", "--drafts", "1", "--rounds", "1", "--seed",
                   "2"}) == 0);
  CHECK(slurp(dir + "/heat.dat").find(',') == std::string::npos);

  REQUIRE(run_cli({"--cards", kCards, "progress", "--run", dir + "/run", "--out",
                   dir + "/prog.csv", "--drafts", "1", "--rounds", "1", "--seed", "2"}) == 0);
  std::string prog = slurp(dir + "/prog.csv");
  CHECK(prog.rfind("generation,value", 0) == 0);

  // Missing run directory is a runtime error.
  CHECK(run_cli({"--cards", kCards, "progress", "--run", dir + "/nope", "--out",
                 dir + "/x.csv"}) == 2);
}

TEST_CASE("evolve accepts a json config") {
  std::string dir = temp_dir("json_cfg");
  std::string cfg = write_file(dir + "/run.json",
                               R"({"representation": "binarytree", "scheme": "progressive",
                                   "generations": 1, "population": 3, "elitism": 1,
                                   "drafts": 1, "rounds": 1})");
  REQUIRE(run_cli({"--cards", kCards, "evolve", "--config", cfg, "--seed", "8", "--out",
                   dir + "/run", "--silent"}) == 0);
  auto archives = load_run(dir + "/run");
  REQUIRE(archives.size() == 1);
  CHECK(archives[0].genomes.size() == 3);
  CHECK(archives[0].genomes[0].repr() == Representation::BinaryTree);
}

TEST_CASE("the cards environment variable supplies the default pool") {
  std::string dir = temp_dir("env");
  setenv("CARDEVO_CARDS", kCards.c_str(), 1);
  CHECK(run_cli({"play", "--p0", "random", "--p1", "random", "--seed", "1"}) == 0);
  unsetenv("CARDEVO_CARDS");
}
