#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vnfscale/cli.hpp"
#include "vnfscale/trace.hpp"

using namespace vnfscale;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "vnfscale");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path workdir(const std::string& name) {
  const fs::path dir = fs::current_path() / "cli-work" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::size_t data_rows(const fs::path& csv) {
  std::ifstream in(csv);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#' && line.rfind("timestamp", 0) != 0) ++rows;
  return rows;
}

}  // namespace

TEST_CASE("generate writes 12096 rows for 42 days") {
  const auto dir = workdir("generate");
  const auto path = (dir / "trace.csv").string();
  auto r = cli({"generate", "--days", "42", "--seed", "7", "-o", path});
  REQUIRE(r.code == 0);
  CHECK(data_rows(path) == 12096);
  CHECK(r.out.find("samples: 12096") != std::string::npos);
  CHECK(load_trace(path).size() == 12096);
}

TEST_CASE("generate usage and validation errors") {
  auto missing = cli({"generate", "--days", "42"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("--output is required") != std::string::npos);
  const auto dir = workdir("generate-bad");
  auto zero = cli({"generate", "--days", "0", "-o", (dir / "t.csv").string()});
  CHECK(zero.code != 0);
  CHECK(zero.err.find("days") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "t.csv"));
  CHECK(cli({}).code == 2);
  CHECK(cli({"explode"}).code == 2);
}

TEST_CASE("every subcommand has help") {
  for (const char* sub : {"generate", "dataset", "train", "evaluate", "rank", "curve", "simulate", "cost", "report"}) {
    auto r = cli({sub, "--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("Usage") != std::string::npos);
  }
}

TEST_CASE("train then evaluate gives a precision in range, twice identically") {
  const auto dir = workdir("train-evaluate");
  const auto trace = (dir / "trace.csv").string();
  const auto out = (dir / "out").string();
  REQUIRE(cli({"generate", "--days", "42", "--seed", "7", "-o", trace}).code == 0);
  auto t = cli({"train", "--trace", trace, "--out-dir", out, "--algo", "random-forest", "--label", "cml",
                "--train-days", "40", "--seed", "7"});
  REQUIRE(t.code == 0);
  CHECK(fs::exists(dir / "out" / "model.bin"));
  CHECK(fs::exists(dir / "out" / "model.json"));

  auto e = cli({"evaluate", "--trace", trace, "--out-dir", out, "--test-days", "2", "--seed", "7"});
  REQUIRE(e.code == 0);
  CHECK(e.out.find("random-forest-cml") != std::string::npos);
  const std::string first = read_file(dir / "out" / "evaluation.json");
  const auto report = nlohmann::json::parse(first);
  const double precision = report["evaluations"][0]["metrics"]["weighted"]["precision"];
  CHECK(precision >= 0.0);
  CHECK(precision <= 1.0);
  CHECK(report["config_hash"].get<std::string>().size() == 16);
  CHECK(report["evaluations"][0]["label"] == "cml");

  const std::string first_csv = read_file(dir / "out" / "evaluation.csv");
  REQUIRE(cli({"evaluate", "--trace", trace, "--out-dir", out, "--test-days", "2", "--seed", "7"}).code == 0);
  CHECK(read_file(dir / "out" / "evaluation.json") == first);
  CHECK(read_file(dir / "out" / "evaluation.csv") == first_csv);
  CHECK(first_csv.rfind("# config_hash=" + report["config_hash"].get<std::string>() + "\n", 0) == 0);
}

TEST_CASE("docker never degrades more than xen for the same decisions") {
  const auto dir = workdir("simulate");
  const auto out = (dir / "out").string();
  REQUIRE(cli({"train", "--out-dir", out, "--algo", "decision-tree", "--label", "cml"}).code == 0);
  auto r = cli({"simulate", "--out-dir", out, "--profile", "docker", "--profile", "xen", "--oracle", "cml",
                "--model", (dir / "out" / "model.bin").string(), "--timeline"});
  REQUIRE(r.code == 0);
  const auto report = nlohmann::json::parse(read_file(dir / "out" / "simulation.json"));
  const auto& runs = report["runs"];
  REQUIRE(runs.size() == 4);
  for (std::size_t i = 0; i < runs.size(); i += 2) {
    CHECK(runs[i]["profile"] == "docker");
    CHECK(runs[i + 1]["profile"] == "xen");
    CHECK(runs[i]["method"] == runs[i + 1]["method"]);
    CHECK(runs[i]["degraded_minutes"].get<double>() <= runs[i + 1]["degraded_minutes"].get<double>());
  }
  CHECK(fs::exists(dir / "out" / "timeline-cml-labels-docker.csv"));
  CHECK(fs::exists(dir / "out" / "timeline-decision-tree-cml-xen.csv"));
}

TEST_CASE("cost writes the leasing table") {
  const auto dir = workdir("cost");
  const auto out = (dir / "out").string();
  auto r = cli({"cost", "--out-dir", out, "--oracle", "qml", "--oracle", "cml"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("qml-labels") != std::string::npos);
  const std::string csv = read_file(dir / "out" / "cost.csv");
  CHECK(csv.find("method,site,service,vnf_cost,network_cost,degradation_cost,total\n") != std::string::npos);
  const auto report = nlohmann::json::parse(read_file(dir / "out" / "cost.json"));
  REQUIRE(report["reports"].size() == 2);
  CHECK(report["reports"][0]["total"]["degradation"].get<double>() == 0.0);
  CHECK(report["reports"][0]["rows"].size() == 12);
}

TEST_CASE("dataset, rank and curve write their files") {
  const auto dir = workdir("analysis");
  const auto out = (dir / "out").string();
  REQUIRE(cli({"dataset", "--out-dir", out}).code == 0);
  CHECK(fs::exists(dir / "out" / "dataset.csv"));
  const auto meta = nlohmann::json::parse(read_file(dir / "out" / "dataset.json"));
  CHECK(meta["instances"] == 6045);
  REQUIRE(cli({"rank", "--out-dir", out}).code == 0);
  CHECK(fs::exists(dir / "out" / "ranking.csv"));
  CHECK(fs::exists(dir / "out" / "pca.csv"));
  auto c = cli({"curve", "--out-dir", out, "--axis", "days", "--algo", "decision-tree"});
  REQUIRE(c.code == 0);
  const auto curves = nlohmann::json::parse(read_file(dir / "out" / "curves.json"));
  REQUIRE(curves["curves"].size() == 1);
  CHECK(curves["curves"][0]["axis"] == "days");
  CHECK(cli({"curve", "--out-dir", out, "--axis", "sideways"}).code == 1);
}

TEST_CASE("missing inputs fail with a message") {
  const auto dir = workdir("missing");
  auto r = cli({"evaluate", "--out-dir", (dir / "out").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("not found") != std::string::npos);
  auto t = cli({"train", "--trace", (dir / "nope.csv").string(), "--out-dir", (dir / "out").string()});
  CHECK(t.code == 1);
  auto days = cli({"train", "--out-dir", (dir / "out").string(), "--train-days", "41"});
  CHECK(days.code == 1);
  CHECK(days.err.find("available") != std::string::npos);
}

TEST_CASE("config file values apply and flags win") {
  const auto dir = workdir("config");
  {
    std::ofstream cfg(dir / "run.json");
    cfg << R"({"seed": 5, "trace": {"days": 3}})";
  }
  const auto trace = (dir / "t.csv").string();
  REQUIRE(cli({"generate", "--config", (dir / "run.json").string(), "-o", trace}).code == 0);
  CHECK(data_rows(trace) == 3 * 288);
  REQUIRE(cli({"generate", "--config", (dir / "run.json").string(), "--days", "2", "-o", trace}).code == 0);
  CHECK(data_rows(trace) == 2 * 288);
  CHECK(cli({"generate", "--config", (dir / "absent.json").string(), "-o", trace}).code == 2);
}
