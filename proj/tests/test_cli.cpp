#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pdmp/cli.hpp"

using namespace pdmp;
namespace fs = std::filesystem;

namespace {

const char* kMinimal =
    "[model]\nname = zigzag\n"
    "[target]\nname = gaussian_std\ndim = 2\n"
    "[sampler]\nn_events = 1000\nseed = 1\n";

std::string parse_error(const std::string& text) {
  std::istringstream in(text);
  try {
    (void)cli::parse_run_config(in);
  } catch (const InvalidArgument& e) {
    return e.what();
  }
  return {};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pdmp_test_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("run config parsing") {
  std::istringstream in(std::string(kMinimal) + "x0 = 0.5, -1\nstrategy = vectorized_signed\n");
  const auto cfg = cli::parse_run_config(in);
  CHECK(cfg.model == "zigzag");
  CHECK(cfg.target.dim == 2);
  CHECK(cfg.sampler.n_events == 1000);
  CHECK(cfg.sampler.strategy == Strategy::VectorizedSigned);
  REQUIRE(cfg.x0);
  CHECK((*cfg.x0)[1] == -1.0);
}

TEST_CASE("run config errors name the field") {
  CHECK(parse_error(kMinimal).empty());
  CHECK(parse_error("[model]\nname = zigzag\n[target]\ndim = 2\n").find("target.name") != std::string::npos);
  CHECK(parse_error(std::string(kMinimal) + "alpha_plus = 0.5\n").find("sampler.alpha_plus") != std::string::npos);
  CHECK(parse_error(std::string(kMinimal) + "bogus = 1\n").find("sampler.bogus") != std::string::npos);
  CHECK(parse_error("[model]\nname = zigzag\n[target]\nname = gaussian_std\n[sampler]\nn_events = 1e3x\n").find("sampler.n_events") != std::string::npos);
  CHECK(parse_error(std::string(kMinimal) + "x0 = 1\n").find("x0") != std::string::npos);
  CHECK(parse_error("[model]\nname = hmc\n[target]\nname = gaussian_std\n").find("model") != std::string::npos);
}

TEST_CASE("cmd_run is reproducible and reports invalid configs with exit 2") {
  const fs::path dir = scratch_dir("run");
  std::ofstream(dir / "ok.ini") << kMinimal;
  std::ofstream(dir / "bad.ini") << kMinimal << "alpha_plus = 0.5\n";
  std::ofstream(dir / "noname.ini") << "[model]\nname = zigzag\n[target]\ndim = 2\n";
  std::ostringstream err;
  REQUIRE(cli::cmd_run((dir / "ok.ini").string(), (dir / "a").string(), err) == cli::kExitOk);
  REQUIRE(cli::cmd_run((dir / "ok.ini").string(), (dir / "b").string(), err) == cli::kExitOk);
  CHECK(slurp(dir / "a" / "skeleton.csv") == slurp(dir / "b" / "skeleton.csv"));
  CHECK(slurp(dir / "a" / "summary.json") == slurp(dir / "b" / "summary.json"));
  CHECK(fs::exists(dir / "a" / "timing.json"));

  std::ostringstream msg;
  CHECK(cli::cmd_run((dir / "bad.ini").string(), std::nullopt, msg) == cli::kExitInvalid);
  CHECK(msg.str().find("alpha_plus") != std::string::npos);
  CHECK(cli::cmd_run((dir / "noname.ini").string(), std::nullopt, msg) == cli::kExitInvalid);
  CHECK(cli::cmd_run((dir / "missing.ini").string(), std::nullopt, msg) == cli::kExitInvalid);
}

TEST_CASE("cmd_run maps NonConvergence to exit 3") {
  const fs::path dir = scratch_dir("stuck");
  // A tiny fixed horizon at the mode exhausts a 10-evaluation cap before any event.
  std::ofstream(dir / "stuck.ini") << "[model]\nname = zigzag\n[target]\nname = gaussian_std\ndim = 1\n"
                                   << "[sampler]\nn_events = 10\nt_max0 = 0.000001\nt_max_floor = 0.000001\n"
                                   << "adapt = false\nmax_evals_without_event = 10\n";
  std::ostringstream err;
  CHECK(cli::cmd_run((dir / "stuck.ini").string(), (dir / "out").string(), err) == cli::kExitNonConvergence);
}

TEST_CASE("experiment plans") {
  cli::ExperimentOptions opt;
  opt.name = "fig4";
  const auto fig4 = cli::plan_experiment(opt);
  CHECK(fig4.size() == 4 * 6 * 3);
  opt.replicates = 2;
  CHECK(cli::plan_experiment(opt).size() == 4 * 6 * 2);
  opt.paper_scale = true;
  opt.replicates.reset();
  const auto full = cli::plan_experiment(opt);
  CHECK(full.size() == 4 * 6 * 10);
  CHECK(full[0].sampler.n_events == 1000000);

  cli::ExperimentOptions t1;
  t1.name = "table1";
  t1.replicates = 1;
  const auto table1 = cli::plan_experiment(t1);
  CHECK(table1.size() == 9);
  CHECK(table1[0].sampler.n_segments == 0);
  CHECK(table1[0].target.name == "banana");
  CHECK(table1[0].target.dim == 30);

  cli::ExperimentOptions f2;
  f2.name = "fig2";
  f2.replicates = 1;
  for (const auto& r : cli::plan_experiment(f2)) {
    CHECK(r.sampler.adapt);
    CHECK(r.sampler.alpha_plus == 1.1);
    CHECK(r.sampler.alpha_minus == 1.1);
  }

  for (const auto& name : cli::experiment_names()) {
    cli::ExperimentOptions o;
    o.name = name;
    CHECK_FALSE(cli::plan_experiment(o).empty());
  }
  cli::ExperimentOptions unknown;
  unknown.name = "fig3";
  CHECK_THROWS_AS((void)cli::plan_experiment(unknown), InvalidArgument);
  std::ostringstream err;
  CHECK(cli::cmd_experiment(unknown, err) == cli::kExitInvalid);
}

TEST_CASE("experiment output is byte-identical across reruns and thread counts") {
  const fs::path dir = scratch_dir("exp");
  cli::ExperimentOptions opt;
  opt.name = "table1";
  opt.events = 200;
  opt.replicates = 2;
  opt.dim = 5;
  opt.seed = 11;
  std::ostringstream err;
  opt.out_dir = (dir / "a").string();
  opt.threads = 1;
  REQUIRE(cli::cmd_experiment(opt, err) == cli::kExitOk);
  opt.out_dir = (dir / "b").string();
  opt.threads = 4;
  REQUIRE(cli::cmd_experiment(opt, err) == cli::kExitOk);
  const std::string a = slurp(dir / "a" / "table1.csv");
  CHECK(a == slurp(dir / "b" / "table1.csv"));
  CHECK(std::count(a.begin(), a.end(), '\n') == 1 + 9 * 2);
  CHECK(fs::exists(dir / "a" / "table1_summary.csv"));
  std::string header;
  std::getline(std::ifstream(dir / "a" / "table1_summary.csv"), header);
  CHECK(header == "N,signed,time,mean_tmax,thinning_ar,n_rejections,n_horizon_hits");
}
