#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <thread>

#include "pdmp/cli.hpp"
#include "pdmp/path_stats.hpp"
#include "pdmp/skeleton_io.hpp"

namespace pdmp::cli {

namespace {

using Json = nlohmann::ordered_json;

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

Json config_json(const RunConfig& cfg) {
  const SamplerConfig& s = cfg.sampler;
  Json j;
  j["model"] = {{"name", cfg.model},
                {"refresh_rate", cfg.model_options.refresh_rate},
                {"fec_rotation_prob", cfg.model_options.kernel.fec_rotation_prob},
                {"fec_rotation_max_angle", cfg.model_options.kernel.fec_rotation_max_angle}};
  j["target"] = {{"name", cfg.target.name}, {"dim", cfg.target.dim}, {"sigma", cfg.target.sigma},
                 {"seed", cfg.target.seed}};
  j["sampler"] = {{"n_events", s.n_events},
                  {"t_max0", s.t_max0},
                  {"n_segments", s.n_segments},
                  {"alpha_plus", s.alpha_plus},
                  {"alpha_minus", s.alpha_minus},
                  {"adapt", s.adapt},
                  {"strategy", std::string(to_string(s.effective_strategy()))},
                  {"seed", s.seed},
                  {"t_max_floor", s.t_max_floor},
                  {"t_max_cap", s.t_max_cap}};
  if (cfg.x0) j["sampler"]["x0"] = to_std(*cfg.x0);
  return j;
}

Json stats_json(const RunStats& st) {
  return {{"n_events", st.n_events},
          {"n_opt_evals", st.n_opt_evals},
          {"n_thinning_evals", st.n_thinning_evals},
          {"total_rate_evals", st.total_rate_evals()},
          {"n_rejections", st.n_rejections},
          {"n_horizon_hits", st.n_horizon_hits},
          {"n_bound_errors", st.n_bound_errors},
          {"bound_error_excess_sum", st.bound_error_excess_sum},
          {"n_grad_evals", st.n_grad_evals},
          {"n_hvp_evals", st.n_hvp_evals},
          {"thinning_acceptance", st.thinning_acceptance()},
          {"final_tmax", st.final_tmax},
          {"mean_tmax", st.mean_tmax}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open '" + path.string() + "' for writing");
  out << text;
}

}  // namespace

std::shared_ptr<const PdmpModel> build_model(const std::string& name, const ModelOptions& options) {
  try {
    return make_model(name, options);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(std::string("model: ") + e.what());
  }
}

TargetPotential build_target(const std::string& model, const TargetSpec& spec) {
  TargetPotential target = make_target(spec);
  return model == "boomerang" ? boomerang_adjusted(target) : target;
}

int cmd_run(const std::string& config_path, const std::optional<std::string>& out_override, std::ostream& err) {
  RunConfig cfg;
  std::shared_ptr<const PdmpModel> model;
  std::optional<TargetPotential> target;
  try {
    cfg = load_run_config(config_path);
    if (out_override) cfg.out_dir = *out_override;
    model = build_model(cfg.model, cfg.model_options);
    target.emplace(build_target(cfg.model, cfg.target));
    (void)make_rate_bundle(*model, cfg.sampler.effective_strategy(), cfg.target.dim);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    const RunResult result = run(*model, *target, cfg.sampler, cfg.x0);
    const std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    write_skeleton_csv((dir / "skeleton.csv").string(), result.skeleton);

    Json summary;
    summary["config"] = config_json(cfg);
    summary["stats"] = stats_json(result.stats);
    summary["final_time"] = result.skeleton.final_time;
    if (model->flow_kind() != FlowKind::custom && result.skeleton.final_time > 0.0) {
      summary["mean"] = to_std(path_mean(result.skeleton, *model));
      summary["second_moment"] = to_std(path_second_moment(result.skeleton, *model));
    }
    write_text(dir / "summary.json", summary.dump(2) + "\n");
    write_text(dir / "timing.json", Json{{"wall_time", result.stats.wall_time}}.dump(2) + "\n");
  } catch (const NonConvergence& e) {
    err << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int default_threads() {
  if (const char* env = std::getenv("PDMP_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

}  // namespace pdmp::cli
