#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "pdmp/cli.hpp"
#include "pdmp/path_stats.hpp"
#include "pdmp/random.hpp"
#include "pdmp/skeleton_io.hpp"

namespace pdmp::cli {

namespace {

struct Scale {
  std::uint64_t events;
  int replicates;
};

// Desk defaults keep every sweep within minutes; paper scale restores the
// published sizes.
Scale scale_for(const ExperimentOptions& o, int paper_replicates) {
  Scale s{o.paper_scale ? 1'000'000ULL : 100'000ULL, o.paper_scale ? paper_replicates : 3};
  if (o.events) s.events = *o.events;
  if (o.replicates) s.replicates = *o.replicates;
  if (s.events < 1) throw InvalidArgument("--events must be >= 1");
  if (s.replicates < 1) throw InvalidArgument("--replicates must be >= 1");
  return s;
}

struct Cell {
  std::string model;
  ModelOptions model_options;
  TargetSpec target;
  SamplerConfig sampler;
  double t_max_label = 0.0;
};

SamplerConfig adaptive(int n_segments, Strategy strategy) {
  SamplerConfig c;
  c.n_segments = n_segments;
  c.strategy = strategy;
  c.adapt = true;
  c.t_max0 = 1.0;
  c.alpha_plus = 1.01;
  c.alpha_minus = 1.04;
  return c;
}

std::vector<Strategy> strategies_for(const ExperimentOptions& o, std::vector<Strategy> defaults) {
  if (!o.strategy) return defaults;
  const Strategy chosen = parse_strategy(*o.strategy);
  if (std::find(defaults.begin(), defaults.end(), chosen) == defaults.end()) {
    throw InvalidArgument("--strategy '" + *o.strategy + "' is not part of experiment " + o.name);
  }
  return {chosen};
}

std::vector<Cell> zigzag_tmax_cells(const ExperimentOptions& o, bool adapt) {
  const int dim = o.dim.value_or(30);
  std::vector<Cell> cells;
  for (double t : {0.01, 0.031622776601683794, 0.1, 0.31622776601683794, 1.0, 3.1622776601683795, 10.0}) {
    Cell c;
    c.model = "zigzag";
    c.target = {"gaussian_std", dim};
    c.sampler.n_segments = 0;
    c.sampler.strategy = Strategy::Brent;
    c.sampler.t_max0 = t;
    c.sampler.adapt = adapt;
    c.sampler.alpha_plus = 1.1;
    c.sampler.alpha_minus = 1.1;
    c.t_max_label = t;
    cells.push_back(c);
  }
  return cells;
}

std::vector<Cell> mixture_bias_cells(const ExperimentOptions& o) {
  const auto grid_strategies = strategies_for(o, {Strategy::Signed, Strategy::Plain});
  std::vector<Cell> cells;
  for (double t : {0.0, 0.01, 0.1, 1.0}) {
    for (int n : {0, 5, 10, 20, 50, 100}) {
      const std::vector<Strategy> list = n == 0 ? std::vector<Strategy>{Strategy::Brent}
                                                : std::vector<Strategy>{grid_strategies.front()};
      for (Strategy st : list) {
        Cell c;
        c.model = "bps";
        c.model_options.refresh_rate = 0.1;
        c.target = {"two_scale_mixture", 2};
        c.sampler = adaptive(n, st);
        if (t > 0.0) {
          c.sampler.adapt = false;
          c.sampler.t_max0 = t;
        }
        c.t_max_label = t;
        cells.push_back(c);
      }
    }
  }
  return cells;
}

std::vector<Cell> error_cells(const ExperimentOptions& o, const std::string& model, std::vector<Strategy> strategies,
                              const std::vector<int>& grid, double refresh, TargetSpec target) {
  const auto chosen = strategies_for(o, std::move(strategies));
  std::vector<Cell> cells;
  auto add = [&](int n, Strategy st) {
    Cell c;
    c.model = model;
    c.model_options.refresh_rate = refresh;
    c.target = target;
    c.sampler = adaptive(n, st);
    cells.push_back(c);
  };
  add(0, Strategy::Brent);
  for (int n : grid) {
    for (Strategy st : chosen) add(n, st);
  }
  return cells;
}

void require_no_dim(const ExperimentOptions& o) {
  if (o.dim) throw InvalidArgument("--dim is not supported by experiment " + o.name + " (fixed 2-d target)");
}

struct Outcome {
  RunStats stats;
  Vector mean;
  Vector second_moment;
};

std::string join(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += fields[i];
  }
  return line + "\n";
}

std::string fmt(double v) { return format_double(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }

double avg(const Vector& v) { return v.size() ? v.mean() : 0.0; }

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"fig1", "fig2", "fig4", "time_fig5", "fig5", "fig6", "table1"};
  return names;
}

std::vector<RunSpec> plan_experiment(const ExperimentOptions& o) {
  std::vector<Cell> cells;
  int paper_replicates = 10;
  if (o.name == "fig1" || o.name == "fig2") {
    if (o.strategy) throw InvalidArgument("--strategy is not supported by experiment " + o.name);
    if (o.dim && *o.dim < 1) throw InvalidArgument("--dim must be >= 1");
    cells = zigzag_tmax_cells(o, o.name == "fig2");
  } else if (o.name == "fig4" || o.name == "time_fig5") {
    require_no_dim(o);
    cells = mixture_bias_cells(o);
  } else if (o.name == "fig5") {
    require_no_dim(o);
    paper_replicates = 20;
    cells = error_cells(o, "zigzag", {Strategy::Plain, Strategy::Vectorized, Strategy::VectorizedSigned},
                        {5, 10, 20, 50}, 0.0, {"local_mixture_20", 2});
  } else if (o.name == "fig6") {
    require_no_dim(o);
    paper_replicates = 20;
    cells = error_cells(o, "boomerang", {Strategy::Plain, Strategy::Signed}, {5, 10, 20, 50}, 0.1,
                        {"local_mixture_20", 2});
  } else if (o.name == "table1") {
    if (o.dim && *o.dim < 2) throw InvalidArgument("--dim must be >= 2 for table1");
    paper_replicates = 20;
    cells = error_cells(o, "fec", {Strategy::Plain, Strategy::Signed}, {3, 5, 10, 20}, 0.0,
                        {"banana", o.dim.value_or(30)});
  } else {
    throw InvalidArgument("unknown experiment '" + o.name + "'");
  }

  const Scale scale = scale_for(o, paper_replicates);
  std::vector<RunSpec> plan;
  plan.reserve(cells.size() * static_cast<std::size_t>(scale.replicates));
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    for (int r = 0; r < scale.replicates; ++r) {
      RunSpec spec;
      spec.cell = static_cast<int>(ci);
      spec.replicate = r;
      spec.model = cells[ci].model;
      spec.model_options = cells[ci].model_options;
      spec.target = cells[ci].target;
      spec.sampler = cells[ci].sampler;
      spec.sampler.n_events = scale.events;
      spec.sampler.keep_skeleton = true;
      spec.sampler.seed = derive_seed(derive_seed(o.seed, ci), static_cast<std::uint64_t>(r));
      spec.t_max_label = cells[ci].t_max_label;
      plan.push_back(std::move(spec));
    }
  }
  return plan;
}

int cmd_experiment(const ExperimentOptions& options, std::ostream& err) {
  std::vector<RunSpec> plan;
  try {
    plan = plan_experiment(options);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  std::vector<std::optional<Outcome>> outcomes(plan.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::string first_error;
  bool non_convergence = false;

  auto worker = [&] {
    for (std::size_t i = next++; i < plan.size(); i = next++) {
      const RunSpec& spec = plan[i];
      try {
        const auto model = build_model(spec.model, spec.model_options);
        const TargetPotential target = build_target(spec.model, spec.target);
        RunResult r = run(*model, target, spec.sampler);
        outcomes[i] = Outcome{r.stats, path_mean(r.skeleton, *model), path_second_moment(r.skeleton, *model)};
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (first_error.empty()) {
          first_error = "cell " + std::to_string(spec.cell) + " replicate " + std::to_string(spec.replicate) + ": " +
                        e.what();
          non_convergence = dynamic_cast<const NonConvergence*>(&e) != nullptr;
        }
        next = plan.size();
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(options.threads, static_cast<int>(plan.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (!first_error.empty()) {
    err << "error: " << first_error << '\n';
    return non_convergence ? kExitNonConvergence : kExitFailure;
  }

  try {
    const std::filesystem::path dir(options.out_dir);
    std::filesystem::create_directories(dir);
    std::ofstream csv(dir / (options.name + ".csv"), std::ios::binary);
    std::ofstream timing(dir / (options.name + "_timing.csv"), std::ios::binary);
    if (!csv || !timing) throw InvalidArgument("cannot write into '" + options.out_dir + "'");

    csv << join({"experiment", "cell", "replicate", "model", "refresh_rate", "target", "dim", "strategy", "n_segments",
                 "t_max", "t_max0", "adapt", "alpha_plus", "alpha_minus", "n_events", "seed", "n_opt_evals",
                 "n_thinning_evals", "total_rate_evals", "n_rejections", "n_horizon_hits", "n_bound_errors",
                 "bound_error_excess_mean", "n_grad_evals", "n_hvp_evals", "thinning_ar", "final_tmax", "mean_tmax",
                 "mean_0", "mean_1", "mean_avg", "second_moment_0", "second_moment_1", "second_moment_avg"});
    timing << "cell,replicate,wall_time\n";
    for (std::size_t i = 0; i < plan.size(); ++i) {
      const RunSpec& p = plan[i];
      const Outcome& o = *outcomes[i];
      const RunStats& s = o.stats;
      const bool has_second = o.mean.size() > 1;
      csv << join({options.name, fmt(p.cell), fmt(p.replicate), p.model, fmt(p.model_options.refresh_rate),
                   p.target.name, fmt(p.target.dim), std::string(to_string(p.sampler.effective_strategy())),
                   fmt(p.sampler.n_segments), fmt(p.t_max_label), fmt(p.sampler.t_max0), p.sampler.adapt ? "1" : "0",
                   fmt(p.sampler.alpha_plus), fmt(p.sampler.alpha_minus), fmt(p.sampler.n_events),
                   fmt(p.sampler.seed), fmt(s.n_opt_evals), fmt(s.n_thinning_evals), fmt(s.total_rate_evals()),
                   fmt(s.n_rejections), fmt(s.n_horizon_hits), fmt(s.n_bound_errors), fmt(s.mean_bound_excess()),
                   fmt(s.n_grad_evals), fmt(s.n_hvp_evals), fmt(s.thinning_acceptance()), fmt(s.final_tmax),
                   fmt(s.mean_tmax), fmt(o.mean[0]), has_second ? fmt(o.mean[1]) : "", fmt(avg(o.mean)),
                   fmt(o.second_moment[0]), has_second ? fmt(o.second_moment[1]) : "", fmt(avg(o.second_moment))});
      timing << p.cell << ',' << p.replicate << ',' << format_double(s.wall_time) << '\n';
    }

    if (options.name == "table1") {
      // Replicate means per cell, in the published column layout.
      std::ofstream summary(dir / "table1_summary.csv", std::ios::binary);
      summary << "N,signed,time,mean_tmax,thinning_ar,n_rejections,n_horizon_hits\n";
      std::map<int, std::vector<std::size_t>> by_cell;
      for (std::size_t i = 0; i < plan.size(); ++i) by_cell[plan[i].cell].push_back(i);
      for (const auto& [cell, idx] : by_cell) {
        double time = 0, tmax = 0, ar = 0, rej = 0, hits = 0;
        for (std::size_t i : idx) {
          const RunStats& s = outcomes[i]->stats;
          time += s.wall_time;
          tmax += s.mean_tmax;
          ar += s.thinning_acceptance();
          rej += static_cast<double>(s.n_rejections);
          hits += static_cast<double>(s.n_horizon_hits);
        }
        const double n = static_cast<double>(idx.size());
        const RunSpec& p = plan[idx.front()];
        summary << join({fmt(p.sampler.n_segments), p.sampler.effective_strategy() == Strategy::Signed ? "1" : "0",
                         fmt(time / n), fmt(tmax / n), fmt(ar / n), fmt(rej / n), fmt(hits / n)});
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace pdmp::cli
