#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <string>

#include "pdmp/cli.hpp"

namespace pdmp::cli {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"model", {"name", "refresh_rate", "fec_rotation_prob", "fec_rotation_max_angle"}},
      {"target", {"name", "dim", "sigma", "seed"}},
      {"sampler",
       {"n_events", "t_max0", "n_segments", "alpha_plus", "alpha_minus", "adapt", "strategy", "seed", "t_max_floor",
        "t_max_cap", "max_evals_without_event", "x0", "allow_finite_differences"}},
      {"output", {"dir"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& field, const std::string& text, const char* expected) {
  throw InvalidArgument(field + ": expected " + expected + ", got '" + text + "'");
}

double to_double(const std::string& field, const std::string& raw) {
  const std::string text = trim(raw);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) bad_value(field, text, "a number");
  return value;
}

template <class Int>
Int to_integer(const std::string& field, const std::string& raw) {
  const std::string text = trim(raw);
  Int value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    bad_value(field, text, "an integer");
  }
  return value;
}

bool to_bool(const std::string& field, const std::string& raw) {
  const std::string text = trim(raw);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  bad_value(field, text, "true or false");
}

Vector to_vector(const std::string& field, const std::string& raw) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= raw.size()) {
    auto end = raw.find(',', start);
    if (end == std::string::npos) end = raw.size();
    values.push_back(to_double(field, raw.substr(start, end - start)));
    start = end + 1;
  }
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

RunConfig parse_run_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InvalidArgument(std::string("config: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }

  for (const auto& [section, body] : tree) {
    const auto it = schema().find(section);
    if (it == schema().end()) throw InvalidArgument("config: unknown section [" + section + "]");
    if (!body.data().empty()) throw InvalidArgument("config: key '" + section + "' outside a section");
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw InvalidArgument(section + "." + key + ": unknown key");
    }
  }
  auto get = [&tree](const std::string& path) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'))) return *v;
    return std::nullopt;
  };

  RunConfig cfg;
  const auto model = get("model.name");
  if (!model || trim(*model).empty()) throw InvalidArgument("model.name is required");
  cfg.model = trim(*model);
  if (cfg.model != "zigzag" && cfg.model != "bps" && cfg.model != "boomerang" && cfg.model != "fec") {
    throw InvalidArgument("model.name: unknown model '" + cfg.model + "' (zigzag, bps, boomerang, fec)");
  }
  if (auto v = get("model.refresh_rate")) cfg.model_options.refresh_rate = to_double("model.refresh_rate", *v);
  if (auto v = get("model.fec_rotation_prob")) {
    cfg.model_options.kernel.fec_rotation_prob = to_double("model.fec_rotation_prob", *v);
  }
  if (auto v = get("model.fec_rotation_max_angle")) {
    cfg.model_options.kernel.fec_rotation_max_angle = to_double("model.fec_rotation_max_angle", *v);
  }

  const auto target = get("target.name");
  if (!target || trim(*target).empty()) throw InvalidArgument("target.name is required");
  cfg.target.name = trim(*target);
  if (auto v = get("target.dim")) cfg.target.dim = to_integer<int>("target.dim", *v);
  if (auto v = get("target.sigma")) cfg.target.sigma = to_double("target.sigma", *v);
  if (auto v = get("target.seed")) cfg.target.seed = to_integer<std::uint64_t>("target.seed", *v);

  SamplerConfig& s = cfg.sampler;
  if (auto v = get("sampler.n_events")) s.n_events = to_integer<std::uint64_t>("sampler.n_events", *v);
  if (auto v = get("sampler.t_max0")) s.t_max0 = to_double("sampler.t_max0", *v);
  if (auto v = get("sampler.n_segments")) s.n_segments = to_integer<int>("sampler.n_segments", *v);
  if (auto v = get("sampler.alpha_plus")) s.alpha_plus = to_double("sampler.alpha_plus", *v);
  if (auto v = get("sampler.alpha_minus")) s.alpha_minus = to_double("sampler.alpha_minus", *v);
  if (auto v = get("sampler.adapt")) s.adapt = to_bool("sampler.adapt", *v);
  if (auto v = get("sampler.strategy")) {
    try {
      s.strategy = parse_strategy(trim(*v));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(std::string("sampler.strategy: ") + e.what());
    }
  }
  if (auto v = get("sampler.seed")) s.seed = to_integer<std::uint64_t>("sampler.seed", *v);
  if (auto v = get("sampler.t_max_floor")) s.t_max_floor = to_double("sampler.t_max_floor", *v);
  if (auto v = get("sampler.t_max_cap")) s.t_max_cap = to_double("sampler.t_max_cap", *v);
  if (auto v = get("sampler.max_evals_without_event")) {
    s.max_evals_without_event = to_integer<std::uint64_t>("sampler.max_evals_without_event", *v);
  }
  if (auto v = get("sampler.allow_finite_differences")) {
    s.derivatives.allow_finite_differences = to_bool("sampler.allow_finite_differences", *v);
  }
  if (auto v = get("sampler.x0")) cfg.x0 = to_vector("sampler.x0", *v);
  if (auto v = get("output.dir")) cfg.out_dir = trim(*v);

  // Field-level checks up front so that errors name the config key.
  try {
    s.validate();
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(std::string("sampler.") + e.what());
  }
  cfg.target.validate();
  if (!(cfg.model_options.refresh_rate >= 0.0)) throw InvalidArgument("model.refresh_rate must be >= 0");
  try {
    cfg.model_options.kernel.validate();
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(std::string("model.") + e.what());
  }
  if (cfg.x0 && cfg.x0->size() != cfg.target.dim) {
    throw InvalidArgument("sampler.x0 has " + std::to_string(cfg.x0->size()) + " entries, target.dim is " +
                          std::to_string(cfg.target.dim));
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config '" + path + "'");
  return parse_run_config(in);
}

}  // namespace pdmp::cli
