#include "pdmp/targets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "pdmp/random.hpp"

namespace pdmp {

namespace {

void check_dim(const Vector& x, int dim, const char* who) {
  if (x.size() != dim) throw InvalidArgument(std::string(who) + ": dimension mismatch");
}

struct Mixture {
  std::vector<Vector> means;
  std::vector<double> inv_var;     // 1 / s_k^2
  std::vector<double> log_weight;  // log w_k - d log s_k
  int dim = 0;

  // Responsibilities r_k and per-component scaled offsets a_k = (x - mu_k) / s_k^2.
  // Returns log sum_k w_k N(x; mu_k, s_k^2) up to the shared constant.
  double responsibilities(const Vector& x, std::vector<double>& r, std::vector<Vector>* a) const {
    const std::size_t n = means.size();
    r.resize(n);
    if (a) a->resize(n);
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      const Vector diff = x - means[k];
      r[k] = log_weight[k] - 0.5 * diff.squaredNorm() * inv_var[k];
      top = std::max(top, r[k]);
      if (a) (*a)[k] = diff * inv_var[k];
    }
    double total = 0.0;
    for (double& l : r) {
      l = std::exp(l - top);
      total += l;
    }
    for (double& l : r) l /= total;
    return top + std::log(total);
  }

  [[nodiscard]] Vector grad(const Vector& x) const {
    std::vector<double> r;
    std::vector<Vector> a;
    responsibilities(x, r, &a);
    Vector g = Vector::Zero(dim);
    for (std::size_t k = 0; k < r.size(); ++k) g += r[k] * a[k];
    return g;
  }

  // H w = sum_k r_k w / s_k^2 - sum_k r_k a_k (a_k . w) + m (m . w), m = sum_k r_k a_k.
  [[nodiscard]] Vector hvp(const Vector& x, const Vector& w) const {
    std::vector<double> r;
    std::vector<Vector> a;
    responsibilities(x, r, &a);
    Vector m = Vector::Zero(dim);
    Vector out = Vector::Zero(dim);
    for (std::size_t k = 0; k < r.size(); ++k) {
      m += r[k] * a[k];
      out += r[k] * (inv_var[k] * w - a[k] * a[k].dot(w));
    }
    out += m * m.dot(w);
    return out;
  }

  // Column-wise form of grad/hvp for a d x n batch.
  void batch(const Matrix& x, const Matrix& w, Matrix& g, Matrix* hw) const {
    const auto n = x.cols();
    const auto n_comp = static_cast<Eigen::Index>(means.size());
    Matrix logits(n_comp, n);
    for (Eigen::Index k = 0; k < n_comp; ++k) {
      logits.row(k) = (log_weight[k] - 0.5 * inv_var[k] * (x.colwise() - means[k]).colwise().squaredNorm().array())
                          .matrix();
    }
    const Eigen::RowVectorXd top = logits.colwise().maxCoeff();
    Matrix r = (logits.rowwise() - top).array().exp().matrix();
    const Eigen::RowVectorXd inv_total = r.colwise().sum().cwiseInverse();
    r = r * inv_total.asDiagonal();

    g.setZero(x.rows(), n);
    if (hw) hw->setZero(x.rows(), n);
    Matrix a(x.rows(), n);
    for (Eigen::Index k = 0; k < n_comp; ++k) {
      a = (x.colwise() - means[k]) * inv_var[k];
      const auto rk = r.row(k).asDiagonal();
      g.noalias() += a * rk;
      if (hw) {
        const Eigen::RowVectorXd aw = a.cwiseProduct(w).colwise().sum();
        hw->noalias() += (inv_var[k] * w - a * aw.asDiagonal()) * rk;
      }
    }
    if (hw) {
      const Eigen::RowVectorXd mw = g.cwiseProduct(w).colwise().sum();
      hw->noalias() += g * mw.asDiagonal();
    }
  }

  [[nodiscard]] double value(const Vector& x) const {
    std::vector<double> r;
    return -responsibilities(x, r, nullptr);
  }
};

}  // namespace

TargetPotential gaussian_std(int dim) {
  if (dim < 1) throw InvalidArgument("gaussian_std: dim must be >= 1");
  return TargetPotential(
             "gaussian_std", dim,
             [dim](const Vector& x) {
               check_dim(x, dim, "gaussian_std");
               return Vector(x);
             },
             [](const Vector&, const Vector& w) { return Vector(w); },
             [](const Vector& x) { return 0.5 * x.squaredNorm(); })
      .with_batch([](const Matrix& x, const Matrix& w, Matrix& g, Matrix* hw) {
        g = x;
        if (hw) *hw = w;
      });
}

TargetPotential gaussian_diag(std::vector<double> precisions) {
  if (precisions.empty()) throw InvalidArgument("gaussian_diag: need at least one precision");
  for (double p : precisions) {
    if (!(p > 0.0) || !std::isfinite(p)) throw InvalidArgument("gaussian_diag: precisions must be finite and > 0");
  }
  const int dim = static_cast<int>(precisions.size());
  const Vector prec = Eigen::Map<const Vector>(precisions.data(), dim);
  return TargetPotential(
      "gaussian_diag", dim,
      [prec, dim](const Vector& x) {
        check_dim(x, dim, "gaussian_diag");
        return Vector(prec.cwiseProduct(x));
      },
      [prec](const Vector&, const Vector& w) { return Vector(prec.cwiseProduct(w)); },
      [prec](const Vector& x) { return 0.5 * prec.dot(x.cwiseProduct(x)); });
}

TargetPotential gaussian_mixture(std::string name, std::vector<MixtureComponent> components) {
  if (components.empty()) throw InvalidArgument("gaussian_mixture: need at least one component");
  auto mix = std::make_shared<Mixture>();
  mix->dim = static_cast<int>(components.front().mean.size());
  if (mix->dim < 1) throw InvalidArgument("gaussian_mixture: component means must be non-empty");
  double total_weight = 0.0;
  for (const auto& c : components) {
    if (c.mean.size() != mix->dim) throw InvalidArgument("gaussian_mixture: component dimensions differ");
    if (!c.mean.allFinite()) throw InvalidArgument("gaussian_mixture: means must be finite");
    if (!(c.scale > 0.0) || !std::isfinite(c.scale)) throw InvalidArgument("gaussian_mixture: scales must be > 0");
    if (!(c.weight > 0.0) || !std::isfinite(c.weight)) throw InvalidArgument("gaussian_mixture: weights must be > 0");
    total_weight += c.weight;
  }
  for (const auto& c : components) {
    mix->means.push_back(c.mean);
    mix->inv_var.push_back(1.0 / (c.scale * c.scale));
    mix->log_weight.push_back(std::log(c.weight / total_weight) - mix->dim * std::log(c.scale));
  }
  const int dim = mix->dim;
  return TargetPotential(
             std::move(name), dim,
             [mix](const Vector& x) {
               check_dim(x, mix->dim, "gaussian_mixture");
               return mix->grad(x);
             },
             [mix](const Vector& x, const Vector& w) { return mix->hvp(x, w); },
             [mix](const Vector& x) { return mix->value(x); })
      .with_batch([mix](const Matrix& x, const Matrix& w, Matrix& g, Matrix* hw) { mix->batch(x, w, g, hw); });
}

TargetPotential two_scale_mixture(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("two_scale_mixture: sigma must be > 0");
  return gaussian_mixture("two_scale_mixture", {{Vector::Zero(2), 1.0, 0.5}, {Vector::Ones(2), sigma, 0.5}});
}

std::vector<Vector> local_mixture_means(std::uint64_t seed, int count) {
  if (count < 1) throw InvalidArgument("local_mixture_means: count must be >= 1");
  RandomStream rng(seed);
  std::vector<Vector> means;
  means.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) means.push_back(3.0 * rng.normal_vector(2));
  return means;
}

TargetPotential local_mixture_20(std::uint64_t seed) {
  std::vector<MixtureComponent> components;
  for (auto& mu : local_mixture_means(seed, 20)) components.push_back({std::move(mu), 1.0, 1.0});
  return gaussian_mixture("local_mixture_20", std::move(components));
}

TargetPotential banana(int dim) {
  if (dim < 2) throw InvalidArgument("banana: dim must be >= 2");
  auto grad = [dim](const Vector& x) {
    check_dim(x, dim, "banana");
    const double r = x[1] - x[0] * x[0] + 1.0;
    Vector g = 2.0 * x;
    g[0] = x[0] - 4.0 * x[0] * r;
    g[1] = 2.0 * r;
    return g;
  };
  auto hvp = [](const Vector& x, const Vector& w) {
    const double r = x[1] - x[0] * x[0] + 1.0;
    Vector out = 2.0 * w;
    out[0] = (1.0 - 4.0 * r + 8.0 * x[0] * x[0]) * w[0] - 4.0 * x[0] * w[1];
    out[1] = -4.0 * x[0] * w[0] + 2.0 * w[1];
    return out;
  };
  auto value = [](const Vector& x) {
    const double r = x[1] - x[0] * x[0] + 1.0;
    return 0.5 * x[0] * x[0] + r * r + x.tail(x.size() - 2).squaredNorm();
  };
  auto batch = [](const Matrix& x, const Matrix& w, Matrix& g, Matrix* hw) {
    const Eigen::ArrayXd x0 = x.row(0).transpose().array();
    const Eigen::ArrayXd r = x.row(1).transpose().array() - x0.square() + 1.0;
    g = 2.0 * x;
    g.row(0) = (x0 - 4.0 * x0 * r).matrix().transpose();
    g.row(1) = (2.0 * r).matrix().transpose();
    if (hw) {
      const Eigen::ArrayXd w0 = w.row(0).transpose().array();
      const Eigen::ArrayXd w1 = w.row(1).transpose().array();
      *hw = 2.0 * w;
      hw->row(0) = ((1.0 - 4.0 * r + 8.0 * x0.square()) * w0 - 4.0 * x0 * w1).matrix().transpose();
      hw->row(1) = (-4.0 * x0 * w0 + 2.0 * w1).matrix().transpose();
    }
  };
  return TargetPotential("banana", dim, grad, hvp, value).with_batch(batch);
}

void TargetSpec::validate() const {
  if (name.empty()) throw InvalidArgument("target.name is required");
  if (name == "gaussian_std" || name == "banana") {
    const int min_dim = name == "banana" ? 2 : 1;
    if (dim < min_dim) {
      throw InvalidArgument("target.dim must be >= " + std::to_string(min_dim) + " for " + name + " (got " +
                            std::to_string(dim) + ")");
    }
  } else if (name == "two_scale_mixture" || name == "local_mixture_20") {
    if (dim != 2) throw InvalidArgument("target.dim must be 2 for " + name + " (got " + std::to_string(dim) + ")");
    if (name == "two_scale_mixture" && (!(sigma > 0.0) || !std::isfinite(sigma))) {
      throw InvalidArgument("target.sigma must be > 0");
    }
  } else {
    throw InvalidArgument("target.name '" + name + "' is unknown");
  }
}

TargetPotential make_target(const TargetSpec& spec) {
  spec.validate();
  if (spec.name == "gaussian_std") return gaussian_std(spec.dim);
  if (spec.name == "two_scale_mixture") return two_scale_mixture(spec.sigma);
  if (spec.name == "local_mixture_20") return local_mixture_20(spec.seed);
  return banana(spec.dim);
}

}  // namespace pdmp
