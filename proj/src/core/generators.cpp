#include "core/generators.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "core/errors.hpp"

namespace sptd {

namespace {

class MarketGenerator final : public Generator {
 public:
  MarketGenerator() : Generator("market") {}
  double value(const Eigen::VectorXd&) const override { return 1.0; }
  Eigen::VectorXd log_gradient(const Eigen::VectorXd& x) const override {
    return Eigen::VectorXd::Zero(x.size());
  }
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const override {
    return Eigen::MatrixXd::Zero(x.size(), x.size());
  }
};

class GeometricMeanGenerator final : public Generator {
 public:
  GeometricMeanGenerator() : Generator("geom") {}
  double value(const Eigen::VectorXd& x) const override {
    return std::exp(x.array().log().sum() / static_cast<double>(x.size()));
  }
  Eigen::VectorXd log_gradient(const Eigen::VectorXd& x) const override {
    return x.cwiseInverse() / static_cast<double>(x.size());
  }
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const override {
    const double n = static_cast<double>(x.size());
    const double s = value(x);
    const Eigen::VectorXd inv = x.cwiseInverse();
    Eigen::MatrixXd h = (s / (n * n)) * (inv * inv.transpose());
    h.diagonal() -= (s / n) * inv.cwiseProduct(inv);
    return h;
  }
};

class EntropyGenerator final : public Generator {
 public:
  EntropyGenerator() : Generator("entropy") {}
  double value(const Eigen::VectorXd& x) const override {
    return -(x.array() * x.array().log()).sum();
  }
  Eigen::VectorXd log_gradient(const Eigen::VectorXd& x) const override {
    const double s = value(x);
    return -(x.array().log() + 1.0).matrix() / s;
  }
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const override {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(x.size(), x.size());
    h.diagonal() = -x.cwiseInverse();
    return h;
  }
};

class DiversityGenerator final : public Generator {
 public:
  explicit DiversityGenerator(double p)
      : Generator("diversity:p=" + format_param(p)), p_(p) {}
  double value(const Eigen::VectorXd& x) const override {
    return std::pow(x.array().pow(p_).sum(), 1.0 / p_);
  }
  Eigen::VectorXd log_gradient(const Eigen::VectorXd& x) const override {
    const double a = x.array().pow(p_).sum();
    return x.array().pow(p_ - 1.0).matrix() / a;
  }
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const override {
    const double a = x.array().pow(p_).sum();
    const Eigen::VectorXd xp1 = x.array().pow(p_ - 1.0).matrix();
    Eigen::MatrixXd h =
        (1.0 - p_) * std::pow(a, 1.0 / p_ - 2.0) * (xp1 * xp1.transpose());
    h.diagonal() -=
        (1.0 - p_) * std::pow(a, 1.0 / p_ - 1.0) * x.array().pow(p_ - 2.0).matrix();
    return h;
  }

  static std::string format_param(double p) {
    std::ostringstream out;
    out << p;
    return out.str();
  }

 private:
  double p_;
};

class ConstantWeightedGenerator final : public Generator {
 public:
  explicit ConstantWeightedGenerator(Eigen::VectorXd w)
      : Generator("constweight"), w_(std::move(w)) {}
  double value(const Eigen::VectorXd& x) const override {
    return std::exp((w_.array() * x.array().log()).sum());
  }
  Eigen::VectorXd log_gradient(const Eigen::VectorXd& x) const override {
    return w_.cwiseQuotient(x);
  }
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const override {
    const double s = value(x);
    const Eigen::VectorXd ratio = w_.cwiseQuotient(x);
    Eigen::MatrixXd h = s * (ratio * ratio.transpose());
    h.diagonal() -= s * w_.cwiseProduct(x.cwiseProduct(x).cwiseInverse());
    return h;
  }

 private:
  Eigen::VectorXd w_;
};

void require_interior(const Eigen::VectorXd& x, std::size_t k) {
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (!(x[i] >= kInteriorFloor))
      throw Error::domain("weight of stock " + std::to_string(i + 1) + " at time index " +
                          std::to_string(k) + " is below the interior floor");
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      throw Error::validation("cannot parse number '" + item + "'");
    }
    while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
    if (pos != item.size()) throw Error::validation("cannot parse number '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw Error::validation("empty number list");
  return out;
}

}  // namespace

GeneratorPtr make_market_generator() { return std::make_shared<MarketGenerator>(); }

GeneratorPtr make_geometric_mean_generator() {
  return std::make_shared<GeometricMeanGenerator>();
}

GeneratorPtr make_entropy_generator() { return std::make_shared<EntropyGenerator>(); }

GeneratorPtr make_diversity_generator(double p) {
  if (!(p > 0.0) || !(p < 1.0))
    throw Error::validation("diversity parameter must satisfy 0 < p < 1");
  return std::make_shared<DiversityGenerator>(p);
}

GeneratorPtr make_constant_weighted_generator(Eigen::VectorXd w) {
  if (w.size() < 2) throw Error::validation("constweight needs at least 2 weights");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0.0) || !std::isfinite(w[i]))
      throw Error::validation("constweight weights must lie in the open simplex");
    sum += w[i];
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw Error::validation("constweight weights must sum to 1, got " + std::to_string(sum));
  return std::make_shared<ConstantWeightedGenerator>(std::move(w));
}

GeneratorPtr parse_generator(const std::string& spec, int num_stocks) {
  if (num_stocks < 2) throw Error::validation("generator needs at least 2 stocks");
  if (spec == "market") return make_market_generator();
  if (spec == "geom") return make_geometric_mean_generator();
  if (spec == "entropy") return make_entropy_generator();
  if (spec.rfind("diversity:p=", 0) == 0) {
    const auto values = parse_number_list(spec.substr(12));
    if (values.size() != 1) throw Error::validation("diversity takes a single parameter p");
    return make_diversity_generator(values[0]);
  }
  if (spec.rfind("constweight:w=", 0) == 0) {
    const auto values = parse_number_list(spec.substr(14));
    if (static_cast<int>(values.size()) != num_stocks)
      throw Error::validation("constweight has " + std::to_string(values.size()) +
                              " weights for " + std::to_string(num_stocks) + " stocks");
    return make_constant_weighted_generator(
        Eigen::Map<const Eigen::VectorXd>(values.data(), num_stocks));
  }
  throw Error::validation("unknown generator '" + spec + "'");
}

double generation_condition_sup(const Generator& g, int num_stocks, int samples,
                                std::uint64_t seed) {
  if (num_stocks < 2) throw Error::validation("generator needs at least 2 stocks");
  if (samples < 1) throw Error::validation("need at least one sample point");
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> exponential(1.0);
  Eigen::VectorXd x(num_stocks);
  double sup = 0.0;
  for (int s = 0; s < samples; ++s) {
    // Dirichlet(1,...,1) sample; uniform over the simplex interior.
    double total = 0.0;
    for (int i = 0; i < num_stocks; ++i) {
      x[i] = exponential(rng) + kInteriorFloor;
      total += x[i];
    }
    x /= total;
    const Eigen::VectorXd grad = g.log_gradient(x);
    for (int i = 0; i < num_stocks; ++i) {
      const double term = std::abs(x[i] * grad[i]);
      if (!std::isfinite(term) || term > 1e6)
        throw Error::domain("generator '" + g.name() +
                            "' violates the generation condition: |x_i D_i log S| = " +
                            std::to_string(term));
      sup = std::max(sup, term);
    }
  }
  return sup;
}

WeightPath generated_weights(const Generator& g, const WeightPath& mu) {
  Eigen::MatrixXd w(mu.num_stocks(), static_cast<Eigen::Index>(mu.num_times()));
  for (std::size_t k = 0; k < mu.num_times(); ++k) {
    const Eigen::VectorXd x = mu.slice(k);
    require_interior(x, k);
    const Eigen::VectorXd grad = g.log_gradient(x);
    const double correction = 1.0 - x.dot(grad);
    w.col(static_cast<Eigen::Index>(k)) =
        (grad.array() + correction).matrix().cwiseProduct(x);
  }
  return {mu.grid(), std::move(w)};
}

CumulativePath drift_process(const Generator& g, const WeightPath& mu) {
  std::vector<double> increments(mu.grid().intervals());
  for (std::size_t k = 0; k < increments.size(); ++k) {
    const Eigen::VectorXd x = mu.slice(k);
    require_interior(x, k);
    require_interior(mu.slice(k + 1), k + 1);
    const Eigen::VectorXd dmu = mu.slice(k + 1) - x;
    increments[k] = -dmu.dot(g.hessian(x) * dmu) / (2.0 * g.value(x));
  }
  return CumulativePath::from_increments(mu.grid(), increments);
}

CumulativePath generator_log_change(const Generator& g, const WeightPath& mu) {
  std::vector<double> values(mu.num_times());
  for (std::size_t k = 0; k < mu.num_times(); ++k) {
    const Eigen::VectorXd x = mu.slice(k);
    require_interior(x, k);
    const double s = g.value(x);
    if (!(s > 0.0) || !std::isfinite(s))
      throw Error::domain("generator '" + g.name() + "' is not positive at time index " +
                          std::to_string(k));
    values[k] = std::log(s);
  }
  const double base = values[0];
  for (double& v : values) v -= base;
  values[0] = 0.0;
  return {mu.grid(), std::move(values)};
}

}  // namespace sptd
