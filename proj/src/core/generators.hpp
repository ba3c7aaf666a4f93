#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>

#include "core/market.hpp"
#include "core/paths.hpp"

namespace sptd {

// Positive C^2 function on the open unit simplex, exposed through the three
// pieces the portfolio machinery consumes: the value S(x), the log-gradient
// D_i log S(x), and the Hessian D_ij S(x).
class Generator {
 public:
  virtual ~Generator() = default;

  virtual double value(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd log_gradient(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const = 0;

  const std::string& name() const { return name_; }

 protected:
  explicit Generator(std::string name) : name_(std::move(name)) {}

 private:
  std::string name_;
};

using GeneratorPtr = std::shared_ptr<const Generator>;

GeneratorPtr make_market_generator();                       // S = 1
GeneratorPtr make_geometric_mean_generator();               // S = (prod x_i)^(1/n)
GeneratorPtr make_entropy_generator();                      // S = -sum x_i log x_i
GeneratorPtr make_diversity_generator(double p);            // S = (sum x_i^p)^(1/p), 0<p<1
GeneratorPtr make_constant_weighted_generator(Eigen::VectorXd w);  // S = prod x_i^(w_i)

// Parses "market", "geom", "entropy", "diversity:p=0.76",
// "constweight:w=0.2,0.3,0.5" and validates against the stock count.
GeneratorPtr parse_generator(const std::string& spec, int num_stocks);

// Largest |x_i D_i log S(x)| over `samples` random interior simplex points.
// Used to spot-check the generation condition; throws a domain error on a
// non-finite or absurdly large value.
double generation_condition_sup(const Generator& g, int num_stocks, int samples,
                                std::uint64_t seed);

// Weights generated by S:
//   pi_i = (D_i log S(mu) + 1 - sum_j mu_j D_j log S(mu)) * mu_i.
// Slices sum to 1 by construction.
WeightPath generated_weights(const Generator& g, const WeightPath& mu);

// Drift process Theta, cumulative from 0; the increment over [t_k, t_{k+1}] is
//   -1 / (2 S(mu_k)) * sum_{i,j} D_ij S(mu_k) * dmu_i * dmu_j
// with everything evaluated at the left endpoint.
CumulativePath drift_process(const Generator& g, const WeightPath& mu);

// log S(mu(t)) - log S(mu(0)).
CumulativePath generator_log_change(const Generator& g, const WeightPath& mu);

// Generator evaluations require min_i mu_i >= this floor; entropy- and
// geometric-mean-style gradients blow up at the simplex boundary.
inline constexpr double kInteriorFloor = 1e-12;

}  // namespace sptd
