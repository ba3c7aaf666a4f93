#pragma once

#include <Eigen/Dense>
#include <string>

#include "core/generators.hpp"
#include "core/market.hpp"

namespace sptd {

// A portfolio specification that can be evaluated on any market path (and so
// on every refinement of one). Three kinds:
//   - functionally generated: any generator spec ("market", "geom", "entropy",
//     "diversity:p=", "constweight:w=");
//   - "buyhold:shares=s1,...,sn": hold fixed share counts, never trade;
//   - "topindex:m=k": the largest k stocks by cap, weighted proportionally to
//     their market weights and renormalized over members; at a cap tie at the
//     boundary every tied stock is a member.
class WeightRule {
 public:
  static WeightRule parse(const std::string& spec, int num_stocks);
  static WeightRule generated(GeneratorPtr generator, std::string spec);
  static WeightRule buy_and_hold(Eigen::VectorXd shares);
  static WeightRule top_index(int m);

  WeightPath weights(const MarketPath& m) const;

  // Non-null iff the rule is functionally generated.
  const GeneratorPtr& generator() const { return generator_; }
  const std::string& spec() const { return spec_; }

 private:
  WeightRule() = default;

  enum class Kind { generated, buy_and_hold, top_index };
  Kind kind_ = Kind::generated;
  GeneratorPtr generator_;
  Eigen::VectorXd shares_;
  int top_m_ = 0;
  std::string spec_;
};

}  // namespace sptd
