#include "core/weight_rules.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "core/errors.hpp"

namespace sptd {

WeightRule WeightRule::generated(GeneratorPtr generator, std::string spec) {
  WeightRule rule;
  rule.kind_ = Kind::generated;
  rule.generator_ = std::move(generator);
  rule.spec_ = std::move(spec);
  return rule;
}

WeightRule WeightRule::buy_and_hold(Eigen::VectorXd shares) {
  if (shares.size() < 2) throw Error::validation("buyhold needs at least 2 share counts");
  for (Eigen::Index i = 0; i < shares.size(); ++i)
    if (!(shares[i] >= 0.0) || !std::isfinite(shares[i]))
      throw Error::validation("buyhold share counts must be nonnegative");
  if (!(shares.sum() > 0.0)) throw Error::validation("buyhold needs a positive share count");
  WeightRule rule;
  rule.kind_ = Kind::buy_and_hold;
  rule.shares_ = std::move(shares);
  std::ostringstream spec;
  spec << "buyhold:shares=";
  for (Eigen::Index i = 0; i < rule.shares_.size(); ++i)
    spec << (i ? "," : "") << rule.shares_[i];
  rule.spec_ = spec.str();
  return rule;
}

WeightRule WeightRule::top_index(int m) {
  if (m < 1) throw Error::validation("topindex needs m >= 1");
  WeightRule rule;
  rule.kind_ = Kind::top_index;
  rule.top_m_ = m;
  rule.spec_ = "topindex:m=" + std::to_string(m);
  return rule;
}

WeightRule WeightRule::parse(const std::string& spec, int num_stocks) {
  if (spec.rfind("buyhold:shares=", 0) == 0) {
    std::vector<double> shares;
    std::stringstream ss(spec.substr(15));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        shares.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw Error::validation("cannot parse share count '" + item + "'");
      }
    }
    if (static_cast<int>(shares.size()) != num_stocks)
      throw Error::validation("buyhold has " + std::to_string(shares.size()) +
                              " share counts for " + std::to_string(num_stocks) + " stocks");
    return buy_and_hold(
        Eigen::Map<const Eigen::VectorXd>(shares.data(), num_stocks));
  }
  if (spec.rfind("topindex:m=", 0) == 0) {
    int m = 0;
    try {
      m = std::stoi(spec.substr(11));
    } catch (const std::exception&) {
      throw Error::validation("cannot parse topindex size '" + spec.substr(11) + "'");
    }
    if (m > num_stocks)
      throw Error::validation("topindex size " + std::to_string(m) + " exceeds " +
                              std::to_string(num_stocks) + " stocks");
    return top_index(m);
  }
  return generated(parse_generator(spec, num_stocks), spec);
}

WeightPath WeightRule::weights(const MarketPath& m) const {
  switch (kind_) {
    case Kind::generated:
      return generated_weights(*generator_, market_weights(m));
    case Kind::buy_and_hold: {
      if (shares_.size() != m.num_stocks())
        throw Error::validation("buyhold share counts do not match the market");
      Eigen::MatrixXd w(m.num_stocks(), static_cast<Eigen::Index>(m.num_times()));
      for (std::size_t k = 0; k < m.num_times(); ++k) {
        const Eigen::Index ek = static_cast<Eigen::Index>(k);
        const Eigen::VectorXd holdings = shares_.cwiseProduct(m.caps().col(ek));
        w.col(ek) = holdings / holdings.sum();
      }
      return {m.grid(), std::move(w)};
    }
    case Kind::top_index: {
      if (top_m_ > m.num_stocks())
        throw Error::validation("topindex size " + std::to_string(top_m_) + " exceeds " +
                                std::to_string(m.num_stocks()) + " stocks");
      Eigen::MatrixXd w =
          Eigen::MatrixXd::Zero(m.num_stocks(), static_cast<Eigen::Index>(m.num_times()));
      std::vector<double> sorted(static_cast<std::size_t>(m.num_stocks()));
      for (std::size_t k = 0; k < m.num_times(); ++k) {
        const Eigen::Index ek = static_cast<Eigen::Index>(k);
        for (int i = 0; i < m.num_stocks(); ++i)
          sorted[static_cast<std::size_t>(i)] = m.cap(i, k);
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        const double threshold = sorted[static_cast<std::size_t>(top_m_ - 1)];
        double members_total = 0.0;
        for (int i = 0; i < m.num_stocks(); ++i)
          if (m.cap(i, k) >= threshold) members_total += m.cap(i, k);
        for (int i = 0; i < m.num_stocks(); ++i)
          if (m.cap(i, k) >= threshold) w(i, ek) = m.cap(i, k) / members_total;
      }
      return {m.grid(), std::move(w)};
    }
  }
  throw Error::validation("unreachable weight rule kind");
}

}  // namespace sptd
