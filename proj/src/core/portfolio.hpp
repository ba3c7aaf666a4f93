#pragma once

#include "core/market.hpp"
#include "core/paths.hpp"

namespace sptd {

// Self-financing value process, rebalanced to the given weights at the left
// endpoint of every interval:
//   Z(t_{k+1}) = Z(t_k) * sum_i w(i, k) * X_i(t_{k+1}) / X_i(t_k),  Z(t_0) = 1.
// Short weights can drive Z nonpositive; that is an error, not a NaN.
ValuePath value_process(const MarketPath& m, const WeightPath& w);

// log Z_p(t) - log Z_m(t); starts at 0.
CumulativePath relative_log_return(const ValuePath& zp, const ValuePath& zm);

// Realized excess growth rate. The increment over [t_k, t_{k+1}] is
//   1/2 ( sum_i w(i,k) dq_ii - sum_{i,j} w(i,k) w(j,k) dq_ij )
// with dq_ij the product of log-cap increments of stocks i and j; weights are
// taken at the left endpoint.
RatePath excess_growth_rate(const MarketPath& m, const WeightPath& w);

}  // namespace sptd
