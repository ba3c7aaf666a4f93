#pragma once

#include <functional>

#include "core/paths.hpp"

namespace sptd {

// Discrete stochastic-integration kernel on a fixed grid. The integrals are
// plain sums over grid intervals; convergence to their continuous-time
// counterparts is exercised by mesh-refinement tests, not represented here.

// Left-endpoint sum: value at t_k is sum_{i<k} Y(t_i) (X(t_{i+1}) - X(t_i)).
CumulativePath ito_integral(const ScalarPath& y, const ScalarPath& x);

// Midpoint-averaged sum: the integrand is (Y(t_i) + Y(t_{i+1})) / 2.
CumulativePath fs_integral(const ScalarPath& y, const ScalarPath& x);

// Sum of products of increments of X and Y.
CumulativePath cross_variation(const ScalarPath& x, const ScalarPath& y);

// cross_variation(x, x); non-decreasing.
CumulativePath quadratic_variation(const ScalarPath& x);

// F(X(t)) - F(X(0)) - \int F'(X) o dX. Identically ~0 for quadratic F;
// shrinks under mesh refinement for any smooth F.
CumulativePath fs_chain_rule_residual(const std::function<double(double)>& f,
                                      const std::function<double(double)>& df,
                                      const ScalarPath& x);

}  // namespace sptd
