#pragma once

#include "nsf/grid.hpp"

namespace nsf::ops {

// All operators act on one component stored as f[i * N2 + k] and write a full array.

/// Summation-by-parts first derivative in x1 (central inside, one-sided first order at
/// both ends). Together with Grid::weight1 it satisfies the discrete integration-by-parts rule.
void d1_sbp(const Grid& g, const double* f, double* out);
/// First derivative in x1 with second-order one-sided closures (for post-processing and Λ).
void d1(const Grid& g, const double* f, double* out);
/// Periodic central first derivative in x2.
void d2(const Grid& g, const double* f, double* out);
/// Second derivative in x1: compact mapped stencil inside, one-sided second order at the ends.
void d11(const Grid& g, const double* f, double* out);
/// Periodic second derivative in x2.
void d22(const Grid& g, const double* f, double* out);
/// out += −coef · (undivided fourth difference) in both directions, scaled so that the x1
/// part is negative semidefinite in the weight1 norm.
void add_dissipation(const Grid& g, double coef, const double* f, double* out);

}  // namespace nsf::ops
