#pragma once

#include <cstddef>
#include <vector>

namespace tmscat {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [a, b] (Newton iteration on P_n).
/// Exact for polynomials of degree < 2n. Throws InvalidArgument for n = 0.
QuadratureRule gauss_legendre(std::size_t n, double a = -1.0, double b = 1.0);

}  // namespace tmscat
