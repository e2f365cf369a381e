#pragma once

#include <string>

#include "homog/grid.hpp"

namespace homog {

/// Sign class of an eigenvalue sequence: + pairs with lambda > 0 and the
/// constraint integral positive, - with lambda < 0.
enum class Sign { positive, negative };

inline const char* sign_name(Sign s) {
  return s == Sign::positive ? "+" : "-";
}

struct EigenPair {
  double lambda = 0.0;
  int k = 1;
  Sign sign = Sign::positive;
  DiscreteFunction eigenfunction;
  double residual = 0.0;         // solver-specific defect at the returned pair
  double bisection_width = 0.0;  // final bracket width (shooting) or 0
};

}  // namespace homog
