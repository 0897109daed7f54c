#ifndef THERMOSHIFT_ZETA_HPP
#define THERMOSHIFT_ZETA_HPP

#include <string>
#include <vector>

#include "thermoshift/word.hpp"

namespace thermoshift {

// Taylor data of the dynamical zeta function
//   zeta(z) = exp( sum_n Per_n z^n / n ) = 1 / det(I - z M).
// coefficients holds orders 0..terms; denominator holds the integer
// coefficients of det(I - z M), constant term first.  Everything is exact.
struct ZetaSeries {
  std::vector<BigInt> coefficients;
  std::vector<BigInt> denominator;
  double cross_check;  // largest relative gap between the two computations

  std::string rational_form() const;  // e.g. "1/(1 - z - z^2)"
};

// Coefficients are computed twice: from the exponential of the truncated
// log-series in exact rational arithmetic, and from the linear recurrence
// the denominator polynomial induces.  The two must agree term by term.
ZetaSeries zeta_series(const TransitionMatrix& m, int terms);

}  // namespace thermoshift

#endif
