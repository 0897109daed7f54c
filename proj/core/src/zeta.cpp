#include "thermoshift/zeta.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdlib>

namespace thermoshift {

using Rat = boost::multiprecision::cpp_rational;

std::string ZetaSeries::rational_form() const {
  std::string poly;
  for (std::size_t k = 0; k < denominator.size(); ++k) {
    const BigInt& c = denominator[k];
    if (c == 0) continue;
    BigInt a = abs(c);
    std::string term;
    if (k == 0) {
      term = a.str();
    } else {
      if (a != 1) term = a.str();
      term += "z";
      if (k > 1) term += "^" + std::to_string(k);
    }
    if (poly.empty()) {
      if (c < 0) poly += "-";
      poly += term;
    } else {
      poly += (c < 0) ? " - " : " + ";
      poly += term;
    }
  }
  return "1/(" + poly + ")";
}

ZetaSeries zeta_series(const TransitionMatrix& m, int terms) {
  if (terms < 1) throw Error(ErrorCode::BadInput, "need at least one series term");
  const int n = m.size();

  std::vector<BigInt> traces(std::max(terms, n) + 1);
  for (int k = 1; k <= std::max(terms, n); ++k) traces[k] = periodic_point_count(m, k);

  // Elementary symmetric functions of the eigenvalues by Newton's identities;
  // the division by k is exact because the e_k are sums of principal minors.
  std::vector<BigInt> e(n + 1);
  e[0] = 1;
  for (int k = 1; k <= n; ++k) {
    BigInt acc = 0;
    for (int i = 1; i <= k; ++i) {
      BigInt term = e[k - i] * traces[i];
      acc += (i % 2 == 1) ? term : -term;
    }
    BigInt q = acc / k;
    if (q * k != acc) throw Error(ErrorCode::ContractViolation, "Newton identity division not exact");
    e[k] = q;
  }
  // det(I - z M) = sum_k (-1)^k e_k z^k
  std::vector<BigInt> den(n + 1);
  for (int k = 0; k <= n; ++k) den[k] = (k % 2 == 0) ? e[k] : -e[k];

  // Route 1: series of 1/den via linear recurrence.
  std::vector<BigInt> rec(terms + 1);
  rec[0] = 1;
  for (int k = 1; k <= terms; ++k) {
    BigInt acc = 0;
    for (int j = 1; j <= std::min(k, n); ++j) acc += den[j] * rec[k - j];
    rec[k] = -acc;
  }

  // Route 2: exp of the truncated log-series in exact rationals.  With
  // L(z) = sum p_k z^k / k the exponential satisfies a_j = (1/j) sum p_k a_{j-k}.
  std::vector<Rat> a(terms + 1);
  a[0] = 1;
  for (int j = 1; j <= terms; ++j) {
    Rat acc = 0;
    for (int k = 1; k <= j; ++k) acc += Rat(traces[k]) * a[j - k];
    a[j] = acc / j;
  }

  double cross = 0.0;
  for (int k = 0; k <= terms; ++k) {
    if (denominator(a[k]) != 1)
      throw Error(ErrorCode::ContractViolation, "zeta series coefficient is not an integer");
    if (numerator(a[k]) != rec[k])
      throw Error(ErrorCode::ContractViolation, "zeta series computations disagree");
    // The exact comparison just passed; record the float-level gap as well.
    double x = rec[k].convert_to<double>();
    double y = numerator(a[k]).convert_to<double>();
    if (x != 0.0) cross = std::max(cross, std::abs(x - y) / std::abs(x));
  }

  // Normal form: drop zero leading coefficients of the characteristic
  // polynomial (the matrix may be singular), keeping the constant term.
  while (den.size() > 1 && den.back() == 0) den.pop_back();

  ZetaSeries out;
  out.coefficients = std::move(rec);
  out.denominator = std::move(den);
  out.cross_check = cross;
  return out;
}

}  // namespace thermoshift
