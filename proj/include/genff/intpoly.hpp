#ifndef GENFF_INTPOLY_HPP
#define GENFF_INTPOLY_HPP

#include <gmpxx.h>

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace genff {

/// Dense polynomial with arbitrary-precision integer coefficients, stored in
/// ascending degree order. Canonical form: no stored leading zeros, so the
/// zero polynomial has an empty coefficient vector and equality is
/// structural. degree() of the zero polynomial is nullopt, never an integer.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<mpz_class> coeffs);
  /// Convenience for small literals: IntPoly({-1, 0, 1}) is z^2 - 1.
  IntPoly(std::initializer_list<long> coeffs);

  static IntPoly zero() { return IntPoly(); }
  static IntPoly one() { return IntPoly({1}); }
  /// coeff * z^degree
  static IntPoly monomial(std::size_t degree, mpz_class coeff = 1);

  bool is_zero() const { return coeffs_.empty(); }
  std::optional<std::size_t> degree() const;
  bool is_monic() const;

  const std::vector<mpz_class>& coeffs() const { return coeffs_; }
  /// Coefficient of z^j; zero beyond the stored degree.
  const mpz_class& coeff(std::size_t j) const;

  std::string to_string() const;

  friend bool operator==(const IntPoly&, const IntPoly&) = default;

 private:
  void canonicalize();
  std::vector<mpz_class> coeffs_;
};

IntPoly poly_add(const IntPoly& p, const IntPoly& q);
IntPoly poly_sub(const IntPoly& p, const IntPoly& q);

/// Exact product (schoolbook; degrees here stay small).
IntPoly poly_mul(const IntPoly& p, const IntPoly& q);

/// Exact quotient p / d over the integers, or nullopt when p is not an
/// integer multiple of d. d must be nonzero; when d is monic, divisibility
/// over the rationals already implies an integer quotient.
std::optional<IntPoly> poly_divexact(const IntPoly& p, const IntPoly& d);

/// Horner evaluation at an integer point, exact.
mpz_class poly_eval_int(const IntPoly& p, const mpz_class& x);

/// Divisors of n in ascending order, including 1 and n.
std::vector<std::uint64_t> divisors(std::uint64_t n);

/// Euler's totient.
std::uint64_t totient(std::uint64_t n);

/// n-th cyclotomic polynomial, computed by exact division of z^n - 1 by the
/// product of the lower-order factors. Returns a reference into the memo
/// table (map nodes are stable); safe for concurrent callers.
const IntPoly& cyclotomic(std::uint64_t n);

}  // namespace genff

#endif  // GENFF_INTPOLY_HPP
