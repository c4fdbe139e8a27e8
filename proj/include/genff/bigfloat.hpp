#ifndef GENFF_BIGFLOAT_HPP
#define GENFF_BIGFLOAT_HPP

#include <boost/multiprecision/mpfr.hpp>

namespace genff {

/// Extended-precision real; decimal precision is set at runtime.
using BigFloat = boost::multiprecision::mpfr_float;

inline constexpr unsigned kDefaultPrecisionDigits = 50;
inline constexpr unsigned kMinPrecisionDigits = 30;

/// Sets the thread's default BigFloat precision; restores the old value on
/// scope exit.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned digits) : saved_(BigFloat::default_precision()) {
    BigFloat::default_precision(digits);
  }
  ~PrecisionGuard() { BigFloat::default_precision(saved_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_;
};

/// pi at the current default precision.
inline BigFloat big_pi() {
  BigFloat x;
  mpfr_const_pi(x.backend().data(), MPFR_RNDN);
  return x;
}

}  // namespace genff

#endif  // GENFF_BIGFLOAT_HPP
