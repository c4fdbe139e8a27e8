#ifndef GENFF_KAHAN_HPP
#define GENFF_KAHAN_HPP

namespace genff {

/// Kahan compensated accumulator. Tracks the rounding error of each addition
/// and reintroduces it in the next, so long chains of += stay accurate.
template <typename T>
struct KahanAccumulator {
  T sum{};
  T compensation{};

  void add(T value) {
    const T y = value - compensation;
    const T t = sum + y;
    compensation = (t - sum) - y;
    sum = t;
  }

  KahanAccumulator& operator+=(T value) {
    add(value);
    return *this;
  }

  T value() const { return sum; }
};

}  // namespace genff

#endif  // GENFF_KAHAN_HPP
