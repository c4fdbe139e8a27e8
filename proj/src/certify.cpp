#include "genff/certify.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace genff {

void HarmonicSet::validate() const {
  if (sites < 2) throw std::invalid_argument("HarmonicSet: need at least 2 sites");
  if (orders.empty()) throw std::invalid_argument("HarmonicSet: orders must be nonempty");
  for (std::uint32_t d : orders)
    if (d < 1 || d >= sites)
      throw std::invalid_argument("HarmonicSet: every order must satisfy 1 <= d < L");
}

std::set<std::uint64_t> required_orders(const HarmonicSet& h) {
  h.validate();
  std::set<std::uint64_t> out;
  for (std::uint32_t d : h.orders) out.insert(h.sites / std::gcd(d, h.sites));
  if (h.include_constant) out.insert(1);
  return out;
}

IndependenceVerdict certify(const HarmonicSet& h) {
  const std::set<std::uint64_t> required = required_orders(h);
  std::uint64_t degree_sum = 0;
  for (std::uint64_t m : required) degree_sum += totient(m);
  if (degree_sum >= h.sites) return Certificate{required, degree_sum, h.sites};

  // The product of the forced irreducible factors is itself an admissible
  // witness: minimal degree, satisfies every root condition by construction.
  IntPoly g = IntPoly::one();
  for (std::uint64_t m : required) g = poly_mul(g, cyclotomic(m));
  std::vector<mpz_class> coeffs(h.sites);
  const auto& gc = g.coeffs();
  std::copy(gc.begin(), gc.end(), coeffs.begin());
  return Witness{std::move(g), std::move(coeffs)};
}

namespace {

std::uint32_t smallest_prime_factor(std::uint32_t n) {
  for (std::uint32_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return p;
  return n;
}

}  // namespace

IntPoly composite_counterexample(std::uint32_t sites, std::optional<std::uint32_t> prime_factor) {
  if (sites < 4) throw std::invalid_argument("composite_counterexample: need composite L >= 4");
  const std::uint32_t p = prime_factor.value_or(smallest_prime_factor(sites));
  if (p >= sites) throw std::invalid_argument("composite_counterexample: L must be composite");
  if (p < 2 || sites % p != 0 || smallest_prime_factor(p) != p)
    throw std::invalid_argument("composite_counterexample: factor must be a prime divisor of L");
  const std::uint32_t n = sites / p;
  std::vector<mpz_class> q(std::size_t(n) * (p - 1) + 1);
  for (std::uint32_t j = 0; j < p; ++j) q[std::size_t(n) * j] = 1;
  return poly_mul(IntPoly({-1, 1}), IntPoly(std::move(q)));
}

bool verify_witness_exact(const IntPoly& p, const HarmonicSet& h) {
  const auto deg = p.degree();
  if (!deg || *deg > h.sites - 1) return false;
  for (std::uint64_t m : required_orders(h))
    if (!poly_divexact(p, cyclotomic(m))) return false;
  return true;
}

BigFloat verify_witness_numeric(std::span<const mpz_class> coeffs,
                                const SingleParticleSpectrum& sp) {
  if (coeffs.size() != sp.sites())
    throw std::invalid_argument("verify_witness_numeric: coefficient count must equal L");
  PrecisionGuard guard(sp.precision_digits());
  BigFloat acc(0);
  BigFloat term(0);
  for (std::uint32_t k = 0; k < sp.sites(); ++k) {
    mpfr_mul_z(term.backend().data(), sp.energies()[k].backend().data(),
               coeffs[k].get_mpz_t(), MPFR_RNDN);
    acc += term;
  }
  return abs(acc);
}

namespace {

struct SubsetSum {
  double sum;
  std::uint32_t mask;
};

std::vector<std::uint32_t> unpack(std::uint32_t mask) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t k = 0; mask != 0; ++k, mask >>= 1)
    if (mask & 1u) out.push_back(k);
  return out;
}

}  // namespace

std::vector<ResonancePair> subset_resonance_scan(const SingleParticleSpectrum& sp,
                                                 std::uint32_t q_max, double tol) {
  const std::uint32_t sites = sp.sites();
  if (sites > 31) throw std::length_error("subset_resonance_scan: L too large for mask scan");
  if (q_max < 1) throw std::invalid_argument("subset_resonance_scan: q_max must be >= 1");
  const auto& eps = sp.shadow();

  std::vector<ResonancePair> found;
  for (std::uint32_t q = 1; q <= std::min(q_max, sites); ++q) {
    std::vector<SubsetSum> sums;
    // Enumerate all C(L, q) subsets via the next-bit-permutation trick.
    std::uint32_t mask = (1u << q) - 1;
    const std::uint32_t limit = 1u << sites;
    while (mask < limit) {
      double s = 0.0;
      for (std::uint32_t m = mask; m != 0; m &= m - 1)
        s += eps[static_cast<std::uint32_t>(std::countr_zero(m))];
      sums.push_back({s, mask});
      const std::uint32_t low = mask & (~mask + 1);
      const std::uint32_t ripple = mask + low;
      mask = ripple | (((mask ^ ripple) >> 2) / low);
    }
    std::sort(sums.begin(), sums.end(),
              [](const SubsetSum& a, const SubsetSum& b) { return a.sum < b.sum; });
    for (std::size_t i = 0; i < sums.size(); ++i)
      for (std::size_t j = i + 1; j < sums.size() && sums[j].sum - sums[i].sum < tol; ++j) {
        auto lhs = unpack(sums[i].mask);
        auto rhs = unpack(sums[j].mask);
        if (rhs < lhs) std::swap(lhs, rhs);
        found.push_back({std::move(lhs), std::move(rhs),
                         std::abs(sums[j].sum - sums[i].sum)});
      }
  }
  return found;
}

std::vector<mpz_class> resonance_coefficients(const ResonancePair& pair, std::uint32_t sites) {
  std::vector<mpz_class> coeffs(sites);
  for (std::uint32_t k : pair.lhs) coeffs.at(k) += 1;
  for (std::uint32_t k : pair.rhs) coeffs.at(k) -= 1;
  return coeffs;
}

}  // namespace genff
