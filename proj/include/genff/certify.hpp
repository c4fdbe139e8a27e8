#ifndef GENFF_CERTIFY_HPP
#define GENFF_CERTIFY_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <variant>
#include <vector>

#include "genff/bigfloat.hpp"
#include "genff/intpoly.hpp"
#include "genff/model.hpp"

namespace genff {

/// Which harmonic orders the dispersion contains, for a given system size.
/// include_constant records whether the chemical potential is nonzero, which
/// forces the P(1) = 0 condition on any resonance polynomial.
struct HarmonicSet {
  std::uint32_t sites = 0;
  std::set<std::uint32_t> orders;
  bool include_constant = true;

  void validate() const;
};

/// Rational independence certified: every resonance polynomial of degree
/// <= L-1 would have to be a multiple of distinct irreducible cyclotomic
/// factors whose degrees sum to degree_sum >= bound = L.
struct Certificate {
  std::set<std::uint64_t> required_orders;
  std::uint64_t degree_sum = 0;
  std::uint64_t bound = 0;
};

/// Explicit resonance: a nonzero integer polynomial of degree <= L-1
/// satisfying every root condition. coeffs is the length-L vector a_0..a_{L-1}.
struct Witness {
  IntPoly poly;
  std::vector<mpz_class> coeffs;
};

using IndependenceVerdict = std::variant<Certificate, Witness>;

/// Two equal-size mode index sets whose energy sums agree within tolerance.
struct ResonancePair {
  std::vector<std::uint32_t> lhs;
  std::vector<std::uint32_t> rhs;
  double deviation = 0.0;
};

/// The cyclotomic orders m whose Phi_m must divide any resonance polynomial:
/// { L / gcd(d, L) : d in orders }, plus 1 when the constant term is present
/// (xi^d is a primitive L/gcd(d,L)-th root of unity).
std::set<std::uint64_t> required_orders(const HarmonicSet& h);

/// Exact decision: Certificate when the forced factor degrees sum to >= L,
/// otherwise a Witness (the product of the forced factors itself).
IndependenceVerdict certify(const HarmonicSet& h);

/// The explicit counterexample for composite L = n*p (p prime):
/// P(z) = (z-1) * (z^{n(p-1)} + ... + z^n + 1), degree L-n+1 <= L-1.
/// By default p is the smallest prime factor; an alternate prime factor may
/// be supplied. Rejects prime or L < 4 input.
IntPoly composite_counterexample(std::uint32_t sites, std::optional<std::uint32_t> prime_factor = {});

/// True iff Phi_m divides p for every required order m (including m = 1,
/// i.e. p(1) = 0, when the constant is present). The zero polynomial and
/// degrees >= L are not admissible witnesses and return false.
bool verify_witness_exact(const IntPoly& p, const HarmonicSet& h);

/// |sum_k a_k eps_k| at the spectrum's working precision. Advisory only; the
/// exact layer is authoritative. Throws on length mismatch.
BigFloat verify_witness_numeric(std::span<const mpz_class> coeffs,
                                const SingleParticleSpectrum& sp);

/// Brute-force scan over pairs of distinct q-subsets (q <= q_max) whose
/// energy sums differ by less than tol. Raw subset pairs: shared indices are
/// not cancelled. Each unordered pair is reported once, lexicographically
/// smaller set first.
std::vector<ResonancePair> subset_resonance_scan(const SingleParticleSpectrum& sp,
                                                 std::uint32_t q_max, double tol);

/// The +-1 coefficient vector (length L) of a scan hit: +1 on lhs, -1 on rhs,
/// shared indices cancelling to 0.
std::vector<mpz_class> resonance_coefficients(const ResonancePair& pair, std::uint32_t sites);

}  // namespace genff

#endif  // GENFF_CERTIFY_HPP
