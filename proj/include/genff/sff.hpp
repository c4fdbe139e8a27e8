#ifndef GENFF_SFF_HPP
#define GENFF_SFF_HPP

#include <gmpxx.h>

#include <cstdint>

#include "genff/model.hpp"

namespace genff {

struct MomentReferences {
  mpz_class exact_free;  // C(2q,q)^L from the per-mode survival enumeration
  mpz_class paper_free;  // (q! 2^q)^L
  mpz_class poisson;     // q! 2^{qL}
};

struct MomentReport {
  std::uint32_t q = 0;
  std::uint32_t sites = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  double t0 = 0.0;
  double tau = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  MomentReferences references;
};

/// |tr e^{iHt}|^2 for the free spectrum: prod_k (2 + 2 cos(eps_k t)).
/// O(L) per point; evaluated in long double internally so the product keeps
/// relative accuracy when a factor passes near zero.
double sff_point(const SingleParticleSpectrum& sp, double t);

/// Monte Carlo estimate of the moving time average of sff_point^q over
/// [t0, t0 + tau], with uniform random sample times. Deterministic per seed
/// for any worker count (GENFF_THREADS bounds the workers); q = 0 returns
/// exactly 1 with zero error.
MomentReport moment_estimate(const SingleParticleSpectrum& sp, std::uint32_t q, double t0,
                             double tau, std::uint64_t n_samples, std::uint64_t seed);

/// Brute-force count of (m, n) in {0,1}^q x {0,1}^q with sum(m) = sum(n) --
/// the per-mode survival condition. Equals C(2q, q); capped at q = 15.
std::uint64_t per_mode_solution_count(std::uint32_t q);

/// per_mode_solution_count(q)^L, the enumeration-backed moment value.
mpz_class exact_free_moment(std::uint32_t q, std::uint32_t sites);

/// (q! 2^q)^L, verbatim.
mpz_class paper_free_moment(std::uint32_t q, std::uint32_t sites);

/// q! 2^{qL}, the Poisson-statistics moment.
mpz_class poisson_moment(std::uint32_t q, std::uint32_t sites);

}  // namespace genff

#endif  // GENFF_SFF_HPP
