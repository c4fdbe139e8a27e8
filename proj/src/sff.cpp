#include "genff/sff.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "genff/kahan.hpp"

namespace genff {

double sff_point(const SingleParticleSpectrum& sp, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("sff_point: t must be finite");
  long double prod = 1.0L;
  for (double e : sp.shadow()) {
    const long double c = std::cos(static_cast<long double>(e) * t);
    prod *= 2.0L + 2.0L * c;
  }
  return static_cast<double>(prod);
}

namespace {

unsigned worker_count() {
  if (const char* env = std::getenv("GENFF_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n >= 1 && n <= 256) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double uniform53(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double int_pow(double x, std::uint32_t q) {
  double out = 1.0;
  for (std::uint32_t i = 0; i < q; ++i) out *= x;
  return out;
}

}  // namespace

MomentReport moment_estimate(const SingleParticleSpectrum& sp, std::uint32_t q, double t0,
                             double tau, std::uint64_t n_samples, std::uint64_t seed) {
  if (!(tau > 0)) throw std::invalid_argument("moment_estimate: tau must be positive");
  if (n_samples < 1) throw std::invalid_argument("moment_estimate: need n_samples >= 1");

  MomentReport report;
  report.q = q;
  report.sites = sp.sites();
  report.t0 = t0;
  report.tau = tau;
  report.n_samples = n_samples;
  report.seed = seed;
  report.references = {exact_free_moment(std::max(q, 1u), sp.sites()),
                       paper_free_moment(std::max(q, 1u), sp.sites()),
                       poisson_moment(std::max(q, 1u), sp.sites())};
  if (q == 0) {
    report.estimate = 1.0;
    report.std_error = 0.0;
    return report;
  }

  // Fixed-size sample chunks, each with its own seeded stream, merged in
  // chunk order: the estimate is byte-identical for any worker count.
  constexpr std::uint64_t kChunk = 1ull << 16;
  const std::uint64_t n_chunks = (n_samples + kChunk - 1) / kChunk;
  std::vector<double> chunk_sum(n_chunks), chunk_sumsq(n_chunks);

  const auto run_chunk = [&](std::uint64_t c) {
    std::mt19937_64 rng(splitmix64(seed ^ (c + 1) * 0x9E3779B97F4A7C15ull));
    const std::uint64_t begin = c * kChunk;
    const std::uint64_t count = std::min(kChunk, n_samples - begin);
    KahanAccumulator<double> s1, s2;
    for (std::uint64_t i = 0; i < count; ++i) {
      const double t = t0 + tau * uniform53(rng);
      const double f = int_pow(sff_point(sp, t), q);
      s1 += f;
      s2 += f * f;
    }
    chunk_sum[c] = s1.value();
    chunk_sumsq[c] = s2.value();
  };

  const unsigned workers = static_cast<unsigned>(
      std::min<std::uint64_t>(worker_count(), n_chunks));
  if (workers <= 1) {
    for (std::uint64_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::uint64_t c = w; c < n_chunks; c += workers) run_chunk(c);
      });
    for (auto& th : pool) th.join();
  }

  KahanAccumulator<double> s1, s2;
  for (std::uint64_t c = 0; c < n_chunks; ++c) {
    s1 += chunk_sum[c];
    s2 += chunk_sumsq[c];
  }
  const auto n = static_cast<double>(n_samples);
  const double mean = s1.value() / n;
  double variance = 0.0;
  if (n_samples > 1) variance = std::max(0.0, (s2.value() - n * mean * mean) / (n - 1.0));
  report.estimate = mean;
  report.std_error = std::sqrt(variance / n);
  return report;
}

std::uint64_t per_mode_solution_count(std::uint32_t q) {
  if (q < 1 || q > 15) throw std::invalid_argument("per_mode_solution_count: q must be in [1,15]");
  const std::uint32_t limit = 1u << q;
  std::uint64_t count = 0;
  for (std::uint32_t m = 0; m < limit; ++m)
    for (std::uint32_t n = 0; n < limit; ++n)
      if (std::popcount(m) == std::popcount(n)) ++count;
  return count;
}

mpz_class exact_free_moment(std::uint32_t q, std::uint32_t sites) {
  mpz_class base(static_cast<unsigned long>(per_mode_solution_count(q)));
  mpz_class out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), sites);
  return out;
}

mpz_class paper_free_moment(std::uint32_t q, std::uint32_t sites) {
  if (q < 1) throw std::invalid_argument("paper_free_moment: q must be >= 1");
  mpz_class base;
  mpz_fac_ui(base.get_mpz_t(), q);
  base <<= q;  // q! * 2^q
  mpz_class out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), sites);
  return out;
}

mpz_class poisson_moment(std::uint32_t q, std::uint32_t sites) {
  if (q < 1) throw std::invalid_argument("poisson_moment: q must be >= 1");
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), q);
  out <<= static_cast<std::uint64_t>(q) * sites;  // q! * 2^{qL}
  return out;
}

}  // namespace genff
