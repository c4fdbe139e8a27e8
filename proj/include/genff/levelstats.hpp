#ifndef GENFF_LEVELSTATS_HPP
#define GENFF_LEVELSTATS_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "genff/model.hpp"

namespace genff {

/// How ratio pairs with two below-threshold gaps are handled.
/// kConvention: zero/zero emits r = 1 (limit of equal gaps) and a single zero
/// gap emits r = 0. kDrop: zero/zero pairs are removed and counted.
enum class DegeneratePolicy { kConvention, kDrop };

struct RatioReport {
  std::uint32_t sites = 0;  // 0 for synthetic spectra
  std::size_t n_levels = 0;
  std::vector<double> ratios;
  double mean_r = 0.0;
  std::size_t n_zero_gaps = 0;
  std::size_t n_dropped = 0;
  DegeneratePolicy policy = DegeneratePolicy::kConvention;
};

struct HistogramData {
  std::vector<double> bin_edges;            // size bins+1, uniform on [0,1]
  std::vector<double> densities;            // sum(density * width) = 1
  std::vector<double> reference_densities;  // Poisson pdf at bin centers
};

/// Consecutive differences of a sorted spectrum; length 2^L - 1, all >= 0.
std::vector<double> gaps(const ManyBodySpectrum& mb);

/// r_k = min(s_k, s_{k+1}) / max(s_k, s_{k+1}) with the degenerate policy
/// applied to gaps below zero_threshold. Returns the ratios and the number of
/// dropped zero/zero pairs.
std::pair<std::vector<double>, std::size_t> ratios(std::span<const double> gap_seq,
                                                   double zero_threshold,
                                                   DegeneratePolicy policy);

/// Arithmetic mean; throws on empty input.
double mean_ratio(std::span<const double> ratio_seq);

/// Poisson ratio density p(r) = 2/(1+r)^2 on [0,1].
double poisson_ratio_pdf(double r);

/// n i.i.d. uniform levels on [0,1), sorted. Deterministic per seed
/// (mt19937_64 with fixed 53-bit uniforms, independent of platform libm).
std::vector<double> poisson_reference_spectrum(std::size_t n, std::uint64_t seed);

/// Density-normalized histogram of ratios on [0,1] with the Poisson reference
/// attached at bin centers.
HistogramData histogram(std::span<const double> ratio_seq, std::size_t bins);

/// Full pipeline for a many-body spectrum, using its degeneracy threshold.
RatioReport ratio_report(const ManyBodySpectrum& mb,
                         DegeneratePolicy policy = DegeneratePolicy::kConvention);

/// Same for an arbitrary sorted spectrum (threshold 1e-12 x spectral width).
RatioReport ratio_report(std::span<const double> sorted_levels,
                         DegeneratePolicy policy = DegeneratePolicy::kConvention);

}  // namespace genff

#endif  // GENFF_LEVELSTATS_HPP
