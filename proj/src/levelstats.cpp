#include "genff/levelstats.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "genff/kahan.hpp"

namespace genff {

std::vector<double> gaps(const ManyBodySpectrum& mb) {
  const auto& e = mb.energies();
  std::vector<double> out(e.size() - 1);
  for (std::size_t k = 0; k + 1 < e.size(); ++k) out[k] = e[k + 1] - e[k];
  return out;
}

std::pair<std::vector<double>, std::size_t> ratios(std::span<const double> gap_seq,
                                                   double zero_threshold,
                                                   DegeneratePolicy policy) {
  if (gap_seq.size() < 2) throw std::invalid_argument("ratios: need at least two gaps");
  std::vector<double> out;
  out.reserve(gap_seq.size() - 1);
  std::size_t dropped = 0;
  for (std::size_t k = 0; k + 1 < gap_seq.size(); ++k) {
    const double a = gap_seq[k];
    const double b = gap_seq[k + 1];
    const bool za = a < zero_threshold;
    const bool zb = b < zero_threshold;
    if (za && zb) {
      if (policy == DegeneratePolicy::kDrop) {
        ++dropped;
        continue;
      }
      out.push_back(1.0);
    } else if (za || zb) {
      out.push_back(0.0);
    } else {
      out.push_back(std::min(a, b) / std::max(a, b));
    }
  }
  return {std::move(out), dropped};
}

double mean_ratio(std::span<const double> ratio_seq) {
  if (ratio_seq.empty()) throw std::invalid_argument("mean_ratio: empty input");
  KahanAccumulator<double> acc;
  for (double r : ratio_seq) acc += r;
  return acc.value() / static_cast<double>(ratio_seq.size());
}

double poisson_ratio_pdf(double r) {
  if (r < 0.0 || r > 1.0) throw std::domain_error("poisson_ratio_pdf: r must be in [0,1]");
  return 2.0 / ((1.0 + r) * (1.0 + r));
}

std::vector<double> poisson_reference_spectrum(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("poisson_reference_spectrum: need n >= 2");
  std::mt19937_64 rng(seed);
  std::vector<double> levels(n);
  for (double& x : levels) x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  std::sort(levels.begin(), levels.end());
  return levels;
}

HistogramData histogram(std::span<const double> ratio_seq, std::size_t bins) {
  if (bins < 1) throw std::invalid_argument("histogram: need at least one bin");
  if (ratio_seq.empty()) throw std::invalid_argument("histogram: empty input");
  HistogramData h;
  h.bin_edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i)
    h.bin_edges[i] = static_cast<double>(i) / static_cast<double>(bins);
  std::vector<std::size_t> counts(bins, 0);
  for (double r : ratio_seq) {
    if (r < 0.0 || r > 1.0) throw std::domain_error("histogram: ratio outside [0,1]");
    auto idx = static_cast<std::size_t>(r * static_cast<double>(bins));
    if (idx >= bins) idx = bins - 1;  // r == 1 lands in the last bin
    ++counts[idx];
  }
  const double width = 1.0 / static_cast<double>(bins);
  h.densities.resize(bins);
  h.reference_densities.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    h.densities[i] =
        static_cast<double>(counts[i]) / (static_cast<double>(ratio_seq.size()) * width);
    h.reference_densities[i] = poisson_ratio_pdf((h.bin_edges[i] + h.bin_edges[i + 1]) / 2);
  }
  return h;
}

namespace {

RatioReport build_report(std::span<const double> sorted_levels, double zero_threshold,
                         std::uint32_t sites, DegeneratePolicy policy) {
  std::vector<double> gap_seq(sorted_levels.size() - 1);
  for (std::size_t k = 0; k + 1 < sorted_levels.size(); ++k)
    gap_seq[k] = sorted_levels[k + 1] - sorted_levels[k];
  RatioReport report;
  report.sites = sites;
  report.n_levels = sorted_levels.size();
  report.policy = policy;
  report.n_zero_gaps =
      static_cast<std::size_t>(std::count_if(gap_seq.begin(), gap_seq.end(),
                                             [&](double s) { return s < zero_threshold; }));
  auto [r, dropped] = ratios(gap_seq, zero_threshold, policy);
  report.ratios = std::move(r);
  report.n_dropped = dropped;
  report.mean_r = mean_ratio(report.ratios);
  return report;
}

}  // namespace

RatioReport ratio_report(const ManyBodySpectrum& mb, DegeneratePolicy policy) {
  return build_report(mb.energies(), mb.degeneracy_threshold(), mb.sites(), policy);
}

RatioReport ratio_report(std::span<const double> sorted_levels, DegeneratePolicy policy) {
  if (sorted_levels.size() < 3)
    throw std::invalid_argument("ratio_report: need at least three levels");
  const double width = sorted_levels.back() - sorted_levels.front();
  return build_report(sorted_levels, 1e-12 * width, 0, policy);
}

}  // namespace genff
