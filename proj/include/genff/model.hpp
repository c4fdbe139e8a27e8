#ifndef GENFF_MODEL_HPP
#define GENFF_MODEL_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <set>
#include <vector>

#include "genff/bigfloat.hpp"

namespace genff {

/// One hopping harmonic: range d with cos/sin couplings.
struct Harmonic {
  std::uint32_t order = 1;
  BigFloat alpha;
  BigFloat beta;
};

struct ModelParams {
  std::uint32_t sites = 0;
  std::vector<Harmonic> harmonics;
  BigFloat gamma;
  unsigned precision_digits = kDefaultPrecisionDigits;

  /// Reference couplings: alpha_1 = 1, beta_1 = pi/3072, gamma = pi^2/5, and
  /// for each extra order d: alpha_d = pi^{2d-1} and beta_d = pi^{2d}, each
  /// rescaled by an exact power of two into [1, 2). Rational multiples of
  /// distinct powers of one transcendental are jointly rationally independent
  /// from the mode trigonometry at every system size, so the
  /// incommensurability assumption provably holds. The small parity-breaking
  /// beta_1 puts the spectrum in the mild level-attraction regime.
  static ModelParams with_default_couplings(std::uint32_t sites,
                                            const std::set<std::uint32_t>& orders = {1},
                                            unsigned digits = kDefaultPrecisionDigits);

  /// Throws std::invalid_argument on malformed parameters.
  void validate() const;
};

/// The L mode energies at extended precision plus a double shadow copy.
class SingleParticleSpectrum {
 public:
  explicit SingleParticleSpectrum(std::vector<BigFloat> energies);

  std::uint32_t sites() const { return static_cast<std::uint32_t>(energies_.size()); }
  const std::vector<BigFloat>& energies() const { return energies_; }
  const std::vector<double>& shadow() const { return shadow_; }
  unsigned precision_digits() const { return precision_digits_; }

 private:
  std::vector<BigFloat> energies_;
  std::vector<double> shadow_;
  unsigned precision_digits_;
};

/// eps_k = sum_d [alpha_d cos(2 pi d k / L) + beta_d sin(2 pi d k / L)] + gamma,
/// k = 0..L-1, evaluated at the params' precision with arguments reduced to
/// 2 pi (d k mod L) / L.
SingleParticleSpectrum dispersion(const ModelParams& params);

/// Circulant Hermitian hopping matrix: (alpha_d + i beta_d)/2 on the +d
/// off-diagonals (periodic), conjugate on the mirror entries, gamma on the
/// diagonal. Wraparound contributions accumulate.
struct HoppingMatrix {
  Eigen::MatrixXcd matrix;
};

HoppingMatrix hopping_matrix(const ModelParams& params);

/// Max absolute difference between the sorted numeric eigenvalues of the
/// hopping matrix and the sorted dispersion energies.
double eig_check(const HoppingMatrix& hm, const SingleParticleSpectrum& sp);

/// Max over n,k of | |O_{n,k}| sqrt(L) - 1 | for the Fourier modes
/// O_{n,k} = exp(i 2 pi k n / L)/sqrt(L).
double extensivity_check(std::uint32_t sites);

/// In-memory enumeration guard: 2^28 doubles = 2 GiB.
inline constexpr std::uint32_t kManyBodySiteCap = 28;

/// All 2^L occupation energies, indexed by occupation bitmask (bit k set =
/// mode k occupied). Gray-code enumeration with compensated summation and a
/// full recomputation from the extended-precision energies every 2^16 steps.
/// Throws std::length_error above the site cap.
std::vector<double> many_body_energies_by_mask(const SingleParticleSpectrum& sp);

class ManyBodySpectrum {
 public:
  ManyBodySpectrum(std::uint32_t sites, std::vector<double> sorted_energies);

  std::uint32_t sites() const { return sites_; }
  const std::vector<double>& energies() const { return energies_; }
  /// Gaps below this are classified as zero for degeneracy reporting.
  double degeneracy_threshold() const { return degeneracy_threshold_; }

 private:
  std::uint32_t sites_;
  std::vector<double> energies_;
  double degeneracy_threshold_;
};

ManyBodySpectrum many_body_spectrum(const SingleParticleSpectrum& sp);

/// Binary dump: "FSPC", version u32, L u32, then 2^L little-endian doubles
/// ascending.
void write_fspc(const ManyBodySpectrum& mb, const std::filesystem::path& path);
ManyBodySpectrum read_fspc(const std::filesystem::path& path);

}  // namespace genff

#endif  // GENFF_MODEL_HPP
