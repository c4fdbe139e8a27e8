#include "genff/model.hpp"

#include <algorithm>
#include <bit>
#include <complex>
#include <cstring>
#include <fstream>
#include <numbers>
#include <set>
#include <stdexcept>

#include "genff/kahan.hpp"

namespace genff {

namespace {
bool finite_value(const BigFloat& x) { return mpfr_number_p(x.backend().data()) != 0; }
}  // namespace

namespace {

// pi^e scaled by the power of two that brings it into [1, 2). Exact binary
// scaling, so the value is bit-reproducible at any precision.
BigFloat scaled_pi_power(const BigFloat& pi, unsigned exponent) {
  const BigFloat value = pow(pi, static_cast<int>(exponent));
  const auto shift = static_cast<long>(static_cast<unsigned long>(
      floor(BigFloat(exponent) * log(pi) / log(BigFloat(2)))));
  return ldexp(value, -shift);
}

}  // namespace

ModelParams ModelParams::with_default_couplings(std::uint32_t sites,
                                                const std::set<std::uint32_t>& orders,
                                                unsigned digits) {
  PrecisionGuard guard(digits);
  const BigFloat pi = big_pi();
  ModelParams p;
  p.sites = sites;
  p.precision_digits = digits;
  // Every coupling is a rational multiple of a distinct power of pi, so no
  // rational combination of dispersion terms can vanish: a relation would be
  // a polynomial in pi with algebraic coefficients. Quadratic-field constants
  // (sqrt 2, sqrt 3, ...) are unusable here -- they live inside cyclotomic
  // fields and collide with the trigonometric sums at matching sizes.
  for (std::uint32_t d : orders) {
    if (d == 1)
      p.harmonics.push_back({1, BigFloat(1), pi / 3072});
    else
      p.harmonics.push_back({d, scaled_pi_power(pi, 2 * d - 1), scaled_pi_power(pi, 2 * d)});
  }
  if (p.harmonics.empty()) p.harmonics.push_back({1, BigFloat(1), pi / 3072});
  p.gamma = pi * pi / 5;
  p.validate();
  return p;
}

void ModelParams::validate() const {
  if (sites < 2) throw std::invalid_argument("ModelParams: need at least 2 sites");
  if (harmonics.empty()) throw std::invalid_argument("ModelParams: need at least one harmonic");
  if (precision_digits < kMinPrecisionDigits)
    throw std::invalid_argument("ModelParams: precision_digits must be >= 30");
  std::set<std::uint32_t> seen;
  for (const auto& h : harmonics) {
    if (h.order < 1 || h.order >= sites)
      throw std::invalid_argument("ModelParams: harmonic order must satisfy 1 <= d < L");
    if (!seen.insert(h.order).second)
      throw std::invalid_argument("ModelParams: duplicate harmonic order");
    if (!finite_value(h.alpha) || !finite_value(h.beta))
      throw std::invalid_argument("ModelParams: couplings must be finite");
  }
  if (!finite_value(gamma)) throw std::invalid_argument("ModelParams: gamma must be finite");
}

SingleParticleSpectrum::SingleParticleSpectrum(std::vector<BigFloat> energies)
    : energies_(std::move(energies)) {
  if (energies_.empty()) throw std::invalid_argument("SingleParticleSpectrum: empty");
  precision_digits_ = energies_.front().precision();
  shadow_.reserve(energies_.size());
  for (const BigFloat& e : energies_) shadow_.push_back(static_cast<double>(e));
}

SingleParticleSpectrum dispersion(const ModelParams& params) {
  params.validate();
  PrecisionGuard guard(params.precision_digits);
  const BigFloat two_pi = 2 * big_pi();
  std::vector<BigFloat> eps;
  eps.reserve(params.sites);
  for (std::uint32_t k = 0; k < params.sites; ++k) {
    BigFloat e = BigFloat(params.gamma);
    for (const auto& h : params.harmonics) {
      const std::uint64_t reduced = (std::uint64_t(h.order) * k) % params.sites;
      const BigFloat theta = two_pi * reduced / params.sites;
      e += h.alpha * cos(theta) + h.beta * sin(theta);
    }
    eps.push_back(std::move(e));
  }
  return SingleParticleSpectrum(std::move(eps));
}

HoppingMatrix hopping_matrix(const ModelParams& params) {
  params.validate();
  const auto n = static_cast<Eigen::Index>(params.sites);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& h : params.harmonics) {
    const std::complex<double> hop(static_cast<double>(h.alpha) / 2,
                                   static_cast<double>(h.beta) / 2);
    for (std::uint32_t s = 0; s < params.sites; ++s) {
      const std::uint32_t t = (s + h.order) % params.sites;
      m(s, t) += hop;
      m(t, s) += std::conj(hop);
    }
  }
  const double g = static_cast<double>(params.gamma);
  for (Eigen::Index s = 0; s < n; ++s) m(s, s) += g;
  return {std::move(m)};
}

double eig_check(const HoppingMatrix& hm, const SingleParticleSpectrum& sp) {
  if (hm.matrix.rows() != static_cast<Eigen::Index>(sp.sites()))
    throw std::invalid_argument("eig_check: size mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hm.matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eig_check: eigensolver failed");
  const Eigen::VectorXd ev = solver.eigenvalues();  // ascending
  std::vector<double> eps = sp.shadow();
  std::sort(eps.begin(), eps.end());
  double worst = 0.0;
  for (std::uint32_t k = 0; k < sp.sites(); ++k)
    worst = std::max(worst, std::abs(ev[k] - eps[k]));
  return worst;
}

double extensivity_check(std::uint32_t sites) {
  if (sites < 2) throw std::invalid_argument("extensivity_check: need at least 2 sites");
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(sites));
  const double two_pi = 2.0 * std::numbers::pi;
  double worst = 0.0;
  for (std::uint32_t n = 0; n < sites; ++n)
    for (std::uint32_t k = 0; k < sites; ++k) {
      const double theta = two_pi * ((std::uint64_t(n) * k) % sites) / sites;
      const double mag = std::abs(std::polar(inv_sqrt, theta));
      worst = std::max(worst, std::abs(mag * std::sqrt(static_cast<double>(sites)) - 1.0));
    }
  return worst;
}

namespace {

double exact_energy(const std::vector<BigFloat>& eps, std::uint64_t mask) {
  BigFloat acc(0, eps.front().precision());
  for (std::uint64_t m = mask; m != 0; m &= m - 1)
    acc += eps[static_cast<std::size_t>(std::countr_zero(m))];
  return static_cast<double>(acc);
}

}  // namespace

std::vector<double> many_body_energies_by_mask(const SingleParticleSpectrum& sp) {
  const std::uint32_t sites = sp.sites();
  if (sites > kManyBodySiteCap)
    throw std::length_error("many_body_energies_by_mask: site count above in-memory cap");
  const auto& eps = sp.shadow();
  std::vector<double> out(std::uint64_t(1) << sites);
  KahanAccumulator<double> acc;
  out[0] = 0.0;
  std::uint64_t gray = 0;
  for (std::uint64_t i = 1; i < out.size(); ++i) {
    const std::uint64_t next = i ^ (i >> 1);
    const std::uint64_t flipped = next ^ gray;
    const auto bit = static_cast<std::size_t>(std::countr_zero(flipped));
    if (next & flipped)
      acc += eps[bit];
    else
      acc += -eps[bit];
    gray = next;
    if ((i & 0xFFFF) == 0) acc = {exact_energy(sp.energies(), gray), 0.0};
    out[gray] = acc.value();
  }
  return out;
}

ManyBodySpectrum::ManyBodySpectrum(std::uint32_t sites, std::vector<double> sorted_energies)
    : sites_(sites), energies_(std::move(sorted_energies)) {
  if (energies_.size() != (std::uint64_t(1) << sites_))
    throw std::invalid_argument("ManyBodySpectrum: expected 2^L energies");
  if (!std::is_sorted(energies_.begin(), energies_.end()))
    throw std::invalid_argument("ManyBodySpectrum: energies must be ascending");
  degeneracy_threshold_ = 1e-12 * (energies_.back() - energies_.front());
}

ManyBodySpectrum many_body_spectrum(const SingleParticleSpectrum& sp) {
  std::vector<double> e = many_body_energies_by_mask(sp);
  std::sort(e.begin(), e.end());
  return {sp.sites(), std::move(e)};
}

namespace {

constexpr char kMagic[4] = {'F', 'S', 'P', 'C'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[i]) << (8 * i);
  return v;
}

}  // namespace

void write_fspc(const ManyBodySpectrum& mb, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_fspc: cannot open " + path.string());
  out.write(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, mb.sites());
  for (double e : mb.energies()) {
    const auto bits = std::bit_cast<std::uint64_t>(e);
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
    out.write(b, 8);
  }
  if (!out) throw std::runtime_error("write_fspc: write failed for " + path.string());
}

ManyBodySpectrum read_fspc(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_fspc: cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("read_fspc: bad magic");
  const std::uint32_t version = get_u32(in);
  if (version != kVersion) throw std::runtime_error("read_fspc: unsupported version");
  const std::uint32_t sites = get_u32(in);
  if (sites > kManyBodySiteCap) throw std::runtime_error("read_fspc: site count above cap");
  std::vector<double> e(std::uint64_t(1) << sites);
  for (double& x : e) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= std::uint64_t(b[i]) << (8 * i);
    x = std::bit_cast<double>(bits);
  }
  if (!in) throw std::runtime_error("read_fspc: truncated file");
  return {sites, std::move(e)};
}

}  // namespace genff
