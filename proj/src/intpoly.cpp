#include "genff/intpoly.hpp"

#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace genff {

IntPoly::IntPoly(std::vector<mpz_class> coeffs) : coeffs_(std::move(coeffs)) { canonicalize(); }

IntPoly::IntPoly(std::initializer_list<long> coeffs) {
  coeffs_.reserve(coeffs.size());
  for (long c : coeffs) coeffs_.emplace_back(c);
  canonicalize();
}

IntPoly IntPoly::monomial(std::size_t degree, mpz_class coeff) {
  std::vector<mpz_class> c(degree + 1);
  c[degree] = std::move(coeff);
  return IntPoly(std::move(c));
}

void IntPoly::canonicalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

std::optional<std::size_t> IntPoly::degree() const {
  if (coeffs_.empty()) return std::nullopt;
  return coeffs_.size() - 1;
}

bool IntPoly::is_monic() const { return !coeffs_.empty() && coeffs_.back() == 1; }

const mpz_class& IntPoly::coeff(std::size_t j) const {
  static const mpz_class kZero = 0;
  return j < coeffs_.size() ? coeffs_[j] : kZero;
}

std::string IntPoly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t j = coeffs_.size(); j-- > 0;) {
    const mpz_class& c = coeffs_[j];
    if (c == 0) continue;
    if (!first) out << (c < 0 ? " - " : " + ");
    else if (c < 0) out << "-";
    first = false;
    mpz_class a = abs(c);
    if (a != 1 || j == 0) out << a.get_str();
    if (j > 0) {
      if (a != 1) out << "*";
      out << "z";
      if (j > 1) out << "^" << j;
    }
  }
  return out.str();
}

IntPoly poly_add(const IntPoly& p, const IntPoly& q) {
  std::vector<mpz_class> out(std::max(p.coeffs().size(), q.coeffs().size()));
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = p.coeff(j) + q.coeff(j);
  return IntPoly(std::move(out));
}

IntPoly poly_sub(const IntPoly& p, const IntPoly& q) {
  std::vector<mpz_class> out(std::max(p.coeffs().size(), q.coeffs().size()));
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = p.coeff(j) - q.coeff(j);
  return IntPoly(std::move(out));
}

IntPoly poly_mul(const IntPoly& p, const IntPoly& q) {
  if (p.is_zero() || q.is_zero()) return IntPoly::zero();
  const auto& a = p.coeffs();
  const auto& b = q.coeffs();
  std::vector<mpz_class> out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
  return IntPoly(std::move(out));
}

std::optional<IntPoly> poly_divexact(const IntPoly& p, const IntPoly& d) {
  if (d.is_zero()) throw std::invalid_argument("poly_divexact: division by zero polynomial");
  if (p.is_zero()) return IntPoly::zero();
  if (p.coeffs().size() < d.coeffs().size()) return std::nullopt;

  // Long division top-down. If p = d*q with integer q, every step's leading
  // coefficient divides exactly and the final remainder is zero; any failed
  // step or nonzero remainder means p is not an integer multiple of d.
  std::vector<mpz_class> rem = p.coeffs();
  const auto& dc = d.coeffs();
  const mpz_class& lead = dc.back();
  const std::size_t qsize = rem.size() - dc.size() + 1;
  std::vector<mpz_class> quot(qsize);
  for (std::size_t i = qsize; i-- > 0;) {
    mpz_class& top = rem[i + dc.size() - 1];
    if (top == 0) continue;
    if (!mpz_divisible_p(top.get_mpz_t(), lead.get_mpz_t())) return std::nullopt;
    mpz_divexact(quot[i].get_mpz_t(), top.get_mpz_t(), lead.get_mpz_t());
    for (std::size_t j = 0; j < dc.size(); ++j)
      mpz_submul(rem[i + j].get_mpz_t(), quot[i].get_mpz_t(), dc[j].get_mpz_t());
  }
  for (const mpz_class& r : rem)
    if (r != 0) return std::nullopt;
  return IntPoly(std::move(quot));
}

mpz_class poly_eval_int(const IntPoly& p, const mpz_class& x) {
  mpz_class acc = 0;
  for (std::size_t j = p.coeffs().size(); j-- > 0;) {
    acc *= x;
    acc += p.coeffs()[j];
  }
  return acc;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("divisors: n must be positive");
  std::vector<std::uint64_t> low, high;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    low.push_back(d);
    if (d != n / d) high.push_back(n / d);
  }
  low.insert(low.end(), high.rbegin(), high.rend());
  return low;
}

std::uint64_t totient(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("totient: n must be positive");
  std::uint64_t result = n;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

const IntPoly& cyclotomic(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("cyclotomic: n must be positive");
  static std::mutex memo_mutex;
  static std::map<std::uint64_t, IntPoly> memo;
  {
    std::lock_guard lock(memo_mutex);
    if (auto it = memo.find(n); it != memo.end()) return it->second;
  }
  IntPoly phi;
  if (n == 1) {
    phi = IntPoly({-1, 1});
  } else {
    // z^n - 1 divided by the product of Phi_d over proper divisors d of n.
    IntPoly denom = IntPoly::one();
    for (std::uint64_t d : divisors(n))
      if (d < n) denom = poly_mul(denom, cyclotomic(d));
    IntPoly numer = poly_sub(IntPoly::monomial(n), IntPoly::one());
    auto q = poly_divexact(numer, denom);
    if (!q) throw std::logic_error("cyclotomic: exact division failed");
    phi = std::move(*q);
  }
  std::lock_guard lock(memo_mutex);
  return memo.try_emplace(n, std::move(phi)).first->second;
}

}  // namespace genff
