#include "moran/symbolic.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "moran/errors.hpp"
#include "moran/log_math.hpp"

namespace moran {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw InputError("rational overflow");
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw InputError("rational overflow");
  return out;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
  if (den_ == 0) throw InputError("rational with zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
  if (num_ == 0) den_ = 1;
}

Rational Rational::operator+(const Rational& o) const {
  const std::int64_t g = std::gcd(den_, o.den_);
  const std::int64_t lhs = checked_mul(num_, o.den_ / g);
  const std::int64_t rhs = checked_mul(o.num_, den_ / g);
  return Rational(checked_add(lhs, rhs), checked_mul(den_ / g, o.den_));
}

Rational Rational::operator-(const Rational& o) const { return *this + Rational(-o.num_, o.den_); }

Rational Rational::operator*(const Rational& o) const {
  const Rational a(num_, o.den_);
  const Rational b(o.num_, den_);
  return Rational(checked_mul(a.num_, b.num_), checked_mul(a.den_, b.den_));
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
}

std::string Rational::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

SymbolicSum::SymbolicSum(const std::vector<SymbolicTerm>& terms) {
  for (const auto& t : terms) add(t);
}

void SymbolicSum::add(const SymbolicTerm& t) {
  if (t.coefficient.is_zero()) return;
  const auto key = std::make_pair(t.pow2, t.pow_n);
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(key, t.coefficient);
    return;
  }
  it->second += t.coefficient;
  if (it->second.is_zero()) terms_.erase(it);
}

void SymbolicSum::add(const SymbolicSum& s) {
  for (const auto& [key, c] : s.terms_) add(SymbolicTerm{c, key.first, key.second});
}

void SymbolicSum::subtract(const SymbolicSum& s) {
  for (const auto& [key, c] : s.terms_) add(SymbolicTerm{Rational(-c.num(), c.den()), key.first, key.second});
}

std::vector<SymbolicTerm> SymbolicSum::terms() const {
  std::vector<SymbolicTerm> out;
  out.reserve(terms_.size());
  for (const auto& [key, c] : terms_) out.push_back({c, key.first, key.second});
  return out;
}

double SymbolicSum::log2_value(double n) const {
  const double log2n = std::log2(n);
  Log2Accumulator pos;
  Log2Accumulator neg;
  for (const auto& [key, c] : terms_) {
    const double mag = std::log2(std::abs(c.to_double())) - key.first - key.second * log2n;
    (c.num() > 0 ? pos : neg).add(mag);
  }
  const double p = pos.value();
  const double q = neg.value();
  if (is_log2_zero(q)) return p;
  if (!(p > q)) throw InputError("symbolic sum is not positive: " + str());
  return p + std::log2(-std::expm1((q - p) * std::log(2.0)));
}

std::string SymbolicSum::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.str();
    if (key.first != 0) os << "*2^-" << key.first;
    if (key.second != 0) os << "*n^-" << key.second;
  }
  return os.str();
}

}  // namespace moran
