#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace moran {

/// Exact rational with 64-bit numerator and positive denominator, kept in
/// lowest terms. Overflow raises InputError instead of wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_ == 0; }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational& operator+=(const Rational& o) { return *this = *this + o; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend bool operator<(const Rational& a, const Rational& b);

  std::string str() const;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// One term coefficient * 2^{-pow2} * n^{-pow_n}.
struct SymbolicTerm {
  Rational coefficient;
  int pow2 = 0;
  int pow_n = 0;

  friend bool operator==(const SymbolicTerm&, const SymbolicTerm&) = default;
};

/// A sum of SymbolicTerms with like terms merged. Two sums compare equal
/// iff they are identical as formal polynomials in 2^{-1} and n^{-1}.
class SymbolicSum {
 public:
  SymbolicSum() = default;
  explicit SymbolicSum(const std::vector<SymbolicTerm>& terms);

  void add(const SymbolicTerm& t);
  void add(const SymbolicSum& s);
  void subtract(const SymbolicSum& s);

  std::vector<SymbolicTerm> terms() const;
  bool is_zero() const noexcept { return terms_.empty(); }

  /// log2 of the value for population size n, evaluated in shifted
  /// arithmetic so that 2^{-10000}-sized terms keep their relative size.
  double log2_value(double n) const;

  friend bool operator==(const SymbolicSum&, const SymbolicSum&) = default;

  std::string str() const;

 private:
  // (pow2, pow_n) -> coefficient; zero coefficients are erased.
  std::map<std::pair<int, int>, Rational> terms_;
};

}  // namespace moran
