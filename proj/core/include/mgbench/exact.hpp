#pragma once

#include <cstdint>
#include <string>

namespace mgbench {

// Exact rational arithmetic on 64-bit integers.  Values are kept normalized
// (positive denominator, gcd 1); overflowing intermediates throw instead of
// wrapping.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t value) : num_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const;
  std::string str() const;

  Rational operator-() const { return Rational(-num_, den_); }
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// C(n, k) computed exactly; throws std::overflow_error if the result (or an
// intermediate product) exceeds 64 bits.
std::int64_t binomial(int n, int k);

// 2^e as an exact integer, e in [0, 62].
std::int64_t pow2(int e);

}  // namespace mgbench
