#include "mgbench/exact.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>

namespace mgbench {

namespace {

std::int64_t checked(__int128 v, const char* what) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error(what);
  }
  return static_cast<std::int64_t>(v);
}

std::int64_t mul(std::int64_t a, std::int64_t b) {
  return checked(static_cast<__int128>(a) * b, "rational multiply overflow");
}

std::int64_t add(std::int64_t a, std::int64_t b) {
  return checked(static_cast<__int128>(a) + b, "rational add overflow");
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
  if (den_ == 0) throw std::invalid_argument("rational with zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  std::int64_t g = std::gcd(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

double Rational::value() const {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  std::int64_t g = std::gcd(a.den_, b.den_);
  std::int64_t bd = b.den_ / g;
  std::int64_t num = add(mul(a.num_, bd), mul(b.num_, a.den_ / g));
  return Rational(num, mul(a.den_, bd));
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  std::int64_t g1 = std::gcd(a.num_, b.den_);
  std::int64_t g2 = std::gcd(b.num_, a.den_);
  return Rational(mul(a.num_ / g1, b.num_ / g2), mul(a.den_ / g2, b.den_ / g1));
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::invalid_argument("rational division by zero");
  return a * Rational(b.den_, b.num_);
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    checked(r, "binomial overflow");
  }
  return checked(r, "binomial overflow");
}

std::int64_t pow2(int e) {
  if (e < 0 || e > 62) throw std::overflow_error("pow2 exponent out of range");
  return std::int64_t{1} << e;
}

}  // namespace mgbench
