#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace fbl {

// Exact rational. Values whose lowest-terms numerator and denominator fit in
// int64 are held inline; everything else lives in a GMP rational.
// Invariant: den_ > 0, gcd(num_, den_) = 1, and big_ is null iff the value fits.
class Rational {
 public:
  Rational() noexcept : num_(0), den_(1) {}
  Rational(int v) noexcept : num_(v), den_(1) {}
  Rational(long v) noexcept : num_(v), den_(1) {}
  Rational(long long v) noexcept : num_(v), den_(1) {}
  Rational(long long num, long long den);
  explicit Rational(const mpq_class& q);

  Rational(const Rational& o) : num_(o.num_), den_(o.den_) {
    if (o.big_) big_ = std::make_unique<mpq_class>(*o.big_);
  }
  Rational(Rational&&) noexcept = default;
  Rational& operator=(const Rational& o) {
    if (this != &o) {
      num_ = o.num_;
      den_ = o.den_;
      big_ = o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr;
    }
    return *this;
  }
  Rational& operator=(Rational&&) noexcept = default;

  // Accepts "p", "-p", "p/q" with q != 0.
  static Rational parse(std::string_view text);

  mpq_class to_mpq() const;
  std::string str() const;
  double to_double() const;

  int sign() const noexcept;
  bool is_zero() const noexcept { return !big_ && num_ == 0; }
  bool is_integer() const;
  bool is_small() const noexcept { return !big_; }

  Rational numerator() const;
  Rational denominator() const;

  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const;

  friend bool operator==(const Rational& a, const Rational& b);
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  // this -= a * b without materialising the product when possible.
  void sub_mul(const Rational& a, const Rational& b);

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  void set_big(mpq_class q);
  void normalize_big();

  std::int64_t num_;
  std::int64_t den_;
  std::unique_ptr<mpq_class> big_;
};

Rational abs(const Rational& r);
Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);
// Integer gcd/lcm of numerators and denominators; inputs must be integers.
Rational gcd_int(const Rational& a, const Rational& b);
Rational lcm_int(const Rational& a, const Rational& b);

using Vec = std::vector<Rational>;
using Matrix = std::vector<Vec>;  // row-major unless documented otherwise

std::string to_string(const Vec& v);

}  // namespace fbl
