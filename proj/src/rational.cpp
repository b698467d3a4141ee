#include "fbl/rational.hpp"

#include <limits>
#include <numeric>
#include <ostream>

#include "fbl/errors.hpp"

namespace fbl {
namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr std::int64_t kMin = std::numeric_limits<std::int64_t>::min();
constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

u128 uabs(i128 v) { return v < 0 ? u128(0) - u128(v) : u128(v); }

u128 gcd128(u128 a, u128 b) {
  if ((a >> 64) == 0 && (b >> 64) == 0) return std::gcd(std::uint64_t(a), std::uint64_t(b));
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits(i128 v) { return v >= kMin && v <= kMax; }

mpq_class small_to_mpq(std::int64_t n, std::int64_t d) {
  mpq_class q;
  mpz_set_si(q.get_num_mpz_t(), n);
  mpz_set_si(q.get_den_mpz_t(), d);
  return q;
}

mpz_class from_i128(i128 v) {
  bool neg = v < 0;
  u128 u = uabs(v);
  mpz_class hi(static_cast<unsigned long>(std::uint64_t(u >> 64)));
  mpz_class lo(static_cast<unsigned long>(std::uint64_t(u)));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

}  // namespace

Rational::Rational(long long num, long long den) : num_(0), den_(1) {
  if (den == 0) throw StructuralError("rational with zero denominator");
  i128 n = num, d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  u128 g = gcd128(uabs(n), uabs(d));
  if (g > 1) {
    n /= i128(g);
    d /= i128(g);
  }
  if (fits(n) && fits(d)) {
    num_ = std::int64_t(n);
    den_ = std::int64_t(d);
  } else {
    mpq_class q(from_i128(n), from_i128(d));
    q.canonicalize();
    set_big(std::move(q));
  }
}

Rational::Rational(const mpq_class& q) : num_(0), den_(1) {
  mpq_class c = q;
  c.canonicalize();
  set_big(std::move(c));
}

void Rational::set_big(mpq_class q) {
  if (mpz_fits_slong_p(q.get_num_mpz_t()) && mpz_fits_slong_p(q.get_den_mpz_t())) {
    num_ = mpz_get_si(q.get_num_mpz_t());
    den_ = mpz_get_si(q.get_den_mpz_t());
    big_.reset();
  } else {
    big_ = std::make_unique<mpq_class>(std::move(q));
  }
}

void Rational::normalize_big() {
  if (big_) set_big(std::move(*big_));
}

mpq_class Rational::to_mpq() const { return big_ ? *big_ : small_to_mpq(num_, den_); }

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  auto bad = [&]() { return ParseError("not a rational: '" + s + "'"); };
  if (s.empty()) throw bad();
  std::size_t slash = s.find('/');
  auto valid_int = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  std::string ns = s.substr(0, slash);
  std::string ds = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(ns) || !valid_int(ds) || ds[0] == '-' || ds[0] == '+') throw bad();
  if (ns[0] == '+') ns.erase(0, 1);
  mpz_class n(ns, 10), d(ds, 10);
  if (d == 0) throw ParseError("rational with zero denominator: '" + s + "'");
  mpq_class q(n, d);
  q.canonicalize();
  Rational r;
  r.set_big(std::move(q));
  return r;
}

std::string Rational::str() const {
  if (big_) return big_->get_str();
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

double Rational::to_double() const {
  return big_ ? big_->get_d() : double(num_) / double(den_);
}

int Rational::sign() const noexcept {
  if (big_) return sgn(*big_);
  return (num_ > 0) - (num_ < 0);
}

bool Rational::is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }

Rational Rational::numerator() const {
  if (!big_) return Rational(num_);
  return Rational(mpq_class(big_->get_num()));
}

Rational Rational::denominator() const {
  if (!big_) return Rational(den_);
  return Rational(mpq_class(big_->get_den()));
}

Rational& Rational::operator+=(const Rational& o) {
  if (!big_ && !o.big_) {
    if (den_ == 1 && o.den_ == 1) {
      i128 n = i128(num_) + o.num_;
      if (fits(n)) {
        num_ = std::int64_t(n);
        return *this;
      }
    }
    i128 n = i128(num_) * o.den_ + i128(o.num_) * den_;
    i128 d = i128(den_) * o.den_;
    u128 g = gcd128(uabs(n), u128(d));
    if (g > 1) {
      n /= i128(g);
      d /= i128(g);
    }
    if (n == 0) d = 1;
    if (fits(n) && fits(d)) {
      num_ = std::int64_t(n);
      den_ = std::int64_t(d);
      return *this;
    }
    mpq_class q(from_i128(n), from_i128(d));
    set_big(std::move(q));
    return *this;
  }
  set_big(to_mpq() + o.to_mpq());
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  if (!o.big_ && o.num_ != kMin) {
    Rational neg;
    neg.num_ = -o.num_;
    neg.den_ = o.den_;
    return *this += neg;
  }
  set_big(to_mpq() - o.to_mpq());
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  if (!big_ && !o.big_) {
    if (num_ == 0 || o.num_ == 0) {
      num_ = 0;
      den_ = 1;
      return *this;
    }
    std::uint64_t g1 = std::gcd(std::uint64_t(uabs(num_)), std::uint64_t(o.den_));
    std::uint64_t g2 = std::gcd(std::uint64_t(uabs(o.num_)), std::uint64_t(den_));
    i128 n = i128(num_ / std::int64_t(g1)) * (o.num_ / std::int64_t(g2));
    i128 d = i128(den_ / std::int64_t(g2)) * (o.den_ / std::int64_t(g1));
    if (fits(n) && fits(d)) {
      num_ = std::int64_t(n);
      den_ = std::int64_t(d);
      return *this;
    }
    set_big(mpq_class(from_i128(n), from_i128(d)));
    return *this;
  }
  set_big(to_mpq() * o.to_mpq());
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw StructuralError("division by zero rational");
  if (!o.big_ && o.num_ != kMin) {
    Rational inv;
    inv.num_ = o.num_ > 0 ? o.den_ : -o.den_;
    inv.den_ = o.num_ > 0 ? o.num_ : -o.num_;
    return *this *= inv;
  }
  set_big(to_mpq() / o.to_mpq());
  return *this;
}

Rational Rational::operator-() const {
  if (!big_ && num_ != kMin) {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  Rational r;
  r.set_big(-to_mpq());
  return r;
}

void Rational::sub_mul(const Rational& a, const Rational& b) {
  if (a.is_zero() || b.is_zero()) return;
  *this -= a * b;
}

bool operator==(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;  // canonical form: a value is big only when it does not fit
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    i128 l = i128(a.num_) * b.den_;
    i128 r = i128(b.num_) * a.den_;
    return l <=> r;
  }
  int c = cmp(a.to_mpq(), b.to_mpq());
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

Rational gcd_int(const Rational& a, const Rational& b) {
  if (!a.is_integer() || !b.is_integer()) throw StructuralError("gcd of non-integers");
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.to_mpq().get_num_mpz_t(), b.to_mpq().get_num_mpz_t());
  return Rational(mpq_class(g));
}

Rational lcm_int(const Rational& a, const Rational& b) {
  if (!a.is_integer() || !b.is_integer()) throw StructuralError("lcm of non-integers");
  mpz_class g;
  mpz_lcm(g.get_mpz_t(), a.to_mpq().get_num_mpz_t(), b.to_mpq().get_num_mpz_t());
  return Rational(mpq_class(g));
}

std::string to_string(const Vec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v[i].str();
  }
  return s + ")";
}

}  // namespace fbl
