#include <doctest.h>

#include <random>

#include "fbl/errors.hpp"
#include "fbl/rational.hpp"

using fbl::Rational;

TEST_SUITE("rational") {
  TEST_CASE("canonical form and parsing") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(3, -6) == Rational(-1, 2));
    CHECK(Rational::parse("6/8").str() == "3/4");
    CHECK(Rational::parse("-5").str() == "-5");
    CHECK(Rational::parse("0/7").str() == "0");
    CHECK_THROWS_AS(Rational::parse("1/0"), fbl::ParseError);
    CHECK_THROWS_AS(Rational::parse("1.5"), fbl::ParseError);
    CHECK_THROWS_AS(Rational::parse("1/-2"), fbl::ParseError);
  }

  TEST_CASE("overflow promotes to big values and demotes back") {
    Rational big = Rational(1LL << 62) * Rational(1LL << 62);
    CHECK_FALSE(big.is_small());
    CHECK(big.str() == "21267647932558653966460912964485513216");
    Rational back = big / Rational(1LL << 62);
    CHECK(back.is_small());
    CHECK(back == Rational(1LL << 62));
    Rational tiny(1, (1LL << 62) + 1);
    Rational sum = tiny + Rational(1, (1LL << 62) + 3);
    CHECK_FALSE(sum.is_small());
    CHECK(sum - Rational(1, (1LL << 62) + 3) == tiny);
  }

  TEST_CASE("fast path agrees with GMP on random operands") {
    std::mt19937_64 rng(7);
    auto draw = [&]() {
      long long n = (long long)(rng() >> (rng() % 64)) * ((rng() & 1) ? 1 : -1);
      long long d = (long long)((rng() >> (rng() % 64)) | 1);
      return Rational(n, d);
    };
    for (int i = 0; i < 20000; ++i) {
      Rational a = draw(), b = draw();
      mpq_class qa = a.to_mpq(), qb = b.to_mpq();
      CHECK((a + b).to_mpq() == qa + qb);
      CHECK((a - b).to_mpq() == qa - qb);
      CHECK((a * b).to_mpq() == qa * qb);
      if (!b.is_zero()) CHECK((a / b).to_mpq() == qa / qb);
      CHECK(((a < b) == (qa < qb)));
      CHECK(((a == b) == (qa == qb)));
    }
  }
}
