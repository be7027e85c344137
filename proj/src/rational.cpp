#include "covpkit/rational.hpp"

#include <charconv>
#include <climits>
#include <ostream>
#include <stdexcept>

#include "covpkit/errors.hpp"

namespace covpkit {
namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr i128 kMaxSmall = INT64_MAX;

// INT64_MIN is excluded so that negation never overflows.
bool fits_small(i128 v) { return v >= -kMaxSmall && v <= kMaxSmall; }

u128 gcd_u128(u128 a, u128 b) {
  if ((a >> 64) == 0 && (b >> 64) == 0) {
    auto x = static_cast<std::uint64_t>(a);
    auto y = static_cast<std::uint64_t>(b);
    while (y != 0) {
      auto t = x % y;
      x = y;
      y = t;
    }
    return x;
  }
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t gcd_i64(std::int64_t a, std::int64_t b) {
  auto x = static_cast<std::uint64_t>(a < 0 ? -a : a);
  auto y = static_cast<std::uint64_t>(b < 0 ? -b : b);
  while (y != 0) {
    auto t = x % y;
    x = y;
    y = t;
  }
  return static_cast<std::int64_t>(x);
}

mpz_class mpz_from(i128 v) {
  bool negative = v < 0;
  u128 mag = negative ? static_cast<u128>(-v) : static_cast<u128>(v);
  mpz_class hi(static_cast<unsigned long>(mag >> 64));
  mpz_class out = hi << 64;
  out += static_cast<unsigned long>(mag & 0xFFFFFFFFFFFFFFFFULL);
  return negative ? mpz_class(-out) : out;
}

bool is_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

Rational::Rational(long long value) {
  if (value == LLONG_MIN) {
    assign_mpq(mpq_class(mpz_from(value)));
  } else {
    num_ = value;
  }
}

Rational::Rational(long long numerator, long long denominator) {
  if (denominator == 0) throw std::domain_error("Rational: zero denominator");
  assign_wide(numerator, denominator);
}

Rational::Rational(const mpq_class& value) { assign_mpq(value); }

Rational::Rational(const Rational& other) : num_(other.num_), den_(other.den_) {
  if (other.big_) big_ = std::make_unique<mpq_class>(*other.big_);
}

Rational& Rational::operator=(const Rational& other) {
  if (this == &other) return *this;
  num_ = other.num_;
  den_ = other.den_;
  if (other.big_) {
    big_ = std::make_unique<mpq_class>(*other.big_);
  } else {
    big_.reset();
  }
  return *this;
}

void Rational::assign_wide(i128 numerator, i128 denominator) {
  if (denominator < 0) {
    numerator = -numerator;
    denominator = -denominator;
  }
  if (denominator != 1) {
    u128 g = gcd_u128(numerator < 0 ? static_cast<u128>(-numerator) : static_cast<u128>(numerator),
                      static_cast<u128>(denominator));
    if (g > 1) {
      numerator /= static_cast<i128>(g);
      denominator /= static_cast<i128>(g);
    }
  }
  if (fits_small(numerator) && fits_small(denominator)) {
    num_ = static_cast<std::int64_t>(numerator);
    den_ = static_cast<std::int64_t>(denominator);
    big_.reset();
    return;
  }
  mpq_class q(mpz_from(numerator), mpz_from(denominator));
  assign_mpq(std::move(q));
}

void Rational::assign_mpq(mpq_class value) {
  value.canonicalize();
  const mpz_class& n = value.get_num();
  const mpz_class& d = value.get_den();
  if (mpz_fits_slong_p(n.get_mpz_t()) && mpz_fits_slong_p(d.get_mpz_t()) &&
      n != LONG_MIN) {
    num_ = n.get_si();
    den_ = d.get_si();
    big_.reset();
    return;
  }
  num_ = 0;
  den_ = 1;
  big_ = std::make_unique<mpq_class>(std::move(value));
}

Rational Rational::parse(std::string_view text) {
  auto fail = [&](const char* why) -> InputError {
    return InputError("invalid rational literal \"" + std::string(text) + "\": " + why);
  };
  if (text.empty()) throw fail("empty");
  std::string_view body = text;
  bool negative = false;
  if (body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  auto slash = body.find('/');
  std::string_view num_part = body.substr(0, slash);
  std::string_view den_part = slash == std::string_view::npos ? std::string_view{} : body.substr(slash + 1);
  if (body.find_first_of(".eE") != std::string_view::npos) throw fail("decimal syntax is not accepted");
  if (!is_digits(num_part)) throw fail("expected digits");
  if (slash != std::string_view::npos && !is_digits(den_part)) throw fail("expected digits after '/'");

  std::int64_t n = 0;
  std::int64_t d = 1;
  bool small = num_part.size() <= 18 && den_part.size() <= 18;
  if (small) {
    std::from_chars(num_part.data(), num_part.data() + num_part.size(), n);
    if (!den_part.empty()) std::from_chars(den_part.data(), den_part.data() + den_part.size(), d);
    if (d == 0) throw fail("zero denominator");
    return Rational(negative ? -n : n, d);
  }
  mpz_class num(std::string(num_part), 10);
  mpz_class den = den_part.empty() ? mpz_class(1) : mpz_class(std::string(den_part), 10);
  if (den == 0) throw fail("zero denominator");
  if (negative) num = -num;
  return Rational(mpq_class(num, den));
}

int Rational::sign() const noexcept {
  if (big_) return sgn(*big_);
  return (num_ > 0) - (num_ < 0);
}

bool Rational::is_integer() const noexcept {
  if (big_) return big_->get_den() == 1;
  return den_ == 1;
}

std::string Rational::str() const {
  if (big_) return big_->get_str();
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  mpq_class q(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
  return q;
}

Rational Rational::operator-() const {
  Rational out;
  if (big_) {
    out.assign_mpq(-*big_);
  } else {
    out.num_ = -num_;
    out.den_ = den_;
  }
  return out;
}

Rational& Rational::operator+=(const Rational& rhs) {
  if (!big_ && !rhs.big_) {
    if (den_ == rhs.den_) {
      i128 n = static_cast<i128>(num_) + rhs.num_;
      if (den_ == 1 && fits_small(n)) {
        num_ = static_cast<std::int64_t>(n);
        return *this;
      }
      assign_wide(n, den_);
      return *this;
    }
    i128 n = static_cast<i128>(num_) * rhs.den_ + static_cast<i128>(rhs.num_) * den_;
    i128 d = static_cast<i128>(den_) * rhs.den_;
    assign_wide(n, d);
    return *this;
  }
  assign_mpq(to_mpq() + rhs.to_mpq());
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) { return *this += -rhs; }

Rational& Rational::operator*=(const Rational& rhs) {
  if (!big_ && !rhs.big_) {
    if (num_ == 0 || rhs.num_ == 0) {
      num_ = 0;
      den_ = 1;
      return *this;
    }
    std::int64_t g1 = gcd_i64(num_, rhs.den_);
    std::int64_t g2 = gcd_i64(rhs.num_, den_);
    i128 n = static_cast<i128>(num_ / g1) * (rhs.num_ / g2);
    i128 d = static_cast<i128>(den_ / g2) * (rhs.den_ / g1);
    if (fits_small(n) && fits_small(d)) {
      num_ = static_cast<std::int64_t>(n);
      den_ = static_cast<std::int64_t>(d);
      return *this;
    }
    assign_wide(n, d);
    return *this;
  }
  assign_mpq(to_mpq() * rhs.to_mpq());
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) throw std::domain_error("Rational: division by zero");
  if (!rhs.big_) {
    Rational inverse;
    inverse.num_ = rhs.num_ < 0 ? -rhs.den_ : rhs.den_;
    inverse.den_ = rhs.num_ < 0 ? -rhs.num_ : rhs.num_;
    return *this *= inverse;
  }
  assign_mpq(to_mpq() / rhs.to_mpq());
  return *this;
}

bool operator==(const Rational& lhs, const Rational& rhs) {
  if (!lhs.big_ && !rhs.big_) return lhs.num_ == rhs.num_ && lhs.den_ == rhs.den_;
  if (lhs.big_ && rhs.big_) return *lhs.big_ == *rhs.big_;
  return false;
}

std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs) {
  if (!lhs.big_ && !rhs.big_) {
    i128 a = static_cast<i128>(lhs.num_) * rhs.den_;
    i128 b = static_cast<i128>(rhs.num_) * lhs.den_;
    return a <=> b;
  }
  int c = cmp(lhs.to_mpq(), rhs.to_mpq());
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::ostream& operator<<(std::ostream& os, const Rational& value) { return os << value.str(); }

void add_product(Rational& target, const Rational& factor, const Rational& value) {
  if (factor.is_zero() || value.is_zero()) return;
  target += factor * value;
}

}  // namespace covpkit
