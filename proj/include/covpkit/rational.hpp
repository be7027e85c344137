#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

namespace covpkit {

/// Exact rational number, always in lowest terms with a positive denominator.
///
/// Values whose numerator and denominator fit in 63 bits are stored inline and
/// use 128-bit intermediates; anything larger is promoted to a GMP rational.
/// The representation is canonical: a value that fits inline is never stored
/// as a GMP rational, so two Rationals are equal iff their members are equal.
class Rational {
 public:
  Rational() noexcept = default;
  Rational(long long value);  // NOLINT(google-explicit-constructor)
  Rational(long long numerator, long long denominator);
  explicit Rational(const mpq_class& value);

  Rational(const Rational& other);
  Rational(Rational&&) noexcept = default;
  Rational& operator=(const Rational& other);
  Rational& operator=(Rational&&) noexcept = default;
  ~Rational() = default;

  /// Parses "p/q" or a bare integer. Decimal points, exponents, whitespace and
  /// zero denominators are rejected with InputError.
  static Rational parse(std::string_view text);

  [[nodiscard]] int sign() const noexcept;
  [[nodiscard]] bool is_zero() const noexcept { return !big_ && num_ == 0; }
  [[nodiscard]] bool is_integer() const noexcept;
  [[nodiscard]] std::string str() const;
  [[nodiscard]] mpq_class to_mpq() const;
  [[nodiscard]] Rational abs() const { return sign() < 0 ? -*this : *this; }

  Rational operator-() const;
  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

  friend bool operator==(const Rational& lhs, const Rational& rhs);
  friend std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs);
  friend std::ostream& operator<<(std::ostream& os, const Rational& value);

 private:
  void assign_wide(__int128 numerator, __int128 denominator);
  void assign_mpq(mpq_class value);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::unique_ptr<mpq_class> big_;
};

/// `target += factor * value`, the inner step of every elimination loop.
void add_product(Rational& target, const Rational& factor, const Rational& value);

}  // namespace covpkit
