#ifndef PDC_RATIONAL_HPP
#define PDC_RATIONAL_HPP

#include <compare>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace pdc {

/// Exact rational number with 64-bit numerator and positive denominator.
/// Arithmetic throws std::overflow_error instead of wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num);  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  /// "p" or "p/q".
  std::string str() const;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Gaussian rational re + i*im, the coefficient field of the moment generator.
struct Coefficient {
  Rational re;
  Rational im;

  Coefficient() = default;
  Coefficient(Rational r) : re(r) {}  // NOLINT(google-explicit-constructor)
  Coefficient(std::int64_t r) : re(r) {}  // NOLINT(google-explicit-constructor)
  Coefficient(Rational r, Rational i) : re(r), im(i) {}

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool is_real() const { return im.is_zero(); }
  Coefficient conj() const { return {re, -im}; }
  std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }

  Coefficient operator-() const { return {-re, -im}; }
  Coefficient& operator+=(const Coefficient& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Coefficient& operator-=(const Coefficient& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Coefficient& operator*=(const Coefficient& o) {
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = r;
    im = i;
    return *this;
  }
  friend Coefficient operator+(Coefficient a, const Coefficient& b) { return a += b; }
  friend Coefficient operator-(Coefficient a, const Coefficient& b) { return a -= b; }
  friend Coefficient operator*(Coefficient a, const Coefficient& b) { return a *= b; }
  friend bool operator==(const Coefficient&, const Coefficient&) = default;

  std::string str() const;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);
std::ostream& operator<<(std::ostream& os, const Coefficient& c);

}  // namespace pdc

#endif  // PDC_RATIONAL_HPP
