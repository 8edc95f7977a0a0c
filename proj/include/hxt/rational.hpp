#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hxt {

// Exact rational over 64-bit num/den with 128-bit intermediates. All
// normalized-degree thresholds and comparisons go through this type; floating
// point is reserved for sampling parameters and report output.
struct Rational {
  long long num{0};
  long long den{1};

  Rational() = default;
  Rational(long long n) : num(n), den(1) {}
  Rational(long long n, long long d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  static Rational reduce128(__int128 n, __int128 d) {
    if (d == 0) throw std::invalid_argument("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n, b = d;
    while (b) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      n /= a;
      d /= a;
    }
    constexpr __int128 lim = 0x7FFFFFFFFFFFFFFFLL;
    if (n > lim || n < -lim || d > lim)
      throw std::overflow_error("rational overflow");
    Rational r;
    r.num = static_cast<long long>(n);
    r.den = static_cast<long long>(d);
    return r;
  }

  Rational operator+(const Rational& o) const {
    return reduce128(static_cast<__int128>(num) * o.den + static_cast<__int128>(o.num) * den,
                     static_cast<__int128>(den) * o.den);
  }
  Rational operator-(const Rational& o) const {
    return reduce128(static_cast<__int128>(num) * o.den - static_cast<__int128>(o.num) * den,
                     static_cast<__int128>(den) * o.den);
  }
  Rational operator*(const Rational& o) const {
    return reduce128(static_cast<__int128>(num) * o.num, static_cast<__int128>(den) * o.den);
  }
  Rational operator/(const Rational& o) const {
    if (o.num == 0) throw std::invalid_argument("rational division by zero");
    return reduce128(static_cast<__int128>(num) * o.den, static_cast<__int128>(den) * o.num);
  }

  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const {
    return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
  }
  bool operator<=(const Rational& o) const { return !(o < *this); }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator>=(const Rational& o) const { return !(*this < o); }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }
};

// Accepts "3", "1/3" and decimal notation like "0.05".
inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    long long n = std::stoll(s.substr(0, slash));
    long long d = std::stoll(s.substr(slash + 1));
    return Rational(n, d);
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) return Rational(std::stoll(s));
  std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
  if (frac.size() > 15) frac = frac.substr(0, 15);
  bool neg = !whole.empty() && whole[0] == '-';
  long long w = whole.empty() || whole == "-" ? 0 : std::stoll(whole);
  long long f = frac.empty() ? 0 : std::stoll(frac);
  long long scale = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
  __int128 n = static_cast<__int128>(w < 0 ? -w : w) * scale + f;
  if (neg || w < 0) n = -n;
  return Rational::reduce128(n, scale);
}

// Exact binomial coefficient; throws on 64-bit overflow instead of wrapping.
inline long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  __int128 r = 1;
  constexpr __int128 lim = 0x7FFFFFFFFFFFFFFFLL;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > lim) throw std::overflow_error("binomial overflow");
  }
  return static_cast<long long>(r);
}

}  // namespace hxt
