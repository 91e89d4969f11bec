#pragma once

// Scalar backends for the series kernel.
//
// The exact backend is Q(i): Gaussian rationals over GMP. The square root
// of the curvature parameter gamma is handled by sampling sqrt_gamma as a
// nonzero rational per environment and setting gamma = sqrt_gamma^2, so
// every coefficient the tower produces stays inside Q(i).
//
// The float backend is std::complex<double> and exists for speed
// comparisons; verification rests on the exact backend.

#include <complex>
#include <cstdint>
#include <gmpxx.h>
#include <optional>
#include <string>
#include <utility>

namespace cmch {

struct GaussRat {
  mpq_class re;
  mpq_class im;

  GaussRat() : re(0), im(0) {}
  GaussRat(long n) : re(n), im(0) {}
  GaussRat(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {}

  static GaussRat make_i() { return GaussRat(mpq_class(0), mpq_class(1)); }

  static GaussRat frac(long num, long den) {
    mpq_class q(num, den);
    q.canonicalize();
    return GaussRat(std::move(q), mpq_class(0));
  }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }

  friend GaussRat operator+(const GaussRat& a, const GaussRat& b) {
    return GaussRat(a.re + b.re, a.im + b.im);
  }
  friend GaussRat operator-(const GaussRat& a, const GaussRat& b) {
    return GaussRat(a.re - b.re, a.im - b.im);
  }
  friend GaussRat operator-(const GaussRat& a) { return GaussRat(-a.re, -a.im); }
  friend GaussRat operator*(const GaussRat& a, const GaussRat& b) {
    return GaussRat(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
  }
  friend GaussRat operator/(const GaussRat& a, const GaussRat& b) {
    mpq_class n2 = b.re * b.re + b.im * b.im;
    return GaussRat((a.re * b.re + a.im * b.im) / n2,
                    (a.im * b.re - a.re * b.im) / n2);
  }
  GaussRat& operator+=(const GaussRat& b) {
    re += b.re;
    im += b.im;
    return *this;
  }
  GaussRat& operator-=(const GaussRat& b) {
    re -= b.re;
    im -= b.im;
    return *this;
  }
  GaussRat& operator*=(const GaussRat& b) { return *this = *this * b; }

  friend bool operator==(const GaussRat& a, const GaussRat& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }
};

// Field operations used generically throughout the kernel.
template <class K>
struct ScalarOps;

template <>
struct ScalarOps<GaussRat> {
  using K = GaussRat;
  static K zero() { return K(); }
  static K one() { return K(1); }
  static K i() { return K::make_i(); }
  static K from_int(long n) { return K(n); }
  static K frac(long n, long d) { return K::frac(n, d); }
  static bool is_zero(const K& a) { return a.is_zero(); }
  static K conj(const K& a) { return K(a.re, -a.im); }

  // Exact square root when one exists in Q(i) with a rational answer.
  static std::optional<K> try_sqrt(const K& a) {
    if (sgn(a.im) != 0 || sgn(a.re) < 0) return std::nullopt;
    mpz_class nr, dr;
    if (!mpz_perfect_square_p(a.re.get_num().get_mpz_t()) ||
        !mpz_perfect_square_p(a.re.get_den().get_mpz_t()))
      return std::nullopt;
    mpz_sqrt(nr.get_mpz_t(), a.re.get_num().get_mpz_t());
    mpz_sqrt(dr.get_mpz_t(), a.re.get_den().get_mpz_t());
    return K(mpq_class(nr) / mpq_class(dr), mpq_class(0));
  }

  static double abs_approx(const K& a) {
    double r = a.re.get_d(), i = a.im.get_d();
    return std::sqrt(r * r + i * i);
  }

  static std::string str(const K& a) {
    std::string s = a.re.get_str();
    if (sgn(a.im) != 0) {
      s += (sgn(a.im) < 0) ? "-" : "+";
      mpq_class m = abs(a.im);
      s += m.get_str() + "*i";
    }
    return s;
  }
};

template <>
struct ScalarOps<std::complex<double>> {
  using K = std::complex<double>;
  static K zero() { return K(0.0, 0.0); }
  static K one() { return K(1.0, 0.0); }
  static K i() { return K(0.0, 1.0); }
  static K from_int(long n) { return K(double(n), 0.0); }
  static K frac(long n, long d) { return K(double(n) / double(d), 0.0); }
  static bool is_zero(const K& a) { return a.real() == 0.0 && a.imag() == 0.0; }
  static K conj(const K& a) { return std::conj(a); }
  static std::optional<K> try_sqrt(const K& a) { return std::sqrt(a); }
  static double abs_approx(const K& a) { return std::abs(a); }
  static std::string str(const K& a) {
    return "(" + std::to_string(a.real()) + "," + std::to_string(a.imag()) + ")";
  }
};

using Exact = GaussRat;
using Fp = std::complex<double>;

}  // namespace cmch
