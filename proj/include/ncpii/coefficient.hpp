#pragma once

#include <complex>
#include <cstdint>
#include <string>

namespace ncpii {

// Exact rational with 64-bit numerator/denominator. Intermediate products are
// carried in 128 bits; a result that does not fit throws std::overflow_error.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t n) : num_(n) {}  // NOLINT(implicit)
    Rational(std::int64_t n, std::int64_t d);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    Rational operator-() const;
    Rational inverse() const;

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    friend bool operator==(const Rational& a, const Rational& b) = default;
    friend auto operator<=>(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
    }

    // "3", "-1/4"
    std::string str() const;

    // Parses an unsigned decimal literal ("12", "0.25", "1e-3", "2.5E+2") exactly.
    static Rational from_decimal(const std::string& text);

private:
    static Rational make(__int128 n, __int128 d);
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

// a + b i with rational a, b. The symbolic layer never touches floating point.
class Gaussian {
public:
    Gaussian() = default;
    Gaussian(Rational re) : re_(re) {}  // NOLINT(implicit)
    Gaussian(std::int64_t re) : re_(re) {}  // NOLINT(implicit)
    Gaussian(Rational re, Rational im) : re_(re), im_(im) {}

    static Gaussian i() { return {Rational(0), Rational(1)}; }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    bool is_real() const { return im_.is_zero(); }
    bool is_one() const { return re_ == Rational(1) && im_.is_zero(); }

    Gaussian operator-() const { return {-re_, -im_}; }
    Gaussian conj() const { return {re_, -im_}; }
    Gaussian inverse() const;

    friend Gaussian operator+(const Gaussian& a, const Gaussian& b) { return {a.re_ + b.re_, a.im_ + b.im_}; }
    friend Gaussian operator-(const Gaussian& a, const Gaussian& b) { return {a.re_ - b.re_, a.im_ - b.im_}; }
    friend Gaussian operator*(const Gaussian& a, const Gaussian& b) {
        return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
    }
    friend Gaussian operator/(const Gaussian& a, const Gaussian& b) { return a * b.inverse(); }
    friend bool operator==(const Gaussian& a, const Gaussian& b) = default;

    std::complex<double> to_complex() const { return {re_.to_double(), im_.to_double()}; }

    // Source-text rendering accepted back by the expression parser:
    // "2", "-1/3", "i", "3*i", "(1/2+2*i)".
    std::string str() const;

private:
    Rational re_;
    Rational im_;
};

}  // namespace ncpii
