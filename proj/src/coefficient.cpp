#include "ncpii/coefficient.hpp"

#include <cctype>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ncpii {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool fits64(__int128 v) {
    return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) { *this = make(n, d); }

Rational Rational::make(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    __int128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    if (!fits64(n) || !fits64(d)) throw std::overflow_error("rational coefficient overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
}

Rational Rational::operator-() const { return make(-static_cast<__int128>(num_), den_); }

Rational Rational::inverse() const {
    if (num_ == 0) throw std::domain_error("inverse of zero rational");
    return make(den_, num_);
}

Rational operator+(const Rational& a, const Rational& b) {
    return Rational::make(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                          static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
    return Rational::make(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) { return a * b.inverse(); }

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::from_decimal(const std::string& text) {
    std::size_t pos = 0;
    __int128 mantissa = 0;
    int scale = 0;
    bool any_digit = false;
    auto push_digit = [&](char c) {
        mantissa = mantissa * 10 + (c - '0');
        if (mantissa > static_cast<__int128>(std::numeric_limits<std::int64_t>::max()) * 1000)
            throw std::overflow_error("numeric literal too long: " + text);
        any_digit = true;
    };
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) push_digit(text[pos++]);
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            push_digit(text[pos++]);
            --scale;
        }
    }
    if (!any_digit) throw std::invalid_argument("malformed numeric literal: " + text);
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
        ++pos;
        int sign = 1;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) sign = text[pos++] == '-' ? -1 : 1;
        int exponent = 0;
        bool exp_digit = false;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            exponent = exponent * 10 + (text[pos++] - '0');
            if (exponent > 36) throw std::overflow_error("numeric literal exponent too large: " + text);
            exp_digit = true;
        }
        if (!exp_digit) throw std::invalid_argument("malformed numeric literal: " + text);
        scale += sign * exponent;
    }
    if (pos != text.size()) throw std::invalid_argument("malformed numeric literal: " + text);
    __int128 num = mantissa;
    __int128 den = 1;
    auto pow10 = [](int k) {
        __int128 p = 1;
        for (int j = 0; j < k; ++j) p *= 10;
        return p;
    };
    if (scale > 0) num *= pow10(scale);
    if (scale < 0) den = pow10(-scale);
    return make(num, den);
}

Gaussian Gaussian::inverse() const {
    Rational norm = re_ * re_ + im_ * im_;
    if (norm.is_zero()) throw std::domain_error("inverse of zero coefficient");
    return {re_ / norm, -im_ / norm};
}

std::string Gaussian::str() const {
    if (im_.is_zero()) return re_.str();
    std::string imag;
    if (im_ == Rational(1))
        imag = "i";
    else if (im_ == Rational(-1))
        imag = "-i";
    else
        imag = im_.str() + "*i";
    if (re_.is_zero()) return imag;
    std::string sep = (im_ < Rational(0)) ? "" : "+";
    return "(" + re_.str() + sep + imag + ")";
}

}  // namespace ncpii
