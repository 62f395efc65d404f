#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ncpii {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SingularValue : public std::runtime_error {
public:
    SingularValue(const std::string& what, double condition)
        : std::runtime_error(what), condition_(condition) {}
    double condition() const { return condition_; }

private:
    double condition_;
};

// Inverses are refused above this condition estimate.
inline constexpr double kMaxCondition = 1e12;

// A d x d complex matrix standing in for an element of the noncommutative
// ring; d = 1 is the commutative (scalar) case.
class RingValue {
public:
    RingValue() : m_(CMatrix::Zero(1, 1)) {}
    explicit RingValue(CMatrix m);
    RingValue(cplx scalar) : m_(CMatrix::Constant(1, 1, scalar)) {}  // NOLINT(implicit)
    RingValue(double scalar) : RingValue(cplx(scalar, 0.0)) {}       // NOLINT(implicit)

    static RingValue identity(int d) { return RingValue(CMatrix::Identity(d, d)); }
    static RingValue zero(int d) { return RingValue(CMatrix::Zero(d, d)); }
    static RingValue scalar(cplx s, int d) { return RingValue(CMatrix(s * CMatrix::Identity(d, d))); }

    int dim() const { return static_cast<int>(m_.rows()); }
    const CMatrix& matrix() const { return m_; }
    cplx operator()(int r, int c) const { return m_(r, c); }

    // Throws SingularValue when the reciprocal condition estimate says the
    // matrix is numerically singular (condition > kMaxCondition).
    RingValue inverse() const;
    double condition_estimate() const;

    double norm() const { return m_.norm(); }  // Frobenius

    RingValue& operator+=(const RingValue& o);
    RingValue& operator-=(const RingValue& o);
    RingValue& operator*=(cplx s) {
        m_ *= s;
        return *this;
    }

    friend RingValue operator+(RingValue a, const RingValue& b) { return a += b; }
    friend RingValue operator-(RingValue a, const RingValue& b) { return a -= b; }
    friend RingValue operator-(const RingValue& a) { return RingValue(CMatrix(-a.m_)); }
    friend RingValue operator*(const RingValue& a, const RingValue& b);
    friend RingValue operator*(cplx s, RingValue a) { return a *= s; }
    friend RingValue operator*(RingValue a, cplx s) { return a *= s; }
    friend RingValue operator*(double s, RingValue a) { return a *= cplx(s, 0.0); }

private:
    void check_same_dim(const RingValue& o, const char* op) const;
    CMatrix m_;
};

// Frobenius distance relative to the norm of the reference (absolute when the
// reference vanishes).
double relative_error(const RingValue& value, const RingValue& reference);

}  // namespace ncpii
