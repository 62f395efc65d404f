#include "ncpii/ring_value.hpp"

#include <cmath>
#include <limits>

namespace ncpii {

RingValue::RingValue(CMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() < 1) throw DimensionMismatch("ring value must be a non-empty square matrix");
}

void RingValue::check_same_dim(const RingValue& o, const char* op) const {
    if (dim() != o.dim())
        throw DimensionMismatch(std::string("dimension mismatch in ") + op + ": " + std::to_string(dim()) + " vs " +
                                std::to_string(o.dim()));
}

RingValue& RingValue::operator+=(const RingValue& o) {
    check_same_dim(o, "+");
    m_ += o.m_;
    return *this;
}

RingValue& RingValue::operator-=(const RingValue& o) {
    check_same_dim(o, "-");
    m_ -= o.m_;
    return *this;
}

RingValue operator*(const RingValue& a, const RingValue& b) {
    a.check_same_dim(b, "*");
    return RingValue(CMatrix(a.m_ * b.m_));
}

double RingValue::condition_estimate() const {
    if (dim() == 1) return m_(0, 0) == cplx(0.0, 0.0) ? std::numeric_limits<double>::infinity() : 1.0;
    Eigen::PartialPivLU<CMatrix> lu(m_);
    double rc = lu.rcond();
    if (!(rc > 0.0)) return std::numeric_limits<double>::infinity();
    return 1.0 / rc;
}

RingValue RingValue::inverse() const {
    if (dim() == 1) {
        cplx v = m_(0, 0);
        if (std::abs(v) == 0.0 || !std::isfinite(std::abs(v)))
            throw SingularValue("scalar ring value is not invertible", std::numeric_limits<double>::infinity());
        return RingValue(1.0 / v);
    }
    Eigen::PartialPivLU<CMatrix> lu(m_);
    double rc = lu.rcond();
    double cond = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
    if (!(cond <= kMaxCondition)) throw SingularValue("ring value is numerically singular", cond);
    return RingValue(CMatrix(lu.inverse()));
}

double relative_error(const RingValue& value, const RingValue& reference) {
    double diff = (value - reference).norm();
    double ref = reference.norm();
    return ref > 0.0 ? diff / ref : diff;
}

}  // namespace ncpii
