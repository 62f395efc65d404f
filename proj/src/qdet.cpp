#include "ncpii/qdet.hpp"

#include <bit>
#include <unordered_map>

namespace ncpii {

SingularQuasideterminant::SingularQuasideterminant(std::vector<int> rows, std::vector<int> cols, int p, int q,
                                                   const std::string& why)
    : std::runtime_error([&] {
          std::string s = "singular inner quasideterminant at (" + std::to_string(p) + "," + std::to_string(q) +
                          ") of the minor with rows {";
          for (std::size_t k = 0; k < rows.size(); ++k) s += (k ? "," : "") + std::to_string(rows[k]);
          s += "} cols {";
          for (std::size_t k = 0; k < cols.size(); ++k) s += (k ? "," : "") + std::to_string(cols[k]);
          return s + "}: " + why;
      }()),
      rows_(std::move(rows)),
      cols_(std::move(cols)),
      p_(p),
      q_(q) {}

namespace {

std::vector<int> mask_indices(std::uint32_t mask) {
    std::vector<int> out;
    for (int k = 0; k < 32; ++k)
        if (mask & (1u << k)) out.push_back(k + 1);
    return out;
}

template <typename T>
class QuasiEvaluator {
public:
    explicit QuasiEvaluator(const SquareArray<T>& A) : A_(A) {
        if (A.order() > 16) throw std::invalid_argument("quasideterminant order above 16 is not supported");
    }

    T at(int i, int j) {
        const std::uint32_t full = (1u << A_.order()) - 1u;
        return eval(full, full, i - 1, j - 1);
    }

private:
    using Key = std::uint64_t;

    static Key key(std::uint32_t rm, std::uint32_t cm, int i, int j) {
        return (static_cast<Key>(rm) << 40) | (static_cast<Key>(cm) << 16) | (static_cast<Key>(i) << 8) |
               static_cast<Key>(j);
    }

    const T& inverse_of(std::uint32_t rm, std::uint32_t cm, int p, int q) {
        Key k = key(rm, cm, p, q);
        if (auto it = inv_memo_.find(k); it != inv_memo_.end()) return it->second;
        T v = eval(rm, cm, p, q);
        try {
            return inv_memo_.emplace(k, v.inverse()).first->second;
        } catch (const std::exception& ex) {
            throw SingularQuasideterminant(mask_indices(rm), mask_indices(cm), p + 1, q + 1, ex.what());
        }
    }

    T eval(std::uint32_t rm, std::uint32_t cm, int i, int j) {
        Key k = key(rm, cm, i, j);
        if (auto it = memo_.find(k); it != memo_.end()) return it->second;
        T result = A_(i + 1, j + 1);
        if (std::popcount(rm) > 1) {
            const std::uint32_t rm2 = rm & ~(1u << i);
            const std::uint32_t cm2 = cm & ~(1u << j);
            for (int p = 0; p < A_.order(); ++p) {
                if (!(rm2 & (1u << p))) continue;
                for (int q = 0; q < A_.order(); ++q) {
                    if (!(cm2 & (1u << q))) continue;
                    result = result - A_(i + 1, q + 1) * inverse_of(rm2, cm2, p, q) * A_(p + 1, j + 1);
                }
            }
        }
        return memo_.emplace(k, std::move(result)).first->second;
    }

    const SquareArray<T>& A_;
    std::unordered_map<Key, T> memo_;
    std::unordered_map<Key, T> inv_memo_;
};

template <typename T>
void check_position(const SquareArray<T>& A, int i, int j) {
    if (i < 1 || j < 1 || i > A.order() || j > A.order())
        throw std::out_of_range("quasideterminant position (" + std::to_string(i) + "," + std::to_string(j) +
                                ") outside a " + std::to_string(A.order()) + "x" + std::to_string(A.order()) +
                                " array");
}

void check_uniform(const SquareArray<RingValue>& A) {
    const int d = A(1, 1).dim();
    for (int r = 1; r <= A.order(); ++r)
        for (int c = 1; c <= A.order(); ++c)
            if (A(r, c).dim() != d) throw DimensionMismatch("square array entries must share one dimension");
}

cplx det_without(const CMatrix& m, int i, int j) {
    const int n = static_cast<int>(m.rows());
    CMatrix minor(n - 1, n - 1);
    for (int r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (int c = 0, cc = 0; c < n; ++c) {
            if (c == j) continue;
            minor(rr, cc++) = m(r, c);
        }
        ++rr;
    }
    return minor.determinant();
}

}  // namespace

RingValue quasideterminant(const SquareArray<RingValue>& A, int i, int j) {
    check_position(A, i, j);
    check_uniform(A);
    return QuasiEvaluator<RingValue>(A).at(i, j);
}

NCExpr quasideterminant(const SquareArray<NCExpr>& A, int i, int j) {
    check_position(A, i, j);
    return QuasiEvaluator<NCExpr>(A).at(i, j);
}

std::vector<RingValue> all_quasideterminants(const SquareArray<RingValue>& A) {
    check_uniform(A);
    QuasiEvaluator<RingValue> ev(A);
    std::vector<RingValue> out;
    for (int i = 1; i <= A.order(); ++i)
        for (int j = 1; j <= A.order(); ++j) out.push_back(ev.at(i, j));
    return out;
}

CMatrix flatten(const SquareArray<RingValue>& A) {
    check_uniform(A);
    const int n = A.order(), d = A(1, 1).dim();
    CMatrix m(n * d, n * d);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m.block(r * d, c * d, d, d) = A(r + 1, c + 1).matrix();
    return m;
}

RingValue inverse_entry_oracle(const SquareArray<RingValue>& A, int i, int j) {
    check_position(A, i, j);
    const int d = A(1, 1).dim();
    RingValue big(flatten(A));
    RingValue binv;
    try {
        binv = big.inverse();
    } catch (const SingularValue& ex) {
        throw SingularValue(std::string("flattened matrix: ") + ex.what(), ex.condition());
    }
    RingValue block(CMatrix(binv.matrix().block((j - 1) * d, (i - 1) * d, d, d)));
    try {
        return block.inverse();
    } catch (const SingularValue& ex) {
        throw SingularValue("block (" + std::to_string(j) + "," + std::to_string(i) + ") of the inverse: " + ex.what(),
                            ex.condition());
    }
}

double commutative_reduction_check(const SquareArray<RingValue>& A, int i, int j) {
    check_position(A, i, j);
    if (A(1, 1).dim() != 1) throw DimensionMismatch("commutative reduction needs scalar entries");
    CMatrix m = flatten(A);
    cplx minor = A.order() == 1 ? cplx(1.0, 0.0) : det_without(m, i - 1, j - 1);
    if (std::abs(minor) < 1e-300) throw SingularValue("vanishing minor determinant", std::numeric_limits<double>::infinity());
    const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
    cplx ratio = sign * m.determinant() / minor;
    return std::abs(quasideterminant(A, i, j)(0, 0) - ratio);
}

SquareArray<RingValue> random_array(int n, int d, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SquareArray<RingValue> A(n, RingValue::zero(d));
    for (int r = 1; r <= n; ++r)
        for (int c = 1; c <= n; ++c) {
            CMatrix m(d, d);
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) {
                    const double re = u(rng);
                    const double im = u(rng);
                    m(a, b) = cplx(re, im);
                }
            if (r == c) m += 2.0 * CMatrix::Identity(d, d);
            A(r, c) = RingValue(m);
        }
    return A;
}

}  // namespace ncpii
