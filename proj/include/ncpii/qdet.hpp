#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "ncpii/ncexpr.hpp"
#include "ncpii/ring_value.hpp"

namespace ncpii {

// n x n array of ring elements (RingValue of one dimension, or NCExpr).
// Indices are 1-based in the public interface, as in the usual notation.
template <typename T>
class SquareArray {
public:
    SquareArray() = default;
    explicit SquareArray(int n, const T& fill = T{}) : n_(n), a_(static_cast<std::size_t>(n * n), fill) {
        if (n < 1) throw std::invalid_argument("square array order must be >= 1");
    }
    SquareArray(std::initializer_list<std::initializer_list<T>> rows);

    int order() const { return n_; }
    T& operator()(int i, int j) { return a_[index(i, j)]; }
    const T& operator()(int i, int j) const { return a_[index(i, j)]; }

private:
    std::size_t index(int i, int j) const {
        if (i < 1 || j < 1 || i > n_ || j > n_) throw std::out_of_range("square array index out of range");
        return static_cast<std::size_t>((i - 1) * n_ + (j - 1));
    }
    int n_ = 0;
    std::vector<T> a_;
};

template <typename T>
SquareArray<T>::SquareArray(std::initializer_list<std::initializer_list<T>> rows) {
    n_ = static_cast<int>(rows.size());
    if (n_ < 1) throw std::invalid_argument("square array order must be >= 1");
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != n_) throw std::invalid_argument("square array rows must have length n");
        a_.insert(a_.end(), r.begin(), r.end());
    }
}

// Raised when an inner quasideterminant cannot be inverted. Rows and columns
// are the 1-based indices still present in the minor; (p,q) is the position.
class SingularQuasideterminant : public std::runtime_error {
public:
    SingularQuasideterminant(std::vector<int> rows, std::vector<int> cols, int p, int q, const std::string& why);
    const std::vector<int>& rows() const { return rows_; }
    const std::vector<int>& cols() const { return cols_; }
    int p() const { return p_; }
    int q() const { return q_; }

private:
    std::vector<int> rows_, cols_;
    int p_, q_;
};

// |A|_ij by the recursive minor expansion
//   |A|_ij = a_ij - sum_{p != i, q != j} a_iq |A^{ij}|_pq^{-1} a_pj,
// memoized on (row mask, column mask, position). Orders up to 16.
RingValue quasideterminant(const SquareArray<RingValue>& A, int i, int j);
NCExpr quasideterminant(const SquareArray<NCExpr>& A, int i, int j);

// All n^2 quasideterminants, row-major, sharing one memo table.
std::vector<RingValue> all_quasideterminants(const SquareArray<RingValue>& A);

// Inverts the flattened (n d) x (n d) matrix B = A^-1 and returns the inverse
// of its (j,i) block, i.e. |A|_ij = (b_ji)^-1 in block form.
RingValue inverse_entry_oracle(const SquareArray<RingValue>& A, int i, int j);

// |quasideterminant - (-1)^{i+j} det A / det A^{ij}| for scalar (d = 1) entries.
double commutative_reduction_check(const SquareArray<RingValue>& A, int i, int j);

// Entries uniform in [0,1] + i[0,1], then 2 added on the diagonal of the
// flattened matrix so that minors stay well conditioned.
SquareArray<RingValue> random_array(int n, int d, std::mt19937_64& rng);

CMatrix flatten(const SquareArray<RingValue>& A);

}  // namespace ncpii
