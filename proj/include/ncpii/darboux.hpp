#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ncpii/grid.hpp"
#include "ncpii/laxzc.hpp"
#include "ncpii/qdet.hpp"

namespace ncpii {

class PointwiseSingularity : public std::runtime_error {
public:
    PointwiseSingularity(const std::string& what, std::vector<double> zs);
    const std::vector<double>& locations() const { return zs_; }

private:
    std::vector<double> zs_;
};

// One solution (X, Y) of a linear system at spectral value lambda. For the
// NC PII system X is chi and Y is Phi.
struct EigenSolution {
    cplx lambda;
    GridFunction X, Y;
};

// Slot 0 is the solution being transformed ("arbitrary" solution), slots
// 1..N are the particular solutions. Every slot is verified against its
// linear system on construction.
class EigenData {
public:
    EigenData(LinearSystemKind kind, GridFunction q, std::vector<EigenSolution> slots, double tol_residual = 1e-5);

    LinearSystemKind kind() const { return kind_; }
    const GridFunction& q() const { return q_; }
    int size() const { return static_cast<int>(slots_.size()); }
    const EigenSolution& operator[](int k) const { return slots_.at(static_cast<std::size_t>(k)); }
    double max_ingestion_residual() const { return max_residual_; }

    // Integrates each lambda from the given initial values on the grid of q.
    static EigenData integrate(LinearSystemKind kind, const GridFunction& q, const std::vector<cplx>& lambdas,
                               const std::vector<std::pair<RingValue, RingValue>>& init, double tol_residual = 1e-5);

private:
    LinearSystemKind kind_;
    GridFunction q_;
    std::vector<EigenSolution> slots_;
    double max_residual_ = 0.0;
};

// Max over the grid of ||X' - M X|| for one solution, derivatives by finite differences.
double linear_system_residual(LinearSystemKind kind, const GridFunction& q, const EigenSolution& s);

// X[1] = l Y - l1 Y1 X1^-1 X, Y[1] = l X - l1 X1 Y1^-1 Y.
struct TransformedPair {
    GridFunction X, Y;
};
TransformedPair transform_eigenfunctions(const GridFunction& X, const GridFunction& Y, const GridFunction& X1,
                                         const GridFunction& Y1, cplx lambda, cplx lambda1);

// q[1] = s q s with s = Y1 X1^-1.
GridFunction one_fold_q(const GridFunction& q, const GridFunction& X1, const GridFunction& Y1);

struct CovarianceReport {
    ResidualReport combined;  // both lines
    ResidualReport x_line;    // X[1]' - l X[1] - q[1] Y[1]
    ResidualReport y_line;    // Y[1]' - l Y[1] - q[1] X[1]
};

// Measures how far the transformed pair is from solving the transformed
// system. Points within `pole_radius` of a singular s (condition above the
// refusal threshold) are masked.
CovarianceReport covariance_diagnostic(const GridFunction& q1, const TransformedPair& t, cplx lambda,
                                       const std::vector<bool>& poles = {}, int pole_radius = 3);

// Pole flags of s = Y1 X1^-1 (true where X1 is numerically singular or s is huge).
std::vector<bool> pole_mask(const GridFunction& X1, const GridFunction& Y1, double threshold = 1e8);

enum class ArrayKind { X, Y };
enum class Parity { Odd, Even };

// A column of the alternating array: row r holds weight^r times the primary
// component for even r and the secondary component for odd r.
template <typename T, typename W>
struct ArrayColumn {
    W weight;
    T primary;
    T secondary;
};

// Generic alternating array with columns in the given order; the boxed entry
// is the bottom-right one.
SquareArray<RingValue> alternating_array(const std::vector<ArrayColumn<RingValue, cplx>>& columns);
SquareArray<NCExpr> alternating_array(const std::vector<ArrayColumn<NCExpr, NCExpr>>& columns);

// The (N+1) x (N+1) array with columns N, N-1, ..., 1, 0 of E at grid point
// k. Parity names the order N+1 and must match it.
SquareArray<RingValue> build_upsilon(const EigenData& E, int N, ArrayKind kind, Parity parity, int k);
// Symbolic counterpart over generators X0..XN, Y0..YN and central weights
// lambda0..lambdaN.
SquareArray<NCExpr> build_upsilon_symbolic(int N, ArrayKind kind);

// Theta_k[k] = Omega^Y Omega^X^-1 at grid point p, the arrays having columns
// k-1, ..., 1 and the target column k.
RingValue theta_quasideterminant(const EigenData& E, int k, int p);
// The same factor from the iterated one-fold transformation of the
// particular solutions.
std::vector<GridFunction> theta_product_form(const EigenData& E, int N);
std::vector<GridFunction> theta_quasideterminant_form(const EigenData& E, int N);

// q[N] = Theta_N ... Theta_1 q Theta_1 ... Theta_N.
GridFunction sandwich_inner_first(const GridFunction& q, const std::vector<GridFunction>& thetas);
GridFunction phi_n_fold(const GridFunction& phi, const EigenData& E, int N);
GridFunction phi_n_fold_product(const GridFunction& phi, const EigenData& E, int N);
inline GridFunction psi_n_fold(const GridFunction& psi, const EigenData& E, int N) { return phi_n_fold(psi, E, N); }

// u[N+1] = Theta_1 ... Theta_N u Theta_N ... Theta_1 with
// Theta_k = Lambda^phi Lambda^chi^-1 over NC PII eigen data (X = chi, Y = Phi).
GridFunction ncpii_n_fold(const GridFunction& u_seed, const EigenData& E_pii, int N);

double max_relative_error(const GridFunction& a, const GridFunction& b);

}  // namespace ncpii
