#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ncpii/grid.hpp"
#include "ncpii/ncexpr.hpp"
#include "ncpii/qdet.hpp"
#include "ncpii/rewrite.hpp"

namespace ncpii {

using Mat2 = SquareArray<NCExpr>;

Mat2 pauli1();
Mat2 pauli2();
Mat2 pauli3();
Mat2 identity2();
Mat2 sigma_lower();  // diag(0, 1)

Mat2 operator+(const Mat2& a, const Mat2& b);
Mat2 operator-(const Mat2& a, const Mat2& b);
Mat2 operator*(const Mat2& a, const Mat2& b);
Mat2 operator*(const NCExpr& s, const Mat2& a);  // s * a_ij
Mat2 entrywise(const Mat2& a, const std::function<NCExpr(const NCExpr&)>& f);
bool is_zero(const Mat2& a);

// A is the lambda-part, B the z-part: Psi_lambda = A Psi, Psi_z = B Psi.
struct LaxPair {
    std::string name;
    Mat2 A;
    Mat2 B;
};

// A = (8i l^2 + i u^2 - 2i z) s3 + u' s2 + (C/4 l^-1 - 4 l u) s1,
// B = -2i l s3 + u s1.
LaxPair build_ncpii_lax(const std::string& u = "u", const std::string& C = "C");

// L = 2 l^2 I - q' i s2 + (-q^2 - 2 phi psi) s3 - 4 z Sigma, M = q s1 + l I.
LaxPair build_toda_lax(const std::string& q = "q", const std::string& phi = "phi", const std::string& psi = "psi");

struct QuantumLaxOptions {
    bool hbar_sigma2 = true;  // the + i hbar s2 term of A
    bool f2_identity = true;  // the + f2 I term of B
    std::string f2 = "f2";
    std::string c = "c";
};
LaxPair build_quantum_lax(const QuantumLaxOptions& opt = {});

struct ZeroCurvatureParts {
    Mat2 Az_minus_Bl;  // A_z - B_lambda, normal-formed
    Mat2 commutator;   // BA - AB, normal-formed
    Mat2 residual;     // A_z - B_lambda - (BA - AB), normal-formed and reduced
};

// Rewrite system R extended by every quotient relation (oriented by its
// leading word) together with its first `closure` z-derivatives.
RewriteSystem quotient_system(const RewriteSystem& R, const std::vector<NCExpr>& quotient, int closure = 1);

ZeroCurvatureParts zero_curvature_symbolic(const LaxPair& P, const RewriteSystem& R,
                                           const std::vector<NCExpr>& quotient = {}, int closure = 1);

// Reference entry expressions for the Toda pair, compared term by term.
Mat2 toda_reference_Az_minus_Bl(const std::string& q = "q");
Mat2 toda_reference_commutator(const std::string& q = "q");
// phi psi + q^2 - z and q'' + 2 q phi psi + 2 q^3 + 2 phi psi q - 2 q z - 2 z q.
std::vector<NCExpr> toda_quotient(const std::string& q = "q");
// u'' - 2u^3 + 2(zu + uz) - C.
NCExpr ncpii_relation(const std::string& u = "u", const std::string& C = "C");

struct QuantumDerivation {
    // (a) kappa from the diagonal under ZF with symbolic kappa.
    Mat2 diagonal_raw;  // residual diagonal before ZF
    NCExpr kappa;       // solution, central
    bool kappa_unique = false;
    bool kappa_linear_in_hbar = false;
    bool diagonal_annihilated = false;

    // Lemma [f2', f2] from f2' = f1 - f0 under the rescaled commutation rules.
    NCExpr lemma_computed;
    NCExpr lemma_reference;  // -4 lambda hbar
    NCExpr lemma_unscaled;  // the same computation under the unscaled rules

    // (b) off-diagonal residual versus mp i (f2'' - 2f2^3 + 2[z,f2]_+ - c).
    NCExpr pii_expression;
    NCExpr offdiag12_reference_lemma;   // residual(1,2) - (-i) pii, with the reference lemma
    NCExpr offdiag21_reference_lemma;   // residual(2,1) - (+i) pii
    NCExpr offdiag12_computed_lemma;
    NCExpr offdiag21_computed_lemma;
    bool offdiag_reduces_reference = false;
    bool offdiag_reduces_computed = false;

    // (c) hbar -> 0: residual with z central, compared with the classical one.
    Mat2 classical_limit;
    bool classical_limit_ok = false;

    // The hbar = 0 quantum pair (f2 I dropped, f2 -> u, c -> C) equals the
    // NC PII pair entrywise.
    bool reduces_to_ncpii_pair = false;
};

QuantumDerivation quantum_pii_derivation();

enum class LinearSystemKind { Toda, NcPii, Quantum };

// (X, Y)_z = M(z) (X, Y) with the 2x2 block matrix
//   Toda:    [[l, q], [q, l]]
//   NcPii:   [[-2i l, q], [q, 2i l]]
//   Quantum: [[-2i l + q, q], [q, 2i l + q]]
// Classical RK4 on the grid of q; q at half steps by cubic interpolation.
struct LinearSolution {
    GridFunction X, Y;
};
LinearSolution integrate_linear_system(LinearSystemKind kind, cplx lambda, const GridFunction& q, const RingValue& X0,
                                       const RingValue& Y0);
CMatrix linear_system_matrix(LinearSystemKind kind, cplx lambda, const RingValue& q);

// Numeric zero-curvature residual ||A_z - B_lambda - (BA - AB)||_F per point.
// `fields` binds generator names to grids; primed atoms are taken from the
// map when present ("u'") and otherwise by finite differences. z is bound to
// z*I, central parameters from `params` (lambda is swept over `lambdas`).
struct NumericZeroCurvature {
    std::vector<ResidualReport> per_lambda;
    double max_residual = 0.0;
};
NumericZeroCurvature zero_curvature_numeric(const LaxPair& P, const std::map<std::string, GridFunction>& fields,
                                            const std::vector<cplx>& lambdas, const std::map<std::string, cplx>& params,
                                            double tolerance);

// Symbolic residual A_z - B_lambda - (BA - AB) without any reduction.
Mat2 zero_curvature_expression(const LaxPair& P);

}  // namespace ncpii
