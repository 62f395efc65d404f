#include "ncpii/laxzc.hpp"

#include <set>

#include "ncpii/exprio.hpp"
#include "ncpii/realize.hpp"

namespace ncpii {

namespace {

NCExpr g(const std::string& name, int prime = 0) { return NCExpr::generator(name, prime); }
NCExpr cen(const std::string& name, int power = 1) { return NCExpr::central(name, power); }
const NCExpr I_ = NCExpr::imag();

Mat2 make2(NCExpr a, NCExpr b, NCExpr c, NCExpr d) {
    Mat2 m(2);
    m(1, 1) = std::move(a);
    m(1, 2) = std::move(b);
    m(2, 1) = std::move(c);
    m(2, 2) = std::move(d);
    return m;
}

Mat2 normal_form(const Mat2& m, const RewriteSystem& rs) {
    return entrywise(m, [&](const NCExpr& e) { return ncpii::normal_form(e, rs); });
}

}  // namespace

Mat2 pauli1() { return make2(0, 1, 1, 0); }
Mat2 pauli2() { return make2(0, -I_, I_, 0); }
Mat2 pauli3() { return make2(1, 0, 0, -1); }
Mat2 identity2() { return make2(1, 0, 0, 1); }
Mat2 sigma_lower() { return make2(0, 0, 0, 1); }

Mat2 operator+(const Mat2& a, const Mat2& b) {
    Mat2 r(2);
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) r(i, j) = a(i, j) + b(i, j);
    return r;
}

Mat2 operator-(const Mat2& a, const Mat2& b) {
    Mat2 r(2);
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) r(i, j) = a(i, j) - b(i, j);
    return r;
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
    Mat2 r(2);
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) r(i, j) = a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
    return r;
}

Mat2 operator*(const NCExpr& s, const Mat2& a) {
    return entrywise(a, [&](const NCExpr& e) { return s * e; });
}

Mat2 entrywise(const Mat2& a, const std::function<NCExpr(const NCExpr&)>& f) {
    Mat2 r(a.order());
    for (int i = 1; i <= a.order(); ++i)
        for (int j = 1; j <= a.order(); ++j) r(i, j) = f(a(i, j));
    return r;
}

bool is_zero(const Mat2& a) {
    for (int i = 1; i <= a.order(); ++i)
        for (int j = 1; j <= a.order(); ++j)
            if (!a(i, j).is_zero()) return false;
    return true;
}

LaxPair build_ncpii_lax(const std::string& u_name, const std::string& C_name) {
    const NCExpr u = g(u_name), du = g(u_name, 1), z = g("z"), lam = cen("lambda");
    const NCExpr C = NCExpr::symbol(C_name);
    const NCExpr quarter = NCExpr(Gaussian(Rational(1, 4)));
    LaxPair P;
    P.name = "ncpii";
    P.A = (I_ * (Gaussian(8) * lam * lam + u * u - Gaussian(2) * z)) * pauli3() + du * pauli2() +
          (quarter * C * cen("lambda", -1) - Gaussian(4) * lam * u) * pauli1();
    P.B = (Gaussian(-2) * I_ * lam) * pauli3() + u * pauli1();
    return P;
}

LaxPair build_toda_lax(const std::string& q_name, const std::string& phi, const std::string& psi) {
    const NCExpr q = g(q_name), dq = g(q_name, 1), z = g("z"), lam = cen("lambda");
    const NCExpr pp = g(phi) * g(psi);
    LaxPair P;
    P.name = "toda";
    P.A = (Gaussian(2) * lam * lam) * identity2() - dq * (I_ * pauli2()) + (-(q * q) - Gaussian(2) * pp) * pauli3() -
          (Gaussian(4) * z) * sigma_lower();
    P.B = q * pauli1() + lam * identity2();
    return P;
}

LaxPair build_quantum_lax(const QuantumLaxOptions& opt) {
    const NCExpr f = g(opt.f2), df = g(opt.f2, 1), z = g("z"), lam = cen("lambda"), hbar = cen("hbar");
    const NCExpr c = NCExpr::symbol(opt.c);
    const NCExpr quarter = NCExpr(Gaussian(Rational(1, 4)));
    LaxPair P;
    P.name = "quantum";
    P.A = (I_ * (Gaussian(8) * lam * lam + f * f - Gaussian(2) * z)) * pauli3() + df * pauli2() +
          (quarter * c * cen("lambda", -1) - Gaussian(4) * lam * f) * pauli1();
    if (opt.hbar_sigma2) P.A = P.A + (I_ * hbar) * pauli2();
    P.B = (Gaussian(-2) * I_ * lam) * pauli3() + f * pauli1();
    if (opt.f2_identity) P.B = P.B + f * identity2();
    return P;
}

Mat2 zero_curvature_expression(const LaxPair& P) {
    Mat2 Az = entrywise(P.A, [](const NCExpr& e) { return derive(e); });
    Mat2 Bl = entrywise(P.B, [](const NCExpr& e) { return derive_central(e, "lambda"); });
    return (Az - Bl) - (P.B * P.A - P.A * P.B);
}

RewriteSystem quotient_system(const RewriteSystem& R, const std::vector<NCExpr>& quotient, int closure) {
    RewriteSystem out = R;
    for (const auto& rel : quotient) {
        NCExpr r = rel;
        for (int k = 0; k <= closure; ++k) {
            NCExpr reduced = ncpii::normal_form(r, out);
            if (!reduced.is_zero()) out.add_relation(reduced, "quotient");
            r = derive(r);
        }
    }
    return out;
}

ZeroCurvatureParts zero_curvature_symbolic(const LaxPair& P, const RewriteSystem& R, const std::vector<NCExpr>& quotient,
                                           int closure) {
    Mat2 Az = entrywise(P.A, [](const NCExpr& e) { return derive(e); });
    Mat2 Bl = entrywise(P.B, [](const NCExpr& e) { return derive_central(e, "lambda"); });
    ZeroCurvatureParts parts;
    parts.Az_minus_Bl = normal_form(Az - Bl, R);
    parts.commutator = normal_form(P.B * P.A - P.A * P.B, R);
    RewriteSystem Q = quotient.empty() ? R : quotient_system(R, quotient, closure);
    parts.residual = normal_form((Az - Bl) - (P.B * P.A - P.A * P.B), Q);
    return parts;
}

Mat2 toda_reference_Az_minus_Bl(const std::string& q) {
    auto p = [&](const std::string& s) {
        std::string t = s;
        for (std::size_t pos = 0; (pos = t.find("Q", pos)) != std::string::npos;) t.replace(pos, 1, q);
        return parse_expression(t);
    };
    return make2(p("-2*D(phi*psi) - D(Q^2) - 1"), p("-Q''"), p("Q''"), p("2*D(phi*psi) + D(Q^2) - 5"));
}

Mat2 toda_reference_commutator(const std::string& q) {
    auto p = [&](const std::string& s) {
        std::string t = s;
        for (std::size_t pos = 0; (pos = t.find("Q", pos)) != std::string::npos;) t.replace(pos, 1, q);
        return parse_expression(t);
    };
    NCExpr omega_plus = p("2*Q*phi*psi + 2*Q^3 - 4*Q*z + 2*phi*psi*Q");
    NCExpr omega_minus = p("-2*Q*phi*psi - 2*Q^3 + 4*z*Q - 2*phi*psi*Q");
    return make2(p("Q*Q' + Q'*Q"), omega_plus, omega_minus, p("-Q*Q' - Q'*Q"));
}

std::vector<NCExpr> toda_quotient(const std::string& q) {
    const NCExpr Q = g(q), z = g("z"), pp = g("phi") * g("psi");
    NCExpr constraint = pp + Q * Q - z;
    NCExpr evolution = g(q, 2) - (Gaussian(-2) * Q * pp - Gaussian(2) * Q * Q * Q - Gaussian(2) * pp * Q +
                               Gaussian(2) * Q * z + Gaussian(2) * z * Q);
    return {constraint, evolution};
}

NCExpr ncpii_relation(const std::string& u, const std::string& C) {
    const NCExpr U = g(u), z = g("z");
    return g(u, 2) - Gaussian(2) * U * U * U + Gaussian(2) * (z * U + U * z) - NCExpr::symbol(C);
}

namespace {

// Solves p0 + p1 kappa = 0 for one coefficient polynomial; nullopt when the
// polynomial does not determine kappa linearly.
std::optional<NCExpr> solve_linear_kappa(const NCExpr& p) {
    NCExpr p1 = derive_central(p, "kappa");
    if (!derive_central(p1, "kappa").is_zero()) return std::nullopt;
    if (p1.is_zero() || !p1.is_monomial()) return std::nullopt;
    NCExpr p0 = specialize(p, "kappa", Gaussian(0));
    return -(p0 * p1.inverse());
}

}  // namespace

QuantumDerivation quantum_pii_derivation() {
    QuantumDerivation out;
    const NCExpr f0 = g("f0"), f1 = g("f1"), f2 = g("f2"), df2 = g("f2", 1), z = g("z");
    const NCExpr lam = cen("lambda"), hbar = cen("hbar"), c = cen("c");
    const RewriteSystem plain = RewriteSystem::inv();

    const LaxPair P = build_quantum_lax();
    const Mat2 raw = zero_curvature_expression(P);
    out.diagonal_raw = make2(ncpii::normal_form(raw(1, 1), plain), 0, 0, ncpii::normal_form(raw(2, 2), plain));

    // (a) kappa from the diagonal.
    const RewriteSystem zf_sym = RewriteSystem::zf(cen("kappa"));
    std::vector<NCExpr> solutions;
    bool solvable = true;
    for (int k = 1; k <= 2; ++k) {
        NCExpr d = ncpii::normal_form(raw(k, k), zf_sym);
        for (const auto& [word, coeff] : d.by_word()) {
            auto s = solve_linear_kappa(coeff);
            if (!s) {
                solvable = false;
                continue;
            }
            solutions.push_back(*s);
        }
    }
    out.kappa_unique = solvable && !solutions.empty();
    for (const auto& s : solutions)
        if (!(s == solutions.front())) out.kappa_unique = false;
    if (!solutions.empty()) out.kappa = solutions.front();
    if (out.kappa_unique) {
        NCExpr slope = derive_central(out.kappa, "hbar");
        out.kappa_linear_in_hbar = slope.is_scalar() && !slope.is_zero() &&
                                   specialize(out.kappa, "hbar", Gaussian(0)).is_zero() &&
                                   derive_central(slope, "hbar").is_zero();
        const RewriteSystem zf = RewriteSystem::zf(out.kappa);
        out.diagonal_annihilated =
            ncpii::normal_form(raw(1, 1), zf).is_zero() && ncpii::normal_form(raw(2, 2), zf).is_zero();
    }

    // Lemma: [f2', f2] with f2' = f1 - f0, under the rules obtained by the
    // rescaling f2 -> -1/2 lambda^-1 f2 and under the unscaled rules.
    const NCExpr s = NCExpr(Gaussian(Rational(-1, 2))) * cen("lambda", -1) * f2;
    RewriteSystem scaled("QP1_scaled");
    scaled.add_relation(commutator(f1, f0) - Gaussian(2) * hbar * s);
    scaled.add_relation(commutator(f0, s) - hbar);
    scaled.add_relation(commutator(s, f1) - hbar);
    const NCExpr lemma_expr = substitute(commutator(df2, f2), Atom{"f2", 1, false}, f1 - f0);
    out.lemma_computed = ncpii::normal_form(lemma_expr, scaled);
    out.lemma_unscaled = ncpii::normal_form(lemma_expr, RewriteSystem::qp1());
    out.lemma_reference = Gaussian(-4) * lam * hbar;

    // (b) off-diagonal entries.
    const NCExpr kappa = out.kappa_unique ? out.kappa : cen("kappa");
    out.pii_expression = g("f2", 2) - Gaussian(2) * f2 * f2 * f2 + Gaussian(2) * (z * f2 + f2 * z) - c;
    auto lemma_system = [&](const NCExpr& lemma) {
        RewriteSystem rs = RewriteSystem::zf(kappa);
        rs.add_relation(commutator(df2, f2) - lemma, "[f2',f2] lemma");
        return rs;
    };
    auto offdiag = [&](const NCExpr& lemma, NCExpr& r12, NCExpr& r21) {
        const RewriteSystem rs = lemma_system(lemma);
        r12 = ncpii::normal_form(raw(1, 2) - (-I_) * out.pii_expression, rs);
        r21 = ncpii::normal_form(raw(2, 1) - I_ * out.pii_expression, rs);
        return r12.is_zero() && r21.is_zero();
    };
    out.offdiag_reduces_reference = offdiag(out.lemma_reference, out.offdiag12_reference_lemma, out.offdiag21_reference_lemma);
    out.offdiag_reduces_computed =
        offdiag(out.lemma_computed, out.offdiag12_computed_lemma, out.offdiag21_computed_lemma);

    // (c) classical limit: reduce with the derived relations, set hbar = 0,
    // then z and f2 (and f2', f2) commute.
    RewriteSystem classical = RewriteSystem::central_z();
    classical.add_relation(commutator(df2, f2), "[f2',f2] = 0");
    const RewriteSystem reduce = lemma_system(out.lemma_computed);
    out.classical_limit = entrywise(raw, [&](const NCExpr& e) {
        NCExpr r = specialize(ncpii::normal_form(e, reduce), "hbar", Gaussian(0));
        return ncpii::normal_form(r, classical);
    });
    const NCExpr pii_c = ncpii::normal_form(out.pii_expression, classical);
    const Mat2 expected = make2(0, -I_ * pii_c, I_ * pii_c, 0);
    out.classical_limit_ok = is_zero(normal_form(out.classical_limit - expected, classical));

    // Pair-level reduction at hbar = 0 with the f2 I term removed.
    QuantumLaxOptions no_identity;
    no_identity.f2_identity = false;
    const LaxPair Q = build_quantum_lax(no_identity);
    const LaxPair N = build_ncpii_lax();
    auto to_classical = [&](const NCExpr& e) {
        NCExpr r = specialize(e, "hbar", Gaussian(0));
        r = substitute_generator(r, "f2", g("u"));
        return substitute_central(r, "c", cen("C"));
    };
    out.reduces_to_ncpii_pair =
        is_zero(entrywise(Q.A, to_classical) - N.A) && is_zero(entrywise(Q.B, to_classical) - N.B);
    return out;
}

CMatrix linear_system_matrix(LinearSystemKind kind, cplx lambda, const RingValue& q) {
    const int d = q.dim();
    const CMatrix Id = CMatrix::Identity(d, d);
    const cplx ii(0.0, 1.0);
    CMatrix M(2 * d, 2 * d);
    switch (kind) {
        case LinearSystemKind::Toda:
            M << lambda * Id, q.matrix(), q.matrix(), lambda * Id;
            break;
        case LinearSystemKind::NcPii:
            M << -2.0 * ii * lambda * Id, q.matrix(), q.matrix(), 2.0 * ii * lambda * Id;
            break;
        case LinearSystemKind::Quantum:
            M << -2.0 * ii * lambda * Id + q.matrix(), q.matrix(), q.matrix(), 2.0 * ii * lambda * Id + q.matrix();
            break;
    }
    return M;
}

LinearSolution integrate_linear_system(LinearSystemKind kind, cplx lambda, const GridFunction& q, const RingValue& X0,
                                       const RingValue& Y0) {
    const int d = q.dim();
    if (X0.dim() != d || Y0.dim() != d) throw DimensionMismatch("initial data dimension differs from q");
    if (q.count() < 4) throw GridTooShort("linear system integration needs at least 4 grid points");
    const double h = q.step();
    CMatrix S(2 * d, d);
    S << X0.matrix(), Y0.matrix();
    std::vector<RingValue> X, Y;
    X.reserve(static_cast<std::size_t>(q.count()));
    Y.reserve(static_cast<std::size_t>(q.count()));
    auto push = [&](const CMatrix& s) {
        if (!s.allFinite()) throw std::overflow_error("linear system solution overflowed");
        X.emplace_back(CMatrix(s.topRows(d)));
        Y.emplace_back(CMatrix(s.bottomRows(d)));
    };
    push(S);
    for (int k = 0; k + 1 < q.count(); ++k) {
        const CMatrix M0 = linear_system_matrix(kind, lambda, q[k]);
        const CMatrix Mh = linear_system_matrix(kind, lambda, q.interpolate(q.z(k) + 0.5 * h));
        const CMatrix M1 = linear_system_matrix(kind, lambda, q[k + 1]);
        const CMatrix k1 = M0 * S;
        const CMatrix k2 = Mh * (S + 0.5 * h * k1);
        const CMatrix k3 = Mh * (S + 0.5 * h * k2);
        const CMatrix k4 = M1 * (S + h * k3);
        S += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        push(S);
    }
    return {GridFunction(q.start(), h, std::move(X)), GridFunction(q.start(), h, std::move(Y))};
}

NumericZeroCurvature zero_curvature_numeric(const LaxPair& P, const std::map<std::string, GridFunction>& fields,
                                            const std::vector<cplx>& lambdas, const std::map<std::string, cplx>& params,
                                            double tolerance) {
    if (fields.empty()) throw std::invalid_argument("zero_curvature_numeric needs at least one field grid");
    const GridFunction& ref = fields.begin()->second;
    const int d = ref.dim();
    for (const auto& [name, grid] : fields) {
        if (!grid.same_grid(ref)) throw std::invalid_argument("field " + name + " lives on a different grid");
        if (grid.count() < GridFunction::kMinPoints)
            throw GridTooShort("zero-curvature check needs at least " + std::to_string(GridFunction::kMinPoints) +
                               " grid points");
    }
    const Mat2 Az = entrywise(P.A, [](const NCExpr& e) { return derive(e); });
    const Mat2 Bl = entrywise(P.B, [](const NCExpr& e) { return derive_central(e, "lambda"); });

    // Gather every primed atom the realization will need.
    std::set<std::pair<std::string, int>> needed;
    for (const Mat2* m : {&P.A, &P.B, &Az, &Bl})
        for (int i = 1; i <= 2; ++i)
            for (int j = 1; j <= 2; ++j)
                for (const auto& a : (*m)(i, j).atoms())
                    if (a.name != kIndependentVariable) needed.insert({a.name, a.prime});

    std::map<std::string, GridFunction> bound;
    for (const auto& [name, prime] : needed) {
        const std::string key = Atom{name, prime, false}.str();
        if (auto it = fields.find(key); it != fields.end()) {
            bound[key] = it->second;
            continue;
        }
        auto base = fields.find(name);
        if (base == fields.end()) throw UnboundSymbol("no grid for atom " + key);
        GridFunction gfun = base->second;
        int p = prime;
        // Prefer a supplied lower derivative as starting point.
        for (int q = prime - 1; q >= 1; --q) {
            auto it = fields.find(Atom{name, q, false}.str());
            if (it != fields.end()) {
                gfun = it->second;
                p = prime - q;
                break;
            }
        }
        while (p >= 2) {
            gfun = gfun.second_derivative();
            p -= 2;
        }
        if (p == 1) gfun = gfun.derivative();
        bound[key] = gfun;
    }

    NumericZeroCurvature out;
    for (const cplx lam : lambdas) {
        ResidualReport rep;
        rep.name = P.name;
        rep.tolerance = tolerance;
        for (int k = 0; k < ref.count(); ++k) {
            Env env;
            env.dim = d;
            env.params = params;
            env.params["lambda"] = lam;
            env.bind("z", RingValue::scalar(ref.z(k), d));
            for (const auto& [key, grid] : bound) env.bind(key, grid[k]);
            auto block = [&](const Mat2& m) {
                CMatrix r(2 * d, 2 * d);
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) r.block(i * d, j * d, d, d) = realize(m(i + 1, j + 1), env).matrix();
                return r;
            };
            const CMatrix A = block(P.A), B = block(P.B);
            const CMatrix R = block(Az) - block(Bl) - (B * A - A * B);
            rep.points.push_back({ref.z(k), R.norm(), false});
        }
        out.max_residual = std::max(out.max_residual, rep.max_norm());
        out.per_lambda.push_back(std::move(rep));
    }
    return out;
}

}  // namespace ncpii
