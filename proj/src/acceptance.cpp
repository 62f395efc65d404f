#include "ncpii/acceptance.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "ncpii/darboux.hpp"
#include "ncpii/exprio.hpp"
#include "ncpii/laxzc.hpp"
#include "ncpii/qdet.hpp"
#include "ncpii/riccati.hpp"
#include "ncpii/seeds.hpp"

namespace ncpii {

std::string CriterionResult::line() const {
    std::ostringstream os;
    os << (pass ? "PASS" : "FAIL") << "  criterion " << id << "  " << name << "  measured=" << measured
       << " tolerance=" << tolerance;
    return os.str();
}

namespace {

// Fourth order means a step-halving ratio of 16; 4.0 +- 0.2 in log2.
constexpr double kOrderLow = 3.8, kOrderHigh = 4.2;
// Steps in the asymptotic range; below ~1e-2 roundoff takes over.
constexpr double kOrderSteps[] = {0.05, 0.025, 0.0125};

void metric(CriterionResult& r, const std::string& name, double v) { r.metrics.emplace_back(name, v); }

std::string entries_str(const Mat2& m) {
    std::string s;
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) s += (s.empty() ? "" : "; ") + ("(" + std::to_string(i) + "," + std::to_string(j) + ") ") + print_expr(m(i, j));
    return s;
}

int nonzero_entries(const Mat2& m) {
    int n = 0;
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) n += m(i, j).is_zero() ? 0 : 1;
    return n;
}

bool same_after_normal_form(const Mat2& a, const Mat2& b, const RewriteSystem& R) {
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j)
            if (!(normal_form(a(i, j), R) == normal_form(b(i, j), R))) return false;
    return true;
}

RingValue random_matrix(int d, std::mt19937_64& rng, double scale, double diag_shift) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    CMatrix m(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            const double re = u(rng);
            const double im = u(rng);
            m(a, b) = scale * cplx(re, im);
        }
    m += diag_shift * CMatrix::Identity(d, d);
    return RingValue(m);
}

TodaPair scalar_toda_seed(double step, double tol_invariant = 1.0) {
    // psi phi' - psi' phi = 0.5*0.1 - 0.05*1 = 0, with phi and psi distinct.
    const TodaInit init{RingValue(1.0), RingValue(0.1), RingValue(0.5), RingValue(0.05)};
    return integrate_toda_pair(0.0, init, TodaGrid{0.0, 1.0, step}, tol_invariant);
}

double log2_ratio(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace

CriterionResult criterion_qdet_inverse_duality(std::uint64_t seed) {
    CriterionResult r{1, "quasideterminant-inverse duality", false, 0.0, 1e-9, {}, {}};
    std::mt19937_64 rng(seed);
    int compared = 0, refused = 0;
    for (int t = 0; t < 50; ++t) {
        const int n = 2 + t % 3, d = 1 + (t / 3) % 3;
        const auto A = random_array(n, d, rng);
        try {
            const auto all = all_quasideterminants(A);
            for (int i = 1; i <= n; ++i)
                for (int j = 1; j <= n; ++j) {
                    const RingValue& q = all[static_cast<std::size_t>((i - 1) * n + (j - 1))];
                    r.measured = std::max(r.measured, relative_error(q, inverse_entry_oracle(A, i, j)));
                    ++compared;
                }
        } catch (const std::exception& ex) {
            ++refused;
            r.notes.push_back(std::string("array ") + std::to_string(t) + " refused: " + ex.what());
        }
    }
    metric(r, "entries_compared", compared);
    metric(r, "arrays_refused", refused);
    metric(r, "seed", static_cast<double>(seed));
    r.pass = refused == 0 && r.measured < r.tolerance;
    return r;
}

CriterionResult criterion_commutative_reduction(std::uint64_t seed) {
    CriterionResult r{2, "commutative reduction", false, 0.0, 1e-10, {}, {}};
    std::mt19937_64 rng(seed);
    int compared = 0, refused = 0;
    for (int t = 0; t < 50; ++t) {
        const int n = 2 + t % 3;
        const auto A = random_array(n, 1, rng);
        try {
            for (int i = 1; i <= n; ++i)
                for (int j = 1; j <= n; ++j) {
                    r.measured = std::max(r.measured, commutative_reduction_check(A, i, j));
                    ++compared;
                }
        } catch (const std::exception& ex) {
            ++refused;
            r.notes.push_back(std::string("matrix ") + std::to_string(t) + " refused: " + ex.what());
        }
    }
    metric(r, "entries_compared", compared);
    metric(r, "matrices_refused", refused);
    metric(r, "seed", static_cast<double>(seed));
    r.pass = refused == 0 && r.measured < r.tolerance;
    return r;
}

CriterionResult criterion_toda_zero_curvature() {
    CriterionResult r{3, "symbolic zero curvature, Toda pair", false, 0.0, 0.0, {}, {}};
    const LaxPair T = build_toda_lax();
    const RewriteSystem R = RewriteSystem::inv();
    const auto raw = zero_curvature_symbolic(T, R);
    const bool az_ok = same_after_normal_form(raw.Az_minus_Bl, toda_reference_Az_minus_Bl(), R);
    const bool comm_ok = same_after_normal_form(raw.commutator, toda_reference_commutator(), R);
    const auto red = zero_curvature_symbolic(T, RewriteSystem::central_z(), toda_quotient());
    const int left = nonzero_entries(red.residual);
    metric(r, "Az_minus_Bl_matches_reference", az_ok);
    metric(r, "commutator_matches_reference", comm_ok);
    metric(r, "nonzero_reduced_entries", left);
    r.measured = left;
    r.notes.push_back("reduced residual: " + entries_str(red.residual));
    r.pass = az_ok && comm_ok && left == 0;
    return r;
}

CriterionResult criterion_ncpii_zero_curvature() {
    CriterionResult r{4, "symbolic zero curvature, NC PII pair", false, 0.0, 0.0, {}, {}};
    const auto red = zero_curvature_symbolic(build_ncpii_lax(), RewriteSystem::inv(), {ncpii_relation()});
    const int left = nonzero_entries(red.residual);
    r.measured = left;
    metric(r, "nonzero_reduced_entries", left);
    r.notes.push_back("unreduced residual: " + entries_str(zero_curvature_expression(build_ncpii_lax())));
    r.notes.push_back("reduced residual: " + entries_str(red.residual));
    r.pass = left == 0;
    return r;
}

CriterionResult criterion_quantum_derivation() {
    CriterionResult r{5, "quantum PII derivation", false, 0.0, 0.0, {}, {}};
    const QuantumDerivation q = quantum_pii_derivation();
    metric(r, "kappa_unique", q.kappa_unique);
    metric(r, "kappa_linear_in_hbar", q.kappa_linear_in_hbar);
    metric(r, "diagonal_annihilated", q.diagonal_annihilated);
    metric(r, "offdiag_reduces_reference_lemma", q.offdiag_reduces_reference);
    metric(r, "offdiag_reduces_computed_lemma", q.offdiag_reduces_computed);
    metric(r, "classical_limit_ok", q.classical_limit_ok);
    metric(r, "reduces_to_ncpii_pair", q.reduces_to_ncpii_pair);
    r.notes.push_back("kappa = " + print_expr(q.kappa));
    r.notes.push_back("lemma [f2',f2] computed " + print_expr(q.lemma_computed) + ", reference " +
                      print_expr(q.lemma_reference) + ", unscaled rules " + print_expr(q.lemma_unscaled));
    r.notes.push_back("off-diagonal leftovers with the reference lemma: (1,2) " + print_expr(q.offdiag12_reference_lemma) +
                      ", (2,1) " + print_expr(q.offdiag21_reference_lemma));
    r.notes.push_back("off-diagonal leftovers with the computed lemma: (1,2) " +
                      print_expr(q.offdiag12_computed_lemma) + ", (2,1) " + print_expr(q.offdiag21_computed_lemma));
    int failed = 0;
    for (bool b : {q.kappa_unique, q.kappa_linear_in_hbar, q.diagonal_annihilated, q.offdiag_reduces_reference,
                   q.classical_limit_ok})
        failed += b ? 0 : 1;
    r.measured = failed;
    r.pass = failed == 0;
    return r;
}

CriterionResult criterion_riccati_closed_form() {
    CriterionResult r{6, "Riccati closed form", false, 0.0, 1e-8, {}, {}};
    const auto cf = riccati_closed_form(0.25, 0.1, 2.0, 1e-3);
    r.measured = cf.report.max_norm();
    metric(r, "max_residual", r.measured);
    metric(r, "masked_points", cf.report.masked_count());
    metric(r, "step", 1e-3);
    r.pass = r.measured < r.tolerance;
    return r;
}

CriterionResult criterion_toda_seed() {
    CriterionResult r{7, "Toda seed certification", false, 0.0, 1e-5, {}, {}};
    try {
        const TodaPair fine = scalar_toda_seed(1e-3);
        const double drift = fine.max_drift;
        const double res = ncpii_residual(fine.u1, pii_constant(0.0)).max_norm();
        metric(r, "invariant_drift", drift);
        metric(r, "pii_residual_step_1e-3", res);
        // At 1e-3 the residual is at roundoff level, so the order is measured
        // where truncation error dominates.
        std::vector<double> res_h;
        for (double h : kOrderSteps) {
            res_h.push_back(ncpii_residual(scalar_toda_seed(h).u1, pii_constant(0.0)).max_norm());
            metric(r, "pii_residual_step_" + std::to_string(h), res_h.back());
        }
        const double o1 = log2_ratio(res_h[0], res_h[1]), o2 = log2_ratio(res_h[1], res_h[2]);
        metric(r, "order_0.05_0.025", o1);
        metric(r, "order_0.025_0.0125", o2);
        metric(r, "halving_ratio_1e-3", res / ncpii_residual(scalar_toda_seed(5e-4).u1, pii_constant(0.0)).max_norm());
        r.measured = res;
        const bool order_ok = o1 > kOrderLow && o1 < kOrderHigh && o2 > kOrderLow && o2 < kOrderHigh;
        r.pass = drift < 1e-10 && res < r.tolerance && order_ok;
    } catch (const IntegrationFailure& ex) {
        r.notes.push_back(std::string("integration failed at z=") + std::to_string(ex.z()) + ": " + ex.what());
        r.measured = INFINITY;
    }
    return r;
}

CriterionResult criterion_darboux_consistency(std::uint64_t seed) {
    CriterionResult r{8, "Darboux product form vs quasideterminant form", false, 0.0, 1e-8, {}, {}};
    std::mt19937_64 rng(seed);
    const int d = 2, realizations = 5;
    double n1_exact = 0.0;
    for (int t = 0; t < realizations; ++t) {
        const RingValue A = random_matrix(d, rng, 0.5, 0.0), B = random_matrix(d, rng, 0.5, 0.0);
        const GridFunction q = GridFunction::sample(0.0, 1e-2, 51, [&](double z) { return A + z * B; });
        const std::vector<cplx> lambdas{0.9, 0.3, 0.6, 1.2};
        std::vector<std::pair<RingValue, RingValue>> init;
        for (std::size_t k = 0; k < lambdas.size(); ++k)
            init.emplace_back(random_matrix(d, rng, 1.0, 2.0), random_matrix(d, rng, 1.0, 0.0));
        try {
            const EigenData E = EigenData::integrate(LinearSystemKind::Toda, q, lambdas, init);
            for (int N = 1; N <= 3; ++N) {
                const double e = max_relative_error(phi_n_fold_product(q, E, N), phi_n_fold(q, E, N));
                r.measured = std::max(r.measured, e);
                metric(r, "realization_" + std::to_string(t) + "_N" + std::to_string(N), e);
            }
            n1_exact = std::max(n1_exact, max_relative_error(phi_n_fold(q, E, 1), one_fold_q(q, E[1].X, E[1].Y)));
        } catch (const std::exception& ex) {
            r.notes.push_back("realization " + std::to_string(t) + " refused: " + ex.what());
            r.measured = INFINITY;
        }
    }
    metric(r, "N1_vs_one_fold", n1_exact);
    metric(r, "seed", static_cast<double>(seed));
    r.pass = r.measured < r.tolerance && n1_exact == 0.0;
    return r;
}

CriterionResult criterion_darboux_covariance() {
    CriterionResult r{9, "Darboux covariance at lambda = lambda1", false, 0.0, 1e-6, {}, {}};
    const TodaPair seed = scalar_toda_seed(1e-3);
    const GridFunction& q = seed.phi;
    const cplx l1 = 0.5;
    const auto part = integrate_linear_system(LinearSystemKind::Toda, l1, q, RingValue(1.0), RingValue(0.3));
    const GridFunction q1 = one_fold_q(q, part.X, part.Y);
    const auto poles = pole_mask(part.X, part.Y);

    auto defect = [&](cplx l) {
        const auto s = integrate_linear_system(LinearSystemKind::Toda, l, q, RingValue(0.2), RingValue(1.0));
        return covariance_diagnostic(q1, transform_eigenfunctions(s.X, s.Y, part.X, part.Y, l, l1), l, poles);
    };
    const auto at = defect(l1);
    r.measured = at.combined.max_norm();
    metric(r, "residual_at_lambda1", r.measured);
    metric(r, "x_line_at_lambda1", at.x_line.max_norm());
    metric(r, "y_line_at_lambda1", at.y_line.max_norm());

    const auto d1 = defect(l1 + 0.01), d2 = defect(l1 + 0.02);
    const double ratio = d2.combined.max_norm() / d1.combined.max_norm();
    const double ratio_x = d2.x_line.max_norm() / d1.x_line.max_norm();
    metric(r, "defect_dl_0.01", d1.combined.max_norm());
    metric(r, "defect_dl_0.02", d2.combined.max_norm());
    metric(r, "scaling_ratio", ratio);
    metric(r, "x_line_scaling_ratio", ratio_x);
    const bool control_nonzero = d1.combined.max_norm() > r.tolerance;
    const bool linear = std::abs(ratio / 2.0 - 1.0) < 0.05;
    metric(r, "negative_control_nonzero", control_nonzero);
    metric(r, "defect_linear", linear);
    r.pass = r.measured < r.tolerance && control_nonzero && linear;
    return r;
}

CriterionResult criterion_linear_integrator() {
    CriterionResult r{10, "linear system integrator", false, 0.0, 1e-8, {}, {}};
    auto max_error = [](double h, cplx lambda) {
        const int n = static_cast<int>(std::llround(1.0 / h)) + 1;
        const GridFunction q = GridFunction::constant(0.0, h, n, RingValue(1.0));
        const auto s = integrate_linear_system(LinearSystemKind::Toda, lambda, q, RingValue(1.0), RingValue(0.0));
        double e = 0.0;
        for (int k = 0; k < n; ++k) {
            const double z = q.z(k);
            const cplx g = std::exp(lambda * z);
            e = std::max({e, std::abs(s.X[k](0, 0) - g * std::cosh(z)), std::abs(s.Y[k](0, 0) - g * std::sinh(z))});
        }
        return e;
    };
    bool order_ok = true;
    for (cplx lambda : {cplx(0.0), cplx(0.5, 0.25)}) {
        const std::string tag = lambda == cplx(0.0) ? "lambda0" : "lambda_c";
        const double e = max_error(1e-3, lambda);
        r.measured = std::max(r.measured, e);
        metric(r, tag + "_error_step_1e-3", e);
        const double e1 = max_error(kOrderSteps[0], lambda), e2 = max_error(kOrderSteps[1], lambda),
                     e3 = max_error(kOrderSteps[2], lambda);
        const double o1 = log2_ratio(e1, e2), o2 = log2_ratio(e2, e3);
        metric(r, tag + "_order_0.05_0.025", o1);
        metric(r, tag + "_order_0.025_0.0125", o2);
        order_ok = order_ok && o1 > kOrderLow && o1 < kOrderHigh && o2 > kOrderLow && o2 < kOrderHigh;
    }
    r.pass = r.measured < r.tolerance && order_ok;
    return r;
}

CriterionResult run_criterion(int id, std::uint64_t seed) {
    switch (id) {
        case 1: return criterion_qdet_inverse_duality(seed);
        case 2: return criterion_commutative_reduction(seed);
        case 3: return criterion_toda_zero_curvature();
        case 4: return criterion_ncpii_zero_curvature();
        case 5: return criterion_quantum_derivation();
        case 6: return criterion_riccati_closed_form();
        case 7: return criterion_toda_seed();
        case 8: return criterion_darboux_consistency(seed);
        case 9: return criterion_darboux_covariance();
        case 10: return criterion_linear_integrator();
        default: throw std::out_of_range("no criterion " + std::to_string(id));
    }
}

}  // namespace ncpii
