#include "ncpii/seeds.hpp"

#include <cmath>

namespace ncpii {

namespace {

struct State {
    CMatrix phi, dphi, psi, dpsi;
};

State rhs(double z, const State& s) {
    const int d = static_cast<int>(s.phi.rows());
    const CMatrix Z = z * CMatrix::Identity(d, d);
    return {s.dphi, 2.0 * Z * s.phi - 2.0 * s.phi * s.psi * s.phi, s.dpsi, 2.0 * Z * s.psi - 2.0 * s.psi * s.phi * s.psi};
}

State axpy(const State& s, double h, const State& k) {
    return {s.phi + h * k.phi, s.dphi + h * k.dphi, s.psi + h * k.psi, s.dpsi + h * k.dpsi};
}

double state_norm(const State& s) {
    return std::max({s.phi.norm(), s.dphi.norm(), s.psi.norm(), s.dpsi.norm()});
}

// True when the chord between two consecutive determinant values passes
// through the origin: a singular point between grid points that no
// condition check at the nodes would see.
bool chord_crosses_zero(cplx a, cplx b) {
    const cplx d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return false;
    const double t = -(std::conj(d) * a).real() / len2;
    if (t <= 0.0 || t >= 1.0) return false;
    return std::abs(a + t * d) <= 1e-9 * std::max(std::abs(a), std::abs(b));
}

}  // namespace

double toda_init_defect(cplx beta, const TodaInit& init) {
    const int d = init.phi.dim();
    CMatrix w = init.psi.matrix() * init.dphi.matrix() - init.dpsi.matrix() * init.phi.matrix();
    return (w - 2.0 * beta * CMatrix::Identity(d, d)).norm();
}

TodaPair integrate_toda_pair(cplx beta, const TodaInit& init, const TodaGrid& grid, double tol_invariant) {
    const int d = init.phi.dim();
    if (init.dphi.dim() != d || init.psi.dim() != d || init.dpsi.dim() != d)
        throw DimensionMismatch("Toda initial data must share one dimension");
    if (!(grid.step > 0.0) || !(grid.stop > grid.start)) throw std::invalid_argument("invalid Toda grid");
    if (toda_init_defect(beta, init) > 1e-12)
        throw std::invalid_argument("initial data violate psi phi' - psi' phi = 2 beta I");

    const int n = static_cast<int>(std::llround((grid.stop - grid.start) / grid.step)) + 1;
    const double h = grid.step;
    TodaPair out;
    out.beta = beta;
    std::vector<RingValue> phi, dphi, psi, dpsi, u1, um1;
    State s{init.phi.matrix(), init.dphi.matrix(), init.psi.matrix(), init.dpsi.matrix()};
    const CMatrix target = 2.0 * beta * CMatrix::Identity(d, d);
    cplx prev_det_phi, prev_det_psi;
    for (int k = 0; k < n; ++k) {
        const double z = grid.start + k * h;
        if (k > 0) {
            const double zp = z - h;
            const State k1 = rhs(zp, s);
            const State k2 = rhs(zp + 0.5 * h, axpy(s, 0.5 * h, k1));
            const State k3 = rhs(zp + 0.5 * h, axpy(s, 0.5 * h, k2));
            const State k4 = rhs(zp + h, axpy(s, h, k3));
            s = {s.phi + (h / 6.0) * (k1.phi + 2.0 * k2.phi + 2.0 * k3.phi + k4.phi),
                 s.dphi + (h / 6.0) * (k1.dphi + 2.0 * k2.dphi + 2.0 * k3.dphi + k4.dphi),
                 s.psi + (h / 6.0) * (k1.psi + 2.0 * k2.psi + 2.0 * k3.psi + k4.psi),
                 s.dpsi + (h / 6.0) * (k1.dpsi + 2.0 * k2.dpsi + 2.0 * k3.dpsi + k4.dpsi)};
        }
        const double nrm = state_norm(s);
        if (!std::isfinite(nrm) || nrm > 1e8) throw IntegrationFailure("Toda pair blew up", z);
        const cplx det_phi = s.phi.determinant(), det_psi = s.psi.determinant();
        if (k > 0 && chord_crosses_zero(prev_det_phi, det_phi))
            throw IntegrationFailure("phi passes through a singular point", z - 0.5 * h);
        if (k > 0 && chord_crosses_zero(prev_det_psi, det_psi))
            throw IntegrationFailure("psi passes through a singular point", z - 0.5 * h);
        prev_det_phi = det_phi;
        prev_det_psi = det_psi;
        RingValue P(s.phi), Q(s.psi);
        RingValue Pinv, Qinv;
        try {
            Pinv = P.inverse();
        } catch (const SingularValue&) {
            throw IntegrationFailure("phi is numerically singular", z);
        }
        try {
            Qinv = Q.inverse();
        } catch (const SingularValue&) {
            throw IntegrationFailure("psi is numerically singular", z);
        }
        const double drift = (s.psi * s.dphi - s.dpsi * s.phi - target).norm();
        if (drift > tol_invariant) throw IntegrationFailure("invariant psi phi' - psi' phi drifted", z);
        out.invariant_drift.push_back(drift);
        out.max_drift = std::max(out.max_drift, drift);
        phi.emplace_back(s.phi);
        dphi.emplace_back(s.dphi);
        psi.emplace_back(s.psi);
        dpsi.emplace_back(s.dpsi);
        u1.push_back(RingValue(s.dphi) * Pinv);
        um1.push_back(RingValue(s.dpsi) * Qinv);
    }
    out.phi = GridFunction(grid.start, h, std::move(phi));
    out.dphi = GridFunction(grid.start, h, std::move(dphi));
    out.psi = GridFunction(grid.start, h, std::move(psi));
    out.dpsi = GridFunction(grid.start, h, std::move(dpsi));
    out.u1 = GridFunction(grid.start, h, std::move(u1));
    out.u_minus1 = GridFunction(grid.start, h, std::move(um1));
    return out;
}

namespace {

GridFunction pii_defect(const GridFunction& u) {
    const GridFunction d2 = u.second_derivative();
    std::vector<RingValue> r;
    r.reserve(static_cast<std::size_t>(u.count()));
    for (int k = 0; k < u.count(); ++k) {
        const RingValue& v = u[k];
        const RingValue Z = RingValue::scalar(u.z(k), v.dim());
        r.push_back(d2[k] - 2.0 * (v * v * v) + 2.0 * (Z * v + v * Z));
    }
    return GridFunction(u.start(), u.step(), std::move(r));
}

}  // namespace

ResidualReport ncpii_residual(const GridFunction& u, cplx C, double tolerance) {
    if (u.count() < GridFunction::kMinPoints)
        throw GridTooShort("PII residual needs at least " + std::to_string(GridFunction::kMinPoints) + " grid points");
    const GridFunction defect = pii_defect(u);
    const RingValue CI = RingValue::scalar(C, u.dim());
    ResidualReport rep = residual_report("ncpii", defect.map([&](const RingValue& v) { return v - CI; }), tolerance);
    return rep;
}

cplx best_fit_C(const GridFunction& u) {
    const GridFunction defect = pii_defect(u);
    cplx sum(0.0, 0.0);
    int count = 0;
    for (int k = 2; k + 2 < defect.count(); ++k) {
        sum += defect[k].matrix().trace() / static_cast<double>(u.dim());
        ++count;
    }
    return count ? sum / static_cast<double>(count) : cplx(0.0, 0.0);
}

}  // namespace ncpii
