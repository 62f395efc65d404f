#include "ncpii/riccati.hpp"

#include <cmath>
#include <numbers>

namespace ncpii {

namespace {

const GridFunction& derivative_or(const GridFunction& g, const GridFunction* given, GridFunction& storage) {
    if (given) {
        if (!given->same_grid(g)) throw std::invalid_argument("supplied derivative lives on another grid");
        return *given;
    }
    storage = g.derivative();
    return storage;
}

}  // namespace

ResidualReport ncpii_riccati_residual(const GridFunction& gamma, const GridFunction& u, cplx lambda, double tolerance,
                                      const GridFunction* dgamma) {
    if (!gamma.same_grid(u)) throw std::invalid_argument("Gamma and u live on different grids");
    GridFunction storage;
    const GridFunction& dg = derivative_or(gamma, dgamma, storage);
    const cplx c = cplx(0.0, 4.0) * lambda;
    std::vector<RingValue> r;
    for (int k = 0; k < gamma.count(); ++k) r.push_back(dg[k] + c * gamma[k] - u[k] + gamma[k] * u[k] * gamma[k]);
    return residual_report("ncpii_riccati", GridFunction(gamma.start(), gamma.step(), std::move(r)), tolerance);
}

ResidualReport quantum_riccati_residual(const GridFunction& delta, const GridFunction& f, cplx lambda,
                                        QuantumRiccatiMode mode, double tolerance, const GridFunction* ddelta) {
    if (!delta.same_grid(f)) throw std::invalid_argument("Delta and f live on different grids");
    GridFunction storage;
    const GridFunction& dd = derivative_or(delta, ddelta, storage);
    const cplx c = mode == QuantumRiccatiMode::WithLambda ? cplx(0.0, 4.0) * lambda : cplx(0.0, 4.0);
    std::vector<RingValue> r;
    for (int k = 0; k < delta.count(); ++k) {
        const RingValue& D = delta[k];
        const RingValue& F = f[k];
        r.push_back(dd[k] + c * D - F - (F * D - D * F) + D * F * D);
    }
    ResidualReport rep =
        residual_report("quantum_riccati", GridFunction(delta.start(), delta.step(), std::move(r)), tolerance);
    rep.metadata.emplace_back("mode", mode == QuantumRiccatiMode::WithLambda ? "with_lambda" : "bare");
    return rep;
}

RiccatiField gamma_from_linear(const GridFunction& chi, const GridFunction& Phi) {
    if (!chi.same_grid(Phi)) throw std::invalid_argument("chi and Phi live on different grids");
    RiccatiField out;
    std::vector<RingValue> g;
    for (int k = 0; k < chi.count(); ++k) {
        try {
            g.push_back(chi[k] * Phi[k].inverse());
            out.singular.push_back(false);
        } catch (const SingularValue&) {
            g.push_back(RingValue::zero(chi.dim()));
            out.singular.push_back(true);
            out.singular_z.push_back(chi.z(k));
        }
    }
    out.gamma = GridFunction(chi.start(), chi.step(), std::move(g));
    return out;
}

ClosedFormRiccati riccati_closed_form(cplx lambda1, double start, double stop, double step, double exclusion,
                                      double tolerance) {
    if (!(step > 0.0) || !(stop > start)) throw std::invalid_argument("closed form needs start < stop and step > 0");
    const int n = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
    const cplx I(0.0, 1.0);
    ClosedFormRiccati out;
    out.gamma = GridFunction::sample(start, step, n, [&](double z) { return RingValue(std::exp(4.0 * I * lambda1 * z)); });
    out.dgamma = GridFunction::sample(start, step, n, [&](double z) {
        return RingValue(4.0 * I * lambda1 * std::exp(4.0 * I * lambda1 * z));
    });

    // exp(-8i l1 z) = 1 on z = k pi / (4 l1) for real l1; only z = 0 otherwise.
    if (std::abs(lambda1.imag()) < 1e-14 && std::abs(lambda1.real()) > 0.0) {
        const double period = std::numbers::pi / (4.0 * std::abs(lambda1.real()));
        for (long k = static_cast<long>(std::ceil((start - exclusion) / period));
             k * period <= stop + exclusion; ++k)
            out.poles.push_back(k * period);
    } else if (start - exclusion <= 0.0 && 0.0 <= stop + exclusion) {
        out.poles.push_back(0.0);
    }
    auto near_pole = [&](double z) {
        for (double p : out.poles)
            if (std::abs(z - p) < exclusion) return true;
        return false;
    };

    std::vector<RingValue> u;
    for (int k = 0; k < n; ++k) {
        const double z = out.gamma.z(k);
        const cplx den = 1.0 - std::exp(-8.0 * I * lambda1 * z);
        u.push_back(near_pole(z) || std::abs(den) < 1e-300
                        ? RingValue(0.0)
                        : RingValue(-8.0 * I * lambda1 / den * std::exp(-4.0 * I * lambda1 * z)));
    }
    out.u = GridFunction(start, step, std::move(u));
    out.report = ncpii_riccati_residual(out.gamma, out.u, lambda1, tolerance, &out.dgamma);
    out.report.name = "riccati_closed_form";
    for (auto& p : out.report.points)
        if (near_pole(p.z)) p.masked = true;
    return out;
}

}  // namespace ncpii
