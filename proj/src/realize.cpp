#include "ncpii/realize.hpp"

namespace ncpii {

namespace {

RingValue atom_value(const Atom& a, const Env& env) {
    if (auto it = env.atoms.find(a.str()); it != env.atoms.end()) return it->second;
    if (a.inverse) {
        Atom base = a.inverted();
        auto it = env.atoms.find(base.str());
        if (it == env.atoms.end()) throw UnboundSymbol("unbound atom " + base.str() + " (needed for " + a.str() + ")");
        return it->second.inverse();
    }
    throw UnboundSymbol("unbound atom " + a.str());
}

}  // namespace

cplx realize_central(const CentralMonomial& m, const Env& env) {
    cplx v(1.0, 0.0);
    for (const auto& [name, pw] : m.powers()) {
        auto it = env.params.find(name);
        if (it == env.params.end()) throw UnboundSymbol("unbound parameter " + name);
        if (pw < 0 && it->second == cplx(0.0, 0.0))
            throw SingularValue("negative power of parameter " + name + " at zero",
                                std::numeric_limits<double>::infinity());
        v *= std::pow(it->second, pw);
    }
    return v;
}

RingValue realize(const NCExpr& e, const Env& env) {
    if (env.dim < 1) throw DimensionMismatch("realization dimension must be >= 1");
    RingValue total = RingValue::zero(env.dim);
    for (const auto& [key, coeff] : e.terms()) {
        RingValue w = RingValue::identity(env.dim);
        for (const auto& a : key.word) w = w * atom_value(a, env);
        total += (coeff.to_complex() * realize_central(key.central, env)) * w;
    }
    return total;
}

}  // namespace ncpii
