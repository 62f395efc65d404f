#pragma once

#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "ncpii/ncexpr.hpp"
#include "ncpii/ring_value.hpp"

namespace ncpii {

class UnboundSymbol : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Bindings for realize(). Atoms are keyed by Atom::str() of the non-inverted
// atom ("q", "q'", "f2''"); an inverse atom may be bound explicitly under its
// own key ("inv(q)"), otherwise it is computed from the base binding.
struct Env {
    int dim = 1;
    std::map<std::string, RingValue> atoms;
    std::map<std::string, cplx> params;

    Env& bind(const std::string& key, RingValue v) {
        atoms.insert_or_assign(key, std::move(v));
        return *this;
    }
    Env& param(const std::string& name, cplx v) {
        params.insert_or_assign(name, v);
        return *this;
    }
};

// Evaluates e in the matrix ring: words become ordered matrix products,
// central monomials become scalars. Throws UnboundSymbol, DimensionMismatch or
// SingularValue.
RingValue realize(const NCExpr& e, const Env& env);

cplx realize_central(const CentralMonomial& m, const Env& env);

}  // namespace ncpii
