#pragma once

#include <compare>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ncpii/coefficient.hpp"

namespace ncpii {

// The independent variable. derive(z) = 1.
inline constexpr std::string_view kIndependentVariable = "z";

// Names treated as central parameters (commute with everything, derivative 0)
// unless a caller overrides the set: lambda, hbar, C, c, C0, beta, kappa,
// alpha0, alpha1.
const std::set<std::string>& default_central_names();

// A noncommuting letter: generator name, derivative order, inversion flag.
struct Atom {
    std::string name;
    int prime = 0;
    bool inverse = false;

    Atom inverted() const { return {name, prime, !inverse}; }
    std::string str() const;

    friend bool operator==(const Atom&, const Atom&) = default;
};

// Generator precedence: z < f0 < f1 < f2 < primed atoms (ascending prime order,
// then name) < every other atom (alphabetical). An inverse sorts right after
// its base atom.
std::strong_ordering compare_atoms(const Atom& a, const Atom& b);

using Word = std::vector<Atom>;

// Word order used for orientation and termination: total prime weight first,
// then length, then lexicographic by atom precedence. Without primed atoms this
// is plain degree-lexicographic order.
std::strong_ordering compare_words(const Word& a, const Word& b);
int prime_weight(const Word& w);
std::string word_str(const Word& w);

// Product of central symbols with integer (possibly negative) exponents,
// e.g. lambda^-1 * hbar. Kept sorted by name with nonzero exponents.
class CentralMonomial {
public:
    CentralMonomial() = default;
    static CentralMonomial symbol(const std::string& name, int power = 1);

    const std::vector<std::pair<std::string, int>>& powers() const { return powers_; }
    bool is_one() const { return powers_.empty(); }
    int exponent(std::string_view name) const;
    CentralMonomial without(std::string_view name) const;
    CentralMonomial inverse() const;
    std::string str() const;

    friend CentralMonomial operator*(const CentralMonomial& a, const CentralMonomial& b);
    friend bool operator==(const CentralMonomial&, const CentralMonomial&) = default;
    friend std::strong_ordering operator<=>(const CentralMonomial& a, const CentralMonomial& b);

private:
    std::vector<std::pair<std::string, int>> powers_;
};

struct WordLess {
    bool operator()(const Word& a, const Word& b) const { return compare_words(a, b) < 0; }
};

struct TermKey {
    Word word;
    CentralMonomial central;
};

struct TermKeyLess {
    bool operator()(const TermKey& a, const TermKey& b) const;
};

class NonInvertible : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Element of the free associative algebra over Gaussian rationals, extended by
// central Laurent parameters and formal inverses of atoms. Terms with zero
// coefficient are never stored; the term map is canonical, so structural
// equality is equality in the free algebra.
class NCExpr {
public:
    using TermMap = std::map<TermKey, Gaussian, TermKeyLess>;

    NCExpr() = default;
    NCExpr(Gaussian c);      // NOLINT(implicit)
    NCExpr(std::int64_t c);  // NOLINT(implicit)

    static NCExpr zero() { return {}; }
    static NCExpr one() { return NCExpr(Gaussian(1)); }
    static NCExpr imag() { return NCExpr(Gaussian::i()); }
    static NCExpr atom(Atom a);
    static NCExpr generator(const std::string& name, int prime = 0) { return atom(Atom{name, prime, false}); }
    static NCExpr central(const std::string& name, int power = 1);
    // Central when the name is in default_central_names(), else a generator.
    static NCExpr symbol(const std::string& name);
    static NCExpr term(Gaussian coeff, CentralMonomial central, Word word);

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    // Single term (coefficient * central monomial * word).
    bool is_monomial() const { return terms_.size() == 1; }
    // No noncommuting letters in any term.
    bool is_central() const;
    // Pure Gaussian constant (including zero).
    bool is_scalar() const;
    Gaussian scalar_value() const;

    // Inverse of a single term: (c m w)^-1 = c^-1 m^-1 w^-1 with the word
    // reversed and each atom inverted. Sums are not invertible.
    NCExpr inverse() const;

    void add_term(const Word& w, const CentralMonomial& m, const Gaussian& c);

    NCExpr& operator+=(const NCExpr& o);
    NCExpr& operator-=(const NCExpr& o);
    NCExpr& operator*=(const Gaussian& s);

    friend NCExpr operator+(NCExpr a, const NCExpr& b) { return a += b; }
    friend NCExpr operator-(NCExpr a, const NCExpr& b) { return a -= b; }
    friend NCExpr operator-(NCExpr a) { return a *= Gaussian(-1); }
    friend NCExpr operator*(const NCExpr& a, const NCExpr& b);
    friend NCExpr operator*(const Gaussian& s, NCExpr a) { return a *= s; }
    friend bool operator==(const NCExpr& a, const NCExpr& b);

    // Collects the coefficient of each word: result[w] is a central polynomial.
    std::map<Word, NCExpr, WordLess> by_word() const;

    // Every atom occurring in the expression (inverses reported as such).
    std::vector<Atom> atoms() const;
    std::set<std::string> central_names() const;

private:
    TermMap terms_;
};

NCExpr power(const NCExpr& base, int n);
NCExpr commutator(const NCExpr& a, const NCExpr& b);       // ab - ba
NCExpr anticommutator(const NCExpr& a, const NCExpr& b);   // ab + ba

// Derivation d/dz: linear, Leibniz, g -> g', z -> 1, central -> 0,
// a^-1 -> -a^-1 a' a^-1.
NCExpr derive(const NCExpr& e);
NCExpr derive(const NCExpr& e, int order);

// Formal derivative with respect to a central symbol (Laurent exponents).
NCExpr derive_central(const NCExpr& e, const std::string& name);

// Replaces a central symbol by a constant. Throws when a negative power of the
// symbol would be evaluated at zero.
NCExpr specialize(const NCExpr& e, const std::string& name, const Gaussian& value);

// Replaces a central symbol by a central expression (e.g. kappa -> i*hbar).
NCExpr substitute_central(const NCExpr& e, const std::string& name, const NCExpr& value);

// Replaces every occurrence of the exact atom `target` (and of its inverse) by
// `replacement`.
NCExpr substitute(const NCExpr& e, const Atom& target, const NCExpr& replacement);

// Replaces generator `name` at every derivative order k by derive(replacement, k).
NCExpr substitute_generator(const NCExpr& e, const std::string& name, const NCExpr& replacement);

}  // namespace ncpii
