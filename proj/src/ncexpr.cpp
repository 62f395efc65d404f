#include "ncpii/ncexpr.hpp"

#include <algorithm>
#include <tuple>

namespace ncpii {

const std::set<std::string>& default_central_names() {
    static const std::set<std::string> names{"lambda", "hbar", "C", "c", "C0", "beta", "kappa", "alpha0", "alpha1"};
    return names;
}

std::string Atom::str() const {
    std::string s = name + std::string(static_cast<std::size_t>(prime), '\'');
    return inverse ? "inv(" + s + ")" : s;
}

namespace {

int atom_class(const Atom& a) {
    if (a.prime > 0) return 4;
    if (a.name == kIndependentVariable) return 0;
    if (a.name == "f0") return 1;
    if (a.name == "f1") return 2;
    if (a.name == "f2") return 3;
    return 5;
}

}  // namespace

std::strong_ordering compare_atoms(const Atom& a, const Atom& b) {
    int ca = atom_class(a);
    int cb = atom_class(b);
    if (ca != cb) return ca <=> cb;
    if (a.prime != b.prime) return a.prime <=> b.prime;
    if (auto c = a.name.compare(b.name); c != 0) return c <=> 0;
    return static_cast<int>(a.inverse) <=> static_cast<int>(b.inverse);
}

int prime_weight(const Word& w) {
    int total = 0;
    for (const auto& a : w) total += a.prime;
    return total;
}

std::strong_ordering compare_words(const Word& a, const Word& b) {
    if (auto c = prime_weight(a) <=> prime_weight(b); c != 0) return c;
    if (a.size() != b.size()) return a.size() <=> b.size();
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (auto c = compare_atoms(a[k], b[k]); c != 0) return c;
    }
    return std::strong_ordering::equal;
}

std::string word_str(const Word& w) {
    if (w.empty()) return "1";
    std::string s;
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (k) s += "*";
        s += w[k].str();
    }
    return s;
}

CentralMonomial CentralMonomial::symbol(const std::string& name, int power) {
    CentralMonomial m;
    if (power != 0) m.powers_.emplace_back(name, power);
    return m;
}

int CentralMonomial::exponent(std::string_view name) const {
    for (const auto& [n, p] : powers_)
        if (n == name) return p;
    return 0;
}

CentralMonomial CentralMonomial::without(std::string_view name) const {
    CentralMonomial m;
    for (const auto& np : powers_)
        if (np.first != name) m.powers_.push_back(np);
    return m;
}

CentralMonomial CentralMonomial::inverse() const {
    CentralMonomial m = *this;
    for (auto& np : m.powers_) np.second = -np.second;
    return m;
}

std::string CentralMonomial::str() const {
    if (powers_.empty()) return "1";
    std::string s;
    for (std::size_t k = 0; k < powers_.size(); ++k) {
        if (k) s += "*";
        s += powers_[k].first;
        if (powers_[k].second != 1) s += "^" + std::to_string(powers_[k].second);
    }
    return s;
}

CentralMonomial operator*(const CentralMonomial& a, const CentralMonomial& b) {
    CentralMonomial m;
    auto ia = a.powers_.begin();
    auto ib = b.powers_.begin();
    while (ia != a.powers_.end() || ib != b.powers_.end()) {
        if (ib == b.powers_.end() || (ia != a.powers_.end() && ia->first < ib->first)) {
            m.powers_.push_back(*ia++);
        } else if (ia == a.powers_.end() || ib->first < ia->first) {
            m.powers_.push_back(*ib++);
        } else {
            int p = ia->second + ib->second;
            if (p != 0) m.powers_.emplace_back(ia->first, p);
            ++ia;
            ++ib;
        }
    }
    return m;
}

std::strong_ordering operator<=>(const CentralMonomial& a, const CentralMonomial& b) {
    return a.powers_ <=> b.powers_;
}

bool TermKeyLess::operator()(const TermKey& a, const TermKey& b) const {
    if (auto c = compare_words(a.word, b.word); c != 0) return c < 0;
    return a.central < b.central;
}

NCExpr::NCExpr(Gaussian c) {
    if (!c.is_zero()) terms_.emplace(TermKey{}, c);
}

NCExpr::NCExpr(std::int64_t c) : NCExpr(Gaussian(c)) {}

NCExpr NCExpr::atom(Atom a) {
    if (a.name == kIndependentVariable && a.prime > 0) return a.prime == 1 ? one() : zero();
    if (default_central_names().count(a.name)) {
        if (a.prime > 0) {
            if (a.inverse) throw NonInvertible("inverse of a vanishing derivative: " + a.str());
            return zero();
        }
        return central(a.name, a.inverse ? -1 : 1);
    }
    NCExpr e;
    e.terms_.emplace(TermKey{Word{std::move(a)}, {}}, Gaussian(1));
    return e;
}

NCExpr NCExpr::central(const std::string& name, int power) {
    NCExpr e;
    e.terms_.emplace(TermKey{{}, CentralMonomial::symbol(name, power)}, Gaussian(1));
    return e;
}

NCExpr NCExpr::symbol(const std::string& name) {
    if (default_central_names().count(name)) return central(name);
    return generator(name);
}

NCExpr NCExpr::term(Gaussian coeff, CentralMonomial central, Word word) {
    NCExpr e;
    e.add_term(word, central, coeff);
    return e;
}

bool NCExpr::is_central() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.word.empty(); });
}

bool NCExpr::is_scalar() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.word.empty() &&
                              terms_.begin()->first.central.is_one());
}

Gaussian NCExpr::scalar_value() const {
    if (!is_scalar()) throw std::logic_error("expression is not a scalar");
    return terms_.empty() ? Gaussian(0) : terms_.begin()->second;
}

NCExpr NCExpr::inverse() const {
    if (terms_.size() != 1) throw NonInvertible("formal inverse requires a single-term expression");
    const auto& [key, coeff] = *terms_.begin();
    Word w(key.word.rbegin(), key.word.rend());
    for (auto& a : w) a = a.inverted();
    return term(coeff.inverse(), key.central.inverse(), std::move(w));
}

void NCExpr::add_term(const Word& w, const CentralMonomial& m, const Gaussian& c) {
    if (c.is_zero()) return;
    TermKey key{w, m};
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_.emplace(std::move(key), c);
        return;
    }
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
}

NCExpr& NCExpr::operator+=(const NCExpr& o) {
    for (const auto& [k, c] : o.terms_) add_term(k.word, k.central, c);
    return *this;
}

NCExpr& NCExpr::operator-=(const NCExpr& o) {
    for (const auto& [k, c] : o.terms_) add_term(k.word, k.central, -c);
    return *this;
}

NCExpr& NCExpr::operator*=(const Gaussian& s) {
    if (s.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.second = t.second * s;
    return *this;
}

NCExpr operator*(const NCExpr& a, const NCExpr& b) {
    NCExpr r;
    for (const auto& [ka, ca] : a.terms_) {
        for (const auto& [kb, cb] : b.terms_) {
            Word w = ka.word;
            w.insert(w.end(), kb.word.begin(), kb.word.end());
            r.add_term(w, ka.central * kb.central, ca * cb);
        }
    }
    return r;
}

bool operator==(const NCExpr& a, const NCExpr& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    auto ia = a.terms_.begin();
    auto ib = b.terms_.begin();
    for (; ia != a.terms_.end(); ++ia, ++ib) {
        if (!(ia->first.word == ib->first.word) || !(ia->first.central == ib->first.central) ||
            !(ia->second == ib->second))
            return false;
    }
    return true;
}

std::map<Word, NCExpr, WordLess> NCExpr::by_word() const {
    std::map<Word, NCExpr, WordLess> out;
    for (const auto& [k, c] : terms_) out[k.word].add_term({}, k.central, c);
    return out;
}

std::vector<Atom> NCExpr::atoms() const {
    std::vector<Atom> out;
    for (const auto& [k, c] : terms_)
        for (const auto& a : k.word)
            if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
    std::sort(out.begin(), out.end(), [](const Atom& x, const Atom& y) { return compare_atoms(x, y) < 0; });
    return out;
}

std::set<std::string> NCExpr::central_names() const {
    std::set<std::string> out;
    for (const auto& [k, c] : terms_)
        for (const auto& [n, p] : k.central.powers()) out.insert(n);
    return out;
}

NCExpr power(const NCExpr& base, int n) {
    if (n < 0) return power(base.inverse(), -n);
    NCExpr r = NCExpr::one();
    for (int k = 0; k < n; ++k) r = r * base;
    return r;
}

NCExpr commutator(const NCExpr& a, const NCExpr& b) { return a * b - b * a; }
NCExpr anticommutator(const NCExpr& a, const NCExpr& b) { return a * b + b * a; }

namespace {

NCExpr derive_atom(const Atom& a) {
    if (!a.inverse) return NCExpr::atom(Atom{a.name, a.prime + 1, false});
    Atom base{a.name, a.prime, false};
    NCExpr inv = NCExpr::atom(a);
    return -(inv * derive_atom(base) * inv);
}

NCExpr word_expr(Word::const_iterator first, Word::const_iterator last) {
    return NCExpr::term(Gaussian(1), {}, Word(first, last));
}

}  // namespace

NCExpr derive(const NCExpr& e) {
    NCExpr r;
    for (const auto& [k, c] : e.terms()) {
        const Word& w = k.word;
        for (std::size_t pos = 0; pos < w.size(); ++pos) {
            NCExpr piece = word_expr(w.begin(), w.begin() + static_cast<long>(pos)) * derive_atom(w[pos]) *
                           word_expr(w.begin() + static_cast<long>(pos) + 1, w.end());
            for (const auto& [pk, pc] : piece.terms()) r.add_term(pk.word, pk.central * k.central, pc * c);
        }
    }
    return r;
}

NCExpr derive(const NCExpr& e, int order) {
    NCExpr r = e;
    for (int k = 0; k < order; ++k) r = derive(r);
    return r;
}

NCExpr derive_central(const NCExpr& e, const std::string& name) {
    NCExpr r;
    for (const auto& [k, c] : e.terms()) {
        int p = k.central.exponent(name);
        if (p == 0) continue;
        CentralMonomial m = k.central * CentralMonomial::symbol(name, -1);
        r.add_term(k.word, m, c * Gaussian(p));
    }
    return r;
}

NCExpr specialize(const NCExpr& e, const std::string& name, const Gaussian& value) {
    NCExpr r;
    for (const auto& [k, c] : e.terms()) {
        int p = k.central.exponent(name);
        if (p == 0) {
            r.add_term(k.word, k.central, c);
            continue;
        }
        if (p < 0 && value.is_zero())
            throw std::domain_error("cannot set " + name + " = 0 in a term containing " + name + "^" +
                                    std::to_string(p));
        Gaussian f(1);
        Gaussian base = p > 0 ? value : value.inverse();
        for (int j = 0; j < std::abs(p); ++j) f = f * base;
        r.add_term(k.word, k.central.without(name), c * f);
    }
    return r;
}

NCExpr substitute_central(const NCExpr& e, const std::string& name, const NCExpr& value) {
    if (!value.is_central()) throw std::invalid_argument("central substitution value must be central");
    NCExpr r;
    for (const auto& [k, c] : e.terms()) {
        int p = k.central.exponent(name);
        NCExpr factor = power(value, p);
        NCExpr rest = NCExpr::term(c, k.central.without(name), k.word);
        r += factor * rest;
    }
    return r;
}

NCExpr substitute(const NCExpr& e, const Atom& target, const NCExpr& replacement) {
    Atom plain{target.name, target.prime, false};
    Atom inv{target.name, target.prime, true};
    NCExpr r;
    bool have_inverse = false;
    NCExpr inverse_repl;
    for (const auto& [k, c] : e.terms()) {
        NCExpr acc = NCExpr::term(c, k.central, {});
        for (const auto& a : k.word) {
            if (a == plain) {
                acc = acc * replacement;
            } else if (a == inv) {
                if (!have_inverse) {
                    inverse_repl = replacement.inverse();
                    have_inverse = true;
                }
                acc = acc * inverse_repl;
            } else {
                acc = acc * NCExpr::atom(a);
            }
        }
        r += acc;
    }
    return r;
}

NCExpr substitute_generator(const NCExpr& e, const std::string& name, const NCExpr& replacement) {
    int max_prime = 0;
    for (const auto& a : e.atoms())
        if (a.name == name) max_prime = std::max(max_prime, a.prime);
    NCExpr r = e;
    NCExpr d = replacement;
    for (int k = 0; k <= max_prime; ++k) {
        r = substitute(r, Atom{name, k, false}, d);
        d = derive(d);
    }
    return r;
}

}  // namespace ncpii
