#include "ncpii/rewrite.hpp"

#include <optional>

namespace ncpii {

namespace {

NCExpr gen(const char* name) { return NCExpr::generator(name); }

bool is_inverse_pair(const Atom& a, const Atom& b) {
    return a.name == b.name && a.prime == b.prime && a.inverse != b.inverse;
}

bool matches_at(const Word& w, std::size_t pos, const Word& pattern) {
    if (pattern.empty() || pos + pattern.size() > w.size()) return false;
    for (std::size_t k = 0; k < pattern.size(); ++k)
        if (!(w[pos + k] == pattern[k])) return false;
    return true;
}

enum class RedexKind { Rule, Cancel, SwapZ };

struct Redex {
    std::size_t pos;
    std::size_t length;
    RedexKind kind;
    const NCExpr* rhs;  // only for RedexKind::Rule
};

bool is_plain_z(const Atom& a) { return a.name == kIndependentVariable && a.prime == 0 && !a.inverse; }

std::optional<Redex> redex_at(const Word& w, std::size_t pos, const RewriteSystem& rs, bool reverse_rules) {
    const auto& rules = rs.rules();
    auto try_rule = [&](const RewriteRule& r) -> std::optional<Redex> {
        if (matches_at(w, pos, r.lhs)) return Redex{pos, r.lhs.size(), RedexKind::Rule, &r.rhs};
        return std::nullopt;
    };
    auto try_inverse = [&]() -> std::optional<Redex> {
        if (rs.cancels_inverses() && pos + 1 < w.size() && is_inverse_pair(w[pos], w[pos + 1]))
            return Redex{pos, 2, RedexKind::Cancel, nullptr};
        if (rs.central_variable() && pos + 1 < w.size() && is_plain_z(w[pos + 1]) && !is_plain_z(w[pos]))
            return Redex{pos, 2, RedexKind::SwapZ, nullptr};
        return std::nullopt;
    };
    if (!reverse_rules) {
        if (auto r = try_inverse()) return r;
        for (const auto& rule : rules)
            if (auto r = try_rule(rule)) return r;
    } else {
        for (auto it = rules.rbegin(); it != rules.rend(); ++it)
            if (auto r = try_rule(*it)) return r;
        if (auto r = try_inverse()) return r;
    }
    return std::nullopt;
}

std::optional<Redex> find_redex(const Word& w, const RewriteSystem& rs, Strategy strategy) {
    if (strategy == Strategy::LeftmostFirst) {
        for (std::size_t pos = 0; pos < w.size(); ++pos)
            if (auto r = redex_at(w, pos, rs, false)) return r;
    } else {
        for (std::size_t pos = w.size(); pos-- > 0;)
            if (auto r = redex_at(w, pos, rs, true)) return r;
    }
    return std::nullopt;
}

void check_decreasing(const RewriteRule& rule) {
    for (const auto& [k, c] : rule.rhs.terms()) {
        if (compare_words(k.word, rule.lhs) >= 0)
            throw NonDecreasingRule("rule " + word_str(rule.lhs) + " -> ... does not decrease: right-hand word " +
                                    word_str(k.word));
    }
}

}  // namespace

RewriteRule orient(const NCExpr& relation, std::string label) {
    if (relation.is_zero()) throw std::invalid_argument("cannot orient the zero relation");
    // TermMap is sorted ascending by word, so the leading word is the last key.
    const Word lead = relation.terms().rbegin()->first.word;
    NCExpr lead_coeff;
    NCExpr rest;
    for (const auto& [k, c] : relation.terms()) {
        if (k.word == lead)
            lead_coeff.add_term({}, k.central, c);
        else
            rest.add_term(k.word, k.central, c);
    }
    if (!lead_coeff.is_monomial())
        throw NonInvertible("leading word " + word_str(lead) + " carries a non-monomial central coefficient");
    return RewriteRule{lead, -(lead_coeff.inverse() * rest), std::move(label)};
}

RewriteSystem RewriteSystem::qp1() {
    RewriteSystem rs("QP1");
    NCExpr hbar = NCExpr::central("hbar");
    NCExpr f0 = gen("f0"), f1 = gen("f1"), f2 = gen("f2");
    rs.add_relation(commutator(f1, f0) - Gaussian(2) * hbar * f2, "[f1,f0] = 2 hbar f2");
    rs.add_relation(commutator(f0, f2) - hbar, "[f0,f2] = hbar");
    rs.add_relation(commutator(f2, f1) - hbar, "[f2,f1] = hbar");
    return rs;
}

RewriteSystem RewriteSystem::zf(const NCExpr& kappa) {
    if (!kappa.is_central()) throw std::invalid_argument("ZF coefficient kappa must be central");
    RewriteSystem rs("ZF");
    NCExpr z = gen("z"), f2 = gen("f2");
    rs.add_relation(z * f2 - f2 * z - kappa * f2, "z f2 - f2 z = kappa f2");
    return rs;
}

RewriteSystem RewriteSystem::inv() { return RewriteSystem("INV"); }

RewriteSystem RewriteSystem::central_z() {
    RewriteSystem rs("CENTRAL_Z");
    rs.set_central_variable(true);
    return rs;
}

RewriteSystem& RewriteSystem::add_rule(RewriteRule rule) {
    check_decreasing(rule);
    rules_.push_back(std::move(rule));
    return *this;
}

RewriteSystem& RewriteSystem::add_rule_unchecked(RewriteRule rule) {
    rules_.push_back(std::move(rule));
    return *this;
}

RewriteSystem& RewriteSystem::add_relation(const NCExpr& relation, std::string label) {
    return add_rule(orient(relation, std::move(label)));
}

RewriteSystem RewriteSystem::merged(const RewriteSystem& other) const {
    RewriteSystem out(name_.empty() ? other.name_ : (other.name_.empty() ? name_ : name_ + "+" + other.name_));
    out.rules_ = rules_;
    out.rules_.insert(out.rules_.end(), other.rules_.begin(), other.rules_.end());
    out.cancel_inverses_ = cancel_inverses_ || other.cancel_inverses_;
    out.central_variable_ = central_variable_ || other.central_variable_;
    out.budget_ = std::min(budget_, other.budget_);
    return out;
}

NCExpr normal_form(const NCExpr& e, const RewriteSystem& rs, Strategy strategy, NormalFormStats* stats) {
    NCExpr pending = e;
    NCExpr done;
    std::size_t steps = 0;
    while (!pending.is_zero()) {
        // Largest term first: every rewrite only produces smaller words.
        auto it = std::prev(pending.terms().end());
        const TermKey key = it->first;
        const Gaussian coeff = it->second;
        pending.add_term(key.word, key.central, -coeff);

        auto redex = find_redex(key.word, rs, strategy);
        if (!redex) {
            done.add_term(key.word, key.central, coeff);
            continue;
        }
        if (++steps > rs.budget()) throw RewriteBudgetExceeded(rs.budget());

        const auto pos = static_cast<long>(redex->pos);
        const auto end = static_cast<long>(redex->pos + redex->length);
        Word prefix(key.word.begin(), key.word.begin() + pos);
        Word suffix(key.word.begin() + end, key.word.end());
        if (redex->kind == RedexKind::Cancel) {
            Word w = prefix;
            w.insert(w.end(), suffix.begin(), suffix.end());
            pending.add_term(w, key.central, coeff);
            continue;
        }
        if (redex->kind == RedexKind::SwapZ) {
            Word w = prefix;
            w.push_back(key.word[redex->pos + 1]);
            w.push_back(key.word[redex->pos]);
            w.insert(w.end(), suffix.begin(), suffix.end());
            pending.add_term(w, key.central, coeff);
            continue;
        }
        for (const auto& [rk, rc] : redex->rhs->terms()) {
            Word w = prefix;
            w.insert(w.end(), rk.word.begin(), rk.word.end());
            w.insert(w.end(), suffix.begin(), suffix.end());
            pending.add_term(w, key.central * rk.central, coeff * rc);
        }
    }
    if (stats) stats->steps = steps;
    return done;
}

bool is_normal(const NCExpr& e, const RewriteSystem& rs) {
    for (const auto& [k, c] : e.terms())
        if (find_redex(k.word, rs, Strategy::LeftmostFirst)) return false;
    return true;
}

}  // namespace ncpii
