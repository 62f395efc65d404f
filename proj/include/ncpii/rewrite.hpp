#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncpii/ncexpr.hpp"

namespace ncpii {

class RewriteBudgetExceeded : public std::runtime_error {
public:
    explicit RewriteBudgetExceeded(std::size_t budget)
        : std::runtime_error("rewrite step budget of " + std::to_string(budget) + " exceeded"), budget_(budget) {}
    std::size_t budget() const { return budget_; }

private:
    std::size_t budget_;
};

class NonDecreasingRule : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RewriteRule {
    Word lhs;
    NCExpr rhs;
    std::string label;
};

enum class Strategy {
    LeftmostFirst,   // scan positions left to right, rules in declaration order
    RightmostFirst,  // scan positions right to left, rules in reverse order
};

// Ordered list of word rewrite rules plus the built-in inverse cancellation
// family a*inv(a) -> 1, inv(a)*a -> 1 and, optionally, the family that moves
// the independent variable z to the left of every other atom. Every checked rule strictly decreases
// under compare_words, which is a monomial well-order, so rewriting terminates.
class RewriteSystem {
public:
    static constexpr std::size_t kDefaultBudget = 1'000'000;

    RewriteSystem() = default;
    explicit RewriteSystem(std::string name) : name_(std::move(name)) {}

    // [f1,f0] = 2 hbar f2, [f0,f2] = [f2,f1] = hbar, each oriented so the
    // larger word is rewritten.
    static RewriteSystem qp1();
    // z f2 - f2 z = kappa f2 with kappa a central expression.
    static RewriteSystem zf(const NCExpr& kappa);
    // Only the inverse cancellation family.
    static RewriteSystem inv();
    // z commutes with every atom: X z -> z X for any atom X other than z.
    static RewriteSystem central_z();

    const std::string& name() const { return name_; }
    const std::vector<RewriteRule>& rules() const { return rules_; }
    bool cancels_inverses() const { return cancel_inverses_; }
    bool central_variable() const { return central_variable_; }
    std::size_t budget() const { return budget_; }

    RewriteSystem& set_budget(std::size_t b) {
        budget_ = b;
        return *this;
    }
    RewriteSystem& set_cancel_inverses(bool on) {
        cancel_inverses_ = on;
        return *this;
    }
    RewriteSystem& set_central_variable(bool on) {
        central_variable_ = on;
        return *this;
    }

    // Throws NonDecreasingRule unless every right-hand word is below lhs.
    RewriteSystem& add_rule(RewriteRule rule);
    // Accepts any rule; termination is then guarded only by the step budget.
    RewriteSystem& add_rule_unchecked(RewriteRule rule);
    // Orients relation == 0 by its largest word (which must carry a single
    // invertible coefficient) and appends the resulting rule.
    RewriteSystem& add_relation(const NCExpr& relation, std::string label = {});

    // Union: rules of `other` appended after ours; inverse cancellation if
    // either side cancels; the smaller budget.
    RewriteSystem merged(const RewriteSystem& other) const;

private:
    std::string name_;
    std::vector<RewriteRule> rules_;
    bool cancel_inverses_ = true;
    bool central_variable_ = false;
    std::size_t budget_ = kDefaultBudget;
};

// Orients relation == 0 as a rule (leading word -> remainder).
RewriteRule orient(const NCExpr& relation, std::string label = {});

struct NormalFormStats {
    std::size_t steps = 0;
};

NCExpr normal_form(const NCExpr& e, const RewriteSystem& rs, Strategy strategy = Strategy::LeftmostFirst,
                   NormalFormStats* stats = nullptr);

// True when no rule (or inverse pair) occurs in any word of e.
bool is_normal(const NCExpr& e, const RewriteSystem& rs);

}  // namespace ncpii
