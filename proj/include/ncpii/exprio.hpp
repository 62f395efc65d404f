#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ncpii/ncexpr.hpp"
#include "ncpii/rewrite.hpp"

namespace ncpii {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, int line, int column);
    const std::string& message() const { return message_; }
    int line() const { return line_; }
    int column() const { return column_; }

private:
    std::string message_;
    int line_;
    int column_;
};

// expr   := ['-'] term (('+'|'-') term)*
// term   := factor (('*' factor) | ('/' NUMBER))*
// factor := atom ('^' ['-'] INT)*
// atom   := NUMBER | 'i' | IDENT "'"* | 'inv(' expr ')' | 'D(' expr ')' | '(' expr ')'
// Identifiers in default_central_names() are central parameters; everything
// else is a noncommuting generator. A negative exponent is only accepted on a
// single atom or parameter.
NCExpr parse_expression(std::string_view text);

// "lhs = rhs" gives lhs - rhs; a bare expression is read as "expr = 0".
NCExpr parse_relation(std::string_view text);

// Canonical text that parse_expression maps back to a structurally equal
// expression. The zero expression prints as "0".
std::string print_expr(const NCExpr& e);

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct GridSpec {
    double start = 0.0;
    double stop = 1.0;
    double step = 1e-3;

    // Number of samples start, start+step, ..., stop (the last point snapped
    // to the nearest step multiple).
    int count() const;
};

struct SessionConfig {
    std::vector<std::string> relations;  // subset of qp1, zf, inv
    NCExpr kappa = NCExpr::imag() * NCExpr::central("hbar");
    Gaussian hbar{0};
    std::vector<Gaussian> lambdas;
    Gaussian beta{0};
    Gaussian C{2};
    GridSpec grid;
    int dim = 1;
    std::map<std::string, std::string> init;  // init.<name> = <text>, key without prefix
    double tol_residual = 1e-5;
    double tol_invariant = 1e-8;
    std::uint64_t seed = 0;
    std::string out_json;
    std::string out_csv;

    // The rewrite system named by `relations`, with ZF built from kappa.
    RewriteSystem rewrite_system() const;
    // kappa with hbar replaced by its configured value.
    Gaussian kappa_value() const;
};

// Line-oriented "key = value" text, '#' starts a comment. grid.start and
// grid.stop are required; every other key has a default.
SessionConfig load_config(std::string_view text);
SessionConfig load_config_file(const std::string& path);

// Scalar-valued helper: parses text and requires a Gaussian constant result.
Gaussian parse_scalar(std::string_view text);

}  // namespace ncpii
