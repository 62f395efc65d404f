#include "ncpii/exprio.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ncpii {

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      message_(message),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Prime, Equals, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int column;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            const int l = line_, c = col_;
            if (pos_ >= src_.size()) {
                out.push_back({Tok::End, "", l, c});
                return out;
            }
            const char ch = src_[pos_];
            if (std::isdigit(static_cast<unsigned char>(ch)) || (ch == '.' && next_is_digit())) {
                out.push_back({Tok::Number, number(), l, c});
            } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
                std::string id;
                while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                    id += advance();
                out.push_back({Tok::Ident, id, l, c});
            } else {
                Tok k;
                switch (ch) {
                    case '+': k = Tok::Plus; break;
                    case '-': k = Tok::Minus; break;
                    case '*': k = Tok::Star; break;
                    case '/': k = Tok::Slash; break;
                    case '^': k = Tok::Caret; break;
                    case '(': k = Tok::LParen; break;
                    case ')': k = Tok::RParen; break;
                    case '\'': k = Tok::Prime; break;
                    case '=': k = Tok::Equals; break;
                    default: throw ParseError(std::string("unexpected character '") + ch + "'", l, c);
                }
                advance();
                out.push_back({k, std::string(1, ch), l, c});
            }
        }
    }

private:
    bool next_is_digit() const {
        return pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]));
    }

    char advance() {
        char ch = src_[pos_++];
        if (ch == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return ch;
    }

    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
    }

    std::string number() {
        std::string s;
        auto digits = [&] {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) s += advance();
        };
        digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            s += advance();
            digits();
        }
        // Exponent part only when it is really an exponent ("1e-3"), so that
        // an identifier such as "e" after a number is still a lex error below.
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
            if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
                s += advance();
                if (src_[pos_] == '+' || src_[pos_] == '-') s += advance();
                digits();
            }
        }
        return s;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    NCExpr parse_all() {
        NCExpr e = expr();
        expect_end();
        return e;
    }

    NCExpr parse_relation_all() {
        NCExpr lhs = expr();
        if (peek().kind == Tok::Equals) {
            next();
            NCExpr rhs = expr();
            expect_end();
            return lhs - rhs;
        }
        expect_end();
        return lhs;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }

    [[noreturn]] void fail(const std::string& msg, const Token& at) const { throw ParseError(msg, at.line, at.column); }

    void expect(Tok k, const char* what) {
        if (peek().kind != k) fail(std::string("expected ") + what + describe(peek()), peek());
        next();
    }

    void expect_end() {
        if (peek().kind != Tok::End) fail("unexpected trailing input" + describe(peek()), peek());
    }

    static std::string describe(const Token& t) {
        if (t.kind == Tok::End) return " at end of input";
        return " near '" + t.text + "'";
    }

    NCExpr expr() {
        NCExpr acc;
        bool negate = false;
        if (peek().kind == Tok::Minus) {
            next();
            negate = true;
        }
        acc = term();
        if (negate) acc = -acc;
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            const bool minus = next().kind == Tok::Minus;
            NCExpr t = term();
            if (minus)
                acc -= t;
            else
                acc += t;
        }
        return acc;
    }

    NCExpr term() {
        NCExpr acc = factor();
        for (;;) {
            if (peek().kind == Tok::Star) {
                next();
                acc = acc * factor();
            } else if (peek().kind == Tok::Slash) {
                next();
                const Token& t = peek();
                if (t.kind != Tok::Number) fail("division is only defined by a numeric literal" + describe(t), t);
                Rational r = literal(next());
                if (r.is_zero()) fail("division by zero", t);
                acc *= Gaussian(r.inverse());
            } else {
                return acc;
            }
        }
    }

    NCExpr factor() {
        const Token& start = peek();
        NCExpr base = primary();
        while (peek().kind == Tok::Caret) {
            next();
            bool negative = false;
            if (peek().kind == Tok::Minus) {
                next();
                negative = true;
            }
            const Token& t = peek();
            if (t.kind != Tok::Number || t.text.find_first_not_of("0123456789") != std::string::npos)
                fail("exponent must be an integer" + describe(t), t);
            next();
            long n = std::stol(t.text);
            if (n > 64) fail("exponent too large", t);
            if (negative) {
                if (!single_symbol(base)) fail("negative exponent is only allowed on a single atom", start);
                base = power(base.inverse(), static_cast<int>(n));
            } else {
                base = power(base, static_cast<int>(n));
            }
        }
        return base;
    }

    static bool single_symbol(const NCExpr& e) {
        if (!e.is_monomial()) return false;
        const auto& [key, coeff] = *e.terms().begin();
        if (!coeff.is_one()) return false;
        if (key.word.size() == 1) return key.central.is_one();
        return key.word.empty() && key.central.powers().size() == 1;
    }

    Rational literal(const Token& t) const {
        try {
            return Rational::from_decimal(t.text);
        } catch (const std::exception& ex) {
            fail(ex.what(), t);
        }
    }

    NCExpr primary() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Number:
                next();
                return NCExpr(Gaussian(literal(t)));
            case Tok::LParen: {
                next();
                NCExpr e = expr();
                expect(Tok::RParen, "')'");
                return e;
            }
            case Tok::Ident: {
                next();
                if (peek().kind == Tok::LParen) return call(t);
                if (t.text == "i") {
                    if (peek().kind == Tok::Prime) fail("the imaginary unit cannot be differentiated", peek());
                    return NCExpr::imag();
                }
                int primes = 0;
                while (peek().kind == Tok::Prime) {
                    next();
                    ++primes;
                }
                try {
                    return NCExpr::atom(Atom{t.text, primes, false});
                } catch (const std::exception& ex) {
                    fail(ex.what(), t);
                }
            }
            default:
                fail("expected an operand" + describe(t), t);
        }
    }

    NCExpr call(const Token& name) {
        if (name.text != "inv" && name.text != "D") fail("unknown function '" + name.text + "'", name);
        next();  // '('
        NCExpr arg = expr();
        expect(Tok::RParen, "')'");
        if (name.text == "D") return derive(arg);
        try {
            return arg.inverse();
        } catch (const std::exception& ex) {
            fail(std::string("inv: ") + ex.what(), name);
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

bool negative_coefficient(const Gaussian& c) {
    if (!c.re().is_zero()) return c.re() < Rational(0) && c.im().is_zero();
    return c.im() < Rational(0);
}

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

}  // namespace

NCExpr parse_expression(std::string_view text) { return Parser(Lexer(text).run()).parse_all(); }

NCExpr parse_relation(std::string_view text) { return Parser(Lexer(text).run()).parse_relation_all(); }

std::string print_expr(const NCExpr& e) {
    if (e.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [key, coeff] : e.terms()) {
        const bool neg = negative_coefficient(coeff);
        const Gaussian mag = neg ? -coeff : coeff;
        std::vector<std::string> factors;
        if (!mag.is_one()) factors.push_back(mag.str());
        if (!key.central.is_one()) factors.push_back(key.central.str());
        for (const auto& a : key.word) factors.push_back(a.str());
        if (factors.empty()) factors.push_back("1");

        if (first)
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        for (std::size_t k = 0; k < factors.size(); ++k) {
            if (k) out += "*";
            out += factors[k];
        }
        first = false;
    }
    return out;
}

Gaussian parse_scalar(std::string_view text) {
    NCExpr e = parse_expression(text);
    if (!e.is_scalar()) throw ConfigError("expected a numeric constant, got '" + std::string(text) + "'");
    return e.scalar_value();
}

int GridSpec::count() const { return static_cast<int>(std::llround((stop - start) / step)) + 1; }

RewriteSystem SessionConfig::rewrite_system() const {
    RewriteSystem rs("session");
    for (const auto& name : relations) {
        if (name == "qp1")
            rs = rs.merged(RewriteSystem::qp1());
        else if (name == "zf")
            rs = rs.merged(RewriteSystem::zf(kappa));
        else if (name == "inv")
            rs = rs.merged(RewriteSystem::inv());
        else
            throw ConfigError("unknown relation set '" + name + "'");
    }
    return rs;
}

Gaussian SessionConfig::kappa_value() const {
    NCExpr k = specialize(kappa, "hbar", hbar);
    if (!k.is_scalar()) throw ConfigError("kappa does not reduce to a constant: " + print_expr(k));
    return k.scalar_value();
}

SessionConfig load_config(std::string_view text) {
    SessionConfig cfg;
    bool have_start = false, have_stop = false;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    auto real_of = [](const std::string& key, const std::string& v) {
        Gaussian g = parse_scalar(v);
        if (!g.is_real()) throw ConfigError(key + " must be real");
        return g.re().to_double();
    };
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::string line = trim(raw);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty value for " + key);
        try {
            if (key == "relations") {
                cfg.relations.clear();
                std::stringstream ss(value);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    item = trim(item);
                    if (item == "none") continue;
                    if (item != "qp1" && item != "zf" && item != "inv")
                        throw ConfigError("unknown relation set '" + item + "'");
                    cfg.relations.push_back(item);
                }
            } else if (key == "kappa") {
                NCExpr k = parse_expression(value);
                if (!k.is_central()) throw ConfigError("kappa must be central");
                cfg.kappa = k;
            } else if (key == "hbar") {
                cfg.hbar = parse_scalar(value);
            } else if (key == "lambda") {
                cfg.lambdas.clear();
                std::stringstream ss(value);
                std::string item;
                while (std::getline(ss, item, ',')) cfg.lambdas.push_back(parse_scalar(trim(item)));
            } else if (key == "beta") {
                cfg.beta = parse_scalar(value);
            } else if (key == "C") {
                cfg.C = parse_scalar(value);
            } else if (key == "grid.start") {
                cfg.grid.start = real_of(key, value);
                have_start = true;
            } else if (key == "grid.stop") {
                cfg.grid.stop = real_of(key, value);
                have_stop = true;
            } else if (key == "grid.step") {
                cfg.grid.step = real_of(key, value);
            } else if (key == "dim") {
                double d = real_of(key, value);
                if (d != std::floor(d)) throw ConfigError("dim must be an integer");
                cfg.dim = static_cast<int>(d);
            } else if (key.rfind("init.", 0) == 0 && key.size() > 5) {
                cfg.init[key.substr(5)] = value;
            } else if (key == "tol.residual") {
                cfg.tol_residual = real_of(key, value);
            } else if (key == "tol.invariant") {
                cfg.tol_invariant = real_of(key, value);
            } else if (key == "seed") {
                double s = real_of(key, value);
                if (s < 0 || s != std::floor(s)) throw ConfigError("seed must be a non-negative integer");
                cfg.seed = static_cast<std::uint64_t>(s);
            } else if (key == "out.json") {
                cfg.out_json = value;
            } else if (key == "out.csv") {
                cfg.out_csv = value;
            } else {
                throw ConfigError("unknown key '" + key + "'");
            }
        } catch (const ParseError& pe) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + key + ": " + pe.what());
        } catch (const ConfigError& ce) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + ce.what());
        }
    }
    if (!have_start) throw ConfigError("missing required key grid.start");
    if (!have_stop) throw ConfigError("missing required key grid.stop");
    if (!(cfg.grid.step > 0.0)) throw ConfigError("grid.step must be > 0");
    if (!(cfg.grid.stop > cfg.grid.start)) throw ConfigError("grid.stop must exceed grid.start");
    if (cfg.dim < 1) throw ConfigError("dim must be >= 1");
    if (!(cfg.tol_residual > 0.0) || !(cfg.tol_invariant > 0.0)) throw ConfigError("tolerances must be > 0");
    return cfg;
}

SessionConfig load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return load_config(ss.str());
}

}  // namespace ncpii
