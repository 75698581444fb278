// Recursive-descent parser for the infix expression grammar
// (docs/expression-grammar.md).

#include <cctype>
#include <cstdlib>

#include "cartanforge/expr.hpp"

namespace cartanforge {

namespace {

struct Parser {
    std::string_view text;
    std::size_t pos = 0;
    const SymbolTable& symbols;

    explicit Parser(std::string_view t, const SymbolTable& s) : text(t), symbols(s) {}

    [[noreturn]] void fail(const std::string& msg, std::size_t at) {
        throw ParseError(msg + " at offset " + std::to_string(at), at);
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) { ++pos; return true; }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    ScalarExpr parse() {
        ScalarExpr e = parse_sum();
        skip_ws();
        if (pos != text.size()) fail("unexpected trailing input", pos);
        return e;
    }

    ScalarExpr parse_sum() {
        std::vector<ScalarExpr> terms;
        terms.push_back(parse_product());
        while (true) {
            if (eat('+')) terms.push_back(parse_product());
            else if (eat('-')) terms.push_back(-parse_product());
            else break;
        }
        return ScalarExpr::sum(std::move(terms));
    }

    ScalarExpr parse_product() {
        ScalarExpr e = parse_unary();
        while (true) {
            if (eat('*')) e = e * parse_unary();
            else if (eat('/')) {
                std::size_t at = pos;
                ScalarExpr d = parse_unary();
                if (d.is_zero_literal()) fail("division by literal zero", at);
                e = e / d;
            } else break;
        }
        return e;
    }

    ScalarExpr parse_unary() {
        if (eat('-')) return -parse_unary();
        if (eat('+')) return parse_unary();
        return parse_power();
    }

    ScalarExpr parse_power() {
        ScalarExpr base = parse_atom();
        skip_ws();
        if (eat('^')) {
            std::size_t at = pos;
            // exponent: signed atom or parenthesized expression; must reduce
            // to a rational constant
            ScalarExpr e = parse_exponent();
            if (!e.is_rational())
                fail("exponent must be a rational constant", at);
            return ScalarExpr::pow(std::move(base), e.rational_value());
        }
        return base;
    }

    ScalarExpr parse_exponent() {
        if (eat('-')) return -parse_exponent();
        if (eat('+')) return parse_exponent();
        skip_ws();
        if (peek() == '(') {
            eat('(');
            ScalarExpr inner = parse_sum();
            if (!eat(')')) fail("expected ')'", pos);
            return inner;
        }
        return parse_atom();
    }

    ScalarExpr parse_atom() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of input", pos);
        char c = text[pos];
        if (c == '(') {
            ++pos;
            ScalarExpr e = parse_sum();
            if (!eat(')')) fail("expected ')'", pos);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            return parse_ident();
        fail(std::string("unexpected character '") + c + "'", pos);
    }

    ScalarExpr parse_number() {
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        mpz_class mantissa(0);
        long frac_digits = 0;
        long exp10 = 0;
        std::string intpart(text.substr(start, pos - start));
        if (pos < text.size() && text[pos] == '.') {
            ++pos;
            std::size_t fs = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            frac_digits = static_cast<long>(pos - fs);
            intpart += std::string(text.substr(fs, pos - fs));
        }
        if (intpart.empty()) fail("malformed number", start);
        mantissa = mpz_class(intpart, 10);
        if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
            std::size_t es = pos;
            ++pos;
            bool neg = false;
            if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
                neg = text[pos] == '-';
                ++pos;
            }
            std::size_t ds = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (ds == pos) fail("malformed exponent", es);
            exp10 = std::strtol(std::string(text.substr(ds, pos - ds)).c_str(), nullptr, 10);
            if (neg) exp10 = -exp10;
        }
        long net = exp10 - frac_digits;
        Rational q(mantissa);
        mpz_class p10;
        mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(net < 0 ? -net : net));
        if (net >= 0) q *= Rational(p10);
        else q /= Rational(p10);
        return ScalarExpr::rational(q);
    }

    ScalarExpr parse_ident() {
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        std::string name(text.substr(start, pos - start));
        static const std::map<std::string, Fn> kFns = {
            {"sin", Fn::Sin}, {"cos", Fn::Cos}, {"tan", Fn::Tan},
            {"exp", Fn::Exp}, {"log", Fn::Log},
        };
        auto fit = kFns.find(name);
        bool is_sqrt = name == "sqrt";
        if (fit != kFns.end() || is_sqrt) {
            if (!eat('(')) fail("expected '(' after function name '" + name + "'", pos);
            ScalarExpr arg = parse_sum();
            if (!eat(')')) fail("expected ')'", pos);
            return is_sqrt ? ScalarExpr::sqrt(arg) : ScalarExpr::call(fit->second, arg);
        }
        if (!symbols.declared(name))
            fail("undeclared symbol '" + name + "'", start);
        return ScalarExpr::symbol(name);
    }
};

}  // namespace

ScalarExpr parse_expr(std::string_view text, const SymbolTable& symbols) {
    Parser p(text, symbols);
    return p.parse();
}

}  // namespace cartanforge
