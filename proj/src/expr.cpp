#include "cartanforge/expr.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace cartanforge {

struct ScalarExpr::Node {
    enum class Kind : std::uint8_t { Num, Sym, Fun, Pow, Mul, Add };

    Kind kind;
    Rational num;       // Num value; Pow exponent
    double num_cache = 0.0;
    std::string sym;    // Sym name
    Fn fn = Fn::Sin;    // Fun
    std::vector<ScalarExpr> kids;  // Fun:1, Pow:1 (base), Mul/Add: >=2
    std::size_t hash = 0;
};

using Node = ScalarExpr::Node;
using Kind = Node::Kind;

const char* fn_name(Fn f) {
    switch (f) {
        case Fn::Sin: return "sin";
        case Fn::Cos: return "cos";
        case Fn::Tan: return "tan";
        case Fn::Exp: return "exp";
        case Fn::Log: return "log";
    }
    return "?";
}

const char* ternary_name(Ternary t) {
    switch (t) {
        case Ternary::Zero: return "proven-zero";
        case Ternary::NonZero: return "proven-nonzero";
        case Ternary::Unknown: return "unknown";
    }
    return "?";
}

namespace {

std::size_t hash_mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t rational_hash(const Rational& q) {
    return std::hash<std::string>{}(q.get_str());
}

std::size_t node_hash(const Node& n) {
    std::size_t h = static_cast<std::size_t>(n.kind) * 0x100000001b3ULL;
    switch (n.kind) {
        case Kind::Num: h = hash_mix(h, rational_hash(n.num)); break;
        case Kind::Sym: h = hash_mix(h, std::hash<std::string>{}(n.sym)); break;
        case Kind::Fun: h = hash_mix(h, static_cast<std::size_t>(n.fn)); break;
        case Kind::Pow: h = hash_mix(h, rational_hash(n.num)); break;
        default: break;
    }
    for (const auto& k : n.kids) h = hash_mix(h, k.hash());
    return h;
}

ScalarExpr wrap(std::shared_ptr<Node> n) {
    n->hash = node_hash(*n);
    struct Access : ScalarExpr {
        explicit Access(NodePtr p) : ScalarExpr(std::move(p)) {}
    };
    return Access(std::move(n));
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

// exact n-th root of a nonnegative integer, if it exists
std::optional<mpz_class> exact_root(const mpz_class& v, unsigned long deg) {
    if (v < 0) return std::nullopt;
    mpz_class r;
    int exactp = mpz_root(r.get_mpz_t(), v.get_mpz_t(), deg);
    if (exactp) return r;
    return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------------
// basic constructors and accessors

ScalarExpr::ScalarExpr() { *this = rational(0); }

ScalarExpr ScalarExpr::rational(long num, long den) {
    return rational(Rational(num, den));
}

ScalarExpr ScalarExpr::rational(Rational q) {
    q.canonicalize();
    auto n = std::make_shared<Node>();
    n->kind = Kind::Num;
    n->num = q;
    n->num_cache = q.get_d();
    return wrap(std::move(n));
}

ScalarExpr ScalarExpr::from_double(double v) {
    if (!std::isfinite(v)) throw EvalError("non-finite literal");
    return rational(Rational(v));  // doubles are dyadic rationals: exact
}

ScalarExpr ScalarExpr::symbol(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sym;
    n->sym = std::move(name);
    return wrap(std::move(n));
}

bool ScalarExpr::is_rational() const { return node_->kind == Kind::Num; }

bool ScalarExpr::is_zero_literal() const {
    return node_->kind == Kind::Num && node_->num == 0;
}

bool ScalarExpr::is_one_literal() const {
    return node_->kind == Kind::Num && node_->num == 1;
}

Rational ScalarExpr::rational_value() const {
    if (!is_rational()) throw EvalError("expression is not a rational literal");
    return node_->num;
}

std::size_t ScalarExpr::hash() const { return node_->hash; }

int ScalarExpr::compare(const ScalarExpr& a, const ScalarExpr& b) {
    if (a.node_ == b.node_) return 0;
    const Node& x = *a.node_;
    const Node& y = *b.node_;
    if (x.kind != y.kind)
        return static_cast<int>(x.kind) < static_cast<int>(y.kind) ? -1 : 1;
    switch (x.kind) {
        case Kind::Num: return cmp(x.num, y.num) < 0 ? -1 : (cmp(x.num, y.num) > 0 ? 1 : 0);
        case Kind::Sym: return x.sym.compare(y.sym) < 0 ? -1 : (x.sym == y.sym ? 0 : 1);
        case Kind::Fun:
            if (x.fn != y.fn) return x.fn < y.fn ? -1 : 1;
            return compare(x.kids[0], y.kids[0]);
        case Kind::Pow: {
            int c = compare(x.kids[0], y.kids[0]);
            if (c != 0) return c;
            int q = cmp(x.num, y.num);
            return q < 0 ? -1 : (q > 0 ? 1 : 0);
        }
        case Kind::Mul:
        case Kind::Add: {
            std::size_t m = std::min(x.kids.size(), y.kids.size());
            for (std::size_t i = 0; i < m; ++i) {
                int c = compare(x.kids[i], y.kids[i]);
                if (c != 0) return c;
            }
            if (x.kids.size() != y.kids.size())
                return x.kids.size() < y.kids.size() ? -1 : 1;
            return 0;
        }
    }
    return 0;
}

bool ScalarExpr::same(const ScalarExpr& other) const {
    if (node_ == other.node_) return true;
    if (node_->hash != other.node_->hash) return false;
    return compare(*this, other) == 0;
}

// ---------------------------------------------------------------------
// canonicalizing factories

namespace {

struct ExprLess {
    bool operator()(const ScalarExpr& a, const ScalarExpr& b) const {
        return ScalarExpr::compare(a, b) < 0;
    }
};

// Splits a canonical term into (rational coefficient, monomial rest).
std::pair<Rational, ScalarExpr> split_coeff(const ScalarExpr& t);

// Splits a factor into (base, exponent).
std::pair<ScalarExpr, Rational> split_power(const ScalarExpr& f) {
    if (f.node().kind == Kind::Pow) return {f.node().kids[0], f.node().num};
    return {f, Rational(1)};
}

bool has_negative_lead(const ScalarExpr& e) {
    const Node& n = e.node();
    if (n.kind == Kind::Num) return n.num < 0;
    if (n.kind == Kind::Mul && n.kids[0].node().kind == Kind::Num)
        return n.kids[0].node().num < 0;
    return false;
}

}  // namespace

ScalarExpr ScalarExpr::call(Fn f, ScalarExpr arg) {
    const Node& a = arg.node();
    if (a.kind == Kind::Num) {
        if (a.num == 0) {
            switch (f) {
                case Fn::Sin:
                case Fn::Tan: return rational(0);
                case Fn::Cos:
                case Fn::Exp: return rational(1);
                case Fn::Log: break;  // log 0: leave for eval to reject
            }
        }
        if (a.num == 1 && f == Fn::Log) return rational(0);
    }
    // parity normalization: sin(-u) = -sin(u), cos(-u) = cos(u), tan odd
    if (has_negative_lead(arg) && (f == Fn::Sin || f == Fn::Cos || f == Fn::Tan)) {
        ScalarExpr inner = product({rational(-1), arg});
        ScalarExpr c = call(f, inner);
        if (f == Fn::Cos) return c;
        return product({rational(-1), c});
    }
    if (f == Fn::Exp && a.kind == Kind::Fun && a.fn == Fn::Log) return a.kids[0];
    if (f == Fn::Log && a.kind == Kind::Fun && a.fn == Fn::Exp) return a.kids[0];

    auto n = std::make_shared<Node>();
    n->kind = Kind::Fun;
    n->fn = f;
    n->kids.push_back(std::move(arg));
    return wrap(std::move(n));
}

ScalarExpr ScalarExpr::pow(ScalarExpr base, Rational e) {
    e.canonicalize();
    if (e == 0) return rational(1);  // 0^0 := 1 by convention
    if (e == 1) return base;
    const Node& b = base.node();
    if (b.kind == Kind::Num) {
        if (is_integer(e)) {
            if (b.num == 0 && e < 0) {
                // leave 0^(-k) unfolded; evaluation reports the domain error
            } else if (e.get_num().fits_slong_p()) {
                long k = e.get_num().get_si();
                Rational r;
                mpz_class num = b.num.get_num(), den = b.num.get_den();
                unsigned long a = static_cast<unsigned long>(k < 0 ? -k : k);
                mpz_class pn, pd;
                mpz_pow_ui(pn.get_mpz_t(), num.get_mpz_t(), a);
                mpz_pow_ui(pd.get_mpz_t(), den.get_mpz_t(), a);
                if (k >= 0) r = Rational(pn, pd); else r = Rational(pd, pn);
                return rational(r);
            }
        } else if (e.get_den() == 2 && b.num >= 0) {
            auto rn = exact_root(b.num.get_num(), 2);
            auto rd = exact_root(b.num.get_den(), 2);
            if (rn && rd)
                return pow(rational(Rational(*rn, *rd)), Rational(e.get_num()));
        }
    }
    if (b.kind == Kind::Pow) {
        // (x^a)^b -> x^(ab) only when sound for real arguments:
        // b integer, or a already fractional (base constrained nonnegative).
        if (is_integer(e) || !is_integer(b.num))
            return pow(b.kids[0], b.num * e);
    }
    if (b.kind == Kind::Fun && b.fn == Fn::Exp) {
        return call(Fn::Exp, product({rational(e), b.kids[0]}));
    }
    if (b.kind == Kind::Mul && is_integer(e)) {
        std::vector<ScalarExpr> parts;
        parts.reserve(b.kids.size());
        for (const auto& k : b.kids) parts.push_back(pow(k, e));
        return product(std::move(parts));
    }
    // positive integer powers of sums expand (the canonical form is the
    // expanded normal form; negative and fractional powers stay opaque, and
    // expansions past the size cap stay factored)
    if (b.kind == Kind::Add && is_integer(e) && e > 1 && e <= 8) {
        long k = e.get_num().get_si();
        double predicted = std::pow(static_cast<double>(b.kids.size()),
                                    static_cast<double>(k));
        if (predicted <= 1024.0) {
            std::vector<ScalarExpr> acc(b.kids);
            for (long round = 1; round < k; ++round) {
                std::vector<ScalarExpr> next;
                next.reserve(acc.size() * b.kids.size());
                for (const auto& t : acc)
                    for (const auto& u : b.kids) next.push_back(product({t, u}));
                acc = std::move(next);
            }
            return sum(std::move(acc));
        }
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Pow;
    n->num = e;
    n->kids.push_back(std::move(base));
    return wrap(std::move(n));
}

ScalarExpr ScalarExpr::product(std::vector<ScalarExpr> factors) {
    Rational coeff(1);
    std::map<ScalarExpr, Rational, ExprLess> powers;
    std::vector<ScalarExpr> exp_args;  // exp factors merge: exp(a)exp(b)=exp(a+b)
    std::vector<ScalarExpr> pending(std::move(factors));
    std::reverse(pending.begin(), pending.end());
    while (!pending.empty()) {
        ScalarExpr f = std::move(pending.back());
        pending.pop_back();
        const Node& n = f.node();
        switch (n.kind) {
            case Kind::Num:
                coeff *= n.num;
                break;
            case Kind::Mul:
                for (auto it = n.kids.rbegin(); it != n.kids.rend(); ++it)
                    pending.push_back(*it);
                break;
            case Kind::Fun:
                if (n.fn == Fn::Exp) { exp_args.push_back(n.kids[0]); break; }
                [[fallthrough]];
            default: {
                auto [base, e] = split_power(f);
                powers[base] += e;
                break;
            }
        }
    }
    if (coeff == 0) return rational(0);
    std::vector<ScalarExpr> atoms;
    std::vector<ScalarExpr> sums;  // Add factors distribute (expanded form)
    if (!exp_args.empty()) {
        ScalarExpr merged = call(Fn::Exp, sum(std::move(exp_args)));
        if (!merged.is_one_literal()) {
            auto [base, e] = split_power(merged);
            powers[base] += e;
        }
    }
    for (const auto& [base, e] : powers) {
        if (e == 0) continue;
        ScalarExpr p = pow(base, e);
        switch (p.node().kind) {
            case Kind::Num: coeff *= p.node().num; break;
            case Kind::Mul:
                // a pow rule expanded into a product of canonical factors
                for (const auto& k : p.node().kids) {
                    if (k.node().kind == Kind::Num) coeff *= k.node().num;
                    else if (k.node().kind == Kind::Add) sums.push_back(k);
                    else atoms.push_back(k);
                }
                break;
            case Kind::Add: sums.push_back(std::move(p)); break;
            default: atoms.push_back(std::move(p)); break;
        }
    }
    if (coeff == 0) return rational(0);
    if (!sums.empty()) {
        double predicted = 1;
        for (const ScalarExpr& s : sums)
            predicted *= static_cast<double>(s.node().kids.size());
        if (predicted > 1024.0) {
            // too large to expand: keep the sum factors as atoms
            atoms.insert(atoms.end(), sums.begin(), sums.end());
            sums.clear();
        }
    }
    if (!sums.empty()) {
        // distribute: multiply every combination of summands into the
        // monomial part (terms of canonical sums contain no Add factors,
        // so the recursion bottoms out)
        std::vector<ScalarExpr> acc{rational(1)};
        for (const ScalarExpr& s : sums) {
            std::vector<ScalarExpr> next;
            next.reserve(acc.size() * s.node().kids.size());
            for (const ScalarExpr& t : acc)
                for (const ScalarExpr& term : s.node().kids)
                    next.push_back(product({t, term}));
            acc = std::move(next);
        }
        std::vector<ScalarExpr> terms;
        terms.reserve(acc.size());
        ScalarExpr mono;
        {
            std::vector<ScalarExpr> mf{rational(coeff)};
            mf.insert(mf.end(), atoms.begin(), atoms.end());
            mono = product(std::move(mf));
        }
        for (const ScalarExpr& t : acc) terms.push_back(product({mono, t}));
        return sum(std::move(terms));
    }
    if (atoms.empty()) return rational(coeff);
    if (coeff != 1) atoms.insert(atoms.begin(), rational(coeff));
    if (atoms.size() == 1) return atoms[0];
    std::sort(atoms.begin() + (coeff != 1 ? 1 : 0), atoms.end(),
              [](const ScalarExpr& a, const ScalarExpr& b) { return compare(a, b) < 0; });
    auto n = std::make_shared<Node>();
    n->kind = Kind::Mul;
    n->kids = std::move(atoms);
    return wrap(std::move(n));
}

namespace {

std::pair<Rational, ScalarExpr> split_coeff(const ScalarExpr& t) {
    const Node& n = t.node();
    if (n.kind == Kind::Num) return {n.num, ScalarExpr::rational(1)};
    if (n.kind == Kind::Mul && n.kids[0].node().kind == Kind::Num) {
        std::vector<ScalarExpr> rest(n.kids.begin() + 1, n.kids.end());
        ScalarExpr mono = rest.size() == 1 ? rest[0] : ScalarExpr::product(rest);
        return {n.kids[0].node().num, mono};
    }
    return {Rational(1), t};
}

// Looks for a sin(u)^2 factor inside a monomial; returns (u, remaining monomial).
std::optional<std::pair<ScalarExpr, ScalarExpr>> peel_sin_squared(const ScalarExpr& mono) {
    auto examine = [](const ScalarExpr& f) -> std::optional<ScalarExpr> {
        const Node& n = f.node();
        if (n.kind == Kind::Pow && n.num == 2) {
            const Node& b = n.kids[0].node();
            if (b.kind == Kind::Fun && b.fn == Fn::Sin) return b.kids[0];
        }
        return std::nullopt;
    };
    const Node& n = mono.node();
    if (n.kind == Kind::Mul) {
        for (std::size_t i = 0; i < n.kids.size(); ++i) {
            if (auto u = examine(n.kids[i])) {
                std::vector<ScalarExpr> rest;
                for (std::size_t j = 0; j < n.kids.size(); ++j)
                    if (j != i) rest.push_back(n.kids[j]);
                ScalarExpr r = rest.empty() ? ScalarExpr::rational(1)
                             : (rest.size() == 1 ? rest[0] : ScalarExpr::product(rest));
                return std::make_pair(*u, r);
            }
        }
        return std::nullopt;
    }
    if (auto u = examine(mono)) return std::make_pair(*u, ScalarExpr::rational(1));
    return std::nullopt;
}

}  // namespace

ScalarExpr ScalarExpr::sum(std::vector<ScalarExpr> terms) {
    std::map<ScalarExpr, Rational, ExprLess> acc;  // monomial -> coefficient
    std::vector<ScalarExpr> pending(std::move(terms));
    std::reverse(pending.begin(), pending.end());
    Rational cnum(0);
    while (!pending.empty()) {
        ScalarExpr t = std::move(pending.back());
        pending.pop_back();
        const Node& n = t.node();
        if (n.kind == Kind::Add) {
            for (auto it = n.kids.rbegin(); it != n.kids.rend(); ++it)
                pending.push_back(*it);
            continue;
        }
        auto [c, mono] = split_coeff(t);
        if (mono.is_one_literal()) cnum += c;
        else acc[mono] += c;
    }

    // sin^2(u) + cos^2(u) elimination: rewrite c*sin(u)^2*F as
    // c*F - c*cos(u)^2*F whenever the matching cos(u)^2*F monomial is present.
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = acc.begin(); it != acc.end(); ++it) {
            if (it->second == 0) continue;
            auto peeled = peel_sin_squared(it->first);
            if (!peeled) continue;
            const auto& [u, rest] = *peeled;
            ScalarExpr cos_mono =
                product({pow(call(Fn::Cos, u), Rational(2)), rest});
            auto [cc, cm] = split_coeff(cos_mono);
            auto jt = acc.find(cm);
            if (jt == acc.end() || jt->second == 0) continue;
            Rational c = it->second;
            acc.erase(it);
            jt = acc.find(cm);
            if (jt != acc.end()) jt->second -= c * cc; else acc[cm] = -c * cc;
            if (rest.is_one_literal()) cnum += c;
            else acc[rest] += c;
            changed = true;
            break;
        }
    }

    std::vector<ScalarExpr> out;
    for (const auto& [mono, c] : acc) {
        if (c == 0) continue;
        if (c == 1) out.push_back(mono);
        else out.push_back(product({rational(c), mono}));
    }
    if (cnum != 0) out.insert(out.begin(), rational(cnum));
    if (out.empty()) return rational(0);
    if (out.size() == 1) return out[0];
    auto n = std::make_shared<Node>();
    n->kind = Kind::Add;
    n->kids = std::move(out);
    return wrap(std::move(n));
}

ScalarExpr ScalarExpr::operator-() const { return product({rational(-1), *this}); }

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
    return ScalarExpr::sum({a, b});
}
ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) {
    return ScalarExpr::sum({a, -b});
}
ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
    return ScalarExpr::product({a, b});
}
ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) {
    return ScalarExpr::product({a, ScalarExpr::pow(b, Rational(-1))});
}

ScalarExpr simplify(const ScalarExpr& e) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Num:
        case Kind::Sym:
            return e;
        case Kind::Fun:
            return ScalarExpr::call(n.fn, simplify(n.kids[0]));
        case Kind::Pow:
            return ScalarExpr::pow(simplify(n.kids[0]), n.num);
        case Kind::Mul:
        case Kind::Add: {
            std::vector<ScalarExpr> kids;
            kids.reserve(n.kids.size());
            for (const auto& k : n.kids) kids.push_back(simplify(k));
            return n.kind == Kind::Mul ? ScalarExpr::product(std::move(kids))
                                       : ScalarExpr::sum(std::move(kids));
        }
    }
    return e;
}

// ---------------------------------------------------------------------
// derivative / evaluation / free symbols

ScalarExpr ScalarExpr::derivative(const std::string& coord) const {
    const Node& n = *node_;
    switch (n.kind) {
        case Kind::Num: return rational(0);
        case Kind::Sym: return n.sym == coord ? rational(1) : rational(0);
        case Kind::Add: {
            std::vector<ScalarExpr> parts;
            parts.reserve(n.kids.size());
            for (const auto& k : n.kids) parts.push_back(k.derivative(coord));
            return sum(std::move(parts));
        }
        case Kind::Mul: {
            std::vector<ScalarExpr> parts;
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                std::vector<ScalarExpr> fs;
                fs.push_back(n.kids[i].derivative(coord));
                for (std::size_t j = 0; j < n.kids.size(); ++j)
                    if (j != i) fs.push_back(n.kids[j]);
                parts.push_back(product(std::move(fs)));
            }
            return sum(std::move(parts));
        }
        case Kind::Pow: {
            // d(u^q) = q u^(q-1) u'
            ScalarExpr du = n.kids[0].derivative(coord);
            return product({rational(n.num), pow(n.kids[0], n.num - 1), du});
        }
        case Kind::Fun: {
            ScalarExpr u = n.kids[0];
            ScalarExpr du = u.derivative(coord);
            switch (n.fn) {
                case Fn::Sin: return product({call(Fn::Cos, u), du});
                case Fn::Cos: return product({rational(-1), call(Fn::Sin, u), du});
                case Fn::Tan: {
                    ScalarExpr t = call(Fn::Tan, u);
                    return product({sum({rational(1), pow(t, Rational(2))}), du});
                }
                case Fn::Exp: return product({call(Fn::Exp, u), du});
                case Fn::Log: return product({pow(u, Rational(-1)), du});
            }
        }
    }
    return rational(0);
}

double ScalarExpr::eval(const Bindings& point) const {
    const Node& n = *node_;
    switch (n.kind) {
        case Kind::Num: return n.num_cache;
        case Kind::Sym: {
            auto it = point.find(n.sym);
            if (it != point.end()) return it->second;
            if (n.sym == "pi") return M_PI;
            throw EvalError("unbound symbol '" + n.sym + "'");
        }
        case Kind::Add: {
            double s = 0;
            for (const auto& k : n.kids) s += k.eval(point);
            return s;
        }
        case Kind::Mul: {
            double p = 1;
            for (const auto& k : n.kids) p *= k.eval(point);
            return p;
        }
        case Kind::Pow: {
            double b = n.kids[0].eval(point);
            if (is_integer(n.num) && n.num.get_num().fits_slong_p()) {
                long k = n.num.get_num().get_si();
                if (b == 0.0 && k < 0) throw EvalError("division by zero");
                double r = std::pow(b, static_cast<double>(k));
                if (!std::isfinite(r)) throw EvalError("overflow in power");
                return r;
            }
            if (b < 0) throw EvalError("fractional power of negative value");
            if (b == 0 && n.num < 0) throw EvalError("division by zero");
            return std::pow(b, n.num.get_d());
        }
        case Kind::Fun: {
            double u = n.kids[0].eval(point);
            switch (n.fn) {
                case Fn::Sin: return std::sin(u);
                case Fn::Cos: return std::cos(u);
                case Fn::Tan: return std::tan(u);
                case Fn::Exp: {
                    double r = std::exp(u);
                    if (!std::isfinite(r)) throw EvalError("overflow in exp");
                    return r;
                }
                case Fn::Log:
                    if (u <= 0) throw EvalError("log of non-positive value");
                    return std::log(u);
            }
        }
    }
    throw EvalError("unreachable");
}

namespace {
void collect_symbols(const ScalarExpr& e, std::set<std::string>& out) {
    const Node& n = e.node();
    if (n.kind == Kind::Sym) out.insert(n.sym);
    for (const auto& k : n.kids) collect_symbols(k, out);
}
}  // namespace

std::set<std::string> ScalarExpr::free_symbols() const {
    std::set<std::string> out;
    collect_symbols(*this, out);
    return out;
}

bool ScalarExpr::depends_on(const std::string& name) const {
    const Node& n = *node_;
    if (n.kind == Kind::Sym) return n.sym == name;
    for (const auto& k : n.kids)
        if (k.depends_on(name)) return true;
    return false;
}

// ---------------------------------------------------------------------
// printing (round-trips through parse_expr)

namespace {

std::string rational_str(const Rational& q) { return q.get_str(); }

enum class Prec { Add, Mul, Unary, Pow, Atom };

void print(const ScalarExpr& e, std::ostringstream& os, Prec ctx);

void print_term(const ScalarExpr& t, std::ostringstream& os) {
    print(t, os, Prec::Mul);
}

void print(const ScalarExpr& e, std::ostringstream& os, Prec ctx) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Num: {
            bool neg = n.num < 0;
            bool frac = n.num.get_den() != 1;
            bool parens = (neg && ctx >= Prec::Mul) || (frac && ctx >= Prec::Pow);
            if (parens) os << '(';
            os << rational_str(n.num);
            if (parens) os << ')';
            return;
        }
        case Kind::Sym:
            os << n.sym;
            return;
        case Kind::Fun:
            os << fn_name(n.fn) << '(';
            print(n.kids[0], os, Prec::Add);
            os << ')';
            return;
        case Kind::Pow: {
            const Node& b = n.kids[0].node();
            bool bparens = !(b.kind == Kind::Sym || b.kind == Kind::Fun ||
                             (b.kind == Kind::Num && b.num >= 0 && b.num.get_den() == 1));
            if (bparens) os << '(';
            print(n.kids[0], os, Prec::Atom);
            if (bparens) os << ')';
            os << '^';
            if (n.num >= 0 && n.num.get_den() == 1) os << rational_str(n.num);
            else os << '(' << rational_str(n.num) << ')';
            return;
        }
        case Kind::Mul: {
            bool parens = ctx >= Prec::Unary;
            if (parens) os << '(';
            bool first = true;
            for (const auto& k : n.kids) {
                if (!first) os << '*';
                print(k, os, Prec::Unary);
                first = false;
            }
            if (parens) os << ')';
            return;
        }
        case Kind::Add: {
            bool parens = ctx >= Prec::Mul;
            if (parens) os << '(';
            bool first = true;
            for (const auto& k : n.kids) {
                auto [c, mono] = split_coeff(k);
                if (first) {
                    print_term(k, os);
                } else if (c < 0) {
                    os << " - ";
                    if (c == -1 && !mono.is_one_literal()) print_term(mono, os);
                    else print_term(ScalarExpr::product({ScalarExpr::rational(-c), mono}), os);
                } else {
                    os << " + ";
                    print_term(k, os);
                }
                first = false;
            }
            if (parens) os << ')';
            return;
        }
    }
}

}  // namespace

std::string ScalarExpr::str() const {
    std::ostringstream os;
    print(*this, os, Prec::Add);
    return os.str();
}

// ---------------------------------------------------------------------
// sampled zero test

Bindings sample_point(const std::set<std::string>& symbols,
                      const SampleOptions& opts, int round) {
    // one generator per (seed, round): stable under unrelated queries
    std::mt19937_64 rng(opts.seed + 0x9e3779b97f4a7c15ULL * (round + 1));
    std::uniform_real_distribution<double> unit(0.15, 0.85);
    Bindings b;
    for (const auto& s : symbols) {  // std::set: deterministic order
        double u = unit(rng);
        if (s == "pi") { b[s] = M_PI; continue; }
        auto pin = opts.pinned.find(s);
        if (pin != opts.pinned.end()) { b[s] = pin->second; continue; }
        auto r = opts.ranges.find(s);
        if (r != opts.ranges.end())
            b[s] = r->second.first + u * (r->second.second - r->second.first);
        else
            b[s] = 0.2 + u;  // default window away from 0
    }
    return b;
}

Ternary is_zero(const ScalarExpr& e, const SampleOptions& opts) {
    if (e.is_zero_literal()) return Ternary::Zero;
    if (e.is_rational()) return Ternary::NonZero;
    std::set<std::string> syms = e.free_symbols();
    for (int round = 0; round < opts.rounds; ++round) {
        Bindings b = sample_point(syms, opts, round);
        try {
            double v = e.eval(b);
            if (std::isfinite(v) && std::fabs(v) > opts.nonzero_tol)
                return Ternary::NonZero;
        } catch (const EvalError&) {
            // sample outside the domain: try the next round
        }
    }
    return Ternary::Unknown;
}

// ---------------------------------------------------------------------
// Chart / SymbolTable

Chart::Chart(std::vector<std::string> coordinates,
             std::vector<std::pair<double, double>> bounds)
    : coords_(std::move(coordinates)), bounds_(std::move(bounds)) {
    if (coords_.size() < 2 || coords_.size() > 4)
        throw DimensionError("chart dimension must be between 2 and 4, got " +
                             std::to_string(coords_.size()));
    std::set<std::string> seen;
    for (const auto& c : coords_) {
        if (c == "pi") throw std::invalid_argument("'pi' is reserved");
        if (!seen.insert(c).second)
            throw std::invalid_argument("duplicate coordinate name '" + c + "'");
    }
    if (!bounds_.empty() && bounds_.size() != coords_.size())
        throw std::invalid_argument("bounds list length must match dimension");
}

int Chart::axis_of(const std::string& name) const {
    for (std::size_t i = 0; i < coords_.size(); ++i)
        if (coords_[i] == name) return static_cast<int>(i);
    return -1;
}

std::optional<std::pair<double, double>> Chart::bounds(int axis) const {
    if (bounds_.empty()) return std::nullopt;
    return bounds_.at(axis);
}

ChartPtr make_chart(std::vector<std::string> coordinates,
                    std::vector<std::pair<double, double>> bounds) {
    return std::make_shared<const Chart>(std::move(coordinates), std::move(bounds));
}

SymbolTable SymbolTable::for_chart(const Chart& chart,
                                   std::set<std::string> parameters) {
    SymbolTable t;
    t.coordinates.insert(chart.coordinates().begin(), chart.coordinates().end());
    t.parameters = std::move(parameters);
    return t;
}

bool SymbolTable::declared(const std::string& name) const {
    return name == "pi" || coordinates.count(name) || parameters.count(name);
}

}  // namespace cartanforge
