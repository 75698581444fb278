// Symbolic scalar expressions over chart coordinates and named parameters.
//
// Expressions are immutable trees kept in a canonical form: every factory
// (and every operator) re-canonicalizes, so structurally equal trees are
// interchangeable and simplify() is idempotent by construction.  The ordered
// rewrite set is documented in docs/expression-grammar.md.

#ifndef CARTANFORGE_EXPR_HPP
#define CARTANFORGE_EXPR_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace cartanforge {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Rational = mpq_class;

enum class Fn : std::uint8_t { Sin, Cos, Tan, Exp, Log };

const char* fn_name(Fn f);

/// Point/parameter bindings for numeric evaluation.  The constant `pi` is
/// implicitly bound unless overridden.
using Bindings = std::map<std::string, double>;

class ScalarExpr {
public:
    ScalarExpr();  // literal zero

    // -- construction (always canonical) ------------------------------
    static ScalarExpr rational(long num, long den = 1);
    static ScalarExpr rational(Rational q);
    static ScalarExpr from_double(double v);  // exact dyadic conversion
    static ScalarExpr symbol(std::string name);
    static ScalarExpr sum(std::vector<ScalarExpr> terms);
    static ScalarExpr product(std::vector<ScalarExpr> factors);
    static ScalarExpr pow(ScalarExpr base, Rational exponent);
    static ScalarExpr call(Fn f, ScalarExpr arg);
    static ScalarExpr sqrt(ScalarExpr arg) { return pow(std::move(arg), Rational(1, 2)); }
    static ScalarExpr pi() { return symbol("pi"); }

    ScalarExpr operator-() const;
    friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
    friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
    friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
    friend ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b);

    // -- inspection ----------------------------------------------------
    bool is_rational() const;
    bool is_zero_literal() const;
    bool is_one_literal() const;
    Rational rational_value() const;  // requires is_rational()
    bool same(const ScalarExpr& other) const;  // structural equality
    std::set<std::string> free_symbols() const;
    bool depends_on(const std::string& name) const;

    // -- operations ------------------------------------------------------
    ScalarExpr derivative(const std::string& coord) const;
    double eval(const Bindings& point) const;  // throws EvalError
    std::string str() const;

    // total order used for canonical sorting; exposed for containers
    static int compare(const ScalarExpr& a, const ScalarExpr& b);
    std::size_t hash() const;

    struct Node;
    using NodePtr = std::shared_ptr<const Node>;
    const Node& node() const { return *node_; }

protected:
    explicit ScalarExpr(NodePtr n) : node_(std::move(n)) {}

private:
    NodePtr node_;
};

inline bool operator==(const ScalarExpr& a, const ScalarExpr& b) { return a.same(b); }
inline bool operator!=(const ScalarExpr& a, const ScalarExpr& b) { return !a.same(b); }

/// Re-runs the canonicalizing rewrite pass.  Expressions are canonical by
/// construction, so this is the identity on anything built through the
/// public API; it exists as the documented simplification entry point.
ScalarExpr simplify(const ScalarExpr& e);

enum class Ternary { Zero, NonZero, Unknown };

const char* ternary_name(Ternary t);

/// Options for the sampled nonzero test.  Coordinates draw from their chart
/// bounds when provided, parameters from `pinned` when provided, everything
/// else from a default interval.  The seed is a fixed documented constant so
/// verdicts are reproducible.
struct SampleOptions {
    std::uint64_t seed = 0x5EEDCA127AB1E5ULL;
    int rounds = 20;
    double nonzero_tol = 1e-8;
    std::map<std::string, std::pair<double, double>> ranges;  // per-symbol
    std::map<std::string, double> pinned;
};

/// Tri-state zero test: Zero iff the canonical form is the literal 0,
/// NonZero if some sampled point evaluates with |value| > tol, Unknown
/// otherwise (the simplifier is deliberately not a complete decision
/// procedure).
Ternary is_zero(const ScalarExpr& e, const SampleOptions& opts = {});

/// Chart: an ordered coordinate system of dimension 2..4 with optional
/// per-axis sampling bounds.
class Chart {
public:
    Chart(std::vector<std::string> coordinates,
          std::vector<std::pair<double, double>> bounds = {});

    int dimension() const { return static_cast<int>(coords_.size()); }
    const std::vector<std::string>& coordinates() const { return coords_; }
    const std::string& coordinate(int axis) const { return coords_.at(axis); }
    int axis_of(const std::string& name) const;  // -1 when absent
    std::optional<std::pair<double, double>> bounds(int axis) const;

private:
    std::vector<std::string> coords_;
    std::vector<std::pair<double, double>> bounds_;
};

using ChartPtr = std::shared_ptr<const Chart>;

ChartPtr make_chart(std::vector<std::string> coordinates,
                    std::vector<std::pair<double, double>> bounds = {});

/// Declared symbols for the parser: chart coordinates plus named parameters.
/// `pi` is always declared.
struct SymbolTable {
    std::set<std::string> coordinates;
    std::set<std::string> parameters;

    static SymbolTable for_chart(const Chart& chart,
                                 std::set<std::string> parameters = {});
    bool declared(const std::string& name) const;
};

/// Parses infix arithmetic over declared symbols.  Grammar in
/// docs/expression-grammar.md.  Throws ParseError with a byte offset.
ScalarExpr parse_expr(std::string_view text, const SymbolTable& symbols);

/// Fills sample bindings for `symbols` according to `opts` (round-dependent,
/// deterministic).  Exposed for the numeric-fallback zero checks.
Bindings sample_point(const std::set<std::string>& symbols,
                      const SampleOptions& opts, int round);

}  // namespace cartanforge

#endif
