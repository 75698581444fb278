#include "cartanforge/catalog.hpp"

#include <cmath>
#include <sstream>

#include "cartanforge/einstein.hpp"

namespace cartanforge {

namespace {

ScalarExpr parse_in(const std::string& text, const ChartPtr& chart,
                    const std::set<std::string>& params) {
    return parse_expr(text, SymbolTable::for_chart(*chart, params));
}

Form one_form(const ChartPtr& chart, const std::set<std::string>& params,
              const std::vector<std::string>& coeffs) {
    Form f(chart, 1);
    for (int a = 0; a < chart->dimension(); ++a) {
        if (coeffs[a] == "0") continue;
        f.add_term({a}, parse_in(coeffs[a], chart, params));
    }
    return f;
}

FormMatrix zero_connection(const ChartPtr& chart) {
    int n = chart->dimension();
    return FormMatrix(n, std::vector<Form>(n, Form(chart, 1)));
}

LedgerClaim claim(LedgerClaim::Kind kind, std::string note, double tol = 1e-9) {
    LedgerClaim c;
    c.kind = kind;
    c.note = std::move(note);
    c.tolerance = tol;
    return c;
}

LedgerClaim component_claim(LedgerClaim::Kind kind, std::array<int, 4> idx,
                            std::string expected, std::string note) {
    LedgerClaim c;
    c.kind = kind;
    c.indices = idx;
    c.expected = std::move(expected);
    c.note = std::move(note);
    return c;
}

struct ParsedSpec {
    std::string base;
    std::optional<double> arg;
};

ParsedSpec parse_spec(const std::string& spec) {
    auto open = spec.find('(');
    if (open == std::string::npos) return {spec, std::nullopt};
    if (spec.back() != ')')
        throw std::invalid_argument("malformed catalog name '" + spec + "'");
    std::string base = spec.substr(0, open);
    std::string arg = spec.substr(open + 1, spec.size() - open - 2);
    // accept "r=2" / "alpha=0.5" or a bare number
    auto eq = arg.find('=');
    if (eq != std::string::npos) arg = arg.substr(eq + 1);
    try {
        return {base, std::stod(arg)};
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed catalog parameter in '" + spec + "'");
    }
}

int levi_civita_symbol(int i, int j, int k) {
    if (i == j || j == k || i == k) return 0;
    return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

// -- entry builders ----------------------------------------------------

CatalogEntry flat_entry(int n) {
    CatalogEntry e;
    e.base = "flat" + std::to_string(n);
    e.name = e.base;
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    auto chart = make_chart(names, std::vector<std::pair<double, double>>(
                                       n, {-10.0, 10.0}));
    std::vector<Form> cof;
    for (int i = 0; i < n; ++i)
        cof.push_back(Form::coordinate_differential(chart, i));
    e.frame = std::make_shared<FrameField>(chart, Signature::euclidean(n), cof);
    e.connection = std::make_shared<CartanConnection>(levi_civita(e.frame));
    e.connection_is_levi_civita = true;
    e.ledger = {
        claim(LedgerClaim::Kind::RotationalFlat, "identity coframe, zero connection"),
        claim(LedgerClaim::Kind::TorsionZero, "Levi-Civita by construction"),
        claim(LedgerClaim::Kind::RicciZero, "flat space"),
        claim(LedgerClaim::Kind::AutoparallelsStraight, "straight lines in Cartesian coordinates"),
    };
    return e;
}

CatalogEntry polar2_entry() {
    CatalogEntry e;
    e.base = e.name = "polar2";
    auto chart = make_chart({"r", "phi"}, {{0.1, 5.0}, {-6.3, 6.3}});
    std::vector<Form> cof{one_form(chart, {}, {"1", "0"}),
                          one_form(chart, {}, {"0", "r"})};
    e.frame = std::make_shared<FrameField>(chart, Signature::euclidean(2), cof);
    e.connection = std::make_shared<CartanConnection>(levi_civita(e.frame));
    e.connection_is_levi_civita = true;
    e.ledger = {
        claim(LedgerClaim::Kind::RotationalFlat,
              "d(r dphi) cancels against the solved connection term"),
        claim(LedgerClaim::Kind::TorsionZero, "Levi-Civita by construction"),
    };
    return e;
}

CatalogEntry sphere2_entry(double r) {
    CatalogEntry e;
    e.base = "sphere2";
    e.parameters["r"] = r;
    std::ostringstream nm;
    nm << "sphere2(r=" << r << ")";
    e.name = nm.str();
    auto chart = make_chart({"theta", "phi"}, {{0.02, 3.12}, {-6.3, 6.3}});
    std::set<std::string> params{"r"};
    std::vector<Form> cof{one_form(chart, params, {"r", "0"}),
                          one_form(chart, params, {"0", "r*sin(theta)"})};
    e.frame = std::make_shared<FrameField>(chart, Signature::euclidean(2), cof,
                                           e.parameters);
    e.connection = std::make_shared<CartanConnection>(levi_civita(e.frame));
    e.connection_is_levi_civita = true;
    e.ledger = {
        claim(LedgerClaim::Kind::TorsionZero, "Levi-Civita by construction"),
        claim(LedgerClaim::Kind::RotationalNonzero, "round metric"),
        component_claim(LedgerClaim::Kind::CurvatureComponent, {0, 1, 0, 1},
                        "r^(-2)", "sectional curvature, Christoffel oracle"),
        component_claim(LedgerClaim::Kind::ScalarCurvature, {-1, -1, -1, -1},
                        "2*r^(-2)", "Christoffel oracle"),
    };
    return e;
}

std::vector<Form> sphere3_coframe(const ChartPtr& chart,
                                  const std::set<std::string>& params) {
    // left-invariant coframe of the round 3-sphere in zxz Euler angles
    // (psi, theta, phi): w^i = (r/2) sigma_i with d sigma_i = -sigma_j^sigma_k
    return {
        one_form(chart, params,
                 {"0", "r/2*cos(psi)", "r/2*sin(psi)*sin(theta)"}),
        one_form(chart, params,
                 {"0", "-r/2*sin(psi)", "r/2*cos(psi)*sin(theta)"}),
        one_form(chart, params, {"r/2", "0", "r/2*cos(theta)"}),
    };
}

ChartPtr sphere3_chart() {
    return make_chart({"psi", "theta", "phi"},
                      {{-12.6, 12.6}, {0.02, 3.12}, {-6.3, 6.3}});
}

CatalogEntry sphere3_lc_entry(double r) {
    CatalogEntry e;
    e.base = "sphere3_lc";
    e.parameters["r"] = r;
    std::ostringstream nm;
    nm << "sphere3_lc(r=" << r << ")";
    e.name = nm.str();
    auto chart = sphere3_chart();
    e.frame = std::make_shared<FrameField>(chart, Signature::euclidean(3),
                                           sphere3_coframe(chart, {"r"}),
                                           e.parameters);
    e.connection = std::make_shared<CartanConnection>(levi_civita(e.frame));
    e.connection_is_levi_civita = true;
    e.ledger = {
        claim(LedgerClaim::Kind::TorsionZero, "Levi-Civita by construction"),
        claim(LedgerClaim::Kind::RotationalNonzero, "round metric"),
        component_claim(LedgerClaim::Kind::CurvatureComponent, {0, 1, 0, 1},
                        "r^(-2)", "sectional curvature of the round sphere"),
        component_claim(LedgerClaim::Kind::ScalarCurvature, {-1, -1, -1, -1},
                        "6*r^(-2)", "Christoffel oracle"),
    };
    return e;
}

CatalogEntry sphere3_tele_entry(double r) {
    CatalogEntry e;
    e.base = "sphere3_tele";
    e.parameters["r"] = r;
    std::ostringstream nm;
    nm << "sphere3_tele(r=" << r << ")";
    e.name = nm.str();
    auto chart = sphere3_chart();
    e.frame = std::make_shared<FrameField>(chart, Signature::euclidean(3),
                                           sphere3_coframe(chart, {"r"}),
                                           e.parameters);
    e.connection =
        std::make_shared<CartanConnection>(e.frame, zero_connection(chart));
    e.ledger = {
        claim(LedgerClaim::Kind::RotationalFlat, "globally parallel frame"),
        claim(LedgerClaim::Kind::TorsionNonzero, "Maurer-Cartan equations"),
        claim(LedgerClaim::Kind::TorsionTotallyAntisymmetric,
              "structure constants of so(3)"),
        component_claim(LedgerClaim::Kind::TorsionComponent, {0, 1, 2, -1},
                        "-2/r", "torsion equals minus the bracket"),
        claim(LedgerClaim::Kind::AutoparallelsMatchMetricGeodesics,
              "bi-invariant metric: one-parameter subgroup translates", 1e-6),
        claim(LedgerClaim::Kind::NormalityHolds,
              "totally antisymmetric torsion"),
    };
    return e;
}

CatalogEntry staircase_entry(double alpha) {
    CatalogEntry e;
    e.base = "staircase";
    e.parameters["alpha"] = alpha;
    std::ostringstream nm;
    nm << "staircase(alpha=" << alpha << ")";
    e.name = nm.str();
    auto chart = make_chart({"x1", "x2", "x3"},
                            std::vector<std::pair<double, double>>(3, {-10.0, 10.0}));
    std::vector<Form> cof;
    for (int i = 0; i < 3; ++i)
        cof.push_back(Form::coordinate_differential(chart, i));
    e.frame = std::make_shared<FrameField>(chart, Signature::euclidean(3), cof,
                                           e.parameters);
    FormMatrix omega = zero_connection(chart);
    ScalarExpr a = ScalarExpr::symbol("alpha");
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                int s = levi_civita_symbol(i, j, k);
                if (s == 0) continue;
                omega[i][j].add_term({k}, ScalarExpr::rational(s) * a);
            }
    e.connection = std::make_shared<CartanConnection>(e.frame, std::move(omega));
    e.ledger = {
        claim(LedgerClaim::Kind::TorsionNonzero, "constant contorsion"),
        claim(LedgerClaim::Kind::TorsionTotallyAntisymmetric,
              "epsilon-symbol contorsion"),
        component_claim(LedgerClaim::Kind::TorsionComponent, {0, 1, 2, -1},
                        "-2*alpha", "hand expansion of the first structure equation"),
        component_claim(LedgerClaim::Kind::CurvatureComponent, {0, 1, 0, 1},
                        "-alpha^2", "hand expansion of the quadratic term"),
        claim(LedgerClaim::Kind::RotationalNonzero,
              "curvature is quadratic in the contorsion"),
        claim(LedgerClaim::Kind::AutoparallelsStraight,
              "antisymmetric part drops from the symmetrized equation"),
        claim(LedgerClaim::Kind::NormalityHolds,
              "totally antisymmetric torsion"),
    };
    return e;
}

ChartPtr minkowski_chart() {
    return make_chart({"t", "x", "y", "z"},
                      std::vector<std::pair<double, double>>(4, {-10.0, 10.0}));
}

CatalogEntry minkowski_entry() {
    CatalogEntry e;
    e.base = e.name = "minkowski";
    auto chart = minkowski_chart();
    std::vector<Form> cof;
    for (int i = 0; i < 4; ++i)
        cof.push_back(Form::coordinate_differential(chart, i));
    e.frame = std::make_shared<FrameField>(chart, Signature::lorentzian(4), cof);
    e.connection = std::make_shared<CartanConnection>(levi_civita(e.frame));
    e.connection_is_levi_civita = true;
    e.ledger = {
        claim(LedgerClaim::Kind::RotationalFlat, "constant coframe"),
        claim(LedgerClaim::Kind::TorsionZero, "Levi-Civita by construction"),
        claim(LedgerClaim::Kind::RicciZero, "flat space"),
    };
    return e;
}

CatalogEntry diag4_entry() {
    CatalogEntry e;
    e.base = e.name = "diag4";
    auto chart = make_chart({"t", "x", "y", "z"},
                            {{-0.9, 0.9}, {-10, 10}, {-10, 10}, {-10, 10}});
    std::vector<Form> cof{one_form(chart, {}, {"1", "0", "0", "0"}),
                          one_form(chart, {}, {"0", "exp(t)", "0", "0"}),
                          one_form(chart, {}, {"0", "0", "exp(t)", "0"}),
                          one_form(chart, {}, {"0", "0", "0", "exp(t)"})};
    e.frame = std::make_shared<FrameField>(chart, Signature::lorentzian(4), cof);
    e.connection = std::make_shared<CartanConnection>(levi_civita(e.frame));
    e.connection_is_levi_civita = true;
    e.ledger = {
        claim(LedgerClaim::Kind::TorsionZero, "Levi-Civita by construction"),
        claim(LedgerClaim::Kind::RotationalNonzero, "exponential scale factor"),
        component_claim(LedgerClaim::Kind::ScalarCurvature, {-1, -1, -1, -1},
                        "-12", "coordinate Riemann oracle"),
    };
    return e;
}

CatalogEntry mink_torsion_entry(double alpha) {
    CatalogEntry e;
    e.base = "mink-torsion";
    e.parameters["alpha"] = alpha;
    std::ostringstream nm;
    nm << "mink-torsion(alpha=" << alpha << ")";
    e.name = nm.str();
    auto chart = minkowski_chart();
    std::vector<Form> cof;
    for (int i = 0; i < 4; ++i)
        cof.push_back(Form::coordinate_differential(chart, i));
    e.frame = std::make_shared<FrameField>(chart, Signature::lorentzian(4), cof,
                                           e.parameters);
    // spatial constant contorsion K^a_b = alpha eps_{abc} dx^c, a,b,c in 1..3
    FormMatrix omega = zero_connection(chart);
    ScalarExpr a = ScalarExpr::symbol("alpha");
    for (int i = 1; i < 4; ++i)
        for (int j = 1; j < 4; ++j)
            for (int k = 1; k < 4; ++k) {
                int s = levi_civita_symbol(i - 1, j - 1, k - 1);
                if (s == 0) continue;
                omega[i][j].add_term({k}, ScalarExpr::rational(s) * a);
            }
    e.connection = std::make_shared<CartanConnection>(e.frame, std::move(omega));
    e.ledger = {
        claim(LedgerClaim::Kind::TorsionNonzero, "spatial contorsion"),
        claim(LedgerClaim::Kind::TorsionTotallyAntisymmetric,
              "epsilon-symbol contorsion"),
        claim(LedgerClaim::Kind::RotationalNonzero,
              "curvature is quadratic in the contorsion"),
        claim(LedgerClaim::Kind::AutoparallelsStraight,
              "antisymmetric part drops from the symmetrized equation"),
    };
    return e;
}

CatalogEntry corrupt_entry() {
    // negative control: a deliberately wrong scalar-curvature claim
    CatalogEntry e = sphere2_entry(1.0);
    e.base = "corrupt-ledger";
    e.name = "corrupt-ledger";
    e.negative_control = true;
    e.ledger.push_back(component_claim(LedgerClaim::Kind::ScalarCurvature,
                                       {-1, -1, -1, -1}, "3*r^(-2)",
                                       "deliberately corrupted fixture"));
    return e;
}

}  // namespace

const char* ledger_kind_name(LedgerClaim::Kind k) {
    switch (k) {
        case LedgerClaim::Kind::RotationalFlat: return "rotational-flat";
        case LedgerClaim::Kind::RotationalNonzero: return "rotational-nonzero";
        case LedgerClaim::Kind::TorsionZero: return "torsion-zero";
        case LedgerClaim::Kind::TorsionNonzero: return "torsion-nonzero";
        case LedgerClaim::Kind::TorsionTotallyAntisymmetric:
            return "torsion-totally-antisymmetric";
        case LedgerClaim::Kind::TorsionComponent: return "torsion-component";
        case LedgerClaim::Kind::CurvatureComponent: return "curvature-component";
        case LedgerClaim::Kind::ScalarCurvature: return "scalar-curvature";
        case LedgerClaim::Kind::RicciZero: return "ricci-zero";
        case LedgerClaim::Kind::AutoparallelsStraight:
            return "autoparallels-straight";
        case LedgerClaim::Kind::AutoparallelsMatchMetricGeodesics:
            return "autoparallels-match-geodesics";
        case LedgerClaim::Kind::NormalityHolds: return "normality";
    }
    return "?";
}

SymbolTable CatalogEntry::symbols() const {
    std::set<std::string> params;
    for (const auto& [k, v] : parameters) params.insert(k);
    return SymbolTable::for_chart(*frame->chart(), params);
}

std::vector<std::string> catalog_names() {
    return {"flat2",       "flat3",   "polar2",       "sphere2",
            "sphere3_lc",  "sphere3_tele", "staircase", "minkowski",
            "diag4",       "mink-torsion"};
}

CatalogEntry builtin(const std::string& spec) {
    ParsedSpec p = parse_spec(spec);
    auto arg_or = [&](double dflt) { return p.arg.value_or(dflt); };
    auto no_arg = [&]() {
        if (p.arg)
            throw std::invalid_argument("catalog entry '" + p.base +
                                        "' takes no parameter");
    };
    if (p.base == "flat2") { no_arg(); return flat_entry(2); }
    if (p.base == "flat3") { no_arg(); return flat_entry(3); }
    if (p.base == "polar2") { no_arg(); return polar2_entry(); }
    if (p.base == "sphere2") return sphere2_entry(arg_or(1.0));
    if (p.base == "sphere3_lc") return sphere3_lc_entry(arg_or(1.0));
    if (p.base == "sphere3_tele") return sphere3_tele_entry(arg_or(1.0));
    if (p.base == "staircase") return staircase_entry(arg_or(0.3));
    if (p.base == "minkowski") { no_arg(); return minkowski_entry(); }
    if (p.base == "diag4") { no_arg(); return diag4_entry(); }
    if (p.base == "mink-torsion") return mink_torsion_entry(arg_or(0.3));
    if (p.base == "corrupt-ledger") { no_arg(); return corrupt_entry(); }
    throw std::invalid_argument("unknown catalog entry '" + p.base + "'");
}

// ---------------------------------------------------------------------
// structure constants and Lie-group distant parallelism

StructureConstants::StructureConstants(
    int dimension, std::map<std::array<int, 3>, Rational> components)
    : dim_(dimension) {
    for (const auto& [key, v] : components) {
        auto [k, i, j] = key;
        if (k < 0 || k >= dim_ || i < 0 || i >= dim_ || j < 0 || j >= dim_)
            throw std::invalid_argument("structure-constant index out of range");
        if (i == j && v != 0)
            throw std::invalid_argument("c^k_{ii} must vanish");
        if (i < j) c_[{k, i, j}] = v;
        else if (i > j) c_[{k, j, i}] = -v;
    }
    // Jacobi identity, exactly
    for (int i = 0; i < dim_; ++i)
        for (int j = i + 1; j < dim_; ++j)
            for (int k = j + 1; k < dim_; ++k)
                for (int l = 0; l < dim_; ++l) {
                    Rational s = 0;
                    for (int m = 0; m < dim_; ++m)
                        s += c(m, i, j) * c(l, m, k) + c(m, j, k) * c(l, m, i) +
                             c(m, k, i) * c(l, m, j);
                    if (s != 0) {
                        std::ostringstream os;
                        os << "Jacobi identity fails for (i,j,k,l)=(" << i
                           << "," << j << "," << k << "," << l << ")";
                        throw std::invalid_argument(os.str());
                    }
                }
}

Rational StructureConstants::c(int k, int i, int j) const {
    bool flip = i > j;
    if (flip) std::swap(i, j);
    auto it = c_.find({k, i, j});
    if (it == c_.end()) return 0;
    return flip ? Rational(-it->second) : it->second;
}

std::vector<std::vector<Rational>> StructureConstants::killing_form() const {
    std::vector<std::vector<Rational>> K(dim_, std::vector<Rational>(dim_, 0));
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            for (int m = 0; m < dim_; ++m)
                for (int l = 0; l < dim_; ++l) K[i][j] += c(m, i, l) * c(l, j, m);
    return K;
}

StructureConstants StructureConstants::so3(const Rational& scale) {
    std::map<std::array<int, 3>, Rational> c;
    c[{0, 1, 2}] = scale;
    c[{1, 2, 0}] = scale;
    c[{2, 0, 1}] = scale;
    return StructureConstants(3, std::move(c));
}

StructureConstants StructureConstants::abelian(int dimension) {
    return StructureConstants(dimension, {});
}

namespace {

using RatMatrix = std::vector<std::vector<Rational>>;

RatMatrix ad_matrix(const StructureConstants& sc, int m) {
    int n = sc.dimension();
    RatMatrix ad(n, std::vector<Rational>(n, 0));
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) ad[k][j] = sc.c(k, m, j);
    return ad;
}

RatMatrix rat_mul(const RatMatrix& a, const RatMatrix& b) {
    int n = static_cast<int>(a.size());
    RatMatrix out(n, std::vector<Rational>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) out[i][j] += a[i][k] * b[k][j];
    return out;
}

bool rat_is_zero(const RatMatrix& a) {
    for (const auto& row : a)
        for (const auto& v : row)
            if (v != 0) return false;
    return true;
}

// symbolic exp(t * ad) for a single generator: exact for nilpotent ad and
// for rotation-type ad with ad^3 = -lambda^2 ad (Rodrigues form)
ExprMatrix exp_ad(const RatMatrix& ad, const ScalarExpr& t) {
    int n = static_cast<int>(ad.size());
    auto to_expr = [&](const RatMatrix& m, ExprMatrix& out) {
        out.assign(n, std::vector<ScalarExpr>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out[i][j] = ScalarExpr::rational(m[i][j]);
    };
    // nilpotency scan
    std::vector<RatMatrix> powers{ad};
    bool nilpotent = rat_is_zero(ad);
    while (!nilpotent && static_cast<int>(powers.size()) < n) {
        powers.push_back(rat_mul(powers.back(), ad));
        if (rat_is_zero(powers.back())) {
            powers.pop_back();
            nilpotent = true;
        }
    }
    ExprMatrix out(n, std::vector<ScalarExpr>(n, ScalarExpr::rational(0)));
    for (int i = 0; i < n; ++i) out[i][i] = ScalarExpr::rational(1);
    if (nilpotent) {
        Rational fact = 1;
        ScalarExpr tp = ScalarExpr::rational(1);
        for (std::size_t p = 0; p < powers.size(); ++p) {
            fact *= static_cast<long>(p + 1);
            tp = tp * t;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    out[i][j] = out[i][j] + ScalarExpr::rational(powers[p][i][j] / fact) * tp;
        }
        return out;
    }
    // rotation type: ad^3 = -lambda^2 ad with lambda^2 a positive rational
    RatMatrix ad2 = rat_mul(ad, ad);
    RatMatrix ad3 = rat_mul(ad2, ad);
    Rational lam2 = 0;
    for (int i = 0; i < n && lam2 == 0; ++i)
        for (int j = 0; j < n && lam2 == 0; ++j)
            if (ad[i][j] != 0) lam2 = -ad3[i][j] / ad[i][j];
    if (lam2 <= 0)
        throw std::invalid_argument(
            "unsupported structure constants: generator is neither nilpotent "
            "nor rotation-type");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (ad3[i][j] + lam2 * ad[i][j] != 0)
                throw std::invalid_argument(
                    "unsupported structure constants: ad^3 != -lambda^2 ad");
    // exp(t ad) = I + sin(L t)/L ad + (1 - cos(L t))/L^2 ad^2,  L = sqrt(lam2)
    ScalarExpr L = ScalarExpr::pow(ScalarExpr::rational(lam2), Rational(1, 2));
    ScalarExpr Lt = L * t;
    ScalarExpr s_over = ScalarExpr::call(Fn::Sin, Lt) / L;
    ScalarExpr c_over = (ScalarExpr::rational(1) - ScalarExpr::call(Fn::Cos, Lt)) /
                        ScalarExpr::rational(lam2);
    ExprMatrix adE, ad2E;
    to_expr(ad, adE);
    to_expr(ad2, ad2E);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out[i][j] = out[i][j] + s_over * adE[i][j] + c_over * ad2E[i][j];
    return out;
}

std::vector<ScalarExpr> mat_apply(const ExprMatrix& m, const std::vector<ScalarExpr>& v) {
    int n = static_cast<int>(m.size());
    std::vector<ScalarExpr> out(n, ScalarExpr::rational(0));
    for (int i = 0; i < n; ++i) {
        std::vector<ScalarExpr> terms;
        for (int j = 0; j < n; ++j) terms.push_back(m[i][j] * v[j]);
        out[i] = ScalarExpr::sum(std::move(terms));
    }
    return out;
}

}  // namespace

CatalogEntry lie_group_teleparallel(const StructureConstants& sc, GroupSide side) {
    int n = sc.dimension();
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    auto chart = make_chart(names, std::vector<std::pair<double, double>>(
                                       n, {-2.0, 2.0}));

    // invariant Maurer-Cartan form in product-of-exponentials coordinates
    // g = exp(x1 e1) ... exp(xn en):
    //   left:  theta = sum_k Ad(exp(-xn ad_n)) ... Ad(exp(-x_{k+1} ad_{k+1})) e_k dx_k
    //   right: rho   = sum_k Ad(exp(+x1 ad_1)) ... Ad(exp(+x_{k-1} ad_{k-1})) e_k dx_k
    std::vector<ExprMatrix> exp_cache(n);
    for (int m = 0; m < n; ++m) {
        ScalarExpr xm = ScalarExpr::symbol(chart->coordinate(m));
        ScalarExpr tm = side == GroupSide::Left ? -xm : xm;
        exp_cache[m] = exp_ad(ad_matrix(sc, m), tm);
    }
    std::vector<Form> coframe(n, Form(chart, 1));
    for (int k = 0; k < n; ++k) {
        std::vector<ScalarExpr> v(n, ScalarExpr::rational(0));
        v[k] = ScalarExpr::rational(1);
        if (side == GroupSide::Left) {
            for (int m = k + 1; m < n; ++m) v = mat_apply(exp_cache[m], v);
        } else {
            for (int m = k - 1; m >= 0; --m) v = mat_apply(exp_cache[m], v);
        }
        for (int i = 0; i < n; ++i)
            if (!v[i].is_zero_literal()) coframe[i].add_term({k}, v[i]);
    }

    CatalogEntry e;
    e.base = side == GroupSide::Left ? "lie-left" : "lie-right";
    e.name = e.base;
    e.frame = std::make_shared<FrameField>(chart, Signature::euclidean(n),
                                           std::move(coframe));
    e.connection = std::make_shared<CartanConnection>(e.frame, zero_connection(chart));
    e.ledger.push_back(
        claim(LedgerClaim::Kind::RotationalFlat, "globally parallel frame"));
    int sign = side == GroupSide::Left ? -1 : 1;
    bool any_nonzero = false;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                Rational cv = sc.c(i, j, k);
                if (cv == 0) continue;
                any_nonzero = true;
                e.ledger.push_back(component_claim(
                    LedgerClaim::Kind::TorsionComponent, {i, j, k, -1},
                    ScalarExpr::rational(sign * cv).str(),
                    "Maurer-Cartan structure equation"));
            }
    if (!any_nonzero)
        e.ledger.push_back(claim(LedgerClaim::Kind::TorsionZero, "abelian group"));
    // bi-invariance of the frame metric needs totally antisymmetric constants
    bool tot_antisym = true;
    for (int i = 0; i < n && tot_antisym; ++i)
        for (int j = 0; j < n && tot_antisym; ++j)
            for (int k = 0; k < n && tot_antisym; ++k)
                if (sc.c(i, j, k) != -sc.c(j, i, k)) tot_antisym = false;
    if (tot_antisym && any_nonzero) {
        e.ledger.push_back(claim(LedgerClaim::Kind::TorsionTotallyAntisymmetric,
                                 "totally antisymmetric constants"));
        e.ledger.push_back(
            claim(LedgerClaim::Kind::AutoparallelsMatchMetricGeodesics,
                  "bi-invariant metric", 1e-6));
    }
    return e;
}

// ---------------------------------------------------------------------
// ledger verification

namespace {

std::string fmt_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

struct TrajectoryPair {
    std::vector<double> x0, v0;
};

TrajectoryPair deterministic_ics(const FrameField& F) {
    TrajectoryPair p;
    int n = F.dimension();
    static const double vpat[4] = {0.7, -0.4, 0.3, 0.2};
    for (int a = 0; a < n; ++a) {
        auto b = F.chart()->bounds(a);
        p.x0.push_back(b ? b->first + 0.45 * (b->second - b->first)
                         : 0.1 * (a + 1));
        p.v0.push_back(vpat[a]);
    }
    return p;
}

}  // namespace

bool LedgerReport::all_pass() const {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

LedgerReport verify_ledger(const CatalogEntry& entry) {
    LedgerReport report;
    report.entry = entry.name;
    const CartanConnection& C = *entry.connection;
    SampleOptions opts = entry.frame->sample_options();
    CurvatureData data = structure_equations(C);
    FlatnessReport flat = is_flat(C);
    SymbolTable table = entry.symbols();

    for (const LedgerClaim& cl : entry.ledger) {
        ClaimResult res;
        res.claim = cl;
        switch (cl.kind) {
            case LedgerClaim::Kind::RotationalFlat:
                res.pass = flat.rotational.accepted();
                res.downgraded = flat.rotational.downgraded;
                res.measured = zero_check_name(flat.rotational.status);
                break;
            case LedgerClaim::Kind::RotationalNonzero:
                res.pass = flat.rotational.status == ZeroCheck::Status::NonZero;
                res.measured = zero_check_name(flat.rotational.status);
                break;
            case LedgerClaim::Kind::TorsionZero:
                res.pass = flat.translational.accepted();
                res.downgraded = flat.translational.downgraded;
                res.measured = zero_check_name(flat.translational.status);
                break;
            case LedgerClaim::Kind::TorsionNonzero:
                res.pass = flat.translational.status == ZeroCheck::Status::NonZero;
                res.measured = zero_check_name(flat.translational.status);
                break;
            case LedgerClaim::Kind::TorsionTotallyAntisymmetric: {
                const Signature& sig = entry.frame->signature();
                bool ok = true;
                bool down = false;
                int n = C.dimension();
                for (int i = 0; i < n && ok; ++i)
                    for (int j = 0; j < n && ok; ++j)
                        for (int k = 0; k < n && ok; ++k) {
                            ScalarExpr lhs =
                                ScalarExpr::rational(sig.eps(i)) *
                                    data.torsion_component(i, j, k) +
                                ScalarExpr::rational(sig.eps(j)) *
                                    data.torsion_component(j, i, k);
                            ZeroCheck z = prove_zero(lhs, opts);
                            ok = z.accepted();
                            down = down || z.downgraded;
                        }
                res.pass = ok;
                res.downgraded = down;
                res.measured = ok ? "antisymmetric" : "not antisymmetric";
                break;
            }
            case LedgerClaim::Kind::TorsionComponent: {
                ScalarExpr got = data.torsion_component(cl.indices[0], cl.indices[1],
                                                        cl.indices[2]);
                ScalarExpr want = parse_expr(cl.expected, table);
                ZeroCheck z = prove_zero(got - want, opts);
                res.pass = z.accepted();
                res.downgraded = z.downgraded;
                res.measured = got.str();
                break;
            }
            case LedgerClaim::Kind::CurvatureComponent: {
                ScalarExpr got =
                    data.curvature_component(cl.indices[0], cl.indices[1],
                                             cl.indices[2], cl.indices[3]);
                ScalarExpr want = parse_expr(cl.expected, table);
                ZeroCheck z = prove_zero(got - want, opts);
                res.pass = z.accepted();
                res.downgraded = z.downgraded;
                res.measured = got.str();
                break;
            }
            case LedgerClaim::Kind::ScalarCurvature: {
                EinsteinData ed = ricci_scalar(C);
                ScalarExpr want = parse_expr(cl.expected, table);
                ZeroCheck z = prove_zero(ed.scalar - want, opts);
                res.pass = z.accepted();
                res.downgraded = z.downgraded;
                res.measured = ed.scalar.str();
                break;
            }
            case LedgerClaim::Kind::RicciZero: {
                EinsteinData ed = ricci_scalar(C);
                bool ok = true;
                bool down = false;
                for (const auto& row : ed.ricci)
                    for (const auto& v : row) {
                        ZeroCheck z = prove_zero(v, opts);
                        ok = ok && z.accepted();
                        down = down || z.downgraded;
                    }
                res.pass = ok;
                res.downgraded = down;
                res.measured = ed.scalar.str();
                break;
            }
            case LedgerClaim::Kind::AutoparallelsStraight: {
                auto ics = deterministic_ics(*entry.frame);
                Trajectory tr = autoparallel(C, ics.x0, ics.v0, 1e-3, 1.0);
                double dev = 0;
                for (std::size_t s = 0; s < tr.times.size(); ++s)
                    for (std::size_t a = 0; a < ics.x0.size(); ++a)
                        dev = std::max(dev,
                                       std::fabs(tr.positions[s][a] -
                                                 (ics.x0[a] + tr.times[s] * ics.v0[a])));
                res.pass = dev < cl.tolerance;
                res.measured = fmt_sci(dev);
                break;
            }
            case LedgerClaim::Kind::AutoparallelsMatchMetricGeodesics: {
                auto ics = deterministic_ics(*entry.frame);
                Trajectory ap = autoparallel(C, ics.x0, ics.v0, 1e-3, 1.0);
                Trajectory ge = geodesic(entry.frame, ics.x0, ics.v0, 1e-3, 1.0);
                double dev = 0;
                for (std::size_t s = 0; s < ap.times.size(); ++s)
                    for (std::size_t a = 0; a < ics.x0.size(); ++a)
                        dev = std::max(dev, std::fabs(ap.positions[s][a] -
                                                      ge.positions[s][a]));
                res.pass = dev < cl.tolerance;
                res.measured = fmt_sci(dev);
                break;
            }
            case LedgerClaim::Kind::NormalityHolds: {
                auto planes = normality_check(C);
                bool ok = true;
                for (const auto& [plane, normal] : planes) ok = ok && normal;
                res.pass = ok;
                res.measured = ok ? "normal on all planes" : "violated";
                break;
            }
        }
        report.results.push_back(std::move(res));
    }
    return report;
}

}  // namespace cartanforge
