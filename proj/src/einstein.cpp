#include "cartanforge/einstein.hpp"

namespace cartanforge {

namespace {

void require_dim(const CartanConnection& C, int n, const char* what) {
    if (C.dimension() != n)
        throw DimensionError(std::string(what) + " requires dimension " +
                             std::to_string(n));
}

// cyclic permutation of (0..3) starting at i, with its sign
struct Cyclic4 {
    int i, j, k, l, sign;
};

Cyclic4 cyclic4(int i) {
    return Cyclic4{i, (i + 1) % 4, (i + 2) % 4, (i + 3) % 4, i % 2 == 0 ? 1 : -1};
}

// eps-lowered curvature 2-forms R_{ab} = eps_a R^a_b and torsion T_a
struct Lowered {
    FormMatrix R;
    std::vector<Form> T;
};

Lowered lowered(const CartanConnection& C) {
    Lowered out;
    out.R = curvature(C);
    out.T = torsion(C);
    const Signature& sig = C.frame().signature();
    int n = C.dimension();
    for (int a = 0; a < n; ++a) {
        if (sig.eps(a) == -1) {
            out.T[a] = -out.T[a];
            for (int b = 0; b < n; ++b) out.R[a][b] = -out.R[a][b];
        }
    }
    return out;
}

}  // namespace

EinsteinData ricci_scalar(const CartanConnection& C) {
    CurvatureData data = structure_equations(C);
    int n = C.dimension();
    const Signature& sig = C.frame().signature();
    EinsteinData out;
    out.ricci.assign(n, std::vector<ScalarExpr>(n));
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
            std::vector<ScalarExpr> terms;
            for (int k = 0; k < n; ++k)
                terms.push_back(data.curvature_component(k, j, k, l));
            out.ricci[j][l] = ScalarExpr::sum(std::move(terms));
        }
    std::vector<ScalarExpr> rsum;
    for (int j = 0; j < n; ++j)
        rsum.push_back(ScalarExpr::rational(sig.eps(j)) * out.ricci[j][j]);
    out.scalar = ScalarExpr::sum(std::move(rsum));
    out.tensor.assign(n, std::vector<ScalarExpr>(n, ScalarExpr::rational(0)));
    return out;
}

EinsteinData einstein_tensor(const CartanConnection& C, const Rational& alpha,
                             const Rational& beta) {
    EinsteinData out = ricci_scalar(C);
    out.alpha = alpha;
    out.beta = beta;
    int n = C.dimension();
    const Signature& sig = C.frame().signature();
    ScalarExpr a = ScalarExpr::rational(alpha);
    ScalarExpr b = ScalarExpr::rational(beta);
    ScalarExpr half_r = ScalarExpr::rational(1, 2) * out.scalar;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            ScalarExpr g = i == j ? ScalarExpr::rational(sig.eps(i))
                                  : ScalarExpr::rational(0);
            out.tensor[i][j] = a * (out.ricci[i][j] - half_r * g) + b * g;
        }
    return out;
}

Form GrassmannValuedForm::vector(int i) const {
    auto it = vector_part.find(Index{i});
    if (it != vector_part.end()) return it->second;
    throw DimensionError("vector slot not populated");
}

Form GrassmannValuedForm::bivector(int i, int j) const {
    bool flip = i > j;
    if (flip) std::swap(i, j);
    auto it = bivector_part.find(Index{i, j});
    if (it == bivector_part.end()) throw DimensionError("bivector slot not populated");
    return flip ? -it->second : it->second;
}

bool GrassmannValuedForm::structurally_zero() const {
    for (const auto& [idx, f] : vector_part)
        if (!f.is_structurally_zero()) return false;
    for (const auto& [idx, f] : bivector_part)
        if (!f.is_structurally_zero()) return false;
    return true;
}

GrassmannValuedForm einstein_form(const CartanConnection& C) {
    require_dim(C, 4, "the Einstein form");
    Lowered low = lowered(C);
    const auto& w = C.frame().coframe();
    GrassmannValuedForm out;
    for (int i = 0; i < 4; ++i) {
        auto [ii, j, k, l, sign] = cyclic4(i);
        Form pi = wedge(w[j], low.R[k][l]) + wedge(w[k], low.R[l][j]) +
                  wedge(w[l], low.R[j][k]);
        out.vector_part.emplace(Index{i},
                               pi.scaled(ScalarExpr::rational(sign)));
    }
    return out;
}

GrassmannValuedForm generalized_einstein_form(const CartanConnection& C) {
    require_dim(C, 4, "the generalized Einstein form");
    GrassmannValuedForm out = einstein_form(C);
    Lowered low = lowered(C);
    const auto& w = C.frame().coframe();
    // initialize the canonical bivector slots, then accumulate
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
            out.bivector_part.emplace(Index{a, b}, Form(C.frame().chart(), 3));
    for (int i = 0; i < 4; ++i) {
        auto [ii, j, k, l, sign] = cyclic4(i);
        Form contrib =
            (wedge(w[k], low.T[l]) - wedge(w[l], low.T[k]))
                .scaled(ScalarExpr::rational(-sign));
        // slot (i,j) with antisymmetric storage on i<j
        int a = i, b = j;
        if (a > b) {
            std::swap(a, b);
            contrib = -contrib;
        }
        auto it = out.bivector_part.find(Index{a, b});
        it->second = it->second + contrib;
    }
    return out;
}

std::vector<Form> three_dim_einstein(const CartanConnection& C) {
    require_dim(C, 3, "the 3-dimensional Einstein analogue");
    Lowered low = lowered(C);
    std::vector<Form> out;
    for (int i = 0; i < 3; ++i) {
        int k = (i + 1) % 3, l = (i + 2) % 3;
        out.push_back(low.R[k][l]);
    }
    return out;
}

GrassmannValuedForm vector_couple_invariant(const CartanConnection& C) {
    require_dim(C, 3, "the vector-and-couple invariant");
    Lowered low = lowered(C);
    GrassmannValuedForm out;
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        out.vector_part.emplace(Index{i}, low.R[j][k]);
        // couple slots pair the torsion with the complementary bivector:
        // (e2^e3) T_1 + (e3^e1) T_2 + (e1^e2) T_3
        Form t = low.T[i];
        int a = j, b = k;
        if (a > b) {
            std::swap(a, b);
            t = -t;
        }
        out.bivector_part.emplace(Index{a, b}, std::move(t));
    }
    return out;
}

GrassmannValuedForm covariant_exterior_derivative(const GrassmannValuedForm& G,
                                                  const CartanConnection& C) {
    int n = C.dimension();
    GrassmannValuedForm out;
    for (const auto& [idx, pi] : G.vector_part) {
        int i = idx[0];
        Form d = exterior_derivative(pi);
        for (int j = 0; j < n; ++j) {
            auto it = G.vector_part.find(Index{j});
            if (it == G.vector_part.end()) continue;
            d = d + wedge(C.omega(i, j), it->second);
        }
        out.vector_part.emplace(idx, std::move(d));
    }
    for (const auto& [idx, pi] : G.bivector_part) {
        int i = idx[0], j = idx[1];
        Form d = exterior_derivative(pi);
        for (int k = 0; k < n; ++k) {
            d = d + wedge(C.omega(i, k), G.bivector(k, j));
            d = d + wedge(C.omega(j, k), G.bivector(i, k));
        }
        out.bivector_part.emplace(idx, std::move(d));
    }
    return out;
}

ZeroCheck conservation_check(const GrassmannValuedForm& G,
                             const CartanConnection& C) {
    GrassmannValuedForm d = covariant_exterior_derivative(G, C);
    SampleOptions opts = C.frame().sample_options();
    ZeroCheck acc;
    acc.status = ZeroCheck::Status::ProvenZero;
    auto merge = [&acc](const ZeroCheck& z) {
        acc.downgraded = acc.downgraded || z.downgraded;
        acc.max_abs = std::max(acc.max_abs, z.max_abs);
        if (z.status == ZeroCheck::Status::NonZero)
            acc.status = ZeroCheck::Status::NonZero;
        else if (z.status == ZeroCheck::Status::Undecided &&
                 acc.status != ZeroCheck::Status::NonZero)
            acc.status = ZeroCheck::Status::Undecided;
        else if (z.status == ZeroCheck::Status::NumericZero &&
                 acc.status == ZeroCheck::Status::ProvenZero)
            acc.status = ZeroCheck::Status::NumericZero;
    };
    for (const auto& [idx, f] : d.vector_part) merge(prove_zero(f, opts, 1e-9));
    for (const auto& [idx, f] : d.bivector_part) merge(prove_zero(f, opts, 1e-9));
    return acc;
}

std::vector<Form> cartan_constraint(const CartanConnection& C) {
    require_dim(C, 4, "the torsion constraint");
    Lowered low = lowered(C);
    std::vector<Form> out;
    for (int i = 0; i < 4; ++i) {
        auto [ii, j, k, l, sign] = cyclic4(i);
        Form res = wedge(low.T[j], low.R[k][l]) + wedge(low.T[k], low.R[l][j]) +
                   wedge(low.T[l], low.R[j][k]);
        out.push_back(res.scaled(ScalarExpr::rational(sign)));
    }
    return out;
}

Form hilbert_lagrangian(const CartanConnection& C) {
    require_dim(C, 4, "the Hilbert Lagrangian");
    Lowered low = lowered(C);
    const auto& w = C.frame().coframe();
    Form out(C.frame().chart(), 4);
    for (int i = 0; i < 4; ++i) {
        auto [ii, j, k, l, sign] = cyclic4(i);
        out = out + wedge(wedge(w[i], w[j]), low.R[k][l])
                        .scaled(ScalarExpr::rational(sign));
    }
    return out;
}

}  // namespace cartanforge
