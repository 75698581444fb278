#include <cmath>
#include <functional>

#include "cartanforge/catalog.hpp"
#include "cartanforge/frames.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cartanforge;

namespace {

bool prove_zero_ok(const ScalarExpr& e, const SampleOptions& opts) {
    return prove_zero(e, opts).accepted();
}

}  // namespace

TEST_CASE("metric from coframe") {
    // identity coframe -> identity matrix
    CatalogEntry flat = builtin("flat3");
    ExprMatrix g = metric_from_coframe(*flat.frame);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) CHECK(g[i][j].is_one_literal());
            else CHECK(g[i][j].is_zero_literal());
        }
    // sphere coframe -> diag(r^2, r^2 sin^2 theta)
    CatalogEntry s2 = builtin("sphere2");
    ExprMatrix gs = metric_from_coframe(*s2.frame);
    SymbolTable t = s2.symbols();
    CHECK(gs[0][0].same(parse_expr("r^2", t)));
    CHECK(gs[1][1].same(parse_expr("r^2*sin(theta)^2", t)));
    CHECK(gs[0][1].is_zero_literal());
    // minkowski -> diag(1,-1,-1,-1)
    CatalogEntry mink = builtin("minkowski");
    ExprMatrix gm = metric_from_coframe(*mink.frame);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (i != j) CHECK(gm[i][j].is_zero_literal());
        }
    CHECK(gm[0][0].same(ScalarExpr::rational(1)));
    CHECK(gm[1][1].same(ScalarExpr::rational(-1)));
}

TEST_CASE("torsion: Levi-Civita connections are torsion-free symbolically") {
    for (const char* name : {"flat2", "polar2", "sphere2", "sphere3_lc",
                             "minkowski", "diag4"}) {
        CAPTURE(name);
        CatalogEntry e = builtin(name);
        for (const Form& t : torsion(*e.connection)) CHECK(t.is_structurally_zero());
    }
}

TEST_CASE("torsion: staircase has constant totally antisymmetric components") {
    CatalogEntry e = builtin("staircase(0.3)");
    CurvatureData data = structure_equations(*e.connection);
    SymbolTable t = e.symbols();
    ScalarExpr want = parse_expr("-2*alpha", t);
    CHECK(data.torsion_component(0, 1, 2).same(want));
    CHECK(data.torsion_component(1, 2, 0).same(want));
    CHECK(data.torsion_component(2, 0, 1).same(want));
    // total antisymmetry: diagonal-in-(i,j) entries vanish
    CHECK(data.torsion_component(0, 0, 1).is_zero_literal());
    CHECK(data.torsion_component(1, 0, 1).is_zero_literal());
}

TEST_CASE("torsion: sphere3 teleparallel equals minus the so(3) bracket") {
    CatalogEntry e = builtin("sphere3_tele(1)");
    CurvatureData data = structure_equations(*e.connection);
    SymbolTable t = e.symbols();
    ScalarExpr want = parse_expr("-2/r", t);
    SampleOptions opts = e.frame->sample_options();
    CHECK(prove_zero_ok(data.torsion_component(0, 1, 2) - want, opts));
    CHECK(prove_zero_ok(data.torsion_component(1, 2, 0) - want, opts));
    CHECK(prove_zero_ok(data.torsion_component(2, 0, 1) - want, opts));
    CHECK(prove_zero_ok(data.torsion_component(0, 0, 1), opts));
    CHECK(prove_zero_ok(data.torsion_component(0, 0, 2), opts));
}

TEST_CASE("curvature: flat, round sphere, staircase") {
    CatalogEntry flat = builtin("flat3");
    for (const auto& row : curvature(*flat.connection))
        for (const Form& r : row) CHECK(r.is_structurally_zero());

    CatalogEntry s2 = builtin("sphere2");
    CurvatureData data = structure_equations(*s2.connection);
    SymbolTable t = s2.symbols();
    // R^1_2 = (1/r^2) w^1^w^2, i.e. sectional curvature 1/r^2
    CHECK(data.curvature_component(0, 1, 0, 1).same(parse_expr("r^(-2)", t)));
    // metricity antisymmetry of the curvature
    CHECK((data.curvature[0][1] + data.curvature[1][0]).is_structurally_zero());

    CatalogEntry st = builtin("staircase(0.3)");
    CurvatureData sd = structure_equations(*st.connection);
    SymbolTable ts = st.symbols();
    // R^i_j = alpha^2 dx^j ^ dx^i
    CHECK(sd.curvature_component(0, 1, 0, 1).same(parse_expr("-alpha^2", ts)));
    CHECK(sd.curvature_component(1, 2, 1, 2).same(parse_expr("-alpha^2", ts)));
    CHECK(sd.curvature_component(0, 1, 1, 2).is_zero_literal());
}

TEST_CASE("levi-civita: solved connections match hand values") {
    // identity coframe -> zero connection
    CatalogEntry flat = builtin("flat2");
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(flat.connection->omega(i, j).is_structurally_zero());

    // sphere2: w^1_2 = -cos(theta) dphi
    CatalogEntry s2 = builtin("sphere2");
    SymbolTable t = s2.symbols();
    const Form& w12 = s2.connection->omega(0, 1);
    CHECK(w12.coeff({1}).same(parse_expr("-cos(theta)", t)));
    CHECK(w12.coeff({0}).is_zero_literal());

    // polar plane: w^1_2 = -dphi
    CatalogEntry p2 = builtin("polar2");
    CHECK(p2.connection->omega(0, 1).coeff({1}).same(ScalarExpr::rational(-1)));
}

TEST_CASE("levi-civita curvature matches the coordinate Riemann oracle") {
    for (const char* name :
         {"flat2", "flat3", "polar2", "sphere2", "sphere3_lc", "minkowski",
          "diag4"}) {
        CAPTURE(name);
        CatalogEntry e = builtin(name);
        SampleOptions opts = e.frame->sample_options();
        CurvatureData data = structure_equations(*e.connection);
        auto cc = oracle::coordinate_curvature(e.frame->chart(),
                                               metric_from_coframe(*e.frame));
        int n = e.frame->dimension();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = k + 1; l < n; ++l) {
                        ScalarExpr want =
                            oracle::frame_riemann_component(cc, *e.frame, i, j, k, l);
                        ScalarExpr got = data.curvature_component(i, j, k, l);
                        ZeroCheck z = prove_zero(got - want, opts, 1e-12);
                        CHECK(z.accepted());
                    }
    }
}

TEST_CASE("is_flat: verdicts") {
    CHECK(is_flat(*builtin("flat3").connection).verdict() == Ternary::Zero);
    CHECK(is_flat(*builtin("polar2").connection).verdict() == Ternary::Zero);
    FlatnessReport s2 = is_flat(*builtin("sphere2").connection);
    CHECK(s2.verdict() == Ternary::NonZero);
    CHECK(s2.rotational.status == ZeroCheck::Status::NonZero);
    CHECK(s2.translational.status == ZeroCheck::Status::ProvenZero);
    // teleparallel sphere: rotationally flat, torsion nonzero
    FlatnessReport tele = is_flat(*builtin("sphere3_tele").connection);
    CHECK(tele.rotational.accepted());
    CHECK(tele.translational.status == ZeroCheck::Status::NonZero);
    CHECK(tele.verdict() == Ternary::NonZero);
}

TEST_CASE("contorsion split") {
    // torsion-free connection -> zero contorsion
    CatalogEntry s2 = builtin("sphere2");
    ContorsionSplit split = contorsion_split(*s2.connection);
    for (const auto& row : split.contorsion)
        for (const Form& k : row) CHECK(k.is_structurally_zero());

    // staircase: K^i_j = alpha eps_{ijk} dx^k (flat Levi-Civita part)
    CatalogEntry st = builtin("staircase(0.3)");
    ContorsionSplit ss = contorsion_split(*st.connection);
    SymbolTable t = st.symbols();
    for (const auto& row : ss.levi_civita.omega())
        for (const Form& w : row) CHECK(w.is_structurally_zero());
    CHECK(ss.contorsion[0][1].coeff({2}).same(parse_expr("alpha", t)));
    CHECK(contorsion_totally_antisymmetric(*st.connection));
    CHECK(contorsion_totally_antisymmetric(*builtin("sphere3_tele").connection));

    // torsion rebuilt from the contorsion alone matches torsion(C)
    std::vector<Form> full = torsion(*st.connection);
    for (int i = 0; i < 3; ++i) {
        Form rebuilt(st.frame->chart(), 2);
        for (int k = 0; k < 3; ++k)
            rebuilt = rebuilt + wedge(ss.contorsion[i][k], st.frame->coframe(k));
        CHECK((rebuilt - full[i]).is_structurally_zero());
    }
}

TEST_CASE("normality check") {
    // zero torsion: vacuously normal
    auto planes = normality_check(*builtin("sphere3_lc").connection);
    for (const auto& [p, ok] : planes) CHECK(ok);
    // staircase: totally antisymmetric torsion is normal on every plane
    planes = normality_check(*builtin("staircase(0.3)").connection);
    CHECK(planes.size() == 3);
    for (const auto& [p, ok] : planes) CHECK(ok);
    // flat E^3 plus K^1_2 = dx^2: torsion component inside the (1,2)-plane
    CatalogEntry flat = builtin("flat3");
    auto chart = flat.frame->chart();
    FormMatrix omega(3, std::vector<Form>(3, Form(chart, 1)));
    omega[0][1].add_term({1}, ScalarExpr::rational(1));
    omega[1][0].add_term({1}, ScalarExpr::rational(-1));
    CartanConnection skew(flat.frame, omega);
    auto skew_planes = normality_check(skew);
    CHECK_FALSE(skew_planes[{0, 1}]);
    CHECK(skew_planes[{0, 2}]);
    CHECK(skew_planes[{1, 2}]);
    CHECK_THROWS_AS(normality_check(*builtin("sphere2").connection), DimensionError);
}

TEST_CASE("normality check: n=4 spacelike triple") {
    auto planes = normality_check(*builtin("mink-torsion(0.3)").connection);
    CHECK(planes.size() == 3);
    for (const auto& [p, ok] : planes) CHECK(ok);
}

TEST_CASE("Bianchi identities hold on every catalog entry") {
    for (const std::string& name : catalog_names()) {
        CAPTURE(name);
        CatalogEntry e = builtin(name);
        SampleOptions opts = e.frame->sample_options();
        for (const Form& r : first_bianchi_residual(*e.connection))
            CHECK(prove_zero(r, opts).accepted());
        for (const auto& row : second_bianchi_residual(*e.connection))
            for (const Form& r : row) CHECK(prove_zero(r, opts).accepted());
    }
}

TEST_CASE("metricity validation rejects bad connections") {
    CatalogEntry flat = builtin("flat2");
    auto chart = flat.frame->chart();
    FormMatrix omega(2, std::vector<Form>(2, Form(chart, 1)));
    omega[0][1].add_term({0}, ScalarExpr::rational(1));
    // missing the compensating omega[1][0] = -dx1
    CHECK_THROWS_WITH_AS((CartanConnection{flat.frame, omega}),
                         doctest::Contains("metricity"), std::invalid_argument);
}

TEST_CASE("levi-civita output satisfies metricity and torsion-freeness symbolically") {
    for (const char* name : {"polar2", "sphere2", "sphere3_lc", "diag4"}) {
        CAPTURE(name);
        CatalogEntry e = builtin(name);
        const Signature& sig = e.frame->signature();
        int n = e.frame->dimension();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Form res = e.connection->omega(i, j)
                               .scaled(ScalarExpr::rational(sig.eps(i))) +
                           e.connection->omega(j, i)
                               .scaled(ScalarExpr::rational(sig.eps(j)));
                CHECK(res.is_structurally_zero());
            }
        for (const Form& t : torsion(*e.connection))
            CHECK(t.is_structurally_zero());
    }
}
