#include <cmath>
#include <sstream>

#include "cartanforge/catalog.hpp"
#include "cartanforge/transport.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cartanforge;

namespace {

constexpr double kTheta0 = 1.0471975511965976;  // pi/3

// full latitude circle on sphere2 at colatitude theta0, eastward
CurveSpec latitude_circle(const CatalogEntry& s2, double theta0) {
    SymbolTable t = s2.symbols();
    t.parameters.insert("s");
    std::ostringstream os;
    os.precision(17);
    os << theta0;
    std::vector<ScalarExpr> comps{parse_expr(os.str(), t),
                                  parse_expr("2*pi*s", t)};
    return CurveSpec::symbolic(s2.frame->chart(), "s", {0.0, 1.0},
                               std::move(comps));
}

CurveSpec square_loop(const ChartPtr& chart, std::vector<double> base, int a,
                      int b, double h) {
    std::vector<std::vector<double>> pts;
    auto push = [&](double da, double db) {
        std::vector<double> p = base;
        p[a] += da;
        p[b] += db;
        pts.push_back(std::move(p));
    };
    push(0, 0);
    push(h, 0);
    push(h, h);
    push(0, h);
    push(0, 0);
    return CurveSpec::polyline(chart, std::move(pts));
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("parallel transport: flat space leaves vectors unchanged") {
    CatalogEntry flat = builtin("flat3");
    CurveSpec curve = CurveSpec::polyline(
        flat.frame->chart(), {{0, 0, 0}, {0.3, 0.5, -0.2}, {1.0, 0.1, 0.4}});
    std::vector<double> v = parallel_transport(*flat.connection, curve,
                                               {0.7, -0.2, 0.4}, 1e-2);
    CHECK(max_abs_diff(v, {0.7, -0.2, 0.4}) < 1e-14);
}

TEST_CASE("parallel transport: latitude holonomy matches the closed form") {
    CatalogEntry s2 = builtin("sphere2");
    CurveSpec lat = latitude_circle(s2, kTheta0);
    double c = 2 * M_PI * std::cos(kTheta0);
    std::vector<double> v =
        parallel_transport(*s2.connection, lat, {1.0, 0.0}, 1e-4);
    // v(1) = R(-c) v0 for the eastward loop
    CHECK(std::fabs(v[0] - std::cos(c)) < 1e-9);
    CHECK(std::fabs(v[1] + std::sin(c)) < 1e-9);
}

TEST_CASE("parallel transport: norm conserved to tolerance") {
    CatalogEntry s2 = builtin("sphere2");
    CurveSpec lat = latitude_circle(s2, kTheta0);
    std::vector<double> v =
        parallel_transport(*s2.connection, lat, {0.6, 0.8}, 1e-3);
    double n = v[0] * v[0] + v[1] * v[1];
    CHECK(std::fabs(n - 1.0) < 1e-10);
}

TEST_CASE("RK4 order: halving the step cuts the error by about 16") {
    CatalogEntry s2 = builtin("sphere2");
    CurveSpec lat = latitude_circle(s2, kTheta0);
    double c = 2 * M_PI * std::cos(kTheta0);
    std::vector<double> exact{std::cos(c), -std::sin(c)};
    auto err = [&](double step) {
        std::vector<double> v =
            parallel_transport(*s2.connection, lat, {1.0, 0.0}, step);
        return max_abs_diff(v, exact);
    };
    double e1 = err(0.02), e2 = err(0.01);
    double factor = e1 / e2;
    CHECK(factor > 12.0);
    CHECK(factor < 20.0);
}

TEST_CASE("loop holonomy: flat space gives identity and zero translation") {
    CatalogEntry flat = builtin("flat3");
    CurveSpec loop = square_loop(flat.frame->chart(), {0.1, -0.2, 0.5}, 0, 1, 0.4);
    HolonomyResult h = loop_holonomy(*flat.connection, loop, 1e-3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(std::fabs(h.rotation[i][j] - (i == j ? 1 : 0)) < 1e-13);
    for (double t : h.translation) CHECK(std::fabs(t) < 1e-13);
    CHECK(h.metricity_defect < 1e-12);
    CHECK(std::fabs(h.area_bivector[0][1] - 0.16) < 1e-12);
}

TEST_CASE("loop holonomy: rejects open loops") {
    CatalogEntry flat = builtin("flat3");
    CurveSpec open = CurveSpec::polyline(flat.frame->chart(),
                                         {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}});
    CHECK_THROWS_AS(loop_holonomy(*flat.connection, open, 1e-3),
                    std::invalid_argument);
}

TEST_CASE("loop holonomy: small-square rotation matches curvature on the area") {
    CatalogEntry s2 = builtin("sphere2");
    FormMatrix R = curvature(*s2.connection);
    double h = 1e-2;
    CurveSpec loop = square_loop(s2.frame->chart(), {kTheta0, 0.3}, 0, 1, h);
    HolonomyResult hol = loop_holonomy(*s2.connection, loop, h / 50);
    // R(sigma) evaluated at the loop centroid
    Bindings at{{"theta", hol.centroid[0]}, {"phi", hol.centroid[1]}, {"r", 1.0}};
    std::vector<std::vector<double>> basis{{1.0, 0.0}, {0.0, 1.0}};
    double omega01 = R[0][1].eval_on(at, basis) * hol.area_bivector[0][1];
    double measured = hol.rotation[0][1];
    CHECK(std::fabs(measured - omega01) / std::fabs(omega01) < 1e-3);
    // diagonal stays near 1 at second order
    CHECK(std::fabs(hol.rotation[0][0] - 1.0) < 1e-7);
}

TEST_CASE("loop holonomy: staircase translation matches torsion on the area") {
    CatalogEntry st = builtin("staircase(0.3)");
    std::vector<Form> T = torsion(*st.connection);
    double h = 1e-3;
    CurveSpec loop = square_loop(st.frame->chart(), {0.0, 0.0, 0.0}, 0, 1, h);
    HolonomyResult hol = loop_holonomy(*st.connection, loop, h / 50);
    Bindings at{{"x1", 0}, {"x2", 0}, {"x3", 0}, {"alpha", 0.3}};
    std::vector<std::vector<double>> basis{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int i = 0; i < 3; ++i) {
        double expect = 0;
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) {
                std::vector<std::vector<double>> pair{basis[a], basis[b]};
                expect += T[i].eval_on(at, pair) * hol.area_bivector[a][b];
            }
        if (std::fabs(expect) > 1e-12) {
            CHECK(std::fabs(hol.translation[i] - expect) / std::fabs(expect) < 1e-3);
        } else {
            CHECK(std::fabs(hol.translation[i]) < 1e-9);
        }
    }
}

TEST_CASE("geodesic: flat plane gives straight lines") {
    CatalogEntry flat = builtin("flat2");
    Trajectory tr = geodesic(flat.frame, {0.1, -0.3}, {0.4, 0.7}, 1e-2, 1.0);
    for (std::size_t s = 0; s < tr.times.size(); ++s) {
        CHECK(std::fabs(tr.positions[s][0] - (0.1 + 0.4 * tr.times[s])) < 1e-12);
        CHECK(std::fabs(tr.positions[s][1] - (-0.3 + 0.7 * tr.times[s])) < 1e-12);
    }
}

TEST_CASE("geodesic: equator of the sphere is a great circle") {
    CatalogEntry s2 = builtin("sphere2");
    Trajectory tr = geodesic(s2.frame, {M_PI / 2, 0.0}, {0.0, 1.0}, 1e-3, 1.0);
    double dev = 0;
    for (std::size_t s = 0; s < tr.times.size(); ++s) {
        dev = std::max(dev, std::fabs(tr.positions[s][0] - M_PI / 2));
        dev = std::max(dev, std::fabs(tr.positions[s][1] - tr.times[s]));
    }
    CHECK(dev < 1e-8);
    // energy conservation
    auto en = tr.energies(s2.frame->signature());
    for (double e : en) CHECK(std::fabs(e - en.front()) < 1e-10);
}

TEST_CASE("geodesic: polar chart traces straight Cartesian lines") {
    CatalogEntry p2 = builtin("polar2");
    double r0 = 1.2, phi0 = 0.4;
    double px = r0 * std::cos(phi0), py = r0 * std::sin(phi0);
    double vx = 0.3, vy = 0.5;
    // coordinate velocity from the Cartesian one
    double rdot = (px * vx + py * vy) / r0;
    double phidot = (px * vy - py * vx) / (r0 * r0);
    Trajectory tr = geodesic(p2.frame, {r0, phi0}, {rdot, phidot}, 1e-3, 1.0);
    double dev = 0;
    for (std::size_t s = 0; s < tr.times.size(); ++s) {
        double t = tr.times[s];
        double x = tr.positions[s][0] * std::cos(tr.positions[s][1]);
        double y = tr.positions[s][0] * std::sin(tr.positions[s][1]);
        dev = std::max(dev, std::fabs(x - (px + t * vx)));
        dev = std::max(dev, std::fabs(y - (py + t * vy)));
    }
    CHECK(dev < 1e-8);
}

TEST_CASE("autoparallel: reduces to the geodesic for Levi-Civita connections") {
    CatalogEntry s2 = builtin("sphere2");
    std::vector<double> x0{1.1, 0.7}, v0{0.3, 0.4};
    Trajectory ap = autoparallel(*s2.connection, x0, v0, 1e-3, 1.0);
    Trajectory ge = geodesic(s2.frame, x0, v0, 1e-3, 1.0);
    for (std::size_t s = 0; s < ap.times.size(); ++s)
        CHECK(max_abs_diff(ap.positions[s], ge.positions[s]) == 0.0);
}

TEST_CASE("autoparallel: staircase runs straight") {
    CatalogEntry st = builtin("staircase(0.3)");
    std::vector<double> x0{0.1, -0.2, 0.3}, v0{0.5, 0.3, -0.4};
    Trajectory tr = autoparallel(*st.connection, x0, v0, 1e-3, 1.0);
    double dev = 0;
    for (std::size_t s = 0; s < tr.times.size(); ++s)
        for (int a = 0; a < 3; ++a)
            dev = std::max(dev, std::fabs(tr.positions[s][a] -
                                          (x0[a] + tr.times[s] * v0[a])));
    CHECK(dev < 1e-9);
}

TEST_CASE("autoparallel: teleparallel sphere follows great circles") {
    CatalogEntry tele = builtin("sphere3_tele(1)");
    std::vector<double> x0{-1.26, 1.415, -0.63}, v0{0.7, -0.4, 0.3};
    Trajectory tr = autoparallel(*tele.connection, x0, v0, 1e-3, 1.0);
    // algebra velocity u = v_frame / r at the start (r = 1)
    Bindings at{{"psi", x0[0]}, {"theta", x0[1]}, {"phi", x0[2]}, {"r", 1.0}};
    auto E = oracle::eval_matrix(tele.frame->coframe_matrix(), at);
    std::array<double, 3> u{};
    for (int i = 0; i < 3; ++i)
        for (int a = 0; a < 3; ++a) u[i] += E[i][a] * v0[a];
    auto q0 = oracle::euler_to_quaternion(x0[0], x0[1], x0[2]);
    double dev = 0;
    for (std::size_t s = 0; s < tr.times.size(); ++s) {
        auto q = oracle::euler_to_quaternion(tr.positions[s][0], tr.positions[s][1],
                                             tr.positions[s][2]);
        auto want = oracle::great_circle(q0, u, tr.times[s]);
        for (int c = 0; c < 4; ++c)
            dev = std::max(dev, std::fabs(q[c] - want[c]));
    }
    CHECK(dev < 1e-6);

    // the coincidence: autoparallels of the flat connection match the
    // Levi-Civita geodesics of the same coframe pointwise
    Trajectory ge = geodesic(tele.frame, x0, v0, 1e-3, 1.0);
    double dev2 = 0;
    for (std::size_t s = 0; s < tr.times.size(); ++s)
        dev2 = std::max(dev2, max_abs_diff(tr.positions[s], ge.positions[s]));
    CHECK(dev2 < 1e-6);
}

TEST_CASE("trajectory leaves chart domain raises") {
    CatalogEntry p2 = builtin("polar2");  // r in [0.1, 5]
    CHECK_THROWS_AS(geodesic(p2.frame, {0.3, 0.2}, {-1.0, 0.0}, 1e-3, 1.0),
                    EvalError);
}

TEST_CASE("holonomy-curvature convergence improves with loop size") {
    CatalogEntry s2 = builtin("sphere2");
    FormMatrix R = curvature(*s2.connection);
    std::vector<double> ratios;
    for (double h : {1e-1, 1e-2, 1e-3}) {
        CurveSpec loop = square_loop(s2.frame->chart(), {kTheta0, 0.3}, 0, 1, h);
        HolonomyResult hol = loop_holonomy(*s2.connection, loop, h / 50);
        Bindings at{{"theta", hol.centroid[0]}, {"phi", hol.centroid[1]}, {"r", 1.0}};
        std::vector<std::vector<double>> basis{{1.0, 0.0}, {0.0, 1.0}};
        double omega01 = R[0][1].eval_on(at, basis) * hol.area_bivector[0][1];
        ratios.push_back(std::fabs(hol.rotation[0][1] - omega01) / (h * h));
    }
    CHECK(ratios[1] < ratios[0]);
    CHECK(ratios[2] < ratios[1]);
}
