#include "oracles.hpp"

#include <cmath>
#include <functional>

namespace cartanforge::oracle {

namespace {

ScalarExpr det2(const ExprMatrix& m, int r0, int r1, int c0, int c1) {
    return m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
}

ExprMatrix symbolic_inverse(const ExprMatrix& m) {
    int n = static_cast<int>(m.size());
    // determinant by Laplace expansion along the first row
    std::function<ScalarExpr(std::vector<int>, std::vector<int>)> det =
        [&](std::vector<int> rows, std::vector<int> cols) -> ScalarExpr {
        if (rows.size() == 1) return m[rows[0]][cols[0]];
        if (rows.size() == 2) return det2(m, rows[0], rows[1], cols[0], cols[1]);
        std::vector<ScalarExpr> terms;
        for (std::size_t p = 0; p < cols.size(); ++p) {
            std::vector<int> sub_rows(rows.begin() + 1, rows.end());
            std::vector<int> sub_cols;
            for (std::size_t q = 0; q < cols.size(); ++q)
                if (q != p) sub_cols.push_back(cols[q]);
            ScalarExpr term = m[rows[0]][cols[p]] * det(sub_rows, sub_cols);
            terms.push_back(p % 2 == 0 ? term : -term);
        }
        return ScalarExpr::sum(std::move(terms));
    };
    std::vector<int> all;
    for (int i = 0; i < n; ++i) all.push_back(i);
    ScalarExpr d = det(all, all);
    ScalarExpr inv_d = ScalarExpr::pow(d, Rational(-1));
    ExprMatrix out(n, std::vector<ScalarExpr>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::vector<int> rows, cols;
            for (int r = 0; r < n; ++r)
                if (r != j) rows.push_back(r);
            for (int c = 0; c < n; ++c)
                if (c != i) cols.push_back(c);
            ScalarExpr cof = rows.empty() ? ScalarExpr::rational(1) : det(rows, cols);
            int sign = ((i + j) % 2 == 0) ? 1 : -1;
            out[i][j] = ScalarExpr::rational(sign) * cof * inv_d;
        }
    return out;
}

}  // namespace

CoordinateCurvature coordinate_curvature(const ChartPtr& chart,
                                         const ExprMatrix& metric) {
    int n = chart->dimension();
    CoordinateCurvature cc;
    cc.metric = metric;
    cc.metric_inv = symbolic_inverse(metric);
    auto dcoord = [&](const ScalarExpr& e, int a) {
        return e.derivative(chart->coordinate(a));
    };

    cc.christoffel.assign(
        n, std::vector<std::vector<ScalarExpr>>(n, std::vector<ScalarExpr>(n)));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                std::vector<ScalarExpr> terms;
                for (int l = 0; l < n; ++l)
                    terms.push_back(cc.metric_inv[a][l] *
                                    (dcoord(metric[l][b], c) +
                                     dcoord(metric[l][c], b) -
                                     dcoord(metric[b][c], l)));
                cc.christoffel[a][b][c] =
                    ScalarExpr::rational(1, 2) * ScalarExpr::sum(std::move(terms));
            }

    cc.riemann.assign(
        n, std::vector<std::vector<std::vector<ScalarExpr>>>(
               n, std::vector<std::vector<ScalarExpr>>(n, std::vector<ScalarExpr>(n))));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    std::vector<ScalarExpr> terms{
                        dcoord(cc.christoffel[a][d][b], c),
                        -dcoord(cc.christoffel[a][c][b], d)};
                    for (int e = 0; e < n; ++e) {
                        terms.push_back(cc.christoffel[a][c][e] *
                                        cc.christoffel[e][d][b]);
                        terms.push_back(-(cc.christoffel[a][d][e] *
                                          cc.christoffel[e][c][b]));
                    }
                    cc.riemann[a][b][c][d] = ScalarExpr::sum(std::move(terms));
                }

    cc.ricci.assign(n, std::vector<ScalarExpr>(n));
    for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) {
            std::vector<ScalarExpr> terms;
            for (int k = 0; k < n; ++k) terms.push_back(cc.riemann[k][b][k][d]);
            cc.ricci[b][d] = ScalarExpr::sum(std::move(terms));
        }
    {
        std::vector<ScalarExpr> terms;
        for (int b = 0; b < n; ++b)
            for (int d = 0; d < n; ++d)
                terms.push_back(cc.metric_inv[b][d] * cc.ricci[b][d]);
        cc.scalar = ScalarExpr::sum(std::move(terms));
    }
    cc.einstein.assign(n, std::vector<ScalarExpr>(n));
    ScalarExpr half_r = ScalarExpr::rational(1, 2) * cc.scalar;
    for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d)
            cc.einstein[b][d] = cc.ricci[b][d] - half_r * metric[b][d];
    return cc;
}

ScalarExpr frame_riemann_component(const CoordinateCurvature& cc,
                                   const FrameField& F, int i, int j, int k,
                                   int l) {
    int n = F.dimension();
    const ExprMatrix& E = F.coframe_matrix();
    const ExprMatrix& D = F.inverse_matrix();
    std::vector<ScalarExpr> terms;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    const ScalarExpr& r = cc.riemann[a][b][c][d];
                    if (r.is_zero_literal()) continue;
                    terms.push_back(E[i][a] * D[b][j] * D[c][k] * D[d][l] * r);
                }
    return ScalarExpr::sum(std::move(terms));
}

std::vector<std::vector<double>> eval_matrix(const ExprMatrix& m,
                                             const Bindings& at) {
    std::vector<std::vector<double>> out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (const auto& e : m[i]) out[i].push_back(e.eval(at));
    return out;
}

std::array<double, 4> quaternion_multiply(const std::array<double, 4>& a,
                                          const std::array<double, 4>& b) {
    return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
            a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
            a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
            a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

std::array<double, 4> euler_to_quaternion(double psi, double theta, double phi) {
    std::array<double, 4> rz_phi{std::cos(phi / 2), 0, 0, std::sin(phi / 2)};
    std::array<double, 4> rx_theta{std::cos(theta / 2), std::sin(theta / 2), 0, 0};
    std::array<double, 4> rz_psi{std::cos(psi / 2), 0, 0, std::sin(psi / 2)};
    return quaternion_multiply(quaternion_multiply(rz_phi, rx_theta), rz_psi);
}

std::array<double, 4> great_circle(const std::array<double, 4>& q0,
                                   const std::array<double, 3>& u, double t) {
    double norm = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    double c = std::cos(norm * t), s = std::sin(norm * t) / norm;
    std::array<double, 4> step{c, s * u[0], s * u[1], s * u[2]};
    return quaternion_multiply(q0, step);
}

}  // namespace cartanforge::oracle
