#include "cartanforge/transport.hpp"

#include <algorithm>
#include <cmath>

namespace cartanforge {

namespace {

using State = std::vector<double>;

// classical fourth-order Runge-Kutta over [t0, t1] with at most `step`-sized
// strides; visit() observes each accepted knot including the first
template <typename F, typename Visit>
void rk4_integrate(double t0, double t1, double step, State& y, F&& f,
                   Visit&& visit) {
    if (step <= 0) throw std::invalid_argument("step must be positive");
    int nsteps = std::max(1, static_cast<int>(std::ceil((t1 - t0) / step - 1e-12)));
    double h = (t1 - t0) / nsteps;
    visit(t0, y);
    State k1, k2, k3, k4, tmp(y.size());
    for (int s = 0; s < nsteps; ++s) {
        double t = t0 + s * h;
        k1 = f(t, y);
        for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        k2 = f(t + 0.5 * h, tmp);
        for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        k3 = f(t + 0.5 * h, tmp);
        for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + h * k3[i];
        k4 = f(t + h, tmp);
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] += h / 6.0 * (k1[i] + 2 * (k2[i] + k3[i]) + k4[i]);
        visit(t + h, y);
    }
}

Bindings point_bindings(const ChartPtr& chart, const std::vector<double>& x,
                        const Bindings& params) {
    Bindings b = params;
    for (int a = 0; a < chart->dimension(); ++a) b[chart->coordinate(a)] = x[a];
    return b;
}

void check_inside(const ChartPtr& chart, const std::vector<double>& x, double t) {
    for (int a = 0; a < chart->dimension(); ++a) {
        auto bd = chart->bounds(a);
        if (!bd) continue;
        if (x[a] < bd->first || x[a] > bd->second)
            throw EvalError("trajectory left the chart domain in coordinate '" +
                            chart->coordinate(a) + "' at t=" + std::to_string(t));
    }
}

// evaluates an n x n matrix of 1-forms on a tangent vector
std::vector<std::vector<double>> eval_matrix_on(const FormMatrix& omega,
                                                const Bindings& at,
                                                const std::vector<double>& xdot) {
    int n = static_cast<int>(omega.size());
    std::vector<std::vector<double>> W(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (const auto& [idx, c] : omega[i][j].terms())
                W[i][j] += c.eval(at) * xdot[idx[0]];
    return W;
}

}  // namespace

// ---------------------------------------------------------------------
// CurveSpec

CurveSpec CurveSpec::symbolic(ChartPtr chart, std::string parameter,
                              std::pair<double, double> interval,
                              std::vector<ScalarExpr> components) {
    if (static_cast<int>(components.size()) != chart->dimension())
        throw DimensionError("curve needs one component per coordinate");
    CurveSpec c;
    c.chart_ = std::move(chart);
    c.param_ = std::move(parameter);
    c.interval_ = interval;
    c.components_ = std::move(components);
    for (const auto& comp : c.components_)
        c.derivatives_.push_back(comp.derivative(c.param_));
    return c;
}

CurveSpec CurveSpec::polyline(ChartPtr chart,
                              std::vector<std::vector<double>> points) {
    if (points.size() < 2)
        throw std::invalid_argument("polyline needs at least two points");
    for (const auto& p : points)
        if (static_cast<int>(p.size()) != chart->dimension())
            throw DimensionError("polyline point dimension mismatch");
    CurveSpec c;
    c.chart_ = std::move(chart);
    c.points_ = std::move(points);
    c.interval_ = {0.0, static_cast<double>(c.points_.size() - 1)};
    return c;
}

std::vector<double> CurveSpec::position(double t, const Bindings& params) const {
    int n = chart_->dimension();
    std::vector<double> x(n);
    if (is_polyline()) {
        int nseg = static_cast<int>(points_.size()) - 1;
        double s = std::clamp(t, 0.0, static_cast<double>(nseg));
        int k = std::min(static_cast<int>(s), nseg - 1);
        double u = s - k;
        for (int a = 0; a < n; ++a)
            x[a] = (1 - u) * points_[k][a] + u * points_[k + 1][a];
        return x;
    }
    Bindings b = params;
    b[param_] = t;
    for (int a = 0; a < n; ++a) x[a] = components_[a].eval(b);
    return x;
}

std::vector<double> CurveSpec::velocity(double t, const Bindings& params) const {
    int n = chart_->dimension();
    std::vector<double> v(n);
    if (is_polyline()) {
        int nseg = static_cast<int>(points_.size()) - 1;
        int k = std::min(std::max(static_cast<int>(t), 0), nseg - 1);
        for (int a = 0; a < n; ++a) v[a] = points_[k + 1][a] - points_[k][a];
        return v;
    }
    Bindings b = params;
    b[param_] = t;
    for (int a = 0; a < n; ++a) v[a] = derivatives_[a].eval(b);
    return v;
}

double CurveSpec::closure_defect(const Bindings& params) const {
    std::vector<double> a = position(interval_.first, params);
    std::vector<double> b = position(interval_.second, params);
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

// ---------------------------------------------------------------------
// parallel transport and holonomy

std::vector<double> parallel_transport(const CartanConnection& C,
                                       const CurveSpec& curve,
                                       std::vector<double> v0, double step) {
    int n = C.dimension();
    if (static_cast<int>(v0.size()) != n)
        throw DimensionError("transported vector needs n frame components");
    if (curve.chart() != C.frame().chart())
        throw DimensionError("curve chart mismatch");
    Bindings params(C.frame().parameter_hints().begin(),
                    C.frame().parameter_hints().end());
    auto f = [&](double t, const State& v) {
        std::vector<double> x = curve.position(t, params);
        std::vector<double> xd = curve.velocity(t, params);
        Bindings at = point_bindings(curve.chart(), x, params);
        auto W = eval_matrix_on(C.omega(), at, xd);
        State dv(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) dv[i] -= W[i][j] * v[j];
        return dv;
    };
    auto [t0, t1] = curve.interval();
    if (curve.is_polyline()) {
        // restart at the kinks to keep the RK4 order per linear segment
        for (int seg = 0; seg < static_cast<int>(t1 - t0 + 0.5); ++seg)
            rk4_integrate(seg, seg + 1.0, step, v0, f, [](double, const State&) {});
    } else {
        rk4_integrate(t0, t1, step, v0, f, [](double, const State&) {});
    }
    return v0;
}

HolonomyResult loop_holonomy(const CartanConnection& C, const CurveSpec& loop,
                             double step) {
    int n = C.dimension();
    if (loop.chart() != C.frame().chart())
        throw DimensionError("loop chart mismatch");
    Bindings params(C.frame().parameter_hints().begin(),
                    C.frame().parameter_hints().end());
    if (loop.closure_defect(params) > 1e-12)
        throw std::invalid_argument("loop endpoints do not coincide");
    // snap polyline endpoints so a floating-point gap cannot leak a
    // spurious translation defect
    CurveSpec snapped = loop;
    if (loop.is_polyline() && loop.closure_defect(params) != 0) {
        auto pts = loop.points();
        pts.back() = pts.front();
        snapped = CurveSpec::polyline(loop.chart(), std::move(pts));
    }
    const CurveSpec& path = snapped;

    // state: V = U^{-1} (n^2 entries, row major) and the development T (n);
    // V' = V W(c'), T' = V w(c') with w^i the coframe values of the tangent.
    State y(n * n + n, 0.0);
    for (int i = 0; i < n; ++i) y[i * n + i] = 1.0;

    std::vector<double> base = path.position(path.interval().first, params);

    auto f = [&](double t, const State& s) {
        std::vector<double> x = path.position(t, params);
        std::vector<double> xd = path.velocity(t, params);
        Bindings at = point_bindings(path.chart(), x, params);
        auto W = eval_matrix_on(C.omega(), at, xd);
        std::vector<double> w(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (const auto& [idx, c] : C.frame().coframe(i).terms())
                w[i] += c.eval(at) * xd[idx[0]];
        State dy(n * n + n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double acc = 0;
                for (int k = 0; k < n; ++k) acc += s[i * n + k] * W[k][j];
                dy[i * n + j] = acc;
            }
        for (int i = 0; i < n; ++i) {
            double acc = 0;
            for (int k = 0; k < n; ++k) acc += s[i * n + k] * w[k];
            dy[n * n + i] = acc;
        }
        return dy;
    };

    // area bivector and centroid by the trapezoid rule along accepted knots
    std::vector<std::vector<double>> sigma(n, std::vector<double>(n, 0.0));
    std::vector<double> centroid(n, 0.0);
    std::vector<double> prev;
    double knots = 0;
    auto visit = [&](double t, const State&) {
        std::vector<double> x = path.position(t, params);
        if (!prev.empty()) {
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    sigma[a][b] += 0.5 * ((prev[a] - base[a]) * (x[b] - prev[b]) -
                                          (prev[b] - base[b]) * (x[a] - prev[a]));
        }
        for (int a = 0; a < n; ++a) centroid[a] += x[a];
        knots += 1;
        prev = std::move(x);
    };

    auto [t0, t1] = path.interval();
    if (path.is_polyline()) {
        for (int seg = 0; seg < static_cast<int>(t1 - t0 + 0.5); ++seg)
            rk4_integrate(seg, seg + 1.0, step, y, f, visit);
    } else {
        rk4_integrate(t0, t1, step, y, f, visit);
    }

    HolonomyResult out;
    out.step = step;
    out.rotation.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.rotation[i][j] = y[i * n + j];
    out.translation.assign(y.begin() + n * n, y.end());
    out.area_bivector = std::move(sigma);
    for (int a = 0; a < n; ++a) centroid[a] /= knots;
    out.centroid = std::move(centroid);

    const Signature& sig = C.frame().signature();
    double defect = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0;
            for (int k = 0; k < n; ++k)
                acc += out.rotation[k][i] * sig.eps(k) * out.rotation[k][j];
            double want = i == j ? sig.eps(i) : 0.0;
            defect = std::max(defect, std::fabs(acc - want));
        }
    out.metricity_defect = defect;
    return out;
}

// ---------------------------------------------------------------------
// geodesics and autoparallels

std::vector<double> Trajectory::energies(const Signature& sig) const {
    std::vector<double> out;
    out.reserve(frame_velocities.size());
    for (const auto& v : frame_velocities) {
        double e = 0;
        for (std::size_t i = 0; i < v.size(); ++i) e += sig.eps(i) * v[i] * v[i];
        out.push_back(e);
    }
    return out;
}

namespace {

Trajectory integrate_parallel_tangent(const CartanConnection& C,
                                      std::vector<double> x0,
                                      std::vector<double> v0_coord, double step,
                                      double t_end) {
    const FrameField& F = C.frame();
    int n = F.dimension();
    if (static_cast<int>(x0.size()) != n || static_cast<int>(v0_coord.size()) != n)
        throw DimensionError("initial point/velocity dimension mismatch");
    double vnorm = 0;
    for (double c : v0_coord) vnorm += c * c;
    if (vnorm == 0) throw std::invalid_argument("initial velocity must be nonzero");
    Bindings params(F.parameter_hints().begin(), F.parameter_hints().end());

    // frame components of the initial tangent: v^i = E^i_a xdot^a
    Bindings at0 = point_bindings(F.chart(), x0, params);
    State y(2 * n, 0.0);
    for (int a = 0; a < n; ++a) y[a] = x0[a];
    for (int i = 0; i < n; ++i) {
        double acc = 0;
        for (int a = 0; a < n; ++a)
            acc += F.coframe_matrix()[i][a].eval(at0) * v0_coord[a];
        y[n + i] = acc;
    }

    Trajectory traj;
    auto coordinate_velocity = [&](const State& s, const Bindings& at) {
        std::vector<double> xd(n, 0.0);
        for (int a = 0; a < n; ++a)
            for (int i = 0; i < n; ++i)
                xd[a] += F.inverse_matrix()[a][i].eval(at) * s[n + i];
        return xd;
    };
    auto f = [&](double t, const State& s) {
        std::vector<double> x(s.begin(), s.begin() + n);
        check_inside(F.chart(), x, t);
        Bindings at = point_bindings(F.chart(), x, params);
        std::vector<double> xd = coordinate_velocity(s, at);
        auto W = eval_matrix_on(C.omega(), at, xd);
        State dy(2 * n, 0.0);
        for (int a = 0; a < n; ++a) dy[a] = xd[a];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) dy[n + i] -= W[i][j] * s[n + j];
        return dy;
    };
    auto visit = [&](double t, const State& s) {
        std::vector<double> x(s.begin(), s.begin() + n);
        Bindings at = point_bindings(F.chart(), x, params);
        traj.times.push_back(t);
        traj.positions.push_back(x);
        traj.velocities.push_back(coordinate_velocity(s, at));
        traj.frame_velocities.push_back(std::vector<double>(s.begin() + n, s.end()));
    };
    rk4_integrate(0.0, t_end, step, y, f, visit);
    return traj;
}

}  // namespace

Trajectory geodesic(const FrameFieldPtr& F, std::vector<double> x0,
                    std::vector<double> v0, double step, double t_end) {
    return integrate_parallel_tangent(levi_civita(F), std::move(x0),
                                      std::move(v0), step, t_end);
}

Trajectory autoparallel(const CartanConnection& C, std::vector<double> x0,
                        std::vector<double> v0, double step, double t_end) {
    return integrate_parallel_tangent(C, std::move(x0), std::move(v0), step,
                                      t_end);
}

}  // namespace cartanforge
