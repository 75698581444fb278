// Numerical parallel transport, loop holonomy (the complementary
// displacement with its rotation and translation parts), and
// geodesic/autoparallel integration.  Fixed-step classical RK4 throughout.

#ifndef CARTANFORGE_TRANSPORT_HPP
#define CARTANFORGE_TRANSPORT_HPP

#include "cartanforge/frames.hpp"

namespace cartanforge {

class CurveSpec {
public:
    /// Coordinates as symbolic functions of one parameter over an interval.
    static CurveSpec symbolic(ChartPtr chart, std::string parameter,
                              std::pair<double, double> interval,
                              std::vector<ScalarExpr> components);
    /// Piecewise-linear curve through the given coordinate points, traversed
    /// at unit parameter speed per point interval.
    static CurveSpec polyline(ChartPtr chart,
                              std::vector<std::vector<double>> points);

    const ChartPtr& chart() const { return chart_; }
    std::pair<double, double> interval() const { return interval_; }
    bool is_polyline() const { return !points_.empty(); }
    const std::vector<std::vector<double>>& points() const { return points_; }

    std::vector<double> position(double t, const Bindings& params = {}) const;
    std::vector<double> velocity(double t, const Bindings& params = {}) const;

    /// Endpoint gap in max-norm.
    double closure_defect(const Bindings& params = {}) const;

private:
    CurveSpec() = default;
    ChartPtr chart_;
    std::string param_;
    std::pair<double, double> interval_{0, 1};
    std::vector<ScalarExpr> components_;
    std::vector<ScalarExpr> derivatives_;
    std::vector<std::vector<double>> points_;
};

/// Complementary displacement of a closed loop: the rotation and translation
/// that map the transported frame and developed endpoint back onto the
/// originals, measured in the base-point frame.  For a small loop with area
/// bivector sigma, rotation ~ exp(R(sigma)) and translation ~ T(sigma).
struct HolonomyResult {
    std::vector<std::vector<double>> rotation;   // n x n
    std::vector<double> translation;             // n
    std::vector<std::vector<double>> area_bivector;  // sigma^{ab}, antisym
    std::vector<double> centroid;                // loop centroid (coordinates)
    double step = 0;
    double metricity_defect = 0;  // max |R^T diag(eps) R - diag(eps)|
};

/// Transports frame components v0 along the curve: dv^i/dt = -w^i_j(c') v^j.
std::vector<double> parallel_transport(const CartanConnection& C,
                                       const CurveSpec& curve,
                                       std::vector<double> v0, double step);

HolonomyResult loop_holonomy(const CartanConnection& C, const CurveSpec& loop,
                             double step);

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> positions;         // coordinates
    std::vector<std::vector<double>> velocities;        // coordinate velocity
    std::vector<std::vector<double>> frame_velocities;  // tangent, frame comps

    /// g(c',c') = sum eps_i (v^i)^2 along the run.
    std::vector<double> energies(const Signature& sig) const;
};

/// Extremal-length curves of the frame metric (the Levi-Civita
/// autoparallels).  v0 is a coordinate velocity at x0.
Trajectory geodesic(const FrameFieldPtr& F, std::vector<double> x0,
                    std::vector<double> v0, double step, double t_end);

/// Curves whose tangent is parallel under the full connection.
Trajectory autoparallel(const CartanConnection& C, std::vector<double> x0,
                        std::vector<double> v0, double step, double t_end);

}  // namespace cartanforge

#endif
