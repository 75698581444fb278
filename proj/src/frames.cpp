#include "cartanforge/frames.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace cartanforge {

const char* zero_check_name(ZeroCheck::Status s) {
    switch (s) {
        case ZeroCheck::Status::ProvenZero: return "proven-zero";
        case ZeroCheck::Status::NumericZero: return "numerically-zero";
        case ZeroCheck::Status::NonZero: return "nonzero";
        case ZeroCheck::Status::Undecided: return "undecided";
    }
    return "?";
}

ZeroCheck prove_zero(const ScalarExpr& e, const SampleOptions& opts,
                     double numeric_tol) {
    ZeroCheck out;
    switch (is_zero(e, opts)) {
        case Ternary::Zero:
            out.status = ZeroCheck::Status::ProvenZero;
            return out;
        case Ternary::NonZero:
            out.status = ZeroCheck::Status::NonZero;
            return out;
        case Ternary::Unknown:
            break;
    }
    // numeric fallback at 20 deterministic points
    out.downgraded = true;
    auto syms = e.free_symbols();
    int evaluated = 0;
    for (int round = 0; round < 20; ++round) {
        Bindings b = sample_point(syms, opts, round + 1000);
        try {
            double v = e.eval(b);
            out.max_abs = std::max(out.max_abs, std::fabs(v));
            ++evaluated;
        } catch (const EvalError&) {
        }
    }
    if (evaluated == 0) {
        out.status = ZeroCheck::Status::Undecided;
        return out;
    }
    out.status = out.max_abs < numeric_tol ? ZeroCheck::Status::NumericZero
                                           : ZeroCheck::Status::Undecided;
    return out;
}

ZeroCheck prove_zero(const Form& f, const SampleOptions& opts, double numeric_tol) {
    ZeroCheck out;
    out.status = ZeroCheck::Status::ProvenZero;
    for (const auto& [idx, v] : f.terms()) {
        ZeroCheck c = prove_zero(v, opts, numeric_tol);
        out.downgraded = out.downgraded || c.downgraded;
        out.max_abs = std::max(out.max_abs, c.max_abs);
        if (c.status == ZeroCheck::Status::NonZero) {
            out.status = ZeroCheck::Status::NonZero;
            return out;
        }
        if (c.status == ZeroCheck::Status::Undecided)
            out.status = ZeroCheck::Status::Undecided;
        else if (c.status == ZeroCheck::Status::NumericZero &&
                 out.status == ZeroCheck::Status::ProvenZero)
            out.status = ZeroCheck::Status::NumericZero;
    }
    return out;
}

// ---------------------------------------------------------------------
// symbolic linear algebra on small matrices

namespace {

ScalarExpr det_expr(const ExprMatrix& m) {
    int n = static_cast<int>(m.size());
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::vector<ScalarExpr> terms;
    do {
        int sign = 1;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) sign = -sign;
        std::vector<ScalarExpr> fs{ScalarExpr::rational(sign)};
        for (int i = 0; i < n; ++i) fs.push_back(m[i][perm[i]]);
        terms.push_back(ScalarExpr::product(std::move(fs)));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return ScalarExpr::sum(std::move(terms));
}

ScalarExpr minor_det(const ExprMatrix& m, const std::vector<int>& rows,
                     const std::vector<int>& cols) {
    ExprMatrix sub(rows.size(), std::vector<ScalarExpr>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            sub[i][j] = m[rows[i]][cols[j]];
    if (rows.empty()) return ScalarExpr::rational(1);
    return det_expr(sub);
}

}  // namespace

// ---------------------------------------------------------------------
// FrameField

FrameField::FrameField(ChartPtr chart, Signature signature,
                       std::vector<Form> coframe,
                       std::map<std::string, double> parameter_hints)
    : chart_(std::move(chart)),
      sig_(std::move(signature)),
      coframe_(std::move(coframe)),
      params_(std::move(parameter_hints)) {
    int n = chart_->dimension();
    if (static_cast<int>(coframe_.size()) != n)
        throw DimensionError("coframe must have one 1-form per dimension");
    if (sig_.dimension() != n)
        throw DimensionError("signature length must equal chart dimension");
    E_.assign(n, std::vector<ScalarExpr>(n));
    for (int i = 0; i < n; ++i) {
        if (coframe_[i].degree() != 1)
            throw DimensionError("coframe entries must be 1-forms");
        if (coframe_[i].chart() != chart_)
            throw DimensionError("coframe chart mismatch");
        for (int a = 0; a < n; ++a) E_[i][a] = coframe_[i].coeff({a});
    }
    det_ = det_expr(E_);
    if (is_zero(det_, sample_options()) == Ternary::Zero)
        throw std::invalid_argument("singular coframe: determinant is proven zero");
    // adjugate / determinant inverse: D[a][i] = cof(i,a) / det
    D_.assign(n, std::vector<ScalarExpr>(n));
    ScalarExpr inv_det = ScalarExpr::pow(det_, Rational(-1));
    for (int a = 0; a < n; ++a) {
        for (int i = 0; i < n; ++i) {
            std::vector<int> rows, cols;
            for (int r = 0; r < n; ++r)
                if (r != i) rows.push_back(r);
            for (int c = 0; c < n; ++c)
                if (c != a) cols.push_back(c);
            ScalarExpr cof = minor_det(E_, rows, cols);
            int sign = ((i + a) % 2 == 0) ? 1 : -1;
            D_[a][i] = ScalarExpr::rational(sign) * cof * inv_det;
        }
    }
}

ExprMatrix FrameField::metric() const {
    int n = dimension();
    ExprMatrix g(n, std::vector<ScalarExpr>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            std::vector<ScalarExpr> terms;
            for (int i = 0; i < n; ++i)
                terms.push_back(ScalarExpr::rational(sig_.eps(i)) * E_[i][a] * E_[i][b]);
            g[a][b] = ScalarExpr::sum(std::move(terms));
        }
    return g;
}

SampleOptions FrameField::sample_options() const {
    SampleOptions opts;
    for (int a = 0; a < chart_->dimension(); ++a)
        if (auto b = chart_->bounds(a))
            opts.ranges[chart_->coordinate(a)] = *b;
    opts.pinned = params_;
    return opts;
}

ExprMatrix metric_from_coframe(const FrameField& F) { return F.metric(); }

std::map<Index, ScalarExpr> frame_components(const Form& a, const FrameField& F) {
    int n = F.dimension();
    if (a.chart() != F.chart())
        throw DimensionError("form and frame live on different charts");
    int k = a.degree();
    const ExprMatrix& D = F.inverse_matrix();
    std::map<Index, ScalarExpr> out;
    // enumerate increasing frame multi-indices J of length k
    std::vector<int> J(k);
    std::function<void(int, int)> rec = [&](int pos, int start) {
        if (pos == k) {
            std::vector<ScalarExpr> contrib;
            for (const auto& [I, f] : a.terms()) {
                // det over rows I (coordinate axes), columns J (frame indices)
                ScalarExpr d = minor_det(D, I, J);
                contrib.push_back(f * d);
            }
            ScalarExpr c = ScalarExpr::sum(std::move(contrib));
            if (!c.is_zero_literal()) out[Index(J.begin(), J.end())] = c;
            return;
        }
        for (int j = start; j < n; ++j) {
            J[pos] = j;
            rec(pos + 1, j + 1);
        }
    };
    rec(0, 0);
    return out;
}

// ---------------------------------------------------------------------
// CartanConnection

CartanConnection::CartanConnection(FrameFieldPtr frame, FormMatrix omega)
    : frame_(std::move(frame)), omega_(std::move(omega)) {
    int n = frame_->dimension();
    if (static_cast<int>(omega_.size()) != n)
        throw DimensionError("connection matrix must be n x n");
    for (const auto& row : omega_) {
        if (static_cast<int>(row.size()) != n)
            throw DimensionError("connection matrix must be n x n");
        for (const auto& w : row) {
            if (w.degree() != 1)
                throw DimensionError("connection entries must be 1-forms");
            if (w.chart() != frame_->chart())
                throw DimensionError("connection chart mismatch");
        }
    }
    SampleOptions opts = frame_->sample_options();
    const Signature& sig = frame_->signature();
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            Form res = omega_[i][j].scaled(ScalarExpr::rational(sig.eps(i))) +
                       omega_[j][i].scaled(ScalarExpr::rational(sig.eps(j)));
            ZeroCheck z = prove_zero(res, opts);
            if (!z.accepted())
                throw std::invalid_argument(
                    "connection violates metricity antisymmetry at (" +
                    std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
            metricity_downgraded_ = metricity_downgraded_ || z.downgraded;
        }
    }
}

std::vector<Form> torsion(const CartanConnection& C) {
    int n = C.dimension();
    std::vector<Form> T;
    T.reserve(n);
    for (int i = 0; i < n; ++i) {
        Form t = exterior_derivative(C.frame().coframe(i));
        for (int k = 0; k < n; ++k)
            t = t + wedge(C.omega(i, k), C.frame().coframe(k));
        T.push_back(std::move(t));
    }
    return T;
}

FormMatrix curvature(const CartanConnection& C) {
    int n = C.dimension();
    FormMatrix R(n, std::vector<Form>(n, Form(C.frame().chart(), 2)));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Form r = exterior_derivative(C.omega(i, j));
            for (int k = 0; k < n; ++k)
                r = r + wedge(C.omega(i, k), C.omega(k, j));
            R[i][j] = std::move(r);
        }
    }
    return R;
}

CurvatureData structure_equations(const CartanConnection& C) {
    CurvatureData out;
    out.torsion = torsion(C);
    out.curvature = curvature(C);
    int n = C.dimension();
    out.torsion_components.resize(n);
    for (int i = 0; i < n; ++i)
        out.torsion_components[i] = frame_components(out.torsion[i], C.frame());
    out.curvature_components.assign(n, std::vector<std::map<Index, ScalarExpr>>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.curvature_components[i][j] =
                frame_components(out.curvature[i][j], C.frame());
    return out;
}

namespace {
ScalarExpr lookup_pair(const std::map<Index, ScalarExpr>& m, int a, int b) {
    if (a == b) return ScalarExpr::rational(0);
    bool flip = a > b;
    if (flip) std::swap(a, b);
    auto it = m.find(Index{a, b});
    if (it == m.end()) return ScalarExpr::rational(0);
    return flip ? -it->second : it->second;
}
}  // namespace

ScalarExpr CurvatureData::torsion_component(int i, int j, int k) const {
    return lookup_pair(torsion_components.at(i), j, k);
}

ScalarExpr CurvatureData::curvature_component(int i, int j, int k, int l) const {
    return lookup_pair(curvature_components.at(i).at(j), k, l);
}

Ternary FlatnessReport::verdict() const {
    auto to_ternary = [](const ZeroCheck& z) {
        switch (z.status) {
            case ZeroCheck::Status::ProvenZero:
            case ZeroCheck::Status::NumericZero: return Ternary::Zero;
            case ZeroCheck::Status::NonZero: return Ternary::NonZero;
            default: return Ternary::Unknown;
        }
    };
    Ternary r = to_ternary(rotational), t = to_ternary(translational);
    if (r == Ternary::NonZero || t == Ternary::NonZero) return Ternary::NonZero;
    if (r == Ternary::Zero && t == Ternary::Zero) return Ternary::Zero;
    return Ternary::Unknown;
}

FlatnessReport is_flat(const CartanConnection& C) {
    SampleOptions opts = C.frame().sample_options();
    FlatnessReport rep;
    rep.rotational.status = ZeroCheck::Status::ProvenZero;
    rep.translational.status = ZeroCheck::Status::ProvenZero;
    auto merge = [](ZeroCheck& acc, const ZeroCheck& c) {
        acc.downgraded = acc.downgraded || c.downgraded;
        acc.max_abs = std::max(acc.max_abs, c.max_abs);
        if (c.status == ZeroCheck::Status::NonZero)
            acc.status = ZeroCheck::Status::NonZero;
        else if (c.status == ZeroCheck::Status::Undecided &&
                 acc.status != ZeroCheck::Status::NonZero)
            acc.status = ZeroCheck::Status::Undecided;
        else if (c.status == ZeroCheck::Status::NumericZero &&
                 acc.status == ZeroCheck::Status::ProvenZero)
            acc.status = ZeroCheck::Status::NumericZero;
    };
    for (const Form& t : torsion(C)) merge(rep.translational, prove_zero(t, opts));
    for (const auto& row : curvature(C))
        for (const Form& r : row) merge(rep.rotational, prove_zero(r, opts));
    return rep;
}

CartanConnection levi_civita(const FrameFieldPtr& F) {
    int n = F->dimension();
    const Signature& sig = F->signature();
    // anholonomy: d w^i = sum_{j<k} D^i_{jk} w^j ^ w^k
    std::vector<std::map<Index, ScalarExpr>> D(n);
    for (int i = 0; i < n; ++i)
        D[i] = frame_components(exterior_derivative(F->coframe(i)), *F);
    auto d_low = [&](int i, int j, int k) {
        return ScalarExpr::rational(sig.eps(i)) * lookup_pair(D[i], j, k);
    };
    // gamma_{ijk} = (d_{ijk} + d_{jki} - d_{kij}) / 2, antisymmetric in (i,j);
    // w^i_j = eps_i sum_k gamma_{ijk} w^k
    FormMatrix omega(n, std::vector<Form>(n, Form(F->chart(), 1)));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Form w(F->chart(), 1);
            for (int k = 0; k < n; ++k) {
                ScalarExpr gamma =
                    ScalarExpr::rational(1, 2) *
                    (d_low(i, j, k) + d_low(j, k, i) - d_low(k, i, j));
                ScalarExpr coef = ScalarExpr::rational(sig.eps(i)) * gamma;
                if (coef.is_zero_literal()) continue;
                w = w + F->coframe(k).scaled(coef);
            }
            omega[i][j] = std::move(w);
        }
    }
    return CartanConnection(F, std::move(omega));
}

ContorsionSplit contorsion_split(const CartanConnection& C) {
    CartanConnection lc = levi_civita(C.frame_ptr());
    int n = C.dimension();
    FormMatrix K(n, std::vector<Form>(n, Form(C.frame().chart(), 1)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) K[i][j] = C.omega(i, j) - lc.omega(i, j);
    return ContorsionSplit{std::move(lc), std::move(K)};
}

bool contorsion_totally_antisymmetric(const CartanConnection& C) {
    ContorsionSplit split = contorsion_split(C);
    int n = C.dimension();
    const Signature& sig = C.frame().signature();
    SampleOptions opts = C.frame().sample_options();
    // K_{ijk} = eps_i K^i_{jk}: already antisymmetric in (i,j) by metricity;
    // total antisymmetry needs K_{ijk} = -K_{ikj}
    std::vector<std::vector<std::map<Index, ScalarExpr>>> comp(n);
    for (int i = 0; i < n; ++i) {
        comp[i].resize(n);
        for (int j = 0; j < n; ++j)
            comp[i][j] = frame_components(split.contorsion[i][j], C.frame());
    }
    auto K_low = [&](int i, int j, int k) {
        // K^i_j = sum_k K^i_{jk} w^k
        auto it = comp[i][j].find(Index{k});
        ScalarExpr v = it == comp[i][j].end() ? ScalarExpr::rational(0) : it->second;
        return ScalarExpr::rational(sig.eps(i)) * v;
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                ZeroCheck z = prove_zero(K_low(i, j, k) + K_low(i, k, j), opts);
                if (!z.accepted()) return false;
            }
    return true;
}

std::map<std::pair<int, int>, bool> normality_check(
    const CartanConnection& C, std::optional<std::array<int, 3>> spatial_triple) {
    int n = C.dimension();
    std::vector<int> axes;
    if (n == 3) {
        axes = {0, 1, 2};
    } else if (n == 4) {
        std::array<int, 3> t = spatial_triple.value_or(std::array<int, 3>{1, 2, 3});
        axes.assign(t.begin(), t.end());
    } else {
        throw DimensionError("normality check requires dimension 3 or 4");
    }
    CurvatureData data = structure_equations(C);
    SampleOptions opts = C.frame().sample_options();
    std::map<std::pair<int, int>, bool> out;
    for (std::size_t a = 0; a < axes.size(); ++a) {
        for (std::size_t b = a + 1; b < axes.size(); ++b) {
            int j = axes[a], k = axes[b];
            ZeroCheck zj = prove_zero(data.torsion_component(j, j, k), opts);
            ZeroCheck zk = prove_zero(data.torsion_component(k, j, k), opts);
            out[{j, k}] = zj.accepted() && zk.accepted();
        }
    }
    return out;
}

std::vector<Form> first_bianchi_residual(const CartanConnection& C) {
    int n = C.dimension();
    std::vector<Form> T = torsion(C);
    FormMatrix R = curvature(C);
    std::vector<Form> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        Form r = exterior_derivative(T[i]);
        for (int k = 0; k < n; ++k) {
            r = r + wedge(C.omega(i, k), T[k]);
            r = r - wedge(R[i][k], C.frame().coframe(k));
        }
        out.push_back(std::move(r));
    }
    return out;
}

FormMatrix second_bianchi_residual(const CartanConnection& C) {
    int n = C.dimension();
    FormMatrix R = curvature(C);
    FormMatrix out(n, std::vector<Form>(n, Form(C.frame().chart(), 3)));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Form r = exterior_derivative(R[i][j]);
            for (int k = 0; k < n; ++k) {
                r = r + wedge(C.omega(i, k), R[k][j]);
                r = r - wedge(R[i][k], C.omega(k, j));
            }
            out[i][j] = std::move(r);
        }
    }
    return out;
}

}  // namespace cartanforge
