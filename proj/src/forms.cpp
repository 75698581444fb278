#include "cartanforge/forms.hpp"

#include <algorithm>
#include <sstream>

namespace cartanforge {

int canonicalize_index(Index& idx) {
    // insertion sort, counting swaps; fine for length <= 4
    int sign = 1;
    for (std::size_t i = 1; i < idx.size(); ++i) {
        for (std::size_t j = i; j > 0 && idx[j - 1] > idx[j]; --j) {
            std::swap(idx[j - 1], idx[j]);
            sign = -sign;
        }
    }
    for (std::size_t i = 1; i < idx.size(); ++i)
        if (idx[i - 1] == idx[i]) return 0;
    return sign;
}

int merge_sign(const Index& a, const Index& b, Index& merged) {
    merged = a;
    merged.insert(merged.end(), b.begin(), b.end());
    return canonicalize_index(merged);
}

// ---------------------------------------------------------------------
// Form

Form::Form(ChartPtr chart, int degree) : chart_(std::move(chart)), degree_(degree) {
    if (degree_ < 0)
        throw DimensionError("form degree must be nonnegative");
}

Form Form::scalar(ChartPtr chart, ScalarExpr value) {
    Form f(std::move(chart), 0);
    f.add_term({}, value);
    return f;
}

Form Form::coordinate_differential(ChartPtr chart, int axis) {
    if (axis < 0 || axis >= chart->dimension())
        throw DimensionError("coordinate axis out of range");
    Form f(std::move(chart), 1);
    f.add_term({axis}, ScalarExpr::rational(1));
    return f;
}

void Form::add_term(Index idx, const ScalarExpr& value) {
    if (static_cast<int>(idx.size()) != degree_)
        throw DimensionError("multi-index length does not match form degree");
    if (degree_ > chart_->dimension()) return;  // degree > n: the zero form
    for (int a : idx)
        if (a < 0 || a >= chart_->dimension())
            throw DimensionError("axis out of range in multi-index");
    int sign = canonicalize_index(idx);
    if (sign == 0 || value.is_zero_literal()) return;
    ScalarExpr v = sign == 1 ? value : -value;
    auto it = terms_.find(idx);
    if (it == terms_.end()) {
        terms_.emplace(std::move(idx), v);
    } else {
        ScalarExpr s = it->second + v;
        if (s.is_zero_literal()) terms_.erase(it);
        else it->second = s;
    }
}

ScalarExpr Form::coeff(Index idx) const {
    int sign = canonicalize_index(idx);
    if (sign == 0) return ScalarExpr::rational(0);
    auto it = terms_.find(idx);
    if (it == terms_.end()) return ScalarExpr::rational(0);
    return sign == 1 ? it->second : -it->second;
}

Form Form::operator+(const Form& other) const {
    if (chart_ != other.chart_)
        throw DimensionError("chart mismatch in form addition");
    if (degree_ != other.degree_)
        throw DimensionError("degree mismatch in form addition");
    Form out = *this;
    for (const auto& [idx, v] : other.terms_) out.add_term(idx, v);
    return out;
}

Form Form::operator-(const Form& other) const { return *this + (-other); }

Form Form::scaled(const ScalarExpr& factor) const {
    Form out(chart_, degree_);
    for (const auto& [idx, v] : terms_) out.add_term(idx, factor * v);
    return out;
}

double Form::eval_on(const Bindings& point,
                     std::span<const std::vector<double>> vectors) const {
    if (static_cast<int>(vectors.size()) != degree_)
        throw DimensionError("need one tangent vector per form degree");
    double total = 0;
    int k = degree_;
    // determinant of the k x k minor picked by each multi-index
    std::vector<int> perm(k);
    for (const auto& [idx, v] : terms_) {
        double c = v.eval(point);
        // expand det over permutations (k <= 4: at most 24 terms)
        for (int i = 0; i < k; ++i) perm[i] = i;
        double det = 0;
        do {
            int sign = 1;
            for (int i = 0; i < k; ++i)
                for (int j = i + 1; j < k; ++j)
                    if (perm[i] > perm[j]) sign = -sign;
            double prod = 1;
            for (int i = 0; i < k; ++i) prod *= vectors[perm[i]][idx[i]];
            det += sign * prod;
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (k == 0) det = 1;
        total += c * det;
    }
    return total;
}

std::string Form::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [idx, v] : terms_) {
        if (!first) os << " + ";
        first = false;
        std::string c = v.str();
        bool needs_parens = c.find(' ') != std::string::npos;
        if (degree_ == 0) {
            os << c;
            continue;
        }
        if (needs_parens) os << '(' << c << ')';
        else os << c;
        os << ' ';
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (i) os << '^';
            os << 'd' << chart_->coordinate(idx[i]);
        }
    }
    return os.str();
}

Form wedge(const Form& a, const Form& b) {
    if (a.chart() != b.chart())
        throw DimensionError("chart mismatch in wedge product");
    Form out(a.chart(), a.degree() + b.degree());
    if (out.degree() > a.chart()->dimension()) return out;
    for (const auto& [ia, va] : a.terms()) {
        for (const auto& [ib, vb] : b.terms()) {
            Index merged;
            int sign = merge_sign(ia, ib, merged);
            if (sign == 0) continue;
            ScalarExpr v = va * vb;
            out.add_term(merged, sign == 1 ? v : -v);
        }
    }
    return out;
}

Form exterior_derivative(const Form& a) {
    Form out(a.chart(), a.degree() + 1);
    int n = a.chart()->dimension();
    if (out.degree() > n) return out;
    for (const auto& [idx, v] : a.terms()) {
        for (int axis = 0; axis < n; ++axis) {
            ScalarExpr dv = v.derivative(a.chart()->coordinate(axis));
            if (dv.is_zero_literal()) continue;
            Index with = idx;
            with.insert(with.begin(), axis);
            out.add_term(std::move(with), dv);
        }
    }
    return out;
}

Ternary form_is_zero(const Form& a, const SampleOptions& opts) {
    if (a.is_structurally_zero()) return Ternary::Zero;
    bool unknown = false;
    for (const auto& [idx, v] : a.terms()) {
        switch (is_zero(v, opts)) {
            case Ternary::NonZero: return Ternary::NonZero;
            case Ternary::Unknown: unknown = true; break;
            case Ternary::Zero: break;  // pruned normally, but be safe
        }
    }
    return unknown ? Ternary::Unknown : Ternary::Zero;
}

// ---------------------------------------------------------------------
// Signature / MultiVector

Signature::Signature(std::vector<int> eps) : eps_(std::move(eps)) {
    for (int e : eps_)
        if (e != 1 && e != -1)
            throw std::invalid_argument("signature entries must be +1 or -1");
}

Signature Signature::euclidean(int n) { return Signature(std::vector<int>(n, 1)); }

Signature Signature::lorentzian(int n) {
    std::vector<int> e(n, -1);
    e.at(0) = 1;
    return Signature(std::move(e));
}

int Signature::product() const {
    int p = 1;
    for (int e : eps_) p *= e;
    return p;
}

MultiVector::MultiVector(int dimension, int grade) : dim_(dimension), grade_(grade) {
    if (grade_ < 0 || grade_ > dim_)
        throw DimensionError("multivector grade out of range");
}

MultiVector MultiVector::basis(int dimension, Index idx) {
    MultiVector m(dimension, static_cast<int>(idx.size()));
    m.add_term(std::move(idx), ScalarExpr::rational(1));
    return m;
}

void MultiVector::add_term(Index idx, const ScalarExpr& value) {
    if (static_cast<int>(idx.size()) != grade_)
        throw DimensionError("multi-index length does not match grade");
    for (int a : idx)
        if (a < 0 || a >= dim_) throw DimensionError("frame index out of range");
    int sign = canonicalize_index(idx);
    if (sign == 0 || value.is_zero_literal()) return;
    ScalarExpr v = sign == 1 ? value : -value;
    auto it = terms_.find(idx);
    if (it == terms_.end()) {
        terms_.emplace(std::move(idx), v);
    } else {
        ScalarExpr s = it->second + v;
        if (s.is_zero_literal()) terms_.erase(it);
        else it->second = s;
    }
}

ScalarExpr MultiVector::coeff(Index idx) const {
    int sign = canonicalize_index(idx);
    if (sign == 0) return ScalarExpr::rational(0);
    auto it = terms_.find(idx);
    if (it == terms_.end()) return ScalarExpr::rational(0);
    return sign == 1 ? it->second : -it->second;
}

MultiVector MultiVector::operator+(const MultiVector& other) const {
    if (dim_ != other.dim_ || grade_ != other.grade_)
        throw DimensionError("multivector shape mismatch");
    MultiVector out = *this;
    for (const auto& [idx, v] : other.terms_) out.add_term(idx, v);
    return out;
}

MultiVector MultiVector::scaled(const ScalarExpr& factor) const {
    MultiVector out(dim_, grade_);
    for (const auto& [idx, v] : terms_) out.add_term(idx, factor * v);
    return out;
}

bool MultiVector::same(const MultiVector& other) const {
    if (dim_ != other.dim_ || grade_ != other.grade_) return false;
    if (terms_.size() != other.terms_.size()) return false;
    for (const auto& [idx, v] : terms_) {
        auto it = other.terms_.find(idx);
        if (it == other.terms_.end() || !v.same(it->second)) return false;
    }
    return true;
}

std::string MultiVector::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [idx, v] : terms_) {
        if (!first) os << " + ";
        first = false;
        std::string c = v.str();
        if (grade_ == 0) {
            os << c;
            continue;
        }
        if (!v.is_one_literal()) {
            if (c.find(' ') != std::string::npos) os << '(' << c << ')';
            else os << c;
            os << ' ';
        }
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (i) os << '^';
            os << 'e' << (idx[i] + 1);
        }
    }
    return os.str();
}

MultiVector grassmann_dual(const MultiVector& v, const Signature& sig,
                           int orientation) {
    int n = v.dimension();
    if (sig.dimension() != n)
        throw DimensionError("signature dimension mismatch");
    if (orientation != 1 && orientation != -1)
        throw std::invalid_argument("orientation must be +1 or -1");
    MultiVector out(n, n - v.grade());
    for (const auto& [idx, val] : v.terms()) {
        Index comp;
        for (int a = 0; a < n; ++a)
            if (!std::binary_search(idx.begin(), idx.end(), a)) comp.push_back(a);
        Index merged;
        int sign = merge_sign(idx, comp, merged);  // e_I ^ e_J = sign * volume
        int eps = 1;
        for (int a : idx) eps *= sig.eps(a);
        ScalarExpr c = val * ScalarExpr::rational(sign * eps * orientation);
        out.add_term(std::move(comp), c);
    }
    return out;
}

MultiVector bivector_to_polar(const MultiVector& b, const ScalarExpr& g11,
                              const ScalarExpr& g22, const ScalarExpr& g33) {
    if (b.dimension() != 3)
        throw DimensionError("bivector-to-polar transmutation requires dimension 3");
    if (b.grade() != 2) throw DimensionError("input must have grade 2");
    ScalarExpr pref = ScalarExpr::pow(g11 * g22 * g33, Rational(-1, 2));
    MultiVector out(3, 1);
    out.add_term({0}, pref * b.coeff({1, 2}));
    out.add_term({1}, pref * b.coeff({2, 0}));
    out.add_term({2}, pref * b.coeff({0, 1}));
    return out;
}

}  // namespace cartanforge
