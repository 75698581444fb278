// Exterior algebra: differential forms in the coordinate basis and
// Grassmann multivectors over an orthonormal frame, with wedge, exterior
// derivative and "Ergaenzung" duality.

#ifndef CARTANFORGE_FORMS_HPP
#define CARTANFORGE_FORMS_HPP

#include <map>
#include <span>
#include <vector>

#include "cartanforge/expr.hpp"

namespace cartanforge {

/// Strictly increasing multi-index over 0-based axes.
using Index = std::vector<int>;

/// Sorts `idx` in place, returning the permutation sign (+1/-1) or 0 when an
/// axis repeats.
int canonicalize_index(Index& idx);

/// Sign of the permutation taking (a, b) concatenated to sorted order; a and
/// b must each be sorted. Returns 0 on a common axis.
int merge_sign(const Index& a, const Index& b, Index& merged);

class FrameField;  // frames.hpp

class Form {
public:
    Form(ChartPtr chart, int degree);
    static Form scalar(ChartPtr chart, ScalarExpr value);
    static Form coordinate_differential(ChartPtr chart, int axis);  // dx_axis

    int degree() const { return degree_; }
    const ChartPtr& chart() const { return chart_; }
    const std::map<Index, ScalarExpr>& terms() const { return terms_; }

    /// Adds `value` on the (possibly unsorted) multi-index with the implied
    /// alternation sign; literal-zero coefficients are pruned.
    void add_term(Index idx, const ScalarExpr& value);
    ScalarExpr coeff(Index idx) const;  // 0 when absent, signed when unsorted

    bool is_structurally_zero() const { return terms_.empty(); }

    Form operator+(const Form& other) const;
    Form operator-(const Form& other) const;
    Form scaled(const ScalarExpr& factor) const;
    Form operator-() const { return scaled(ScalarExpr::rational(-1)); }

    /// Value on `degree()` tangent vectors at a point.
    double eval_on(const Bindings& point,
                   std::span<const std::vector<double>> vectors) const;

    std::string str() const;  // "f dx1^dx2 + ..." notation

private:
    ChartPtr chart_;
    int degree_;
    std::map<Index, ScalarExpr> terms_;
};

Form wedge(const Form& a, const Form& b);
Form exterior_derivative(const Form& a);

/// Is every coefficient literally zero after simplification / sampling?
Ternary form_is_zero(const Form& a, const SampleOptions& opts = {});

/// Re-expresses `a` in the wedge basis of the coframe of `F`; keys are
/// frame multi-indices.  Throws on a symbolically singular coframe.
std::map<Index, ScalarExpr> frame_components(const Form& a, const FrameField& F);

class Signature {
public:
    explicit Signature(std::vector<int> eps);
    static Signature euclidean(int n);
    static Signature lorentzian(int n);  // (+, -, ..., -)

    int dimension() const { return static_cast<int>(eps_.size()); }
    int eps(int i) const { return eps_.at(i); }
    int product() const;  // det of diag(eps)
    const std::vector<int>& values() const { return eps_; }

private:
    std::vector<int> eps_;
};

/// Grade-m element of the Grassmann algebra over the frame e_1..e_n.
class MultiVector {
public:
    MultiVector(int dimension, int grade);
    static MultiVector basis(int dimension, Index idx);  // e_{i1}^...^e_{im}

    int dimension() const { return dim_; }
    int grade() const { return grade_; }
    const std::map<Index, ScalarExpr>& terms() const { return terms_; }

    void add_term(Index idx, const ScalarExpr& value);
    ScalarExpr coeff(Index idx) const;

    MultiVector operator+(const MultiVector& other) const;
    MultiVector scaled(const ScalarExpr& factor) const;
    bool is_structurally_zero() const { return terms_.empty(); }
    bool same(const MultiVector& other) const;

    std::string str() const;  // "e1^e2" notation

private:
    int dim_;
    int grade_;
    std::map<Index, ScalarExpr> terms_;
};

/// Grassmann duality relative to the frame volume e_1^...^e_n = 1: each
/// basis element maps to the complementary one signed so that their product
/// is the volume element, times the signature factors of the input indices,
/// times the orientation.
MultiVector grassmann_dual(const MultiVector& v, const Signature& sig,
                           int orientation = +1);

/// n=3 only: (Omega_23, Omega_31, Omega_12) |-> polar vector of the same
/// measure, with the 1/sqrt(g11 g22 g33) prefactor of a diagonal metric.
MultiVector bivector_to_polar(const MultiVector& b, const ScalarExpr& g11,
                              const ScalarExpr& g22, const ScalarExpr& g33);

}  // namespace cartanforge

#endif
