// Gravitational forms: Ricci and scalar curvature, the two-constant Einstein
// tensor, the vector-valued 3-form (kinetic quantity of mass) and its
// torsionful bivector generalization, the algebraic torsion constraint, and
// the generalized Hilbert Lagrangian.
//
// Index conventions and the calibrated normalization live in
// docs/conventions.md.  Quantities written with lower pair indices are
// eps-lowered: R_{kl} = eps_k R^k_l (curvature 2-forms), T_k = eps_k T^k
// (torsion 2-forms).

#ifndef CARTANFORGE_EINSTEIN_HPP
#define CARTANFORGE_EINSTEIN_HPP

#include "cartanforge/frames.hpp"

namespace cartanforge {

struct EinsteinData {
    ExprMatrix ricci;   // frame components Ric_ij = sum_k A^k_{ikj}
    ScalarExpr scalar;  // R = sum_i eps_i Ric_ii
    Rational alpha = 1, beta = 0, kappa = 1;
    ExprMatrix tensor;  // G_ij = alpha (Ric_ij - R/2 g_ij) + beta g_ij
};

EinsteinData ricci_scalar(const CartanConnection& C);
EinsteinData einstein_tensor(const CartanConnection& C, const Rational& alpha,
                             const Rational& beta);

/// A form with values in grades 1 and 2 of the Grassmann algebra of the
/// frame: vector slot i holds Pi^i, bivector slot (i<j) holds Pi^{ij}.
struct GrassmannValuedForm {
    std::map<Index, Form> vector_part;
    std::map<Index, Form> bivector_part;

    Form vector(int i) const;
    Form bivector(int i, int j) const;  // antisymmetric continuation
    bool structurally_zero() const;
};

/// Eq.-form of the gravitational tensor in n=4 (vector part only):
/// Pi^i = sgn(ijkl) [w^j^R_{kl} + w^k^R_{lj} + w^l^R_{jk}] over the cyclic
/// permutation (i,j,k,l) of (0,1,2,3).
GrassmannValuedForm einstein_form(const CartanConnection& C);

/// Adds the bivector (couple) slots fed by torsion:
/// Pi^{ij} = -sgn(ijkl) [w^k^T_l - w^l^T_k].
GrassmannValuedForm generalized_einstein_form(const CartanConnection& C);

/// n=3 analogue: T~^i = R_{kl} with (i,k,l) cyclic, the stress reading of
/// rotational curvature (normalized to the worked antisymmetric-matrix
/// example: R = [[0,c,-b],[-c,0,a],[b,-a,0]] gives T = (a,b,c)).
std::vector<Form> three_dim_einstein(const CartanConnection& C);

/// n=3 invariant combining stress vectors and torsion couples:
/// e_i R_{kl} (cyclic) + (e_j^e_k) T_i (cyclic pairing).
GrassmannValuedForm vector_couple_invariant(const CartanConnection& C);

/// Gradewise covariant exterior derivative d_w.
GrassmannValuedForm covariant_exterior_derivative(const GrassmannValuedForm& G,
                                                  const CartanConnection& C);

/// Conservation check: d_w of the given form proves zero (numeric fallback
/// per coefficient).
ZeroCheck conservation_check(const GrassmannValuedForm& G,
                             const CartanConnection& C);

/// Per-index 4-form residuals of the algebraic constraint
/// sgn(ijkl)(T_j^R_{kl} + T_k^R_{lj} + T_l^R_{jk}); identically zero at zero
/// torsion.
std::vector<Form> cartan_constraint(const CartanConnection& C);

/// The generalized Hilbert 4-form sum sgn(ijkl) w^i^w^j^R_{kl}.  For
/// torsion-free connections its coefficient equals
/// kHilbertNormalization * R * volume density (calibrated; see docs).
Form hilbert_lagrangian(const CartanConnection& C);

/// Calibrated constants (documented in docs/conventions.md):
/// einstein_form vector components against the Hodge-dualized Einstein
/// tensor, and the Hilbert coefficient against R * sqrt|det g|.
inline constexpr int kEinsteinFormDualSign = -2;  // Pi^i = -2 * star(G^i_j w^j)
inline constexpr int kHilbertNormalization = -2;  // coeff = -2 R sqrt|det g|

}  // namespace cartanforge

#endif
