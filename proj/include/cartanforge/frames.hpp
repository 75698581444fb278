// Moving frames: orthonormal coframes, metric-compatible connections, and
// the structure equations (torsion and curvature) with flatness tests and
// the Levi-Civita solver.
//
// Conventions (docs/conventions.md):
//   torsion     T^i   = d w^i   + sum_k w^i_k ^ w^k
//   curvature   R^i_j = d w^i_j + sum_k w^i_k ^ w^k_j
//   metricity   eps_i w^i_j + eps_j w^j_i = 0
//   components  T^i = sum_{j<k} A^i_{jk} w^j^w^k,  A antisymmetric in (j,k)
//               R^i_j = sum_{k<l} A^i_{jkl} w^k^w^l

#ifndef CARTANFORGE_FRAMES_HPP
#define CARTANFORGE_FRAMES_HPP

#include <array>
#include <memory>
#include <optional>
#include <utility>

#include "cartanforge/forms.hpp"

namespace cartanforge {

using ExprMatrix = std::vector<std::vector<ScalarExpr>>;
using FormMatrix = std::vector<std::vector<Form>>;

/// Result of a zero check that may fall back from symbolic proof to
/// deterministic sampling (20 points, |value| < 1e-10); the fallback is
/// flagged so reports can surface the downgrade.
struct ZeroCheck {
    enum class Status { ProvenZero, NumericZero, NonZero, Undecided };
    Status status = Status::Undecided;
    bool downgraded = false;
    double max_abs = 0.0;

    bool accepted() const {
        return status == Status::ProvenZero || status == Status::NumericZero;
    }
};

const char* zero_check_name(ZeroCheck::Status s);

ZeroCheck prove_zero(const ScalarExpr& e, const SampleOptions& opts,
                     double numeric_tol = 1e-10);
ZeroCheck prove_zero(const Form& f, const SampleOptions& opts,
                     double numeric_tol = 1e-10);

class FrameField {
public:
    /// `coframe` holds the n 1-forms w^i; the coframe matrix must be
    /// symbolically invertible (determinant not proven zero).
    /// `parameter_hints` pins named parameters during sampled checks.
    FrameField(ChartPtr chart, Signature signature, std::vector<Form> coframe,
               std::map<std::string, double> parameter_hints = {});

    int dimension() const { return static_cast<int>(coframe_.size()); }
    const ChartPtr& chart() const { return chart_; }
    const Signature& signature() const { return sig_; }
    const Form& coframe(int i) const { return coframe_.at(i); }
    const std::vector<Form>& coframe() const { return coframe_; }

    /// Coefficient matrix E with w^i = sum_a E[i][a] dx^a.
    const ExprMatrix& coframe_matrix() const { return E_; }
    /// Inverse matrix D = E^{-1} with dx^a = sum_i D[a][i] w^i; the columns
    /// of D are the dual frame vectors e_i.
    const ExprMatrix& inverse_matrix() const { return D_; }
    const ScalarExpr& determinant() const { return det_; }

    /// Reconstructed metric g = E^T diag(eps) E.
    ExprMatrix metric() const;

    const std::map<std::string, double>& parameter_hints() const { return params_; }
    /// Sampling options with chart bounds and pinned parameters applied.
    SampleOptions sample_options() const;

private:
    ChartPtr chart_;
    Signature sig_;
    std::vector<Form> coframe_;
    std::map<std::string, double> params_;
    ExprMatrix E_, D_;
    ScalarExpr det_;
};

using FrameFieldPtr = std::shared_ptr<const FrameField>;

ExprMatrix metric_from_coframe(const FrameField& F);

class CartanConnection {
public:
    /// Validates metricity: eps_i w^i_j + eps_j w^j_i must prove zero
    /// (numeric fallback flagged via metricity_downgraded()).
    CartanConnection(FrameFieldPtr frame, FormMatrix omega);

    const FrameField& frame() const { return *frame_; }
    const FrameFieldPtr& frame_ptr() const { return frame_; }
    int dimension() const { return frame_->dimension(); }
    const Form& omega(int i, int j) const { return omega_.at(i).at(j); }
    const FormMatrix& omega() const { return omega_; }
    bool metricity_downgraded() const { return metricity_downgraded_; }

private:
    FrameFieldPtr frame_;
    FormMatrix omega_;
    bool metricity_downgraded_ = false;
};

/// Torsion and curvature 2-forms with their coframe components.
struct CurvatureData {
    std::vector<Form> torsion;   // T^i
    FormMatrix curvature;        // R^i_j

    std::vector<std::map<Index, ScalarExpr>> torsion_components;
    std::vector<std::vector<std::map<Index, ScalarExpr>>> curvature_components;

    /// A^i_{jk}, antisymmetric continuation of the stored j<k entries.
    ScalarExpr torsion_component(int i, int j, int k) const;
    /// A^i_{jkl}, antisymmetric in (k,l).
    ScalarExpr curvature_component(int i, int j, int k, int l) const;
};

std::vector<Form> torsion(const CartanConnection& C);
FormMatrix curvature(const CartanConnection& C);
CurvatureData structure_equations(const CartanConnection& C);

struct FlatnessReport {
    ZeroCheck rotational;     // all R^i_j zero
    ZeroCheck translational;  // all T^i zero
    /// Eq-(3) flatness: both parts zero (tri-state).
    Ternary verdict() const;
};

FlatnessReport is_flat(const CartanConnection& C);

/// The unique metric-compatible torsion-free connection of the coframe,
/// solved from the anholonomy coefficients.
CartanConnection levi_civita(const FrameFieldPtr& F);

struct ContorsionSplit {
    CartanConnection levi_civita;
    FormMatrix contorsion;  // K^i_j = w^i_j - (LC w)^i_j
};

ContorsionSplit contorsion_split(const CartanConnection& C);

/// Is the contorsion totally antisymmetric (K_{ijk} = eps_i K^i_{jk}
/// antisymmetric under every index swap)?  The coincidence condition for
/// autoparallels and geodesics.
bool contorsion_totally_antisymmetric(const CartanConnection& C);

/// For each coframe 2-plane (j,k), does the torsion translation attached to
/// that surface element point orthogonally to it (A^j_{jk} = A^k_{jk} = 0)?
/// In n=4 the check runs over the planes of a spacelike triple.
std::map<std::pair<int, int>, bool> normality_check(
    const CartanConnection& C,
    std::optional<std::array<int, 3>> spatial_triple = std::nullopt);

/// Residuals of the Bianchi identities with torsion; identically zero for
/// any connection, so these are self-tests of the structure equations.
std::vector<Form> first_bianchi_residual(const CartanConnection& C);
FormMatrix second_bianchi_residual(const CartanConnection& C);

}  // namespace cartanforge

#endif
