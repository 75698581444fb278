// Built-in reference geometries with machine-checkable property ledgers,
// and the Lie-group distant-parallelism constructor.

#ifndef CARTANFORGE_CATALOG_HPP
#define CARTANFORGE_CATALOG_HPP

#include "cartanforge/transport.hpp"

namespace cartanforge {

struct LedgerClaim {
    enum class Kind {
        RotationalFlat,
        RotationalNonzero,
        TorsionZero,
        TorsionNonzero,
        TorsionTotallyAntisymmetric,
        TorsionComponent,            // A^i_{jk} == expected
        CurvatureComponent,          // A^i_{jkl} == expected
        ScalarCurvature,             // R == expected
        RicciZero,
        AutoparallelsStraight,       // straight coordinate lines
        AutoparallelsMatchMetricGeodesics,
        NormalityHolds,              // torsion normal to every surface element
    };
    Kind kind;
    std::array<int, 4> indices{-1, -1, -1, -1};
    std::string expected;  // expression over chart coordinates and parameters
    double tolerance = 1e-9;
    std::string note;      // where the expected value comes from
};

const char* ledger_kind_name(LedgerClaim::Kind k);

struct CatalogEntry {
    std::string name;  // display name with parameters, e.g. "sphere2(r=1)"
    std::string base;  // builtin key, e.g. "sphere2"
    std::map<std::string, double> parameters;
    FrameFieldPtr frame;
    std::shared_ptr<const CartanConnection> connection;
    bool connection_is_levi_civita = false;
    std::vector<LedgerClaim> ledger;
    bool negative_control = false;

    SymbolTable symbols() const;
};

/// The ten builtin geometry names (the hidden negative-control fixture is
/// addressable by name but not listed).
std::vector<std::string> catalog_names();

/// Builds a builtin entry; `spec` is a name with an optional parameter,
/// e.g. "sphere2", "sphere2(2)", "staircase(0.5)".
CatalogEntry builtin(const std::string& spec);

/// Structure constants c^k_{ij}, antisymmetric in (i,j); the Jacobi identity
/// is verified exactly on construction.
class StructureConstants {
public:
    StructureConstants(int dimension,
                       std::map<std::array<int, 3>, Rational> components);

    int dimension() const { return dim_; }
    Rational c(int k, int i, int j) const;  // antisymmetric continuation
    /// Killing form K_ij = sum_{m,l} c^m_{il} c^l_{jm}.
    std::vector<std::vector<Rational>> killing_form() const;

    static StructureConstants so3(const Rational& scale = 1);
    static StructureConstants abelian(int dimension);

private:
    int dim_;
    std::map<std::array<int, 3>, Rational> c_;  // keys i<j
};

enum class GroupSide { Left, Right };

/// Invariant coframe in product-of-exponentials coordinates with the flat
/// teleparallel connection: curvature vanishes identically and the torsion
/// components equal -c (left) or +c (right).  Supported generators: nilpotent
/// ad, or rotation-type ad with ad^3 = -lambda^2 ad (exact Rodrigues form).
CatalogEntry lie_group_teleparallel(const StructureConstants& constants,
                                    GroupSide side);

struct ClaimResult {
    LedgerClaim claim;
    bool pass = false;
    bool downgraded = false;
    std::string measured;
};

struct LedgerReport {
    std::string entry;
    std::vector<ClaimResult> results;
    bool all_pass() const;
};

LedgerReport verify_ledger(const CatalogEntry& entry);

}  // namespace cartanforge

#endif
