#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include <emtrace/forms.hpp>
#include <emtrace/groups.hpp>

namespace emtrace {

/// A closed-form 2-abelian 3-cocycle (h, c) on a finitely generated group:
///
///   h(g, g', g'') = sum_i [a'_i + a''_i >= n_i] * a_i * carry_i
///   c(g, g')      = sum_{a,b} g_a g'_b C_ab        (canonical representatives)
///
/// carry_i plays the role of n_i * m_i for the cyclic carry cocycle on the
/// i-th torsion factor; the c matrix holds the quadratic-form parameters in
/// the upper-triangular pattern. Constructors enforce n_i * carry_i = 0 and
/// carry_i = n_i * C_ii.
struct StructuredCocycle {
    FgAbGroup domain;
    FgAbGroup coeffs;
    std::vector<GroupElement> carry; // one per torsion factor
    BilinearFormMatrix c_matrix;     // left = right = domain; not bilinear in general

    bool operator==(const StructuredCocycle&) const = default;
};

/// The cyclic carry cocycle on Z/n: h(x,y,z) = x*n*m when y + z >= n,
/// c(x,y) = x*y*m. Requires gcd(2n, n^2) * m = 0.
StructuredCocycle base_cyclic(Coord n, const FgAbGroup& coeffs, const GroupElement& m);

/// The trace-inverse construction: a cocycle whose trace is exactly q.
/// Throws std::invalid_argument listing the violations when q is invalid.
StructuredCocycle from_quad(const QuadraticFormParams& q);

GroupElement eval_h(const StructuredCocycle& sc, const GroupElement& x, const GroupElement& y,
                    const GroupElement& z);
GroupElement eval_c(const StructuredCocycle& sc, const GroupElement& x, const GroupElement& y);

/// Reads the quadratic form q(x) = c(x, x) off the coefficient matrix.
QuadraticFormParams trace(const StructuredCocycle& sc);

/// Dense tables over a finite group with finite coefficients; values are
/// indices into the coefficient enumeration. h is |G|^3 long in canonical
/// triple order (x, y, z), z fastest; c is |G|^2 long.
struct TabulatedCocycle {
    FgAbGroup domain;
    FgAbGroup coeffs;
    std::vector<std::uint32_t> h;
    std::vector<std::uint32_t> c;

    bool operator==(const TabulatedCocycle&) const = default;
};

TabulatedCocycle tabulate(const StructuredCocycle& sc);

QuadraticFormTable trace(const TabulatedCocycle& tc);

/// An arbitrary 2-cochain k: G^2 -> M, same dense layout as the c table.
struct Cochain2Table {
    FgAbGroup domain;
    FgAbGroup coeffs;
    std::vector<std::uint32_t> values;

    bool operator==(const Cochain2Table&) const = default;
};

Cochain2Table zero_cochain(const FgAbGroup& g, const FgAbGroup& m);
Cochain2Table random_cochain(const FgAbGroup& g, const FgAbGroup& m, std::mt19937_64& rng);

/// The 2-abelian coboundary (delta k, Alt k); always passes verify.
TabulatedCocycle coboundary(const Cochain2Table& k);

/// Pointwise difference of both tables.
TabulatedCocycle subtract(const TabulatedCocycle& a, const TabulatedCocycle& b);

enum class IdentityKind : std::uint8_t {
    CocycleIdentity, // standard 3-cocycle condition, checked on quadruples
    Compatibility1,  // c(x, y+z) hexagon, checked on triples
    Compatibility2,  // c(x+y, z) hexagon, checked on triples
    NormalForm1,     // h(x,y,z) = c(x,y) + c(x,z) - c(x,y+z)
    NormalForm2,     // h(z,x,y) = c(x+y,z) - c(x,z) - c(y,z)
};

struct IdentityViolation {
    IdentityKind kind;
    std::array<std::uint32_t, 4> at; // element indices; at[3] unused for triples
    std::uint32_t lhs;               // value indices in the coefficient group
    std::uint32_t rhs;
};

struct VerifyReport {
    std::uint64_t instances_checked = 0;
    std::uint64_t violation_count = 0;
    std::vector<IdentityViolation> reports; // first max_reports in canonical order

    bool ok() const { return violation_count == 0; }
};

struct VerifyOptions {
    std::size_t max_group_order = 64; // |G|^4 instances; the cap bounds runtime
    std::size_t max_reports = 16;
    unsigned threads = 1;
};

/// Exhaustively checks the 3-cocycle identity on all |G|^4 quadruples and
/// both compatibility conditions on all |G|^3 triples. Violations are data,
/// not errors. Throws BudgetExceededError when |G| exceeds the cap.
VerifyReport verify(const TabulatedCocycle& tc, const VerifyOptions& opts = {});

/// Checks the two identities that express h in terms of c at all triples.
VerifyReport normal_form_check(const TabulatedCocycle& tc, const VerifyOptions& opts = {});

/// c(x,y) + c(y,x) == q(x+y) - q(x) - q(y) with q(x) = c(x,x), at all pairs.
bool polarization_identity_holds(const TabulatedCocycle& tc);

std::string describe(const IdentityViolation& v, const GroupTable& g, const GroupTable& m);

} // namespace emtrace
