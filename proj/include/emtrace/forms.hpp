#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <emtrace/groups.hpp>

namespace emtrace {

/// Coefficient tuple of a quadratic form q: G -> M on a group with k
/// torsion factors and free rank r:
///
///   q(a_1..a_k, x_1..x_r) = sum a_i^2 m_i + sum_{i<j} a_i a_j b_ij
///                         + sum x_j^2 l_j  + sum_{j<l} x_j x_l f_jl
///                         + sum a_i x_j t_ij
///
/// evaluated on canonical integer representatives. Constraints (checked by
/// validate_params, not by the constructor):
///   gcd(2n_i, n_i^2) * m_i = 0,  gcd(n_i, n_j) * b_ij = 0,  n_i * t_ij = 0;
///   l_j and f_jl are unconstrained.
struct QuadraticFormParams {
    FgAbGroup domain;
    FgAbGroup coeffs;
    std::vector<GroupElement> diag_torsion;  // m_i, k entries
    std::vector<GroupElement> cross_torsion; // b_ij, i < j, row-major
    std::vector<GroupElement> diag_free;     // l_j, r entries
    std::vector<GroupElement> cross_free;    // f_jl, j < l, row-major
    std::vector<GroupElement> mixed;         // t_ij, k x r row-major

    static QuadraticFormParams zero(const FgAbGroup& domain, const FgAbGroup& coeffs);

    GroupElement& cross_torsion_at(std::size_t i, std::size_t j);
    const GroupElement& cross_torsion_at(std::size_t i, std::size_t j) const;
    GroupElement& cross_free_at(std::size_t j, std::size_t l);
    const GroupElement& cross_free_at(std::size_t j, std::size_t l) const;
    GroupElement& mixed_at(std::size_t i, std::size_t j);
    const GroupElement& mixed_at(std::size_t i, std::size_t j) const;

    bool operator==(const QuadraticFormParams&) const = default;
};

/// Coefficientwise sum; Quad(G, M) is an abelian group.
QuadraticFormParams add(const QuadraticFormParams& a, const QuadraticFormParams& b);

struct ParamViolation {
    std::string coefficient; // e.g. "m[2]", "b[1,3]"
    Coord annihilator;
    GroupElement value;
};

/// Every violated torsion constraint; empty means the parameters are valid.
std::vector<ParamViolation> validate_params(const QuadraticFormParams& q);

GroupElement eval_quad(const QuadraticFormParams& q, const GroupElement& x);

/// Polarization b_q(x, y) = q(x+y) - q(x) - q(y).
GroupElement assoc_bilinear(const QuadraticFormParams& q, const GroupElement& x,
                            const GroupElement& y);

/// A bilinear form as a dense coefficient matrix: entry C_ab per ordered
/// pair of coordinate slots, the two arguments living in `left` and
/// `right` (equal for a form on a single group). Bilinearity on canonical
/// representatives requires ann(a)*C_ab = ann(b)*C_ab = 0, where ann is the
/// torsion modulus of the slot and vacuous for free slots.
struct BilinearFormMatrix {
    FgAbGroup left;
    FgAbGroup right;
    FgAbGroup coeffs;
    std::vector<GroupElement> entries; // left.coord_count() x right.coord_count(), row-major

    static BilinearFormMatrix zero(const FgAbGroup& left, const FgAbGroup& right,
                                   const FgAbGroup& coeffs);

    GroupElement& at(std::size_t a, std::size_t b);
    const GroupElement& at(std::size_t a, std::size_t b) const;

    bool operator==(const BilinearFormMatrix&) const = default;
};

std::vector<ParamViolation> validate_bilinear(const BilinearFormMatrix& c);

GroupElement eval_bilinear(const BilinearFormMatrix& c, const GroupElement& x,
                           const GroupElement& y);

/// The data of a quadratic form on G_1 + G_2: forms on the summands plus
/// the bilinear cross term pairing the first argument's G_1 part with the
/// second argument's G_2 part.
struct DirectSumSplit {
    BilinearFormMatrix cross; // on G_1 x G_2
    QuadraticFormParams left;
    QuadraticFormParams right;
};

/// Glues a split into one form on direct_sum(G_1, G_2); pointwise the
/// result evaluates to f(g_1, g_2) + q_1(g_1) + q_2(g_2).
QuadraticFormParams phi(const DirectSumSplit& split);

/// Where to cut the coordinate slots of a direct-sum domain: the first
/// `torsion` torsion slots and first `free` free slots go to the left part.
struct SplitPoint {
    std::size_t torsion;
    std::size_t free;
};

/// Inverse of phi: splits a form along the given cut.
DirectSumSplit psi(const QuadraticFormParams& q, SplitPoint at);

/// Exhaustive list of all quadratic forms G -> M, G finite. Enumerates the
/// torsion subgroup M[ann] for every coefficient slot; canonical order,
/// last coefficient fastest.
std::vector<QuadraticFormParams> enumerate_quads(const FgAbGroup& g, const FgAbGroup& m);

/// Dense value table of a form on a finite group with finite coefficients.
/// values[i] is the index of q(element i) in the coefficient enumeration.
struct QuadraticFormTable {
    FgAbGroup domain;
    FgAbGroup coeffs;
    std::vector<std::uint32_t> values;

    bool operator==(const QuadraticFormTable&) const = default;
};

QuadraticFormTable tabulate_quad(const QuadraticFormParams& q);

/// Recovers parameters from a table: m_i = t(e_i), b_ij = b_t(e_i, e_j).
/// Throws NotQuadraticError unless the fit round-trips on every element
/// and satisfies the parameter constraints.
QuadraticFormParams fit_params(const QuadraticFormTable& t);

} // namespace emtrace
