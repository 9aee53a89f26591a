#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <emtrace/errors.hpp>

namespace emtrace {

using Coord = std::int64_t;

/// An element is a coordinate vector: one entry per torsion factor (stored
/// reduced into [0, n_i)) followed by one entry per free factor (unbounded).
using GroupElement = std::vector<Coord>;

/// A finitely generated abelian group Z/n_1 + ... + Z/n_k + Z^r.
///
/// Raw moduli are normalized at construction: 0 denotes a Z factor and is
/// moved into the free rank, 1 denotes a trivial factor and is dropped.
/// After construction every stored modulus is >= 2.
class FgAbGroup {
public:
    FgAbGroup() = default;
    FgAbGroup(std::vector<Coord> torsion, Coord free_rank = 0);

    const std::vector<Coord>& torsion() const { return torsion_; }
    std::size_t torsion_count() const { return torsion_.size(); }
    std::size_t free_rank() const { return free_rank_; }
    std::size_t coord_count() const { return torsion_.size() + free_rank_; }

    bool is_finite() const { return free_rank_ == 0; }
    bool is_trivial() const { return torsion_.empty() && free_rank_ == 0; }

    /// True when the torsion moduli form a divisibility chain n_1 | ... | n_k.
    bool is_canonical() const;

    /// Number of elements. Throws InfiniteGroupError when free_rank > 0.
    Coord order() const;

    GroupElement zero() const { return GroupElement(coord_count(), 0); }

    /// e_slot scaled by value, canonically reduced.
    GroupElement unit(std::size_t slot, Coord value = 1) const;

    /// Reduces torsion coordinates into [0, n_i); free coordinates pass
    /// through. Throws std::invalid_argument on a length mismatch.
    GroupElement reduce(GroupElement raw) const;

    GroupElement add(const GroupElement& x, const GroupElement& y) const;
    GroupElement negate(const GroupElement& x) const;
    GroupElement sub(const GroupElement& x, const GroupElement& y) const;
    GroupElement scalar_mul(Coord s, const GroupElement& x) const;

    bool is_zero(const GroupElement& x) const;

    /// Order of x, or nullopt when x has infinite order.
    std::optional<Coord> element_order(const GroupElement& x) const;

    /// Canonical enumeration: mixed-radix lexicographic, last coordinate
    /// fastest. This fixes the indexing used by every dense table.
    std::vector<GroupElement> elements() const;
    GroupElement element_at(Coord index) const;
    Coord index_of(const GroupElement& x) const;

    bool operator==(const FgAbGroup&) const = default;

private:
    void check_dimension(const GroupElement& x) const;

    std::vector<Coord> torsion_;
    std::size_t free_rank_ = 0;
};

/// Same isomorphism type, torsion moduli rewritten as a divisibility chain
/// via repeated (a, b) -> (gcd(a,b), lcm(a,b)); moduli equal to 1 dropped,
/// result sorted ascending.
FgAbGroup canonicalize(const FgAbGroup& g);

/// Concatenates torsion lists and adds free ranks. Coordinate slots of the
/// left summand come first within each block.
FgAbGroup direct_sum(const FgAbGroup& a, const FgAbGroup& b);

/// gcd(2n, n^2): n for odd n, 2n for even n. Throws std::domain_error for
/// n < 1.
Coord gcd_2n_n2(Coord n);

/// Membership test for the d-torsion subgroup M[d] = {m : d*m = 0}, d >= 1.
bool is_killed_by(const FgAbGroup& m_group, const GroupElement& m, Coord d);

/// All elements of M[d] in canonical enumeration order. Finite even when
/// the group has free rank (free coordinates must vanish).
std::vector<GroupElement> torsion_subgroup_elements(const FgAbGroup& m_group, Coord d);

/// A generator of the 2-primary part contributed by one torsion factor:
/// for Z/n with n = 2^a * u (u odd), the element u*e_i of order 2^a.
struct TorsionWitness {
    std::size_t factor_index;
    GroupElement generator;
    Coord order; // a power of 2, equal to the element order of generator

    bool operator==(const TorsionWitness&) const = default;
};

/// One witness per even torsion factor; their images generate G_2 / 2G_2.
std::vector<TorsionWitness> two_primary_generators(const FgAbGroup& g);

/// Flat-index arithmetic for a finite group: element list plus dense
/// addition/negation tables. This is the workhorse behind tabulation,
/// verification and the brute-force searches.
class GroupTable {
public:
    explicit GroupTable(const FgAbGroup& g);

    const FgAbGroup& group() const { return group_; }
    std::size_t size() const { return size_; }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return add_[a * size_ + b]; }
    std::uint32_t neg(std::uint32_t a) const { return neg_[a]; }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }

    const GroupElement& element(std::uint32_t i) const { return elements_[i]; }
    std::uint32_t index_of(const GroupElement& x) const;

private:
    FgAbGroup group_;
    std::size_t size_ = 1;
    std::vector<GroupElement> elements_;
    std::vector<std::uint32_t> add_;
    std::vector<std::uint32_t> neg_;
};

std::string format_group(const FgAbGroup& g);
std::string format_element(const GroupElement& x);

} // namespace emtrace
