#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include <emtrace/groups.hpp>

using namespace emtrace;

namespace {

// brute-force element order: smallest t >= 1 with t*x = 0
Coord order_bruteforce(const FgAbGroup& g, const GroupElement& x) {
    GroupElement acc = g.zero();
    for (Coord t = 1;; ++t) {
        acc = g.add(acc, x);
        if (g.is_zero(acc))
            return t;
    }
}

std::multiset<Coord> order_profile(const FgAbGroup& g) {
    std::multiset<Coord> out;
    for (const auto& x : g.elements())
        out.insert(*g.element_order(x));
    return out;
}

} // namespace

TEST(Construction, NormalizesRawModuli) {
    const FgAbGroup g({0, 4, 1, 6}, 1);
    EXPECT_EQ(g.torsion(), (std::vector<Coord>{4, 6}));
    EXPECT_EQ(g.free_rank(), 2u); // the 0 modulus became a Z factor
    EXPECT_EQ(g.coord_count(), 4u);
    EXPECT_THROW(FgAbGroup({-2}), std::invalid_argument);
    EXPECT_THROW(FgAbGroup({2}, -1), std::invalid_argument);
}

TEST(Construction, TrivialGroup) {
    const FgAbGroup g;
    EXPECT_TRUE(g.is_trivial());
    EXPECT_EQ(g.order(), 1);
    EXPECT_EQ(g.elements().size(), 1u);
}

TEST(Canonicalize, Examples) {
    EXPECT_EQ(canonicalize(FgAbGroup({2, 3})).torsion(), (std::vector<Coord>{6}));
    EXPECT_EQ(canonicalize(FgAbGroup({4, 6})).torsion(), (std::vector<Coord>{2, 12}));
    const FgAbGroup free3({}, 3);
    EXPECT_EQ(canonicalize(free3), free3);
}

TEST(Canonicalize, IdempotentAndOrderPreserving) {
    std::mt19937_64 rng(0x5eed);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Coord> moduli(1 + rng() % 4);
        for (auto& n : moduli)
            n = 2 + static_cast<Coord>(rng() % 11);
        const FgAbGroup g(moduli);
        const FgAbGroup c = canonicalize(g);
        EXPECT_TRUE(c.is_canonical());
        EXPECT_EQ(c.order(), g.order());
        EXPECT_EQ(canonicalize(c), c);
    }
}

TEST(Canonicalize, PreservesIsomorphismType) {
    // same multiset of element orders before and after
    for (const auto& moduli :
         {std::vector<Coord>{2, 3}, {4, 6}, {2, 2, 3}, {6, 4}, {10, 4}, {9, 3, 2}}) {
        const FgAbGroup g(moduli);
        EXPECT_EQ(order_profile(g), order_profile(canonicalize(g))) << format_group(g);
    }
}

TEST(Reduce, Examples) {
    const FgAbGroup g({4}, 1);
    EXPECT_EQ(g.reduce({7, -2}), (GroupElement{3, -2}));
    const FgAbGroup h({2, 2});
    EXPECT_EQ(h.reduce({-1, 2}), (GroupElement{1, 0}));
    const FgAbGroup z2({}, 2);
    EXPECT_EQ(z2.reduce({5, -5}), (GroupElement{5, -5}));
    EXPECT_THROW(g.reduce({1}), std::invalid_argument);
}

TEST(Arithmetic, Examples) {
    const FgAbGroup z4({4});
    EXPECT_EQ(z4.add({3}, {2}), (GroupElement{1}));
    const FgAbGroup g({2}, 1);
    EXPECT_EQ(g.negate({1, 5}), (GroupElement{1, -5}));
}

TEST(Arithmetic, GroupAxiomsExhaustive) {
    const FgAbGroup g({3, 4});
    const auto elems = g.elements();
    for (const auto& x : elems) {
        EXPECT_TRUE(g.is_zero(g.add(x, g.negate(x))));
        EXPECT_EQ(g.add(x, g.zero()), x);
        for (const auto& y : elems) {
            EXPECT_EQ(g.add(x, y), g.add(y, x));
            for (const auto& z : elems)
                EXPECT_EQ(g.add(g.add(x, y), z), g.add(x, g.add(y, z)));
        }
    }
}

TEST(ElementOrder, Examples) {
    const FgAbGroup g({4}, 1);
    EXPECT_EQ(g.element_order({2, 0}), std::optional<Coord>(2));
    EXPECT_EQ(g.element_order({1, 1}), std::nullopt);
    const FgAbGroup h({6, 4});
    EXPECT_EQ(h.element_order({2, 2}), std::optional<Coord>(6)); // lcm(3, 2)
}

TEST(ElementOrder, MatchesBruteForce) {
    for (const auto& moduli : {std::vector<Coord>{6, 4}, {8}, {2, 2, 2}, {9, 3}}) {
        const FgAbGroup g(moduli);
        for (const auto& x : g.elements())
            EXPECT_EQ(*g.element_order(x), order_bruteforce(g, x));
    }
}

TEST(ElementOrder, SumDividesLcm) {
    const FgAbGroup g({6, 4});
    for (const auto& x : g.elements())
        for (const auto& y : g.elements()) {
            const Coord lcm = std::lcm(*g.element_order(x), *g.element_order(y));
            EXPECT_EQ(lcm % *g.element_order(g.add(x, y)), 0);
        }
}

TEST(Gcd2nN2, MatchesClosedForm) {
    EXPECT_EQ(gcd_2n_n2(3), 3); // odd
    EXPECT_EQ(gcd_2n_n2(4), 8); // even
    EXPECT_EQ(gcd_2n_n2(1), 1);
    EXPECT_THROW(gcd_2n_n2(0), std::domain_error);
    for (Coord n = 1; n <= 50; ++n)
        EXPECT_EQ(gcd_2n_n2(n), std::gcd(2 * n, n * n));
}

TEST(IsKilledBy, Examples) {
    const FgAbGroup z4({4});
    EXPECT_TRUE(is_killed_by(z4, {2}, 2));
    EXPECT_FALSE(is_killed_by(z4, {1}, 2));
    const FgAbGroup z({}, 1);
    EXPECT_FALSE(is_killed_by(z, {3}, 6));
    EXPECT_THROW(is_killed_by(z4, {1}, 0), std::domain_error);
}

TEST(TorsionSubgroup, Examples) {
    const FgAbGroup z4({4});
    EXPECT_EQ(torsion_subgroup_elements(z4, 2), (std::vector<GroupElement>{{0}, {2}}));
    EXPECT_EQ(torsion_subgroup_elements(FgAbGroup({8}), 24).size(), 8u);
    const FgAbGroup z({}, 1);
    EXPECT_EQ(torsion_subgroup_elements(z, 5), (std::vector<GroupElement>{{0}}));
}

TEST(TorsionSubgroup, CountAndMembership) {
    for (const auto& moduli : {std::vector<Coord>{4, 6}, {8}, {2, 2}, {9}}) {
        const FgAbGroup m(moduli);
        for (Coord d = 1; d <= 12; ++d) {
            const auto subgroup = torsion_subgroup_elements(m, d);
            Coord expected = 1;
            for (Coord n : moduli)
                expected *= std::gcd(n, d);
            EXPECT_EQ(static_cast<Coord>(subgroup.size()), expected);
            for (const auto& x : subgroup)
                EXPECT_TRUE(is_killed_by(m, x, d));
            // cross-check against filtering the full enumeration
            std::size_t filtered = 0;
            for (const auto& x : m.elements())
                if (is_killed_by(m, x, d))
                    ++filtered;
            EXPECT_EQ(filtered, subgroup.size());
        }
    }
}

TEST(TwoPrimaryGenerators, Examples) {
    const auto w12 = two_primary_generators(FgAbGroup({12}));
    ASSERT_EQ(w12.size(), 1u);
    EXPECT_EQ(w12[0].generator, (GroupElement{3}));
    EXPECT_EQ(w12[0].order, 4);

    EXPECT_TRUE(two_primary_generators(FgAbGroup({3, 9})).empty());

    const auto w24 = two_primary_generators(FgAbGroup({2, 4}));
    ASSERT_EQ(w24.size(), 2u);
    EXPECT_EQ(w24[0].generator, (GroupElement{1, 0}));
    EXPECT_EQ(w24[0].order, 2);
    EXPECT_EQ(w24[1].generator, (GroupElement{0, 1}));
    EXPECT_EQ(w24[1].order, 4);
}

TEST(TwoPrimaryGenerators, OrdersArePowersOfTwo) {
    for (const auto& moduli : {std::vector<Coord>{12}, {2, 4}, {6, 20}, {8, 3, 10}}) {
        const FgAbGroup g(moduli);
        for (const auto& w : two_primary_generators(g)) {
            EXPECT_EQ(*g.element_order(w.generator), w.order);
            EXPECT_EQ(w.order & (w.order - 1), 0) << w.order;
        }
    }
}

TEST(Enumeration, CanonicalOrder) {
    const FgAbGroup g({2, 2});
    const auto elems = g.elements();
    ASSERT_EQ(elems.size(), 4u);
    EXPECT_EQ(elems[0], (GroupElement{0, 0}));
    EXPECT_EQ(elems[1], (GroupElement{0, 1}));
    EXPECT_EQ(elems[2], (GroupElement{1, 0}));
    EXPECT_EQ(elems[3], (GroupElement{1, 1}));

    EXPECT_EQ(FgAbGroup({3}).elements(),
              (std::vector<GroupElement>{{0}, {1}, {2}}));
    EXPECT_THROW(FgAbGroup({}, 1).elements(), InfiniteGroupError);
}

TEST(Enumeration, IndexRoundTrip) {
    const FgAbGroup g({3, 4, 2});
    const auto elems = g.elements();
    for (std::size_t i = 0; i < elems.size(); ++i) {
        EXPECT_EQ(g.index_of(elems[i]), static_cast<Coord>(i));
        EXPECT_EQ(g.element_at(static_cast<Coord>(i)), elems[i]);
    }
}

TEST(GroupTableTest, MatchesGroupArithmetic) {
    const FgAbGroup g({6, 2});
    const GroupTable t(g);
    const auto elems = g.elements();
    for (std::size_t a = 0; a < t.size(); ++a) {
        EXPECT_EQ(t.element(t.neg(static_cast<std::uint32_t>(a))), g.negate(elems[a]));
        for (std::size_t b = 0; b < t.size(); ++b)
            EXPECT_EQ(t.element(t.add(static_cast<std::uint32_t>(a),
                                      static_cast<std::uint32_t>(b))),
                      g.add(elems[a], elems[b]));
    }
    EXPECT_THROW(GroupTable(FgAbGroup({}, 1)), InfiniteGroupError);
}

TEST(Formatting, Groups) {
    EXPECT_EQ(format_group(FgAbGroup({2, 12})), "Z/2 + Z/12");
    EXPECT_EQ(format_group(FgAbGroup({}, 1)), "Z");
    EXPECT_EQ(format_group(FgAbGroup({4}, 2)), "Z/4 + Z^2");
    EXPECT_EQ(format_group(FgAbGroup()), "0");
}
