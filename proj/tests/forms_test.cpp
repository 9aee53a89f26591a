#include <gtest/gtest.h>

#include <random>

#include <emtrace/forms.hpp>

using namespace emtrace;

namespace {

// Test-only oracle: count quadratic functions G -> M straight from the
// definition, by filtering all |M|^|G| value tables. Never touches the
// parameter representation.
std::size_t count_quadratic_bruteforce(const FgAbGroup& g, const FgAbGroup& m) {
    const GroupTable gt(g);
    const GroupTable mt(m);
    const std::size_t n = gt.size();
    const std::size_t msize = mt.size();

    std::vector<std::uint32_t> q(n, 0);
    auto pol = [&](std::size_t x, std::size_t y) {
        return mt.sub(mt.sub(q[gt.add(x, y)], q[x]), q[y]);
    };
    std::size_t count = 0;
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i)
        total *= msize;
    for (std::uint64_t it = 0; it < total; ++it) {
        bool good = true;
        for (std::size_t x = 0; x < n && good; ++x)
            good = q[gt.neg(x)] == q[x];
        for (std::size_t x = 0; x < n && good; ++x)
            for (std::size_t xp = 0; xp < n && good; ++xp)
                for (std::size_t y = 0; y < n && good; ++y)
                    good = pol(gt.add(x, xp), y) == mt.add(pol(x, y), pol(xp, y));
        if (good)
            ++count;
        for (std::size_t p = n; p-- > 0;) {
            if (++q[p] < msize)
                break;
            q[p] = 0;
        }
    }
    return count;
}

QuadraticFormParams cyclic_params(Coord n, const FgAbGroup& m, GroupElement value) {
    QuadraticFormParams q = QuadraticFormParams::zero(FgAbGroup({n}), m);
    q.diag_torsion[0] = m.reduce(std::move(value));
    return q;
}

QuadraticFormParams random_valid_params(const FgAbGroup& g, const FgAbGroup& m,
                                        std::mt19937_64& rng) {
    const auto quads = enumerate_quads(g, m);
    return quads[rng() % quads.size()];
}

} // namespace

TEST(EvalQuad, CyclicSquareLaw) {
    const FgAbGroup m({8});
    const QuadraticFormParams q = cyclic_params(4, m, {1});
    for (Coord x = 0; x < 4; ++x)
        EXPECT_EQ(eval_quad(q, {x}), m.reduce({x * x}));
    EXPECT_EQ(eval_quad(q, q.domain.zero()), m.zero());
}

TEST(EvalQuad, CrossTermExample) {
    QuadraticFormParams q = QuadraticFormParams::zero(FgAbGroup({2, 2}), FgAbGroup({4}));
    q.diag_torsion[0] = {1};
    q.cross_torsion_at(0, 1) = {2};
    EXPECT_TRUE(validate_params(q).empty());
    EXPECT_EQ(eval_quad(q, {1, 1}), (GroupElement{3})); // 1 + 0 + 2
}

TEST(EvalQuad, EvenUnderNegationAndSquareScaling) {
    for (const auto& [gm, mm] : std::vector<std::pair<std::vector<Coord>, std::vector<Coord>>>{
             {{4}, {8}}, {{2, 2}, {4}}, {{6}, {4}}, {{2, 4}, {2, 4}}}) {
        const FgAbGroup g(gm), m(mm);
        for (const auto& q : enumerate_quads(g, m))
            for (const auto& x : g.elements()) {
                EXPECT_EQ(eval_quad(q, g.negate(x)), eval_quad(q, x));
                for (Coord s = -4; s <= 4; ++s)
                    EXPECT_EQ(eval_quad(q, g.scalar_mul(s, x)),
                              m.scalar_mul(s * s, eval_quad(q, x)));
            }
    }
}

TEST(EvalQuad, EvenUnderNegationOnFreePart) {
    // domain with a free factor: q(x) = x^2*l on Z/2 + Z, checked on a box
    const FgAbGroup g({2}, 1);
    const FgAbGroup m({}, 1);
    QuadraticFormParams q = QuadraticFormParams::zero(g, m);
    q.diag_free[0] = {3};
    ASSERT_TRUE(validate_params(q).empty());
    for (Coord a = 0; a < 2; ++a)
        for (Coord x = -3; x <= 3; ++x) {
            const GroupElement e = g.reduce({a, x});
            EXPECT_EQ(eval_quad(q, g.negate(e)), eval_quad(q, e));
        }
    EXPECT_EQ(eval_quad(q, {0, 2}), (GroupElement{12}));
}

TEST(AssocBilinear, Examples) {
    const FgAbGroup m({4});
    const QuadraticFormParams q = cyclic_params(2, m, {1});
    EXPECT_EQ(assoc_bilinear(q, {1}, {0}), m.zero());
    EXPECT_EQ(assoc_bilinear(q, {1}, {1}), (GroupElement{2})); // q(0) - 2q(1) = -2
    // b_q(x, -x) = -2 q(x)
    for (const auto& [gm, mm] : std::vector<std::pair<std::vector<Coord>, std::vector<Coord>>>{
             {{4}, {8}}, {{2, 2}, {4}}}) {
        const FgAbGroup g(gm), mc(mm);
        for (const auto& p : enumerate_quads(g, mc))
            for (const auto& x : g.elements())
                EXPECT_EQ(assoc_bilinear(p, x, g.negate(x)),
                          mc.scalar_mul(-2, eval_quad(p, x)));
    }
}

TEST(AssocBilinear, BiadditiveExhaustive) {
    const FgAbGroup g({2, 4});
    const FgAbGroup m({8});
    for (const auto& q : enumerate_quads(g, m))
        for (const auto& x : g.elements())
            for (const auto& xp : g.elements())
                for (const auto& y : g.elements())
                    EXPECT_EQ(assoc_bilinear(q, g.add(x, xp), y),
                              m.add(assoc_bilinear(q, x, y), assoc_bilinear(q, xp, y)));
}

TEST(EvalBilinear, Examples) {
    const FgAbGroup g({2});
    const FgAbGroup m({4});
    BilinearFormMatrix c = BilinearFormMatrix::zero(g, g, m);
    c.at(0, 0) = {2};
    EXPECT_TRUE(validate_bilinear(c).empty());
    EXPECT_EQ(eval_bilinear(c, {1}, {0}), m.zero());
    EXPECT_EQ(eval_bilinear(c, {1}, {1}), (GroupElement{2}));
}

TEST(EvalBilinear, BiadditiveWhenConstraintsHold) {
    const FgAbGroup g({2, 4});
    const FgAbGroup m({4});
    BilinearFormMatrix c = BilinearFormMatrix::zero(g, g, m);
    c.at(0, 0) = {2};
    c.at(0, 1) = {2};
    c.at(1, 0) = {2};
    c.at(1, 1) = {1};
    ASSERT_TRUE(validate_bilinear(c).empty());
    for (const auto& x : g.elements())
        for (const auto& xp : g.elements())
            for (const auto& y : g.elements()) {
                EXPECT_EQ(eval_bilinear(c, g.add(x, xp), y),
                          m.add(eval_bilinear(c, x, y), eval_bilinear(c, xp, y)));
                EXPECT_EQ(eval_bilinear(c, y, g.add(x, xp)),
                          m.add(eval_bilinear(c, y, x), eval_bilinear(c, y, xp)));
            }
}

TEST(ValidateParams, Examples) {
    EXPECT_TRUE(validate_params(cyclic_params(2, FgAbGroup({4}), {1})).empty());

    const auto violations = validate_params(cyclic_params(2, FgAbGroup({3}), {1}));
    ASSERT_EQ(violations.size(), 1u);
    EXPECT_EQ(violations[0].coefficient, "m[1]");
    EXPECT_EQ(violations[0].annihilator, 4);

    EXPECT_TRUE(
        validate_params(QuadraticFormParams::zero(FgAbGroup({2, 4}), FgAbGroup({8}))).empty());
}

TEST(ValidateParams, CrossAndMixedConstraints) {
    const FgAbGroup g({2, 3}, 1); // deliberately not a divisibility chain
    const FgAbGroup m({6});
    QuadraticFormParams q = QuadraticFormParams::zero(g, m);
    q.cross_torsion_at(0, 1) = {1}; // needs gcd(2,3) = 1 to kill it
    q.mixed_at(0, 0) = {3};         // killed by 2
    q.mixed_at(1, 0) = {3};         // needs 3*value = 0, 9 = 3 != 0 mod 6
    const auto violations = validate_params(q);
    ASSERT_EQ(violations.size(), 2u);
    EXPECT_EQ(violations[0].coefficient, "b[1,2]");
    EXPECT_EQ(violations[1].coefficient, "t[2,1]");
}

TEST(PhiPsi, CombinedExample) {
    const FgAbGroup g1({2}), g2({2}), m({4});
    DirectSumSplit s{BilinearFormMatrix::zero(g1, g2, m), cyclic_params(2, m, {1}),
                     QuadraticFormParams::zero(g2, m)};
    s.cross.at(0, 0) = {2};
    const QuadraticFormParams q = phi(s);
    EXPECT_TRUE(validate_params(q).empty());
    EXPECT_EQ(eval_quad(q, {1, 1}), (GroupElement{3})); // 1 + 0 + 2
    EXPECT_EQ(eval_quad(q, {1, 0}), (GroupElement{1})); // restriction is q1

    const DirectSumSplit back = psi(q, {1, 0});
    EXPECT_EQ(back.cross.at(0, 0), (GroupElement{2})); // 3 - 1 - 0
    EXPECT_EQ(back.left, s.left);
    EXPECT_EQ(back.right, s.right);
}

TEST(PhiPsi, PointwiseAgreement) {
    // phi result evaluates to f + q1 + q2 on every element
    const FgAbGroup g1({2, 4}), g2({3}), m({12});
    std::mt19937_64 rng(0x5eed);
    for (int trial = 0; trial < 20; ++trial) {
        DirectSumSplit s{BilinearFormMatrix::zero(g1, g2, m), random_valid_params(g1, m, rng),
                         random_valid_params(g2, m, rng)};
        for (std::size_t a = 0; a < g1.coord_count(); ++a)
            for (std::size_t b = 0; b < g2.coord_count(); ++b) {
                const auto candidates = torsion_subgroup_elements(
                    m, std::gcd(g1.torsion()[a], g2.torsion()[b]));
                s.cross.at(a, b) = candidates[rng() % candidates.size()];
            }
        const QuadraticFormParams q = phi(s);
        EXPECT_TRUE(validate_params(q).empty());
        for (const auto& x1 : g1.elements())
            for (const auto& x2 : g2.elements()) {
                GroupElement combined = x1;
                GroupElement expect = eval_bilinear(s.cross, x1, x2);
                // concatenated layout: torsion of g1, torsion of g2 (g2 has no free part)
                combined.insert(combined.end(), x2.begin(), x2.end());
                expect = m.add(expect, m.add(eval_quad(s.left, x1), eval_quad(s.right, x2)));
                EXPECT_EQ(eval_quad(q, combined), expect);
            }
        const DirectSumSplit back = psi(q, {g1.torsion_count(), g1.free_rank()});
        EXPECT_EQ(back.left, s.left);
        EXPECT_EQ(back.right, s.right);
        EXPECT_EQ(back.cross, s.cross);
    }
}

TEST(PhiPsi, RoundTripWithFreeParts) {
    const FgAbGroup g1({2}, 1), g2({3}, 1), m({6}, 1);
    std::mt19937_64 rng(0xfeed);
    for (int trial = 0; trial < 1000; ++trial) {
        auto random_value = [&](Coord ann) {
            if (ann == 0) {
                GroupElement v = m.zero();
                for (auto& c : v)
                    c = static_cast<Coord>(rng() % 7) - 3;
                return m.reduce(std::move(v));
            }
            const auto candidates = torsion_subgroup_elements(m, ann);
            return candidates[rng() % candidates.size()];
        };
        auto random_form = [&](const FgAbGroup& g) {
            QuadraticFormParams q = QuadraticFormParams::zero(g, m);
            for (std::size_t i = 0; i < g.torsion_count(); ++i)
                q.diag_torsion[i] = random_value(gcd_2n_n2(g.torsion()[i]));
            for (std::size_t j = 0; j < g.free_rank(); ++j)
                q.diag_free[j] = random_value(0);
            for (std::size_t i = 0; i < g.torsion_count(); ++i)
                for (std::size_t j = 0; j < g.free_rank(); ++j)
                    q.mixed_at(i, j) = random_value(g.torsion()[i]);
            return q;
        };
        DirectSumSplit s{BilinearFormMatrix::zero(g1, g2, m), random_form(g1), random_form(g2)};
        for (std::size_t a = 0; a < g1.coord_count(); ++a)
            for (std::size_t b = 0; b < g2.coord_count(); ++b) {
                Coord ann = 0;
                if (a < g1.torsion_count())
                    ann = g1.torsion()[a];
                if (b < g2.torsion_count())
                    ann = ann == 0 ? g2.torsion()[b] : std::gcd(ann, g2.torsion()[b]);
                s.cross.at(a, b) = random_value(ann);
            }
        const QuadraticFormParams q = phi(s);
        const DirectSumSplit back = psi(q, {g1.torsion_count(), g1.free_rank()});
        ASSERT_EQ(back.left, s.left);
        ASSERT_EQ(back.right, s.right);
        ASSERT_EQ(back.cross, s.cross);
        ASSERT_EQ(phi(back), q);
    }
}

TEST(EnumerateQuads, FrozenCounts) {
    EXPECT_EQ(enumerate_quads(FgAbGroup({4}), FgAbGroup({2})).size(), 2u);
    EXPECT_EQ(enumerate_quads(FgAbGroup({2, 2}), FgAbGroup({4})).size(), 32u);
    EXPECT_EQ(enumerate_quads(FgAbGroup({3}), FgAbGroup({2})).size(), 1u);
    EXPECT_THROW(enumerate_quads(FgAbGroup({}, 1), FgAbGroup({2})), InfiniteGroupError);
}

TEST(EnumerateQuads, MatchesBruteForceDefinition) {
    for (const auto& [gm, mm] : std::vector<std::pair<std::vector<Coord>, std::vector<Coord>>>{
             {{4}, {2}}, {{2, 2}, {4}}, {{3}, {2}}, {{6}, {4}}, {{2, 4}, {2}}, {{5}, {10}}}) {
        const FgAbGroup g(gm), m(mm);
        const auto quads = enumerate_quads(g, m);
        for (const auto& q : quads)
            EXPECT_TRUE(validate_params(q).empty());
        EXPECT_EQ(quads.size(), count_quadratic_bruteforce(g, m))
            << format_group(g) << " -> " << format_group(m);
        // and the enumeration is duplicate-free
        for (std::size_t i = 0; i < quads.size(); ++i)
            for (std::size_t j = i + 1; j < quads.size(); ++j)
                EXPECT_FALSE(quads[i] == quads[j]);
    }
}

TEST(EnumerateQuads, CyclicCountFormulaSample) {
    for (Coord n = 2; n <= 6; ++n)
        for (Coord m = 2; m <= 6; ++m)
            EXPECT_EQ(static_cast<Coord>(enumerate_quads(FgAbGroup({n}), FgAbGroup({m})).size()),
                      std::gcd(gcd_2n_n2(n), m));
}

TEST(FitParams, RoundTrip) {
    const FgAbGroup g({2, 4});
    const FgAbGroup m({8});
    for (const auto& q : enumerate_quads(g, m))
        EXPECT_EQ(fit_params(tabulate_quad(q)), q);

    const QuadraticFormTable zero_table = tabulate_quad(QuadraticFormParams::zero(g, m));
    EXPECT_EQ(fit_params(zero_table), QuadraticFormParams::zero(g, m));
}

TEST(FitParams, RejectsNonQuadraticTables) {
    // q(1) = 1, q(0) = 0, q(-1) = 0 on Z/3 breaks q(-x) = q(x)
    QuadraticFormTable t;
    t.domain = FgAbGroup({3});
    t.coeffs = FgAbGroup({3});
    t.values = {0, 1, 0};
    EXPECT_THROW(fit_params(t), NotQuadraticError);

    // pointwise-fittable but constraint-violating: q(1) = 1 in Z/3 over Z/2
    QuadraticFormTable bad;
    bad.domain = FgAbGroup({2});
    bad.coeffs = FgAbGroup({3});
    bad.values = {0, 1};
    EXPECT_THROW(fit_params(bad), NotQuadraticError);
}

TEST(ParamsAddition, FormsAnAbelianGroup) {
    const FgAbGroup g({2, 4});
    const FgAbGroup m({4});
    const auto quads = enumerate_quads(g, m);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto& a = quads[rng() % quads.size()];
        const auto& b = quads[rng() % quads.size()];
        const QuadraticFormParams sum = add(a, b);
        EXPECT_TRUE(validate_params(sum).empty());
        for (const auto& x : g.elements())
            EXPECT_EQ(eval_quad(sum, x), m.add(eval_quad(a, x), eval_quad(b, x)));
    }
}
