#include <sstream>

#include <gtest/gtest.h>

#include "rangewalk/errors.hpp"
#include "rangewalk/lattice.hpp"
#include "rangewalk/pmf.hpp"

using namespace rangewalk;

TEST(Grid, RowMajorLastCoordinateFastest) {
    Grid<int> g(2, 1, 0);
    EXPECT_EQ(g.size(), 9u);
    EXPECT_EQ(g.index({-1, -1}), 0u);
    EXPECT_EQ(g.index({-1, 0}), 1u);
    EXPECT_EQ(g.index({0, -1}), 3u);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g.index(g.site(i)), i);
    EXPECT_FALSE(g.contains({2, 0}));
    EXPECT_EQ(g.value_or_zero({5, 5}), 0);
}

TEST(Grid, WindowCellsOverflowIsReported) {
    EXPECT_EQ(window_cells(3, 2), 125u);
    EXPECT_EQ(window_cells(8, 1'000'000), SIZE_MAX);
}

TEST(Pmf, BuiltinsAreNormalizedAndSymmetric) {
    for (int d = 1; d <= 4; ++d) {
        for (const auto& pmf : {simple_symmetric(d), lazy_half(d), uniform_cube(d), point_mass(d)}) {
            mpq_class total = 0;
            for (const auto& a : pmf.atoms()) {
                total += a.weight;
                EXPECT_EQ(a.weight, pmf.weight(negate(a.offset)));
            }
            EXPECT_EQ(total, 1);
        }
    }
    EXPECT_EQ(simple_symmetric(3).support_size(), 6u);
    EXPECT_EQ(uniform_cube(2).support_size(), 9u);
    EXPECT_EQ(lazy_half(2).weight({0, 0}), mpq_class(1, 2));
    EXPECT_EQ(lazy_half(2).weight({0, 1}), mpq_class(1, 8));
}

TEST(Pmf, RejectsInvalidLaws) {
    EXPECT_THROW(IncrementPmf(1, {{{1}, mpq_class(1, 2)}, {{-1}, mpq_class(1, 4)}, {{2}, mpq_class(1, 4)}}),
                 ValidationError);
    EXPECT_THROW(IncrementPmf(1, {{{1}, mpq_class(1, 2)}, {{-1}, mpq_class(1, 3)}}), ValidationError);
    EXPECT_THROW(IncrementPmf(1, {{{0}, mpq_class(3, 2)}, {{1}, mpq_class(-1, 4)}, {{-1}, mpq_class(-1, 4)}}),
                 ValidationError);
    EXPECT_THROW(IncrementPmf(1, {}), ValidationError);
}

TEST(Pmf, AsymmetryMessageNamesTheSite) {
    try {
        IncrementPmf(1, {{{-1}, mpq_class(1, 2)}, {{1}, mpq_class(1, 4)}, {{2}, mpq_class(1, 4)}});
        FAIL() << "expected a validation error";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("symmetric"), std::string::npos);
    }
}

TEST(Pmf, DuplicateSitesMerge) {
    IncrementPmf p(1, {{{1}, mpq_class(1, 4)}, {{1}, mpq_class(1, 4)}, {{-1}, mpq_class(1, 2)}});
    EXPECT_EQ(p.support_size(), 2u);
    EXPECT_EQ(p.weight({1}), mpq_class(1, 2));
}

TEST(Pmf, ParsesTextFormat) {
    std::istringstream in("# lazy walk\n0 1/2\n1 1/4   # right\n-1 1/4\n\n");
    const IncrementPmf p = parse_pmf(in);
    EXPECT_EQ(p.dim(), 1);
    EXPECT_EQ(p.denominator(), 4);
    EXPECT_EQ(p.weight({0}), mpq_class(1, 2));
    std::istringstream bad("0 0 1/2\n1 1/2\n");
    EXPECT_THROW(parse_pmf(bad), ValidationError);
    std::istringstream junk("1 x\n");
    EXPECT_THROW(parse_pmf(junk), ValidationError);
}

TEST(Pmf, SpecStrings) {
    EXPECT_EQ(pmf_from_spec("srw:2").support_size(), 4u);
    EXPECT_EQ(pmf_from_spec("uniform3:1").weight({0}), mpq_class(1, 3));
    EXPECT_THROW(pmf_from_spec("srw:0"), ValidationError);
    EXPECT_THROW(pmf_from_spec("srw:9"), ValidationError);
    EXPECT_THROW(pmf_from_spec("bogus:1"), ValidationError);
    EXPECT_THROW(pmf_from_spec("srw"), ValidationError);
}

TEST(WalkClass, PrecedenceAndTags) {
    EXPECT_EQ(validate_class(simple_symmetric(1)).tag, ClassTag::SimpleSymmetric);
    EXPECT_EQ(validate_class(simple_symmetric(3)).tag, ClassTag::SimpleSymmetric);
    EXPECT_EQ(validate_class(uniform_cube(1)).tag, ClassTag::ClassI);
    EXPECT_EQ(validate_class(lazy_half(2)).tag, ClassTag::LazyHalf);
    // lazy_half(1) is {0:1/2, +-1:1/4}: nonincreasing tails, so ClassI wins over LazyHalf.
    const WalkClass lazy1 = validate_class(lazy_half(1));
    EXPECT_EQ(lazy1.tag, ClassTag::ClassI);
    EXPECT_TRUE(lazy1.has(ClassTag::LazyHalf));
    EXPECT_EQ(validate_class(uniform_cube(2)).tag, ClassTag::Unclassified);
    EXPECT_FALSE(validate_class(uniform_cube(2)).proved());
}

TEST(WalkClass, ClassIConditions) {
    // p(1) < p(2): not ClassI.
    IncrementPmf rising(1, {{{1}, mpq_class(1, 8)}, {{-1}, mpq_class(1, 8)}, {{2}, mpq_class(3, 8)}, {{-2}, mpq_class(3, 8)}});
    EXPECT_FALSE(validate_class(rising).has(ClassTag::ClassI));
    // Monotone tail but p(0) < p(3).
    IncrementPmf heavy(1, {{{0}, mpq_class(1, 100)},
                           {{1}, mpq_class(33, 200)}, {{-1}, mpq_class(33, 200)},
                           {{2}, mpq_class(33, 200)}, {{-2}, mpq_class(33, 200)},
                           {{3}, mpq_class(33, 200)}, {{-3}, mpq_class(33, 200)}});
    EXPECT_FALSE(validate_class(heavy).has(ClassTag::ClassI));
    // Same shape with p(0) = p(3) qualifies.
    IncrementPmf flat(1, {{{0}, mpq_class(1, 7)},
                          {{1}, mpq_class(1, 7)}, {{-1}, mpq_class(1, 7)},
                          {{2}, mpq_class(1, 7)}, {{-2}, mpq_class(1, 7)},
                          {{3}, mpq_class(1, 7)}, {{-3}, mpq_class(1, 7)}});
    EXPECT_TRUE(validate_class(flat).has(ClassTag::ClassI));
}
