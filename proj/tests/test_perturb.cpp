#include <sstream>

#include <gtest/gtest.h>

#include "rangewalk/errors.hpp"
#include "rangewalk/perturb.hpp"

using namespace rangewalk;

TEST(InsertionPath, EnforcesHeldPairs) {
    EXPECT_NO_THROW(InsertionPath({{0}, {1}, {1}, {-2}, {-2}}));
    EXPECT_THROW(InsertionPath({{0}, {1}, {2}}), ValidationError);
    EXPECT_THROW(InsertionPath({}), ValidationError);
    EXPECT_THROW(InsertionPath({{0}, {1, 1}, {1, 1}}), ValidationError);
}

TEST(Contract, OddLength) {
    const TrapTrajectory phi = contract(InsertionPath({{0}, {3}, {3}, {-1}, {-1}}));
    ASSERT_EQ(phi.size(), 3u);
    EXPECT_EQ(phi[0], Site{0});
    EXPECT_EQ(phi[1], Site{-3});
    EXPECT_EQ(phi[2], Site{1});
}

TEST(Contract, EvenLengthIsExtendedByItsLastValue) {
    const TrapTrajectory phi = contract(InsertionPath({{0}, {2}, {2}, {5}}));
    ASSERT_EQ(phi.size(), 3u);
    EXPECT_EQ(phi[2], Site{-5});
}

TEST(TrapField, TwoSitesPerTimeDeduplicated) {
    const TrapTrajectory phi({{0}, {1}, {1}, {0}});
    const auto field = trap_field(phi, 2);
    ASSERT_EQ(field.size(), 3u);
    EXPECT_EQ(field[0].size(), 2u);
    EXPECT_EQ(field[1], std::vector<Site>{{1}});
    EXPECT_EQ(field[2].size(), 2u);
    EXPECT_THROW(trap_field(phi, 3), ValidationError);
}

TEST(Trajectory, HeldToRepeatsLastSite) {
    const TrapTrajectory phi({{0, 0}, {1, -2}});
    const TrapTrajectory held = phi.held_to(4);
    ASSERT_EQ(held.size(), 4u);
    EXPECT_EQ(held[3], (Site{1, -2}));
    EXPECT_EQ(phi.extent(), 2);
}

TEST(Trajectory, Generators) {
    const TrapTrajectory alt = alternating_phi(5);
    ASSERT_EQ(alt.size(), 6u);
    for (int i = 0; i <= 5; ++i) EXPECT_EQ(alt[static_cast<std::size_t>(i)], Site{i % 2});

    const TrapTrajectory a = random_phi(42, 30, uniform_cube(2));
    const TrapTrajectory b = random_phi(42, 30, uniform_cube(2));
    const TrapTrajectory c = random_phi(43, 30, uniform_cube(2));
    EXPECT_EQ(a.values(), b.values());
    EXPECT_NE(a.values(), c.values());
    EXPECT_EQ(a[0], (Site{0, 0}));
    for (std::size_t i = 1; i < a.size(); ++i) EXPECT_LE(sup_norm(sub(a[i], a[i - 1])), 1);

    const InsertionPath f = random_insertion(7, 9, simple_symmetric(1));
    ASSERT_EQ(f.size(), 10u);
    for (std::size_t k = 1; 2 * k <= 9; ++k) EXPECT_EQ(f[2 * k - 1], f[2 * k]);
}

TEST(Trajectory, SpecsAndFiles) {
    EXPECT_EQ(phi_from_spec("zero:3", 2).size(), 4u);
    EXPECT_EQ(phi_from_spec("alternating:4", 1).size(), 5u);
    EXPECT_THROW(phi_from_spec("alternating:4", 2), DimensionError);
    EXPECT_THROW(phi_from_spec("random:x:4", 1), ValidationError);
    EXPECT_THROW(phi_from_spec("spiral:4", 1), ValidationError);

    std::stringstream io;
    write_sites(io, {{1, -2}, {0, 3}});
    const auto sites = read_sites(io);
    ASSERT_EQ(sites.size(), 2u);
    EXPECT_EQ(sites[1], (Site{0, 3}));
    std::istringstream bad("1 2\n3 q\n");
    EXPECT_THROW(read_sites(bad), ValidationError);
}
