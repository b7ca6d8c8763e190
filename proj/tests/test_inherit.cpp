#include "mvcolor/inherit.hpp"
#include "mvcolor/solution.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mvcolor;

TEST(InheritSequential, RampFollowsParentHue)
{
    const Color parent = hcl_to_srgb(250.0, 40.0, 50.0).color;
    const auto ramp = inherit_sequential(parent, 5);
    ASSERT_EQ(ramp.colors.size(), 5u);
    EXPECT_FALSE(ramp.achromatic_parent);
    double prev_l = 101.0;
    for (std::size_t i = 0; i < ramp.colors.size(); ++i) {
        const Hcl h = srgb_to_hcl(ramp.colors[i]);
        EXPECT_LT(circular_hue_distance(h.h, 250.0), 0.5) << i;
        EXPECT_LT(h.l, prev_l);
        prev_l = h.l;
    }
    EXPECT_NEAR(srgb_to_hcl(ramp.colors.front()).l, 92.0, 1e-6);
    EXPECT_NEAR(srgb_to_hcl(ramp.colors.back()).l, 30.0, 1e-6); // max(20, 50 - 20)
}

TEST(InheritSequential, AchromaticParentGivesGrayRamp)
{
    const auto ramp = inherit_sequential(Color(0.5, 0.5, 0.5), 4);
    EXPECT_TRUE(ramp.achromatic_parent);
    for (const auto& c : ramp.colors) EXPECT_LT(srgb_to_hcl(c).c, 1e-6);
    EXPECT_THROW(inherit_sequential(Color(1, 0, 0), 1), Error);
}

TEST(InheritCategorical, ThreeParentsWithThreeThreeTwoChildren)
{
    const std::vector<Color> parents{hcl_to_srgb(20, 50, 55).color, hcl_to_srgb(140, 50, 55).color,
                                     hcl_to_srgb(260, 50, 55).color};
    const auto tree = inherit_categorical(parents, {3, 3, 2}, 40.0);
    ASSERT_EQ(tree.children.size(), 3u);
    EXPECT_EQ(tree.children[0].size(), 3u);
    EXPECT_EQ(tree.children[1].size(), 3u);
    EXPECT_EQ(tree.children[2].size(), 2u);
    for (std::size_t p = 0; p < 3; ++p) {
        EXPECT_DOUBLE_EQ(tree.spreads[p], 40.0); // far apart: no shrinking
        const double ph = srgb_to_hcl(parents[p]).h;
        for (const auto& c : tree.children[p]) {
            const Hcl h = srgb_to_hcl(c);
            EXPECT_LE(circular_hue_distance(h.h, ph), 20.0 + 0.5);
            // children of other parents are farther away in hue
            for (std::size_t q = 0; q < 3; ++q)
                if (q != p) { EXPECT_GT(circular_hue_distance(h.h, srgb_to_hcl(parents[q]).h), 20.0); }
        }
    }
    // siblings within a parent stay apart
    for (const auto& kids : tree.children)
        for (std::size_t i = 0; i < kids.size(); ++i)
            for (std::size_t j = i + 1; j < kids.size(); ++j) EXPECT_GT(ciede2000(kids[i], kids[j]), 5.0);
}

TEST(InheritCategorical, SpreadsShrinkUntilDisjoint)
{
    const std::vector<Color> parents{hcl_to_srgb(100, 45, 60).color, hcl_to_srgb(130, 45, 60).color};
    const auto tree = inherit_categorical(parents, {3, 3}, 60.0);
    const double d = circular_hue_distance(srgb_to_hcl(parents[0]).h, srgb_to_hcl(parents[1]).h);
    EXPECT_LT((tree.spreads[0] + tree.spreads[1]) / 2.0, d);
    EXPECT_GE(tree.spreads[0], kMinHueSpread);
}

TEST(InheritCategorical, ParentsTooClose)
{
    const std::vector<Color> parents{hcl_to_srgb(100, 45, 60).color, hcl_to_srgb(103, 45, 60).color};
    try {
        inherit_categorical(parents, {2, 2}, 30.0);
        FAIL() << "expected ParentsTooClose";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ParentsTooClose);
    }
    // a lone child occupies no interval, so the same parents are fine
    EXPECT_NO_THROW(inherit_categorical(parents, {1, 1}, 30.0));
}

TEST(InheritCategorical, LoneChildSitsOnParentHue)
{
    const Color parent = hcl_to_srgb(200, 40, 50).color;
    const auto tree = inherit_categorical({parent}, {1}, 30.0);
    ASSERT_EQ(tree.children[0].size(), 1u);
    EXPECT_LT(ciede2000(tree.children[0][0], parent), 1e-6);
}

TEST(InheritCategorical, InvalidArguments)
{
    EXPECT_THROW(inherit_categorical({Color(1, 0, 0)}, {0}, 30.0), Error);
    EXPECT_THROW(inherit_categorical({Color(1, 0, 0)}, {2}, 0.0), Error);
    EXPECT_THROW(inherit_categorical({Color(1, 0, 0)}, {2}, 121.0), Error);
    EXPECT_THROW(inherit_categorical({Color(1, 0, 0)}, {2, 3}, 30.0), Error);
}

TEST(ReorderFarthest, IsAPermutationStartingAtFirst)
{
    std::mt19937_64 rng(4);
    for (int t = 0; t < 50; ++t) {
        std::vector<Color> cs;
        for (int i = 0; i < 6; ++i) cs.push_back(mvtest::random_color(rng));
        const auto out = reorder_farthest(cs);
        ASSERT_EQ(out.size(), cs.size());
        EXPECT_EQ(out[0], cs[0]);
        for (const auto& c : cs) EXPECT_EQ(std::count(out.begin(), out.end(), c), std::count(cs.begin(), cs.end(), c));
        // step 1 goes to the farthest color from the first
        double far = 0.0;
        for (const auto& c : cs) far = std::max(far, ciede2000(cs[0], c));
        EXPECT_DOUBLE_EQ(ciede2000(out[0], out[1]), far);
    }
}

TEST(Decode, ChildrenAreDerivedFromParents)
{
    const auto g = build_graph(mvtest::load_case("case2_pets"));
    Solution s;
    s.roots.resize(g.groups.size());
    s.child_params.assign(g.groups.size(), {});
    s.roots[0] = {from_hex("#1b9e77"), from_hex("#d95f02"), from_hex("#7570b3")};
    const auto d = decode(s, g);
    ASSERT_TRUE(d.ok) << d.failure;
    // map_cat is a ramp from the "cat" color
    const auto ramp = inherit_sequential(s.roots[0][0], g.samples).colors;
    const int map_cat = g.view_index("map_cat");
    ASSERT_EQ(d.views[map_cat].size(), ramp.size());
    for (std::size_t i = 0; i < ramp.size(); ++i) EXPECT_EQ(d.views[map_cat].entries[i].color, ramp[i]);
    // bar_fish is the lone categorical child of "fish"
    const auto tree = inherit_categorical({TreeParent{s.roots[0][2], 3, {}}});
    const int fish = g.view_index("bar_fish");
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(d.views[fish].entries[i].color, tree.children[0][i]);
    // shared entities identical across the redundant pair
    EXPECT_EQ(d.views[g.view_index("pie_species")], d.views[g.view_index("bar_species")]);
}

TEST(Decode, WrongGenomeShapeFails)
{
    const auto g = build_graph(mvtest::load_case("case1_partial"));
    Solution s;
    s.roots.resize(g.groups.size());
    s.child_params.assign(g.groups.size(), {});
    s.roots[0] = {Color(1, 0, 0)};
    const auto d = decode(s, g);
    EXPECT_FALSE(d.ok);
    EXPECT_FALSE(d.failure.empty());
}
