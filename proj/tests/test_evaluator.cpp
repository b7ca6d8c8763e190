#include "mvcolor/evaluator.hpp"
#include "mvcolor/optimizer.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mvcolor;

namespace {

Assignment random_assignment(std::mt19937_64& rng, const MvGraph& g)
{
    Assignment a(g.views.size());
    for (std::size_t v = 0; v < g.views.size(); ++v) {
        a[v].kind = g.views[v].colormap_kind;
        for (const auto& k : g.view_keys(static_cast<int>(v))) a[v].entries.push_back({k, mvtest::random_color(rng)});
    }
    return a;
}

} // namespace

TEST(Wcd, MinPairAndNotApplicable)
{
    const Colormap cm = make_colormap({Color(1, 0, 0), Color(0.9, 0, 0), Color(0, 0, 1)});
    EXPECT_DOUBLE_EQ(*wcd(cm), ciede2000(Color(1, 0, 0), Color(0.9, 0, 0)));
    EXPECT_FALSE(wcd(make_colormap({Color(1, 0, 0)})).has_value());
    EXPECT_FALSE(overall_wcd({make_colormap({Color(1, 0, 0)})}).has_value());
}

TEST(Prs, BruteForceAcrossCases)
{
    std::mt19937_64 rng(21);
    for (const auto& name : mvtest::case_names()) {
        const auto g = build_graph(mvtest::load_case(name));
        for (int t = 0; t < 5; ++t) {
            const auto a = random_assignment(rng, g);
            std::optional<double> best;
            for (std::size_t i = 0; i < a.size(); ++i)
                for (std::size_t j = i + 1; j < a.size(); ++j) {
                    const int gi = g.view_group[i], gj = g.view_group[j];
                    if (gi != gj && g.root_of(gi) == g.root_of(gj)) continue;
                    for (const auto& x : a[i].entries)
                        for (const auto& y : a[j].entries)
                            if (x.key != y.key) {
                                const double d = ciede2000(x.color, y.color);
                                best = best ? std::min(*best, d) : d;
                            }
                }
            const auto got = prs(a, g);
            ASSERT_EQ(got.has_value(), best.has_value()) << name;
            if (got) { EXPECT_DOUBLE_EQ(*got, *best) << name; }
        }
    }
}

TEST(Prs, HierarchyPairsAreExcluded)
{
    const auto g = build_graph(mvtest::load_case("case5_exports"));
    // only views of the same tree: every cross pair is either the same group or hierarchy related
    EXPECT_TRUE(hierarchy_related(g, g.view_index("bar_class"), g.view_index("bar_food")));
    EXPECT_TRUE(hierarchy_related(g, g.view_index("bar_machinery"), g.view_index("bar_food")));
    EXPECT_FALSE(hierarchy_related(g, g.view_index("bar_class"), g.view_index("pie_class")));
}

TEST(Hqs, HandExample)
{
    // parent hue 0; children at hue 0 and 120 (HSL)
    Colormap kids{ColormapKind::Discrete, {{"a", Color(1, 0, 0)}, {"b", Color(0, 1, 0)}}};
    const auto r = hqs(Color(1, 0, 0), kids);
    EXPECT_DOUBLE_EQ(r.hhd, 60.0);
    EXPECT_DOUBLE_EQ(r.child_wcd, ciede2000(Color(1, 0, 0), Color(0, 1, 0)));
    EXPECT_DOUBLE_EQ(r.hqs, r.child_wcd / 61.0);
    // a single child has no discriminability
    Colormap one{ColormapKind::Discrete, {{"a", Color(1, 0, 0)}}};
    EXPECT_EQ(hqs(Color(1, 0, 0), one).hqs, 0.0);
    EXPECT_THROW(hqs(Color(1, 0, 0), Colormap{}), Error);
}

TEST(Evaluate, BaselineHasZeroHqs)
{
    for (const auto& name : {"case2_pets", "case3_covid", "case5_exports"}) {
        const auto g = build_graph(mvtest::load_case(name));
        const auto e = evaluate_assignment(naive_baseline(g, default_palettes()), g);
        ASSERT_TRUE(e.hqs_mean.has_value()) << name;
        EXPECT_EQ(*e.hqs_mean, 0.0) << name;
        EXPECT_EQ(e.hqs.size(), g.links.size());
    }
    const auto g1 = build_graph(mvtest::load_case("case1_partial"));
    const auto e1 = evaluate_assignment(naive_baseline(g1, default_palettes()), g1);
    EXPECT_FALSE(e1.hqs_mean.has_value());
}

TEST(Evaluate, MissingEntityIsSchemaMismatch)
{
    const auto g = build_graph(mvtest::load_case("case1_partial"));
    auto a = naive_baseline(g, default_palettes());
    a[0].entries.pop_back();
    try {
        evaluate_assignment(a, g);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SchemaMismatch);
    }
}

TEST(Report, DeltasAndTable)
{
    const auto g = build_graph(mvtest::load_case("case3_covid"));
    std::mt19937_64 rng(2);
    const auto a = random_assignment(rng, g);
    const auto b = naive_baseline(g, default_palettes());
    const auto r = report({{"rand", a}, {"base", b}}, g);
    ASSERT_EQ(r.evals.size(), 2u);
    EXPECT_DOUBLE_EQ(*r.delta_wcd, *r.evals[1].overall_wcd - *r.evals[0].overall_wcd);
    EXPECT_DOUBLE_EQ(*r.delta_prs, *r.evals[1].prs - *r.evals[0].prs);
    const auto table = to_table(r);
    EXPECT_NE(table.find("rand"), std::string::npos);
    EXPECT_NE(table.find("delta"), std::string::npos);
    const auto j = to_json(r, g);
    EXPECT_EQ(j.at("assignments").size(), 2u);
    EXPECT_TRUE(j.contains("deltas"));
    EXPECT_THROW(report({}, g), Error);
}
