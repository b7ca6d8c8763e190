/*
 *  inherit.hpp
 *  Derivation of hierarchy-child colormaps from a parent color.
 *
 *  Sequential children get a single-hue HCL ramp. Categorical children are
 *  tree colors: each parent owns a hue interval centred on its own hue and
 *  its children are spread across it.
 */

#pragma once

#include "mvcolor/color.hpp"
#include "mvcolor/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace mvcolor {

/// Derivation parameters a hierarchy child group carries in the genome.
struct ChildParams {
    double hue_spread = 30.0;       // degrees
    double luminance_offset = 8.0;  // alternating +/- offset between siblings
    double chroma_offset = 0.0;

    friend bool operator==(const ChildParams&, const ChildParams&) = default;
};

inline constexpr double kMinHueSpread = 5.0;
inline constexpr double kMaxHueSpread = 120.0;

struct DerivedColors {
    std::vector<Color> colors;
    bool gamut_mapped = false;
    bool achromatic_parent = false;
};

/// k-sample ramp at the parent's hue: luminance 92 -> max(20, L - 20),
/// chroma 15 -> min(90, C + 20).
inline DerivedColors inherit_sequential(const Color& parent, int k)
{
    if (k < 2) throw Error(ErrorCode::InvalidConfig, "sequential ramp needs at least 2 samples");
    const Hcl p = srgb_to_hcl(parent);
    DerivedColors out;
    out.achromatic_parent = p.c < kAchromaticChroma;
    const double l_end = std::max(20.0, p.l - 20.0);
    const double c_end = out.achromatic_parent ? 0.0 : std::min(90.0, p.c + 20.0);
    const double c_start = out.achromatic_parent ? 0.0 : 15.0;
    const double hue = out.achromatic_parent ? 0.0 : p.h;
    for (int i = 0; i < k; ++i) {
        const double t = static_cast<double>(i) / (k - 1);
        const auto r = hcl_to_srgb(hue, c_start + t * (c_end - c_start), 92.0 + t * (l_end - 92.0));
        out.gamut_mapped = out.gamut_mapped || r.out_of_gamut;
        out.colors.push_back(r.color);
    }
    return out;
}

/// Reorder so that each next color is the one farthest (CIEDE2000) from the
/// previous, starting from the first.
inline std::vector<Color> reorder_farthest(std::vector<Color> colors)
{
    if (colors.size() < 3) return colors;
    std::vector<Lab> labs;
    for (const auto& c : colors) labs.push_back(srgb_to_lab(c));
    std::vector<bool> used(colors.size(), false);
    std::vector<Color> out{colors[0]};
    used[0] = true;
    std::size_t last = 0;
    for (std::size_t step = 1; step < colors.size(); ++step) {
        std::size_t best = 0;
        double best_d = -1.0;
        for (std::size_t j = 0; j < colors.size(); ++j) {
            if (used[j]) continue;
            const double d = ciede2000(labs[last], labs[j]);
            if (d > best_d) {
                best_d = d;
                best = j;
            }
        }
        used[best] = true;
        out.push_back(colors[best]);
        last = best;
    }
    return out;
}

struct TreeParent {
    Color color;
    int child_count = 1;
    ChildParams params;
};

struct TreeColors {
    std::vector<std::vector<Color>> children; // per parent, reordered
    std::vector<double> spreads;              // effective spread after shrinking
    bool gamut_mapped = false;
};

/// Tree colors for several parents at once. Spreads are shrunk by a common
/// factor until the parents' hue intervals are pairwise disjoint.
inline TreeColors inherit_categorical(const std::vector<TreeParent>& parents)
{
    const std::size_t n = parents.size();
    std::vector<Hcl> hcl(n);
    std::vector<double> width(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = parents[i];
        if (p.child_count < 1) throw Error(ErrorCode::InvalidConfig, "child count must be >= 1");
        if (!(p.params.hue_spread > 0.0 && p.params.hue_spread <= kMaxHueSpread))
            throw Error(ErrorCode::InvalidConfig, "hue spread must be in (0, 120]");
        hcl[i] = srgb_to_hcl(p.color);
        // a lone child sits on the parent hue and occupies no interval
        width[i] = p.child_count >= 2 ? p.params.hue_spread : 0.0;
    }

    double factor = 1.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double w = width[i] + width[j];
            if (w <= 0.0) continue;
            const double d = circular_hue_distance(hcl[i].h, hcl[j].h);
            const double limit = 2.0 * d / w;
            if (limit <= 1.0) factor = std::min(factor, limit * 0.999);
        }

    TreeColors out;
    for (std::size_t i = 0; i < n; ++i) {
        const double spread = width[i] * factor;
        if (width[i] > 0.0 && spread < kMinHueSpread)
            throw Error(ErrorCode::ParentsTooClose, "sibling hue ranges would need a spread below 5 degrees");
        out.spreads.push_back(spread);

        const auto& p = parents[i];
        const int k = p.child_count;
        std::vector<Color> kids;
        for (int c = 0; c < k; ++c) {
            const double hue = k == 1 ? hcl[i].h : hcl[i].h - spread / 2.0 + spread * c / (k - 1);
            const double dl = k == 1 ? 0.0 : (c % 2 == 0 ? p.params.luminance_offset : -p.params.luminance_offset);
            const auto r = hcl_to_srgb(detail::wrap_degrees(hue), hcl[i].c + p.params.chroma_offset,
                                       std::clamp(hcl[i].l + dl, 0.0, 100.0));
            out.gamut_mapped = out.gamut_mapped || r.out_of_gamut;
            kids.push_back(r.color);
        }
        out.children.push_back(reorder_farthest(std::move(kids)));
    }
    return out;
}

/// Single-spread convenience form.
inline TreeColors inherit_categorical(const std::vector<Color>& parents, const std::vector<int>& child_counts,
                                      double spread)
{
    if (parents.size() != child_counts.size())
        throw Error(ErrorCode::InvalidConfig, "one child count per parent required");
    std::vector<TreeParent> tp;
    for (std::size_t i = 0; i < parents.size(); ++i) tp.push_back({parents[i], child_counts[i], {spread, 8.0, 0.0}});
    return inherit_categorical(tp);
}

} // namespace mvcolor
