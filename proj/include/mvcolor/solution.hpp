/*
 *  solution.hpp
 *  Genome of the optimizer and its decoding into per-view colormaps.
 *
 *  Only root (level-1) groups store colors: one color per entity for a
 *  categorical group, a single anchor color for a sequential one. Every
 *  hierarchy child is re-derived from its parent entity's color and its
 *  ChildParams, so children can never drift from their parent.
 */

#pragma once

#include "mvcolor/colormap.hpp"
#include "mvcolor/inherit.hpp"
#include "mvcolor/mvgraph.hpp"

#include <map>
#include <string>
#include <vector>

namespace mvcolor {

struct Solution {
    std::vector<std::vector<Color>> roots;  // per group; empty for child groups
    std::vector<ChildParams> child_params;  // per group; used by child groups only

    friend bool operator==(const Solution&, const Solution&) = default;
};

struct Decoded {
    bool ok = false;
    std::string failure;
    std::vector<std::vector<Color>> group_colors; // per group, entity order (or ramp)
    Assignment views;
    std::vector<std::string> warnings;
};

/// Number of colors a root group stores in the genome.
inline std::size_t root_color_count(const MvGraph& g, int group)
{
    return g.groups[group].sequential ? 1 : g.groups[group].entities.size();
}

inline int entity_index(const ColorGroup& group, const std::string& key)
{
    for (std::size_t i = 0; i < group.entities.size(); ++i)
        if (group.entities[i] == key) return static_cast<int>(i);
    return -1;
}

namespace detail {

/// Derive all child groups hanging off `parent`, writing into group_colors.
inline void derive_children(const MvGraph& g, const Solution& sol, int parent, Decoded& out)
{
    const auto& pg = g.groups[parent];
    // categorical children are grouped per parent entity so siblings share one tree layout
    std::vector<std::string> keys;
    std::map<std::string, std::vector<int>> cat_children;
    for (const auto& link : g.links) {
        if (link.parent_group != parent) continue;
        const int pi = entity_index(pg, link.parent_key);
        const Color pc = out.group_colors[parent][pi];
        const auto& cg = g.groups[link.child_group];
        if (cg.sequential) {
            auto ramp = inherit_sequential(pc, g.samples);
            if (ramp.gamut_mapped) out.warnings.push_back("gamut-mapped ramp for group " + std::to_string(cg.id));
            if (ramp.achromatic_parent)
                out.warnings.push_back("achromatic parent '" + link.parent_key + "' gives a gray ramp");
            out.group_colors[link.child_group] = std::move(ramp.colors);
        } else {
            if (!cat_children.count(link.parent_key)) keys.push_back(link.parent_key);
            cat_children[link.parent_key].push_back(link.child_group);
        }
    }
    if (keys.empty()) return;

    std::vector<TreeParent> parents;
    for (const auto& key : keys) {
        const auto& kids = cat_children[key];
        int count = 0;
        for (int c : kids) count += static_cast<int>(g.groups[c].entities.size());
        parents.push_back({out.group_colors[parent][entity_index(pg, key)], count, sol.child_params[kids.front()]});
    }
    auto tree = inherit_categorical(parents);
    if (tree.gamut_mapped) out.warnings.push_back("gamut-mapped tree colors under group " + std::to_string(parent));
    for (std::size_t i = 0; i < keys.size(); ++i) {
        std::size_t pos = 0;
        for (int c : cat_children[keys[i]]) {
            const auto n = g.groups[c].entities.size();
            out.group_colors[c].assign(tree.children[i].begin() + pos, tree.children[i].begin() + pos + n);
            pos += n;
        }
    }
}

} // namespace detail

/// Per-view colormaps from group colors.
inline Assignment assignment_from_groups(const MvGraph& g, const std::vector<std::vector<Color>>& group_colors)
{
    Assignment views(g.views.size());
    for (std::size_t v = 0; v < g.views.size(); ++v) {
        const int gi = g.view_group[v];
        const auto& grp = g.groups[gi];
        const auto& view = g.views[v];
        Colormap cm{view.colormap_kind, {}};
        if (grp.sequential) {
            const auto keys = g.view_keys(static_cast<int>(v));
            for (std::size_t i = 0; i < keys.size(); ++i) cm.entries.push_back({keys[i], group_colors[gi][i]});
        } else {
            for (const auto& key : view.categories)
                cm.entries.push_back({key, group_colors[gi][entity_index(grp, key)]});
        }
        views[v] = std::move(cm);
    }
    return views;
}

inline Decoded decode(const Solution& sol, const MvGraph& g)
{
    Decoded out;
    out.group_colors.resize(g.groups.size());
    try {
        for (int gi : g.order) {
            if (g.is_root(gi)) {
                if (sol.roots[gi].size() != root_color_count(g, gi))
                    throw Error(ErrorCode::SchemaMismatch, "genome has wrong color count for group " + std::to_string(gi));
                if (g.groups[gi].sequential) {
                    auto ramp = inherit_sequential(sol.roots[gi][0], g.samples);
                    if (ramp.gamut_mapped) out.warnings.push_back("gamut-mapped ramp for group " + std::to_string(gi));
                    out.group_colors[gi] = std::move(ramp.colors);
                } else {
                    out.group_colors[gi] = sol.roots[gi];
                }
            }
            detail::derive_children(g, sol, gi, out);
        }
    } catch (const Error& e) {
        out.ok = false;
        out.failure = e.what();
        return out;
    }
    out.views = assignment_from_groups(g, out.group_colors);
    out.ok = true;
    return out;
}

} // namespace mvcolor
