/*
 *  mvgraph.hpp
 *  Multi-view specification and the derived graph of views, data relations,
 *  color groups and hierarchy links.
 */

#pragma once

#include "mvcolor/config.hpp"
#include "mvcolor/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mvcolor {

enum class FieldKind { Categorical, Sequential };
enum class ColormapKind { Discrete, Continuous };

struct BBox {
    double x = 0.0;
    double y = 0.0;
    double width = 1.0;
    double height = 1.0;
};

/// Optional explicit pointer from a child view into one entity of a parent view.
struct ParentPath {
    std::string view;
    std::string key;
};

struct ViewSpec {
    std::string id;
    BBox bbox;
    std::string chart_kind;
    std::string color_field;
    FieldKind field_kind = FieldKind::Categorical;
    std::vector<std::string> categories;   // categorical domain, in order
    std::pair<double, double> range{0, 1}; // sequential domain
    ColormapKind colormap_kind = ColormapKind::Discrete;
    std::optional<nlohmann::json> embedded_chart_doc;
    std::optional<ParentPath> parent_path;

    bool sequential() const noexcept { return field_kind == FieldKind::Sequential; }
};

struct Relation {
    enum class Kind { FullRedundancy, PartialRedundancy, NonRedundancy, Hierarchy };

    Kind kind = Kind::NonRedundancy;
    // Hierarchy only: direction and the parent entity the child refines.
    std::string parent_view;
    std::string child_view;
    std::string parent_key;

    bool redundant() const noexcept
    {
        return kind == Kind::FullRedundancy || kind == Kind::PartialRedundancy;
    }

    friend bool operator==(const Relation&, const Relation&) = default;
};

inline std::string to_string(Relation::Kind k)
{
    switch (k) {
    case Relation::Kind::FullRedundancy: return "full";
    case Relation::Kind::PartialRedundancy: return "partial";
    case Relation::Kind::NonRedundancy: return "none";
    case Relation::Kind::Hierarchy: return "hierarchy";
    }
    return "none";
}

struct DeclaredRelation {
    std::string a;
    std::string b;
    Relation::Kind kind = Relation::Kind::NonRedundancy;
    std::optional<std::string> parent_key; // hierarchy: entity of `a` refined by `b`
};

struct Canvas {
    double width = 1.0;
    double height = 1.0;
};

struct MvSpec {
    std::string case_id = "default";
    Canvas canvas;
    std::vector<ViewSpec> views;
    std::vector<DeclaredRelation> relations;
    Weights weights;
    GaConfig ga;
    int samples = 5;               // colors sampled from continuous colormaps
    double adjacency_ratio = 0.05; // bbox expansion as a fraction of the canvas diagonal
};

struct DataEdge {
    int a = 0;
    int b = 0;
    Relation relation;
};

struct ColorGroup {
    int id = 0;
    std::vector<int> views;            // view indices, ascending
    bool sequential = false;           // ramp of `samples` colors instead of entity colors
    std::vector<std::string> entities; // categorical: union of member domains in first-seen order
    std::string field;
    std::optional<int> parent_link; // index into MvGraph::links when this group is a hierarchy child
};

struct HierarchyLink {
    int parent_group = 0;
    std::string parent_key;
    int child_group = 0;

    friend bool operator==(const HierarchyLink&, const HierarchyLink&) = default;
};

struct MvGraph {
    std::vector<ViewSpec> views;
    std::vector<DataEdge> data_edges;
    std::vector<std::pair<int, int>> adjacency_edges;
    std::vector<ColorGroup> groups;
    std::vector<int> view_group;
    std::vector<HierarchyLink> links;
    std::vector<std::vector<int>> hop_distance; // -1 when disconnected
    std::vector<int> order;                     // coloring order over groups
    int samples = 5;
    std::vector<std::string> warnings;

    int view_index(const std::string& id) const
    {
        for (std::size_t i = 0; i < views.size(); ++i)
            if (views[i].id == id) return static_cast<int>(i);
        return -1;
    }

    bool is_root(int group) const { return !groups[group].parent_link.has_value(); }

    /// Entity keys a view's colormap exposes, in order.
    std::vector<std::string> view_keys(int view) const
    {
        const auto& v = views[view];
        if (!v.sequential()) return v.categories;
        std::vector<std::string> keys;
        for (int i = 0; i < samples; ++i) keys.push_back(v.color_field + "@" + std::to_string(i));
        return keys;
    }

    /// Root group at the top of a group's hierarchy chain.
    int root_of(int group) const
    {
        while (groups[group].parent_link) group = links[*groups[group].parent_link].parent_group;
        return group;
    }

    /// True when `ancestor` lies on the parent chain of `group`.
    bool is_ancestor(int ancestor, int group) const
    {
        while (groups[group].parent_link) {
            group = links[*groups[group].parent_link].parent_group;
            if (group == ancestor) return true;
        }
        return false;
    }

    /// Views in different groups that are children of the same parent group.
    bool hierarchy_siblings(int view_a, int view_b) const
    {
        const auto& ga = groups[view_group[view_a]];
        const auto& gb = groups[view_group[view_b]];
        if (ga.id == gb.id || !ga.parent_link || !gb.parent_link) return false;
        return links[*ga.parent_link].parent_group == links[*gb.parent_link].parent_group;
    }

    int max_hop() const
    {
        int m = 0;
        for (const auto& row : hop_distance)
            for (int d : row) m = std::max(m, d);
        return m;
    }
};

namespace detail {

inline bool hierarchy_pattern(const ViewSpec& parent, const ViewSpec& child, std::string* key)
{
    if (child.parent_path && child.parent_path->view == parent.id) {
        if (key) *key = child.parent_path->key;
        return true;
    }
    if (parent.sequential()) return false;
    if (std::find(parent.categories.begin(), parent.categories.end(), child.color_field)
        != parent.categories.end()) {
        if (key) *key = child.color_field;
        return true;
    }
    return false;
}

inline Relation::Kind redundancy_pattern(const ViewSpec& a, const ViewSpec& b)
{
    using K = Relation::Kind;
    if (a.sequential() || b.sequential()) {
        if (a.sequential() && b.sequential() && a.color_field == b.color_field) return K::FullRedundancy;
        return K::NonRedundancy;
    }
    const std::set<std::string> sa(a.categories.begin(), a.categories.end());
    const std::set<std::string> sb(b.categories.begin(), b.categories.end());
    if (sa == sb) return K::FullRedundancy;
    const bool overlap = std::any_of(sa.begin(), sa.end(), [&](const auto& k) { return sb.count(k) > 0; });
    return overlap ? K::PartialRedundancy : K::NonRedundancy;
}

} // namespace detail

/// Data-data relation between two views. A declaration always wins; otherwise
/// the relation is inferred from field names and domains.
inline Relation infer_relation(const ViewSpec& a, const ViewSpec& b,
                               const std::optional<DeclaredRelation>& declared = std::nullopt)
{
    using K = Relation::Kind;
    if (declared) {
        Relation r{declared->kind, {}, {}, {}};
        if (declared->kind == K::Hierarchy) {
            const bool forward = declared->a == a.id;
            const ViewSpec& parent = forward ? a : b;
            const ViewSpec& child = forward ? b : a;
            r.parent_view = parent.id;
            r.child_view = child.id;
            if (declared->parent_key) {
                r.parent_key = *declared->parent_key;
            } else if (!detail::hierarchy_pattern(parent, child, &r.parent_key)) {
                throw Error(ErrorCode::InvalidSpec,
                            "hierarchy " + parent.id + " -> " + child.id + " needs a parent key");
            }
        }
        return r;
    }

    std::string key_ab;
    std::string key_ba;
    const bool ab = detail::hierarchy_pattern(a, b, &key_ab);
    const bool ba = detail::hierarchy_pattern(b, a, &key_ba);
    const K redundancy = detail::redundancy_pattern(a, b);
    if ((ab || ba) && (redundancy != K::NonRedundancy || (ab && ba)))
        throw Error(ErrorCode::AmbiguousRelation,
                    "views '" + a.id + "' and '" + b.id + "' match several relation patterns; declare one");
    if (ab) return {K::Hierarchy, a.id, b.id, key_ab};
    if (ba) return {K::Hierarchy, b.id, a.id, key_ba};
    return {redundancy, {}, {}, {}};
}

/// Facing adjacency: boxes expanded by `margin` intersect and the original
/// boxes overlap along at least one axis (diagonal neighbours are not adjacent).
inline bool views_adjacent(const BBox& p, const BBox& q, double margin)
{
    auto overlap = [](double a0, double a1, double b0, double b1) { return std::min(a1, b1) - std::max(a0, b0); };
    const double ox = overlap(p.x, p.x + p.width, q.x, q.x + q.width);
    const double oy = overlap(p.y, p.y + p.height, q.y, q.y + q.height);
    const double ex = overlap(p.x - margin, p.x + p.width + margin, q.x - margin, q.x + q.width + margin);
    const double ey = overlap(p.y - margin, p.y + p.height + margin, q.y - margin, q.y + q.height + margin);
    return ex >= 0.0 && ey >= 0.0 && (ox > 0.0 || oy > 0.0);
}

/// Topological order over groups, smallest id first among ready groups.
inline std::vector<int> topological_group_order(int n_groups, const std::vector<HierarchyLink>& links)
{
    std::vector<std::vector<int>> children(n_groups);
    std::vector<int> indegree(n_groups, 0);
    for (const auto& l : links) {
        children[l.parent_group].push_back(l.child_group);
        ++indegree[l.child_group];
    }
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (int g = 0; g < n_groups; ++g)
        if (indegree[g] == 0) ready.push(g);
    std::vector<int> order;
    while (!ready.empty()) {
        const int g = ready.top();
        ready.pop();
        order.push_back(g);
        for (int c : children[g])
            if (--indegree[c] == 0) ready.push(c);
    }
    if (static_cast<int>(order.size()) != n_groups)
        throw Error(ErrorCode::CyclicHierarchy, "hierarchy links contain a cycle");
    return order;
}

inline std::vector<int> coloring_order(const MvGraph& g)
{
    return topological_group_order(static_cast<int>(g.groups.size()), g.links);
}

inline MvGraph build_graph(const MvSpec& spec)
{
    if (spec.views.empty()) throw Error(ErrorCode::InvalidSpec, "spec has no views");
    if (spec.samples < 2) throw Error(ErrorCode::InvalidSpec, "samples must be >= 2");

    MvGraph g;
    g.views = spec.views;
    g.samples = spec.samples;
    const int n = static_cast<int>(g.views.size());

    std::unordered_map<std::string, int> index;
    for (int i = 0; i < n; ++i) {
        const auto& v = g.views[i];
        if (!index.emplace(v.id, i).second) throw Error(ErrorCode::InvalidSpec, "duplicate view id '" + v.id + "'");
        if (!(v.bbox.width > 0.0 && v.bbox.height > 0.0))
            throw Error(ErrorCode::InvalidSpec, "view '" + v.id + "' has an empty bounding box");
        if (v.colormap_kind == ColormapKind::Continuous && !v.sequential())
            throw Error(ErrorCode::InvalidSpec, "view '" + v.id + "': continuous colormap needs a sequential field");
        if (!v.sequential()) {
            if (v.categories.empty()) throw Error(ErrorCode::InvalidSpec, "view '" + v.id + "' has an empty domain");
            std::set<std::string> seen(v.categories.begin(), v.categories.end());
            if (seen.size() != v.categories.size())
                throw Error(ErrorCode::InvalidSpec, "view '" + v.id + "' has duplicate domain keys");
        } else if (!(v.range.first <= v.range.second)) {
            throw Error(ErrorCode::InvalidSpec, "view '" + v.id + "' has an inverted range");
        }
    }
    for (const auto& d : spec.relations) {
        if (!index.count(d.a) || !index.count(d.b) || d.a == d.b)
            throw Error(ErrorCode::InvalidSpec, "relation refers to unknown views '" + d.a + "', '" + d.b + "'");
    }

    // pairwise data relations
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            std::optional<DeclaredRelation> declared;
            for (const auto& d : spec.relations)
                if ((d.a == g.views[i].id && d.b == g.views[j].id) || (d.a == g.views[j].id && d.b == g.views[i].id))
                    declared = d;
            g.data_edges.push_back({i, j, infer_relation(g.views[i], g.views[j], declared)});
        }
    }

    // adjacency and hop distances
    const double diag = std::hypot(spec.canvas.width, spec.canvas.height);
    const double margin = spec.adjacency_ratio * diag;
    std::vector<std::vector<int>> nbr(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (views_adjacent(g.views[i].bbox, g.views[j].bbox, margin)) {
                g.adjacency_edges.emplace_back(i, j);
                nbr[i].push_back(j);
                nbr[j].push_back(i);
            }
    g.hop_distance.assign(n, std::vector<int>(n, -1));
    for (int s = 0; s < n; ++s) {
        std::queue<int> q;
        g.hop_distance[s][s] = 0;
        q.push(s);
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            for (int v : nbr[u])
                if (g.hop_distance[s][v] < 0) {
                    g.hop_distance[s][v] = g.hop_distance[s][u] + 1;
                    q.push(v);
                }
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (g.hop_distance[i][j] < 0)
                g.warnings.push_back("views '" + g.views[i].id + "' and '" + g.views[j].id +
                                     "' are not connected by adjacency");

    // color groups: union of redundancy edges
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& e : g.data_edges)
        if (e.relation.redundant()) {
            const int ra = find(e.a);
            const int rb = find(e.b);
            if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
        }
    g.view_group.assign(n, -1);
    for (int i = 0; i < n; ++i) {
        const int r = find(i);
        if (g.view_group[r] < 0) {
            g.view_group[r] = static_cast<int>(g.groups.size());
            ColorGroup cg;
            cg.id = g.view_group[r];
            cg.sequential = g.views[i].sequential();
            cg.field = g.views[i].color_field;
            g.groups.push_back(cg);
        }
        g.view_group[i] = g.view_group[r];
        auto& cg = g.groups[g.view_group[i]];
        cg.views.push_back(i);
        if (cg.sequential != g.views[i].sequential())
            throw Error(ErrorCode::InvalidSpec, "group mixes categorical and sequential views");
        for (const auto& k : g.views[i].categories)
            if (std::find(cg.entities.begin(), cg.entities.end(), k) == cg.entities.end()) cg.entities.push_back(k);
    }

    // hierarchy links over groups
    for (const auto& e : g.data_edges) {
        if (e.relation.kind != Relation::Kind::Hierarchy) continue;
        const int pg = g.view_group[index.at(e.relation.parent_view)];
        const int cg = g.view_group[index.at(e.relation.child_view)];
        if (pg == cg) throw Error(ErrorCode::CyclicHierarchy, "hierarchy inside one color group");
        if (g.groups[pg].sequential)
            throw Error(ErrorCode::InvalidSpec, "hierarchy parent '" + e.relation.parent_view + "' is sequential");
        const auto& ents = g.groups[pg].entities;
        if (std::find(ents.begin(), ents.end(), e.relation.parent_key) == ents.end())
            throw Error(ErrorCode::InvalidSpec, "hierarchy key '" + e.relation.parent_key + "' not in parent domain");
        HierarchyLink link{pg, e.relation.parent_key, cg};
        if (std::find(g.links.begin(), g.links.end(), link) != g.links.end()) continue;
        if (g.groups[cg].parent_link)
            throw Error(ErrorCode::MultipleParents,
                        "color group of '" + e.relation.child_view + "' has more than one hierarchy parent");
        g.groups[cg].parent_link = static_cast<int>(g.links.size());
        g.links.push_back(link);
    }
    g.order = topological_group_order(static_cast<int>(g.groups.size()), g.links);
    return g;
}

/// Spatial proximity weight 1 / hop distance. Disconnected pairs fall back to
/// 1 / (max hop + 1) and record a warning when `warnings` is given.
inline double spatial_proximity(const MvGraph& g, int i, int j, std::vector<std::string>* warnings = nullptr)
{
    const int d = g.hop_distance.at(i).at(j);
    if (d > 0) return 1.0 / d;
    if (d == 0) throw Error(ErrorCode::InvalidSpec, "spatial proximity of a view with itself");
    if (warnings)
        warnings->push_back("views '" + g.views[i].id + "' and '" + g.views[j].id + "' are not connected");
    return 1.0 / (g.max_hop() + 1);
}

} // namespace mvcolor
