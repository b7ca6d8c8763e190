/*
 *  evaluator.hpp
 *  Quantitative scores for a finished assignment:
 *    WCD  worst-case discriminability (min within-view CIEDE2000)
 *    PRS  min CIEDE2000 between different entities across non-hierarchical views
 *    HQS  child discriminability over hue deviation from the parent
 *  Empty-set minima are reported as not applicable rather than as numbers.
 */

#pragma once

#include "mvcolor/colormap.hpp"
#include "mvcolor/mvgraph.hpp"

#include <json.hpp>

#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace mvcolor {

/// Min pairwise CIEDE2000; nullopt with fewer than two colors.
inline std::optional<double> wcd(const Colormap& cm)
{
    if (cm.size() < 2) return std::nullopt;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cm.size(); ++i)
        for (std::size_t j = i + 1; j < cm.size(); ++j)
            best = std::min(best, ciede2000(cm.entries[i].color, cm.entries[j].color));
    return best;
}

inline std::optional<double> overall_wcd(const Assignment& a)
{
    std::optional<double> best;
    for (const auto& cm : a)
        if (auto w = wcd(cm)) best = best ? std::min(*best, *w) : *w;
    return best;
}

/// Distinct groups inside one hierarchy tree (parent/child, siblings, cousins).
/// Their colors are derived from each other, so PRS leaves such pairs out.
inline bool hierarchy_related(const MvGraph& g, int view_a, int view_b)
{
    const int ga = g.view_group[view_a];
    const int gb = g.view_group[view_b];
    return ga != gb && g.root_of(ga) == g.root_of(gb);
}

inline std::optional<double> prs(const Assignment& a, const MvGraph& g)
{
    std::optional<double> best;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            if (hierarchy_related(g, static_cast<int>(i), static_cast<int>(j))) continue;
            for (const auto& x : a[i].entries)
                for (const auto& y : a[j].entries) {
                    if (x.key == y.key) continue;
                    const double d = ciede2000(x.color, y.color);
                    best = best ? std::min(*best, d) : d;
                }
        }
    return best;
}

struct HqsResult {
    double hqs = 0.0;
    double child_wcd = 0.0;
    double hhd = 0.0;
};

/// HQS = Child-WCD / (1 + HHD); Child-WCD is 0 for fewer than two children.
inline HqsResult hqs(const Color& parent, const Colormap& children)
{
    if (children.empty()) throw Error(ErrorCode::InvalidConfig, "hqs needs at least one child color");
    HqsResult r;
    const double hp = hsl_hue(parent);
    for (const auto& c : children.entries) r.hhd += circular_hue_distance(hp, hsl_hue(c.color));
    r.hhd /= static_cast<double>(children.size());
    r.child_wcd = wcd(children).value_or(0.0);
    r.hqs = r.child_wcd / (1.0 + r.hhd);
    return r;
}

struct HqsEntry {
    std::string parent_view;
    std::string parent_key;
    std::string child_view;
    HqsResult score;
};

struct AssignmentEval {
    std::string label;
    std::vector<std::optional<double>> view_wcd;
    std::optional<double> overall_wcd;
    std::optional<double> prs;
    std::vector<HqsEntry> hqs;
    std::optional<double> hqs_mean;
    std::vector<std::string> not_applicable;
};

struct EvalReport {
    std::vector<AssignmentEval> evals;
    // second minus first, when two assignments are compared
    std::optional<double> delta_wcd;
    std::optional<double> delta_prs;
    std::optional<double> delta_hqs;
};

inline void check_assignment(const Assignment& a, const MvGraph& g)
{
    if (a.size() != g.views.size()) throw Error(ErrorCode::SchemaMismatch, "assignment has the wrong number of views");
    for (std::size_t v = 0; v < g.views.size(); ++v)
        for (const auto& key : g.view_keys(static_cast<int>(v)))
            if (!a[v].find(key))
                throw Error(ErrorCode::SchemaMismatch, "view '" + g.views[v].id + "' misses entity '" + key + "'");
}

/// Colors of a group gathered over its views, first occurrence per key.
inline Colormap group_colormap(const Assignment& a, const MvGraph& g, int group)
{
    Colormap out;
    for (int v : g.groups[group].views) {
        out.kind = a[v].kind;
        for (const auto& e : a[v].entries)
            if (!out.find(e.key)) out.entries.push_back(e);
    }
    return out;
}

inline AssignmentEval evaluate_assignment(const Assignment& a, const MvGraph& g, std::string label = {})
{
    check_assignment(a, g);
    AssignmentEval e;
    e.label = std::move(label);
    for (std::size_t v = 0; v < a.size(); ++v) {
        e.view_wcd.push_back(wcd(a[v]));
        if (!e.view_wcd.back()) e.not_applicable.push_back("wcd:" + g.views[v].id);
    }
    e.overall_wcd = overall_wcd(a);
    e.prs = prs(a, g);
    if (!e.prs) e.not_applicable.push_back("prs");
    double sum = 0.0;
    for (const auto& link : g.links) {
        const auto parent_map = group_colormap(a, g, link.parent_group);
        const Color* pc = parent_map.find(link.parent_key);
        if (!pc) throw Error(ErrorCode::SchemaMismatch, "parent entity '" + link.parent_key + "' missing");
        const auto children = group_colormap(a, g, link.child_group);
        HqsEntry h{g.views[g.groups[link.parent_group].views.front()].id, link.parent_key,
                   g.views[g.groups[link.child_group].views.front()].id, hqs(*pc, children)};
        sum += h.score.hqs;
        e.hqs.push_back(std::move(h));
    }
    if (!e.hqs.empty()) e.hqs_mean = sum / static_cast<double>(e.hqs.size());
    return e;
}

/// Scores for one or two assignments, with deltas (second minus first) for two.
inline EvalReport report(const std::vector<std::pair<std::string, Assignment>>& assignments, const MvGraph& g)
{
    if (assignments.empty() || assignments.size() > 2)
        throw Error(ErrorCode::InvalidConfig, "report takes one or two assignments");
    EvalReport r;
    for (const auto& [label, a] : assignments) r.evals.push_back(evaluate_assignment(a, g, label));
    if (r.evals.size() == 2) {
        auto delta = [](const std::optional<double>& x, const std::optional<double>& y) -> std::optional<double> {
            if (x && y) return *y - *x;
            return std::nullopt;
        };
        r.delta_wcd = delta(r.evals[0].overall_wcd, r.evals[1].overall_wcd);
        r.delta_prs = delta(r.evals[0].prs, r.evals[1].prs);
        r.delta_hqs = delta(r.evals[0].hqs_mean, r.evals[1].hqs_mean);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::ordered_json optional_json(const std::optional<double>& v)
{
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

inline nlohmann::ordered_json to_json(const AssignmentEval& e, const MvGraph& g)
{
    nlohmann::ordered_json j;
    if (!e.label.empty()) j["label"] = e.label;
    auto& per = j["view_wcd"] = nlohmann::ordered_json::object();
    for (std::size_t v = 0; v < e.view_wcd.size(); ++v) per[g.views[v].id] = optional_json(e.view_wcd[v]);
    j["overall_wcd"] = optional_json(e.overall_wcd);
    j["prs"] = optional_json(e.prs);
    auto& hq = j["hqs"] = nlohmann::ordered_json::array();
    for (const auto& h : e.hqs)
        hq.push_back({{"parent_view", h.parent_view},
                      {"parent_key", h.parent_key},
                      {"child_view", h.child_view},
                      {"hqs", h.score.hqs},
                      {"child_wcd", h.score.child_wcd},
                      {"hhd", h.score.hhd}});
    j["hqs_mean"] = optional_json(e.hqs_mean);
    j["not_applicable"] = e.not_applicable;
    return j;
}

inline nlohmann::ordered_json to_json(const EvalReport& r, const MvGraph& g)
{
    nlohmann::ordered_json j;
    auto& arr = j["assignments"] = nlohmann::ordered_json::array();
    for (const auto& e : r.evals) arr.push_back(to_json(e, g));
    if (r.evals.size() == 2)
        j["deltas"] = {{"overall_wcd", optional_json(r.delta_wcd)},
                       {"prs", optional_json(r.delta_prs)},
                       {"hqs_mean", optional_json(r.delta_hqs)}};
    return j;
}

/// Aligned plain-text table.
inline std::string to_table(const EvalReport& r)
{
    auto cell = [](const std::optional<double>& v) {
        if (!v) return std::string("n/a");
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", *v);
        return std::string(buf);
    };
    std::ostringstream os;
    char line[160];
    const bool two = r.evals.size() == 2;
    auto label = [&](std::size_t i) { return r.evals[i].label.empty() ? "assignment " + std::to_string(i + 1) : r.evals[i].label; };
    std::snprintf(line, sizeof line, "%-12s %14s", "metric", label(0).substr(0, 14).c_str());
    os << line;
    if (two) {
        std::snprintf(line, sizeof line, " %14s %10s", label(1).substr(0, 14).c_str(), "delta");
        os << line;
    }
    os << '\n';
    auto row = [&](const char* name, auto get, const std::optional<double>& delta) {
        std::snprintf(line, sizeof line, "%-12s %14s", name, cell(get(r.evals[0])).c_str());
        os << line;
        if (two) {
            std::snprintf(line, sizeof line, " %14s %10s", cell(get(r.evals[1])).c_str(), cell(delta).c_str());
            os << line;
        }
        os << '\n';
    };
    row("WCD", [](const AssignmentEval& e) { return e.overall_wcd; }, r.delta_wcd);
    row("PRS", [](const AssignmentEval& e) { return e.prs; }, r.delta_prs);
    row("HQS (mean)", [](const AssignmentEval& e) { return e.hqs_mean; }, r.delta_hqs);
    return os.str();
}

} // namespace mvcolor
