/*
 *  result_io.hpp
 *  Result documents, assignment documents and chart-document patching.
 *
 *  Assignment document:   { "views": { "<view>": { "<entity>": "#rrggbb" } } }
 *  Result document:       case echo, front members (views, cost, eval, genome),
 *                         per-generation history and the selected index.
 *  A result document is also accepted wherever an assignment is expected; the
 *  member is chosen by index (default: its "selected" field).
 */

#pragma once

#include "mvcolor/evaluator.hpp"
#include "mvcolor/optimizer.hpp"
#include "mvcolor/spec_io.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace mvcolor {

using ojson = nlohmann::ordered_json;

inline ojson finite_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

// ---------------------------------------------------------------------------
// Assignments

inline ojson assignment_to_json(const Assignment& a, const MvGraph& g)
{
    ojson views = ojson::object();
    for (std::size_t v = 0; v < a.size(); ++v) {
        ojson m = ojson::object();
        for (const auto& e : a[v].entries) m[e.key] = to_hex(e.color);
        views[g.views[v].id] = std::move(m);
    }
    return views;
}

namespace detail {

inline Assignment parse_views_object(const nlohmann::json& views, const MvGraph& g)
{
    if (!views.is_object()) throw Error(ErrorCode::SchemaMismatch, "\"views\" must be an object");
    for (auto it = views.begin(); it != views.end(); ++it)
        if (g.view_index(it.key()) < 0) throw Error(ErrorCode::SchemaMismatch, "unknown view '" + it.key() + "'");
    Assignment a(g.views.size());
    for (std::size_t v = 0; v < g.views.size(); ++v) {
        const auto& id = g.views[v].id;
        if (!views.contains(id)) throw Error(ErrorCode::SchemaMismatch, "assignment misses view '" + id + "'");
        const auto& m = views.at(id);
        if (!m.is_object()) throw Error(ErrorCode::SchemaMismatch, "view '" + id + "' must map entities to colors");
        a[v].kind = g.views[v].colormap_kind;
        for (const auto& key : g.view_keys(static_cast<int>(v))) {
            if (!m.contains(key) || !m.at(key).is_string())
                throw Error(ErrorCode::SchemaMismatch, "view '" + id + "' misses entity '" + key + "'");
            a[v].entries.push_back({key, from_hex(m.at(key).get<std::string>())});
        }
    }
    return a;
}

} // namespace detail

/// Assignment from an assignment document or a result document.
inline Assignment parse_assignment(const nlohmann::json& doc, const MvGraph& g, std::optional<int> pick = std::nullopt)
{
    if (!doc.is_object()) throw Error(ErrorCode::SchemaMismatch, "assignment document must be an object");
    if (doc.contains("front")) {
        const auto& front = doc.at("front");
        if (!front.is_array() || front.empty()) throw Error(ErrorCode::SchemaMismatch, "result document has no front");
        int idx = pick.value_or(0);
        if (!pick && doc.contains("selected") && doc.at("selected").is_number_integer()) idx = doc.at("selected").get<int>();
        if (idx < 0 || idx >= static_cast<int>(front.size()))
            throw Error(ErrorCode::SchemaMismatch, "front index " + std::to_string(idx) + " out of range");
        const auto& member = front.at(static_cast<std::size_t>(idx));
        if (!member.contains("views")) throw Error(ErrorCode::SchemaMismatch, "front member has no views");
        return detail::parse_views_object(member.at("views"), g);
    }
    if (!doc.contains("views")) throw Error(ErrorCode::SchemaMismatch, "document has neither \"views\" nor \"front\"");
    return detail::parse_views_object(doc.at("views"), g);
}

inline Assignment load_assignment(const std::filesystem::path& path, const MvGraph& g, std::optional<int> pick = std::nullopt)
{
    return parse_assignment(read_json_file(path), g, pick);
}

// ---------------------------------------------------------------------------
// Members and result documents

inline ojson cost_to_json(const CostVector& c)
{
    ojson j;
    j["rejected"] = c.rejected;
    j["c_sv"] = finite_or_null(c.c_sv);
    j["c_mv"] = finite_or_null(c.c_mv);
    j["total"] = finite_or_null(c.total());
    ojson norm = ojson::object();
    ojson pen = ojson::object();
    for (std::size_t k = 0; k < kAllMetrics.size(); ++k) {
        norm[metric_name(kAllMetrics[k])] = finite_or_null(c.normalized[k]);
        pen[metric_name(kAllMetrics[k])] = finite_or_null(c.penalized[k]);
    }
    j["normalized"] = std::move(norm);
    j["penalized"] = std::move(pen);
    ojson terms = ojson::array();
    for (const auto& t : c.terms) {
        if (!t.raw) continue;
        terms.push_back({{"key", t.key},
                         {"raw", finite_or_null(*t.raw)},
                         {"weakest", finite_or_null(t.weakest)},
                         {"normalized", finite_or_null(t.scaled)},
                         {"component", finite_or_null(t.component)},
                         {"penalized", finite_or_null(t.penalized)},
                         {"weight", finite_or_null(t.weight)},
                         {"violation", t.violation}});
    }
    j["terms"] = std::move(terms);
    j["not_applicable"] = c.not_applicable;
    return j;
}

inline ojson genome_to_json(const Solution& s, const MvGraph& g)
{
    ojson groups = ojson::array();
    for (std::size_t gi = 0; gi < g.groups.size(); ++gi) {
        ojson e;
        e["group"] = static_cast<int>(gi);
        if (g.is_root(static_cast<int>(gi))) {
            ojson colors = ojson::array();
            for (const auto& c : s.roots[gi]) colors.push_back(to_hex(c));
            e["roots"] = std::move(colors);
        } else {
            const auto& p = s.child_params[gi];
            e["child_params"] = {{"hue_spread", p.hue_spread},
                                 {"luminance_offset", p.luminance_offset},
                                 {"chroma_offset", p.chroma_offset}};
        }
        groups.push_back(std::move(e));
    }
    return groups;
}

/// One front member. Scores are computed on the hex-quantized colors so a
/// later evaluation of the written document reproduces them exactly.
inline ojson member_to_json(const Costed& m, const MvGraph& g, int index)
{
    const auto q = quantize(m.views);
    ojson j;
    j["index"] = index;
    j["views"] = assignment_to_json(q, g);
    j["cost"] = cost_to_json(m.cost);
    j["eval"] = to_json(evaluate_assignment(q, g), g);
    j["genome"] = genome_to_json(m.solution, g);
    j["warnings"] = m.warnings;
    return j;
}

inline ojson config_echo(const MvSpec& spec, const GaConfig& cfg, const Weights& w)
{
    ojson j;
    j["ga"] = {{"pop_size", cfg.pop_size},
               {"generations", cfg.generations},
               {"n_best", cfg.n_best},
               {"crossover_rate", cfg.crossover_rate},
               {"step", cfg.step},
               {"seed", cfg.rng_seed},
               {"hard_floor_delta_e", cfg.hard_floor_delta_e}};
    j["weights"] = weights_to_json(w);
    j["samples"] = spec.samples;
    j["adjacency_ratio"] = spec.adjacency_ratio;
    return j;
}

struct RunHistory {
    std::vector<double> best_total;
    std::vector<std::size_t> front_sizes;
};

inline ojson result_document(const MvSpec& spec, const MvGraph& g, const GaConfig& cfg, const Weights& w,
                             const std::vector<Costed>& front, const RunHistory& history, int selected,
                             std::optional<std::size_t> gallery_size = std::nullopt)
{
    ojson doc;
    doc["case_id"] = spec.case_id;
    doc["seed"] = cfg.rng_seed;
    doc["config"] = config_echo(spec, cfg, w);
    doc["graph_warnings"] = g.warnings;
    const std::size_t n = gallery_size ? std::min(*gallery_size, front.size()) : front.size();
    ojson members = ojson::array();
    for (std::size_t i = 0; i < n; ++i) members.push_back(member_to_json(front[i], g, static_cast<int>(i)));
    doc["front"] = std::move(members);
    ojson best = ojson::array();
    for (double b : history.best_total) best.push_back(finite_or_null(b));
    doc["history"] = {{"best_total", std::move(best)}, {"front_size", history.front_sizes}};
    doc["selected"] = selected;
    return doc;
}

inline std::string dump_document(const ojson& doc) { return doc.dump(2) + "\n"; }

inline void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// Chart documents

inline constexpr const char* kDefaultScalePath = "encoding.color.scale";

/// Inject a colormap into the color scale found at a dotted path, creating
/// missing objects along the way. Discrete scales get the entity keys as
/// domain; continuous scales get the view's [min, max].
inline nlohmann::json patch_chart(nlohmann::json chart, const std::string& dotted_path, const ViewSpec& view,
                                  const Colormap& cm)
{
    if (!chart.is_object()) throw Error(ErrorCode::InvalidSpec, "chart document of '" + view.id + "' is not an object");
    nlohmann::json* node = &chart;
    std::size_t start = 0;
    while (start <= dotted_path.size()) {
        const auto dot = dotted_path.find('.', start);
        const auto part = dotted_path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw Error(ErrorCode::InvalidConfig, "bad scale path '" + dotted_path + "'");
        if (!node->is_object())
            throw Error(ErrorCode::InvalidSpec, "chart of '" + view.id + "': '" + part + "' is under a non-object");
        node = &(*node)[part];
        if (node->is_null()) *node = nlohmann::json::object();
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    if (!node->is_object()) throw Error(ErrorCode::InvalidSpec, "chart of '" + view.id + "': scale is not an object");
    nlohmann::json domain = nlohmann::json::array();
    nlohmann::json range = nlohmann::json::array();
    if (view.sequential())
        domain = {view.range.first, view.range.second};
    else
        for (const auto& e : cm.entries) domain.push_back(e.key);
    for (const auto& e : cm.entries) range.push_back(to_hex(e.color));
    (*node)["domain"] = std::move(domain);
    (*node)["range"] = std::move(range);
    return chart;
}

/// Writes "<out stem>.<view id>.json" next to `out` for every view that
/// carries an embedded chart document. Returns the written paths.
inline std::vector<std::filesystem::path> write_patched_charts(const std::filesystem::path& out, const MvGraph& g,
                                                               const Assignment& a, const std::string& scale_path)
{
    std::vector<std::filesystem::path> written;
    for (std::size_t v = 0; v < g.views.size(); ++v) {
        const auto& view = g.views[v];
        if (!view.embedded_chart_doc) continue;
        const auto patched = patch_chart(*view.embedded_chart_doc, scale_path, view, a[v]);
        auto path = out.parent_path() / (out.stem().string() + "." + view.id + ".json");
        write_text_file(path, patched.dump(2) + "\n");
        written.push_back(std::move(path));
    }
    return written;
}

} // namespace mvcolor
