/*
 *  spec_io.hpp
 *  MvSpec interchange document (JSON). Unknown fields are ignored.
 */

#pragma once

#include "mvcolor/mvgraph.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace mvcolor {

namespace detail {

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback)
{
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    return j.at(key).get<T>();
}

inline Relation::Kind parse_relation_kind(const std::string& s)
{
    using K = Relation::Kind;
    if (s == "full" || s == "full_redundancy" || s == "FullRedundancy") return K::FullRedundancy;
    if (s == "partial" || s == "partial_redundancy" || s == "PartialRedundancy") return K::PartialRedundancy;
    if (s == "none" || s == "non_redundancy" || s == "NonRedundancy") return K::NonRedundancy;
    if (s == "hierarchy" || s == "Hierarchy") return K::Hierarchy;
    throw Error(ErrorCode::Parse, "unknown relation kind '" + s + "'");
}

inline ViewSpec parse_view(const nlohmann::json& j)
{
    ViewSpec v;
    v.id = j.at("id").get<std::string>();
    if (j.contains("bbox")) {
        const auto& b = j.at("bbox");
        v.bbox = {b.at("x").get<double>(), b.at("y").get<double>(), b.at("width").get<double>(),
                  b.at("height").get<double>()};
    }
    v.chart_kind = get_or<std::string>(j, "chart_kind", "");
    v.color_field = j.at("color_field").get<std::string>();
    const auto fk = get_or<std::string>(j, "field_kind", "categorical");
    if (fk == "categorical")
        v.field_kind = FieldKind::Categorical;
    else if (fk == "sequential")
        v.field_kind = FieldKind::Sequential;
    else
        throw Error(ErrorCode::Parse, "view '" + v.id + "': unknown field_kind '" + fk + "'");

    const auto& dom = j.at("domain");
    if (!dom.is_array()) throw Error(ErrorCode::Parse, "view '" + v.id + "': domain must be an array");
    if (v.sequential()) {
        if (dom.size() != 2) throw Error(ErrorCode::Parse, "view '" + v.id + "': sequential domain is [min, max]");
        v.range = {dom[0].get<double>(), dom[1].get<double>()};
    } else {
        for (const auto& k : dom) v.categories.push_back(k.is_string() ? k.get<std::string>() : k.dump());
    }

    const auto ck = get_or<std::string>(j, "colormap_kind", v.sequential() ? "continuous" : "discrete");
    if (ck == "discrete")
        v.colormap_kind = ColormapKind::Discrete;
    else if (ck == "continuous")
        v.colormap_kind = ColormapKind::Continuous;
    else
        throw Error(ErrorCode::Parse, "view '" + v.id + "': unknown colormap_kind '" + ck + "'");

    if (j.contains("embedded_chart_doc") && !j.at("embedded_chart_doc").is_null())
        v.embedded_chart_doc = j.at("embedded_chart_doc");
    if (j.contains("parent_path") && !j.at("parent_path").is_null()) {
        // "view/entity"
        const auto p = j.at("parent_path").get<std::string>();
        const auto slash = p.find('/');
        if (slash == std::string::npos)
            throw Error(ErrorCode::Parse, "view '" + v.id + "': parent_path must be 'view/entity'");
        v.parent_path = ParentPath{p.substr(0, slash), p.substr(slash + 1)};
    }
    return v;
}

} // namespace detail

inline Weights parse_weights(const nlohmann::json& j, Weights w = {})
{
    w.w_d = detail::get_or(j, "w_d", w.w_d);
    w.w_gdis = detail::get_or(j, "w_gdis", w.w_gdis);
    w.w_hu = detail::get_or(j, "w_hu", w.w_hu);
    w.w_con = detail::get_or(j, "w_con", w.w_con);
    for (double x : {w.w_d, w.w_gdis, w.w_hu, w.w_con})
        if (!(x >= 0.0)) throw Error(ErrorCode::Parse, "weights must be nonnegative");
    return w;
}

inline GaConfig parse_ga(const nlohmann::json& j, GaConfig c = {})
{
    c.pop_size = detail::get_or(j, "pop_size", c.pop_size);
    c.generations = detail::get_or(j, "generations", c.generations);
    c.n_best = detail::get_or(j, "n_best", c.n_best);
    c.crossover_rate = detail::get_or(j, "crossover_rate", c.crossover_rate);
    c.step = detail::get_or(j, "step", c.step);
    c.rng_seed = detail::get_or(j, "seed", c.rng_seed);
    c.hard_floor_delta_e = detail::get_or(j, "hard_floor_delta_e", c.hard_floor_delta_e);
    return c;
}

inline nlohmann::json weights_to_json(const Weights& w)
{
    return {{"w_d", w.w_d}, {"w_gdis", w.w_gdis}, {"w_hu", w.w_hu}, {"w_con", w.w_con}};
}

/// Parse an MvSpec document. Malformed input raises ErrorCode::Parse.
inline MvSpec parse_mvspec(const nlohmann::json& j)
{
    try {
        MvSpec s;
        if (!j.is_object()) throw Error(ErrorCode::Parse, "spec must be a JSON object");
        s.case_id = detail::get_or<std::string>(j, "case_id", s.case_id);
        if (j.contains("canvas")) {
            s.canvas.width = j.at("canvas").at("width").get<double>();
            s.canvas.height = j.at("canvas").at("height").get<double>();
        }
        for (const auto& v : j.at("views")) s.views.push_back(detail::parse_view(v));
        if (j.contains("relations"))
            for (const auto& r : j.at("relations")) {
                DeclaredRelation d;
                d.a = r.at("a").get<std::string>();
                d.b = r.at("b").get<std::string>();
                d.kind = detail::parse_relation_kind(r.at("kind").get<std::string>());
                if (r.contains("parent") && !r.at("parent").is_null()) d.parent_key = r.at("parent").get<std::string>();
                s.relations.push_back(std::move(d));
            }
        if (j.contains("weights")) s.weights = parse_weights(j.at("weights"));
        if (j.contains("ga")) s.ga = parse_ga(j.at("ga"));
        s.samples = detail::get_or(j, "samples", s.samples);
        s.adjacency_ratio = detail::get_or(j, "adjacency_ratio", s.adjacency_ratio);
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Parse, e.what());
    }
}

inline nlohmann::json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
    }
}

/// Load a spec file. The case id defaults to the file stem.
inline MvSpec load_mvspec(const std::filesystem::path& path)
{
    const auto j = read_json_file(path);
    MvSpec s = parse_mvspec(j);
    if (!j.contains("case_id")) s.case_id = path.stem().string();
    return s;
}

} // namespace mvcolor
