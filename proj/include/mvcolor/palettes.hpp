/*
 *  palettes.hpp
 *  Seed palette library. The bundled defaults mirror data/palettes.json.
 *  File format: [{"name": "...", "colors": ["#rrggbb", ...]}, ...]
 */

#pragma once

#include "mvcolor/color.hpp"
#include "mvcolor/error.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace mvcolor {

struct Palette {
    std::string name;
    std::vector<Color> colors;
};

using PaletteLibrary = std::vector<Palette>;

inline constexpr const char* kDefaultPalettesJson = R"json(
[
  {"name": "Set1", "colors": ["#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#ffff33", "#a65628", "#f781bf", "#999999"]},
  {"name": "Set2", "colors": ["#66c2a5", "#fc8d62", "#8da0cb", "#e78ac3", "#a6d854", "#ffd92f", "#e5c494", "#b3b3b3"]},
  {"name": "Set3", "colors": ["#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f"]},
  {"name": "Pastel1", "colors": ["#fbb4ae", "#b3cde3", "#ccebc5", "#decbe4", "#fed9a6", "#ffffcc", "#e5d8bd", "#fddaec", "#f2f2f2"]},
  {"name": "Pastel2", "colors": ["#b3e2cd", "#fdcdac", "#cbd5e8", "#f4cae4", "#e6f5c9", "#fff2ae", "#f1e2cc", "#cccccc"]},
  {"name": "Dark2", "colors": ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666"]},
  {"name": "Accent", "colors": ["#7fc97f", "#beaed4", "#fdc086", "#ffff99", "#386cb0", "#f0027f", "#bf5b17", "#666666"]},
  {"name": "Paired", "colors": ["#a6cee3", "#1f78b4", "#b2df8a", "#33a02c", "#fb9a99", "#e31a1c", "#fdbf6f", "#ff7f00", "#cab2d6", "#6a3d9a", "#ffff99", "#b15928"]},
  {"name": "Tableau10", "colors": ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"]},
  {"name": "Category10", "colors": ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]},
  {"name": "Observable10", "colors": ["#4269d0", "#efb118", "#ff725c", "#6cc5b0", "#3ca951", "#ff8ab7", "#a463f2", "#97bbf5", "#9c6b4e", "#9498a0"]},
  {"name": "OkabeIto", "colors": ["#e69f00", "#56b4e9", "#009e73", "#f0e442", "#0072b2", "#d55e00", "#cc79a7", "#000000"]},
  {"name": "Bold", "colors": ["#7f3c8d", "#11a579", "#3969ac", "#f2b701", "#e73f74", "#80ba5a", "#e68310", "#008695", "#cf1c90", "#f97b72", "#4b4b8f", "#a5aa99"]},
  {"name": "Vivid", "colors": ["#e58606", "#5d69b1", "#52bca3", "#99c945", "#cc61b0", "#24796c", "#daa51b", "#2f8ac4", "#764e9f", "#ed645a", "#cc3a8e", "#a5aa99"]},
  {"name": "Prism", "colors": ["#5f4690", "#1d6996", "#38a6a5", "#0f8554", "#73af48", "#edad08", "#e17c05", "#cc503e", "#94346e", "#6f4070", "#994e95", "#666666"]},
  {"name": "Safe", "colors": ["#88ccee", "#cc6677", "#ddcc77", "#117733", "#332288", "#aa4499", "#44aa99", "#999933", "#882255", "#661100", "#6699cc", "#888888"]},
  {"name": "Pastel", "colors": ["#66c5cc", "#f6cf71", "#f89c74", "#dcb0f2", "#87c55f", "#9eb9f3", "#fe88b1", "#c9db74", "#8be0a4", "#b497e7", "#d3b484", "#b3b3b3"]},
  {"name": "Antique", "colors": ["#855c75", "#d9af6b", "#af6458", "#736f4c", "#526a83", "#625377", "#68855c", "#9c9c5e", "#a06177", "#8c785d", "#467378", "#7c7c7c"]},
  {"name": "TolBright", "colors": ["#4477aa", "#ee6677", "#228833", "#ccbb44", "#66ccee", "#aa3377", "#bbbbbb"]},
  {"name": "TolVibrant", "colors": ["#ee7733", "#0077bb", "#33bbee", "#ee3377", "#cc3311", "#009988", "#bbbbbb"]},
  {"name": "TolMuted", "colors": ["#cc6677", "#332288", "#ddcc77", "#117733", "#88ccee", "#882255", "#44aa99", "#999933", "#aa4499"]},
  {"name": "Primary3", "colors": ["#d62728", "#1f77b4", "#2ca02c"]},
  {"name": "Warm4", "colors": ["#b2182b", "#ef8a62", "#4d9221", "#2166ac"]},
  {"name": "Contrast6", "colors": ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#e6ab02", "#386cb0"]}
]
)json";

inline PaletteLibrary parse_palettes(const nlohmann::json& j)
{
    PaletteLibrary lib;
    try {
        if (!j.is_array()) throw Error(ErrorCode::Parse, "palette library must be an array");
        for (const auto& p : j) {
            Palette pal{p.at("name").get<std::string>(), {}};
            for (const auto& c : p.at("colors")) pal.colors.push_back(from_hex(c.get<std::string>()));
            if (pal.colors.empty()) throw Error(ErrorCode::Parse, "palette '" + pal.name + "' is empty");
            lib.push_back(std::move(pal));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("palette library: ") + e.what());
    }
    if (lib.empty()) throw Error(ErrorCode::Parse, "palette library is empty");
    return lib;
}

inline const PaletteLibrary& default_palettes()
{
    static const PaletteLibrary lib = parse_palettes(nlohmann::json::parse(kDefaultPalettesJson));
    return lib;
}

inline PaletteLibrary load_palettes(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    try {
        return parse_palettes(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
    }
}

inline nlohmann::ordered_json palettes_to_json(const PaletteLibrary& lib)
{
    auto j = nlohmann::ordered_json::array();
    for (const auto& p : lib) {
        nlohmann::ordered_json pj;
        pj["name"] = p.name;
        pj["colors"] = nlohmann::ordered_json::array();
        for (const auto& c : p.colors) pj["colors"].push_back(to_hex(c));
        j.push_back(std::move(pj));
    }
    return j;
}

} // namespace mvcolor
