#pragma once

#include "mvcolor/color.hpp"
#include "mvcolor/mvgraph.hpp"

#include <string>
#include <vector>

namespace mvcolor {

/// One color bound to the data entity (or ramp sample) it encodes.
struct Swatch {
    std::string key;
    Color color;

    friend bool operator==(const Swatch&, const Swatch&) = default;
};

/// Ordered entity-keyed colors. Continuous colormaps carry their evenly
/// spaced samples, keyed "<field>@<i>".
struct Colormap {
    ColormapKind kind = ColormapKind::Discrete;
    std::vector<Swatch> entries;

    std::size_t size() const noexcept { return entries.size(); }
    bool empty() const noexcept { return entries.empty(); }

    const Color* find(const std::string& key) const
    {
        for (const auto& e : entries)
            if (e.key == key) return &e.color;
        return nullptr;
    }

    friend bool operator==(const Colormap&, const Colormap&) = default;
};

inline Colormap make_colormap(std::vector<Color> colors, ColormapKind kind = ColormapKind::Discrete)
{
    Colormap cm{kind, {}};
    for (std::size_t i = 0; i < colors.size(); ++i) cm.entries.push_back({"c" + std::to_string(i), colors[i]});
    return cm;
}

/// Per-view colormaps, indexed like MvGraph::views.
using Assignment = std::vector<Colormap>;

inline Assignment quantize(const Assignment& a)
{
    Assignment out = a;
    for (auto& cm : out)
        for (auto& e : cm.entries) e.color = quantize(e.color);
    return out;
}

} // namespace mvcolor
