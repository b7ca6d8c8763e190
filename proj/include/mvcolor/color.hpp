/*
 *  color.hpp
 *  Color value type, sRGB / CIELAB / HCL / HSL / HSV conversions and CIEDE2000.
 *
 *  Canonical storage is gamma-encoded sRGB in [0,1]. Lab uses the D65 white
 *  point with the 2 degree observer. HCL is the polar form of CIELAB (LCh_ab).
 */

#pragma once

#include "mvcolor/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>

namespace mvcolor {

struct Lab {
    double l = 0.0;
    double a = 0.0;
    double b = 0.0;
};

struct Hcl {
    double h = 0.0; // degrees in [0,360)
    double c = 0.0; // >= 0
    double l = 0.0; // [0,100]
};

struct Hsv {
    double h = 0.0; // fraction of a turn in [0,1)
    double s = 0.0;
    double v = 0.0;
};

/// Below this chroma a color counts as achromatic and its hue is 0.
inline constexpr double kAchromaticChroma = 1e-6;

class Color {
public:
    constexpr Color() = default;

    /// Components are clamped to [0,1]; clamped() reports whether that moved
    /// any of them by more than rounding noise.
    constexpr Color(double r, double g, double b)
        : r_(clamp01(r)), g_(clamp01(g)), b_(clamp01(b)),
          clamped_(moved(r, r_) || moved(g, g_) || moved(b, b_))
    {
    }

    constexpr double r() const noexcept { return r_; }
    constexpr double g() const noexcept { return g_; }
    constexpr double b() const noexcept { return b_; }
    constexpr bool clamped() const noexcept { return clamped_; }

    friend constexpr bool operator==(const Color& x, const Color& y) noexcept
    {
        return x.r_ == y.r_ && x.g_ == y.g_ && x.b_ == y.b_;
    }

private:
    static constexpr bool moved(double in, double out) noexcept
    {
        return !(in - out <= 1e-7 && out - in <= 1e-7);
    }

    static constexpr double clamp01(double v) noexcept
    {
        if (!(v > 0.0)) return 0.0; // also maps NaN to 0
        return v > 1.0 ? 1.0 : v;
    }

    double r_ = 0.0;
    double g_ = 0.0;
    double b_ = 0.0;
    bool clamped_ = false;
};

/// Result of a conversion into sRGB that may leave the gamut.
struct GamutResult {
    Color color;
    bool out_of_gamut = false;
};

namespace detail {

inline constexpr std::array<std::array<double, 3>, 3> kRgbToXyz{{
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
}};

inline const std::array<std::array<double, 3>, 3>& xyz_to_rgb_matrix()
{
    static const auto inv = [] {
        const auto& m = kRgbToXyz;
        const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        std::array<std::array<double, 3>, 3> r{};
        r[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
        r[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
        r[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
        r[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
        r[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
        r[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
        r[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
        r[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
        r[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
        return r;
    }();
    return inv;
}

// White is the image of sRGB (1,1,1) so grays map to exactly a = b = 0.
inline constexpr std::array<double, 3> kWhite{
    kRgbToXyz[0][0] + kRgbToXyz[0][1] + kRgbToXyz[0][2],
    kRgbToXyz[1][0] + kRgbToXyz[1][1] + kRgbToXyz[1][2],
    kRgbToXyz[2][0] + kRgbToXyz[2][1] + kRgbToXyz[2][2],
};

inline constexpr double kEpsilon = 216.0 / 24389.0;
inline constexpr double kKappa = 24389.0 / 27.0;

inline double srgb_to_linear(double v)
{
    return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

inline double linear_to_srgb(double v)
{
    return v <= 0.0031308 ? v * 12.92 : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

inline double lab_f(double t)
{
    return t > kEpsilon ? std::cbrt(t) : (kKappa * t + 16.0) / 116.0;
}

inline double lab_f_inv(double f)
{
    const double f3 = f * f * f;
    return f3 > kEpsilon ? f3 : (116.0 * f - 16.0) / kKappa;
}

inline double wrap_degrees(double h)
{
    h = std::fmod(h, 360.0);
    if (h < 0.0) h += 360.0;
    return h >= 360.0 ? 0.0 : h;
}

inline double deg2rad(double d) { return d * std::numbers::pi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }

/// Unclamped Lab -> gamma-encoded sRGB.
inline std::array<double, 3> lab_to_srgb_raw(const Lab& lab)
{
    const double fy = (lab.l + 16.0) / 116.0;
    const double fx = fy + lab.a / 500.0;
    const double fz = fy - lab.b / 200.0;
    const std::array<double, 3> xyz{kWhite[0] * lab_f_inv(fx), kWhite[1] * lab_f_inv(fy),
                                    kWhite[2] * lab_f_inv(fz)};
    const auto& m = xyz_to_rgb_matrix();
    std::array<double, 3> rgb{};
    for (int i = 0; i < 3; ++i) {
        const double lin = m[i][0] * xyz[0] + m[i][1] * xyz[1] + m[i][2] * xyz[2];
        // companding is odd-symmetric so the gamut test sees the true sign
        rgb[i] = lin < 0.0 ? -linear_to_srgb(-lin) : linear_to_srgb(lin);
    }
    return rgb;
}

inline bool in_unit_cube(const std::array<double, 3>& v, double tol)
{
    return std::all_of(v.begin(), v.end(), [tol](double x) { return x >= -tol && x <= 1.0 + tol; });
}

} // namespace detail

inline Lab srgb_to_lab(const Color& c)
{
    const double lin[3] = {detail::srgb_to_linear(c.r()), detail::srgb_to_linear(c.g()),
                           detail::srgb_to_linear(c.b())};
    double xyz[3];
    for (int i = 0; i < 3; ++i)
        xyz[i] = detail::kRgbToXyz[i][0] * lin[0] + detail::kRgbToXyz[i][1] * lin[1]
            + detail::kRgbToXyz[i][2] * lin[2];
    const double fx = detail::lab_f(xyz[0] / detail::kWhite[0]);
    const double fy = detail::lab_f(xyz[1] / detail::kWhite[1]);
    const double fz = detail::lab_f(xyz[2] / detail::kWhite[2]);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

inline GamutResult lab_to_srgb(const Lab& lab)
{
    const auto rgb = detail::lab_to_srgb_raw(lab);
    Color c(rgb[0], rgb[1], rgb[2]);
    return {c, !detail::in_unit_cube(rgb, 1e-9)};
}

inline Hcl lab_to_hcl(const Lab& lab)
{
    const double chroma = std::hypot(lab.a, lab.b);
    if (chroma < kAchromaticChroma) return {0.0, chroma, lab.l};
    return {detail::wrap_degrees(detail::rad2deg(std::atan2(lab.b, lab.a))), chroma, lab.l};
}

inline Lab hcl_to_lab(const Hcl& hcl)
{
    const double h = detail::deg2rad(hcl.h);
    return {hcl.l, hcl.c * std::cos(h), hcl.c * std::sin(h)};
}

inline Hcl srgb_to_hcl(const Color& c) { return lab_to_hcl(srgb_to_lab(c)); }

/// HCL -> sRGB. Requests outside the sRGB gamut are mapped by lowering chroma
/// at constant hue and luminance; out_of_gamut reports that this happened.
inline GamutResult hcl_to_srgb(double h, double c, double l)
{
    l = std::clamp(l, 0.0, 100.0);
    c = std::max(c, 0.0);
    constexpr double tol = 1e-9;
    auto raw = detail::lab_to_srgb_raw(hcl_to_lab({h, c, l}));
    if (detail::in_unit_cube(raw, tol)) return {Color(raw[0], raw[1], raw[2]), false};

    double lo = 0.0;
    double hi = c;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (detail::in_unit_cube(detail::lab_to_srgb_raw(hcl_to_lab({h, mid, l})), tol))
            lo = mid;
        else
            hi = mid;
    }
    raw = detail::lab_to_srgb_raw(hcl_to_lab({h, lo, l}));
    return {Color(raw[0], raw[1], raw[2]), true};
}

inline GamutResult hcl_to_srgb(const Hcl& hcl) { return hcl_to_srgb(hcl.h, hcl.c, hcl.l); }

inline Hsv srgb_to_hsv(const Color& c)
{
    const double mx = std::max({c.r(), c.g(), c.b()});
    const double mn = std::min({c.r(), c.g(), c.b()});
    const double d = mx - mn;
    double h = 0.0;
    if (d > 0.0) {
        if (mx == c.r())
            h = std::fmod((c.g() - c.b()) / d, 6.0);
        else if (mx == c.g())
            h = (c.b() - c.r()) / d + 2.0;
        else
            h = (c.r() - c.g()) / d + 4.0;
        h /= 6.0;
        if (h < 0.0) h += 1.0;
        if (h >= 1.0) h -= 1.0;
    }
    return {h, mx > 0.0 ? d / mx : 0.0, mx};
}

inline Color hsv_to_srgb(const Hsv& hsv)
{
    double h = std::fmod(hsv.h, 1.0);
    if (h < 0.0) h += 1.0;
    const double s = std::clamp(hsv.s, 0.0, 1.0);
    const double v = std::clamp(hsv.v, 0.0, 1.0);
    const double x = h * 6.0;
    const int sector = static_cast<int>(std::floor(x)) % 6;
    const double f = x - std::floor(x);
    const double p = v * (1.0 - s);
    const double q = v * (1.0 - s * f);
    const double t = v * (1.0 - s * (1.0 - f));
    switch (sector) {
    case 0: return {v, t, p};
    case 1: return {q, v, p};
    case 2: return {p, v, t};
    case 3: return {p, q, v};
    case 4: return {t, p, v};
    default: return {v, p, q};
    }
}

/// HSL hue in degrees; 0 for achromatic colors.
inline double hsl_hue(const Color& c)
{
    const double mx = std::max({c.r(), c.g(), c.b()});
    const double mn = std::min({c.r(), c.g(), c.b()});
    if (mx - mn < kAchromaticChroma) return 0.0;
    return detail::wrap_degrees(srgb_to_hsv(c).h * 360.0);
}

/// Achromatic in the HCL sense (chroma below kAchromaticChroma).
inline bool is_achromatic(const Color& c) { return srgb_to_hcl(c).c < kAchromaticChroma; }

/// Shortest angular distance between two hues, in [0,180].
inline double circular_hue_distance(double h1, double h2)
{
    const double d = std::fabs(detail::wrap_degrees(h1) - detail::wrap_degrees(h2));
    return std::min(d, 360.0 - d);
}

/// CIEDE2000 color difference with kL = kC = kH = 1.
inline double ciede2000(const Lab& x, const Lab& y)
{
    using detail::deg2rad;
    using detail::rad2deg;
    constexpr double pow25_7 = 6103515625.0; // 25^7

    const double c1 = std::hypot(x.a, x.b);
    const double c2 = std::hypot(y.a, y.b);
    const double c_bar = 0.5 * (c1 + c2);
    const double c_bar7 = std::pow(c_bar, 7.0);
    const double g = 0.5 * (1.0 - std::sqrt(c_bar7 / (c_bar7 + pow25_7)));

    const double a1p = (1.0 + g) * x.a;
    const double a2p = (1.0 + g) * y.a;
    const double c1p = std::hypot(a1p, x.b);
    const double c2p = std::hypot(a2p, y.b);

    auto hue = [](double b, double ap) {
        if (b == 0.0 && ap == 0.0) return 0.0;
        return detail::wrap_degrees(rad2deg(std::atan2(b, ap)));
    };
    const double h1p = hue(x.b, a1p);
    const double h2p = hue(y.b, a2p);

    const double dlp = y.l - x.l;
    const double dcp = c2p - c1p;
    double dhp = 0.0;
    if (c1p * c2p != 0.0) {
        dhp = h2p - h1p;
        if (dhp > 180.0)
            dhp -= 360.0;
        else if (dhp < -180.0)
            dhp += 360.0;
    }
    const double dHp = 2.0 * std::sqrt(c1p * c2p) * std::sin(deg2rad(dhp / 2.0));

    const double lp_bar = 0.5 * (x.l + y.l);
    const double cp_bar = 0.5 * (c1p + c2p);
    double hp_bar = h1p + h2p;
    if (c1p * c2p != 0.0) {
        if (std::fabs(h1p - h2p) <= 180.0)
            hp_bar *= 0.5;
        else if (h1p + h2p < 360.0)
            hp_bar = 0.5 * (h1p + h2p + 360.0);
        else
            hp_bar = 0.5 * (h1p + h2p - 360.0);
    }

    const double t = 1.0 - 0.17 * std::cos(deg2rad(hp_bar - 30.0)) + 0.24 * std::cos(deg2rad(2.0 * hp_bar))
        + 0.32 * std::cos(deg2rad(3.0 * hp_bar + 6.0)) - 0.20 * std::cos(deg2rad(4.0 * hp_bar - 63.0));
    const double d_theta = 30.0 * std::exp(-std::pow((hp_bar - 275.0) / 25.0, 2.0));
    const double cp_bar7 = std::pow(cp_bar, 7.0);
    const double rc = 2.0 * std::sqrt(cp_bar7 / (cp_bar7 + pow25_7));
    const double lm = (lp_bar - 50.0) * (lp_bar - 50.0);
    const double sl = 1.0 + 0.015 * lm / std::sqrt(20.0 + lm);
    const double sc = 1.0 + 0.045 * cp_bar;
    const double sh = 1.0 + 0.015 * cp_bar * t;
    const double rt = -std::sin(deg2rad(2.0 * d_theta)) * rc;

    const double tl = dlp / sl;
    const double tc = dcp / sc;
    const double th = dHp / sh;
    return std::sqrt(std::max(0.0, tl * tl + tc * tc + th * th + rt * tc * th));
}

inline double ciede2000(const Color& x, const Color& y) { return ciede2000(srgb_to_lab(x), srgb_to_lab(y)); }

// ---------------------------------------------------------------------------
// Hex interchange: "#rrggbb", case-insensitive on input, lowercase on output.

inline Color from_hex(std::string_view hex)
{
    auto nibble = [&](char ch) -> int {
        if (ch >= '0' && ch <= '9') return ch - '0';
        if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
        if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
        throw Error(ErrorCode::Parse, "invalid hex color '" + std::string(hex) + "'");
    };
    if (hex.size() != 7 || hex[0] != '#')
        throw Error(ErrorCode::Parse, "invalid hex color '" + std::string(hex) + "'");
    double v[3];
    for (int i = 0; i < 3; ++i)
        v[i] = (nibble(hex[1 + 2 * i]) * 16 + nibble(hex[2 + 2 * i])) / 255.0;
    return {v[0], v[1], v[2]};
}

inline std::string to_hex(const Color& c)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out = "#";
    for (double v : {c.r(), c.g(), c.b()}) {
        const int q = static_cast<int>(std::lround(v * 255.0));
        out += digits[q >> 4];
        out += digits[q & 15];
    }
    return out;
}

/// Snap to the nearest 8-bit color, i.e. what survives a hex round-trip.
inline Color quantize(const Color& c) { return from_hex(to_hex(c)); }

} // namespace mvcolor
