/*
 *  metrics.hpp
 *  Raw design-criterion metrics, sigmoid penalties and the aggregation of
 *  per-view and per-pair terms into the two objectives (C_SV, C_MV).
 *
 *  Every aggregate is a nonnegative minimization target: maximize-type
 *  metrics enter as (1 - normalized), continuity enters as normalized.
 */

#pragma once

#include "mvcolor/colormap.hpp"
#include "mvcolor/config.hpp"
#include "mvcolor/mvgraph.hpp"
#include "mvcolor/params_store.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mvcolor {

enum class MetricKey { SvDiff, Continuity, MvDiff, HueUniformity };

inline constexpr std::array<MetricKey, 4> kAllMetrics{MetricKey::SvDiff, MetricKey::Continuity, MetricKey::MvDiff,
                                                      MetricKey::HueUniformity};

inline const char* metric_name(MetricKey k)
{
    switch (k) {
    case MetricKey::SvDiff: return "sv_diff";
    case MetricKey::Continuity: return "continuity";
    case MetricKey::MvDiff: return "mv_diff";
    case MetricKey::HueUniformity: return "hue_uniformity";
    }
    return "?";
}

inline constexpr double kPenaltyFactor = 0.2;
inline constexpr double kMaxAllowedNormalized = 0.2;
inline constexpr double kViolationSurcharge = 0.5;

inline double metric_threshold(MetricKey k)
{
    switch (k) {
    case MetricKey::SvDiff: return 30.0;
    case MetricKey::Continuity: return 30.0;
    case MetricKey::MvDiff: return 20.0;
    case MetricKey::HueUniformity: return 20.0;
    }
    return 0.0;
}

inline bool higher_is_better(MetricKey k) { return k != MetricKey::Continuity; }

// ---------------------------------------------------------------------------
// Raw metrics

namespace detail {

inline std::vector<Lab> labs_of(const Colormap& cm)
{
    std::vector<Lab> out;
    out.reserve(cm.size());
    for (const auto& e : cm.entries) out.push_back(srgb_to_lab(e.color));
    return out;
}

/// Indices of entries whose key does not occur in `other`.
inline std::vector<std::size_t> unshared(const Colormap& cm, const Colormap& other)
{
    std::set<std::string> keys;
    for (const auto& e : other.entries) keys.insert(e.key);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < cm.size(); ++i)
        if (!keys.count(cm.entries[i].key)) idx.push_back(i);
    return idx;
}

} // namespace detail

/// Sum of CIEDE2000 over ordered pairs i != j (each unordered pair counted twice).
inline double local_discriminability(const Colormap& cm)
{
    const auto labs = detail::labs_of(cm);
    double sum = 0.0;
    for (std::size_t i = 0; i < labs.size(); ++i)
        for (std::size_t j = i + 1; j < labs.size(); ++j) sum += 2.0 * ciede2000(labs[i], labs[j]);
    return sum;
}

/// Cross-colormap CIEDE2000 sum. Entities present in both colormaps are left
/// out; nullopt when nothing remains.
inline std::optional<double> global_discriminability(const Colormap& a, const Colormap& b)
{
    const auto ia = detail::unshared(a, b);
    const auto ib = detail::unshared(b, a);
    if (ia.empty() || ib.empty()) return std::nullopt;
    double sum = 0.0;
    for (std::size_t i : ia) {
        const Lab la = srgb_to_lab(a.entries[i].color);
        for (std::size_t j : ib) sum += ciede2000(la, srgb_to_lab(b.entries[j].color));
    }
    return sum;
}

/// Smallest circular HSL-hue distance over cross pairs, skipping achromatic
/// colors; nullopt when either side has no chromatic color.
inline std::optional<double> hue_uniformity(const Colormap& a, const Colormap& b)
{
    auto hues = [](const Colormap& cm) {
        std::vector<double> h;
        for (const auto& e : cm.entries)
            if (!is_achromatic(e.color)) h.push_back(hsl_hue(e.color));
        return h;
    };
    const auto ha = hues(a);
    const auto hb = hues(b);
    if (ha.empty() || hb.empty()) return std::nullopt;
    double best = 180.0;
    for (double x : ha)
        for (double y : hb) best = std::min(best, circular_hue_distance(x, y));
    return best;
}

/// Sum of |L_i - L_j| over cross pairs.
inline double continuity(const Colormap& a, const Colormap& b)
{
    const auto la = detail::labs_of(a);
    const auto lb = detail::labs_of(b);
    double sum = 0.0;
    for (const auto& x : la)
        for (const auto& y : lb) sum += std::fabs(x.l - y.l);
    return sum;
}

// ---------------------------------------------------------------------------
// Penalty

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Multiplier in (1,2): close to 2 when `value` badly misses the threshold.
inline double penalty_multiplier(MetricKey key, double value)
{
    const double t = metric_threshold(key);
    const double x = higher_is_better(key) ? t - value : value - t;
    return 1.0 + logistic(kPenaltyFactor * x);
}

inline double penalize(double normalized_cost, double value, MetricKey key)
{
    return normalized_cost * penalty_multiplier(key, value);
}

// ---------------------------------------------------------------------------
// Aggregation

/// One scoped cost term: a single view (sv_diff) or a view pair.
struct CostTerm {
    MetricKey metric = MetricKey::SvDiff;
    std::string key; // persisted metric key, e.g. "mv_diff:bar|pie"
    int view_a = -1;
    int view_b = -1;
    std::optional<double> raw; // nullopt = not applicable
    double weakest = 0.0;      // weakest single pair, the value judged against the threshold
    double scaled = 0.0;       // min-max normalized raw in [0,1]
    double component = 0.0;    // cost before penalty: 1 - scaled or scaled
    double penalized = 0.0;
    double weight = 0.0; // criterion weight times spatial proximity
    bool violation = false;
};

struct CostVector {
    std::vector<CostTerm> terms;
    // per-metric means over applicable terms, in kAllMetrics order
    std::array<double, 4> normalized{};
    std::array<double, 4> penalized{};
    double c_sv = 0.0;
    double c_mv = 0.0;
    bool rejected = false;
    std::vector<std::string> not_applicable;

    double total() const { return c_sv + c_mv; }

    static CostVector rejected_vector()
    {
        CostVector c;
        c.rejected = true;
        c.c_sv = c.c_mv = std::numeric_limits<double>::infinity();
        return c;
    }
};

inline std::string scoped_key(MetricKey k, const MvGraph& g, int a, int b = -1)
{
    std::string s = std::string(metric_name(k)) + ":" + g.views[a].id;
    if (b >= 0) s += "|" + g.views[b].id;
    return s;
}

/// Raw values of every applicable term, for feeding a ParamsStore.
struct RawObservation {
    std::string key;
    double raw;
};

namespace detail {

inline void finish_term(CostTerm& t, const ParamsStore& store, const std::string& case_id)
{
    if (!t.raw) return;
    t.scaled = store.scale(case_id, t.key, *t.raw);
    t.component = higher_is_better(t.metric) ? 1.0 - t.scaled : t.scaled;
    t.penalized = penalize(t.component, t.weakest, t.metric);
    t.violation = t.weight > 0.0 && t.component > kMaxAllowedNormalized;
}

} // namespace detail

namespace detail {

inline double min_pair_delta_e(const Colormap& cm)
{
    const auto labs = labs_of(cm);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < labs.size(); ++i)
        for (std::size_t j = i + 1; j < labs.size(); ++j) best = std::min(best, ciede2000(labs[i], labs[j]));
    return best;
}

inline double min_cross_delta_e(const Colormap& a, const Colormap& b)
{
    double best = std::numeric_limits<double>::infinity();
    const auto ib = unshared(b, a);
    for (std::size_t i : unshared(a, b)) {
        const Lab la = srgb_to_lab(a.entries[i].color);
        for (std::size_t j : ib) best = std::min(best, ciede2000(la, srgb_to_lab(b.entries[j].color)));
    }
    return best;
}

inline double max_cross_lightness_gap(const Colormap& a, const Colormap& b)
{
    double worst = 0.0;
    for (const auto& x : labs_of(a))
        for (const auto& y : labs_of(b)) worst = std::max(worst, std::fabs(x.l - y.l));
    return worst;
}

inline CostTerm make_term(MetricKey k, const MvGraph& g, int a, int b = -1)
{
    CostTerm t;
    t.metric = k;
    t.key = scoped_key(k, g, a, b);
    t.view_a = a;
    t.view_b = b;
    return t;
}

} // namespace detail

/// Enumerate the cost terms of an assignment with raw values filled in.
inline std::vector<CostTerm> raw_terms(const Assignment& asg, const MvGraph& g, const Weights& w)
{
    std::vector<CostTerm> terms;
    const int n = static_cast<int>(g.views.size());
    for (int v = 0; v < n; ++v) {
        CostTerm t = detail::make_term(MetricKey::SvDiff, g, v);
        t.weight = w.w_d;
        if (asg[v].size() >= 2) {
            t.raw = local_discriminability(asg[v]);
            t.weakest = detail::min_pair_delta_e(asg[v]);
        }
        terms.push_back(std::move(t));
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double sp = spatial_proximity(g, i, j);
            {
                CostTerm t = detail::make_term(MetricKey::MvDiff, g, i, j);
                t.weight = sp * w.w_gdis;
                t.raw = global_discriminability(asg[i], asg[j]);
                if (t.raw) t.weakest = detail::min_cross_delta_e(asg[i], asg[j]);
                terms.push_back(std::move(t));
            }
            if (g.hierarchy_siblings(i, j)) {
                CostTerm t = detail::make_term(MetricKey::HueUniformity, g, i, j);
                t.weight = sp * w.w_hu;
                t.raw = hue_uniformity(asg[i], asg[j]);
                if (t.raw) t.weakest = *t.raw;
                terms.push_back(std::move(t));
            }
            {
                CostTerm t = detail::make_term(MetricKey::Continuity, g, i, j);
                t.weight = sp * w.w_con;
                t.raw = continuity(asg[i], asg[j]);
                t.weakest = detail::max_cross_lightness_gap(asg[i], asg[j]);
                terms.push_back(std::move(t));
            }
        }
    }
    return terms;
}

inline std::vector<RawObservation> observations(const std::vector<CostTerm>& terms)
{
    std::vector<RawObservation> out;
    for (const auto& t : terms)
        if (t.raw) out.push_back({t.key, *t.raw});
    return out;
}

/// Normalize, penalize and aggregate. The store is only read.
inline CostVector aggregate(std::vector<CostTerm> terms, const ParamsStore& store, const std::string& case_id)
{
    CostVector cv;
    std::array<double, 4> sum_n{};
    std::array<double, 4> sum_p{};
    std::array<int, 4> count{};
    for (auto& t : terms) {
        detail::finish_term(t, store, case_id);
        if (!t.raw) {
            cv.not_applicable.push_back(t.key);
            continue;
        }
        const auto idx = static_cast<std::size_t>(t.metric);
        sum_n[idx] += t.component;
        sum_p[idx] += t.penalized;
        ++count[idx];
        double& target = t.metric == MetricKey::SvDiff ? cv.c_sv : cv.c_mv;
        target += t.weight * t.penalized;
        if (t.violation) target += kViolationSurcharge;
    }
    for (std::size_t k = 0; k < 4; ++k)
        if (count[k] > 0) {
            cv.normalized[k] = sum_n[k] / count[k];
            cv.penalized[k] = sum_p[k] / count[k];
        }
    cv.terms = std::move(terms);
    return cv;
}

inline CostVector cost_vector(const Assignment& asg, const MvGraph& g, const ParamsStore& store,
                              const std::string& case_id, const Weights& w)
{
    return aggregate(raw_terms(asg, g, w), store, case_id);
}

} // namespace mvcolor
