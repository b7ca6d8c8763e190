/*
 *  optimizer.hpp
 *  Pareto-based genetic algorithm over Solution genomes.
 *
 *  Each generation: evaluate, extract the non-dominated front, carry the
 *  front over, then refill with mutated crossover offspring of parents drawn
 *  from an elite pool. Each generation is costed against a snapshot of the
 *  normalization extrema; the batch's raw values are merged in afterwards.
 *  Carried elites keep the cost they were given when evaluated.
 */

#pragma once

#include "mvcolor/config.hpp"
#include "mvcolor/metrics.hpp"
#include "mvcolor/palettes.hpp"
#include "mvcolor/solution.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <thread>
#include <utility>
#include <vector>

namespace mvcolor {

// ---------------------------------------------------------------------------
// Random numbers

/// Counter-based seeding: every (seed, stream, index) triple gets its own
/// generator, so results do not depend on evaluation order or threading.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
        : engine_(mix(mix(mix(seed) ^ stream) ^ index))
    {
    }

    /// Uniform in [0,1) from the top 53 bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n).
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform01() * static_cast<double>(n)); }

private:
    static std::uint64_t mix(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Initialization

inline constexpr double kGoldenAngle = 137.50776405003785;

/// Append `count` colors stepped around the hue circle by the golden angle at
/// HCL chroma 50 / luminance 60. Candidates closer than `floor` (CIEDE2000)
/// to an existing color are skipped while untried candidates remain.
inline std::vector<Color> golden_angle_extend(std::vector<Color> colors, std::size_t count, double floor)
{
    std::vector<Lab> labs;
    for (const auto& c : colors) labs.push_back(srgb_to_lab(c));
    double hue = 0.0;
    std::size_t added = 0;
    for (int attempt = 0; added < count; ++attempt) {
        hue = detail::wrap_degrees(hue + kGoldenAngle);
        const Color cand = hcl_to_srgb(hue, 50.0, 60.0).color;
        const Lab cl = srgb_to_lab(cand);
        bool ok = attempt >= 720;
        if (!ok) {
            ok = true;
            for (const auto& l : labs)
                if (ciede2000(l, cl) < floor) {
                    ok = false;
                    break;
                }
        }
        if (!ok) continue;
        colors.push_back(cand);
        labs.push_back(cl);
        ++added;
    }
    return colors;
}

/// Seed colors for a group needing `needed` colors: the first `needed` colors
/// of a palette drawn from those large enough, or the largest palette
/// extended by golden-angle colors.
inline std::vector<Color> seed_colors(const PaletteLibrary& lib, std::size_t needed, Rng& rng, double floor)
{
    if (lib.empty()) throw Error(ErrorCode::InvalidConfig, "empty palette library");
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < lib.size(); ++i)
        if (lib[i].colors.size() >= needed) eligible.push_back(i);
    if (!eligible.empty()) {
        const auto& p = lib[eligible[rng.below(eligible.size())]];
        return {p.colors.begin(), p.colors.begin() + static_cast<std::ptrdiff_t>(needed)};
    }
    std::size_t largest = 0;
    for (std::size_t i = 1; i < lib.size(); ++i)
        if (lib[i].colors.size() > lib[largest].colors.size()) largest = i;
    const auto& base = lib[largest].colors;
    return golden_angle_extend(base, needed - base.size(), floor);
}

inline Solution random_solution(const MvGraph& g, const PaletteLibrary& lib, const GaConfig& cfg, Rng& rng)
{
    Solution s;
    s.roots.resize(g.groups.size());
    s.child_params.assign(g.groups.size(), ChildParams{});
    for (std::size_t gi = 0; gi < g.groups.size(); ++gi) {
        if (!g.is_root(static_cast<int>(gi))) continue;
        if (g.groups[gi].sequential) {
            const auto& p = lib[rng.below(lib.size())];
            s.roots[gi] = {p.colors[rng.below(p.colors.size())]};
        } else {
            s.roots[gi] = seed_colors(lib, g.groups[gi].entities.size(), rng, cfg.hard_floor_delta_e);
        }
    }
    return s;
}

inline std::vector<Solution> init_population(const MvGraph& g, const PaletteLibrary& lib, const GaConfig& cfg)
{
    cfg.validate();
    std::vector<Solution> pop;
    for (int i = 0; i < cfg.pop_size; ++i) {
        Rng rng(cfg.rng_seed, 0, static_cast<std::uint64_t>(i));
        pop.push_back(random_solution(g, lib, cfg, rng));
    }
    return pop;
}

/// Naive reference assignment: the first palette for every root group and
/// the parent's color repeated for every hierarchy child.
inline Assignment naive_baseline(const MvGraph& g, const PaletteLibrary& lib, double floor = 10.0)
{
    std::vector<std::vector<Color>> group_colors(g.groups.size());
    for (int gi : g.order) {
        const auto& grp = g.groups[gi];
        if (g.is_root(gi)) {
            std::vector<Color> base = lib.at(0).colors;
            if (grp.sequential) {
                group_colors[gi] = inherit_sequential(base[0], g.samples).colors;
                continue;
            }
            if (base.size() < grp.entities.size()) base = golden_angle_extend(base, grp.entities.size() - base.size(), floor);
            group_colors[gi].assign(base.begin(), base.begin() + static_cast<std::ptrdiff_t>(grp.entities.size()));
        } else {
            const auto& link = g.links[*grp.parent_link];
            const Color pc = group_colors[link.parent_group][entity_index(g.groups[link.parent_group], link.parent_key)];
            group_colors[gi].assign(grp.sequential ? g.samples : grp.entities.size(), pc);
        }
    }
    return assignment_from_groups(g, group_colors);
}

// ---------------------------------------------------------------------------
// Evaluation

struct Costed {
    Solution solution;
    CostVector cost;
    Assignment views; // decoded
    std::vector<std::string> warnings;
};

/// Smallest within-view CIEDE2000 over all views (infinity if no view has 2 colors).
inline double min_within_view_delta_e(const Assignment& views)
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& cm : views) {
        std::vector<Lab> labs;
        for (const auto& e : cm.entries) labs.push_back(srgb_to_lab(e.color));
        for (std::size_t i = 0; i < labs.size(); ++i)
            for (std::size_t j = i + 1; j < labs.size(); ++j) best = std::min(best, ciede2000(labs[i], labs[j]));
    }
    return best;
}

/// Decode and cost one solution. Undecodable genomes and any within-view pair
/// closer than the hard floor are rejected with infinite costs.
inline Costed evaluate_one(const Solution& sol, const MvGraph& g, const ParamsStore& store, const std::string& case_id,
                           const Weights& w, const GaConfig& cfg, std::vector<RawObservation>* obs = nullptr)
{
    Costed c{sol, {}, {}, {}};
    auto d = decode(sol, g);
    c.warnings = std::move(d.warnings);
    if (!d.ok) {
        c.cost = CostVector::rejected_vector();
        c.warnings.push_back(d.failure);
        return c;
    }
    c.views = std::move(d.views);
    if (min_within_view_delta_e(c.views) < cfg.hard_floor_delta_e) {
        c.cost = CostVector::rejected_vector();
        return c;
    }
    auto terms = raw_terms(c.views, g, w);
    if (obs) *obs = observations(terms);
    c.cost = aggregate(std::move(terms), store, case_id);
    return c;
}

/// Evaluate a population in parallel. Output order matches input order.
inline std::vector<Costed> evaluate(const std::vector<Solution>& pop, const MvGraph& g, const ParamsStore& store,
                                    const std::string& case_id, const Weights& w, const GaConfig& cfg,
                                    std::vector<std::vector<RawObservation>>* obs = nullptr)
{
    std::vector<Costed> out(pop.size());
    std::vector<std::vector<RawObservation>> local(pop.size());
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), pop.size()));
    auto work = [&](std::size_t begin) {
        for (std::size_t i = begin; i < pop.size(); i += workers) out[i] = evaluate_one(pop[i], g, store, case_id, w, cfg, &local[i]);
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> threads;
        for (std::size_t t = 0; t < workers; ++t) threads.emplace_back(work, t);
    }
    if (obs) *obs = std::move(local);
    return out;
}

// ---------------------------------------------------------------------------
// Pareto front

/// Indices of the points not strictly dominated in both coordinates, in
/// ascending index order. Points with a non-finite coordinate are skipped.
inline std::vector<std::size_t> pareto_indices(const std::vector<std::pair<double, double>>& pts)
{
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (std::isfinite(pts[i].first) && std::isfinite(pts[i].second)) idx.push_back(i);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return pts[a].first < pts[b].first; });
    // sweep by the first objective; a point is dominated iff some point with a
    // strictly smaller first objective has a strictly smaller second one
    std::vector<std::size_t> keep;
    double best_before = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < idx.size();) {
        std::size_t end = k;
        double group_min = std::numeric_limits<double>::infinity();
        while (end < idx.size() && pts[idx[end]].first == pts[idx[k]].first) {
            group_min = std::min(group_min, pts[idx[end]].second);
            ++end;
        }
        for (std::size_t m = k; m < end; ++m)
            if (!(best_before < pts[idx[m]].second)) keep.push_back(idx[m]);
        best_before = std::min(best_before, group_min);
        k = end;
    }
    std::sort(keep.begin(), keep.end());
    return keep;
}

struct ParetoFront {
    std::vector<Costed> members;
};

inline ParetoFront pareto_front(const std::vector<Costed>& pop)
{
    std::vector<std::pair<double, double>> pts;
    for (const auto& c : pop) pts.emplace_back(c.cost.rejected ? INFINITY : c.cost.c_sv, c.cost.rejected ? INFINITY : c.cost.c_mv);
    const auto idx = pareto_indices(pts);
    if (idx.empty()) throw Error(ErrorCode::AllRejected, "no feasible solution in the population");
    ParetoFront f;
    for (std::size_t i : idx) f.members.push_back(pop[i]);
    return f;
}

// ---------------------------------------------------------------------------
// Variation operators

/// Elite pool: up to n_best members by ascending C_SV + C_MV, ties by position.
inline std::vector<std::size_t> elite_pool(const ParetoFront& front, int n_best)
{
    std::vector<std::size_t> order(front.members.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return front.members[a].cost.total() < front.members[b].cost.total();
    });
    if (order.size() > static_cast<std::size_t>(n_best)) order.resize(static_cast<std::size_t>(n_best));
    return order;
}

/// Two parent indices into the front, distinct whenever the pool allows it.
inline std::pair<std::size_t, std::size_t> select_parents(const ParetoFront& front, const GaConfig& cfg, Rng& rng)
{
    const auto pool = elite_pool(front, cfg.n_best);
    const std::size_t a = rng.below(pool.size());
    if (pool.size() < 2) return {pool[a], pool[a]};
    std::size_t b = rng.below(pool.size() - 1);
    if (b >= a) ++b;
    return {pool[a], pool[b]};
}

/// Per root group, swap the two parents' colors (and the child parameters of
/// everything below that group) with probability `rate`.
inline std::pair<Solution, Solution> crossover(const Solution& a, const Solution& b, const MvGraph& g, double rate,
                                               Rng& rng)
{
    Solution o1 = a;
    Solution o2 = b;
    for (std::size_t gi = 0; gi < g.groups.size(); ++gi) {
        if (!g.is_root(static_cast<int>(gi))) continue;
        if (!(rng.uniform01() < rate)) continue;
        std::swap(o1.roots[gi], o2.roots[gi]);
        for (std::size_t c = 0; c < g.groups.size(); ++c)
            if (g.root_of(static_cast<int>(c)) == static_cast<int>(gi)) std::swap(o1.child_params[c], o2.child_params[c]);
    }
    return {std::move(o1), std::move(o2)};
}

inline constexpr double kChildParamMutationRate = 0.1;

/// Uniform HSV noise in [-step, step] on every root color (hue wraps, S and V
/// clamp) and, with probability 0.1, +/- step * 60 degrees on a child's spread.
inline Solution perturb(const Solution& s, const MvGraph& g, double step, Rng& rng)
{
    Solution out = s;
    for (auto& colors : out.roots)
        for (auto& c : colors) {
            const double dh = rng.uniform(-step, step);
            const double ds = rng.uniform(-step, step);
            const double dv = rng.uniform(-step, step);
            if (dh == 0.0 && ds == 0.0 && dv == 0.0) continue;
            Hsv hsv = srgb_to_hsv(c);
            hsv.h = std::fmod(hsv.h + dh + 1.0, 1.0);
            hsv.s = std::clamp(hsv.s + ds, 0.0, 1.0);
            hsv.v = std::clamp(hsv.v + dv, 0.0, 1.0);
            c = hsv_to_srgb(hsv);
        }
    for (std::size_t gi = 0; gi < g.groups.size(); ++gi) {
        if (g.is_root(static_cast<int>(gi))) continue;
        if (!(rng.uniform01() < kChildParamMutationRate)) continue;
        auto& spread = out.child_params[gi].hue_spread;
        spread = std::clamp(spread + rng.uniform(-step * 60.0, step * 60.0), kMinHueSpread, kMaxHueSpread);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Main loop

namespace detail {
inline std::atomic<std::uint64_t>& optimize_calls()
{
    static std::atomic<std::uint64_t> calls{0};
    return calls;
}
} // namespace detail

/// Number of optimize() invocations in this process.
inline std::uint64_t optimize_invocations() { return detail::optimize_calls().load(); }

struct OptimizeResult {
    ParetoFront front;                 // post-processed, sorted by C_MV
    std::vector<double> best_total;    // best C_SV + C_MV per generation
    std::vector<std::size_t> front_sizes;
    ParamsStore extrema;               // snapshot after the last generation
};

/// Drop near-duplicates (every color within 1 CIEDE2000) and sort by C_MV.
inline ParetoFront post_process(ParetoFront f)
{
    std::stable_sort(f.members.begin(), f.members.end(), [](const Costed& a, const Costed& b) {
        if (a.cost.c_mv != b.cost.c_mv) return a.cost.c_mv < b.cost.c_mv;
        return a.cost.c_sv < b.cost.c_sv;
    });
    auto same = [](const Costed& a, const Costed& b) {
        for (std::size_t v = 0; v < a.views.size(); ++v)
            for (std::size_t i = 0; i < a.views[v].size(); ++i)
                if (ciede2000(a.views[v].entries[i].color, b.views[v].entries[i].color) >= 1.0) return false;
        return true;
    };
    ParetoFront out;
    for (auto& m : f.members) {
        const bool dup = std::any_of(out.members.begin(), out.members.end(), [&](const Costed& k) { return same(k, m); });
        if (!dup) out.members.push_back(std::move(m));
    }
    return out;
}

using GenerationCallback = std::function<void(int generation, const std::vector<Costed>& population)>;

inline OptimizeResult optimize(const MvGraph& g, const PaletteLibrary& lib, ParamsStore& store,
                               const std::string& case_id, const Weights& w, const GaConfig& cfg,
                               const GenerationCallback& on_generation = {})
{
    cfg.validate();
    ++detail::optimize_calls();

    auto population = init_population(g, lib, cfg);

    // generation 0 is costed against the store widened by the initial population
    OptimizeResult result;
    result.extrema = store;
    {
        std::vector<std::vector<RawObservation>> obs;
        evaluate(population, g, store, case_id, w, cfg, &obs);
        for (const auto& o : obs)
            for (const auto& r : o) result.extrema.observe(case_id, r.key, r.raw);
    }

    std::vector<Costed> costed;
    std::vector<Costed> carried;
    ParetoFront front;
    for (int t = 0; t < cfg.generations; ++t) {
        // evaluate only offspring; carried elites keep their recorded costs
        std::vector<std::vector<RawObservation>> obs;
        auto evaluated = evaluate(population, g, result.extrema, case_id, w, cfg, &obs);
        for (const auto& o : obs)
            for (const auto& r : o) result.extrema.observe(case_id, r.key, r.raw);
        costed = std::move(carried);
        for (auto& c : evaluated) costed.push_back(std::move(c));

        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : costed)
            if (!c.cost.rejected) best = std::min(best, c.cost.total());
        result.best_total.push_back(best);
        if (on_generation) on_generation(t, costed);

        const bool feasible = std::isfinite(best);
        if (feasible) front = pareto_front(costed);
        result.front_sizes.push_back(feasible ? front.members.size() : 0);
        if (t + 1 == cfg.generations) break;

        // carry over the front (exact duplicates once), best first, leaving room for offspring
        carried.clear();
        if (feasible) {
            for (std::size_t i : elite_pool(front, static_cast<int>(front.members.size()))) {
                const auto& m = front.members[i];
                const bool dup = std::any_of(carried.begin(), carried.end(),
                                             [&](const Costed& k) { return k.solution == m.solution; });
                if (!dup) carried.push_back(m);
            }
            const std::size_t cap = static_cast<std::size_t>(std::max(1, cfg.pop_size - 2));
            if (carried.size() > cap) carried.resize(cap);
        }

        population.clear();
        std::size_t pair = 0;
        while (carried.size() + population.size() < static_cast<std::size_t>(cfg.pop_size)) {
            Rng rng(cfg.rng_seed, static_cast<std::uint64_t>(t) + 1, pair++);
            const Solution* pa;
            const Solution* pb;
            if (feasible) {
                const auto [a, b] = select_parents(front, cfg, rng);
                pa = &front.members[a].solution;
                pb = &front.members[b].solution;
            } else {
                pa = &costed[rng.below(costed.size())].solution;
                pb = &costed[rng.below(costed.size())].solution;
            }
            auto [o1, o2] = crossover(*pa, *pb, g, cfg.crossover_rate, rng);
            population.push_back(perturb(o1, g, cfg.step, rng));
            if (carried.size() + population.size() < static_cast<std::size_t>(cfg.pop_size))
                population.push_back(perturb(o2, g, cfg.step, rng));
        }
    }
    if (front.members.empty()) throw Error(ErrorCode::AllRejected, "no feasible solution was found");

    result.front = post_process(std::move(front));
    store.merge(result.extrema);
    return result;
}

} // namespace mvcolor
