/*
 *  session.hpp
 *  Authoring sessions: a spec, its graph, the last optimized front and an
 *  editable copy of the selected member. Edits go through propagate_edit,
 *  which re-decodes the genome instead of running the optimizer.
 */

#pragma once

#include "mvcolor/result_io.hpp"

#include <atomic>
#include <cstdint>
#include <deque>
#include <list>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace mvcolor {

struct EditOutcome {
    Costed member;
    std::vector<std::string> changed_views;
    std::vector<std::string> warnings;
};

/// Replace one entity color in the group that owns it and re-derive every
/// dependent colormap. Editing any sample of a sequential root re-anchors
/// its ramp at the new color. Child groups cannot be edited directly.
inline EditOutcome propagate_edit(const Costed& current, const MvGraph& g, const ParamsStore& store,
                                  const std::string& case_id, const Weights& w, const GaConfig& cfg,
                                  const std::string& view_id, const std::string& key, const Color& color)
{
    const int v = g.view_index(view_id);
    if (v < 0) throw Error(ErrorCode::UnknownEntity, "unknown view '" + view_id + "'");
    const auto keys = g.view_keys(v);
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
        throw Error(ErrorCode::UnknownEntity, "view '" + view_id + "' has no entity '" + key + "'");
    const int gi = g.view_group[v];
    if (!g.is_root(gi))
        throw Error(ErrorCode::DerivedEntity,
                    "'" + key + "' in view '" + view_id + "' is derived from its hierarchy parent; edit the parent");

    Solution sol = current.solution;
    if (g.groups[gi].sequential)
        sol.roots[gi] = {color};
    else
        sol.roots[gi][entity_index(g.groups[gi], key)] = color;

    auto d = decode(sol, g);
    if (!d.ok) throw Error(ErrorCode::ParentsTooClose, d.failure);

    EditOutcome out;
    out.member.solution = std::move(sol);
    out.member.views = std::move(d.views);
    out.member.warnings = d.warnings;
    out.member.cost = cost_vector(out.member.views, g, store, case_id, w);
    out.warnings = std::move(d.warnings);
    if (min_within_view_delta_e(out.member.views) < cfg.hard_floor_delta_e)
        out.warnings.push_back("a view now has two colors closer than the hard floor");
    for (std::size_t i = 0; i < g.views.size(); ++i)
        if (i >= current.views.size() || !(out.member.views[i] == current.views[i]))
            out.changed_views.push_back(g.views[i].id);
    return out;
}

inline constexpr std::size_t kUndoDepth = 32;

struct Session {
    std::string id;
    MvSpec spec;
    MvGraph graph;
    GaConfig cfg;
    Weights weights;

    std::vector<Costed> front;
    RunHistory history;
    int selected = -1;
    std::optional<Costed> working; // edited copy of the selected member
    std::deque<Costed> undo;

    std::mutex mu;
    std::atomic<bool> busy{false};

    bool has_front() const { return !front.empty(); }

    void select(int index)
    {
        if (index < 0 || index >= static_cast<int>(front.size()))
            throw Error(ErrorCode::SchemaMismatch, "front index " + std::to_string(index) + " out of range");
        selected = index;
        working = front[static_cast<std::size_t>(index)];
        undo.clear();
    }

    void apply(EditOutcome&& e)
    {
        undo.push_back(*working);
        if (undo.size() > kUndoDepth) undo.pop_front();
        working = std::move(e.member);
    }

    bool undo_last()
    {
        if (undo.empty()) return false;
        working = std::move(undo.back());
        undo.pop_back();
        return true;
    }

    /// Front with the edited copy in place of the selected member.
    std::vector<Costed> exported_front() const
    {
        auto out = front;
        if (working && selected >= 0) out[static_cast<std::size_t>(selected)] = *working;
        return out;
    }
};

/// In-memory sessions with LRU eviction.
class SessionManager {
public:
    explicit SessionManager(std::size_t capacity = 64) : capacity_(std::max<std::size_t>(1, capacity)) {}

    std::shared_ptr<Session> create(MvSpec spec)
    {
        auto s = std::make_shared<Session>();
        s->graph = build_graph(spec);
        s->cfg = spec.ga;
        s->weights = spec.weights;
        s->spec = std::move(spec);
        std::lock_guard lock(mu_);
        s->id = "s" + std::to_string(++counter_);
        lru_.push_front(s->id);
        map_[s->id] = {s, lru_.begin()};
        while (map_.size() > capacity_) {
            map_.erase(lru_.back());
            lru_.pop_back();
        }
        return s;
    }

    std::shared_ptr<Session> get(const std::string& id)
    {
        std::lock_guard lock(mu_);
        const auto it = map_.find(id);
        if (it == map_.end()) return nullptr;
        lru_.splice(lru_.begin(), lru_, it->second.second);
        return it->second.first;
    }

    std::size_t size() const
    {
        std::lock_guard lock(mu_);
        return map_.size();
    }

private:
    std::size_t capacity_;
    std::uint64_t counter_ = 0;
    std::list<std::string> lru_;
    std::unordered_map<std::string, std::pair<std::shared_ptr<Session>, std::list<std::string>::iterator>> map_;
    mutable std::mutex mu_;
};

} // namespace mvcolor
