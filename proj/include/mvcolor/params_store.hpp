/*
 *  params_store.hpp
 *  Historical min/max extrema used for min-max normalization, kept per case
 *  and per metric key and persisted as JSON:
 *
 *      { "<case_id>": { "<metric_key>": { "min_cost": x, "max_cost": y } } }
 */

#pragma once

#include "mvcolor/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <string>

namespace mvcolor {

struct Extrema {
    double min_cost = 0.0;
    double max_cost = 0.0;

    friend bool operator==(const Extrema&, const Extrema&) = default;
};

class ParamsStore {
public:
    using CaseTable = std::map<std::string, Extrema>;

    const Extrema* find(const std::string& case_id, const std::string& key) const
    {
        const auto c = cases_.find(case_id);
        if (c == cases_.end()) return nullptr;
        const auto k = c->second.find(key);
        return k == c->second.end() ? nullptr : &k->second;
    }

    /// Widen the extrema of (case, key) to include raw. A fresh key is seeded with raw.
    void observe(const std::string& case_id, const std::string& key, double raw)
    {
        auto& table = cases_[case_id];
        const auto it = table.find(key);
        if (it == table.end()) {
            table.emplace(key, Extrema{raw, raw});
            return;
        }
        it->second.min_cost = std::min(it->second.min_cost, raw);
        it->second.max_cost = std::max(it->second.max_cost, raw);
    }

    /// Min-max scaling against the current extrema without updating them.
    /// Clamped to [0,1]; unknown keys and max == min give 0.5.
    double scale(const std::string& case_id, const std::string& key, double raw) const
    {
        const Extrema* e = find(case_id, key);
        if (!e || !(e->max_cost > e->min_cost)) return 0.5;
        return std::clamp((raw - e->min_cost) / (e->max_cost - e->min_cost), 0.0, 1.0);
    }

    /// Update the extrema with raw, then scale.
    double normalize(const std::string& case_id, const std::string& key, double raw)
    {
        observe(case_id, key, raw);
        return scale(case_id, key, raw);
    }

    void merge(const ParamsStore& other)
    {
        for (const auto& [case_id, table] : other.cases_)
            for (const auto& [key, e] : table) {
                observe(case_id, key, e.min_cost);
                observe(case_id, key, e.max_cost);
            }
    }

    const CaseTable* table(const std::string& case_id) const
    {
        const auto c = cases_.find(case_id);
        return c == cases_.end() ? nullptr : &c->second;
    }

    bool empty() const noexcept { return cases_.empty(); }

    nlohmann::ordered_json to_json() const
    {
        nlohmann::ordered_json j = nlohmann::ordered_json::object();
        for (const auto& [case_id, table] : cases_) {
            auto& cj = j[case_id] = nlohmann::ordered_json::object();
            for (const auto& [key, e] : table) cj[key] = {{"min_cost", e.min_cost}, {"max_cost", e.max_cost}};
        }
        return j;
    }

    static ParamsStore from_json(const nlohmann::json& j)
    {
        ParamsStore s;
        try {
            for (const auto& [case_id, table] : j.items())
                for (const auto& [key, e] : table.items()) {
                    const Extrema x{e.at("min_cost").get<double>(), e.at("max_cost").get<double>()};
                    if (!(x.min_cost <= x.max_cost))
                        throw Error(ErrorCode::Parse, "params entry " + case_id + "/" + key + " has min > max");
                    s.cases_[case_id][key] = x;
                }
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::Parse, std::string("params file: ") + e.what());
        }
        return s;
    }

    /// Missing file yields an empty store.
    static ParamsStore load(const std::filesystem::path& path)
    {
        if (!std::filesystem::exists(path)) return {};
        std::ifstream in(path);
        if (!in) throw Error(ErrorCode::Io, "cannot read '" + path.string() + "'");
        try {
            return from_json(nlohmann::json::parse(in));
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
        }
    }

    /// Write to a sibling temp file, flush, then rename over the target so a
    /// reader never observes a partial file. `before_commit` runs between the
    /// write and the rename (test hook).
    void save(const std::filesystem::path& path,
              const std::function<void(const std::filesystem::path&)>& before_commit = {}) const
    {
        namespace fs = std::filesystem;
        const fs::path tmp = path.string() + ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc);
            if (!out) throw Error(ErrorCode::Io, "cannot write '" + tmp.string() + "'");
            out << to_json().dump(2) << '\n';
            out.flush();
            if (!out) throw Error(ErrorCode::Io, "short write to '" + tmp.string() + "'");
        }
        if (before_commit) before_commit(tmp);
        std::error_code ec;
        fs::rename(tmp, path, ec);
        if (ec) throw Error(ErrorCode::Io, "rename to '" + path.string() + "' failed: " + ec.message());
    }

private:
    std::map<std::string, CaseTable> cases_;
};

} // namespace mvcolor
