// Shared fixtures for the test binaries.
#pragma once

#include "mvcolor/color.hpp"
#include "mvcolor/mvgraph.hpp"
#include "mvcolor/spec_io.hpp"

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#ifndef MVCOLOR_SOURCE_DIR
#define MVCOLOR_SOURCE_DIR "."
#endif

namespace mvtest {

inline std::filesystem::path source_dir() { return MVCOLOR_SOURCE_DIR; }
inline std::filesystem::path case_path(const std::string& name) { return source_dir() / "cases" / (name + ".json"); }

inline const std::vector<std::string>& case_names()
{
    static const std::vector<std::string> names{"case1_partial", "case2_pets", "case3_covid", "case4_superstore",
                                                "case5_exports"};
    return names;
}

inline mvcolor::MvSpec load_case(const std::string& name) { return mvcolor::load_mvspec(case_path(name)); }

/// Fresh scratch directory, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag = "mvcolor")
    {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / (tag + "-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline mvcolor::ViewSpec cat_view(std::string id, std::string field, std::vector<std::string> domain,
                                  mvcolor::BBox box = {0, 0, 100, 100})
{
    mvcolor::ViewSpec v;
    v.id = std::move(id);
    v.bbox = box;
    v.color_field = std::move(field);
    v.categories = std::move(domain);
    return v;
}

inline mvcolor::ViewSpec seq_view(std::string id, std::string field, double lo, double hi,
                                  mvcolor::BBox box = {0, 0, 100, 100})
{
    mvcolor::ViewSpec v;
    v.id = std::move(id);
    v.bbox = box;
    v.color_field = std::move(field);
    v.field_kind = mvcolor::FieldKind::Sequential;
    v.range = {lo, hi};
    v.colormap_kind = mvcolor::ColormapKind::Continuous;
    return v;
}

inline mvcolor::Color random_color(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return {u(rng), u(rng), u(rng)};
}

} // namespace mvtest
