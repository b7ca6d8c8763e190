/*
 *  cli.hpp
 *  Command implementations behind the mvcolor executable.
 *
 *  exit codes: 0 ok, 1 usage, 2 parse / invalid input, 3 graph error,
 *              4 optimization infeasible, 5 assignment schema mismatch
 */

#pragma once

#include "mvcolor/service.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace mvcolor {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitParse = 2,
    kExitGraph = 3,
    kExitInfeasible = 4,
    kExitSchema = 5,
};

inline int exit_code_for(const Error& e)
{
    if (e.is_graph_error()) return kExitGraph;
    switch (e.code()) {
    case ErrorCode::AllRejected: return kExitInfeasible;
    case ErrorCode::SchemaMismatch:
    case ErrorCode::UnknownEntity: return kExitSchema;
    default: return kExitParse;
    }
}

struct CommonArgs {
    std::string spec_path;
    std::string palettes_path;
    std::optional<int> pick;
};

struct GenerateArgs : CommonArgs {
    std::string params_path = "params.json";
    std::string out_path = "result.json";
    std::optional<std::uint64_t> seed;
    bool random_seed = false;
    std::optional<int> pop_size, generations, n_best;
    std::optional<double> step, crossover_rate, hard_floor;
    std::string weights;
    std::string scale_path = kDefaultScalePath;
    std::optional<std::size_t> gallery_size;
};

struct EvaluateArgs : CommonArgs {
    std::vector<std::string> assignments;
    std::string json_path;
};

struct BaselineArgs : CommonArgs {
    std::string out_path = "baseline.json";
};

struct ServeArgs {
    std::string palettes_path;
    std::string params_path = "params.json";
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string ui_dir;
    std::string cors_origin = "http://localhost:5173";
};

namespace detail {

inline Weights parse_weight_list(const std::string& s, Weights base)
{
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidConfig, "--weights expects four numbers w_d,w_gdis,w_hu,w_con");
        }
    }
    if (v.size() != 4) throw Error(ErrorCode::InvalidConfig, "--weights expects four numbers w_d,w_gdis,w_hu,w_con");
    for (double x : v)
        if (!(x >= 0.0)) throw Error(ErrorCode::InvalidConfig, "weights must be nonnegative");
    base.w_d = v[0];
    base.w_gdis = v[1];
    base.w_hu = v[2];
    base.w_con = v[3];
    return base;
}

inline PaletteLibrary palettes_from(const std::string& path)
{
    return path.empty() ? default_palettes() : load_palettes(path);
}

inline void print_eval_line(std::ostream& out, const ojson& eval)
{
    auto num = [](const ojson& v) {
        if (v.is_null()) return std::string("n/a");
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v.get<double>());
        return std::string(buf);
    };
    out << "WCD " << num(eval.at("overall_wcd")) << "  PRS " << num(eval.at("prs")) << "  HQS "
        << num(eval.at("hqs_mean")) << '\n';
}

} // namespace detail

inline int cmd_generate(const GenerateArgs& a, std::ostream& out, std::ostream& err)
{
    namespace fs = std::filesystem;
    const fs::path out_path(a.out_path);
    if (out_path.has_parent_path() && !fs::is_directory(out_path.parent_path())) {
        err << "error: output directory '" << out_path.parent_path().string() << "' does not exist\n";
        return kExitUsage;
    }
    MvSpec spec = load_mvspec(a.spec_path);
    GaConfig cfg = spec.ga;
    if (a.seed) cfg.rng_seed = *a.seed;
    if (a.random_seed) cfg.rng_seed = std::random_device{}() * 0x100000000ULL + std::random_device{}();
    if (a.pop_size) cfg.pop_size = *a.pop_size;
    if (a.generations) cfg.generations = *a.generations;
    if (a.n_best) cfg.n_best = *a.n_best;
    if (a.step) cfg.step = *a.step;
    if (a.crossover_rate) cfg.crossover_rate = *a.crossover_rate;
    if (a.hard_floor) cfg.hard_floor_delta_e = *a.hard_floor;
    cfg.validate();
    const Weights w = a.weights.empty() ? spec.weights : detail::parse_weight_list(a.weights, spec.weights);

    const MvGraph g = build_graph(spec);
    const PaletteLibrary lib = detail::palettes_from(a.palettes_path);
    ParamsStore store = ParamsStore::load(a.params_path);

    auto result = optimize(g, lib, store, spec.case_id, w, cfg);
    const auto& front = result.front.members;
    const int pick = a.pick.value_or(0);
    const std::size_t shown = a.gallery_size ? std::min(*a.gallery_size, front.size()) : front.size();
    if (pick < 0 || pick >= static_cast<int>(shown)) {
        err << "error: --pick " << pick << " is outside the written front (size " << shown << ")\n";
        return kExitUsage;
    }

    const auto doc = result_document(spec, g, cfg, w, front, {result.best_total, result.front_sizes}, pick, a.gallery_size);
    write_text_file(out_path, dump_document(doc));
    const auto charts = write_patched_charts(out_path, g, quantize(front[static_cast<std::size_t>(pick)].views), a.scale_path);
    store.save(a.params_path);

    out << "case " << spec.case_id << ": " << front.size() << " front members, seed " << cfg.rng_seed << '\n';
    out << "selected " << pick << ": ";
    detail::print_eval_line(out, doc.at("front").at(static_cast<std::size_t>(pick)).at("eval"));
    out << "wrote " << out_path.string() << '\n';
    for (const auto& c : charts) out << "wrote " << c.string() << '\n';
    for (const auto& warning : g.warnings) err << "warning: " << warning << '\n';
    return kExitOk;
}

inline int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream&)
{
    const MvSpec spec = load_mvspec(a.spec_path);
    const MvGraph g = build_graph(spec);
    std::vector<std::pair<std::string, Assignment>> items;
    for (const auto& path : a.assignments)
        items.emplace_back(std::filesystem::path(path).filename().string(), load_assignment(path, g, a.pick));
    const auto rep = report(items, g);
    out << to_table(rep);
    if (!a.json_path.empty()) write_text_file(a.json_path, to_json(rep, g).dump(2) + "\n");
    return kExitOk;
}

inline int cmd_baseline(const BaselineArgs& a, std::ostream& out, std::ostream&)
{
    const MvSpec spec = load_mvspec(a.spec_path);
    const MvGraph g = build_graph(spec);
    const auto base = naive_baseline(g, detail::palettes_from(a.palettes_path), spec.ga.hard_floor_delta_e);
    ojson doc{{"case_id", spec.case_id}, {"views", assignment_to_json(quantize(base), g)}};
    write_text_file(a.out_path, dump_document(doc));
    out << "wrote " << a.out_path << '\n';
    return kExitOk;
}

inline int cmd_serve(const ServeArgs& a, std::ostream& out, std::ostream& err)
{
    ServiceOptions opt;
    if (!a.params_path.empty()) opt.params_path = a.params_path;
    if (!a.ui_dir.empty()) {
        if (!std::filesystem::is_directory(a.ui_dir)) {
            err << "error: --ui-dir '" << a.ui_dir << "' is not a directory\n";
            return kExitUsage;
        }
        opt.ui_dir = a.ui_dir;
    }
    opt.cors_origin = a.cors_origin;
    Service svc(detail::palettes_from(a.palettes_path), opt);
    out << "listening on http://" << a.host << ":" << a.port << '\n' << std::flush;
    if (serve(svc, a.host, a.port) != 0) {
        err << "error: cannot listen on " << a.host << ":" << a.port << '\n';
        return kExitUsage;
    }
    return kExitOk;
}

/// Parse argv and dispatch. Library errors are mapped to exit codes here.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"Colormap generation and evaluation for multiple-view visualizations", "mvcolor"};
    app.require_subcommand(1);

    GenerateArgs gen;
    EvaluateArgs ev;
    EvaluateArgs cmp;
    BaselineArgs base;
    ServeArgs srv;
    std::string pick_text;

    auto add_spec = [](CLI::App* c, CommonArgs& args) {
        c->add_option("--spec", args.spec_path, "MvSpec JSON file")->required()->check(CLI::ExistingFile);
        c->add_option("--palettes", args.palettes_path, "seed palette library (JSON)")->check(CLI::ExistingFile);
    };

    auto* g = app.add_subcommand("generate", "optimize colormaps and write a result document");
    add_spec(g, gen);
    g->add_option("--params", gen.params_path, "normalization extrema file");
    g->add_option("--out", gen.out_path, "result document path");
    auto* seed_opt = g->add_option("--seed", gen.seed, "RNG seed");
    g->add_flag("--random-seed", gen.random_seed, "seed from the system entropy source")->excludes(seed_opt);
    g->add_option("--pop-size", gen.pop_size);
    g->add_option("--generations", gen.generations);
    g->add_option("--n-best", gen.n_best);
    g->add_option("--step", gen.step);
    g->add_option("--crossover-rate", gen.crossover_rate);
    g->add_option("--hard-floor", gen.hard_floor, "minimum within-view CIEDE2000");
    g->add_option("--weights", gen.weights, "w_d,w_gdis,w_hu,w_con");
    g->add_option("--pick", gen.pick, "front member patched into chart documents");
    g->add_option("--scale-path", gen.scale_path, "dotted path of the color scale in chart documents");
    g->add_option("--gallery-size", gen.gallery_size, "number of front members written");

    auto* e = app.add_subcommand("evaluate", "score one assignment (WCD, PRS, HQS)");
    add_spec(e, ev);
    e->add_option("assignment", ev.assignments, "assignment or result document")->required()->expected(1)->check(CLI::ExistingFile);
    e->add_option("--pick", ev.pick, "front member when given a result document");
    e->add_option("--json", ev.json_path, "also write the report as JSON");

    auto* c = app.add_subcommand("compare", "score two assignments side by side");
    add_spec(c, cmp);
    c->add_option("assignments", cmp.assignments, "two assignment or result documents")->required()->expected(2)->check(CLI::ExistingFile);
    c->add_option("--pick", cmp.pick, "front member when given result documents");
    c->add_option("--json", cmp.json_path, "also write the report as JSON");

    auto* b = app.add_subcommand("baseline", "write the naive shared-palette assignment");
    add_spec(b, base);
    b->add_option("--out", base.out_path, "assignment document path");

    auto* s = app.add_subcommand("serve", "run the HTTP service");
    s->add_option("--palettes", srv.palettes_path)->check(CLI::ExistingFile);
    s->add_option("--params", srv.params_path);
    s->add_option("--host", srv.host);
    s->add_option("--port", srv.port)->check(CLI::Range(1, 65535));
    s->add_option("--ui-dir", srv.ui_dir, "static UI bundle served under /");
    s->add_option("--cors-origin", srv.cors_origin);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& pe) {
        err << "error: " << pe.what() << "\n" << app.help();
        return kExitUsage;
    }

    try {
        if (g->parsed()) return cmd_generate(gen, out, err);
        if (e->parsed()) return cmd_evaluate(ev, out, err);
        if (c->parsed()) return cmd_evaluate(cmp, out, err);
        if (b->parsed()) return cmd_baseline(base, out, err);
        if (s->parsed()) return cmd_serve(srv, out, err);
    } catch (const Error& ex) {
        err << "error: " << ex.what() << '\n';
        return exit_code_for(ex);
    }
    return kExitUsage;
}

} // namespace mvcolor
