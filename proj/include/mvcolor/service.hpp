/*
 *  service.hpp
 *  HTTP/JSON API over sessions (cpp-httplib).
 *
 *    POST /sessions                    body: MvSpec           -> session summary
 *    POST /sessions/{id}/optimize      body: {ga?, weights?}  -> front
 *    GET  /sessions/{id}/front                                -> front
 *    POST /sessions/{id}/select        body: {index}          -> current member
 *    POST /sessions/{id}/edit          body: {view,key,color} -> current member
 *    POST /sessions/{id}/undo                                 -> current member
 *    GET  /sessions/{id}/export                               -> result document
 *    GET  /palettes
 *
 *  Errors are {"error": {"code", "message"}} with 400/404/409/422.
 */

#pragma once

#include "mvcolor/session.hpp"

#include <httplib.h>
#include <json.hpp>

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>

namespace mvcolor {

struct ServiceOptions {
    std::optional<std::filesystem::path> params_path; // persisted after each optimize when set
    std::optional<std::filesystem::path> ui_dir;
    std::string cors_origin = "http://localhost:5173";
    std::size_t max_sessions = 64;
};

/// Machine-readable summary of the inferred graph (relation badges etc.).
inline ojson graph_summary(const MvGraph& g)
{
    ojson j;
    ojson views = ojson::array();
    for (std::size_t v = 0; v < g.views.size(); ++v) {
        const auto& view = g.views[v];
        ojson e{{"id", view.id},
                {"chart_kind", view.chart_kind},
                {"color_field", view.color_field},
                {"colormap_kind", view.colormap_kind == ColormapKind::Continuous ? "continuous" : "discrete"},
                {"group", g.view_group[v]},
                {"editable", g.is_root(g.view_group[v])},
                {"keys", g.view_keys(static_cast<int>(v))}};
        if (view.embedded_chart_doc) e["embedded_chart_doc"] = *view.embedded_chart_doc;
        views.push_back(std::move(e));
    }
    j["views"] = std::move(views);
    ojson rel = ojson::array();
    for (const auto& e : g.data_edges) {
        ojson r{{"a", g.views[e.a].id}, {"b", g.views[e.b].id}, {"kind", to_string(e.relation.kind)}};
        if (e.relation.kind == Relation::Kind::Hierarchy)
            r["parent"] = {{"view", e.relation.parent_view}, {"key", e.relation.parent_key}};
        rel.push_back(std::move(r));
    }
    j["relations"] = std::move(rel);
    ojson groups = ojson::array();
    for (const auto& grp : g.groups) {
        ojson e{{"id", grp.id}, {"views", ojson::array()}, {"sequential", grp.sequential}, {"entities", grp.entities}};
        for (int v : grp.views) e["views"].push_back(g.views[v].id);
        if (grp.parent_link) {
            const auto& link = g.links[*grp.parent_link];
            e["parent"] = {{"group", link.parent_group}, {"key", link.parent_key}};
        }
        groups.push_back(std::move(e));
    }
    j["groups"] = std::move(groups);
    j["warnings"] = g.warnings;
    return j;
}

class Service {
public:
    explicit Service(PaletteLibrary lib, ServiceOptions opt = {})
        : lib_(std::move(lib)), opt_(std::move(opt)), sessions_(opt_.max_sessions)
    {
        if (opt_.params_path) store_ = ParamsStore::load(*opt_.params_path);
    }

    SessionManager& sessions() { return sessions_; }

    ParamsStore store_snapshot() const
    {
        std::lock_guard lock(store_mu_);
        return store_;
    }

    void install(httplib::Server& srv)
    {
        srv.set_default_headers({{"Access-Control-Allow-Origin", opt_.cors_origin},
                                 {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                 {"Access-Control-Allow-Headers", "Content-Type"}});
        srv.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

        srv.Post("/sessions", wrap([this](const httplib::Request& req, httplib::Response& res) {
                     auto spec = parse_mvspec(parse_body(req));
                     auto s = sessions_.create(std::move(spec));
                     ojson j{{"id", s->id}, {"case_id", s->spec.case_id}};
                     j["graph"] = graph_summary(s->graph);
                     send(res, j, 201);
                 }));

        srv.Post(R"(/sessions/([^/]+)/optimize)", wrap([this](const httplib::Request& req, httplib::Response& res) {
                     auto s = session_or_throw(req);
                     const auto body = req.body.empty() ? nlohmann::json::object() : parse_body(req);
                     GaConfig cfg;
                     Weights w;
                     {
                         std::lock_guard lock(s->mu);
                         cfg = body.contains("ga") ? parse_ga(body.at("ga"), s->cfg) : s->cfg;
                         w = body.contains("weights") ? parse_weights(body.at("weights"), s->weights) : s->weights;
                     }
                     cfg.validate();
                     bool expected = false;
                     if (!s->busy.compare_exchange_strong(expected, true)) throw Busy{};
                     struct Release {
                         std::atomic<bool>& flag;
                         ~Release() { flag = false; }
                     } release{s->busy};

                     ParamsStore local = store_snapshot();
                     auto result = optimize(s->graph, lib_, local, s->spec.case_id, w, cfg);
                     {
                         std::lock_guard lock(store_mu_);
                         store_.merge(local);
                         if (opt_.params_path) store_.save(*opt_.params_path);
                     }
                     std::lock_guard lock(s->mu);
                     s->cfg = cfg;
                     s->weights = w;
                     s->front = std::move(result.front.members);
                     s->history = {std::move(result.best_total), std::move(result.front_sizes)};
                     s->select(0);
                     send(res, front_json(*s));
                 }));

        srv.Get(R"(/sessions/([^/]+)/front)", wrap([this](const httplib::Request& req, httplib::Response& res) {
                    auto s = session_or_throw(req);
                    std::lock_guard lock(s->mu);
                    send(res, front_json(*s));
                }));

        srv.Post(R"(/sessions/([^/]+)/select)", wrap([this](const httplib::Request& req, httplib::Response& res) {
                     auto s = session_or_throw(req);
                     const auto body = parse_body(req);
                     if (!body.contains("index") || !body.at("index").is_number_integer())
                         throw Error(ErrorCode::Parse, "body needs an integer \"index\"");
                     reject_if_busy(*s);
                     std::lock_guard lock(s->mu);
                     const int idx = body.at("index").get<int>();
                     if (idx < 0 || idx >= static_cast<int>(s->front.size())) throw NotFound{"front index out of range"};
                     s->select(idx);
                     send(res, current_json(*s, {}, {}));
                 }));

        srv.Post(R"(/sessions/([^/]+)/edit)", wrap([this](const httplib::Request& req, httplib::Response& res) {
                     auto s = session_or_throw(req);
                     const auto body = parse_body(req);
                     for (const char* k : {"view", "key", "color"})
                         if (!body.contains(k) || !body.at(k).is_string())
                             throw Error(ErrorCode::Parse, std::string("body needs a string \"") + k + "\"");
                     const Color color = from_hex(body.at("color").get<std::string>());
                     reject_if_busy(*s);
                     std::lock_guard lock(s->mu);
                     if (!s->working) throw NotFound{"no member selected; run optimize first"};
                     const ParamsStore store = store_snapshot();
                     auto out = propagate_edit(*s->working, s->graph, store, s->spec.case_id, s->weights, s->cfg,
                                               body.at("view").get<std::string>(), body.at("key").get<std::string>(),
                                               color);
                     auto changed = out.changed_views;
                     auto warnings = out.warnings;
                     s->apply(std::move(out));
                     send(res, current_json(*s, changed, warnings));
                 }));

        srv.Post(R"(/sessions/([^/]+)/undo)", wrap([this](const httplib::Request& req, httplib::Response& res) {
                     auto s = session_or_throw(req);
                     reject_if_busy(*s);
                     std::lock_guard lock(s->mu);
                     if (!s->working) throw NotFound{"no member selected"};
                     if (!s->undo_last()) throw NotFound{"nothing to undo"};
                     send(res, current_json(*s, {}, {}));
                 }));

        srv.Get(R"(/sessions/([^/]+)/export)", wrap([this](const httplib::Request& req, httplib::Response& res) {
                    auto s = session_or_throw(req);
                    std::lock_guard lock(s->mu);
                    if (!s->has_front()) throw NotFound{"session has no optimized front"};
                    send(res, export_document(*s));
                }));

        srv.Get("/palettes", wrap([this](const httplib::Request&, httplib::Response& res) {
                    send(res, palettes_to_json(lib_));
                }));

        if (opt_.ui_dir) srv.set_mount_point("/", opt_.ui_dir->string());
    }

    /// The export body: the generate result format with the edited member in place.
    static ojson export_document(const Session& s)
    {
        return result_document(s.spec, s.graph, s.cfg, s.weights, s.exported_front(), s.history, s.selected);
    }

private:
    struct Busy {};
    struct NotFound {
        std::string message;
    };

    static nlohmann::json parse_body(const httplib::Request& req)
    {
        try {
            return nlohmann::json::parse(req.body);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::Parse, std::string("malformed JSON body: ") + e.what());
        }
    }

    static void send(httplib::Response& res, const ojson& j, int status = 200)
    {
        res.status = status;
        res.set_content(j.dump(), "application/json");
    }

    static void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message)
    {
        send(res, ojson{{"error", {{"code", code}, {"message", message}}}}, status);
    }

    static int status_for(ErrorCode c)
    {
        switch (c) {
        case ErrorCode::Parse:
        case ErrorCode::InvalidConfig:
        case ErrorCode::SchemaMismatch: return 400;
        case ErrorCode::Io: return 500;
        default: return 422;
        }
    }

    template <typename F>
    static httplib::Server::Handler wrap(F f)
    {
        return [f](const httplib::Request& req, httplib::Response& res) {
            try {
                f(req, res);
            } catch (const Busy&) {
                send_error(res, 409, "Busy", "an optimization is running for this session");
            } catch (const NotFound& e) {
                send_error(res, 404, "NotFound", e.message);
            } catch (const Error& e) {
                send_error(res, status_for(e.code()), to_string(e.code()), e.what());
            } catch (const nlohmann::json::exception& e) {
                send_error(res, 400, "Parse", e.what());
            } catch (const std::exception& e) {
                send_error(res, 500, "Internal", e.what());
            }
        };
    }

    std::shared_ptr<Session> session_or_throw(const httplib::Request& req)
    {
        auto s = sessions_.get(req.matches[1]);
        if (!s) throw NotFound{"unknown session '" + std::string(req.matches[1]) + "'"};
        return s;
    }

    static void reject_if_busy(const Session& s)
    {
        if (s.busy) throw Busy{};
    }

    static ojson front_json(const Session& s)
    {
        ojson j{{"id", s.id}, {"case_id", s.spec.case_id}, {"selected", s.selected}};
        ojson members = ojson::array();
        for (std::size_t i = 0; i < s.front.size(); ++i) members.push_back(member_to_json(s.front[i], s.graph, static_cast<int>(i)));
        j["front"] = std::move(members);
        if (s.working) j["current"] = member_to_json(*s.working, s.graph, s.selected);
        return j;
    }

    static ojson current_json(const Session& s, const std::vector<std::string>& changed,
                              const std::vector<std::string>& warnings)
    {
        return ojson{{"id", s.id},
                     {"selected", s.selected},
                     {"changed_views", changed},
                     {"warnings", warnings},
                     {"current", member_to_json(*s.working, s.graph, s.selected)}};
    }

    PaletteLibrary lib_;
    ServiceOptions opt_;
    SessionManager sessions_;
    ParamsStore store_;
    mutable std::mutex store_mu_;
};

/// Blocking server loop.
inline int serve(Service& svc, const std::string& host, int port)
{
    httplib::Server srv;
    svc.install(srv);
    return srv.listen(host, port) ? 0 : 1;
}

} // namespace mvcolor
