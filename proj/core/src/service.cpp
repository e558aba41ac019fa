#include "relaq/service.hpp"

#include "relaq/error.hpp"
#include "relaq/matcher.hpp"
#include "relaq/normalize.hpp"
#include "relaq/recommender.hpp"
#include "relaq/result_json.hpp"

#include "httplib.h"

namespace relaq {

namespace {

int http_status(Errc code)
{
    switch (code) {
    case Errc::UnknownSeries:
    case Errc::SchemaViolation:
    case Errc::InvalidQuery:
    case Errc::DegenerateSketch:
    case Errc::InvalidParams:
    case Errc::WindowTooLong:
    case Errc::UnknownKey:
    case Errc::TooShort:
    case Errc::LengthMismatch:
        return 400;
    case Errc::FocusUnresolved: return 409;
    case Errc::IndexUnavailable: return 503;
    case Errc::StaleArtifacts:
    case Errc::ArtifactIo:
        return 500;
    default: return 400;
    }
}

Response error_response(const Error& e)
{
    return {http_status(e.code()), error_json(e)};
}

Response not_found(std::string_view what)
{
    return {404, error_json("NotFound", what)};
}

bool has_errors(const std::vector<Diagnostic>& diagnostics)
{
    for (const auto& d : diagnostics) {
        if (d.severity == Severity::Error) {
            return true;
        }
    }
    return false;
}

} // namespace

struct Service::Http {
    httplib::Server server;
};

Service::Service(ServiceOptions options)
    : options_(std::move(options)), http_(std::make_unique<Http>())
{
    auto& srv = http_->server;
    auto send = [](httplib::Response& res, const Response& r) {
        res.status = r.status;
        res.set_content(r.body, r.content_type);
    };

    srv.set_default_headers({{"Access-Control-Allow-Origin", options_.cors_origin},
        {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
        {"Access-Control-Allow-Headers", "Content-Type"}});
    srv.Options(R"(/v1/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    srv.Post("/v1/datasets", [this, send](const httplib::Request& req, httplib::Response& res) {
        if (!req.is_multipart_form_data() || !req.has_file("data")) {
            send(res, {400, error_json("SchemaViolation", "expected multipart form with a 'data' part")});
            return;
        }
        PreprocessParams params;
        try {
            if (req.has_file("params")) {
                params = parse_params(req.get_file_value("params").content);
            } else {
                if (!req.has_file("sampling_length") || !req.has_file("box_length")) {
                    throw Error(Errc::InvalidParams, "sampling_length and box_length are required");
                }
                params.sampling_length = std::stoi(req.get_file_value("sampling_length").content);
                params.box_length = std::stoi(req.get_file_value("box_length").content);
            }
        } catch (const Error& e) {
            send(res, error_response(e));
            return;
        } catch (const std::exception&) {
            send(res, {400, error_json("InvalidParams", "sampling_length and box_length must be integers")});
            return;
        }
        const std::string config = req.has_file("config") ? req.get_file_value("config").content : std::string();
        send(res, upload(req.get_file_value("data").content, config, params));
    });
    srv.Get(R"(/v1/datasets/([^/]+)/status)", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, status(req.matches[1].str()));
    });
    srv.Post(R"(/v1/datasets/([^/]+)/queries)", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, query(req.matches[1].str(), req.body));
    });
    srv.Post(R"(/v1/datasets/([^/]+)/guidance)", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, guidance(req.matches[1].str(), req.body));
    });
    srv.Get(R"(/v1/datasets/([^/]+)/series/([^/]+)/trend-suggestions)",
        [this, send](const httplib::Request& req, httplib::Response& res) {
            send(res, trend_suggestions(req.matches[1].str(), req.matches[2].str(),
                req.has_param("prefix") ? req.get_param_value("prefix") : std::string()));
        });
    srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "unexpected failure";
        try {
            std::rethrow_exception(ep);
        } catch (const Error& e) {
            res.status = http_status(e.code());
            res.set_content(error_json(e), "application/json");
            return;
        } catch (const std::exception& e) {
            what = e.what();
        } catch (...) {
        }
        res.status = 500;
        res.set_content(error_json("Internal", what), "application/json");
    });
}

Service::~Service()
{
    stop();
}

std::string Service::add(std::shared_ptr<const Artifacts> artifacts)
{
    std::lock_guard lock(mutex_);
    auto id = artifacts->id();
    datasets_.emplace(id, std::move(artifacts));
    return id;
}

std::shared_ptr<const Artifacts> Service::find(std::string_view id) const
{
    std::lock_guard lock(mutex_);
    auto it = datasets_.find(id);
    return it == datasets_.end() ? nullptr : it->second;
}

Response Service::upload(std::string_view data_csv, std::string_view config_csv, const PreprocessParams& params)
{
    try {
        params.validate();
        auto dataset = parse_dataset(data_csv);
        auto labels = config_csv.empty() ? MetaLabels{} : parse_config(config_csv);
        const auto diagnostics = validate(dataset, labels);
        if (has_errors(diagnostics)) {
            std::string code;
            for (const auto& d : diagnostics) {
                if (d.severity == Severity::Error) {
                    code = d.code;
                    break;
                }
            }
            return {400, diagnostics_json(diagnostics, code)};
        }
        const auto id = dataset_id(dataset, labels, params);
        if (auto existing = find(id)) {
            return {201, handle_json(*existing)};
        }
        auto artifacts = preprocess(std::move(dataset), std::move(labels), params, options_.preprocess);
        std::lock_guard lock(mutex_);
        auto [it, inserted] = datasets_.emplace(id, std::move(artifacts));
        return {201, handle_json(*it->second)};
    } catch (const Error& e) {
        return error_response(e);
    }
}

Response Service::status(std::string_view id) const
{
    auto artifacts = find(id);
    if (!artifacts) {
        return not_found("no dataset '" + std::string(id) + "'");
    }
    return {200, status_json(*artifacts)};
}

Response Service::query(std::string_view id, std::string_view body) const
{
    auto artifacts = find(id);
    if (!artifacts) {
        return not_found("no dataset '" + std::string(id) + "'");
    }
    try {
        const auto q = parse_query(body);
        const auto diagnostics = validate_query(q, *artifacts);
        if (has_errors(diagnostics)) {
            return {400, diagnostics_json(diagnostics)};
        }
        ExecuteOptions opt;
        opt.cap = options_.result_cap;
        opt.timeout = options_.query_timeout;
        return {200, results_json(q, *artifacts, execute_query(q, *artifacts, opt))};
    } catch (const Error& e) {
        return error_response(e);
    }
}

Response Service::guidance(std::string_view id, std::string_view body) const
{
    auto artifacts = find(id);
    if (!artifacts) {
        return not_found("no dataset '" + std::string(id) + "'");
    }
    try {
        const auto request = parse_guidance_request(body);
        const auto diagnostics = validate_query(request.query, *artifacts);
        if (has_errors(diagnostics)) {
            return {400, diagnostics_json(diagnostics)};
        }
        RecommendOptions opt;
        opt.lag_range = request.lag_range;
        opt.execute.cap = options_.result_cap;
        opt.execute.timeout = options_.query_timeout;
        const auto matrix = recommend(request.query, request.focus, *artifacts, opt);
        return {200, guidance_json(request.query, matrix)};
    } catch (const Error& e) {
        return error_response(e);
    }
}

Response Service::trend_suggestions(std::string_view id, std::string_view series, std::string_view prefix) const
{
    auto artifacts = find(id);
    if (!artifacts) {
        return not_found("no dataset '" + std::string(id) + "'");
    }
    const auto index = artifacts->dataset().index_of(series);
    if (!index) {
        return not_found("no series '" + std::string(series) + "'");
    }
    for (char c : prefix) {
        if (c < 'a' || c >= static_cast<char>('a' + kAlphabetSize)) {
            return {400, error_json("SchemaViolation", "prefix may only contain the symbols a-d")};
        }
    }
    const auto next = suggest_next_symbols(artifacts->series_trie(*index), prefix);
    return {200, suggestions_json(series, prefix, next)};
}

bool Service::listen(const std::string& host, int port)
{
    return http_->server.listen(host, port);
}

int Service::bind_any_port(const std::string& host)
{
    return http_->server.bind_to_any_port(host);
}

bool Service::listen_after_bind()
{
    return http_->server.listen_after_bind();
}

void Service::wait_until_ready() const
{
    http_->server.wait_until_ready();
}

void Service::stop()
{
    if (http_ && http_->server.is_running()) {
        http_->server.stop();
    }
}

} // namespace relaq
