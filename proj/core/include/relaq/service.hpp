#pragma once

#include "relaq/artifacts.hpp"
#include "relaq/matcher.hpp"

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

namespace relaq {

struct ServiceOptions {
    PreprocessOptions preprocess;
    // queries running longer return the results found so far, flagged truncated
    std::chrono::milliseconds query_timeout{std::chrono::seconds(30)};
    std::string cors_origin = "*";
    std::size_t result_cap = kDefaultResultCap;
};

struct Response {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

// HTTP facade over the library, mounted under /v1. The request handlers are
// public so they can be exercised without a socket.
class Service {
public:
    explicit Service(ServiceOptions options = {});
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    // registers already preprocessed artifacts, e.g. loaded from disk
    std::string add(std::shared_ptr<const Artifacts> artifacts);
    [[nodiscard]] std::shared_ptr<const Artifacts> find(std::string_view id) const;

    Response upload(std::string_view data_csv, std::string_view config_csv, const PreprocessParams& params);
    Response status(std::string_view id) const;
    Response query(std::string_view id, std::string_view body) const;
    Response guidance(std::string_view id, std::string_view body) const;
    Response trend_suggestions(std::string_view id, std::string_view series, std::string_view prefix) const;

    // Binds and serves until stop(). Returns false if the port cannot be bound.
    bool listen(const std::string& host, int port);
    // Binds to a free port and returns it, or -1; serve with listen_after_bind().
    int bind_any_port(const std::string& host);
    bool listen_after_bind();
    void wait_until_ready() const;
    void stop();

private:
    struct Http;

    ServiceOptions options_;
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<const Artifacts>, std::less<>> datasets_;
    std::unique_ptr<Http> http_;
};

} // namespace relaq
