#pragma once

#include "relaq/relation_index.hpp"

#include <chrono>
#include <condition_variable>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace relaq {

enum class BuildState { Pending, Building, Ready, Failed };

std::string_view to_string(BuildState state) noexcept;

struct ArtifactStatus {
    std::string artifact;
    BuildState state = BuildState::Pending;
    std::chrono::milliseconds elapsed{0};
};

struct BuildStatus {
    std::vector<ArtifactStatus> artifacts;

    [[nodiscard]] bool all_ready() const noexcept;
    [[nodiscard]] std::optional<BuildState> state(std::string_view artifact) const;
};

// Builds relation indexes on a single background worker. Pending builds run in
// queue order; require() moves its kind to the front of the queue and blocks
// until that index alone is ready.
class IndexBuilder {
public:
    using Job = std::function<RelationIndex()>;

    struct Hooks {
        // runs on the worker right before a build; tests inject delays here
        std::function<void(RelationKind)> before_build;
        // every state change, in order, from the thread that caused it
        std::function<void(RelationKind, BuildState)> on_transition;
    };

    IndexBuilder(std::vector<std::pair<RelationKind, Job>> jobs, Hooks hooks = {});
    // all indexes already built, e.g. loaded from disk
    explicit IndexBuilder(std::vector<RelationIndex> ready);
    ~IndexBuilder();

    IndexBuilder(const IndexBuilder&) = delete;
    IndexBuilder& operator=(const IndexBuilder&) = delete;

    // true if everything is ready (or failed) within the timeout
    bool wait_all_for(std::chrono::milliseconds timeout) const;
    void wait_all() const;

    // throws Error(IndexUnavailable) if the kind is unknown or its build failed
    const RelationIndex& require(RelationKind kind);
    void promote(RelationKind kind);

    [[nodiscard]] BuildState state(RelationKind kind) const;
    [[nodiscard]] const RelationIndex* try_get(RelationKind kind) const;
    [[nodiscard]] std::vector<RelationKind> pending_order() const;
    [[nodiscard]] std::vector<RelationKind> completion_order() const;
    [[nodiscard]] std::vector<ArtifactStatus> status() const;
    [[nodiscard]] std::vector<RelationKind> kinds() const;

private:
    struct Slot {
        Job job;
        BuildState state = BuildState::Pending;
        std::optional<RelationIndex> index;
        std::exception_ptr error;
        std::chrono::steady_clock::time_point started{};
        std::chrono::milliseconds elapsed{0};
    };

    void run();
    void transition(RelationKind kind, Slot& slot, BuildState next, std::unique_lock<std::mutex>& lock);

    Hooks hooks_;
    mutable std::mutex mutex_;
    mutable std::condition_variable changed_;
    std::map<RelationKind, Slot> slots_;
    std::vector<RelationKind> order_;
    std::vector<RelationKind> queue_;
    std::vector<RelationKind> completed_;
    bool stopping_ = false;
    std::thread worker_;
};

} // namespace relaq
