#include "relaq/index_builder.hpp"

#include "relaq/error.hpp"

#include <algorithm>

namespace relaq {

std::string_view to_string(BuildState state) noexcept
{
    switch (state) {
    case BuildState::Pending: return "pending";
    case BuildState::Building: return "building";
    case BuildState::Ready: return "ready";
    case BuildState::Failed: return "failed";
    }
    return "?";
}

bool BuildStatus::all_ready() const noexcept
{
    return std::all_of(artifacts.begin(), artifacts.end(),
        [](const ArtifactStatus& a) { return a.state == BuildState::Ready; });
}

std::optional<BuildState> BuildStatus::state(std::string_view artifact) const
{
    for (const auto& a : artifacts) {
        if (a.artifact == artifact) {
            return a.state;
        }
    }
    return std::nullopt;
}

IndexBuilder::IndexBuilder(std::vector<std::pair<RelationKind, Job>> jobs, Hooks hooks)
    : hooks_(std::move(hooks))
{
    for (auto& [kind, job] : jobs) {
        order_.push_back(kind);
        queue_.push_back(kind);
        slots_[kind].job = std::move(job);
    }
    if (hooks_.on_transition) {
        for (auto kind : order_) {
            hooks_.on_transition(kind, BuildState::Pending);
        }
    }
    worker_ = std::thread([this] { run(); });
}

IndexBuilder::IndexBuilder(std::vector<RelationIndex> ready)
{
    for (auto& index : ready) {
        const auto kind = index.kind();
        order_.push_back(kind);
        completed_.push_back(kind);
        auto& slot = slots_[kind];
        slot.state = BuildState::Ready;
        slot.index = std::move(index);
    }
}

IndexBuilder::~IndexBuilder()
{
    {
        std::lock_guard lock(mutex_);
        stopping_ = true;
    }
    changed_.notify_all();
    if (worker_.joinable()) {
        worker_.join();
    }
}

void IndexBuilder::transition(RelationKind kind, Slot& slot, BuildState next, std::unique_lock<std::mutex>& lock)
{
    slot.state = next;
    if (hooks_.on_transition) {
        lock.unlock();
        hooks_.on_transition(kind, next);
        lock.lock();
    }
}

void IndexBuilder::run()
{
    std::unique_lock lock(mutex_);
    while (true) {
        changed_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
        if (stopping_) {
            return;
        }
        const RelationKind kind = queue_.front();
        queue_.erase(queue_.begin());
        auto& slot = slots_.at(kind);
        slot.started = std::chrono::steady_clock::now();
        transition(kind, slot, BuildState::Building, lock);
        changed_.notify_all();

        lock.unlock();
        std::optional<RelationIndex> built;
        std::exception_ptr error;
        try {
            if (hooks_.before_build) {
                hooks_.before_build(kind);
            }
            built = slot.job();
        } catch (...) {
            error = std::current_exception();
        }
        lock.lock();

        slot.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - slot.started);
        slot.index = std::move(built);
        slot.error = error;
        completed_.push_back(kind);
        transition(kind, slot, error ? BuildState::Failed : BuildState::Ready, lock);
        changed_.notify_all();
    }
}

bool IndexBuilder::wait_all_for(std::chrono::milliseconds timeout) const
{
    std::unique_lock lock(mutex_);
    return changed_.wait_for(lock, timeout, [this] { return completed_.size() == slots_.size(); });
}

void IndexBuilder::wait_all() const
{
    std::unique_lock lock(mutex_);
    changed_.wait(lock, [this] { return completed_.size() == slots_.size(); });
}

void IndexBuilder::promote(RelationKind kind)
{
    std::lock_guard lock(mutex_);
    auto it = std::find(queue_.begin(), queue_.end(), kind);
    if (it != queue_.end() && it != queue_.begin()) {
        queue_.erase(it);
        queue_.insert(queue_.begin(), kind);
    }
}

const RelationIndex& IndexBuilder::require(RelationKind kind)
{
    if (!slots_.contains(kind)) {
        throw Error(Errc::IndexUnavailable, "no " + std::string(to_string(kind)) + " index is built");
    }
    promote(kind);
    std::unique_lock lock(mutex_);
    auto& slot = slots_.at(kind);
    changed_.wait(lock, [&] { return slot.state == BuildState::Ready || slot.state == BuildState::Failed; });
    if (slot.state == BuildState::Failed) {
        std::string why = "build failed";
        try {
            std::rethrow_exception(slot.error);
        } catch (const std::exception& e) {
            why = e.what();
        } catch (...) {
        }
        throw Error(Errc::IndexUnavailable, std::string(to_string(kind)) + " index: " + why);
    }
    return *slot.index;
}

BuildState IndexBuilder::state(RelationKind kind) const
{
    std::lock_guard lock(mutex_);
    auto it = slots_.find(kind);
    return it == slots_.end() ? BuildState::Failed : it->second.state;
}

const RelationIndex* IndexBuilder::try_get(RelationKind kind) const
{
    std::lock_guard lock(mutex_);
    auto it = slots_.find(kind);
    if (it == slots_.end() || it->second.state != BuildState::Ready) {
        return nullptr;
    }
    return &*it->second.index;
}

std::vector<RelationKind> IndexBuilder::pending_order() const
{
    std::lock_guard lock(mutex_);
    return queue_;
}

std::vector<RelationKind> IndexBuilder::completion_order() const
{
    std::lock_guard lock(mutex_);
    return completed_;
}

std::vector<RelationKind> IndexBuilder::kinds() const
{
    return order_;
}

std::vector<ArtifactStatus> IndexBuilder::status() const
{
    std::lock_guard lock(mutex_);
    std::vector<ArtifactStatus> out;
    const auto now = std::chrono::steady_clock::now();
    for (auto kind : order_) {
        const auto& slot = slots_.at(kind);
        auto elapsed = slot.elapsed;
        if (slot.state == BuildState::Building) {
            elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(now - slot.started);
        }
        out.push_back({std::string(to_string(kind)), slot.state, elapsed});
    }
    return out;
}

} // namespace relaq
