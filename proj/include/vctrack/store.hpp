#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "vctrack/types.hpp"

namespace vctrack {

/// Exclusive advisory lock on `<dir>/.lock`, held for the object's lifetime.
class DirLock {
public:
    /// Throws std::runtime_error if another process holds the lock.
    explicit DirLock(const std::filesystem::path& dir);
    ~DirLock();
    DirLock(const DirLock&) = delete;
    DirLock& operator=(const DirLock&) = delete;
    DirLock(DirLock&& other) noexcept;
    DirLock& operator=(DirLock&&) = delete;

private:
    int fd_ = -1;
};

/// Append-only canonical JSONL log at `<dir>/events.jsonl`. This file is the
/// source of truth; ledgers are rebuilt by replaying it.
class EventStore {
public:
    explicit EventStore(std::filesystem::path dir);

    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path log_path() const { return dir_ / "events.jsonl"; }

    /// Reads every complete line. A trailing partial line (a write cut short
    /// before it was acknowledged) is truncated away.
    std::vector<std::string> load();

    /// Appends canonical lines and fsyncs before returning.
    void append(std::span<const Event> events);

private:
    std::filesystem::path dir_;
};

} // namespace vctrack
