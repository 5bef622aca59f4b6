#include "vctrack/store.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include "vctrack/ingest.hpp"

namespace vctrack {

namespace {

std::runtime_error sys_error(const std::string& what)
{
    return std::runtime_error(what + ": " + std::strerror(errno));
}

} // namespace

DirLock::DirLock(const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    const auto path = dir / ".lock";
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) {
        throw sys_error("cannot open " + path.string());
    }
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
        ::close(fd_);
        fd_ = -1;
        throw std::runtime_error("state directory " + dir.string() + " is locked by another process");
    }
}

DirLock::~DirLock()
{
    if (fd_ >= 0) {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
}

DirLock::DirLock(DirLock&& other) noexcept : fd_(other.fd_)
{
    other.fd_ = -1;
}

EventStore::EventStore(std::filesystem::path dir) : dir_(std::move(dir))
{
    std::filesystem::create_directories(dir_);
}

std::vector<std::string> EventStore::load()
{
    const auto path = log_path();
    if (!std::filesystem::exists(path)) {
        return {};
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw sys_error("cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    const auto last_newline = text.rfind('\n');
    const std::size_t complete = last_newline == std::string::npos ? 0 : last_newline + 1;
    if (complete != text.size()) {
        std::filesystem::resize_file(path, complete);
    }
    return split_lines(std::string_view(text).substr(0, complete));
}

void EventStore::append(std::span<const Event> events)
{
    if (events.empty()) {
        return;
    }
    std::string payload;
    for (const Event& e : events) {
        payload += serialize_event(e);
        payload += '\n';
    }
    const auto path = log_path();
    const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd < 0) {
        throw sys_error("cannot open " + path.string());
    }
    std::size_t written = 0;
    while (written < payload.size()) {
        const ssize_t n = ::write(fd, payload.data() + written, payload.size() - written);
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            const auto err = sys_error("write to " + path.string());
            ::close(fd);
            throw err;
        }
        written += static_cast<std::size_t>(n);
    }
    if (::fsync(fd) != 0) {
        const auto err = sys_error("fsync " + path.string());
        ::close(fd);
        throw err;
    }
    ::close(fd);
}

} // namespace vctrack
