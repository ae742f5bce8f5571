#pragma once

#include "dualpath/types.hpp"

#include <httplib.h>
#include <zlib.h>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace dualpath {

struct FetchError : std::runtime_error {
    enum class Kind { Network, NotFound, Corrupt };
    Kind kind;
    FetchError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
    bool retriable() const { return kind == Kind::Network; }
};

/// Base URL for the plain/gzipped MPS mirror of the NETLIB LP collection.
/// Problem NAME maps to <base>/<lowercase name>.mps.gz.
inline std::string netlib_url_base() {
    if (const char* env = std::getenv("DUALPATH_NETLIB_URL"); env && *env) return env;
    return "https://raw.githubusercontent.com/coin-or-tools/Data-Netlib/master";
}

namespace detail {

inline bool looks_gzip(const std::string& body) {
    return body.size() > 2 && static_cast<unsigned char>(body[0]) == 0x1f &&
           static_cast<unsigned char>(body[1]) == 0x8b;
}

inline std::string gunzip(const std::string& body) {
    z_stream zs{};
    if (inflateInit2(&zs, 15 + 32) != Z_OK)
        throw FetchError(FetchError::Kind::Corrupt, "zlib init failed");
    std::string out;
    out.reserve(body.size() * 4);
    char buf[1 << 16];
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(body.data()));
    zs.avail_in = static_cast<uInt>(body.size());
    int rc = Z_OK;
    do {
        zs.next_out = reinterpret_cast<Bytef*>(buf);
        zs.avail_out = sizeof(buf);
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw FetchError(FetchError::Kind::Corrupt, "corrupt gzip payload");
        }
        out.append(buf, sizeof(buf) - zs.avail_out);
    } while (rc != Z_STREAM_END && (zs.avail_in > 0 || zs.avail_out == 0));
    inflateEnd(&zs);
    if (rc != Z_STREAM_END) throw FetchError(FetchError::Kind::Corrupt, "truncated gzip payload");
    return out;
}

inline std::string http_get(const std::string& base, const std::string& path) {
    // Split "scheme://host[:port]" from any base-path prefix.
    auto scheme_end = base.find("://");
    if (scheme_end == std::string::npos)
        throw FetchError(FetchError::Kind::Network, "bad url '" + base + "'");
    auto host_start = scheme_end + 3;
    auto slash = base.find('/', host_start);
    const std::string origin = slash == std::string::npos ? base : base.substr(0, slash);
    const std::string prefix = slash == std::string::npos ? "" : base.substr(slash);

    httplib::Client cli(origin);
    cli.set_follow_location(true);
    cli.set_connection_timeout(20);
    cli.set_read_timeout(60);
    auto res = cli.Get(prefix + path);
    if (!res)
        throw FetchError(FetchError::Kind::Network,
                         "network failure fetching " + origin + prefix + path + ": " +
                             httplib::to_string(res.error()));
    if (res->status == 404)
        throw FetchError(FetchError::Kind::NotFound, "no such problem at " + origin + prefix + path);
    if (res->status != 200)
        throw FetchError(FetchError::Kind::Network,
                         "HTTP " + std::to_string(res->status) + " fetching " + path);
    if (res->body.empty()) throw FetchError(FetchError::Kind::Corrupt, "empty download for " + path);
    return res->body;
}

/// RAII flock on <cache>/.<name>.lock so concurrent workers fetch once.
class FileLock {
  public:
    explicit FileLock(const std::filesystem::path& path) {
        fd_ = ::open(path.c_str(), O_CREAT | O_RDWR, 0644);
        if (fd_ >= 0) ::flock(fd_, LOCK_EX);
    }
    ~FileLock() {
        if (fd_ >= 0) {
            ::flock(fd_, LOCK_UN);
            ::close(fd_);
        }
    }
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

  private:
    int fd_ = -1;
};

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

} // namespace detail

/// Returns the uncompressed MPS text of a NETLIB problem, fetching it into
/// <cache_dir>/<NAME>.mps on first use. Later calls are cache hits with no
/// network I/O.
inline std::string fetch_netlib(const std::string& name, const std::filesystem::path& cache_dir) {
    namespace fs = std::filesystem;
    const fs::path cached = cache_dir / (name + ".mps");
    if (fs::exists(cached)) {
        auto text = detail::read_file(cached);
        if (!text.empty()) return text;
    }

    fs::create_directories(cache_dir);
    detail::FileLock lock(cache_dir / ("." + name + ".lock"));
    if (fs::exists(cached)) { // another worker may have won the race
        auto text = detail::read_file(cached);
        if (!text.empty()) return text;
    }

    std::string low;
    for (char c : name) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    std::string body = detail::http_get(netlib_url_base(), "/" + low + ".mps.gz");
    std::string text = detail::looks_gzip(body) ? detail::gunzip(body) : std::move(body);
    if (text.empty()) throw FetchError(FetchError::Kind::Corrupt, "empty payload for " + name);

    const fs::path tmp = cache_dir / ("." + name + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << text;
    }
    fs::rename(tmp, cached);
    return text;
}

} // namespace dualpath
