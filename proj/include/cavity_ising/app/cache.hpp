#pragma once

// On-disk cache for traced boundaries. Entries are keyed by a hash of the
// segment name, resolution and tolerance and written atomically.

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>

#include "cavity_ising/app/output.hpp"

namespace cavity_ising::app {

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

class BoundaryCache {
 public:
  /// CAVITY_ISING_CACHE takes precedence over the directory passed in; an
  /// empty result disables caching.
  explicit BoundaryCache(std::string dir) {
    if (const char* env = std::getenv("CAVITY_ISING_CACHE"); env && *env) dir = env;
    dir_ = std::move(dir);
  }

  [[nodiscard]] bool enabled() const { return !dir_.empty(); }
  [[nodiscard]] const std::string& directory() const { return dir_; }

  static std::string key(const std::string& segment, int resolution, const std::string& tolerance) {
    return segment + "|" + std::to_string(resolution) + "|" + hex64(fnv1a(tolerance));
  }

  [[nodiscard]] fs::path path_for(const std::string& key) const {
    return fs::path(dir_) / ("boundary-" + hex64(fnv1a(key)) + ".csv");
  }

  [[nodiscard]] std::optional<std::string> load(const std::string& key) const {
    if (!enabled()) return std::nullopt;
    const auto p = path_for(key);
    std::error_code ec;
    if (!fs::exists(p, ec)) return std::nullopt;
    return read_file(p);
  }

  void store(const std::string& key, const std::string& content) const {
    if (enabled()) write_atomic(path_for(key), content);
  }

 private:
  std::string dir_;
};

}  // namespace cavity_ising::app
