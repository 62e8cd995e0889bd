#ifndef CONEKRYLOV_LOG_HPP
#define CONEKRYLOV_LOG_HPP

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <mutex>
#include <string>

namespace conekrylov {

enum class LogLevel : int { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

/// Verbosity from CONEKRYLOV_LOG in {error, warn, info, debug}; default warn.
inline LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("CONEKRYLOV_LOG");
        if (env == nullptr) return LogLevel::kWarn;
        if (std::strcmp(env, "error") == 0) return LogLevel::kError;
        if (std::strcmp(env, "warn") == 0) return LogLevel::kWarn;
        if (std::strcmp(env, "info") == 0) return LogLevel::kInfo;
        if (std::strcmp(env, "debug") == 0) return LogLevel::kDebug;
        return LogLevel::kWarn;
    }();
    return level;
}

inline void log(LogLevel level, const std::string& msg) {
    if (int(level) > int(log_level())) return;
    static std::mutex mtx;
    const char* tag = level == LogLevel::kError  ? "error"
                      : level == LogLevel::kWarn ? "warn"
                      : level == LogLevel::kInfo ? "info"
                                                 : "debug";
    std::lock_guard lock(mtx);
    std::cerr << "[" << tag << "] " << msg << "\n";
}

}  // namespace conekrylov

#endif
