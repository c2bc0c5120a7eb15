#pragma once

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>

// Minimal stderr logger controlled by the PAGECURVE_LOG environment
// variable: error (default), info, debug.
namespace pagecurve::log {

enum class Level { error = 0, info = 1, debug = 2 };

inline Level level() {
    static const Level lvl = [] {
        const char* env = std::getenv("PAGECURVE_LOG");
        if (env == nullptr) return Level::error;
        if (std::strcmp(env, "debug") == 0) return Level::debug;
        if (std::strcmp(env, "info") == 0) return Level::info;
        return Level::error;
    }();
    return lvl;
}

inline void emit(Level lvl, const char* tag, const char* fmt, va_list args) {
    if (level() < lvl) return;
    std::fprintf(stderr, "[%s] ", tag);
    std::vfprintf(stderr, fmt, args);
    std::fprintf(stderr, "\n");
}

inline void info(const char* fmt, ...) {
    va_list args;
    va_start(args, fmt);
    emit(Level::info, "info", fmt, args);
    va_end(args);
}

inline void debug(const char* fmt, ...) {
    va_list args;
    va_start(args, fmt);
    emit(Level::debug, "debug", fmt, args);
    va_end(args);
}

inline void error(const char* fmt, ...) {
    va_list args;
    va_start(args, fmt);
    emit(Level::error, "error", fmt, args);
    va_end(args);
}

} // namespace pagecurve::log
