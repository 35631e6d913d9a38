#include "sbdc/log.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

namespace sbdc {

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("SBDC_LOG");
        if (!env)
            return LogLevel::Warn;
        const std::string v(env);
        if (v == "error")
            return LogLevel::Error;
        if (v == "warn")
            return LogLevel::Warn;
        if (v == "info")
            return LogLevel::Info;
        if (v == "debug")
            return LogLevel::Debug;
        return LogLevel::Warn;
    }();
    return level;
}

void log_message(LogLevel level, const std::string& msg) {
    if (level > log_level())
        return;
    static const char* names[] = {"error", "warn", "info", "debug"};
    std::cerr << "[sbdc " << names[static_cast<int>(level)] << "] " << msg << '\n';
}

} // namespace sbdc
