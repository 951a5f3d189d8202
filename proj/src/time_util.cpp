#include "transit_opt/time_util.hpp"

#include <cctype>
#include <cstdio>

namespace topt {

std::string to_string(Direction d) {
    return d == Direction::inbound ? "inbound" : "outbound";
}

std::optional<Direction> parse_direction(const std::string& token) {
    if (token == "inbound") return Direction::inbound;
    if (token == "outbound") return Direction::outbound;
    return std::nullopt;
}

std::string to_string(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

std::string to_string(const Month& m) {
    char buf[12];
    std::snprintf(buf, sizeof buf, "%04d-%02d", m.year, m.month);
    return buf;
}

std::optional<Date> parse_date(const std::string& iso) {
    int y = 0, m = 0, d = 0;
    char tail = 0;
    if (std::sscanf(iso.c_str(), "%d-%d-%d%c", &y, &m, &d, &tail) != 3) return std::nullopt;
    if (m < 1 || m > 12 || d < 1 || d > 31) return std::nullopt;
    return Date{y, m, d};
}

std::optional<Seconds> parse_hms(const std::string& token) {
    int h = 0, m = 0, s = 0;
    char tail = 0;
    if (std::sscanf(token.c_str(), "%d:%d:%d%c", &h, &m, &s, &tail) != 3) return std::nullopt;
    if (h < 0 || m < 0 || m > 59 || s < 0 || s > 59) return std::nullopt;
    return h * 3600 + m * 60 + s;
}

std::string format_hms(Seconds t) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02d:%02d:%02d", t / 3600, (t / 60) % 60, t % 60);
    return buf;
}

}  // namespace topt
