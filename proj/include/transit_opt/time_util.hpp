#ifndef TRANSIT_OPT_TIME_UTIL_HPP
#define TRANSIT_OPT_TIME_UTIL_HPP

#include <optional>
#include <string>

#include "transit_opt/types.hpp"

namespace topt {

// Parses "HH:MM:SS" (hours may exceed 24, single-digit hour accepted).
std::optional<Seconds> parse_hms(const std::string& token);

// Formats seconds-since-midnight back to "HH:MM:SS".
std::string format_hms(Seconds s);

}  // namespace topt

#endif
