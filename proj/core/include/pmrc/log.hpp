#pragma once

#include <iosfwd>
#include <string_view>

namespace pmrc {

// Informational messages go to std::clog unless redirected; nullptr silences
// them.
void set_log_stream(std::ostream* out) noexcept;
void log_info(std::string_view message);

}  // namespace pmrc
