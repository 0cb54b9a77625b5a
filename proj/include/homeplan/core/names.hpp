#pragma once

#include <string>
#include <string_view>

namespace homeplan {

// Lowercase, trim, and collapse internal runs of whitespace/hyphens/underscores
// into a single '_'. Total and idempotent.
std::string normalize_name(std::string_view raw);

}  // namespace homeplan
