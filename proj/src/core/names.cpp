#include "homeplan/core/names.hpp"

#include <cctype>

namespace homeplan {

namespace {

bool is_separator(unsigned char c) { return std::isspace(c) != 0 || c == '-' || c == '_'; }

}  // namespace

std::string normalize_name(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_sep = false;
    for (unsigned char c : raw) {
        if (is_separator(c)) {
            pending_sep = !out.empty();
            continue;
        }
        if (pending_sep) {
            out.push_back('_');
            pending_sep = false;
        }
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

}  // namespace homeplan
