#include "homeplan/planners/console.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>

#include "homeplan/planners/scripted.hpp"

namespace homeplan::planners {

namespace {

int brace_balance(const std::string& text) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (c == '\\') {
                ++i;
            } else if (c == '"') {
                in_string = false;
            }
        } else if (c == '"') {
            in_string = true;
        } else if (c == '{') {
            ++depth;
        } else if (c == '}') {
            --depth;
        }
    }
    return depth;
}

bool is_end_shorthand(std::string text) {
    text.erase(std::remove_if(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); }),
               text.end());
    std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) { return std::tolower(c); });
    return text == "end";
}

}  // namespace

std::string ConsolePlanner::next(const agent::Instruction& instruction) {
    out_ << "==== system ====\n"
         << instruction.system << "\n==== instruction ====\n"
         << instruction.user << "\n==== reply (\"end\" to finish) ====\n> " << std::flush;

    std::string reply;
    std::string line;
    while (std::getline(in_, line)) {
        if (!reply.empty()) reply += '\n';
        reply += line;
        if (brace_balance(reply) <= 0 && !reply.empty()) break;
    }
    if (reply.empty() && !in_) return end_reply();
    if (is_end_shorthand(reply)) return end_reply();
    return reply;
}

}  // namespace homeplan::planners
