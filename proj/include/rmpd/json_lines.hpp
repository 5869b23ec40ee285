#pragma once

// Maps JSON pointers ("/obstacles/2/radius") to the source line of the value, so that schema
// errors found after parsing can still name a line.

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>

namespace rmpd {

class JsonLineIndex {
public:
    /// Tolerates malformed input: scanning simply stops at the first surprise.
    explicit JsonLineIndex(std::string_view text);

    /// Line (1-based) of the value at pointer, else of its closest indexed ancestor.
    [[nodiscard]] std::size_t line_of(std::string pointer) const;

    /// 1-based line containing byte offset.
    [[nodiscard]] static std::size_t line_at_offset(std::string_view text, std::size_t offset);

private:
    std::unordered_map<std::string, std::size_t> lines_;
};

}  // namespace rmpd
