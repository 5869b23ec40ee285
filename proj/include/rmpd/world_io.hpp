#pragma once

// World file formats:
//   .pgm   ASCII PGM (P2). 0 is an obstacle, values above maxval/2 are free, anything in
//          between is an obstacle. The first pixel row is the top of the map.
//   .txt   rows of '.' (free) and '#' (obstacle), first line at the top.
//   .json  {"dimension": n, "bounds": {"lower": [...], "upper": [...]},
//           "obstacles": [{"type": "box", "lower": [...], "upper": [...]},
//                         {"type": "sphere", "center": [...], "radius": r}]}

#include <cstddef>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rmpd/world.hpp"

namespace rmpd {

class ParseError : public std::runtime_error {
public:
    ParseError(std::string file, std::size_t line, std::string field, const std::string& message);

    [[nodiscard]] const std::string& file() const noexcept { return file_; }
    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string file_;
    std::size_t line_;
    std::string field_;
};

enum class WorldFormat { automatic, pgm, text_grid, json };

[[nodiscard]] WorldFormat parse_world_format(std::string_view name);
[[nodiscard]] WorldFormat format_from_extension(const std::filesystem::path& path);

[[nodiscard]] BitmapWorld parse_pgm(std::string_view text, const std::string& file = "<memory>");
[[nodiscard]] BitmapWorld parse_text_grid(std::string_view text, const std::string& file = "<memory>");
[[nodiscard]] GeometricWorld parse_geometric_json(std::string_view text, const std::string& file = "<memory>");

/// Reads and parses a world file. I/O failures are reported as ParseError at line 0.
[[nodiscard]] std::shared_ptr<const World> load_world(const std::filesystem::path& path,
                                                      WorldFormat format = WorldFormat::automatic);

[[nodiscard]] std::string to_text_grid(const BitmapWorld& world);
[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);

}  // namespace rmpd
