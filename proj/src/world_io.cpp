#include "rmpd/world_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "rmpd/json_lines.hpp"

namespace rmpd {

ParseError::ParseError(std::string file, std::size_t line, std::string field, const std::string& message)
    : std::runtime_error(file + ":" + std::to_string(line) + ": " + field + ": " + message),
      file_(std::move(file)),
      line_(line),
      field_(std::move(field)) {}

WorldFormat parse_world_format(std::string_view name) {
    if (name == "auto" || name.empty()) return WorldFormat::automatic;
    if (name == "pgm") return WorldFormat::pgm;
    if (name == "text" || name == "txt" || name == "grid") return WorldFormat::text_grid;
    if (name == "json") return WorldFormat::json;
    throw std::invalid_argument("unknown world format '" + std::string(name) + "' (pgm, text, json)");
}

WorldFormat format_from_extension(const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".pgm") return WorldFormat::pgm;
    if (ext == ".txt" || ext == ".grid") return WorldFormat::text_grid;
    if (ext == ".json") return WorldFormat::json;
    throw ParseError(path.string(), 0, "format", "cannot infer world format from extension '" + ext + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string(), 0, "file", "cannot open");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

namespace {

struct Token {
    std::string_view text;
    std::size_t line;
};

// Whitespace-separated PGM tokens with '#' comments stripped.
std::vector<Token> pgm_tokens(std::string_view text) {
    std::vector<Token> out;
    std::size_t line = 1;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c == '\n') {
            ++line;
            ++i;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
        } else {
            const std::size_t start = i;
            while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '#') ++i;
            out.push_back({text.substr(start, i - start), line});
        }
    }
    return out;
}

long long to_integer(const Token& t, const std::string& file, const std::string& field) {
    long long v = 0;
    const auto* end = t.text.data() + t.text.size();
    auto [ptr, ec] = std::from_chars(t.text.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw ParseError(file, t.line, field, "expected an integer, got '" + std::string(t.text) + "'");
    }
    return v;
}

}  // namespace

BitmapWorld parse_pgm(std::string_view text, const std::string& file) {
    const std::vector<Token> tokens = pgm_tokens(text);
    if (tokens.empty() || tokens[0].text != "P2") {
        throw ParseError(file, tokens.empty() ? 1 : tokens[0].line, "magic", "expected 'P2'");
    }
    auto header = [&](std::size_t i, const char* field) {
        if (i >= tokens.size()) throw ParseError(file, tokens.back().line, field, "missing");
        return to_integer(tokens[i], file, field);
    };
    const long long width = header(1, "width");
    const long long height = header(2, "height");
    const long long maxval = header(3, "maxval");
    if (width < 1) throw ParseError(file, tokens[1].line, "width", "must be positive");
    if (height < 1) throw ParseError(file, tokens[2].line, "height", "must be positive");
    if (maxval < 1 || maxval > 65535) throw ParseError(file, tokens[3].line, "maxval", "must be in [1, 65535]");

    const auto w = static_cast<std::size_t>(width);
    const auto h = static_cast<std::size_t>(height);
    if (tokens.size() - 4 != w * h) {
        throw ParseError(file, tokens.back().line, "pixels",
                         "expected " + std::to_string(w * h) + " values, found " + std::to_string(tokens.size() - 4));
    }
    std::vector<bool> occupancy(w * h);
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            const Token& t = tokens[4 + r * w + c];
            const std::string field = "pixel[" + std::to_string(r) + "][" + std::to_string(c) + "]";
            const long long v = to_integer(t, file, field);
            if (v < 0 || v > maxval) throw ParseError(file, t.line, field, "outside [0, maxval]");
            occupancy[(h - 1 - r) * w + c] = !(2 * v > maxval);
        }
    }
    return BitmapWorld(w, h, std::move(occupancy));
}

BitmapWorld parse_text_grid(std::string_view text, const std::string& file) {
    std::vector<std::string_view> rows;
    std::vector<std::size_t> row_lines;
    std::size_t line = 1;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            std::string_view row = text.substr(start, i - start);
            while (!row.empty() && (row.back() == '\r' || row.back() == ' ' || row.back() == '\t')) {
                row.remove_suffix(1);
            }
            if (!row.empty()) {
                rows.push_back(row);
                row_lines.push_back(line);
            }
            start = i + 1;
            ++line;
        }
    }
    if (rows.empty()) throw ParseError(file, 1, "grid", "no rows");
    const std::size_t w = rows[0].size();
    const std::size_t h = rows.size();
    std::vector<bool> occupancy(w * h);
    for (std::size_t r = 0; r < h; ++r) {
        if (rows[r].size() != w) {
            throw ParseError(file, row_lines[r], "row " + std::to_string(r),
                             "has " + std::to_string(rows[r].size()) + " cells, expected " + std::to_string(w));
        }
        for (std::size_t c = 0; c < w; ++c) {
            const char ch = rows[r][c];
            if (ch != '.' && ch != '#') {
                throw ParseError(file, row_lines[r], "cell[" + std::to_string(r) + "][" + std::to_string(c) + "]",
                                 std::string("unexpected character '") + ch + "'");
            }
            occupancy[(h - 1 - r) * w + c] = ch == '#';
        }
    }
    return BitmapWorld(w, h, std::move(occupancy));
}

GeometricWorld parse_geometric_json(std::string_view text, const std::string& file) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(file, JsonLineIndex::line_at_offset(text, e.byte == 0 ? 0 : e.byte - 1), "syntax", e.what());
    }
    const JsonLineIndex index(text);
    auto fail = [&](const std::string& pointer, const std::string& message) -> ParseError {
        return ParseError(file, index.line_of(pointer), pointer.empty() ? "/" : pointer, message);
    };
    auto require = [&](const json& parent, const std::string& pointer, const char* key) -> const json& {
        if (!parent.is_object()) throw fail(pointer, "expected an object");
        auto it = parent.find(key);
        if (it == parent.end()) throw fail(pointer, std::string("missing field '") + key + "'");
        return *it;
    };
    auto number = [&](const json& v, const std::string& pointer) {
        if (!v.is_number()) throw fail(pointer, "expected a number");
        return v.get<double>();
    };

    const json& dim_json = require(doc, "", "dimension");
    if (!dim_json.is_number_integer() || dim_json.get<long long>() < 1) {
        throw fail("/dimension", "expected a positive integer");
    }
    const auto dim = static_cast<std::size_t>(dim_json.get<long long>());
    auto vector = [&](const json& v, const std::string& pointer) {
        if (!v.is_array()) throw fail(pointer, "expected an array");
        if (v.size() != dim) {
            throw fail(pointer, "expected " + std::to_string(dim) + " coordinates, got " + std::to_string(v.size()));
        }
        std::vector<double> coords;
        for (std::size_t i = 0; i < dim; ++i) coords.push_back(number(v[i], pointer + "/" + std::to_string(i)));
        return State(std::move(coords));
    };

    const json& bounds_json = require(doc, "", "bounds");
    const State lower = vector(require(bounds_json, "/bounds", "lower"), "/bounds/lower");
    const State upper = vector(require(bounds_json, "/bounds", "upper"), "/bounds/upper");
    for (std::size_t i = 0; i < dim; ++i) {
        if (!(lower[i] < upper[i])) throw fail("/bounds/upper/" + std::to_string(i), "must exceed lower bound");
    }

    std::vector<Obstacle> obstacles;
    if (auto it = doc.find("obstacles"); it != doc.end()) {
        if (!it->is_array()) throw fail("/obstacles", "expected an array");
        for (std::size_t k = 0; k < it->size(); ++k) {
            const std::string base = "/obstacles/" + std::to_string(k);
            const json& ob = (*it)[k];
            const json& type = require(ob, base, "type");
            if (!type.is_string()) throw fail(base + "/type", "expected a string");
            const std::string kind = type.get<std::string>();
            if (kind == "box") {
                BoxObstacle box{vector(require(ob, base, "lower"), base + "/lower"),
                                vector(require(ob, base, "upper"), base + "/upper")};
                for (std::size_t i = 0; i < dim; ++i) {
                    if (!(box.lower[i] <= box.upper[i])) {
                        throw fail(base + "/upper/" + std::to_string(i), "below the lower corner");
                    }
                }
                obstacles.emplace_back(std::move(box));
            } else if (kind == "sphere") {
                SphereObstacle sphere{vector(require(ob, base, "center"), base + "/center"),
                                      number(require(ob, base, "radius"), base + "/radius")};
                if (!(sphere.radius > 0.0)) throw fail(base + "/radius", "must be positive");
                obstacles.emplace_back(std::move(sphere));
            } else {
                throw fail(base + "/type", "unknown obstacle type '" + kind + "' (box, sphere)");
            }
        }
    }
    try {
        return GeometricWorld(SpaceBounds(lower, upper), std::move(obstacles));
    } catch (const std::invalid_argument& e) {
        throw fail("/obstacles", e.what());
    }
}

std::shared_ptr<const World> load_world(const std::filesystem::path& path, WorldFormat format) {
    if (format == WorldFormat::automatic) format = format_from_extension(path);
    const std::string text = read_text_file(path);
    const std::string name = path.string();
    switch (format) {
        case WorldFormat::pgm: return std::make_shared<BitmapWorld>(parse_pgm(text, name));
        case WorldFormat::text_grid: return std::make_shared<BitmapWorld>(parse_text_grid(text, name));
        case WorldFormat::json: return std::make_shared<GeometricWorld>(parse_geometric_json(text, name));
        case WorldFormat::automatic: break;
    }
    throw ParseError(name, 0, "format", "unresolved world format");
}

std::string to_text_grid(const BitmapWorld& world) {
    std::string out;
    for (std::size_t r = 0; r < world.height(); ++r) {
        const std::size_t iy = world.height() - 1 - r;
        for (std::size_t ix = 0; ix < world.width(); ++ix) out.push_back(world.occupied(ix, iy) ? '#' : '.');
        out.push_back('\n');
    }
    return out;
}

}  // namespace rmpd
