#include "rmpd/json_lines.hpp"

#include <cctype>
#include <string>

namespace rmpd {

namespace {

class Scanner {
public:
    Scanner(std::string_view text, std::unordered_map<std::string, std::size_t>& lines)
        : text_(text), lines_(lines) {}

    void run() {
        skip_space();
        value("");
    }

private:
    bool value(const std::string& pointer) {
        skip_space();
        if (pos_ >= text_.size()) return false;
        lines_.emplace(pointer, line_);
        const char c = text_[pos_];
        if (c == '{') return object(pointer);
        if (c == '[') return array(pointer);
        if (c == '"') return string(nullptr);
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '-' || text_[pos_] == '+' || text_[pos_] == '.')) {
            ++pos_;
        }
        return true;
    }

    bool object(const std::string& pointer) {
        ++pos_;
        skip_space();
        if (peek('}')) return ++pos_, true;
        while (true) {
            skip_space();
            std::string key;
            const std::size_t key_line = line_;
            if (!peek('"') || !string(&key)) return false;
            skip_space();
            if (!peek(':')) return false;
            ++pos_;
            const std::string child = pointer + "/" + escape(key);
            lines_.emplace(child, key_line);
            if (!value(child)) return false;
            skip_space();
            if (peek(',')) {
                ++pos_;
                continue;
            }
            if (peek('}')) return ++pos_, true;
            return false;
        }
    }

    bool array(const std::string& pointer) {
        ++pos_;
        skip_space();
        if (peek(']')) return ++pos_, true;
        for (std::size_t i = 0;; ++i) {
            if (!value(pointer + "/" + std::to_string(i))) return false;
            skip_space();
            if (peek(',')) {
                ++pos_;
                continue;
            }
            if (peek(']')) return ++pos_, true;
            return false;
        }
    }

    bool string(std::string* out) {
        ++pos_;
        while (pos_ < text_.size()) {
            const char c = text_[pos_++];
            if (c == '"') return true;
            if (c == '\\' && pos_ < text_.size()) {
                const char e = text_[pos_++];
                if (out != nullptr) out->push_back(e == 'n' ? '\n' : e == 't' ? '\t' : e);
                continue;
            }
            if (c == '\n') ++line_;
            if (out != nullptr) out->push_back(c);
        }
        return false;
    }

    static std::string escape(const std::string& key) {
        std::string out;
        for (char c : key) {
            if (c == '~') out += "~0";
            else if (c == '/') out += "~1";
            else out.push_back(c);
        }
        return out;
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            if (text_[pos_] == '\n') ++line_;
            ++pos_;
        }
    }

    [[nodiscard]] bool peek(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

    std::string_view text_;
    std::unordered_map<std::string, std::size_t>& lines_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

}  // namespace

JsonLineIndex::JsonLineIndex(std::string_view text) { Scanner(text, lines_).run(); }

std::size_t JsonLineIndex::line_of(std::string pointer) const {
    while (true) {
        if (auto it = lines_.find(pointer); it != lines_.end()) return it->second;
        if (pointer.empty()) return 1;
        pointer.erase(pointer.rfind('/'));
    }
}

std::size_t JsonLineIndex::line_at_offset(std::string_view text, std::size_t offset) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

}  // namespace rmpd
