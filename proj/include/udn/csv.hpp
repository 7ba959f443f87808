#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "udn/scenario.hpp"

namespace udn {

// Minimal RFC-4180-style CSV builder: '.' decimal separator via to_chars,
// UTF-8, one provenance comment block before the header.
class Csv {
public:
    void comment(std::string_view s) {
        text_ += "# ";
        text_ += s;
        text_ += '\n';
    }

    void cell(std::string_view s) {
        if (!row_open_) row_open_ = true;
        else text_ += ',';
        if (s.find_first_of(",\"\n") != std::string_view::npos) {
            text_ += '"';
            for (char c : s) {
                if (c == '"') text_ += '"';
                text_ += c;
            }
            text_ += '"';
        } else {
            text_ += s;
        }
    }

    void cell(double v) { cell(std::string_view(detail::format_double(v))); }
    void cell(int v) { cell(std::string_view(std::to_string(v))); }
    void cell(std::int64_t v) { cell(std::string_view(std::to_string(v))); }
    void cell(std::uint64_t v) { cell(std::string_view(std::to_string(v))); }

    void end_row() {
        text_ += '\n';
        row_open_ = false;
    }

    // Appends pre-joined comma-separated cells verbatim (no quoting).
    void raw_cells(std::string_view joined) {
        if (!row_open_) row_open_ = true;
        else text_ += ',';
        text_ += joined;
    }

    template <class... Ts>
    void row(const Ts&... cells) {
        (cell(cells), ...);
        end_row();
    }

    void header(const std::vector<std::string>& cols) {
        for (const auto& c : cols) cell(std::string_view(c));
        end_row();
    }

    const std::string& str() const { return text_; }

private:
    std::string text_;
    bool row_open_ = false;
};

}  // namespace udn
