#include "laggraph/csv.hpp"

#include <stdexcept>

namespace laggraph::csv {

std::optional<std::vector<std::string>> Reader::next() {
    std::string line;
    // Skip blank lines between records.
    while (true) {
        if (!std::getline(in_, line)) return std::nullopt;
        ++line_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) break;
    }
    record_line_ = line_;

    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    std::size_t i = 0;
    while (true) {
        if (i >= line.size()) {
            if (!quoted) break;
            // Quoted field spans a newline.
            std::string more;
            if (!std::getline(in_, more)) {
                throw std::runtime_error("unterminated quoted field at line " + std::to_string(record_line_));
            }
            ++line_;
            if (!more.empty() && more.back() == '\r') more.pop_back();
            field += '\n';
            line = std::move(more);
            i = 0;
            continue;
        }
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    i += 2;
                    continue;
                }
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
        ++i;
    }
    fields.push_back(std::move(field));
    return fields;
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out << ',';
        out << escape(fields[i]);
    }
    out << '\n';
}

}  // namespace laggraph::csv
