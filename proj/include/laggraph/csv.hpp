#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace laggraph::csv {

/// Minimal RFC 4180 reader: quoted fields, doubled quotes, CRLF tolerated.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    /// Next record, or nullopt at end of input. Throws std::runtime_error on an
    /// unterminated quoted field.
    std::optional<std::vector<std::string>> next();

    /// 1-based line number where the last returned record started.
    std::size_t line() const noexcept { return record_line_; }

private:
    std::istream& in_;
    std::size_t line_ = 0;
    std::size_t record_line_ = 0;
};

std::string escape(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace laggraph::csv
