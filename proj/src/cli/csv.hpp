#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace leocov::cli {

// RFC 4180 writer: comma separated, "\n" line ends, fields quoted
// only when they contain a comma, quote or newline.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void row(const std::vector<std::string>& fields)
    {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i > 0) out_ << ',';
            write_field(fields[i]);
        }
        out_ << '\n';
    }

    void row(std::initializer_list<std::string> fields) { row(std::vector<std::string>(fields)); }

private:
    void write_field(std::string_view field)
    {
        if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
            out_ << field;
            return;
        }
        out_ << '"';
        for (char c : field) {
            if (c == '"') out_ << '"';
            out_ << c;
        }
        out_ << '"';
    }

    std::ostream& out_;
};

}  // namespace leocov::cli
