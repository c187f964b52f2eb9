#include "csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace cpd {

namespace {

std::string trimmed(std::string_view cell) {
    const auto first = cell.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return "";
    const auto last = cell.find_last_not_of(" \t\r");
    return std::string(cell.substr(first, last - first + 1));
}

std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(trimmed(line.substr(start)));
            break;
        }
        cells.push_back(trimmed(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return cells;
}

bool parse_number(const std::string& cell, double& out) {
    if (cell.empty()) return false;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end;
}

}  // namespace

Sample read_csv_text(std::string_view text, HeaderMode header) {
    std::vector<std::pair<int, std::vector<std::string>>> rows;  // (file line, cells)
    {
        int line_no = 0;
        std::size_t start = 0;
        while (start <= text.size()) {
            const std::size_t nl = text.find('\n', start);
            const std::string_view line =
                nl == std::string_view::npos ? text.substr(start) : text.substr(start, nl - start);
            ++line_no;
            if (!trimmed(line).empty()) rows.emplace_back(line_no, split_line(line));
            if (nl == std::string_view::npos) break;
            start = nl + 1;
        }
    }
    if (rows.empty()) throw CsvError("file is empty", 1, 1);

    bool has_header = header == HeaderMode::Yes;
    if (header == HeaderMode::Auto) {
        double ignored;
        for (const std::string& cell : rows.front().second) {
            if (!parse_number(cell, ignored)) {
                has_header = true;
                break;
            }
        }
    }

    std::vector<std::string> names;
    std::size_t first_data = 0;
    if (has_header) {
        names = rows.front().second;
        first_data = 1;
        if (rows.size() == 1) throw CsvError("no data rows after header", rows[0].first, 1);
    }

    const int d = static_cast<int>(rows[first_data].second.size());
    const int n = static_cast<int>(rows.size() - first_data);
    if (d < 2) throw CsvError("need at least 2 columns", rows[first_data].first, 1);
    if (n < 2) throw CsvError("need at least 2 data rows", rows[first_data].first, 1);
    if (has_header && static_cast<int>(names.size()) != d) {
        throw CsvError("header has " + std::to_string(names.size()) + " columns but data has " +
                           std::to_string(d),
                       rows[0].first, 1);
    }

    std::vector<double> data(static_cast<std::size_t>(n) * d);
    for (int i = 0; i < n; ++i) {
        const auto& [line_no, cells] = rows[first_data + i];
        if (static_cast<int>(cells.size()) != d) {
            throw CsvError("expected " + std::to_string(d) + " columns, found " +
                               std::to_string(cells.size()),
                           line_no, static_cast<int>(cells.size()));
        }
        for (int j = 0; j < d; ++j) {
            double value;
            if (!parse_number(cells[j], value)) {
                throw CsvError("cannot parse '" + cells[j] + "' as a number", line_no, j + 1);
            }
            data[static_cast<std::size_t>(i) * d + j] = value;
        }
    }

    try {
        Sample sample(std::move(data), n, d);
        sample.column_names = std::move(names);
        return sample;
    } catch (const std::invalid_argument& e) {
        throw CsvError(e.what(), rows[first_data].first, 1);
    }
}

Sample read_csv(const std::string& path, HeaderMode header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return read_csv_text(buffer.str(), header);
}

}  // namespace cpd
