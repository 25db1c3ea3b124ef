#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "fraburgers/errors.hpp"

namespace fraburgers {

// Formats a double with 17 significant digits, enough to reproduce the bit
// pattern on read-back.
inline std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Minimal deterministic CSV writer: one header row, then data rows, all
// numeric cells at full precision, '\n' line endings.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_)
            throw Error("cannot open " + path + " for writing");
    }

    void header(const std::vector<std::string>& names) {
        write_row(names);
    }

    void row(const std::vector<double>& values) {
        std::vector<std::string> cells;
        cells.reserve(values.size());
        for (double v : values) cells.push_back(format_full(v));
        write_row(cells);
    }

    void row(const std::vector<std::string>& cells) { write_row(cells); }

  private:
    void write_row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    std::ofstream out_;
};

}  // namespace fraburgers
