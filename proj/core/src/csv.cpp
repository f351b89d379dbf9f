#include "membrane/csv.hpp"

#include <cstdio>
#include <fstream>

#include "membrane/errors.hpp"

namespace membrane {

CsvWriter::CsvWriter(std::vector<std::string> columns) : n_cols_(columns.size()) {
    for (size_t i = 0; i < columns.size(); ++i) {
        if (i) out_ << ',';
        out_ << columns[i];
    }
    out_ << '\n';
}

std::string CsvWriter::format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter& CsvWriter::cell(const std::string& v) {
    if (col_) out_ << ',';
    out_ << v;
    ++col_;
    return *this;
}

CsvWriter& CsvWriter::cell(double v) { return cell(format_real(v)); }
CsvWriter& CsvWriter::cell(int64_t v) { return cell(std::to_string(v)); }
CsvWriter& CsvWriter::cell(uint64_t v) { return cell(std::to_string(v)); }

void CsvWriter::end_row() {
    if (col_ != n_cols_)
        throw PreconditionError("csv: row has " + std::to_string(col_) + " cells, expected " +
                                std::to_string(n_cols_));
    out_ << '\n';
    col_ = 0;
}

void CsvWriter::write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ResourceError("csv: cannot open " + path + " for writing");
    const std::string s = str();
    out.write(s.data(), std::streamsize(s.size()));
}

}  // namespace membrane
