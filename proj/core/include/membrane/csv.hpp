#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

namespace membrane {

// Deterministic CSV emitter. Floats are written with %.17g (round-trip exact,
// locale-independent) so reruns are byte-identical.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> columns);

    CsvWriter& cell(const std::string& v);
    CsvWriter& cell(double v);
    CsvWriter& cell(int64_t v);
    CsvWriter& cell(uint64_t v);
    CsvWriter& cell(int v) { return cell(int64_t(v)); }
    CsvWriter& cell(bool v) { return cell(std::string(v ? "1" : "0")); }
    void end_row();

    std::string str() const { return out_.str(); }
    void write_file(const std::string& path) const;

    static std::string format_real(double v);

private:
    std::ostringstream out_;
    size_t n_cols_;
    size_t col_ = 0;
};

}  // namespace membrane
