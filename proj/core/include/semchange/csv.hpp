#ifndef SEMCHANGE_CSV_HPP
#define SEMCHANGE_CSV_HPP

#include <cstdio>
#include <fstream>
#include <string>

#include "semchange/errors.hpp"

namespace semchange {

/// 9 significant digits, locale-independent ("C" formatting of %g).
inline std::string fmt_g9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

/// Minimal comma-separated writer; values are never quoted, so callers
/// must not pass cells containing commas (vocabulary words are
/// whitespace-delimited tokens and cannot contain them).
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw IoError("cannot write file: " + path);
    }

    CsvWriter& cell(const std::string& s) {
        if (!first_) out_ << ',';
        out_ << s;
        first_ = false;
        return *this;
    }
    CsvWriter& cell(double v) { return cell(fmt_g9(v)); }
    CsvWriter& cell(long v) { return cell(std::to_string(v)); }
    CsvWriter& cell(int v) { return cell(std::to_string(v)); }
    void endrow() {
        out_ << '\n';
        first_ = true;
    }

private:
    std::ofstream out_;
    bool first_ = true;
};

} // namespace semchange

#endif
