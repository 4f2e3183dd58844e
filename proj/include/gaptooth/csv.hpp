#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace gaptooth {

/// Fixed 17-significant-digit rendering, so equal doubles print identically.
std::string format_double(double x);

/// Minimal CSV emitter: one header line, then rows of numbers or text.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header);

    CsvWriter& field(double x);
    CsvWriter& field(long long x);
    CsvWriter& field(int x) { return field(static_cast<long long>(x)); }
    CsvWriter& field(std::string_view text);
    void end_row();

private:
    std::ostream& out_;
    bool first_ = true;
};

}  // namespace gaptooth
