#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace dsplit::csv {

/// 17 significant digits, '.' decimal point, "nan" / "inf" / "-inf".
std::string number(double x);
std::string number(std::uint64_t x);
std::string number(std::int64_t x);
std::string boolean(bool x);

/// Quotes the cell when it contains a comma, quote or newline.
std::string escape(std::string_view cell);

void write_row(std::ostream& out, const std::vector<std::string>& cells);

}  // namespace dsplit::csv
