#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "bdhomog/tensor.hpp"

namespace bdhomog {

inline constexpr const char* kVersion = "0.1.0";

using json = nlohmann::json;

/// JSON text with every floating-point number printed as %.17g.
std::string dump_json(const json& j, int indent = 2);

/// %.12e, the CSV number format.
std::string csv_number(double v);

json to_json(const Vec& v);
json to_json(const Matrix& m);
json to_json(const SymMatrix& m);

/// Writes `text` to `path`, creating parent directories.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace bdhomog
