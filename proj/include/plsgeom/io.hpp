#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "plsgeom/types.hpp"

namespace plsgeom {

inline constexpr const char* kToolVersion = "plsgeom 0.1.0";

// 17-significant-digit decimal rendering (round-trips doubles).
std::string fmt17(double v);

// RFC-4180 field quoting (only when the field needs it); rows joined with LF.
std::string csv_escape(const std::string& field);
void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// "1.5,2,3" -> vector; accepts an existing file path instead (one value per
// line or a single CSV line).
VectorXd parse_vector_arg(const std::string& arg);
MatrixXd parse_matrix_arg(const std::string& arg);  // file of m CSV rows

// "a..b" inclusive range.
std::pair<int, int> parse_range(const std::string& arg);

// Comma-separated 1-based indices -> 0-based sorted subset.
IndexSubset parse_subset_arg(const std::string& arg, int m);

// Run manifest written alongside every output file.
void write_manifest(const std::string& path, const std::string& command,
                    const std::map<std::string, std::string>& inputs,
                    std::optional<std::uint64_t> seed);

}  // namespace plsgeom
