#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "psdfact/model.hpp"

namespace psdfact::io {

/// Dense row-major CSV without header.
Matrix read_matrix_csv(std::istream& in);
Matrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(std::ostream& out, const Matrix& x);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& x);

/// JSON document {name, m, n, k, r_a, r_b, a: [m][k][rᵢ], b: [n][k][rⱼ]}.
std::string factors_to_json(const GramFactorSet& f, const std::string& name);
GramFactorSet factors_from_json(const std::string& text, std::string* name = nullptr);
void write_factors(const std::filesystem::path& path, const GramFactorSet& f,
                   const std::string& name);
GramFactorSet read_factors(const std::filesystem::path& path, std::string* name = nullptr);

/// JSON array of {side: "a"|"b", index, row, col, value} records.
EntryMask mask_from_json(const std::string& text);
std::string mask_to_json(const EntryMask& mask);
EntryMask read_mask(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace psdfact::io
