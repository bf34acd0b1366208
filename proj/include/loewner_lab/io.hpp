#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "loewner_lab/descriptor.hpp"

namespace loewner_lab {

/// 17 significant digits, shortest exponent form ("%.17g").
std::string format_double(double x);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// {"order": n, "E": [[...]], "A": [[...]], "B": [[...]], "C": [[...]], "D": [[d]]}
/// with row-major nested arrays (B is n x 1, C is 1 x n).
std::string realization_to_json(const DescriptorRealization& rlz);
DescriptorRealization realization_from_json(const std::string& text);
void save_realization(const DescriptorRealization& rlz, const std::filesystem::path& path);
DescriptorRealization load_realization(const std::filesystem::path& path);

/// Plain CSV table: header line then rows joined with ','.
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);

}  // namespace loewner_lab
