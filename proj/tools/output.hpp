#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace qcle::cli {

struct Column {
  std::string name;
  std::vector<double> values;
};

/// Header row, then one row per node; every value printed with 17 significant digits.
void write_csv(const std::filesystem::path& path, const std::vector<Column>& columns);

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc);

}  // namespace qcle::cli
