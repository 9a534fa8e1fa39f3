#include "output.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace qcle::cli {

void write_csv(const std::filesystem::path& path, const std::vector<Column>& columns) {
  if (columns.empty()) throw std::invalid_argument("write_csv: no columns");
  const std::size_t rows = columns.front().values.size();
  for (const auto& c : columns) {
    if (c.values.size() != rows) throw std::invalid_argument("write_csv: column " + c.name + " has wrong length");
  }
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t j = 0; j < columns.size(); ++j) std::fprintf(f, "%s%s", j ? "," : "", columns[j].name.c_str());
  std::fputc('\n', f);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) std::fprintf(f, "%s%.17g", j ? "," : "", columns[j].values[i]);
    std::fputc('\n', f);
  }
  if (std::fclose(f) != 0) throw std::runtime_error("error closing " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace qcle::cli
