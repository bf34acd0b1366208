#include "loewner_lab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "loewner_lab/error.hpp"

namespace loewner_lab {

namespace {

nlohmann::json rows_of(const Matrix& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

Matrix matrix_of(const nlohmann::json& j, Eigen::Index rows, Eigen::Index cols,
                 const char* name) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    throw Error(ErrorKind::parse, std::string("matrix ") + name + " has the wrong row count");
  }
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorKind::parse, std::string("matrix ") + name + " has the wrong column count");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string realization_to_json(const DescriptorRealization& rlz) {
  rlz.check_dimensions();
  nlohmann::ordered_json j;
  j["order"] = rlz.order();
  j["E"] = rows_of(rlz.E);
  j["A"] = rows_of(rlz.A);
  j["B"] = rows_of(rlz.B);
  j["C"] = rows_of(rlz.C);
  j["D"] = nlohmann::json::array({nlohmann::json::array({rlz.D})});
  return j.dump(2) + "\n";
}

DescriptorRealization realization_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const auto n = j.at("order").get<Eigen::Index>();
    if (n < 0) throw Error(ErrorKind::parse, "negative order");
    DescriptorRealization r;
    r.E = matrix_of(j.at("E"), n, n, "E");
    r.A = matrix_of(j.at("A"), n, n, "A");
    r.B = matrix_of(j.at("B"), n, 1, "B");
    r.C = matrix_of(j.at("C"), 1, n, "C");
    const auto& d = j.at("D");
    r.D = d.is_number() ? d.get<double>() : matrix_of(d, 1, 1, "D")(0, 0);
    r.check_dimensions();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("invalid realization JSON: ") + e.what());
  }
}

void save_realization(const DescriptorRealization& rlz, const std::filesystem::path& path) {
  write_text(path, realization_to_json(rlz));
}

DescriptorRealization load_realization(const std::filesystem::path& path) {
  return realization_from_json(read_text(path));
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  auto join = [&out](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out += ',';
      out += cells[k];
    }
    out += '\n';
  };
  join(header);
  for (const auto& r : rows) join(r);
  return out;
}

}  // namespace loewner_lab
