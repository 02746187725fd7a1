#include "loogp/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "detail/format.hpp"
#include "loogp/errors.hpp"

namespace loogp {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

double parse_double(const std::string& s, const std::string& context) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidInputError("cannot parse number '" + s + "' " + context);
  }
}

}  // namespace

void Dataset::validate() const {
  if (X.rows() != Z.size()) {
    throw InvalidInputError("design has " + std::to_string(X.rows()) + " rows but " +
                            std::to_string(Z.size()) + " observations");
  }
  if (X.cols() < 1) throw InvalidInputError("design needs at least one column");
  if (!X.allFinite() || !Z.allFinite()) {
    throw InvalidInputError("dataset contains non-finite entries");
  }
}

Dataset load_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open dataset file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw InvalidInputError("empty dataset file: " + path);
  const std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 2 || header.back() != "z") {
    throw InvalidInputError("dataset header must be x1,...,xd,z");
  }
  const std::size_t d = header.size() - 1;
  for (std::size_t m = 0; m < d; ++m) {
    if (header[m] != "x" + std::to_string(m + 1)) {
      throw InvalidInputError("dataset header must be x1,...,xd,z; got column '" + header[m] + "'");
    }
  }

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != d + 1) {
      throw InvalidInputError("line " + std::to_string(line_no) + " has " +
                              std::to_string(fields.size()) + " fields, expected " +
                              std::to_string(d + 1));
    }
    std::vector<double> row(d + 1);
    for (std::size_t c = 0; c <= d; ++c) {
      row[c] = parse_double(fields[c], "at line " + std::to_string(line_no));
    }
    rows.push_back(std::move(row));
  }

  Dataset data;
  data.X.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  data.Z.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < d; ++c) data.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
    data.Z[static_cast<Eigen::Index>(i)] = rows[i][d];
  }
  data.validate();
  return data;
}

void save_dataset_csv(const Dataset& data, const std::string& path) {
  data.validate();
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot open output file: " + path);
  for (Eigen::Index m = 0; m < data.d(); ++m) out << "x" << (m + 1) << ",";
  out << "z\r\n";
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index m = 0; m < data.d(); ++m) out << detail::fmt_double(data.X(i, m)) << ",";
    out << detail::fmt_double(data.Z[i]) << "\r\n";
  }
}

}  // namespace loogp
