#include "psdfact/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "psdfact/errors.hpp"

namespace psdfact::io {

using nlohmann::json;

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw InvalidInput("failed writing '" + path.string() + "'");
}

Matrix read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      const std::string t = trim(cell);
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(t, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (t.empty() || used != t.size()) {
        throw InvalidInput("CSV line " + std::to_string(line_no) + ": cannot parse '" + t + "'");
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InvalidInput("CSV line " + std::to_string(line_no) + ": expected " +
                         std::to_string(rows.front().size()) + " values, got " +
                         std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidInput("CSV input contains no data");
  Matrix x(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) x(i, j) = rows[i][j];
  return x;
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  try {
    return read_matrix_csv(in);
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

void write_matrix_csv(std::ostream& out, const Matrix& x) {
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (j) out << ',';
      out << format_double(x(i, j));
    }
    out << '\n';
  }
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& x) {
  std::ostringstream ss;
  write_matrix_csv(ss, x);
  write_text(path, ss.str());
}

namespace {

json factor_to_json(const Matrix& x) {
  json rows = json::array();
  for (Eigen::Index p = 0; p < x.rows(); ++p) {
    json row = json::array();
    for (Eigen::Index q = 0; q < x.cols(); ++q) row.push_back(x(p, q));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix factor_from_json(const json& j, int k, int r, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != k) {
    throw InvalidInput(what + ": expected " + std::to_string(k) + " rows");
  }
  Matrix x(k, r);
  for (int p = 0; p < k; ++p) {
    const auto& row = j[p];
    if (!row.is_array() || static_cast<int>(row.size()) != r) {
      throw InvalidInput(what + ": row " + std::to_string(p) + " should have " +
                         std::to_string(r) + " entries");
    }
    for (int q = 0; q < r; ++q) x(p, q) = row[q].get<double>();
  }
  return x;
}

}  // namespace

std::string factors_to_json(const GramFactorSet& f, const std::string& name) {
  const auto prof = f.profile();
  // One factor per line keeps files diffable.
  const auto side = [](const std::vector<Matrix>& xs) {
    std::string out = "[\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      out += "  " + factor_to_json(xs[i]).dump();
      out += i + 1 < xs.size() ? ",\n" : "\n";
    }
    return out + " ]";
  };
  std::string out = "{\n";
  out += " \"name\": " + json(name).dump() + ",\n";
  out += " \"m\": " + std::to_string(f.a.size()) + ",\n";
  out += " \"n\": " + std::to_string(f.b.size()) + ",\n";
  out += " \"k\": " + std::to_string(prof.k) + ",\n";
  out += " \"r_a\": " + json(prof.r_a).dump() + ",\n";
  out += " \"r_b\": " + json(prof.r_b).dump() + ",\n";
  out += " \"a\": " + side(f.a) + ",\n";
  out += " \"b\": " + side(f.b) + "\n}\n";
  return out;
}

GramFactorSet factors_from_json(const std::string& text, std::string* name) {
  json doc;
  try {
    doc = json::parse(text);
    const int m = doc.at("m").get<int>();
    const int n = doc.at("n").get<int>();
    const int k = doc.at("k").get<int>();
    const auto r_a = doc.at("r_a").get<std::vector<int>>();
    const auto r_b = doc.at("r_b").get<std::vector<int>>();
    if (static_cast<int>(r_a.size()) != m || static_cast<int>(r_b.size()) != n ||
        static_cast<int>(doc.at("a").size()) != m || static_cast<int>(doc.at("b").size()) != n) {
      throw InvalidInput("factor file: m/n disagree with r_a/r_b/a/b lengths");
    }
    RankProfile{k, r_a, r_b}.validate();
    GramFactorSet f;
    for (int i = 0; i < m; ++i)
      f.a.push_back(factor_from_json(doc["a"][i], k, r_a[i], "factor a[" + std::to_string(i) + "]"));
    for (int j = 0; j < n; ++j)
      f.b.push_back(factor_from_json(doc["b"][j], k, r_b[j], "factor b[" + std::to_string(j) + "]"));
    if (name) *name = doc.value("name", "");
    f.validate();
    return f;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("factor file: ") + e.what());
  }
}

void write_factors(const std::filesystem::path& path, const GramFactorSet& f,
                   const std::string& name) {
  write_text(path, factors_to_json(f, name));
}

GramFactorSet read_factors(const std::filesystem::path& path, std::string* name) {
  try {
    return factors_from_json(read_text(path), name);
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

EntryMask mask_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (!doc.is_array()) throw InvalidInput("mask: expected a JSON array of records");
    std::vector<EntryMask::Entry> entries;
    for (const auto& rec : doc) {
      EntryMask::Entry e;
      const auto side = rec.at("side").get<std::string>();
      if (side == "a") {
        e.side = Side::a;
      } else if (side == "b") {
        e.side = Side::b;
      } else {
        throw InvalidInput("mask: side must be \"a\" or \"b\", got \"" + side + "\"");
      }
      e.index = rec.at("index").get<int>();
      e.row = rec.at("row").get<int>();
      e.col = rec.at("col").get<int>();
      e.value = rec.at("value").get<double>();
      entries.push_back(e);
    }
    return EntryMask(std::move(entries));
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("mask: ") + e.what());
  }
}

std::string mask_to_json(const EntryMask& mask) {
  json doc = json::array();
  for (const auto& e : mask.entries()) {
    doc.push_back({{"side", e.side == Side::a ? "a" : "b"},
                   {"index", e.index},
                   {"row", e.row},
                   {"col", e.col},
                   {"value", e.value}});
  }
  return doc.dump(1) + "\n";
}

EntryMask read_mask(const std::filesystem::path& path) {
  try {
    return mask_from_json(read_text(path));
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

}  // namespace psdfact::io
