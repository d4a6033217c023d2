#include "condreg/dataset.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "condreg/errors.h"

namespace condreg {

void Dataset::validate() const {
  const long N = size();
  if (N < 1) throw ValidationError("dataset has no rows");
  if (n() < 1) throw ValidationError("dataset needs at least one Boolean attribute");
  if (d() < 1) throw ValidationError("dataset needs at least one feature column");
  if (x.rows() != N || y.rows() != N)
    throw ValidationError("x, y and z disagree on the number of rows");
  for (long i = 0; i < N; ++i) {
    for (long a = 0; a < n(); ++a)
      if (x(i, a) > 1)
        throw ValidationError("row " + std::to_string(i + 1) + ": x_" + std::to_string(a + 1) +
                                  " is not 0 or 1",
                              i + 1);
    if (!std::isfinite(z(i)) || !y.row(i).allFinite())
      throw ValidationError("row " + std::to_string(i + 1) + ": non-finite value", i + 1);
    if (feature_bound && y.row(i).norm() > *feature_bound)
      throw ValidationError("row " + std::to_string(i + 1) + ": ||y|| exceeds declared bound",
                            i + 1);
  }
}

bool operator==(const Dataset& a, const Dataset& b) {
  return a.x.rows() == b.x.rows() && a.x.cols() == b.x.cols() && a.y.cols() == b.y.cols() &&
         a.z.size() == b.z.size() && a.x == b.x && a.y == b.y && a.z == b.z;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    auto b = cell.find_first_not_of(" \t\r");
    auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, long row, const std::string& col) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParseError("row " + std::to_string(row) + ": cannot parse " + col + " value '" + s + "'",
                     row);
  return v;
}

struct Layout {
  long n = 0, d = 0;
  std::vector<long> x_col, y_col;
  long z_col = -1;
  long width = 0;
};

Layout read_header(const std::string& header, long n, long d) {
  auto names = split_line(header);
  std::map<std::string, long> pos;
  for (long i = 0; i < static_cast<long>(names.size()); ++i) {
    if (!pos.emplace(names[i], i).second)
      throw ParseError("header: duplicate column '" + names[i] + "'", 0);
  }
  Layout L;
  L.width = static_cast<long>(names.size());
  if (n < 0 || d < 0) {
    n = d = 0;
    while (pos.count("x_" + std::to_string(n + 1))) ++n;
    while (pos.count("y_" + std::to_string(d + 1))) ++d;
  }
  L.n = n;
  L.d = d;
  auto need = [&](const std::string& name) {
    auto it = pos.find(name);
    if (it == pos.end()) throw ParseError("header: missing column '" + name + "'", 0);
    return it->second;
  };
  for (long a = 0; a < n; ++a) L.x_col.push_back(need("x_" + std::to_string(a + 1)));
  for (long j = 0; j < d; ++j) L.y_col.push_back(need("y_" + std::to_string(j + 1)));
  L.z_col = need("z");
  if (L.width != n + d + 1)
    throw ParseError("header: expected " + std::to_string(n + d + 1) + " columns, found " +
                         std::to_string(L.width),
                     0);
  return L;
}

Dataset load_impl(const std::string& path, long n, long d) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path, 0);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file", 0);
  Layout L = read_header(line, n, d);

  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rows.push_back(split_line(line));
  }
  const long N = static_cast<long>(rows.size());
  Dataset data;
  data.x.resize(N, L.n);
  data.y.resize(N, L.d);
  data.z.resize(N);
  for (long i = 0; i < N; ++i) {
    const long row = i + 1;
    const auto& cells = rows[i];
    if (static_cast<long>(cells.size()) != L.width)
      throw ParseError("row " + std::to_string(row) + ": expected " + std::to_string(L.width) +
                           " fields, found " + std::to_string(cells.size()),
                       row);
    for (long a = 0; a < L.n; ++a) {
      const std::string name = "x_" + std::to_string(a + 1);
      double v = parse_double(cells[L.x_col[a]], row, name);
      if (v != 0.0 && v != 1.0)
        throw ValidationError("row " + std::to_string(row) + ": " + name + " = " +
                                  cells[L.x_col[a]] + " is not 0 or 1",
                              row);
      data.x(i, a) = static_cast<std::uint8_t>(v);
    }
    for (long j = 0; j < L.d; ++j)
      data.y(i, j) = parse_double(cells[L.y_col[j]], row, "y_" + std::to_string(j + 1));
    data.z(i) = parse_double(cells[L.z_col], row, "z");
  }
  data.validate();
  return data;
}

}  // namespace

Dataset load_csv(const std::string& path, long n, long d) {
  if (n < 1 || d < 1) throw ParameterError("load_csv: n and d must be positive");
  return load_impl(path, n, d);
}

Dataset load_csv(const std::string& path) { return load_impl(path, -1, -1); }

void write_csv(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  for (long a = 0; a < data.n(); ++a) out << "x_" << a + 1 << ',';
  for (long j = 0; j < data.d(); ++j) out << "y_" << j + 1 << ',';
  out << "z\n";
  char buf[32];
  auto num = [&](double v) {
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, p - buf);
  };
  for (long i = 0; i < data.size(); ++i) {
    for (long a = 0; a < data.n(); ++a) out << int(data.x(i, a)) << ',';
    for (long j = 0; j < data.d(); ++j) {
      num(data.y(i, j));
      out << ',';
    }
    num(data.z(i));
    out << '\n';
  }
  if (!out) throw Error("write failed for " + path);
}

Dataset binarize(const Dataset& data, long column, const std::vector<double>& thresholds,
                 ThresholdSense sense) {
  if (column < 0 || column >= data.d())
    throw ParameterError("binarize: feature column " + std::to_string(column) + " out of range");
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    if (!std::isfinite(thresholds[t])) throw ParameterError("binarize: non-finite threshold");
    if (t > 0 && !(thresholds[t] > thresholds[t - 1]))
      throw ParameterError("binarize: thresholds must be strictly increasing");
  }
  Dataset out = data;
  const long n0 = data.n();
  out.x.conservativeResize(data.size(), n0 + static_cast<long>(thresholds.size()));
  for (long i = 0; i < data.size(); ++i) {
    const double v = data.y(i, column);
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
      bool bit = sense == ThresholdSense::kLessEqual ? v <= thresholds[t] : v >= thresholds[t];
      out.x(i, n0 + static_cast<long>(t)) = bit ? 1 : 0;
    }
  }
  return out;
}

std::uint64_t column_hash(const Dataset& data, long x_column) {
  std::uint64_t h = 1469598103934665603ull;
  for (long i = 0; i < data.size(); ++i) {
    h ^= data.x(i, x_column);
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace condreg
