#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace condreg {

using BoolMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// N rows of (x in {0,1}^n, y in R^d, z in R).
struct Dataset {
  BoolMatrix x;
  Matrix y;
  Vector z;
  // Declared bound on ||y_i||; checked by validate() when set.
  std::optional<double> feature_bound;

  long size() const { return static_cast<long>(z.size()); }
  long n() const { return static_cast<long>(x.cols()); }
  long d() const { return static_cast<long>(y.cols()); }

  // Throws ValidationError on shape mismatch, non-binary x, non-finite values.
  void validate() const;
};

bool operator==(const Dataset& a, const Dataset& b);

enum class ThresholdSense { kLessEqual, kGreaterEqual };

// Reads a CSV whose header names x_1..x_n, y_1..y_d, z (any order).
// Rows are numbered from 1 (first data row) in error messages.
Dataset load_csv(const std::string& path, long n, long d);
// Same, but n and d are read off the header.
Dataset load_csv(const std::string& path);
void write_csv(const std::string& path, const Dataset& data);

// Appends one Boolean column per threshold a: "y_col <= a" (or ">= a").
Dataset binarize(const Dataset& data, long column, const std::vector<double>& thresholds,
                 ThresholdSense sense = ThresholdSense::kLessEqual);

// Order-sensitive FNV-1a over raw bytes; used to check that columns are untouched.
std::uint64_t column_hash(const Dataset& data, long x_column);

}  // namespace condreg
