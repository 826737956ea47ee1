#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "zol/error.hpp"

namespace zol {

/// Binary-classification sample matrix. Features are row-major reals in
/// [0,1]; labels are +1/-1.
struct Dataset {
  std::vector<float> features;  // n*d, row-major
  std::vector<std::int8_t> labels;
  std::size_t n = 0;
  std::size_t d = 0;

  std::span<const float> row(std::size_t i) const { return {features.data() + i * d, d}; }
  int label(std::size_t i) const { return labels[i]; }

  /// Throws unless every invariant holds (sizes, finite [0,1] features,
  /// labels over {+1,-1}).
  void validate() const;
};

struct SplitSpec {
  double train_fraction = 0.5;  // in (0,1)
  std::uint64_t seed = 0;
  bool stratified = true;
};

/// Column-major copy for solvers that sweep feature columns.
struct ColMajor {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<float> values;  // values[j*n + i]

  const float* col(std::size_t j) const { return values.data() + j * n; }
  static ColMajor from(const Dataset& ds);
};

/// Loads an IDX image/label pair (MNIST layout, big-endian counts), keeping
/// only samples of the two requested original classes. class_a maps to -1,
/// class_b to +1; pixels are scaled by 1/255.
Dataset load_idx(const std::string& image_path, const std::string& label_path, int class_a,
                 int class_b);

/// Writes an IDX pair with byte labels (inverse of the load_idx file format;
/// features must be exact multiples of 1/255).
void save_idx(const Dataset& ds, const std::string& image_path, const std::string& label_path,
              int class_neg, int class_pos, std::size_t rows, std::size_t cols);

// Raw little-endian matrix pair. Feature file header: magic, version, n, d
// (u32 each), then n*d float32. Label file header: magic, version, n, then n
// int8 values in {+1,-1}.
inline constexpr std::uint32_t kMatrixMagic = 0x5A4F4C31;  // "ZOL1"
inline constexpr std::uint32_t kMatrixVersion = 1;

Dataset load_matrix(const std::string& feature_path, const std::string& label_path);
void save_matrix(const Dataset& ds, const std::string& feature_path,
                 const std::string& label_path);

/// Two isotropic unit-variance 2-D Gaussian blobs whose means are `gap`
/// standard deviations apart, rescaled per-dimension into [0,1]^2. Left blob
/// is labeled -1, right blob +1. Linearly separable w.h.p. for gap >= 6.
Dataset gen_simple(std::size_t n_per_class, double gap, std::uint64_t seed);

/// Two overlapping blobs (means 2 sd apart) with labels near the midline
/// flipped at random, so the best linear rule keeps a strictly positive
/// error. overlap in (0,1]; overlap=1 makes midline-band labels uniform.
Dataset gen_complex(std::size_t n_per_class, double overlap, std::uint64_t seed);

/// Disjoint, exhaustive partition into (train, test), deterministic in
/// spec.seed; stratified by label when requested.
std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec);

/// Subset by row indices, preserving index order.
Dataset take_rows(const Dataset& ds, std::span<const std::uint32_t> rows);

}  // namespace zol
