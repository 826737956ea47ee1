#include "zol/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>

#include "zol/rng.hpp"

namespace zol {

namespace {

std::vector<unsigned char> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  in.seekg(0, std::ios::end);
  const auto size = static_cast<std::size_t>(in.tellg());
  in.seekg(0, std::ios::beg);
  std::vector<unsigned char> buf(size);
  if (size > 0) in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(size));
  if (!in) throw FormatError("short read on " + path);
  return buf;
}

void write_file(const std::string& path, const void* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!out) throw FormatError("short write on " + path);
}

std::uint32_t be32(const unsigned char* p) {
  return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) | (std::uint32_t(p[2]) << 8) |
         std::uint32_t(p[3]);
}

void put_be32(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(static_cast<unsigned char>(v >> 24));
  out.push_back(static_cast<unsigned char>(v >> 16));
  out.push_back(static_cast<unsigned char>(v >> 8));
  out.push_back(static_cast<unsigned char>(v));
}

std::uint32_t le32(const unsigned char* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
         (std::uint32_t(p[3]) << 24);
}

void put_le32(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(static_cast<unsigned char>(v));
  out.push_back(static_cast<unsigned char>(v >> 8));
  out.push_back(static_cast<unsigned char>(v >> 16));
  out.push_back(static_cast<unsigned char>(v >> 24));
}

constexpr std::uint32_t kIdxImageMagic = 0x00000803;
constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

}  // namespace

void Dataset::validate() const {
  if (n < 1 || d < 1) throw ConsistencyError("dataset must have n >= 1 and d >= 1");
  if (features.size() != n * d) throw ConsistencyError("feature buffer size != n*d");
  if (labels.size() != n) throw ConsistencyError("label count != feature row count");
  for (const float v : features) {
    if (!std::isfinite(v) || v < 0.0f || v > 1.0f)
      throw RangeError("feature value outside [0,1]: " + std::to_string(v));
  }
  for (const auto y : labels) {
    if (y != 1 && y != -1) throw FormatError("label not in {+1,-1}: " + std::to_string(int(y)));
  }
}

ColMajor ColMajor::from(const Dataset& ds) {
  ColMajor cm;
  cm.n = ds.n;
  cm.d = ds.d;
  cm.values.resize(ds.n * ds.d);
  for (std::size_t i = 0; i < ds.n; ++i) {
    const float* r = ds.features.data() + i * ds.d;
    for (std::size_t j = 0; j < ds.d; ++j) cm.values[j * ds.n + i] = r[j];
  }
  return cm;
}

Dataset load_idx(const std::string& image_path, const std::string& label_path, int class_a,
                 int class_b) {
  if (class_a == class_b) throw ArgumentError("requested classes must differ");
  const auto img = read_file(image_path);
  const auto lab = read_file(label_path);
  if (img.size() < 16 || be32(img.data()) != kIdxImageMagic)
    throw FormatError("bad IDX image magic in " + image_path);
  if (lab.size() < 8 || be32(lab.data()) != kIdxLabelMagic)
    throw FormatError("bad IDX label magic in " + label_path);
  const std::size_t count = be32(img.data() + 4);
  const std::size_t rows = be32(img.data() + 8);
  const std::size_t cols = be32(img.data() + 12);
  const std::size_t label_count = be32(lab.data() + 4);
  if (label_count != count) throw ConsistencyError("IDX image/label counts differ");
  const std::size_t dim = rows * cols;
  if (img.size() != 16 + count * dim) throw FormatError("IDX image payload size mismatch");
  if (lab.size() != 8 + count) throw FormatError("IDX label payload size mismatch");

  Dataset ds;
  ds.d = dim;
  for (std::size_t i = 0; i < count; ++i) {
    const int y = lab[8 + i];
    if (y != class_a && y != class_b) continue;
    ds.labels.push_back(y == class_a ? -1 : +1);
    const unsigned char* px = img.data() + 16 + i * dim;
    for (std::size_t j = 0; j < dim; ++j)
      ds.features.push_back(static_cast<float>(px[j]) / 255.0f);
  }
  ds.n = ds.labels.size();
  const bool has_a = std::find(ds.labels.begin(), ds.labels.end(), -1) != ds.labels.end();
  const bool has_b = std::find(ds.labels.begin(), ds.labels.end(), +1) != ds.labels.end();
  if (!has_a) throw EmptyClassError("class " + std::to_string(class_a) + " absent");
  if (!has_b) throw EmptyClassError("class " + std::to_string(class_b) + " absent");
  ds.validate();
  return ds;
}

void save_idx(const Dataset& ds, const std::string& image_path, const std::string& label_path,
              int class_neg, int class_pos, std::size_t rows, std::size_t cols) {
  if (rows * cols != ds.d) throw ArgumentError("rows*cols must equal feature dimension");
  std::vector<unsigned char> img;
  img.reserve(16 + ds.n * ds.d);
  put_be32(img, kIdxImageMagic);
  put_be32(img, static_cast<std::uint32_t>(ds.n));
  put_be32(img, static_cast<std::uint32_t>(rows));
  put_be32(img, static_cast<std::uint32_t>(cols));
  for (const float v : ds.features)
    img.push_back(static_cast<unsigned char>(std::lround(v * 255.0f)));
  std::vector<unsigned char> lab;
  lab.reserve(8 + ds.n);
  put_be32(lab, kIdxLabelMagic);
  put_be32(lab, static_cast<std::uint32_t>(ds.n));
  for (const auto y : ds.labels)
    lab.push_back(static_cast<unsigned char>(y < 0 ? class_neg : class_pos));
  write_file(image_path, img.data(), img.size());
  write_file(label_path, lab.data(), lab.size());
}

Dataset load_matrix(const std::string& feature_path, const std::string& label_path) {
  const auto feat = read_file(feature_path);
  const auto lab = read_file(label_path);
  if (feat.size() < 16 || le32(feat.data()) != kMatrixMagic)
    throw FormatError("bad matrix magic in " + feature_path);
  if (le32(feat.data() + 4) != kMatrixVersion)
    throw FormatError("unsupported matrix version in " + feature_path);
  const std::size_t n = le32(feat.data() + 8);
  const std::size_t d = le32(feat.data() + 12);
  if (feat.size() != 16 + 4 * n * d) throw FormatError("matrix payload size mismatch");
  if (lab.size() < 12 || le32(lab.data()) != kMatrixMagic)
    throw FormatError("bad label magic in " + label_path);
  if (le32(lab.data() + 4) != kMatrixVersion)
    throw FormatError("unsupported label version in " + label_path);
  if (le32(lab.data() + 8) != n) throw ConsistencyError("matrix/label counts differ");
  if (lab.size() != 12 + n) throw FormatError("label payload size mismatch");

  Dataset ds;
  ds.n = n;
  ds.d = d;
  ds.features.resize(n * d);
  static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);
  std::memcpy(ds.features.data(), feat.data() + 16, 4 * n * d);
  ds.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto y = static_cast<std::int8_t>(lab[12 + i]);
    if (y != 1 && y != -1) throw FormatError("label byte not +1/-1");
    ds.labels[i] = y;
  }
  ds.validate();
  return ds;
}

void save_matrix(const Dataset& ds, const std::string& feature_path,
                 const std::string& label_path) {
  std::vector<unsigned char> feat;
  feat.reserve(16 + 4 * ds.n * ds.d);
  put_le32(feat, kMatrixMagic);
  put_le32(feat, kMatrixVersion);
  put_le32(feat, static_cast<std::uint32_t>(ds.n));
  put_le32(feat, static_cast<std::uint32_t>(ds.d));
  const std::size_t payload = feat.size();
  feat.resize(payload + 4 * ds.n * ds.d);
  std::memcpy(feat.data() + payload, ds.features.data(), 4 * ds.n * ds.d);
  std::vector<unsigned char> lab;
  put_le32(lab, kMatrixMagic);
  put_le32(lab, kMatrixVersion);
  put_le32(lab, static_cast<std::uint32_t>(ds.n));
  for (const auto y : ds.labels) lab.push_back(static_cast<unsigned char>(y));
  write_file(feature_path, feat.data(), feat.size());
  write_file(label_path, lab.data(), lab.size());
}

namespace {

/// Per-dimension min-max rescale into [0,1]; constant dimensions map to 0.5.
void rescale_unit_square(std::vector<float>& xy) {
  for (int dim = 0; dim < 2; ++dim) {
    float lo = std::numeric_limits<float>::infinity();
    float hi = -std::numeric_limits<float>::infinity();
    for (std::size_t i = dim; i < xy.size(); i += 2) {
      lo = std::min(lo, xy[i]);
      hi = std::max(hi, xy[i]);
    }
    const float range = hi - lo;
    for (std::size_t i = dim; i < xy.size(); i += 2)
      xy[i] = range > 1e-12f ? (xy[i] - lo) / range : 0.5f;
  }
}

}  // namespace

Dataset gen_simple(std::size_t n_per_class, double gap, std::uint64_t seed) {
  if (n_per_class < 1) throw ArgumentError("n_per_class must be >= 1");
  if (gap <= 0) throw ArgumentError("gap must be > 0");
  Rng rng(derive_seed(seed, 0x51));
  Dataset ds;
  ds.d = 2;
  ds.n = 2 * n_per_class;
  ds.features.resize(2 * ds.n);
  ds.labels.resize(ds.n);
  const double half = gap / 2.0;
  for (std::size_t i = 0; i < ds.n; ++i) {
    const bool right = i >= n_per_class;
    const double cx = right ? +half : -half;
    ds.features[2 * i] = static_cast<float>(cx + rng.normal());
    ds.features[2 * i + 1] = static_cast<float>(rng.normal());
    ds.labels[i] = right ? +1 : -1;
  }
  rescale_unit_square(ds.features);
  ds.validate();
  return ds;
}

Dataset gen_complex(std::size_t n_per_class, double overlap, std::uint64_t seed) {
  if (n_per_class < 1) throw ArgumentError("n_per_class must be >= 1");
  if (overlap <= 0 || overlap > 1) throw ArgumentError("overlap must be in (0,1]");
  Rng rng(derive_seed(seed, 0xC0));
  Dataset ds;
  ds.d = 2;
  ds.n = 2 * n_per_class;
  ds.features.resize(2 * ds.n);
  ds.labels.resize(ds.n);
  for (std::size_t i = 0; i < ds.n; ++i) {
    const bool right = i >= n_per_class;
    const double cx = right ? +1.0 : -1.0;  // means 2 sd apart: blobs overlap
    const double x = cx + rng.normal();
    const double y = rng.normal();
    ds.features[2 * i] = static_cast<float>(x);
    ds.features[2 * i + 1] = static_cast<float>(y);
    int label = right ? +1 : -1;
    // Midline band: flip with probability overlap/2, so overlap=1 makes the
    // band's labels independent of position.
    if (std::abs(x) < 1.0 && rng.next_double() < overlap / 2.0) label = -label;
    ds.labels[i] = static_cast<std::int8_t>(label);
  }
  rescale_unit_square(ds.features);
  ds.validate();
  return ds;
}

Dataset take_rows(const Dataset& ds, std::span<const std::uint32_t> rows) {
  Dataset out;
  out.d = ds.d;
  out.n = rows.size();
  out.features.reserve(out.n * out.d);
  out.labels.reserve(out.n);
  for (const auto r : rows) {
    const auto row = ds.row(r);
    out.features.insert(out.features.end(), row.begin(), row.end());
    out.labels.push_back(ds.labels[r]);
  }
  return out;
}

std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec) {
  if (spec.train_fraction <= 0.0 || spec.train_fraction >= 1.0)
    throw ArgumentError("train_fraction must lie strictly between 0 and 1");
  const auto total = static_cast<std::size_t>(std::llround(ds.n * spec.train_fraction));
  if (total == 0 || total == ds.n) throw ArgumentError("split fraction yields an empty part");

  Rng rng(derive_seed(spec.seed, 0x5B));
  std::vector<std::uint32_t> train_idx, test_idx;
  if (!spec.stratified) {
    std::vector<std::uint32_t> idx(ds.n);
    for (std::uint32_t i = 0; i < ds.n; ++i) idx[i] = i;
    rng.shuffle(idx);
    train_idx.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(total));
    test_idx.assign(idx.begin() + static_cast<std::ptrdiff_t>(total), idx.end());
  } else {
    std::vector<std::uint32_t> neg, pos;
    for (std::uint32_t i = 0; i < ds.n; ++i) (ds.labels[i] < 0 ? neg : pos).push_back(i);
    rng.shuffle(neg);
    rng.shuffle(pos);
    // Largest-remainder apportionment of `total` across the two classes.
    const double en = neg.size() * spec.train_fraction;
    const double ep = pos.size() * spec.train_fraction;
    std::size_t tn = static_cast<std::size_t>(en);
    std::size_t tp = static_cast<std::size_t>(ep);
    while (tn + tp < total) {
      if (en - static_cast<double>(tn) >= ep - static_cast<double>(tp) && tn < neg.size())
        ++tn;
      else
        ++tp;
    }
    while (tn + tp > total) {
      if (en - static_cast<double>(tn) <= ep - static_cast<double>(tp) && tn > 0)
        --tn;
      else
        --tp;
    }
    auto append = [](std::vector<std::uint32_t>& dst, const std::vector<std::uint32_t>& src,
                     std::size_t from, std::size_t to) {
      dst.insert(dst.end(), src.begin() + static_cast<std::ptrdiff_t>(from),
                 src.begin() + static_cast<std::ptrdiff_t>(to));
    };
    append(train_idx, neg, 0, tn);
    append(train_idx, pos, 0, tp);
    append(test_idx, neg, tn, neg.size());
    append(test_idx, pos, tp, pos.size());
  }
  if (train_idx.empty() || test_idx.empty())
    throw ArgumentError("split fraction yields an empty part");
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  return {take_rows(ds, train_idx), take_rows(ds, test_idx)};
}

}  // namespace zol
