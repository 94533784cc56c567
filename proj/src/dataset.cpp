#include "agfti/dataset.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace agfti {
namespace {

constexpr char kMagic[4] = {'M', 'V', 'D', 'S'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t x) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(x >> (8 * b)));
}

void put_f64(std::vector<std::uint8_t>& out, double x) {
  const auto bits = std::bit_cast<std::uint64_t>(x);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(bits >> (8 * b)));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }

  void need(std::size_t count, const char* what) const {
    if (bytes_.size() - pos_ < count) {
      throw DatasetError(std::string("truncated container while reading ") + what + ": expected " +
                             std::to_string(pos_ + count) + " bytes, file has " +
                             std::to_string(bytes_.size()),
                         pos_);
    }
  }

  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t x = 0;
    for (int b = 0; b < 4; ++b) x |= static_cast<std::uint32_t>(bytes_[pos_ + b]) << (8 * b);
    pos_ += 4;
    return x;
  }

  double f64() {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes_[pos_ + b]) << (8 * b);
    pos_ += 8;
    return std::bit_cast<double>(bits);
  }

  std::span<const std::uint8_t> take(std::size_t count, const char* what) {
    need(count, what);
    auto s = bytes_.subspan(pos_, count);
    pos_ += count;
    return s;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

template <typename T>
T parse_number(const std::string& raw, const std::filesystem::path& file, std::size_t line) {
  const std::string s = trim(raw);
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DatasetError(file.string() + ": line " + std::to_string(line) + ": cannot parse '" + s +
                           "'",
                       0);
  }
  return value;
}

std::vector<std::string> read_lines(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw DatasetError("cannot open " + file.string(), 0);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

void validate_dataset(const DatasetContainer& data) {
  if (data.views.empty()) throw DatasetError("container has no views", 0);
  if (data.classes <= 0) throw DatasetError("class count must be positive", 0);
  const Index n = data.samples();
  if (n == 0) throw DatasetError("container has no samples", 0);
  for (std::size_t v = 0; v < data.views.size(); ++v) {
    if (data.views[v].rows() != n) {
      throw DatasetError("view " + std::to_string(v) + " has " +
                             std::to_string(data.views[v].rows()) + " rows, expected " +
                             std::to_string(n),
                         0);
    }
    if (data.views[v].cols() == 0) {
      throw DatasetError("view " + std::to_string(v) + " has no features", 0);
    }
  }
  std::vector<char> seen(static_cast<std::size_t>(data.classes), 0);
  for (std::size_t i = 0; i < data.labels.size(); ++i) {
    const int y = data.labels[i];
    if (y < -1 || y >= data.classes) {
      throw DatasetError("label " + std::to_string(y) + " of sample " + std::to_string(i) +
                             " outside [-1, " + std::to_string(data.classes) + ")",
                         0);
    }
    if (y >= 0) seen[static_cast<std::size_t>(y)] = 1;
  }
  for (int k = 0; k < data.classes; ++k) {
    if (!seen[static_cast<std::size_t>(k)]) {
      throw DatasetError("class " + std::to_string(k) + " has no samples", 0);
    }
  }
}

std::vector<std::uint8_t> encode_dataset(const DatasetContainer& data) {
  validate_dataset(data);
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(data.samples()));
  put_u32(out, static_cast<std::uint32_t>(data.view_count()));
  put_u32(out, static_cast<std::uint32_t>(data.classes));
  for (const auto& view : data.views) put_u32(out, static_cast<std::uint32_t>(view.cols()));
  for (int y : data.labels) put_u32(out, static_cast<std::uint32_t>(y));
  for (const auto& view : data.views) {
    for (Index i = 0; i < view.rows(); ++i) {
      for (Index j = 0; j < view.cols(); ++j) put_f64(out, view(i, j));
    }
  }
  return out;
}

DatasetContainer decode_dataset(std::span<const std::uint8_t> bytes, std::string name) {
  Reader in(bytes);
  const auto magic = in.take(4, "magic");
  if (!std::equal(magic.begin(), magic.end(), std::begin(kMagic))) {
    throw DatasetError("bad magic, expected \"MVDS\"", 0);
  }
  const std::size_t version_at = in.offset();
  const std::uint32_t version = in.u32("version");
  if (version != kVersion) {
    throw DatasetError("unsupported container version " + std::to_string(version), version_at);
  }
  const std::uint32_t n = in.u32("sample count");
  const std::uint32_t views = in.u32("view count");
  const std::size_t classes_at = in.offset();
  const std::uint32_t classes = in.u32("class count");
  if (n == 0 || views == 0) throw DatasetError("empty shape: n and V must be positive", 8);
  if (classes == 0 || classes > static_cast<std::uint32_t>(std::numeric_limits<int>::max())) {
    throw DatasetError("invalid class count", classes_at);
  }

  std::vector<std::uint32_t> dims(views);
  for (auto& d : dims) {
    const std::size_t at = in.offset();
    d = in.u32("view dimensions");
    if (d == 0) throw DatasetError("view dimension must be positive", at);
  }

  std::size_t expected = in.offset() + 4ULL * n;
  for (auto d : dims) expected += 8ULL * n * d;
  if (bytes.size() != expected) {
    throw DatasetError("container length mismatch: expected " + std::to_string(expected) +
                           " bytes from the header, file has " + std::to_string(bytes.size()),
                       std::min(bytes.size(), expected));
  }

  DatasetContainer data;
  data.name = std::move(name);
  data.classes = static_cast<int>(classes);
  data.labels.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::size_t at = in.offset();
    const auto y = static_cast<std::int32_t>(in.u32("labels"));
    if (y < -1 || y >= static_cast<std::int32_t>(classes)) {
      throw DatasetError("label " + std::to_string(y) + " of sample " + std::to_string(i) +
                             " outside [-1, " + std::to_string(classes) + ")",
                         at);
    }
    data.labels[i] = y;
  }
  data.views.reserve(views);
  for (auto d : dims) {
    Matrix x(n, d);
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::uint32_t j = 0; j < d; ++j) x(i, j) = in.f64();
    }
    data.views.push_back(std::move(x));
  }
  return data;
}

void save_dataset(const DatasetContainer& data, const std::filesystem::path& path) {
  const auto bytes = encode_dataset(data);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed for " + path.string());
}

DatasetContainer load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open " + path.string(), 0);
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return decode_dataset(bytes, path.stem().string());
}

void save_dataset_csv(const DatasetContainer& data, const std::filesystem::path& dir) {
  validate_dataset(data);
  std::filesystem::create_directories(dir);
  char buf[32];
  for (std::size_t v = 0; v < data.views.size(); ++v) {
    std::ofstream out(dir / ("view_" + std::to_string(v) + ".csv"));
    if (!out) throw Error("cannot write CSV view " + std::to_string(v));
    const Matrix& x = data.views[v];
    for (Index i = 0; i < x.rows(); ++i) {
      for (Index j = 0; j < x.cols(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", x(i, j));
        out << (j ? "," : "") << buf;
      }
      out << '\n';
    }
  }
  std::ofstream labels(dir / "labels.csv");
  for (int y : data.labels) labels << y << '\n';
}

DatasetContainer load_dataset_csv(const std::filesystem::path& dir) {
  DatasetContainer data;
  data.name = dir.filename().string();
  if (data.name.empty()) data.name = dir.parent_path().filename().string();

  const auto label_file = dir / "labels.csv";
  const auto label_lines = read_lines(label_file);
  int max_label = -1;
  for (std::size_t i = 0; i < label_lines.size(); ++i) {
    const int y = parse_number<int>(label_lines[i], label_file, i + 1);
    data.labels.push_back(y);
    max_label = std::max(max_label, y);
  }
  data.classes = max_label + 1;

  for (int v = 0;; ++v) {
    const auto file = dir / ("view_" + std::to_string(v) + ".csv");
    if (!std::filesystem::exists(file)) break;
    const auto lines = read_lines(file);
    Matrix x;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const auto fields = split_csv_line(lines[i]);
      if (i == 0) x.resize(static_cast<Index>(lines.size()), static_cast<Index>(fields.size()));
      if (static_cast<Index>(fields.size()) != x.cols()) {
        throw DatasetError(file.string() + ": line " + std::to_string(i + 1) + " has " +
                               std::to_string(fields.size()) + " fields, expected " +
                               std::to_string(x.cols()),
                           0);
      }
      for (std::size_t j = 0; j < fields.size(); ++j) {
        x(static_cast<Index>(i), static_cast<Index>(j)) = parse_number<double>(fields[j], file, i + 1);
      }
    }
    data.views.push_back(std::move(x));
  }
  validate_dataset(data);
  return data;
}

}  // namespace agfti
