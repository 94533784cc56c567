#pragma once

#include "agfti/common.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace agfti {

/// Raw multi-view input: one n x d_v matrix per view and an integer label per
/// sample (-1 when unknown).
struct DatasetContainer {
  std::string name;
  std::vector<Matrix> views;
  std::vector<int> labels;
  int classes = 0;

  Index samples() const { return static_cast<Index>(labels.size()); }
  Index view_count() const { return static_cast<Index>(views.size()); }
};

/// Malformed container. `offset` is the byte position where decoding failed
/// (0 for errors not tied to a position).
class DatasetError : public Error {
 public:
  DatasetError(const std::string& message, std::size_t offset)
      : Error(message + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Checks shape consistency and label range; every class 0..c-1 must occur.
void validate_dataset(const DatasetContainer& data);

/// Binary container, little-endian:
///   "MVDS" | u32 version = 1 | u32 n | u32 V | u32 c | V x u32 d_v |
///   n x i32 labels | for each view, n x d_v f64 row-major.
std::vector<std::uint8_t> encode_dataset(const DatasetContainer& data);
DatasetContainer decode_dataset(std::span<const std::uint8_t> bytes, std::string name = {});

void save_dataset(const DatasetContainer& data, const std::filesystem::path& path);
/// The container name is the file stem.
DatasetContainer load_dataset(const std::filesystem::path& path);

/// CSV fallback: a directory with view_0.csv .. view_{V-1}.csv (one sample
/// per line, comma separated) and labels.csv (one integer per line). The
/// class count is one more than the largest label.
void save_dataset_csv(const DatasetContainer& data, const std::filesystem::path& dir);
DatasetContainer load_dataset_csv(const std::filesystem::path& dir);

}  // namespace agfti
