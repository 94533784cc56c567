#pragma once

#include "agfti/common.hpp"
#include "agfti/dataset.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace agfti {

struct MaskSpec {
  double vmr = 0.5;  ///< fraction of incomplete samples, in [0, 1)
  double lar = 0.05;  ///< fraction of labeled samples per class, in (0, 1]
  std::uint64_t seed = 0;
};

/// Which views each sample lacks and which samples carry a label.
struct MaskSet {
  MaskSpec spec;
  Index views = 0;
  std::vector<std::vector<int>> missing;  ///< per sample, sorted view indices
  std::vector<Index> labeled;             ///< sorted sample indices

  Index samples() const { return static_cast<Index>(missing.size()); }
  std::vector<Index> existing_in(int view) const;
  std::vector<Index> missing_in(int view) const;
  std::vector<char> labeled_mask() const;
  std::vector<Index> unlabeled() const;
};

/// Draws masks from a single CounterRng keyed by spec.seed:
///   1. shuffle 0..n-1 and take the first floor(vmr * n) as incomplete;
///   2. for each incomplete sample in ascending order draw r = 1 +
///      uniform_index(V - 1), shuffle 0..V-1 and drop the first r views;
///   3. for each class in order shuffle its members (ascending before the
///      shuffle) and label the first ceil(lar * n_class).
/// Throws InvalidArgument for an out-of-range spec, when samples would have
/// to lose a view but V = 1, or when a class ends up with no labeled sample.
MaskSet generate_masks(const DatasetContainer& data, const MaskSpec& spec);

/// {"seed", "vmr", "lar", "missing": [[...] per sample], "labeled": [...]}
std::string masks_to_json(const MaskSet& masks);
/// `views` is needed to validate the view indices in "missing".
MaskSet masks_from_json(const std::string& text, Index views);

void save_masks(const MaskSet& masks, const std::filesystem::path& path);
MaskSet load_masks(const std::filesystem::path& path, Index views);

}  // namespace agfti
