#include "agfti/masks.hpp"

#include "agfti/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace agfti {

using nlohmann::json;

std::vector<Index> MaskSet::existing_in(int view) const {
  std::vector<Index> out;
  for (Index i = 0; i < samples(); ++i) {
    const auto& gone = missing[static_cast<std::size_t>(i)];
    if (!std::binary_search(gone.begin(), gone.end(), view)) out.push_back(i);
  }
  return out;
}

std::vector<Index> MaskSet::missing_in(int view) const {
  std::vector<Index> out;
  for (Index i = 0; i < samples(); ++i) {
    const auto& gone = missing[static_cast<std::size_t>(i)];
    if (std::binary_search(gone.begin(), gone.end(), view)) out.push_back(i);
  }
  return out;
}

std::vector<char> MaskSet::labeled_mask() const {
  std::vector<char> out(missing.size(), 0);
  for (Index i : labeled) out[static_cast<std::size_t>(i)] = 1;
  return out;
}

std::vector<Index> MaskSet::unlabeled() const {
  const auto mask = labeled_mask();
  std::vector<Index> out;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) out.push_back(static_cast<Index>(i));
  }
  return out;
}

MaskSet generate_masks(const DatasetContainer& data, const MaskSpec& spec) {
  if (!(spec.vmr >= 0.0 && spec.vmr < 1.0)) throw InvalidArgument("VMR must lie in [0, 1)");
  if (!(spec.lar > 0.0 && spec.lar <= 1.0)) throw InvalidArgument("LAR must lie in (0, 1]");
  const Index n = data.samples();
  const Index views = data.view_count();

  MaskSet out;
  out.spec = spec;
  out.views = views;
  out.missing.assign(static_cast<std::size_t>(n), {});

  CounterRng rng(spec.seed);
  // The epsilon keeps products such as 0.3 * 100 = 30.000000000000004 exact.
  const auto incomplete = static_cast<Index>(std::floor(spec.vmr * static_cast<double>(n) + 1e-9));
  if (incomplete > 0 && views < 2) {
    throw InvalidArgument("VMR > 0 needs at least two views");
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  rng.shuffle(std::span<Index>(order));
  std::vector<Index> chosen(order.begin(), order.begin() + incomplete);
  std::sort(chosen.begin(), chosen.end());

  std::vector<int> view_order(static_cast<std::size_t>(views));
  for (Index i : chosen) {
    const auto drop = 1 + rng.uniform_index(static_cast<std::uint64_t>(views - 1));
    std::iota(view_order.begin(), view_order.end(), 0);
    rng.shuffle(std::span<int>(view_order));
    auto& gone = out.missing[static_cast<std::size_t>(i)];
    gone.assign(view_order.begin(), view_order.begin() + static_cast<std::ptrdiff_t>(drop));
    std::sort(gone.begin(), gone.end());
  }

  for (int k = 0; k < data.classes; ++k) {
    std::vector<Index> members;
    for (Index i = 0; i < n; ++i) {
      if (data.labels[static_cast<std::size_t>(i)] == k) members.push_back(i);
    }
    const auto want = std::min<Index>(
        static_cast<Index>(members.size()),
        static_cast<Index>(std::ceil(spec.lar * static_cast<double>(members.size()) - 1e-9)));
    if (want == 0) {
      throw InvalidArgument("class " + std::to_string(k) + " receives no labeled sample (LAR " +
                            std::to_string(spec.lar) + ", " + std::to_string(members.size()) +
                            " members)");
    }
    rng.shuffle(std::span<Index>(members));
    out.labeled.insert(out.labeled.end(), members.begin(), members.begin() + want);
  }
  std::sort(out.labeled.begin(), out.labeled.end());
  return out;
}

std::string masks_to_json(const MaskSet& masks) {
  json j;
  j["seed"] = masks.spec.seed;
  j["vmr"] = masks.spec.vmr;
  j["lar"] = masks.spec.lar;
  j["missing"] = masks.missing;
  j["labeled"] = masks.labeled;
  return j.dump();
}

MaskSet masks_from_json(const std::string& text, Index views) {
  MaskSet out;
  try {
    const json j = json::parse(text);
    out.spec.seed = j.at("seed").get<std::uint64_t>();
    out.spec.vmr = j.at("vmr").get<double>();
    out.spec.lar = j.at("lar").get<double>();
    out.missing = j.at("missing").get<std::vector<std::vector<int>>>();
    out.labeled = j.at("labeled").get<std::vector<Index>>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("mask file: ") + e.what());
  }
  out.views = views;
  const Index n = out.samples();
  for (auto& gone : out.missing) {
    std::sort(gone.begin(), gone.end());
    if (static_cast<Index>(gone.size()) >= views ||
        std::adjacent_find(gone.begin(), gone.end()) != gone.end() ||
        (!gone.empty() && (gone.front() < 0 || gone.back() >= views))) {
      throw InvalidArgument("mask file: every sample must keep at least one valid view");
    }
  }
  std::sort(out.labeled.begin(), out.labeled.end());
  for (Index i : out.labeled) {
    if (i < 0 || i >= n) throw InvalidArgument("mask file: labeled index out of range");
  }
  return out;
}

void save_masks(const MaskSet& masks, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << masks_to_json(masks) << '\n';
}

MaskSet load_masks(const std::filesystem::path& path, Index views) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return masks_from_json(buf.str(), views);
}

}  // namespace agfti
