#pragma once

#include "agfti/dataset.hpp"

#include <cstdint>

namespace agfti {

struct SynthConfig {
  std::uint64_t seed = 0;
  Index n_per_class = 100;
  /// When positive, overrides n_per_class: total samples, with the remainder
  /// of total / classes going one each to the lowest classes.
  Index total = 0;
  int views = 2;
  int classes = 3;
  /// Length of the sparse stretch inserted into every class manifold, as a
  /// fraction of the manifold length. 0 gives evenly filled manifolds.
  double vacuum_width = 1.5;
  double length = 10.0;      ///< manifold length before stretching
  double separation = 6.0;   ///< distance between neighbouring class manifolds
  double noise = 0.25;       ///< isotropic Gaussian noise of view 0
  double noise_growth = 0.0;  ///< view v uses noise * (1 + noise_growth * v)
};

/// Sub-cluster benchmark. Each class is an elongated segment in a 2-D plane,
/// the segments lying side by side. A sample has one latent position t ~ U(0,1)
/// shared by all views; view v maps it along the segment with a stretch of
/// `vacuum_width * length` centred at t = (v + 1) / (V + 1), so the few samples
/// falling there are spread thinly and every view has its thin bridge at a
/// different place. Removing samples from a view empties its bridge and
/// splits the class in two. View v lives in 2 + v dimensions: the plane is
/// rotated and shifted by a view-specific random transform and padded with
/// pure-noise coordinates.
///
/// Deterministic in the seed; labels are grouped by class.
DatasetContainer synth_scp(const SynthConfig& config);
DatasetContainer synth_scp(std::uint64_t seed, Index n_per_class, int views, int classes,
                           double vacuum_width);

}  // namespace agfti
