#include "agfti/synth.hpp"

#include "agfti/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace agfti {
namespace {

constexpr double kBridgeSpan = 0.08;  // latent width of each thin bridge

double ramp(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

DatasetContainer synth_scp(const SynthConfig& config) {
  if (config.views < 1 || config.classes < 1) {
    throw InvalidArgument("synth_scp: need at least one view and one class");
  }
  if (config.vacuum_width < 0.0) throw InvalidArgument("synth_scp: vacuum_width must be >= 0");

  std::vector<Index> per_class(static_cast<std::size_t>(config.classes), config.n_per_class);
  if (config.total > 0) {
    for (int k = 0; k < config.classes; ++k) {
      per_class[static_cast<std::size_t>(k)] =
          config.total / config.classes + (k < config.total % config.classes ? 1 : 0);
    }
  }
  Index n = 0;
  for (Index c : per_class) n += c;
  if (n == 0 || *std::min_element(per_class.begin(), per_class.end()) == 0) {
    throw InvalidArgument("synth_scp: every class needs at least one sample");
  }

  DatasetContainer data;
  data.name = "synth_scp";
  data.classes = config.classes;
  data.labels.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < config.classes; ++k) {
    data.labels.insert(data.labels.end(), static_cast<std::size_t>(per_class[static_cast<std::size_t>(k)]), k);
  }

  CounterRng latent_rng(CounterRng::derive(config.seed, 0));
  std::vector<double> t(static_cast<std::size_t>(n));
  for (auto& x : t) x = latent_rng.uniform01();

  for (int v = 0; v < config.views; ++v) {
    CounterRng rng(CounterRng::derive(config.seed, static_cast<std::uint64_t>(v) + 1));
    const double angle = 2.0 * std::numbers::pi * rng.uniform01();
    const double shift_x = 4.0 * rng.normal();
    const double shift_y = 4.0 * rng.normal();
    const double cs = std::cos(angle), sn = std::sin(angle);
    const double centre = static_cast<double>(v + 1) / static_cast<double>(config.views + 1);
    const double noise = config.noise * (1.0 + config.noise_growth * v);

    Matrix x(n, 2 + v);
    for (Index i = 0; i < n; ++i) {
      const double ti = t[static_cast<std::size_t>(i)];
      const double along =
          config.length *
          (ti + config.vacuum_width * ramp((ti - centre) / kBridgeSpan + 0.5));
      const double across = config.separation * data.labels[static_cast<std::size_t>(i)];
      const double a = along + noise * rng.normal();
      const double b = across + noise * rng.normal();
      x(i, 0) = cs * a - sn * b + shift_x;
      x(i, 1) = sn * a + cs * b + shift_y;
      for (int j = 2; j < 2 + v; ++j) x(i, j) = noise * rng.normal();
    }
    data.views.push_back(std::move(x));
  }
  return data;
}

DatasetContainer synth_scp(std::uint64_t seed, Index n_per_class, int views, int classes,
                           double vacuum_width) {
  SynthConfig config;
  config.seed = seed;
  config.n_per_class = n_per_class;
  config.views = views;
  config.classes = classes;
  config.vacuum_width = vacuum_width;
  return synth_scp(config);
}

}  // namespace agfti
