#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "inkmetrics/model.hpp"

namespace ink {

/// Lévy walk with power-law step lengths above 10 px (inverse-CDF sampling),
/// uniform headings and a constant pen speed, drawn as a single stroke. The
/// path is reflected at the screen bounds (billiard folding).
DrawingSession gen_levy(double mu, int n_steps, std::uint64_t seed);

/// Random walk with isotropic Gaussian displacements; otherwise as gen_levy.
DrawingSession gen_brownian(double step_sigma, int n_steps, std::uint64_t seed);

struct ShapeStroke {
  int colour_id = 0;
  std::vector<std::pair<double, double>> vertices;
};

/// Deterministic polyline fixture with per-stroke colours.
struct ShapeSpec {
  int screen_w = 2048;
  int screen_h = 1536;
  double speed_px_per_ms = 1.0;
  std::int64_t gap_ms = 200;
  std::vector<ShapeStroke> strokes;
};

DrawingSession gen_shape(const ShapeSpec& spec, std::uint64_t seed);

/// Exact fractional Gaussian noise by circulant embedding of the fGn
/// autocovariance. Lengths that are not a power of two are generated by
/// truncating the next power-of-two sample.
std::vector<double> gen_fgn(double hurst, std::size_t n, std::uint64_t seed);

/// fGn thresholded at its sample median into a drawing/non-drawing series,
/// keeping the bit proportion at one half. n must be a power of two >= 512.
BinarySeries gen_fgn_binary(double hurst, std::size_t n, std::uint64_t seed,
                            std::int64_t dt_ms = 100);

/// Multi-stroke drawing with three independent planted factors: efficiency
/// (step-length exponent, pen speed, total distance), diversity (colour
/// count and brightness mix) and sequentiality (stroke count plus the
/// persistence of the draw/gap rhythm). Used to seed corpora whose metric
/// table has a known block structure.
struct PlantedSpec {
  double efficiency = 0.5;     // in [0, 1]
  double diversity = 0.5;      // in [0, 1]
  double sequentiality = 0.5;  // in [0, 1]
  int n_steps = 320;  // floor; the walk grows until the ink time suits the Hurst floor
  int screen_w = 2048;
  int screen_h = 1536;
  std::uint64_t seed = 0;
  std::string session_id;  // derived from the seed when empty
};

DrawingSession gen_planted(const PlantedSpec& spec);

/// Corpus of planted drawings with independently sampled factors.
std::vector<DrawingSession> gen_corpus(int count, std::uint64_t seed);

}  // namespace ink
