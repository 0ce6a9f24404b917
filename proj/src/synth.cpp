#include "inkmetrics/synth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>

#include "inkmetrics/detail/textio.hpp"
#include "inkmetrics/errors.hpp"
#include "inkmetrics/rng.hpp"

namespace ink {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Billiard reflection of a coordinate into [0, lim].
double fold(double v, double lim) {
  double period = 2.0 * lim;
  v = std::fmod(v, period);
  if (v < 0.0) v += period;
  return v > lim ? period - v : v;
}

struct WalkBounds {
  double x0, y0, x1, y1;
};

// Appends one walk step, folding the endpoint into the bounds; returns the
// measured (post-fold) segment length.
double advance(double& x, double& y, double len, double heading, const WalkBounds& b) {
  double nx = b.x0 + fold(x - b.x0 + len * std::cos(heading), b.x1 - b.x0);
  double ny = b.y0 + fold(y - b.y0 + len * std::sin(heading), b.y1 - b.y0);
  double measured = std::hypot(nx - x, ny - y);
  x = nx;
  y = ny;
  return measured;
}

DrawingSession single_stroke_walk(const std::string& session_id, int screen_w, int screen_h,
                                  int n_steps, std::uint64_t seed,
                                  const std::function<double(Rng&)>& draw_length) {
  Rng rng(seed);
  DrawingSession s;
  s.session_id = session_id;
  s.screen_w = screen_w;
  s.screen_h = screen_h;

  Stroke st;
  st.stroke_id = 0;
  st.colour_id = 0;
  double x = screen_w / 2.0;
  double y = screen_h / 2.0;
  std::int64_t t = 0;
  st.points.push_back(StrokePoint{t, x, y});
  WalkBounds bounds{0.0, 0.0, static_cast<double>(screen_w), static_cast<double>(screen_h)};
  for (int i = 0; i < n_steps; ++i) {
    double len = draw_length(rng);
    double heading = rng.uniform(0.0, 2.0 * kPi);
    double measured = advance(x, y, len, heading, bounds);
    t += std::max<std::int64_t>(1, std::llround(measured));  // 1 px/ms pen speed
    st.points.push_back(StrokePoint{t, x, y});
  }
  s.strokes.push_back(std::move(st));
  return s;
}

// Pareto sample above xmin = 10 px; capped to keep the fold arithmetic
// finite for exponents close to 1.
double pareto_step(Rng& rng, double mu) {
  double u = 1.0 - rng.uniform();  // (0, 1]
  double len = 10.0 * std::pow(u, -1.0 / (mu - 1.0));
  return std::min(len, 1e15);
}

}  // namespace

DrawingSession gen_levy(double mu, int n_steps, std::uint64_t seed) {
  if (!(mu > 1.0 && mu <= 3.0))
    throw ValidationError("gen_levy: mu must be in (1, 3]");
  if (n_steps < 10) throw ValidationError("gen_levy: n_steps must be at least 10");
  std::string id = "levy_mu" + detail::fmt_g6(mu) + "_n" + std::to_string(n_steps) + "_s" +
                   std::to_string(seed);
  DrawingSession s = single_stroke_walk(
      id, 2048, 1536, n_steps, seed, [mu](Rng& rng) { return pareto_step(rng, mu); });
  s.labels["kind"] = "levy";
  s.labels["mu"] = detail::fmt_g6(mu);
  return s;
}

DrawingSession gen_brownian(double step_sigma, int n_steps, std::uint64_t seed) {
  if (!(step_sigma > 0.0)) throw ValidationError("gen_brownian: sigma must be positive");
  if (n_steps < 10) throw ValidationError("gen_brownian: n_steps must be at least 10");
  std::string id = "brownian_sigma" + detail::fmt_g6(step_sigma) + "_n" +
                   std::to_string(n_steps) + "_s" + std::to_string(seed);
  // Isotropic Gaussian displacement: length is Rayleigh(sigma).
  DrawingSession s = single_stroke_walk(id, 2048, 1536, n_steps, seed, [step_sigma](Rng& rng) {
    double dx = step_sigma * rng.normal();
    double dy = step_sigma * rng.normal();
    return std::hypot(dx, dy);
  });
  s.labels["kind"] = "brownian";
  s.labels["sigma"] = detail::fmt_g6(step_sigma);
  return s;
}

DrawingSession gen_shape(const ShapeSpec& spec, std::uint64_t seed) {
  (void)seed;  // fixtures are fully determined by the descriptor
  if (spec.strokes.empty()) throw ValidationError("gen_shape: no strokes in descriptor");
  DrawingSession s;
  s.session_id = "shape_" + std::to_string(spec.strokes.size()) + "strokes";
  s.screen_w = spec.screen_w;
  s.screen_h = spec.screen_h;
  s.labels["kind"] = "shape";

  std::int64_t t = 0;
  int next_id = 0;
  for (const ShapeStroke& shape : spec.strokes) {
    if (shape.vertices.empty()) throw ValidationError("gen_shape: stroke with no vertices");
    Stroke st;
    st.stroke_id = next_id++;
    st.colour_id = shape.colour_id;
    st.points.push_back(StrokePoint{t, shape.vertices[0].first, shape.vertices[0].second});
    for (std::size_t i = 1; i < shape.vertices.size(); ++i) {
      double len = std::hypot(shape.vertices[i].first - shape.vertices[i - 1].first,
                              shape.vertices[i].second - shape.vertices[i - 1].second);
      t += std::max<std::int64_t>(1, std::llround(len / spec.speed_px_per_ms));
      st.points.push_back(StrokePoint{t, shape.vertices[i].first, shape.vertices[i].second});
    }
    t = st.points.back().t_ms + std::max<std::int64_t>(1, spec.gap_ms);
    s.strokes.push_back(std::move(st));
  }
  validate_session(s);
  return s;
}

namespace {

// Iterative radix-2 Cooley-Tukey, forward transform (exponent -2*pi*i/n).
// The embedding only ever needs power-of-two lengths, so a general-length
// FFT library would be dead weight here.
void fft_pow2(std::vector<std::complex<double>>& a) {
  std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    double ang = -2.0 * kPi / static_cast<double>(len);
    std::complex<double> w0(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= w0;
      }
    }
  }
}

double fgn_autocov(double hurst, double k) {
  double h2 = 2.0 * hurst;
  return 0.5 * (std::pow(k + 1.0, h2) - 2.0 * std::pow(k, h2) +
                std::pow(std::fabs(k - 1.0), h2));
}

std::vector<double> fgn_pow2(double hurst, std::size_t n, std::uint64_t seed) {
  std::size_t m = 2 * n;
  std::vector<std::complex<double>> c(m);
  for (std::size_t k = 0; k <= n; ++k) c[k] = fgn_autocov(hurst, static_cast<double>(k));
  for (std::size_t k = 1; k < n; ++k) c[m - k] = c[k];
  fft_pow2(c);

  double max_lambda = 0.0;
  for (const auto& v : c) max_lambda = std::max(max_lambda, v.real());
  std::vector<double> lambda(m);
  for (std::size_t j = 0; j < m; ++j) {
    double l = c[j].real();
    if (l < -1e-8 * max_lambda)
      throw DegeneracyError(
          "circulant embedding is not nonnegative-definite; use a larger n");
    lambda[j] = std::max(l, 0.0);
  }

  Rng rng(seed);
  std::vector<std::complex<double>> w(m);
  double dm = static_cast<double>(m);
  w[0] = std::sqrt(lambda[0] / dm) * rng.normal();
  w[n] = std::sqrt(lambda[n] / dm) * rng.normal();
  for (std::size_t j = 1; j < n; ++j) {
    double scale = std::sqrt(lambda[j] / (2.0 * dm));
    double re = rng.normal();
    double im = rng.normal();
    w[j] = std::complex<double>(scale * re, scale * im);
    w[m - j] = std::conj(w[j]);
  }
  fft_pow2(w);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = w[i].real();
  return out;
}

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

std::vector<double> gen_fgn(double hurst, std::size_t n, std::uint64_t seed) {
  if (!(hurst > 0.0 && hurst < 1.0))
    throw ValidationError("gen_fgn: hurst must be in (0, 1)");
  if (n < 2) throw ValidationError("gen_fgn: n must be at least 2");
  std::size_t n2 = 2;
  while (n2 < n) n2 <<= 1;
  std::vector<double> full = fgn_pow2(hurst, n2, seed);
  full.resize(n);
  return full;
}

BinarySeries gen_fgn_binary(double hurst, std::size_t n, std::uint64_t seed,
                            std::int64_t dt_ms) {
  if (!is_pow2(n) || n < 512)
    throw ValidationError("gen_fgn_binary: n must be a power of two >= 512");
  std::vector<double> x = gen_fgn(hurst, n, seed);

  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end());
  double median = 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

  BinarySeries out;
  out.dt_ms = dt_ms;
  out.bits.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.bits[i] = x[i] > median ? 1 : 0;
  return out;
}

DrawingSession gen_planted(const PlantedSpec& spec) {
  auto clamp01 = [](double v) { return std::clamp(v, 0.0, 1.0); };
  double e = clamp01(spec.efficiency);
  double d = clamp01(spec.diversity);
  double s_factor = clamp01(spec.sequentiality);

  double mu = 1.3 + 1.5 * e;
  double speed = 1.1 - 0.85 * e;  // px per ms
  int n_strokes = 6 + static_cast<int>(std::llround(44.0 * s_factor));
  double rhythm_h = 0.55 + 0.4 * s_factor;
  int n_colours = 1 + static_cast<int>(std::llround(9.0 * d));

  // Size the walk so the ink time clears the 256-bin floor of the Hurst
  // estimators at the default 100 ms sampling. Expected step length comes
  // from the Pareto mean truncated at the screen scale.
  double ratio = 200.0;  // truncation scale over xmin
  double mean_len;
  if (std::fabs(mu - 2.0) < 1e-9) {
    mean_len = 10.0 * std::log(ratio) / (1.0 - 1.0 / ratio);
  } else {
    mean_len = 10.0 * ((mu - 1.0) / (mu - 2.0)) *
               (1.0 - std::pow(ratio, 2.0 - mu)) / (1.0 - std::pow(ratio, 1.0 - mu));
  }
  int n_steps = spec.n_steps;
  double target_ink_ms = 32000.0;
  n_steps = std::max(n_steps, static_cast<int>(std::llround(target_ink_ms * speed / mean_len)));
  n_steps = std::clamp(n_steps, 150, 2500);

  // Palette indices ordered by brightness; taking a prefix makes both the
  // colour count and the mean profile rise with the diversity factor.
  static constexpr int kBrightnessOrder[10] = {0, 4, 7, 3, 2, 1, 8, 9, 5, 6};

  Rng rng(spec.seed);
  DrawingSession session;
  session.session_id = spec.session_id.empty()
                           ? "planted_s" + std::to_string(spec.seed)
                           : spec.session_id;
  session.screen_w = spec.screen_w;
  session.screen_h = spec.screen_h;

  // Confine the walk to a random sub-window so hull coverage varies
  // independently of the planted factors.
  double margin = rng.uniform(0.0, 0.35);
  WalkBounds bounds{margin * spec.screen_w, margin * spec.screen_h,
                    (1.0 - margin) * spec.screen_w, (1.0 - margin) * spec.screen_h};

  // Draw/gap rhythm driven by fractional Gaussian noise: element 2j sets the
  // share of steps in stroke j, element 2j+1 the following pause.
  std::vector<double> rhythm =
      gen_fgn(rhythm_h, static_cast<std::size_t>(2 * n_strokes), rng.raw());

  std::vector<double> weights(static_cast<std::size_t>(n_strokes));
  double weight_sum = 0.0;
  for (int j = 0; j < n_strokes; ++j) {
    weights[static_cast<std::size_t>(j)] = std::exp(0.7 * rhythm[static_cast<std::size_t>(2 * j)]);
    weight_sum += weights[static_cast<std::size_t>(j)];
  }

  double x = (bounds.x0 + bounds.x1) / 2.0;
  double y = (bounds.y0 + bounds.y1) / 2.0;
  std::int64_t t = 0;
  for (int j = 0; j < n_strokes; ++j) {
    int steps = std::max(
        1, static_cast<int>(std::llround(n_steps * weights[static_cast<std::size_t>(j)] /
                                         weight_sum)));
    Stroke st;
    st.stroke_id = j;
    st.colour_id = kBrightnessOrder[static_cast<std::size_t>(j % n_colours)];
    st.points.push_back(StrokePoint{t, x, y});
    for (int i = 0; i < steps; ++i) {
      double len = pareto_step(rng, mu);
      double heading = rng.uniform(0.0, 2.0 * kPi);
      double measured = advance(x, y, len, heading, bounds);
      t += std::max<std::int64_t>(1, std::llround(measured / speed));
      st.points.push_back(StrokePoint{t, x, y});
    }
    session.strokes.push_back(std::move(st));
    if (j + 1 < n_strokes) {
      double gap = 600.0 * std::exp(0.7 * rhythm[static_cast<std::size_t>(2 * j + 1)]);
      t += std::max<std::int64_t>(1, std::llround(gap));
      // Pen-up hop to a fresh position inside the walk window.
      x = rng.uniform(bounds.x0, bounds.x1);
      y = rng.uniform(bounds.y0, bounds.y1);
    }
  }

  session.labels["kind"] = "planted";
  session.labels["cohort"] = (spec.seed % 2 == 0) ? "a" : "b";
  session.labels["style"] = e > 0.5 ? "directed" : "loose";
  validate_session(session);
  return session;
}

std::vector<DrawingSession> gen_corpus(int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<DrawingSession> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    PlantedSpec spec;
    spec.efficiency = rng.uniform();
    spec.diversity = rng.uniform();
    spec.sequentiality = rng.uniform();
    spec.seed = rng.raw();
    spec.session_id = "corpus_" + std::to_string(i);
    out.push_back(gen_planted(spec));
  }
  return out;
}

}  // namespace ink
