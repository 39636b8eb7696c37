#include "homtype/examples.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <string>

#include "homtype/error.hpp"
#include "homtype/random.hpp"

namespace homtype {

namespace {

using boost::math::quadrature::gauss;
using boost::math::quadrature::gauss_kronrod;

std::vector<PointId> iota_ids(std::size_t n) {
  std::vector<PointId> ids(n);
  for (std::size_t k = 0; k < n; ++k) ids[k] = PointId(k);
  return ids;
}

std::uint64_t pow_int(std::uint64_t base, int e) {
  std::uint64_t out = 1;
  for (int k = 0; k < e; ++k) out *= base;
  return out;
}

/// Left endpoints of the level-`level` middle-thirds intervals as numerators over 3^level.
std::vector<std::uint64_t> cantor_numerators(int level) {
  std::vector<std::uint64_t> out = {0};
  for (int j = 1; j <= level; ++j) {
    const std::uint64_t step = 2 * pow_int(3, level - j);
    const std::size_t m = out.size();
    for (std::size_t k = 0; k < m; ++k) out.push_back(out[k] + step);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void check_level(int level, int hi) {
  if (level < 1 || level > hi)
    throw PreconditionError("level must lie in [1, " + std::to_string(hi) + "], got " + std::to_string(level));
}

}  // namespace

const char* to_string(ExampleFamily family) noexcept {
  switch (family) {
    case ExampleFamily::cantor: return "cantor";
    case ExampleFamily::cantor_host: return "cantor_host";
    case ExampleFamily::sierpinski: return "sierpinski";
    case ExampleFamily::grid1d: return "grid1d";
    case ExampleFamily::equidistant: return "equidistant";
    case ExampleFamily::weighted_plane: return "weighted_plane";
    case ExampleFamily::uniform_random: return "uniform_random";
  }
  return "unknown";
}

ExampleFamily parse_example_family(const std::string& text) {
  for (auto f : {ExampleFamily::cantor, ExampleFamily::cantor_host, ExampleFamily::sierpinski, ExampleFamily::grid1d,
                 ExampleFamily::equidistant, ExampleFamily::weighted_plane, ExampleFamily::uniform_random})
    if (text == to_string(f)) return f;
  throw PreconditionError("unknown example family '" + text + "'");
}

const NamedMeasure& ExampleOutput::measure(const std::string& name) const {
  for (const auto& m : measures)
    if (m.name == name) return m;
  throw PreconditionError("example has no measure named '" + name + "'");
}

ExampleOutput generate(const ExampleSpec& spec) {
  switch (spec.family) {
    case ExampleFamily::cantor: return cantor_space(spec.level, spec.ratio);
    case ExampleFamily::cantor_host: return cantor_host(spec.level, spec.host_level == 0 ? spec.level : spec.host_level);
    case ExampleFamily::sierpinski: return sierpinski_gasket(spec.level);
    case ExampleFamily::grid1d: return grid1d(spec.n, spec.spacing, spec.total_mass);
    case ExampleFamily::equidistant: return equidistant(spec.n);
    case ExampleFamily::weighted_plane:
      return weighted_plane(spec.beta, spec.a, spec.extent, spec.resolution, spec.f_end, spec.height);
    case ExampleFamily::uniform_random: return uniform_random_space(spec.n, spec.dim, spec.seed);
  }
  throw PreconditionError("unknown example family");
}

ExampleOutput cantor_space(int level, double ratio) {
  check_level(level, 12);
  if (!(ratio > 0.0 && ratio < 0.5)) throw PreconditionError("cantor ratio must lie in (0, 1/2)");
  const std::size_t n = std::size_t(1) << level;
  std::vector<double> coords(n);
  if (ratio == 1.0 / 3.0) {
    const auto num = cantor_numerators(level);
    const double denom = double(pow_int(3, level));
    for (std::size_t k = 0; k < n; ++k) coords[k] = double(num[k]) / denom;
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      double x = 0.0, scale = 1.0;
      for (int j = 1; j <= level; ++j) {
        if (k >> (level - j) & 1u) x += (1.0 - ratio) * scale;
        scale *= ratio;
      }
      coords[k] = x;
    }
  }
  const std::vector<double> weights(n, std::ldexp(1.0, -level));
  ExampleOutput out;
  out.space = MetricMeasureSpace::from_coordinates("cantor_L" + std::to_string(level), 1, coords, weights);
  out.F = iota_ids(n);
  out.measures.push_back({"natural", weights});
  return out;
}

ExampleOutput cantor_host(int level, int host_level) {
  check_level(level, 12);
  if (host_level < level || host_level > 12) throw PreconditionError("host level must lie in [level, 12]");
  const std::uint64_t cells = pow_int(3, host_level);
  const std::size_t n = std::size_t(cells + 1);
  const double denom = double(cells);
  std::vector<double> coords(n);
  for (std::size_t k = 0; k < n; ++k) coords[k] = double(k) / denom;
  ExampleOutput out;
  out.space = MetricMeasureSpace::from_coordinates(
      "cantor_L" + std::to_string(level) + "_host" + std::to_string(host_level), 1, coords,
      std::vector<double>(n, 1.0 / double(n)));
  const std::uint64_t up = pow_int(3, host_level - level);
  std::vector<double> natural(n, 0.0);
  for (std::uint64_t m : cantor_numerators(level)) {
    out.F.push_back(PointId(m * up));
    natural[m * up] = std::ldexp(1.0, -level);
  }
  out.measures.push_back({"natural", natural});
  return out;
}

ExampleOutput sierpinski_gasket(int level) {
  check_level(level, 9);
  const int side = 1 << level;
  std::map<std::pair<int, int>, double> mass;
  const double share = std::pow(3.0, -level) / 3.0;
  // Lattice triangles (a, b), (a + s, b), (a, b + s) in skew coordinates.
  std::vector<std::array<int, 3>> stack = {{0, 0, side}};
  while (!stack.empty()) {
    const auto [a, b, s] = stack.back();
    stack.pop_back();
    if (s == 1) {
      mass[{a, b}] += share;
      mass[{a + 1, b}] += share;
      mass[{a, b + 1}] += share;
      continue;
    }
    const int h = s / 2;
    stack.push_back({a, b, h});
    stack.push_back({a + h, b, h});
    stack.push_back({a, b + h, h});
  }
  std::vector<double> coords, weights;
  const double unit = 1.0 / double(side);
  for (const auto& [key, w] : mass) {
    coords.push_back((key.first + 0.5 * key.second) * unit);
    coords.push_back(key.second * (std::numbers::sqrt3 / 2.0) * unit);
    weights.push_back(w);
  }
  ExampleOutput out;
  out.space = MetricMeasureSpace::from_coordinates("sierpinski_L" + std::to_string(level), 2, coords, weights);
  out.F = iota_ids(weights.size());
  out.measures.push_back({"natural", weights});
  return out;
}

ExampleOutput grid1d(std::size_t n, double spacing, double total_mass) {
  if (n == 0) throw PreconditionError("grid1d needs n >= 1");
  if (!(spacing > 0.0) || !(total_mass > 0.0)) throw PreconditionError("grid1d spacing and mass must be positive");
  std::vector<double> coords(n);
  for (std::size_t k = 0; k < n; ++k) coords[k] = double(k) * spacing;
  const std::vector<double> weights(n, total_mass / double(n));
  ExampleOutput out;
  out.space = MetricMeasureSpace::from_coordinates("grid1d_n" + std::to_string(n), 1, coords, weights);
  out.F = iota_ids(n);
  out.measures.push_back({"counting", std::vector<double>(n, 1.0)});
  return out;
}

ExampleOutput equidistant(std::size_t n) {
  if (n == 0) throw PreconditionError("equidistant needs n >= 1");
  std::vector<double> m(n * n, 1.0);
  for (std::size_t k = 0; k < n; ++k) m[k * n + k] = 0.0;
  ExampleOutput out;
  out.space = MetricMeasureSpace::from_matrix("equidistant_n" + std::to_string(n), m,
                                              std::vector<double>(n, 1.0 / double(n)));
  out.F = iota_ids(n);
  return out;
}

double cell_mass(double beta, double cx, double cy, double h) {
  if (!(beta > -2.0)) throw PreconditionError("beta must exceed -2");
  const double half = 0.5 * h;
  if (beta == 0.0) return h * h;
  const bool origin = std::fabs(cx) < half && std::fabs(cy) < half;
  if (origin) {
    if (cx != 0.0 || cy != 0.0) throw PreconditionError("cells must be centered on the origin or avoid it");
    // Eight symmetric triangles: int_0^{pi/4} int_0^{half / cos t} r^(beta + 1) dr dt.
    const double angular = gauss<double, 20>::integrate(
        [&](double t) { return std::pow(1.0 / std::cos(t), beta + 2.0); }, 0.0, std::numbers::pi / 4.0);
    return 8.0 / (beta + 2.0) * std::pow(half, beta + 2.0) * angular;
  }
  const auto density = [&](double x, double y) { return std::pow(std::hypot(x, y), beta); };
  const double dist = std::hypot(std::fabs(cx), std::fabs(cy));
  if (dist > 2.5 * h) {
    return gauss<double, 10>::integrate(
        [&](double x) {
          return gauss<double, 10>::integrate([&](double y) { return density(x, y); }, cy - half, cy + half);
        },
        cx - half, cx + half);
  }
  return gauss_kronrod<double, 21>::integrate(
      [&](double x) {
        return gauss_kronrod<double, 21>::integrate([&](double y) { return density(x, y); }, cy - half, cy + half, 8,
                                                     1e-12);
      },
      cx - half, cx + half, 8, 1e-11);
}

ExampleOutput weighted_plane(double beta, double a, double extent, double resolution, double f_end, double height) {
  if (!(beta > -2.0)) throw PreconditionError("beta must exceed -2 (non-integrable weight)");
  if (!(a > 0.0)) throw PreconditionError("a must be positive");
  if (!(resolution > 0.0) || !(extent > 0.0)) throw PreconditionError("extent and resolution must be positive");
  const double steps = extent / resolution;
  const long M = std::lround(steps);
  if (M < 1 || std::fabs(steps - double(M)) > 1e-9 * steps) throw PreconditionError("resolution must divide extent");
  if (f_end == 0.0) f_end = extent;
  if (height == 0.0) height = extent;
  const double ysteps = height / resolution;
  const long My = std::lround(ysteps);
  if (!(height > 0.0) || My < 1 || std::fabs(ysteps - double(My)) > 1e-9 * ysteps)
    throw PreconditionError("resolution must divide the window height");
  if (f_end < a || f_end > extent) throw PreconditionError("F window must satisfy a <= f_end <= extent");

  const std::size_t cells = std::size_t(2 * M + 1) * std::size_t(2 * My + 1);
  std::vector<double> coords;
  std::vector<double> weights;
  coords.reserve(2 * cells);
  weights.reserve(cells);
  // Weights depend only on (|i|, |j|); cache the first octant.
  std::map<std::pair<long, long>, double> cache;
  ExampleOutput out;
  for (long j = -My; j <= My; ++j)
    for (long i = -M; i <= M; ++i) {
      const double x = double(i) * resolution;
      const double y = double(j) * resolution;
      const std::pair<long, long> key{std::min(std::labs(i), std::labs(j)), std::max(std::labs(i), std::labs(j))};
      auto it = cache.find(key);
      if (it == cache.end())
        it = cache.emplace(key, cell_mass(beta, double(key.first) * resolution, double(key.second) * resolution,
                                          resolution)).first;
      coords.push_back(x);
      coords.push_back(y);
      weights.push_back(it->second);
      if (j == 0 && x >= a - 1e-12 * extent && x <= f_end + 1e-12 * extent) out.F.push_back(PointId(weights.size() - 1));
    }
  char name[128];
  if (My == M)
    std::snprintf(name, sizeof name, "weighted_plane_b%g_a%g_e%g_h%g", beta, a, extent, resolution);
  else
    std::snprintf(name, sizeof name, "weighted_plane_b%g_a%g_e%g_y%g_h%g", beta, a, extent, height, resolution);
  out.space = MetricMeasureSpace::from_coordinates(name, 2, coords, weights);
  std::vector<double> remark(weights.size(), 0.0), arclength(weights.size(), 0.0);
  for (PointId p : out.F) {
    const double t = out.space.coords(p)[0];
    remark[p] = std::pow(t, beta / 2.0) * resolution;
    arclength[p] = resolution;
  }
  out.measures.push_back({"nu_remark", remark});
  out.measures.push_back({"nu_arclength", arclength});
  if (f_end < extent) out.notes.push_back("F truncated at t = " + std::to_string(f_end));
  return out;
}

ExampleOutput uniform_random_space(std::size_t n, std::size_t dim, std::uint64_t seed) {
  if (n == 0 || n > 10000) throw PreconditionError("uniform_random needs 1 <= n <= 10000");
  if (dim == 0) throw PreconditionError("dimension must be positive");
  Rng rng(seed);
  std::vector<double> coords(n * dim);
  for (auto& c : coords) c = rng.uniform01();
  ExampleOutput out;
  out.space = MetricMeasureSpace::from_coordinates("uniform_random_n" + std::to_string(n) + "_s" + std::to_string(seed),
                                                   dim, coords, std::vector<double>(n, 1.0 / double(n)));
  out.F = iota_ids(n);
  return out;
}

}  // namespace homtype
