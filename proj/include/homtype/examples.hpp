#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "homtype/space.hpp"

namespace homtype {

enum class ExampleFamily { cantor, cantor_host, sierpinski, grid1d, equidistant, weighted_plane, uniform_random };

const char* to_string(ExampleFamily family) noexcept;
ExampleFamily parse_example_family(const std::string& text);

struct ExampleSpec {
  ExampleFamily family = ExampleFamily::cantor;
  int level = 5;               // cantor, cantor_host, sierpinski
  double ratio = 1.0 / 3.0;    // cantor
  int host_level = 0;          // cantor_host: host grid spacing 3^-host_level (0 = level)
  std::size_t n = 10;          // grid1d, equidistant, uniform_random
  std::size_t dim = 2;         // uniform_random
  double spacing = 1.0;        // grid1d
  double total_mass = 1.0;     // grid1d
  double beta = 1.0;           // weighted_plane
  double a = 1.0;              // weighted_plane: F starts at t = a
  double extent = 2.0;         // weighted_plane: window [-extent, extent]^2
  double resolution = 0.25;    // weighted_plane: lattice step
  double f_end = 0.0;          // weighted_plane: F ends at t = f_end (0 = extent)
  double height = 0.0;         // weighted_plane: y half-extent of the window (0 = extent)
  std::uint64_t seed = 0;      // uniform_random
};

/// Per-point weights of a target measure; zero off its support.
struct NamedMeasure {
  std::string name;
  std::vector<double> weights;
};

struct ExampleOutput {
  MetricMeasureSpace space;
  std::vector<PointId> F;  // designated subset, ascending
  std::vector<NamedMeasure> measures;
  std::vector<std::string> notes;

  const NamedMeasure& measure(const std::string& name) const;
};

ExampleOutput generate(const ExampleSpec& spec);

/// 2^level left endpoints of the surviving intervals, natural measure 2^-level each.
ExampleOutput cantor_space(int level, double ratio = 1.0 / 3.0);

/// Uniform grid k 3^-host_level on [0, 1] with uniform mu; F = level-`level`
/// Cantor left endpoints; measure "natural" puts 2^-level on each point of F.
ExampleOutput cantor_host(int level, int host_level);

/// Vertices of the level-`level` triangles of the unit gasket; each triangle
/// gives a third of its mass 3^-level to each corner.
ExampleOutput sierpinski_gasket(int level);

/// Points k * spacing for k < n, each of weight total_mass / n.
ExampleOutput grid1d(std::size_t n, double spacing = 1.0, double total_mass = 1.0);

/// d = 1 off the diagonal, weights 1/n (explicit matrix).
ExampleOutput equidistant(std::size_t n);

/// Lattice h Z^2 within [-extent, extent] x [-height, height]. Each node carries the mass of its
/// cell under |y|^beta dy with |y| the Euclidean norm: Gauss-Legendre on cells
/// away from the origin and a one-dimensional polar integral on the origin cell.
/// F = nodes (t, 0) with a <= t <= f_end. Measures: "nu_remark" with weight
/// t^(beta/2) h and "nu_arclength" with weight h on F.
ExampleOutput weighted_plane(double beta, double a, double extent, double resolution, double f_end = 0.0,
                             double height = 0.0);

/// Seeded uniform points in the unit cube, weights 1/n.
ExampleOutput uniform_random_space(std::size_t n, std::size_t dim, std::uint64_t seed);

/// Integral of |y|^beta over the axis-aligned square of side h centered at c.
double cell_mass(double beta, double cx, double cy, double h);

}  // namespace homtype
