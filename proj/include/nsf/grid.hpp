#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace nsf {

enum class Grading { Uniform, Tanh };

struct GridSpec {
  double X1max = 3.0;
  double X2len = 3.0;
  int n1 = 512;  // cells in x1 (n1 + 1 nodes, wall at node 0)
  int n2 = 128;  // periodic nodes in x2
  Grading grading = Grading::Tanh;
  double strength = 3.0;  // tanh clustering strength s
  double sponge_fraction = 0.1;
  double sponge_strength = 20.0;
};

/// Tensor grid on [0, X1max] × [0, X2len). The x1 direction is the image of a uniform
/// ξ-grid on [0, 1] under x(ξ) = X(1 − tanh(s(1 − ξ))/tanh(s)).
struct Grid {
  GridSpec spec;
  int N1 = 0, N2 = 0;
  double dxi = 0.0, h2 = 0.0;
  std::vector<double> x1, J, Jhalf, dJ;  // J = dx/dξ at nodes, Jhalf at i + 1/2, dJ = dJ/dξ
  std::vector<double> weight1;           // diagonal SBP norm in x1 (includes J)
  std::vector<double> x2;
  std::vector<double> sponge;            // damping rate σ(x1)
  double sponge_start = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(N1) * N2; }
  std::size_t idx(int i, int k) const { return static_cast<std::size_t>(i) * N2 + k; }
  double min_h1() const;
  double h1(int i) const { return x1[i + 1] - x1[i]; }
  /// Number of cells below x1 = width.
  int cells_below(double width) const;
  bool same_as(const Grid& other) const;
};

Grid make_grid(const GridSpec& spec);

/// Four grid functions (ρ, v1, v2, θ) or their characteristic image (u0..u3).
struct StateField {
  int N1 = 0, N2 = 0;
  std::array<std::vector<double>, 4> c;

  StateField() = default;
  StateField(int n1, int n2);
  explicit StateField(const Grid& g) : StateField(g.N1, g.N2) {}

  std::size_t size() const { return static_cast<std::size_t>(N1) * N2; }
  double& at(int comp, int i, int k) { return c[comp][static_cast<std::size_t>(i) * N2 + k]; }
  double at(int comp, int i, int k) const { return c[comp][static_cast<std::size_t>(i) * N2 + k]; }
  void fill(double v);
  void axpy(double a, const StateField& x);  // this += a·x
  double max_abs() const;
  double max_abs(int comp) const;
};

/// Fine steps are grouped into macro steps (the layer and coupling cadence), and macro
/// steps into output intervals. All solvers of one study share the same TimeGrid.
struct TimeGrid {
  double T = 0.0;
  int macro_steps = 0;
  int substeps = 1;
  int output_every = 1;  // macro steps per stored snapshot

  double dt() const { return T / (static_cast<double>(macro_steps) * substeps); }
  double macro_dt() const { return T / macro_steps; }
  int fine_steps() const { return macro_steps * substeps; }
  int outputs() const { return macro_steps / output_every + 1; }
  double output_time(int j) const { return j * output_every * macro_dt(); }
};

/// Chooses the coarsest fine step not exceeding dt_max, with macro steps not longer
/// than macro_target and `n_out` equal output intervals.
TimeGrid make_time_grid(double T, double dt_max, double macro_target, int n_out);

}  // namespace nsf
