#pragma once

#include <array>
#include <memory>
#include <vector>

#include "hrlab/common.hpp"

namespace hrlab {

// Rectangular box [0,L1] (x [0,L2]) with a per-axis midpoint collocation
// grid.  grid_points[i] nodes on axis i at x_j = (j + 1/2) L_i / N_i, all
// carrying the uniform quadrature weight prod(L_i / N_i).
struct DomainSpec {
  std::vector<double> lengths;
  std::vector<int> grid_points;

  int dims() const { return static_cast<int>(lengths.size()); }
  double volume() const;
  void validate() const;  // throws ValidationError naming the bad entry
};

enum class NormKind { L2, H1, L4, L6 };
enum class Band { Low, High };

// Eigenbasis of -Laplace with homogeneous Neumann conditions on a box:
// tensor products of 1 / sqrt(L) and sqrt(2/L) cos(k pi x / L), eigenvalue
// sum_i (k_i pi / L_i)^2.  Modes are sorted by eigenvalue, ties broken by
// lexicographic multi-index, so eigenvalue(0) == 0 is the constant mode.
//
// On the midpoint grid the retained modes are exactly orthonormal in the
// discrete quadrature provided every per-axis index satisfies
// k <= (N - 1) / 2; build() rejects anything coarser.  That bound is also
// the alias-free floor N >= 2 k_max + 1 needed for cubic nonlinearities.
// Grid layout in 2D is x-major: flat = jx * N_y + jy.
class SpectralBasis {
public:
  struct Mode {
    std::array<int, 2> k;  // k[1] == 0 in 1D
    double lambda;
  };

  // Builds the first m_max eigenpairs.  Throws ValidationError if the grid
  // cannot hold them alias-free or if truncating per axis would skip an
  // eigenvalue that belongs in the first m_max.
  static std::shared_ptr<const SpectralBasis> build(const DomainSpec& domain,
                                                    int m_max);

  int size() const { return static_cast<int>(modes_.size()); }
  double eigenvalue(int i) const { return modes_[i].lambda; }
  const std::array<int, 2>& mode_index(int i) const { return modes_[i].k; }
  const DomainSpec& domain() const { return domain_; }
  int grid_size() const { return n_grid_; }
  double node_weight() const { return weight_; }
  const std::vector<double>& axis_nodes(int axis) const {
    return axis_nodes_[axis];
  }

  // Synthesis g_j = sum_k c_k e_k(x_j) and analysis c_k = w sum_j e_k(x_j) g_j.
  // The pair is an exact inverse on the retained band (up to roundoff).
  void to_grid(const std::vector<double>& coeffs,
               std::vector<double>& grid) const;
  std::vector<double> to_grid(const std::vector<double>& coeffs) const;
  void to_coeffs(const std::vector<double>& grid,
                 std::vector<double>& coeffs) const;
  std::vector<double> to_coeffs(const std::vector<double>& grid) const;

  // Quadrature integral of a grid function: w * sum_j g_j.
  double integrate(const std::vector<double>& grid) const;

private:
  SpectralBasis() = default;

  DomainSpec domain_;
  std::vector<Mode> modes_;
  std::vector<std::vector<double>> axis_nodes_;
  std::vector<double> bvals_;  // row-major size() x grid_size() table e_k(x_j)
  int n_grid_ = 0;
  double weight_ = 0.0;
};

using BasisPtr = std::shared_ptr<const SpectralBasis>;

// One scalar unknown expressed in the first basis->size() modes.
struct ScalarField {
  BasisPtr basis;
  std::vector<double> c;
};

ScalarField zero_field(const BasisPtr& basis);

// The HR state g = (u, v, w) on a shared basis.
struct State {
  ScalarField u, v, w;
};

State zero_state(const BasisPtr& basis);

// Throw ValidationError unless both operands live on the same basis object.
void require_same_basis(const ScalarField& a, const ScalarField& b);
void require_same_basis(const State& a, const State& b);

// Spectral cutoff: Band::Low keeps modes [0, m), Band::High keeps [m, end).
// m must lie in [0, basis->size()].
ScalarField project(const ScalarField& f, int m, Band band);
State project(const State& g, int m, Band band);

// Norms.  L2 and H1 are evaluated on coefficients (Parseval); L4 and L6 by
// quadrature on the collocation grid.  The alias-free floor makes the L4
// power exact for band-limited fields; L6 is exact only on grids with
// N >= 3 k_max + 1 per axis and high-quality quadrature otherwise.  H1 is
// the full norm sqrt(|f|_L2^2 + |grad f|_L2^2).
double norm(const ScalarField& f, NormKind kind);
double grad_norm(const ScalarField& f);

// State norms combine components: L2 gives |g|_H, H1 gives |g|_E, and the
// Lp kinds return (sum_comp |comp|_Lp^p)^(1/p).
double norm(const State& g, NormKind kind);
double grad_norm(const State& g);

// l2 pairings of coefficient vectors; equals the L2(Omega) inner product.
double inner(const ScalarField& a, const ScalarField& b);
double inner(const State& a, const State& b);

// Linear combinations (same basis required).  axpy: y += s * x.
void axpy(double s, const ScalarField& x, ScalarField& y);
void axpy(double s, const State& x, State& y);
void scale(ScalarField& f, double s);
void scale(State& g, double s);

}  // namespace hrlab
