#include "hrlab/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace hrlab {

namespace {

using RowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMatMap = Eigen::Map<const RowMat>;
using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;
using VecMap = Eigen::Map<Eigen::VectorXd>;

// Value of the 1D mode k at x: 1/sqrt(L) for k = 0, sqrt(2/L) cos(k pi x / L)
// otherwise.
double axis_mode_value(int k, double x, double length) {
  if (k == 0) return 1.0 / std::sqrt(length);
  return std::sqrt(2.0 / length) * std::cos(k * M_PI * x / length);
}

}  // namespace

double DomainSpec::volume() const {
  double v = 1.0;
  for (double len : lengths) v *= len;
  return v;
}

void DomainSpec::validate() const {
  if (lengths.empty() || lengths.size() > 2) {
    throw ValidationError("domain: lengths must have 1 or 2 entries, got " +
                          std::to_string(lengths.size()));
  }
  if (grid_points.size() != lengths.size()) {
    throw ValidationError(
        "domain: grid_points must match lengths in dimension");
  }
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (!(lengths[i] > 0.0) || !std::isfinite(lengths[i])) {
      throw ValidationError("domain: lengths[" + std::to_string(i) +
                            "] must be positive and finite");
    }
    if (grid_points[i] < 1) {
      throw ValidationError("domain: grid_points[" + std::to_string(i) +
                            "] must be >= 1");
    }
  }
}

std::shared_ptr<const SpectralBasis> SpectralBasis::build(
    const DomainSpec& domain, int m_max) {
  domain.validate();
  if (m_max < 1) throw ValidationError("basis: m_max must be >= 1");

  const int dims = domain.dims();

  // Largest per-axis index the midpoint grid holds with exact discrete
  // orthogonality, which is also the alias-free bound for cubic products.
  std::vector<int> kcap(dims);
  for (int d = 0; d < dims; ++d) kcap[d] = (domain.grid_points[d] - 1) / 2;

  std::vector<Mode> modes;
  if (dims == 1) {
    modes.reserve(kcap[0] + 1);
    for (int k = 0; k <= kcap[0]; ++k) {
      double f = k * M_PI / domain.lengths[0];
      modes.push_back({{k, 0}, f * f});
    }
  } else {
    modes.reserve((kcap[0] + 1) * (kcap[1] + 1));
    for (int k0 = 0; k0 <= kcap[0]; ++k0) {
      for (int k1 = 0; k1 <= kcap[1]; ++k1) {
        double f0 = k0 * M_PI / domain.lengths[0];
        double f1 = k1 * M_PI / domain.lengths[1];
        modes.push_back({{k0, k1}, f0 * f0 + f1 * f1});
      }
    }
  }

  std::stable_sort(modes.begin(), modes.end(),
                   [](const Mode& a, const Mode& b) {
                     if (a.lambda != b.lambda) return a.lambda < b.lambda;
                     return a.k < b.k;
                   });

  if (m_max > static_cast<int>(modes.size())) {
    throw ValidationError(
        "basis: grid holds only " + std::to_string(modes.size()) +
        " alias-free modes, requested m_max = " + std::to_string(m_max) +
        " (need grid_points >= 2 * k_max + 1 per axis)");
  }
  modes.resize(m_max);

  // The first m_max eigenvalues of the full spectrum must all be reachable
  // within the per-axis caps, otherwise the sorted list above is missing an
  // eigenpair that a finer grid would have ranked inside the cutoff.
  double lambda_excluded = std::numeric_limits<double>::infinity();
  for (int d = 0; d < dims; ++d) {
    double f = (kcap[d] + 1) * M_PI / domain.lengths[d];
    lambda_excluded = std::min(lambda_excluded, f * f);
  }
  if (modes.back().lambda >= lambda_excluded) {
    throw ValidationError(
        "basis: grid too coarse to order the first " + std::to_string(m_max) +
        " eigenvalues; refine grid_points");
  }

  auto basis = std::shared_ptr<SpectralBasis>(new SpectralBasis());
  basis->domain_ = domain;
  basis->modes_ = std::move(modes);

  basis->n_grid_ = 1;
  basis->weight_ = 1.0;
  basis->axis_nodes_.resize(dims);
  for (int d = 0; d < dims; ++d) {
    int n = domain.grid_points[d];
    basis->n_grid_ *= n;
    basis->weight_ *= domain.lengths[d] / n;
    basis->axis_nodes_[d].resize(n);
    for (int j = 0; j < n; ++j) {
      basis->axis_nodes_[d][j] = (j + 0.5) * domain.lengths[d] / n;
    }
  }

  const int m = basis->size();
  const int n = basis->n_grid_;
  basis->bvals_.resize(static_cast<std::size_t>(m) * n);
  for (int i = 0; i < m; ++i) {
    double* row = basis->bvals_.data() + static_cast<std::size_t>(i) * n;
    const auto& k = basis->modes_[i].k;
    if (dims == 1) {
      for (int j = 0; j < n; ++j) {
        row[j] = axis_mode_value(k[0], basis->axis_nodes_[0][j],
                                 domain.lengths[0]);
      }
    } else {
      int n1 = domain.grid_points[1];
      for (int j0 = 0; j0 < domain.grid_points[0]; ++j0) {
        double v0 = axis_mode_value(k[0], basis->axis_nodes_[0][j0],
                                    domain.lengths[0]);
        for (int j1 = 0; j1 < n1; ++j1) {
          row[j0 * n1 + j1] =
              v0 * axis_mode_value(k[1], basis->axis_nodes_[1][j1],
                                   domain.lengths[1]);
        }
      }
    }
  }
  return basis;
}

void SpectralBasis::to_grid(const std::vector<double>& coeffs,
                            std::vector<double>& grid) const {
  if (static_cast<int>(coeffs.size()) != size()) {
    throw ValidationError("to_grid: coefficient count does not match basis");
  }
  grid.resize(n_grid_);
  ConstMatMap B(bvals_.data(), size(), n_grid_);
  ConstVecMap c(coeffs.data(), size());
  VecMap g(grid.data(), n_grid_);
  g.noalias() = B.transpose() * c;
}

std::vector<double> SpectralBasis::to_grid(
    const std::vector<double>& coeffs) const {
  std::vector<double> grid;
  to_grid(coeffs, grid);
  return grid;
}

void SpectralBasis::to_coeffs(const std::vector<double>& grid,
                              std::vector<double>& coeffs) const {
  if (static_cast<int>(grid.size()) != n_grid_) {
    throw ValidationError("to_coeffs: grid size does not match basis");
  }
  coeffs.resize(size());
  ConstMatMap B(bvals_.data(), size(), n_grid_);
  ConstVecMap g(grid.data(), n_grid_);
  VecMap c(coeffs.data(), size());
  c.noalias() = weight_ * (B * g);
}

std::vector<double> SpectralBasis::to_coeffs(
    const std::vector<double>& grid) const {
  std::vector<double> coeffs;
  to_coeffs(grid, coeffs);
  return coeffs;
}

double SpectralBasis::integrate(const std::vector<double>& grid) const {
  if (static_cast<int>(grid.size()) != n_grid_) {
    throw ValidationError("integrate: grid size does not match basis");
  }
  ConstVecMap g(grid.data(), n_grid_);
  return weight_ * g.sum();
}

ScalarField zero_field(const BasisPtr& basis) {
  return {basis, std::vector<double>(basis->size(), 0.0)};
}

State zero_state(const BasisPtr& basis) {
  return {zero_field(basis), zero_field(basis), zero_field(basis)};
}

void require_same_basis(const ScalarField& a, const ScalarField& b) {
  if (a.basis != b.basis) {
    throw ValidationError("operands live on different bases");
  }
}

void require_same_basis(const State& a, const State& b) {
  require_same_basis(a.u, b.u);
  require_same_basis(a.v, b.v);
  require_same_basis(a.w, b.w);
}

ScalarField project(const ScalarField& f, int m, Band band) {
  if (m < 0 || m > f.basis->size()) {
    throw ValidationError("project: cutoff m out of range [0, " +
                          std::to_string(f.basis->size()) + "]");
  }
  ScalarField out = f;
  if (band == Band::Low) {
    std::fill(out.c.begin() + m, out.c.end(), 0.0);
  } else {
    std::fill(out.c.begin(), out.c.begin() + m, 0.0);
  }
  return out;
}

State project(const State& g, int m, Band band) {
  return {project(g.u, m, band), project(g.v, m, band), project(g.w, m, band)};
}

namespace {

double lp_norm_pow(const ScalarField& f, int p) {
  std::vector<double> grid = f.basis->to_grid(f.c);
  double acc = 0.0;
  for (double x : grid) {
    double x2 = x * x;
    acc += (p == 4) ? x2 * x2 : x2 * x2 * x2;
  }
  return f.basis->node_weight() * acc;
}

}  // namespace

double norm(const ScalarField& f, NormKind kind) {
  switch (kind) {
    case NormKind::L2: {
      ConstVecMap c(f.c.data(), f.c.size());
      return c.norm();
    }
    case NormKind::H1: {
      double acc = 0.0;
      for (int i = 0; i < f.basis->size(); ++i) {
        acc += (1.0 + f.basis->eigenvalue(i)) * f.c[i] * f.c[i];
      }
      return std::sqrt(acc);
    }
    case NormKind::L4:
      return std::pow(lp_norm_pow(f, 4), 0.25);
    case NormKind::L6:
      return std::pow(lp_norm_pow(f, 6), 1.0 / 6.0);
  }
  throw ValidationError("norm: unknown kind");
}

double grad_norm(const ScalarField& f) {
  double acc = 0.0;
  for (int i = 0; i < f.basis->size(); ++i) {
    acc += f.basis->eigenvalue(i) * f.c[i] * f.c[i];
  }
  return std::sqrt(acc);
}

double norm(const State& g, NormKind kind) {
  double pu = norm(g.u, kind), pv = norm(g.v, kind), pw = norm(g.w, kind);
  switch (kind) {
    case NormKind::L2:
    case NormKind::H1:
      return std::sqrt(pu * pu + pv * pv + pw * pw);
    case NormKind::L4:
      return std::pow(pu * pu * pu * pu + pv * pv * pv * pv + pw * pw * pw * pw,
                      0.25);
    case NormKind::L6: {
      double s = std::pow(pu, 6) + std::pow(pv, 6) + std::pow(pw, 6);
      return std::pow(s, 1.0 / 6.0);
    }
  }
  throw ValidationError("norm: unknown kind");
}

double grad_norm(const State& g) {
  double pu = grad_norm(g.u), pv = grad_norm(g.v), pw = grad_norm(g.w);
  return std::sqrt(pu * pu + pv * pv + pw * pw);
}

double inner(const ScalarField& a, const ScalarField& b) {
  require_same_basis(a, b);
  ConstVecMap ca(a.c.data(), a.c.size());
  ConstVecMap cb(b.c.data(), b.c.size());
  return ca.dot(cb);
}

double inner(const State& a, const State& b) {
  return inner(a.u, b.u) + inner(a.v, b.v) + inner(a.w, b.w);
}

void axpy(double s, const ScalarField& x, ScalarField& y) {
  require_same_basis(x, y);
  for (std::size_t i = 0; i < y.c.size(); ++i) y.c[i] += s * x.c[i];
}

void axpy(double s, const State& x, State& y) {
  axpy(s, x.u, y.u);
  axpy(s, x.v, y.v);
  axpy(s, x.w, y.w);
}

void scale(ScalarField& f, double s) {
  for (double& c : f.c) c *= s;
}

void scale(State& g, double s) {
  scale(g.u, s);
  scale(g.v, s);
  scale(g.w, s);
}

}  // namespace hrlab
