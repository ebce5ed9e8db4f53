#include "cesm/synthgen.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/SVD>

namespace cesm {

namespace {

Matrix gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) g(i, j) = normal(rng);
  }
  return g;
}

// Modified Gram-Schmidt, two passes.
Matrix orthonormalize(Matrix b) {
  for (Index j = 0; j < b.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Index c = 0; c < j; ++c) b.col(j) -= b.col(c) * b.col(c).dot(b.col(j));
    }
    b.col(j).normalize();
  }
  return b;
}

Vector project_normalized(const Matrix& basis, const Vector& x) {
  Vector p = basis * (basis.transpose() * x);
  const double norm = p.norm();
  if (!(norm > 1e-12)) fail(ErrorKind::DegenerateProblem, "point is orthogonal to its target subspace");
  return p / norm;
}

bool is_identity_angle(double theta_deg) { return std::fmod(theta_deg, 360.0) == 0.0; }

}  // namespace

void ScenarioConfig::validate() const {
  if (ambient_dim < 1 || subspace_dim < 1 || subspace_dim > ambient_dim) {
    fail(ErrorKind::InvalidArgument, "need 1 <= d <= D");
  }
  if (subspaces < 1 || points_per_subspace < 0 || horizon < 1 || trials < 1) {
    fail(ErrorKind::InvalidArgument, "subspaces, horizon and trials must be positive");
  }
  if (!(rotation_deg >= 0.0 && rotation_deg <= 180.0)) {
    fail(ErrorKind::InvalidArgument, "rotation_deg must lie in [0, 180]");
  }
  if (merge) {
    const auto& m = *merge;
    if (m.absorb_from < 0 || m.absorb_from >= subspaces || m.absorb_into < 0 || m.absorb_into >= subspaces ||
        m.absorb_from == m.absorb_into) {
      fail(ErrorKind::InvalidArgument, "merge event subspace ids out of range");
    }
    if (m.t_start < 2 || m.t_end <= m.t_start) fail(ErrorKind::InvalidArgument, "merge window must satisfy 2 <= t_start < t_end");
  }
}

std::vector<Matrix> random_subspaces(const ScenarioConfig& cfg, Rng& rng) {
  std::vector<Matrix> bases;
  bases.reserve(static_cast<std::size_t>(cfg.subspaces));
  for (int s = 0; s < cfg.subspaces; ++s) {
    const Matrix g = gaussian(cfg.ambient_dim, cfg.ambient_dim, rng);
    Eigen::JacobiSVD<Matrix> svd(g, Eigen::ComputeFullU);
    bases.push_back(orthonormalize(svd.matrixU().leftCols(cfg.subspace_dim)));
  }
  return bases;
}

Matrix sample_points(const Matrix& basis, Index m, Rng& rng) {
  Matrix pts = basis * gaussian(basis.cols(), m, rng);
  for (Index j = 0; j < m; ++j) pts.col(j).normalize();
  return pts;
}

Matrix random_plane_rotation(Index dim, double theta_deg, Rng& rng) {
  if (dim < 2) fail(ErrorKind::InvalidArgument, "plane rotation needs dimension >= 2");
  const Matrix uv = orthonormalize(gaussian(dim, 2, rng));
  const auto u = uv.col(0);
  const auto v = uv.col(1);
  const double theta = theta_deg * std::numbers::pi / 180.0;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Matrix r = Matrix::Identity(dim, dim);
  r += (c - 1.0) * (u * u.transpose() + v * v.transpose());
  r += s * (v * u.transpose() - u * v.transpose());
  return r;
}

Matrix rotate_basis(const Matrix& basis, double theta_deg, Rng& rng) {
  const Matrix r = random_plane_rotation(basis.rows(), theta_deg, rng);
  return orthonormalize(r * basis);
}

EvolvingSequence generate_sequence(const ScenarioConfig& cfg, Rng& rng) {
  cfg.validate();
  const Index per = cfg.points_per_subspace;
  const Index total = per * cfg.subspaces;
  std::vector<Matrix> bases = random_subspaces(cfg, rng);

  Matrix x(cfg.ambient_dim, total);
  std::vector<int> home(static_cast<std::size_t>(total));
  for (int s = 0; s < cfg.subspaces; ++s) {
    x.middleCols(s * per, per) = sample_points(bases[static_cast<std::size_t>(s)], per, rng);
    for (Index i = 0; i < per; ++i) home[static_cast<std::size_t>(s * per + i)] = s;
  }

  EvolvingSequence seq;
  seq.snapshots.reserve(static_cast<std::size_t>(cfg.horizon));
  seq.snapshots.push_back(make_snapshot(x, home));

  const bool rotate = !is_identity_angle(cfg.rotation_deg);
  Matrix pre_merge;  // coordinates of absorbed points just before the window
  for (int t = 2; t <= cfg.horizon; ++t) {
    std::vector<Matrix> rotations;
    rotations.reserve(bases.size());
    for (auto& b : bases) {
      rotations.push_back(random_plane_rotation(cfg.ambient_dim, cfg.rotation_deg, rng));
      if (rotate) b = orthonormalize(rotations.back() * b);
    }

    std::vector<int> truth = home;
    const bool merging = cfg.merge && t >= cfg.merge->t_start && t < cfg.merge->t_end;
    const bool merge_begins = cfg.merge && t == cfg.merge->t_start;
    const bool merge_ends = cfg.merge && t == cfg.merge->t_end;
    if (merge_begins) pre_merge = x.middleCols(cfg.merge->absorb_from * per, per);

    for (Index p = 0; p < total; ++p) {
      const int s = home[static_cast<std::size_t>(p)];
      const bool absorbed = cfg.merge && s == cfg.merge->absorb_from;
      if (absorbed && merging) {
        const int into = cfg.merge->absorb_into;
        truth[static_cast<std::size_t>(p)] = into;
        const Matrix& b = bases[static_cast<std::size_t>(into)];
        if (merge_begins) {
          x.col(p) = project_normalized(b, x.col(p));
        } else if (rotate) {
          x.col(p) = project_normalized(b, rotations[static_cast<std::size_t>(into)] * x.col(p));
        }
      } else if (absorbed && merge_ends) {
        x.col(p) = project_normalized(bases[static_cast<std::size_t>(s)], pre_merge.col(p - s * per));
      } else if (rotate) {
        x.col(p) = project_normalized(bases[static_cast<std::size_t>(s)], rotations[static_cast<std::size_t>(s)] * x.col(p));
      }
    }
    seq.snapshots.push_back(make_snapshot(x, std::move(truth)));
  }
  return seq;
}

}  // namespace cesm
