#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "ktraj/trajectory.hpp"

namespace ktraj {

// Natural cubic spline interpolation from m_from anchors (at parameters
// 0, 1, ..., m_from-1) to m_to uniform parameters covering the same range.
// Interpolation is a fixed linear map L (m_to x m_from) applied per shot and
// per axis; the transpose is exposed for backpropagation to the anchors.
class SplineMap {
public:
  SplineMap(int m_from, int m_to) : m_from_(m_from), m_to_(m_to) {
    if (m_from < 4)
      throw std::invalid_argument("SplineMap: need at least 4 anchors");
    if (m_to < m_from)
      throw std::invalid_argument("SplineMap: m must be >= anchor count");
    build();
  }

  int rows() const { return m_to_; }
  int cols() const { return m_from_; }
  double weight(int i, int j) const { return L_[static_cast<std::size_t>(i) * m_from_ + j]; }

  // y = L a for one channel of length m_from.
  void apply(const double *a, double *y) const {
    for (int i = 0; i < m_to_; ++i) {
      const double *row = &L_[static_cast<std::size_t>(i) * m_from_];
      double acc = 0.0;
      for (int j = 0; j < m_from_; ++j) acc += row[j] * a[j];
      y[i] = acc;
    }
  }

  // a = L^T v for one channel of length m_to.
  void apply_transpose(const double *v, double *a) const {
    for (int j = 0; j < m_from_; ++j) a[j] = 0.0;
    for (int i = 0; i < m_to_; ++i) {
      const double *row = &L_[static_cast<std::size_t>(i) * m_from_];
      const double vi = v[i];
      for (int j = 0; j < m_from_; ++j) a[j] += row[j] * vi;
    }
  }

  // Least-squares anchors for a dense channel: argmin_a ||L a - y||_2.
  std::vector<double> fit(const double *y) const {
    Eigen::VectorXd rhs(m_from_);
    for (int j = 0; j < m_from_; ++j) {
      double acc = 0.0;
      for (int i = 0; i < m_to_; ++i)
        acc += L_[static_cast<std::size_t>(i) * m_from_ + j] * y[i];
      rhs(j) = acc;
    }
    Eigen::VectorXd a = normal_.solve(rhs);
    return std::vector<double>(a.data(), a.data() + m_from_);
  }

private:
  void build() {
    const int p = m_from_;
    L_.assign(static_cast<std::size_t>(m_to_) * p, 0.0);

    // Column j of L is the spline through the j-th unit anchor vector.
    // Natural boundary: second derivatives vanish at both ends; interior
    // rows solve M_{k-1} + 4 M_k + M_{k+1} = 6 (a_{k+1} - 2 a_k + a_{k-1}).
    std::vector<double> a(p), M(p), cp(p), dp(p);
    for (int j = 0; j < p; ++j) {
      for (int k = 0; k < p; ++k) a[k] = (k == j) ? 1.0 : 0.0;
      M[0] = M[p - 1] = 0.0;
      const int interior = p - 2;
      if (interior > 0) {
        // Thomas algorithm on the tridiagonal (1, 4, 1) system.
        for (int k = 0; k < interior; ++k) {
          const double rhs = 6.0 * (a[k + 2] - 2.0 * a[k + 1] + a[k]);
          if (k == 0) {
            cp[k] = 1.0 / 4.0;
            dp[k] = rhs / 4.0;
          } else {
            const double denom = 4.0 - cp[k - 1];
            cp[k] = 1.0 / denom;
            dp[k] = (rhs - dp[k - 1]) / denom;
          }
        }
        M[interior] = dp[interior - 1];
        for (int k = interior - 1; k >= 1; --k) M[k] = dp[k - 1] - cp[k - 1] * M[k + 1];
      }
      for (int i = 0; i < m_to_; ++i) {
        const double u = static_cast<double>(i) * (p - 1) / (m_to_ - 1.0);
        int seg = static_cast<int>(u);
        if (seg > p - 2) seg = p - 2;
        const double s = u - seg;
        const double t = 1.0 - s;
        const double val = a[seg] * t + a[seg + 1] * s +
                           M[seg] * (t * t * t - t) / 6.0 +
                           M[seg + 1] * (s * s * s - s) / 6.0;
        L_[static_cast<std::size_t>(i) * p + j] = val;
      }
    }

    Eigen::MatrixXd Lmat(m_to_, p);
    for (int i = 0; i < m_to_; ++i)
      for (int j = 0; j < p; ++j) Lmat(i, j) = L_[static_cast<std::size_t>(i) * p + j];
    normal_ = (Lmat.transpose() * Lmat).ldlt();
  }

  int m_from_;
  int m_to_;
  std::vector<double> L_; // row-major m_to x m_from
  Eigen::LDLT<Eigen::MatrixXd> normal_;
};

// Dense trajectory through the anchors of every shot.
inline Trajectory spline_interpolate(const AnchorTrajectory &anchors, int m) {
  SplineMap map(anchors.m_anchors, m);
  Trajectory t(anchors.n_shots, m, anchors.fov, anchors.n);
  std::vector<double> in(anchors.m_anchors), out(m);
  for (int s = 0; s < anchors.n_shots; ++s)
    for (int axis = 0; axis < 3; ++axis) {
      for (int j = 0; j < anchors.m_anchors; ++j) in[j] = anchors.at(s, j, axis);
      map.apply(in.data(), out.data());
      for (int i = 0; i < m; ++i) t.at(s, i, axis) = out[i];
    }
  return t;
}

// L^T applied to a dense-trajectory-shaped cotangent, yielding an
// anchor-shaped gradient.
inline std::vector<double> spline_transpose(const SplineMap &map,
                                            const AnchorTrajectory &anchors,
                                            const std::vector<double> &dense_cot) {
  std::vector<double> grad(anchors.coords.size(), 0.0);
  const int m = map.rows();
  std::vector<double> in(m), out(anchors.m_anchors);
  for (int s = 0; s < anchors.n_shots; ++s)
    for (int axis = 0; axis < 3; ++axis) {
      for (int i = 0; i < m; ++i)
        in[i] = dense_cot[(static_cast<std::size_t>(s) * m + i) * 3 + axis];
      map.apply_transpose(in.data(), out.data());
      for (int j = 0; j < anchors.m_anchors; ++j)
        grad[(static_cast<std::size_t>(s) * anchors.m_anchors + j) * 3 + axis] = out[j];
    }
  return grad;
}

// Anchors that best reproduce a dense reference path in the least-squares
// sense (exact for paths the spline can represent, e.g. straight spokes).
inline AnchorTrajectory fit_anchors(const Trajectory &dense, int m_anchors) {
  SplineMap map(m_anchors, dense.m);
  AnchorTrajectory a(dense.n_shots, m_anchors, dense.fov, dense.n);
  std::vector<double> in(dense.m);
  for (int s = 0; s < dense.n_shots; ++s)
    for (int axis = 0; axis < 3; ++axis) {
      for (int i = 0; i < dense.m; ++i) in[i] = dense.at(s, i, axis);
      std::vector<double> fit = map.fit(in.data());
      for (int j = 0; j < m_anchors; ++j) a.at(s, j, axis) = fit[j];
    }
  return a;
}

} // namespace ktraj
