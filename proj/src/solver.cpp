// Copyright 2026 The kinosynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kinosynth/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>

#include <Eigen/Dense>

#include "kinosynth/errors.hpp"
#include "kinosynth/kernels.hpp"
#include "kinosynth/parallel.hpp"

namespace kinosynth {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

using Vec9 = Eigen::Matrix<double, 9, 1>;

Vec9 Points(const Pose& p) {
  Vec9 out;
  out << p.position, p.position + p.rotation.dx(), p.position + p.rotation.dy();
  return out;
}

double ErrorBetween(const Pose& a, const Pose& b) {
  return PointError(ConfigFromPose(a), ConfigFromPose(b));
}

double YawRate(const Control& c) { return c.omega * c.axis.z(); }

// A path guess plus the multipliers that produced it.
struct Seed {
  std::vector<Segment> segments;
  ExtremalCertificate cert;
  double error = kInf;
};

std::string WordKey(const std::vector<Segment>& segs) {
  std::string key;
  for (const Segment& s : segs) {
    if (!key.empty()) key += '+';
    key += std::to_string(s.control);
  }
  return key;
}

// Merge repeats and drop pieces shorter than eps.
std::vector<Segment> Clean(const std::vector<Segment>& segs, double eps) {
  return Trajectory(segs, eps).segments();
}

// Full turns never shorten a path.
void ReduceTurns(const ControlSet& u, std::vector<Segment>* segs) {
  for (Segment& s : *segs) {
    const Control& c = u[s.control];
    if (c.is_rotation()) {
      const double period = c.Period();
      if (s.duration >= period) s.duration = std::fmod(s.duration, period);
    }
  }
}

// ---------------------------------------------------------------------------
// Planar singular-arc scan.
//
// For a word turn–translation–turn the middle translation is singular and
// runs along k. Given the direction φ of k, the first turn ends when the
// translation heading reaches φ and the last turn starts from the goal
// heading run backwards to φ. The two tangent points must lie on a line along
// k: the cross product e(φ) vanishes. Roots are bracketed on the φ grid and
// bisected.
struct ScanGeometry {
  Vec3 p_s, p_g;
  double yaw_s = 0, yaw_g = 0;
  const Control* f = nullptr;
  const Control* m = nullptr;
  const Control* l = nullptr;
  Vec3 r_f, r_l;  // world turn centers at start / goal
  double heading_m = 0;  // body heading of the translation
  double speed = 1;

  double TurnTimeF(double phi) const {
    const double rate = YawRate(*f);
    return WrapTwoPi(rate > 0 ? phi - heading_m - yaw_s : -(phi - heading_m - yaw_s)) /
           std::abs(rate);
  }
  double TurnTimeL(double phi) const {
    const double rate = YawRate(*l);
    return WrapTwoPi(rate > 0 ? yaw_g + heading_m - phi : -(yaw_g + heading_m - phi)) /
           std::abs(rate);
  }
  static Vec3 Rotate(const Vec3& p, const Vec3& c, double ang) {
    const double cs = std::cos(ang), sn = std::sin(ang);
    const Vec3 d = p - c;
    return c + Vec3(cs * d.x() - sn * d.y(), sn * d.x() + cs * d.y(), d.z());
  }
  // e(φ) and the straight length for given turn times.
  void Eval(double phi, double t_f, double t_l, double* e, double* s) const {
    const Vec3 pf = Rotate(p_s, r_f, YawRate(*f) * t_f);
    const Vec3 pb = Rotate(p_g, r_l, -YawRate(*l) * t_l);
    const Vec3 d = pb - pf;
    const double c = std::cos(phi), sn = std::sin(phi);
    *e = c * d.y() - sn * d.x();
    *s = (c * d.x() + sn * d.y()) / speed;
  }
};

void PlanarSingularScan(const Pose& q_s, const Pose& q_g, const ControlSet& u,
                        int cells, std::vector<Seed>* seeds) {
  const kernels::KernelTable& kt = kernels::Active();
  std::vector<double> phi(cells + 1), cos_t(cells + 1), sin_t(cells + 1);
  std::vector<double> fx(cells + 1), fy(cells + 1), fz(cells + 1);
  std::vector<double> bx(cells + 1), by(cells + 1), bz(cells + 1);
  std::vector<double> e(cells + 1), s(cells + 1);
  for (int i = 0; i <= cells; ++i) phi[i] = 2 * kPi * i / cells;

  for (int fi = 0; fi < u.size(); ++fi) {
    if (!u[fi].is_rotation()) continue;
    for (int mi = 0; mi < u.size(); ++mi) {
      if (!u[mi].is_translation()) continue;
      for (int li = 0; li < u.size(); ++li) {
        if (!u[li].is_rotation()) continue;
        ScanGeometry g;
        g.p_s = q_s.position;
        g.p_g = q_g.position;
        g.yaw_s = q_s.rotation.Yaw();
        g.yaw_g = q_g.rotation.Yaw();
        g.f = &u[fi];
        g.m = &u[mi];
        g.l = &u[li];
        g.r_f = q_s.position + q_s.rotation * u[fi].center;
        g.r_l = q_g.position + q_g.rotation * u[li].center;
        g.heading_m = std::atan2(u[mi].v.y(), u[mi].v.x());
        g.speed = u[mi].v.norm();

        // Batched tangent points over the φ grid.
        auto arc = [](const Vec3& p, const Vec3& c) {
          kernels::ArcBasis a{};
          const Vec3 d = p - c;
          a.base[0] = c.x();
          a.base[1] = c.y();
          a.base[2] = p.z();
          a.a[0] = d.x();
          a.a[1] = d.y();
          a.b[0] = -d.y();
          a.b[1] = d.x();
          return a;
        };
        for (int i = 0; i <= cells; ++i) {
          const double ang = YawRate(u[fi]) * g.TurnTimeF(phi[i]);
          cos_t[i] = std::cos(ang);
          sin_t[i] = std::sin(ang);
        }
        kt.rotate_points(arc(g.p_s, g.r_f), cos_t.data(), sin_t.data(), cells + 1,
                         fx.data(), fy.data(), fz.data());
        for (int i = 0; i <= cells; ++i) {
          const double ang = -YawRate(u[li]) * g.TurnTimeL(phi[i]);
          cos_t[i] = std::cos(ang);
          sin_t[i] = std::sin(ang);
        }
        kt.rotate_points(arc(g.p_g, g.r_l), cos_t.data(), sin_t.data(), cells + 1,
                         bx.data(), by.data(), bz.data());
        for (int i = 0; i <= cells; ++i) {
          const double c = std::cos(phi[i]), sn = std::sin(phi[i]);
          const double dx = bx[i] - fx[i], dy = by[i] - fy[i];
          e[i] = c * dy - sn * dx;
          s[i] = (c * dx + sn * dy) / g.speed;
        }

        const double scale = 1.0 + (g.p_g - g.p_s).norm();
        auto accept = [&](double ph, double t_f, double t_l) {
          double ee, ss;
          g.Eval(ph, t_f, t_l, &ee, &ss);
          if (std::abs(ee) > 1e-8 * scale || ss < -1e-9) return;
          Seed seed;
          seed.segments = {{fi, t_f}, {mi, std::max(ss, 0.0)}, {li, t_l}};
          const Vec3 khat(std::cos(ph), std::sin(ph), 0.0);
          seed.cert.k = khat / g.speed;
          // H of the first turn is 1 at the start.
          const ControlMoment mf = ComputeControlMoment(q_s, u[fi], q_g.position);
          seed.cert.c = Vec3(0, 0, (1.0 - seed.cert.k.dot(mf.moment)) / mf.axis_term.z());
          seeds->push_back(seed);
        };
        for (int i = 0; i < cells; ++i) {
          if (!(e[i] * e[i + 1] < 0.0) && e[i] != 0.0) continue;
          if (e[i] == 0.0) {
            accept(phi[i], g.TurnTimeF(phi[i]), g.TurnTimeL(phi[i]));
            continue;
          }
          double lo = phi[i], hi = phi[i + 1], elo = e[i];
          for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            double em, sm;
            g.Eval(mid, g.TurnTimeF(mid), g.TurnTimeL(mid), &em, &sm);
            if ((em < 0) == (elo < 0)) {
              lo = mid;
              elo = em;
            } else {
              hi = mid;
            }
          }
          const double root = 0.5 * (lo + hi);
          accept(root, g.TurnTimeF(root), g.TurnTimeL(root));
        }
        // Degenerate turns: zero first or last turn.
        const double phi_a = g.yaw_s + g.heading_m, phi_b = g.yaw_g + g.heading_m;
        accept(phi_a, 0.0, g.TurnTimeL(phi_a));
        accept(phi_b, g.TurnTimeF(phi_b), 0.0);
        accept(phi_a, 0.0, 0.0);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Certificate hypotheses for extremal rollouts.

struct CertBatch {
  std::vector<double> kx, ky, kz, cx, cy, cz;
  void Add(const Vec3& k, const Vec3& c) {
    kx.push_back(k.x());
    ky.push_back(k.y());
    kz.push_back(k.z());
    cx.push_back(c.x());
    cy.push_back(c.y());
    cz.push_back(c.z());
  }
  size_t size() const { return kx.size(); }
  ExtremalCertificate At(size_t i) const {
    ExtremalCertificate cert;
    cert.k = Vec3(kx[i], ky[i], kz[i]);
    cert.c = Vec3(cx[i], cy[i], cz[i]);
    return cert;
  }
};

double LogGrid(int i, int n, double lo, double hi) {
  if (n <= 1) return std::sqrt(lo * hi);
  return lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
}

// First control f at the start and last control l at the goal both hold
// H = 1; k = ρ·k̂ over planar directions, c recovered from the two equations.
void PlanarHypotheses(const ControlMoment& mf, const ControlMoment& ml,
                      const SolverParams& p, double length_scale,
                      CertBatch* out) {
  const double wf = mf.axis_term.z(), wl = ml.axis_term.z();
  const int n = p.angle_cells;
  auto add = [&](double phi, double rho, double c) {
    if (!(rho > 0.0) || !std::isfinite(rho) || !std::isfinite(c)) return;
    out->Add(rho * Vec3(std::cos(phi), std::sin(phi), 0.0), Vec3(0, 0, c));
  };
  if (std::abs(wf - wl) > 1e-12) {
    for (int i = 0; i < n; ++i) {
      const double phi = 2 * kPi * i / n;
      const Vec3 kh(std::cos(phi), std::sin(phi), 0.0);
      const double a = kh.dot(mf.moment), b = kh.dot(ml.moment);
      const double det = a * wl - b * wf;
      if (std::abs(det) < 1e-12) continue;
      add(phi, (wl - wf) / det, (a - b) / det);
    }
    return;
  }
  const Vec3 d = mf.moment - ml.moment;
  std::vector<double> dirs;
  int offsets = p.offset_cells;
  if (d.norm() > 1e-12) {
    const double base = std::atan2(d.y(), d.x());
    dirs = {base + 0.5 * kPi, base - 0.5 * kPi};
  } else {
    // Fully degenerate: fall back to a coarse direction × offset grid.
    const int coarse = std::max(8, static_cast<int>(std::sqrt(double(n))));
    for (int i = 0; i < coarse; ++i) dirs.push_back(2 * kPi * i / coarse);
    offsets = std::max(8, static_cast<int>(std::sqrt(double(offsets))));
  }
  for (double phi : dirs) {
    const Vec3 kh(std::cos(phi), std::sin(phi), 0.0);
    const double a = kh.dot(mf.moment);
    if (wf != 0.0) {
      for (int j = 0; j < offsets; ++j) {
        const double rho = LogGrid(j, offsets, p.magnitude_min, p.magnitude_max);
        add(phi, rho, (1.0 - rho * a) / wf);
      }
    } else if (a > 1e-12) {
      for (int j = 0; j < offsets; ++j) {
        const double rho = 1.0 / a;
        const double span = 2.0 * rho * length_scale;
        add(phi, rho, -span + 2 * span * (j + 0.5) / offsets);
      }
    }
  }
}

std::vector<Vec3> Icosphere(int subdivisions) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0},   {-1, -t, 0}, {1, -t, 0},
                         {0, -1, t}, {0, 1, t},   {0, -1, -t}, {0, 1, -t},
                         {t, 0, -1}, {t, 0, 1},   {-t, 0, -1}, {-t, 0, 1}};
  for (Vec3& x : v) x.normalize();
  std::vector<std::array<int, 3>> f = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      mid[key] = static_cast<int>(v.size()) - 1;
      return static_cast<int>(v.size()) - 1;
    };
    std::vector<std::array<int, 3>> next;
    for (const auto& tri : f) {
      const int a = midpoint(tri[0], tri[1]), b = midpoint(tri[1], tri[2]),
                c = midpoint(tri[2], tri[0]);
      next.push_back({tri[0], a, c});
      next.push_back({tri[1], b, a});
      next.push_back({tri[2], c, b});
      next.push_back({a, b, c});
    }
    f.swap(next);
  }
  return v;
}

void SpatialHypotheses(const ControlMoment& mf, const ControlMoment& ml,
                       const SolverParams& p, const std::vector<Vec3>& dirs,
                       CertBatch* out) {
  Eigen::Matrix<double, 2, 3> a;
  a.row(0) = mf.axis_term.transpose();
  a.row(1) = ml.axis_term.transpose();
  const Eigen::CompleteOrthogonalDecomposition<Eigen::Matrix<double, 2, 3>> cod(a);
  for (const Vec3& d : dirs) {
    const double df = d.dot(mf.moment), dl = d.dot(ml.moment);
    std::vector<double> rhos;
    if (mf.axis_term.isZero()) {
      if (df > 1e-12) rhos.push_back(1.0 / df);
    } else if (ml.axis_term.isZero()) {
      if (dl > 1e-12) rhos.push_back(1.0 / dl);
    } else {
      for (int j = 0; j < p.magnitude_cells; ++j) {
        rhos.push_back(LogGrid(j, p.magnitude_cells, p.magnitude_min, p.magnitude_max));
      }
    }
    for (double rho : rhos) {
      const Eigen::Vector2d b(1.0 - rho * df, 1.0 - rho * dl);
      const Vec3 c = cod.solve(b);
      if ((a * c - b).norm() > 1e-9) continue;
      out->Add(rho * d, c);
    }
  }
}

// Keeps certificates where `first` is a maximizer at the start.
std::vector<size_t> FilterFirst(const CertBatch& batch, const Pose& q_s,
                                const ControlSet& u, int first,
                                const Vec3& goal) {
  const kernels::KernelTable& kt = kernels::Active();
  const size_t n = batch.size();
  std::vector<double> h(n), ok(n, 1.0);
  for (int j = 0; j < u.size(); ++j) {
    if (j == first) continue;
    const ControlMoment m = ComputeControlMoment(q_s, u[j], goal);
    kt.hamiltonian(m.moment.data(), m.axis_term.data(), batch.kx.data(),
                   batch.ky.data(), batch.kz.data(), batch.cx.data(),
                   batch.cy.data(), batch.cz.data(), n, h.data());
    for (size_t i = 0; i < n; ++i) {
      if (h[i] > 1.0 + 1e-9) ok[i] = 0.0;
    }
  }
  std::vector<size_t> keep;
  for (size_t i = 0; i < n; ++i) {
    if (ok[i] != 0.0) keep.push_back(i);
  }
  return keep;
}

double DefaultHorizon(const Pose& q_s, const Pose& q_g, const ControlSet& u) {
  double speed = 0.0, turn = 0.0, reach = 0.0;
  for (const Control& c : u.controls()) {
    if (c.is_translation()) {
      speed = std::max(speed, c.v.norm());
    } else {
      turn += c.Period();
      reach = std::max(reach, c.center.norm());
      speed = std::max(speed, std::abs(c.omega) * c.center.norm());
    }
  }
  if (speed <= 0.0) speed = 1.0;
  return 4.0 * ((q_g.position - q_s.position).norm() + 2 * reach + 1.0) / speed +
         2.0 * turn;
}

}  // namespace

bool IsPlanarProblem(const Pose& q_s, const Pose& q_g, const ControlSet& u) {
  auto yaw_only = [](const Pose& p) {
    return std::abs(p.rotation.matrix()(2, 2) - 1.0) < 1e-12;
  };
  return u.IsPlanar() && yaw_only(q_s) && yaw_only(q_g) &&
         std::abs(q_s.position.z() - q_g.position.z()) < 1e-12;
}

double PolishDurations(const Pose& q_s, const Pose& q_g, const ControlSet& u,
                       std::vector<Segment>* segments, int max_iterations) {
  std::vector<Segment>& segs = *segments;
  const int n = static_cast<int>(segs.size());
  const Vec9 goal = Points(q_g);
  if (n == 0) return ErrorBetween(q_s, q_g);

  auto residual = [&](const std::vector<Segment>& s, Eigen::Matrix<double, 9, Eigen::Dynamic>* jac) {
    Pose q = q_s;
    std::vector<Vec3> w(n), r(n), v(n);
    std::vector<bool> rot(n);
    for (int i = 0; i < n; ++i) {
      const Control& c = u[s[i].control];
      rot[i] = c.is_rotation();
      if (rot[i]) {
        w[i] = q.rotation * c.BodyAngular();
        r[i] = q.position + q.rotation * c.center;
      } else {
        v[i] = q.rotation * c.v;
      }
      q = Advance(q, c, s[i].duration);
    }
    const Vec9 pts = Points(q);
    if (jac) {
      jac->resize(9, n);
      for (int i = 0; i < n; ++i) {
        for (int p = 0; p < 3; ++p) {
          const Vec3 pt = pts.segment<3>(3 * p);
          jac->block<3, 1>(3 * p, i) = rot[i] ? Vec3(w[i].cross(pt - r[i])) : v[i];
        }
      }
    }
    return Vec9(pts - goal);
  };

  Eigen::Matrix<double, 9, Eigen::Dynamic> jac;
  Vec9 res = residual(segs, &jac);
  double cost = res.squaredNorm();
  double lambda = 1e-3;
  for (int it = 0; it < max_iterations && cost > 1e-28; ++it) {
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd g = jac.transpose() * res;
    bool improved = false;
    while (lambda < 1e12) {
      Eigen::MatrixXd a = jtj;
      for (int i = 0; i < n; ++i) a(i, i) += lambda * (jtj(i, i) + 1e-9);
      const Eigen::VectorXd step = a.ldlt().solve(-g);
      std::vector<Segment> trial = segs;
      for (int i = 0; i < n; ++i) trial[i].duration = std::max(0.0, segs[i].duration + step[i]);
      Eigen::Matrix<double, 9, Eigen::Dynamic> tj;
      const Vec9 tr = residual(trial, &tj);
      if (tr.squaredNorm() < cost) {
        segs = trial;
        res = tr;
        jac = tj;
        cost = tr.squaredNorm();
        lambda = std::max(lambda / 3.0, 1e-12);
        improved = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!improved) break;
  }
  ReduceTurns(u, &segs);
  Pose q = q_s;
  for (const Segment& s : segs) q = Advance(q, u[s.control], s.duration);
  return ErrorBetween(q, q_g);
}

ExtremalCertificate RecoverCertificate(
    const Pose& q_s, const Pose& q_g, const Trajectory& traj,
    const ControlSet& u, const std::vector<ExtremalCertificate>& hints,
    double violation_tol, NecessaryConditionReport* report) {
  const bool planar = IsPlanarProblem(q_s, q_g, u);
  const int dim = planar ? 3 : 6;
  const Vec3& g = q_g.position;
  std::vector<Eigen::VectorXd> rows;
  auto add_row = [&](const Pose& q, const Control& c) {
    const ControlMoment m = ComputeControlMoment(q, c, g);
    Eigen::VectorXd row(dim);
    if (planar) {
      row << m.moment.x(), m.moment.y(), m.axis_term.z();
    } else {
      row << m.moment, m.axis_term;
    }
    rows.push_back(row);
  };
  Pose q = q_s;
  for (const Segment& s : traj.segments()) {
    add_row(q, u[s.control]);
    q = Advance(q, u[s.control], s.duration);
    add_row(q, u[s.control]);
  }
  auto to_cert = [&](const Eigen::VectorXd& x) {
    ExtremalCertificate c;
    if (planar) {
      c.k = Vec3(x[0], x[1], 0.0);
      c.c = Vec3(0.0, 0.0, x[2]);
    } else {
      c.k = x.head<3>();
      c.c = x.tail<3>();
    }
    return c;
  };
  auto to_vec = [&](const ExtremalCertificate& c) {
    Eigen::VectorXd x(dim);
    if (planar) {
      x << c.k.x(), c.k.y(), c.c.z();
    } else {
      x << c.k, c.c;
    }
    return x;
  };

  std::vector<Eigen::VectorXd> options;
  Eigen::MatrixXd null_basis(dim, 0);
  Eigen::VectorXd x_ls = Eigen::VectorXd::Zero(dim);
  if (!rows.empty()) {
    Eigen::MatrixXd a(rows.size(), dim);
    for (size_t i = 0; i < rows.size(); ++i) a.row(i) = rows[i].transpose();
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(rows.size());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV | Eigen::ComputeThinU);
    const Eigen::VectorXd sv = svd.singularValues();
    const double cutoff = 1e-9 * std::max(1.0, sv.size() ? sv[0] : 1.0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i) rank += sv[i] > cutoff;
    svd.setThreshold(cutoff / std::max(1.0, sv.size() ? sv[0] : 1.0));
    x_ls = svd.solve(ones);
    null_basis = svd.matrixV().rightCols(dim - rank);
  } else {
    null_basis = Eigen::MatrixXd::Identity(dim, dim);
  }
  options.push_back(x_ls);
  for (const ExtremalCertificate& h : hints) {
    const Eigen::VectorXd hv = to_vec(h);
    options.push_back(x_ls + null_basis * (null_basis.transpose() * (hv - x_ls)));
  }

  ExtremalCertificate best;
  NecessaryConditionReport best_rep;
  double best_score = kInf;
  auto consider = [&](const Eigen::VectorXd& x) {
    ExtremalCertificate c = to_cert(x);
    c.underdetermined = null_basis.cols() > 0;
    if (!c.Valid()) return;
    const NecessaryConditionReport r =
        VerifyNecessaryCondition(c, q_s, traj, u, g, violation_tol);
    const double score = std::max(r.max_active_deviation, r.max_violation_by_inactive);
    if (score < best_score) {
      best_score = score;
      best = c;
      best_rep = r;
    }
  };
  for (const Eigen::VectorXd& x : options) consider(x);
  // Underdetermined and still violating: scan the solution family.
  const int free_dims = static_cast<int>(null_basis.cols());
  if (best_score > violation_tol && free_dims >= 1 && free_dims <= 2) {
    double span = 4.0 * (x_ls.norm() + 1.0);
    for (const Eigen::VectorXd& x : options) span = std::max(span, 4.0 * x.norm());
    const int steps = free_dims == 1 ? 257 : 33;
    for (int i = 0; i < steps; ++i) {
      for (int j = 0; j < (free_dims == 2 ? steps : 1); ++j) {
        Eigen::VectorXd coef(free_dims);
        coef[0] = -span + 2 * span * i / (steps - 1);
        if (free_dims == 2) coef[1] = -span + 2 * span * j / (steps - 1);
        consider(x_ls + null_basis * coef);
      }
    }
  }
  if (report) *report = best_rep;
  return best;
}

SolveResult SolveShortest(const Pose& q_s, const Pose& q_g,
                          const ControlSet& u, const SolverParams& params) {
  SolveResult result;
  const Vec3& g = q_g.position;
  if (ErrorBetween(q_s, q_g) <= params.eps_goal) {
    // Already there: any certificate with a positive maximizer will do.
    for (const Control& c : u.controls()) {
      if (c.is_translation()) {
        const Vec3 v = q_s.rotation * c.v;
        result.certificate.k = v / v.squaredNorm();
        break;
      }
    }
    if (result.certificate.k.isZero()) {
      const Vec3 w = q_s.rotation * u[0].BodyAngular();
      result.certificate.c = w / w.squaredNorm();
    }
    result.certificate.underdetermined = true;
    result.goal_error = ErrorBetween(q_s, q_g);
    result.verified = true;
    return result;
  }

  const bool planar = IsPlanarProblem(q_s, q_g, u);
  const int threads = ResolveThreads(params.threads);
  std::vector<Seed> seeds;

  // Polished candidates keyed by word.
  struct Found {
    std::vector<Segment> segments;
    double time = kInf;
    double error = kInf;
    std::vector<ExtremalCertificate> hints;
  };
  std::map<std::string, Found> found;
  auto polish = [&](Seed seed) {
    seed.segments = Clean(seed.segments, 0.0);
    double err = PolishDurations(q_s, q_g, u, &seed.segments);
    std::vector<Segment> cleaned = Clean(seed.segments, params.eps_seg);
    if (cleaned.size() != seed.segments.size()) {
      seed.segments = cleaned;
      err = PolishDurations(q_s, q_g, u, &seed.segments);
      seed.segments = Clean(seed.segments, params.eps_seg);
    }
    if (err > params.eps_goal || seed.segments.empty()) return kInf;
    if (static_cast<int>(seed.segments.size()) > params.max_segments) return kInf;
    double time = 0.0;
    for (const Segment& s : seed.segments) time += s.duration;
    Found& f = found[WordKey(seed.segments)];
    f.hints.push_back(seed.cert);
    if (time < f.time) {
      f.segments = seed.segments;
      f.time = time;
      f.error = err;
    }
    return time;
  };

  double upper = kInf;
  if (planar) {
    PlanarSingularScan(q_s, q_g, u, params.angle_cells, &seeds);
    for (const Seed& s : seeds) upper = std::min(upper, polish(s));
  }
  const double horizon = std::isfinite(upper)
                             ? upper * (1.0 + 1e-6) + 1e-9
                             : DefaultHorizon(q_s, q_g, u);

  // Extremal rollouts from first/last hypotheses.
  std::vector<Vec3> dirs;
  if (!planar) dirs = Icosphere(params.sphere_subdivisions);
  const double length_scale = (g - q_s.position).norm() + 1.0;
  std::vector<std::pair<int, ExtremalCertificate>> jobs;
  for (int f = 0; f < u.size(); ++f) {
    const ControlMoment mf = ComputeControlMoment(q_s, u[f], g);
    for (int l = 0; l < u.size(); ++l) {
      const ControlMoment ml = ComputeControlMoment(q_g, u[l], g);
      CertBatch batch;
      if (planar) {
        PlanarHypotheses(mf, ml, params, length_scale, &batch);
      } else {
        SpatialHypotheses(mf, ml, params, dirs, &batch);
      }
      for (size_t i : FilterFirst(batch, q_s, u, f, g)) jobs.push_back({f, batch.At(i)});
    }
  }
  RolloutOptions opts;
  opts.touch_tol = planar ? params.touch_tol_planar : params.touch_tol_spatial;
  std::vector<Seed> rolled(jobs.size());
  ParallelFor(static_cast<int>(jobs.size()), threads, [&](int i) {
    RolloutOptions o = opts;
    o.first_control = jobs[i].first;
    try {
      const ExtremalRollout r = ExtremalTrajectory(
          jobs[i].second, q_s, u, q_g, params.max_segments, horizon, o);
      rolled[i].segments = r.truncated.segments();
      rolled[i].cert = jobs[i].second;
      rolled[i].error = r.closest_error;
    } catch (const Error&) {
    }
  });
  // Best few per word go to the polish.
  std::map<std::string, std::vector<const Seed*>> by_word;
  for (const Seed& s : rolled) {
    if (s.segments.empty() || !std::isfinite(s.error)) continue;
    by_word[WordKey(s.segments)].push_back(&s);
  }
  for (auto& [key, list] : by_word) {
    std::stable_sort(list.begin(), list.end(),
                     [](const Seed* a, const Seed* b) { return a->error < b->error; });
    const int keep = std::min<int>(params.polish_per_word, static_cast<int>(list.size()));
    for (int i = 0; i < keep; ++i) polish(*list[i]);
  }

  if (found.empty()) {
    throw Error(ErrorCode::kNoPathFound,
                "no extremal reached the goal within eps_goal");
  }

  for (const auto& [key, f] : found) {
    WordCandidate c;
    c.trajectory = Trajectory(f.segments);
    c.word = c.trajectory.Word();
    c.total_time = f.time;
    c.goal_error = f.error;
    result.candidates.push_back(c);
  }
  std::stable_sort(result.candidates.begin(), result.candidates.end(),
                   [](const WordCandidate& a, const WordCandidate& b) {
                     if (a.total_time != b.total_time) return a.total_time < b.total_time;
                     return a.word < b.word;
                   });
  // Certificates for the best word and anything tied with it.
  const double best_time = result.candidates.front().total_time;
  for (WordCandidate& c : result.candidates) {
    if (c.total_time - best_time > params.tie_tolerance) break;
    NecessaryConditionReport rep;
    const ExtremalCertificate cert = RecoverCertificate(
        q_s, q_g, c.trajectory, u, found[ControlSet::IndexWord(c.word)].hints,
        params.violation_tol, &rep);
    c.verified = rep.constant;
    if (&c == &result.candidates.front()) {
      result.trajectory = c.trajectory;
      result.certificate = cert;
      result.report = rep;
      result.verified = rep.constant;
      result.total_time = c.total_time;
      result.goal_error = c.goal_error;
    } else {
      result.ties.push_back(c);
    }
  }
  return result;
}

SolveResult SolveShortest(const PointConfiguration& q_s,
                          const PointConfiguration& q_g, const ControlSet& u,
                          const SolverParams& params) {
  return SolveShortest(ToPose(q_s), ToPose(q_g), u, params);
}

}  // namespace kinosynth
