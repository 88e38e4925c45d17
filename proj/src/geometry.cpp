#include "refgov/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace refgov {

namespace {

constexpr double kGjkTolerance = 1e-9;
constexpr int kGjkMaxIterations = 128;

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

void check_symmetric_psd(const Eigen::MatrixXd& s, const char* what) {
  if (s.rows() != s.cols()) throw std::invalid_argument(std::string(what) + ": matrix not square");
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  if ((s - s.transpose()).cwiseAbs().maxCoeff() >= 1e-12 * scale)
    throw std::invalid_argument(std::string(what) + ": matrix not symmetric");
}

}  // namespace

Vec2 project_to_ball(const Vec2& point, const Ball& ball) {
  const Vec2 d = point - ball.center;
  const double n = d.norm();
  if (n <= ball.radius) return point;
  return ball.center + (ball.radius / n) * d;
}

Eigen::MatrixXd matrix_sqrt_psd(const Eigen::MatrixXd& s) {
  check_symmetric_psd(s, "matrix_sqrt_psd");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  if (es.info() != Eigen::Success) throw std::invalid_argument("matrix_sqrt_psd: eigendecomposition failed");
  Eigen::VectorXd ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] < -1e-10 * scale) throw std::invalid_argument("matrix_sqrt_psd: matrix not positive semidefinite");
    ev[i] = std::sqrt(std::max(ev[i], 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

ConvexSet ConvexSet::point(const Vec2& p) { return ConvexSet(PointShape{p}); }

ConvexSet ConvexSet::segment(const Vec2& a, const Vec2& b) { return ConvexSet(SegmentShape{a, b}); }

ConvexSet ConvexSet::disk(const Vec2& center, double radius) {
  if (radius < 0.0) throw std::invalid_argument("ConvexSet::disk: negative radius");
  return ConvexSet(DiskShape{center, radius});
}

ConvexSet ConvexSet::ellipse(const Vec2& center, const Mat2& shape, double scale) {
  if (scale < 0.0) throw std::invalid_argument("ConvexSet::ellipse: negative scale");
  EllipseShape e{center, shape, scale, Mat2::Zero()};
  e.shape_sqrt = matrix_sqrt_psd(shape);
  return ConvexSet(std::move(e));
}

ConvexSet ConvexSet::polytope(std::vector<Vec2> vertices) {
  if (vertices.empty()) throw std::invalid_argument("ConvexSet::polytope: needs at least one vertex");
  return ConvexSet(PolytopeShape{std::move(vertices)});
}

Vec2 ConvexSet::reference_point() const {
  return std::visit(
      [](const auto& s) -> Vec2 {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PointShape>) return s.p;
        else if constexpr (std::is_same_v<T, SegmentShape>) return 0.5 * (s.a + s.b);
        else if constexpr (std::is_same_v<T, DiskShape>) return s.center;
        else if constexpr (std::is_same_v<T, EllipseShape>) return s.center;
        else {
          Vec2 sum{0.0, 0.0};
          for (const Vec2& v : s.vertices) sum += v;
          return sum / static_cast<double>(s.vertices.size());
        }
      },
      shape_);
}

double ConvexSet::radius_bound() const {
  const Vec2 c = reference_point();
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PointShape>) return 0.0;
        else if constexpr (std::is_same_v<T, SegmentShape>) return std::max((s.a - c).norm(), (s.b - c).norm());
        else if constexpr (std::is_same_v<T, DiskShape>) return s.radius;
        else if constexpr (std::is_same_v<T, EllipseShape>) {
          Eigen::SelfAdjointEigenSolver<Mat2> es(s.shape);
          return s.scale * std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
        } else {
          double r = 0.0;
          for (const Vec2& v : s.vertices) r = std::max(r, (v - c).norm());
          return r;
        }
      },
      shape_);
}

ConvexSet ConvexSet::translated(const Vec2& offset) const {
  return std::visit(
      [&](const auto& s) -> ConvexSet {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PointShape>) return ConvexSet(PointShape{s.p + offset});
        else if constexpr (std::is_same_v<T, SegmentShape>) return ConvexSet(SegmentShape{s.a + offset, s.b + offset});
        else if constexpr (std::is_same_v<T, DiskShape>) return ConvexSet(DiskShape{s.center + offset, s.radius});
        else if constexpr (std::is_same_v<T, EllipseShape>) {
          EllipseShape e = s;
          e.center += offset;
          return ConvexSet(std::move(e));
        } else {
          PolytopeShape p = s;
          for (Vec2& v : p.vertices) v += offset;
          return ConvexSet(std::move(p));
        }
      },
      shape_);
}

Vec2 support_point(const ConvexSet& set, const Vec2& direction) {
  if (direction.squaredNorm() == 0.0) throw std::invalid_argument("support_point: zero direction");
  return std::visit(
      [&](const auto& s) -> Vec2 {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PointShape>) {
          return s.p;
        } else if constexpr (std::is_same_v<T, SegmentShape>) {
          return direction.dot(s.a) >= direction.dot(s.b) ? s.a : s.b;
        } else if constexpr (std::is_same_v<T, DiskShape>) {
          return s.center + s.radius * direction.normalized();
        } else if constexpr (std::is_same_v<T, EllipseShape>) {
          const Vec2 w = s.shape_sqrt * direction;
          const double n = w.norm();
          if (n == 0.0 || s.scale == 0.0) return s.center;
          return s.center + (s.scale / n) * (s.shape * direction);
        } else {
          double best = -std::numeric_limits<double>::infinity();
          Vec2 arg = s.vertices.front();
          for (const Vec2& v : s.vertices) {
            const double d = direction.dot(v);
            if (d > best) {
              best = d;
              arg = v;
            }
          }
          return arg;
        }
      },
      set.shape());
}

namespace {

// Closest point to the origin on the current simplex; reduces the simplex to
// the lowest face containing that point. Returns true when the origin is
// interior to a triangle (overlap).
bool simplex_closest(std::vector<Vec2>& simplex, Vec2& v) {
  if (simplex.size() == 1) {
    v = simplex[0];
    return false;
  }
  auto segment_closest = [](const Vec2& a, const Vec2& b, double& t) {
    const Vec2 ab = b - a;
    const double denom = ab.squaredNorm();
    t = denom > 0.0 ? std::clamp(-a.dot(ab) / denom, 0.0, 1.0) : 0.0;
    return Vec2(a + t * ab);
  };
  if (simplex.size() == 2) {
    double t;
    v = segment_closest(simplex[0], simplex[1], t);
    if (t <= 0.0) simplex = {simplex[0]};
    else if (t >= 1.0) simplex = {simplex[1]};
    return false;
  }
  // Triangle: origin inside <=> consistent orientation against all edges.
  const Vec2 a = simplex[0], b = simplex[1], c = simplex[2];
  const double d1 = cross2(b - a, -a);
  const double d2 = cross2(c - b, -b);
  const double d3 = cross2(a - c, -c);
  const bool all_nonneg = d1 >= 0.0 && d2 >= 0.0 && d3 >= 0.0;
  const bool all_nonpos = d1 <= 0.0 && d2 <= 0.0 && d3 <= 0.0;
  if (all_nonneg || all_nonpos) {
    v = Vec2::Zero();
    return true;
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<Vec2> keep;
  const int edges[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (const auto& e : edges) {
    double t;
    const Vec2 p = segment_closest(simplex[e[0]], simplex[e[1]], t);
    const double n2 = p.squaredNorm();
    if (n2 < best) {
      best = n2;
      v = p;
      if (t <= 0.0) keep = {simplex[e[0]]};
      else if (t >= 1.0) keep = {simplex[e[1]]};
      else keep = {simplex[e[0]], simplex[e[1]]};
    }
  }
  simplex = std::move(keep);
  return false;
}

}  // namespace

double convex_distance(const ConvexSet& a, const ConvexSet& b) {
  const auto support_md = [&](const Vec2& d) { return support_point(a, d) - support_point(b, Vec2(-d)); };

  Vec2 d0 = b.reference_point() - a.reference_point();
  if (d0.squaredNorm() < 1e-24) d0 = Vec2(1.0, 0.0);

  std::vector<Vec2> simplex{support_md(d0)};
  Vec2 v = simplex[0];

  for (int iter = 0; iter < kGjkMaxIterations; ++iter) {
    const double nv = v.norm();
    if (nv <= kGjkTolerance) return 0.0;
    const Vec2 w = support_md(-v);
    // Duality gap between the upper bound |v| and the support lower bound.
    if (nv - v.dot(w) / nv <= kGjkTolerance) return nv;
    bool repeated = false;
    for (const Vec2& s : simplex)
      if ((w - s).norm() <= 1e-13 * std::max(1.0, nv)) repeated = true;
    if (repeated) return nv;  // simplex cannot improve further
    simplex.push_back(w);
    if (simplex_closest(simplex, v)) return 0.0;
  }
  std::ostringstream msg;
  msg << "convex_distance: no convergence after " << kGjkMaxIterations
      << " iterations, best bound " << v.norm();
  throw std::runtime_error(msg.str());
}

std::vector<Vec2> boundary_samples(const ConvexSet& set, int samples) {
  if (samples < 2) throw std::invalid_argument("boundary_samples: needs samples >= 2");
  const int n = samples;
  return std::visit(
      [&](const auto& s) -> std::vector<Vec2> {
        using T = std::decay_t<decltype(s)>;
        std::vector<Vec2> out;
        if constexpr (std::is_same_v<T, PointShape>) {
          out.push_back(s.p);
        } else if constexpr (std::is_same_v<T, SegmentShape>) {
          out.reserve(n);
          for (int i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / (n - 1);
            out.push_back(s.a + t * (s.b - s.a));
          }
        } else if constexpr (std::is_same_v<T, DiskShape>) {
          out.reserve(n);
          for (int i = 0; i < n; ++i) {
            const double th = 2.0 * M_PI * i / n;
            out.push_back(s.center + s.radius * Vec2(std::cos(th), std::sin(th)));
          }
        } else if constexpr (std::is_same_v<T, EllipseShape>) {
          if (s.scale == 0.0) {
            out.push_back(s.center);
          } else {
            out.reserve(n);
            for (int i = 0; i < n; ++i) {
              const double th = 2.0 * M_PI * i / n;
              out.push_back(s.center + s.scale * (s.shape_sqrt * Vec2(std::cos(th), std::sin(th))));
            }
          }
        } else {
          const std::vector<Vec2> hull = convex_hull(s.vertices);
          if (hull.size() == 1) {
            out.push_back(hull[0]);
            return out;
          }
          double perimeter = 0.0;
          for (size_t i = 0; i < hull.size(); ++i) perimeter += (hull[(i + 1) % hull.size()] - hull[i]).norm();
          if (perimeter == 0.0) {
            out.push_back(hull[0]);
            return out;
          }
          out.reserve(n);
          const double step = perimeter / n;
          size_t edge = 0;
          double along = 0.0;
          for (int i = 0; i < n; ++i) {
            double target = i * step;
            while (true) {
              const Vec2& a = hull[edge];
              const Vec2& b = hull[(edge + 1) % hull.size()];
              const double len = (b - a).norm();
              if (target - along <= len || edge + 1 == hull.size()) {
                const double t = len > 0.0 ? std::min((target - along) / len, 1.0) : 0.0;
                out.push_back(a + t * (b - a));
                break;
              }
              along += len;
              ++edge;
            }
          }
        }
        return out;
      },
      set.shape());
}

double brute_force_distance(const ConvexSet& a, const ConvexSet& b, int samples) {
  const std::vector<Vec2> pa = boundary_samples(a, samples);
  const std::vector<Vec2> pb = boundary_samples(b, samples);
  double best = std::numeric_limits<double>::infinity();
  for (const Vec2& x : pa) {
    const double xx = x.x(), xy = x.y();
    for (const Vec2& y : pb) {
      const double dx = xx - y.x();
      const double dy = xy - y.y();
      const double d2 = dx * dx + dy * dy;
      if (d2 < best) best = d2;
    }
  }
  return std::sqrt(best);
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double denom = ab.squaredNorm();
  if (denom == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / denom, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

std::vector<Vec2> convex_hull(std::vector<Vec2> points) {
  if (points.empty()) throw std::invalid_argument("convex_hull: empty input");
  std::sort(points.begin(), points.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  points.erase(std::unique(points.begin(), points.end(),
                           [](const Vec2& a, const Vec2& b) { return (a - b).norm() <= 1e-12; }),
               points.end());
  const size_t n = points.size();
  if (n <= 2) return points;
  std::vector<Vec2> hull(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {  // lower
    while (k >= 2 && cross2(hull[k - 1] - hull[k - 2], points[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = points[i];
  }
  for (size_t i = n - 1, lower = k + 1; i-- > 0;) {  // upper
    while (k >= lower && cross2(hull[k - 1] - hull[k - 2], points[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return hull;
}

double point_convex_polygon_distance(const Vec2& p, const std::vector<Vec2>& hull) {
  if (hull.empty()) throw std::invalid_argument("point_convex_polygon_distance: empty hull");
  if (hull.size() == 1) return (p - hull[0]).norm();
  if (hull.size() == 2) return point_segment_distance(p, hull[0], hull[1]);
  bool inside = true;
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < hull.size(); ++i) {
    const Vec2& a = hull[i];
    const Vec2& b = hull[(i + 1) % hull.size()];
    if (cross2(b - a, p - a) < 0.0) inside = false;
    best = std::min(best, point_segment_distance(p, a, b));
  }
  return inside ? 0.0 : best;
}

}  // namespace refgov
