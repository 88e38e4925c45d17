#include "refgov/environment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace refgov {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double polygon_signed_area(const std::vector<Vec2>& v) {
  double acc = 0.0;
  for (size_t i = 0; i < v.size(); ++i) acc += cross2(v[i], v[(i + 1) % v.size()]);
  return 0.5 * acc;
}

// Clip a convex CCW polygon against the half-plane {q : n.q >= c}.
std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, const Vec2& n, double c) {
  std::vector<Vec2> out;
  const size_t m = poly.size();
  for (size_t i = 0; i < m; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % m];
    const double da = n.dot(a) - c;
    const double db = n.dot(b) - c;
    if (da >= 0.0) out.push_back(a);
    if ((da > 0.0 && db < 0.0) || (da < 0.0 && db > 0.0)) {
      const double t = da / (da - db);
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

double normalize_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

// Chords approximating an arc with sagitta <= tol.
std::vector<SegmentShape> polygonize_arc(const Arc& arc, double tol) {
  std::vector<SegmentShape> chords;
  if (arc.radius <= 0.0) return chords;
  const double max_step = 2.0 * std::acos(std::clamp(1.0 - tol / arc.radius, -1.0, 1.0));
  const int count = std::max(1, static_cast<int>(std::ceil(arc.span / std::max(max_step, 1e-6))));
  const double step = arc.span / count;
  Vec2 prev = arc.center + arc.radius * Vec2(std::cos(arc.start_angle), std::sin(arc.start_angle));
  for (int i = 1; i <= count; ++i) {
    const double th = arc.start_angle + i * step;
    const Vec2 cur = arc.center + arc.radius * Vec2(std::cos(th), std::sin(th));
    chords.push_back(SegmentShape{prev, cur});
    prev = cur;
  }
  return chords;
}

}  // namespace

ConvexRegion make_disk_region(const Vec2& center, double radius) {
  if (radius <= 0.0) throw std::invalid_argument("disk region: radius must be positive");
  return DiskRegion{center, radius};
}

ConvexRegion make_polygon_region(std::vector<Vec2> vertices) {
  if (vertices.size() < 3) throw std::invalid_argument("polygon region: needs at least 3 vertices");
  if (polygon_signed_area(vertices) < 0.0) std::reverse(vertices.begin(), vertices.end());
  const double area = polygon_signed_area(vertices);
  if (area <= 1e-12) throw std::invalid_argument("polygon region: degenerate (zero area)");
  const size_t m = vertices.size();
  for (size_t i = 0; i < m; ++i) {
    const Vec2 e0 = vertices[(i + 1) % m] - vertices[i];
    const Vec2 e1 = vertices[(i + 2) % m] - vertices[(i + 1) % m];
    if (cross2(e0, e1) < -1e-12) throw std::invalid_argument("polygon region: not convex");
  }
  return PolygonRegion{std::move(vertices)};
}

bool region_contains(const ConvexRegion& region, const Vec2& p) {
  if (const auto* d = std::get_if<DiskRegion>(&region)) return (p - d->center).norm() <= d->radius;
  const auto& poly = std::get<PolygonRegion>(region).vertices;
  for (size_t i = 0; i < poly.size(); ++i)
    if (cross2(poly[(i + 1) % poly.size()] - poly[i], p - poly[i]) < 0.0) return false;
  return true;
}

bool region_strictly_contains(const ConvexRegion& region, const Vec2& p) {
  if (const auto* d = std::get_if<DiskRegion>(&region)) return (p - d->center).norm() < d->radius;
  const auto& poly = std::get<PolygonRegion>(region).vertices;
  for (size_t i = 0; i < poly.size(); ++i)
    if (cross2(poly[(i + 1) % poly.size()] - poly[i], p - poly[i]) <= 0.0) return false;
  return true;
}

double point_region_distance(const ConvexRegion& region, const Vec2& p) {
  if (const auto* d = std::get_if<DiskRegion>(&region)) return std::max(0.0, (p - d->center).norm() - d->radius);
  const auto& poly = std::get<PolygonRegion>(region).vertices;
  if (region_contains(region, p)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < poly.size(); ++i)
    best = std::min(best, point_segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
  return best;
}

ConvexSet region_as_convex_set(const ConvexRegion& region) {
  if (const auto* d = std::get_if<DiskRegion>(&region)) return ConvexSet::disk(d->center, d->radius);
  return ConvexSet::polytope(std::get<PolygonRegion>(region).vertices);
}

double point_arc_distance(const Vec2& p, const Arc& arc) {
  const Vec2 d = p - arc.center;
  const double n = d.norm();
  if (arc.span >= kTwoPi - 1e-12) return std::abs(n - arc.radius);
  const double rel = normalize_angle(std::atan2(d.y(), d.x()) - arc.start_angle);
  if (rel <= arc.span) return std::abs(n - arc.radius);
  const Vec2 e0 = arc.center + arc.radius * Vec2(std::cos(arc.start_angle), std::sin(arc.start_angle));
  const double th1 = arc.start_angle + arc.span;
  const Vec2 e1 = arc.center + arc.radius * Vec2(std::cos(th1), std::sin(th1));
  return std::min((p - e0).norm(), (p - e1).norm());
}

bool InflatedObstacle::contains(const Vec2& p) const {
  return point_region_distance(base, p) <= inflation;
}

bool InflatedObstacle::strictly_contains(const Vec2& p) const {
  if (inflation > 0.0) return point_region_distance(base, p) < inflation;
  return region_strictly_contains(base, p);
}

bool FreeSpace::contains(const Vec2& p) const {
  if (!region_contains(eroded_workspace_, p)) return false;
  for (const InflatedObstacle& ob : inflated_)
    if (ob.strictly_contains(p)) return false;
  return true;
}

double FreeSpace::point_boundary_distance(const Vec2& p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const BoundaryPrimitive& prim : primitives_) {
    if (const auto* seg = std::get_if<SegmentShape>(&prim))
      best = std::min(best, point_segment_distance(p, seg->a, seg->b));
    else
      best = std::min(best, point_arc_distance(p, std::get<Arc>(prim)));
  }
  return best;
}

double FreeSpace::set_boundary_distance(const ConvexSet& s) const {
  const Vec2 c = s.reference_point();
  const double r = s.radius_bound();
  // Any primitive point is an upper bound through the reference point.
  double best = point_boundary_distance(c);
  if (best <= 0.0) return 0.0;
  for (const SegmentShape& seg : query_segments_) {
    const double lower = point_segment_distance(c, seg.a, seg.b) - r;
    if (lower >= best) continue;
    best = std::min(best, convex_distance(s, ConvexSet::segment(seg.a, seg.b)));
    if (best <= 0.0) return 0.0;
  }
  return best;
}

FreeSpace build_free_space(const Environment& env, double arc_tolerance) {
  if (env.robot_radius < 0.0) throw std::invalid_argument("build_free_space: negative robot radius");
  if (arc_tolerance <= 0.0) throw std::invalid_argument("build_free_space: arc tolerance must be positive");
  const double rho = env.robot_radius;

  FreeSpace fs;
  fs.arc_tolerance_ = arc_tolerance;

  // Erode the workspace.
  if (const auto* d = std::get_if<DiskRegion>(&env.workspace)) {
    const double r = d->radius - rho;
    if (r <= 1e-12) throw std::runtime_error("build_free_space: empty free space (workspace erosion vanished)");
    fs.eroded_workspace_ = DiskRegion{d->center, r};
    fs.primitives_.push_back(Arc{d->center, r, 0.0, kTwoPi});
  } else {
    const auto& poly = std::get<PolygonRegion>(env.workspace).vertices;
    std::vector<Vec2> eroded = poly;
    if (rho > 0.0) {
      for (size_t i = 0; i < poly.size() && !eroded.empty(); ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % poly.size()];
        const Vec2 inward = Vec2(-(b - a).y(), (b - a).x()).normalized();
        eroded = clip_halfplane(eroded, inward, inward.dot(a) + rho);
      }
    }
    if (eroded.size() < 3 || polygon_signed_area(eroded) <= 1e-12)
      throw std::runtime_error("build_free_space: empty free space (workspace erosion vanished)");
    fs.eroded_workspace_ = PolygonRegion{eroded};
    for (size_t i = 0; i < eroded.size(); ++i)
      fs.primitives_.push_back(SegmentShape{eroded[i], eroded[(i + 1) % eroded.size()]});
  }

  // Dilate the obstacles.
  for (const ConvexRegion& ob : env.obstacles) {
    fs.inflated_.push_back(InflatedObstacle{ob, rho});
    if (const auto* d = std::get_if<DiskRegion>(&ob)) {
      fs.primitives_.push_back(Arc{d->center, d->radius + rho, 0.0, kTwoPi});
    } else {
      const auto& poly = std::get<PolygonRegion>(ob).vertices;
      const size_t m = poly.size();
      for (size_t i = 0; i < m; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % m];
        const Vec2 outward = Vec2((b - a).y(), -(b - a).x()).normalized();
        fs.primitives_.push_back(SegmentShape{a + rho * outward, b + rho * outward});
        if (rho > 0.0) {
          // Corner arc sweeping from this edge normal to the next one.
          const Vec2& c = poly[(i + 2) % m];
          const Vec2 outward_next = Vec2((c - b).y(), -(c - b).x()).normalized();
          const double th0 = std::atan2(outward.y(), outward.x());
          const double span = normalize_angle(std::atan2(outward_next.y(), outward_next.x()) - th0);
          if (span > 1e-9 && span < M_PI) fs.primitives_.push_back(Arc{b, rho, th0, span});
        }
      }
    }
  }

  // Flat chord list for set-distance queries.
  for (const BoundaryPrimitive& prim : fs.primitives_) {
    if (const auto* seg = std::get_if<SegmentShape>(&prim)) {
      fs.query_segments_.push_back(*seg);
    } else {
      for (const SegmentShape& chord : polygonize_arc(std::get<Arc>(prim), arc_tolerance))
        fs.query_segments_.push_back(chord);
    }
  }

  // Overlapping dilations keep queries exact but break the one-primitive-one-
  // boundary-piece reading; surface them.
  for (size_t i = 0; i < fs.inflated_.size(); ++i) {
    const ConvexSet a = region_as_convex_set(fs.inflated_[i].base);
    if (convex_distance(a, region_as_convex_set(fs.eroded_workspace_)) > rho + 1e-12)
      fs.warnings_.push_back("obstacle " + std::to_string(i) + " does not intersect the eroded workspace");
    for (size_t j = i + 1; j < fs.inflated_.size(); ++j) {
      const double d = convex_distance(a, region_as_convex_set(fs.inflated_[j].base));
      if (d < 2.0 * rho - 1e-12 || (rho == 0.0 && d <= 1e-12))
        fs.warnings_.push_back("inflated obstacles " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
    }
  }

  // Grid probe: emptiness is an error, disconnection a warning.
  Vec2 lo, hi;
  if (const auto* d = std::get_if<DiskRegion>(&fs.eroded_workspace_)) {
    lo = d->center - Vec2(d->radius, d->radius);
    hi = d->center + Vec2(d->radius, d->radius);
  } else {
    const auto& poly = std::get<PolygonRegion>(fs.eroded_workspace_).vertices;
    lo = hi = poly[0];
    for (const Vec2& v : poly) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
  }
  const int grid = 128;
  const Vec2 span = hi - lo;
  std::vector<int> label(grid * grid, -1);
  std::vector<bool> free(grid * grid, false);
  int free_count = 0;
  for (int iy = 0; iy < grid; ++iy)
    for (int ix = 0; ix < grid; ++ix) {
      const Vec2 p = lo + Vec2((ix + 0.5) / grid * span.x(), (iy + 0.5) / grid * span.y());
      if (fs.contains(p)) {
        free[iy * grid + ix] = true;
        ++free_count;
      }
    }
  if (free_count == 0) throw std::runtime_error("build_free_space: empty free space");
  int components = 0;
  std::vector<int> stack;
  for (int start = 0; start < grid * grid; ++start) {
    if (!free[start] || label[start] >= 0) continue;
    ++components;
    stack.push_back(start);
    label[start] = components;
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      const int cx = cur % grid, cy = cur / grid;
      const int nbr[4][2] = {{cx - 1, cy}, {cx + 1, cy}, {cx, cy - 1}, {cx, cy + 1}};
      for (const auto& nb : nbr) {
        if (nb[0] < 0 || nb[0] >= grid || nb[1] < 0 || nb[1] >= grid) continue;
        const int idx = nb[1] * grid + nb[0];
        if (free[idx] && label[idx] < 0) {
          label[idx] = components;
          stack.push_back(idx);
        }
      }
    }
  }
  fs.components_ = components;
  if (components > 1)
    fs.warnings_.push_back("free space appears disconnected (" + std::to_string(components) +
                           " components in grid probe)");
  return fs;
}

}  // namespace refgov
