#include "groundnav/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace groundnav {

double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double signed_area(std::span<const Point> poly) {
  double twice = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    twice += cross(poly[i], poly[(i + 1) % n]);
  }
  return 0.5 * twice;
}

Point centroid(std::span<const Point> poly) {
  // Shift to the first vertex to limit cancellation for far-from-origin maps.
  const Point origin = poly.front();
  double twice_area = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point p = poly[i] - origin;
    const Point q = poly[(i + 1) % n] - origin;
    const double c = cross(p, q);
    twice_area += c;
    cx += (p.x + q.x) * c;
    cy += (p.y + q.y) * c;
  }
  return {origin.x + cx / (3.0 * twice_area),
          origin.y + cy / (3.0 * twice_area)};
}

bool contains_even_odd(std::span<const Point> poly, Point p) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point a = poly[i];
    const Point b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_at = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_at) inside = !inside;
    }
  }
  return inside;
}

namespace {

double orient(Point a, Point b, Point c) { return cross(b - a, c - a); }

bool on_segment(Point a, Point b, Point p, double tol) {
  const Point ab = b - a;
  const double len = std::hypot(ab.x, ab.y);
  if (len == 0.0) return distance(a, p) <= tol;
  if (std::abs(cross(ab, p - a)) / len > tol) return false;
  const double t = dot(p - a, ab) / (len * len);
  const double slack = tol / len;
  return t >= -slack && t <= 1.0 + slack;
}

// Closed-segment intersection, touching included.
bool segments_touch(Point a, Point b, Point c, Point d) {
  const double d1 = orient(c, d, a);
  const double d2 = orient(c, d, b);
  const double d3 = orient(a, b, c);
  const double d4 = orient(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  constexpr double kTol = 1e-12;
  return on_segment(c, d, a, kTol) || on_segment(c, d, b, kTol) ||
         on_segment(a, b, c, kTol) || on_segment(a, b, d, kTol);
}

bool strictly_inside(std::span<const Point> poly, Point p) {
  return !on_boundary(poly, p, 1e-9) && contains_even_odd(poly, p);
}

}  // namespace

bool on_boundary(std::span<const Point> poly, Point p, double tol) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (on_segment(poly[i], poly[(i + 1) % n], p, tol)) return true;
  }
  return false;
}

bool segments_cross(Point a, Point b, Point c, Point d) {
  const double d1 = orient(c, d, a);
  const double d2 = orient(c, d, b);
  const double d3 = orient(a, b, c);
  const double d4 = orient(a, b, d);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
         ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

bool is_simple(std::span<const Point> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = poly[i];
    const Point b = poly[(i + 1) % n];
    if (a == b) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point c = poly[j];
      const Point d = poly[(j + 1) % n];
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) {
        // Adjacent edges share one vertex; they must not fold back onto
        // each other.
        const Point shared = (j == i + 1) ? b : a;
        const Point other_i = (j == i + 1) ? a : b;
        const Point other_j = (j == i + 1) ? d : c;
        const Point u = other_i - shared;
        const Point v = other_j - shared;
        if (std::abs(cross(u, v)) <= 1e-12 * std::hypot(u.x, u.y) *
                                         std::hypot(v.x, v.y) &&
            dot(u, v) > 0) {
          return false;
        }
        continue;
      }
      if (segments_touch(a, b, c, d)) return false;
    }
  }
  return true;
}

bool polygon_within(std::span<const Point> inner,
                    std::span<const Point> outer) {
  for (const Point& p : inner) {
    if (!on_boundary(outer, p, 1e-9) && !contains_even_odd(outer, p)) {
      return false;
    }
  }
  const std::size_t n = inner.size();
  const std::size_t m = outer.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = inner[i];
    const Point b = inner[(i + 1) % n];
    for (std::size_t j = 0; j < m; ++j) {
      if (segments_cross(a, b, outer[j], outer[(j + 1) % m])) return false;
    }
    // A chord between two boundary vertices can still leave a non-convex
    // outer polygon; its midpoint catches that.
    const Point mid = 0.5 * (a + b);
    if (!on_boundary(outer, mid, 1e-9) && !contains_even_odd(outer, mid)) {
      return false;
    }
  }
  return true;
}

bool interiors_overlap(std::span<const Point> a, std::span<const Point> b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (segments_cross(a[i], a[(i + 1) % n], b[j], b[(j + 1) % m])) {
        return true;
      }
    }
  }
  auto probe = [](std::span<const Point> p, std::span<const Point> q) {
    const std::size_t k = p.size();
    for (std::size_t i = 0; i < k; ++i) {
      if (strictly_inside(q, p[i])) return true;
      if (strictly_inside(q, 0.5 * (p[i] + p[(i + 1) % k]))) return true;
    }
    const Point c = centroid(p);
    return strictly_inside(p, c) && strictly_inside(q, c);
  };
  return probe(a, b) || probe(b, a);
}

double shared_boundary_length(std::span<const Point> a,
                              std::span<const Point> b, double tolerance) {
  double total = 0.0;
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point p0 = a[i];
    const Point p1 = a[(i + 1) % n];
    const Point u = p1 - p0;
    const double len = std::hypot(u.x, u.y);
    if (len == 0.0) continue;
    const Point dir = (1.0 / len) * u;
    for (std::size_t j = 0; j < m; ++j) {
      const Point q0 = b[j];
      const Point q1 = b[(j + 1) % m];
      if (std::abs(cross(dir, q0 - p0)) > tolerance ||
          std::abs(cross(dir, q1 - p0)) > tolerance) {
        continue;
      }
      const double t0 = dot(q0 - p0, dir);
      const double t1 = dot(q1 - p0, dir);
      const double lo = std::max(0.0, std::min(t0, t1));
      const double hi = std::min(len, std::max(t0, t1));
      if (hi > lo) total += hi - lo;
    }
  }
  return total;
}

Box bounding_box(std::span<const Point> poly) {
  Box box{poly.front(), poly.front()};
  for (const Point& p : poly) {
    box.min.x = std::min(box.min.x, p.x);
    box.min.y = std::min(box.min.y, p.y);
    box.max.x = std::max(box.max.x, p.x);
    box.max.y = std::max(box.max.y, p.y);
  }
  return box;
}

}  // namespace groundnav
