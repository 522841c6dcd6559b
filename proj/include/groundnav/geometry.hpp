#pragma once

#include <span>
#include <vector>

namespace groundnav {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
  friend bool operator==(Point a, Point b) = default;
};

using Polygon = std::vector<Point>;

double dot(Point a, Point b);
double cross(Point a, Point b);
double distance(Point a, Point b);

/// Shoelace signed area; positive for counterclockwise vertex order.
double signed_area(std::span<const Point> poly);

/// Area centroid of a simple polygon. Requires nonzero area.
Point centroid(std::span<const Point> poly);

/// Even-odd rule point containment. Points exactly on an edge may land on
/// either side; callers sample at cell centers which avoid that case for
/// grid-aligned maps.
bool contains_even_odd(std::span<const Point> poly, Point p);

/// True when `p` lies on an edge of `poly` within `tol`.
bool on_boundary(std::span<const Point> poly, Point p, double tol = 1e-9);

/// True when the open segments (a,b) and (c,d) cross at a single interior
/// point of both.
bool segments_cross(Point a, Point b, Point c, Point d);

/// Simple means no two non-adjacent edges intersect and no two adjacent
/// edges overlap. Requires at least three vertices.
bool is_simple(std::span<const Point> poly);

/// True when every point of `inner` is inside or on the boundary of `outer`.
bool polygon_within(std::span<const Point> inner, std::span<const Point> outer);

/// True when the interiors of two simple polygons intersect. Shared edges
/// and touching corners do not count as overlap.
bool interiors_overlap(std::span<const Point> a, std::span<const Point> b);

/// Total length along which the boundaries of `a` and `b` run within
/// `tolerance` of each other with (anti)parallel edges.
double shared_boundary_length(std::span<const Point> a,
                              std::span<const Point> b, double tolerance);

struct Box {
  Point min;
  Point max;
  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
};

Box bounding_box(std::span<const Point> poly);

}  // namespace groundnav
