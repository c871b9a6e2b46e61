#include "curvfun/hull.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <unordered_map>

namespace curvfun {
namespace {

double cross2(const Vec& o, const Vec& a, const Vec& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

HullVolume hull2(std::vector<Vec> pts) {
  HullVolume out;
  if (pts.size() < 3) {
    out.degenerate = true;
    return out;
  }
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  std::vector<Vec> chain(2 * pts.size());
  std::size_t k = 0;
  for (const Vec& p : pts) {
    while (k >= 2 && cross2(chain[k - 2], chain[k - 1], p) <= 0.0) --k;
    chain[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    const Vec& p = pts[i];
    while (k >= lower && cross2(chain[k - 2], chain[k - 1], p) <= 0.0) --k;
    chain[k++] = p;
  }
  const std::size_t m = k - 1;  // last point repeats the first
  double twice = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Vec& a = chain[i];
    const Vec& b = chain[(i + 1) % m];
    twice += a.x() * b.y() - a.y() * b.x();
  }
  out.vertices = m;
  out.volume = 0.5 * twice;
  double extent = 0.0;
  for (const Vec& p : pts) extent = std::max(extent, (p.head<2>() - pts.front().head<2>()).norm());
  if (m < 3 || out.volume <= 1e-14 * extent * extent) {
    out.volume = 0.0;
    out.degenerate = true;
  }
  return out;
}

struct Face {
  std::array<std::size_t, 3> v;
  Vec normal;
  double offset;
  bool alive = true;
};

Face make_face(const std::vector<Vec>& pts, std::size_t a, std::size_t b, std::size_t c) {
  Face f{{a, b, c}, (pts[b] - pts[a]).cross(pts[c] - pts[a]), 0.0};
  f.offset = f.normal.dot(pts[a]);
  return f;
}

HullVolume hull3(const std::vector<Vec>& pts) {
  HullVolume out;
  const std::size_t n = pts.size();
  if (n < 4) {
    out.degenerate = true;
    return out;
  }
  double scale = 0.0;
  for (const Vec& p : pts) scale = std::max(scale, (p - pts[0]).norm());
  if (scale == 0.0) {
    out.degenerate = true;
    return out;
  }
  const double eps = 1e-12 * scale;

  // Initial simplex: farthest point, then farthest from the line, then from the plane.
  std::size_t i1 = 0;
  for (std::size_t i = 1; i < n; ++i)
    if ((pts[i] - pts[0]).norm() > (pts[i1] - pts[0]).norm()) i1 = i;
  const Vec dir = (pts[i1] - pts[0]).normalized();
  std::size_t i2 = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (pts[i] - pts[0]).cross(dir).norm();
    if (d > best) best = d, i2 = i;
  }
  if (best <= eps) {
    out.degenerate = true;
    return out;
  }
  const Vec plane = (pts[i1] - pts[0]).cross(pts[i2] - pts[0]).normalized();
  std::size_t i3 = 0;
  best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::abs(plane.dot(pts[i] - pts[0]));
    if (d > best) best = d, i3 = i;
  }
  if (best <= eps * scale) {
    out.degenerate = true;
    return out;
  }

  const std::array<std::size_t, 4> simplex{0, i1, i2, i3};
  const Vec interior = 0.25 * (pts[0] + pts[i1] + pts[i2] + pts[i3]);
  std::vector<Face> faces;
  auto add_face = [&](std::size_t a, std::size_t b, std::size_t c) {
    Face f = make_face(pts, a, b, c);
    if (f.normal.dot(interior) > f.offset) {
      std::swap(f.v[1], f.v[2]);
      f.normal = -f.normal;
      f.offset = -f.offset;
    }
    faces.push_back(f);
  };
  add_face(0, i1, i2);
  add_face(0, i1, i3);
  add_face(0, i2, i3);
  add_face(i1, i2, i3);

  std::unordered_map<std::uint64_t, std::size_t> edges;  // directed edge -> count in visible set
  auto key = [](std::size_t a, std::size_t b) { return (static_cast<std::uint64_t>(a) << 32) | b; };
  std::vector<std::size_t> visible;
  for (std::size_t p = 0; p < n; ++p) {
    if (std::find(simplex.begin(), simplex.end(), p) != simplex.end()) continue;
    visible.clear();
    for (std::size_t f = 0; f < faces.size(); ++f) {
      const Face& face = faces[f];
      if (!face.alive) continue;
      if (face.normal.dot(pts[p]) - face.offset > eps * face.normal.norm()) visible.push_back(f);
    }
    if (visible.empty()) continue;
    edges.clear();
    for (std::size_t f : visible) {
      faces[f].alive = false;
      const auto& v = faces[f].v;
      for (int e = 0; e < 3; ++e) edges[key(v[e], v[(e + 1) % 3])] = 1;
    }
    for (const auto& [k, unused] : edges) {
      (void)unused;
      const std::size_t a = k >> 32;
      const std::size_t b = k & 0xffffffffu;
      if (edges.count(key(b, a)) == 0) faces.push_back(make_face(pts, a, b, p));
    }
    // Compact periodically so the visibility scan stays proportional to the hull.
    if (faces.size() > 64 && faces.size() > 4 * n) {
      faces.erase(std::remove_if(faces.begin(), faces.end(), [](const Face& f) { return !f.alive; }), faces.end());
    }
  }

  double vol6 = 0.0;
  std::vector<bool> used(n, false);
  for (const Face& f : faces) {
    if (!f.alive) continue;
    const Vec a = pts[f.v[0]] - interior;
    const Vec b = pts[f.v[1]] - interior;
    const Vec c = pts[f.v[2]] - interior;
    vol6 += a.dot(b.cross(c));
    for (std::size_t v : f.v) used[v] = true;
  }
  out.volume = vol6 / 6.0;
  out.vertices = static_cast<std::size_t>(std::count(used.begin(), used.end(), true));
  return out;
}

}  // namespace

HullVolume hull_volume(const std::vector<Vec>& points, int dim) {
  if (dim == 2) return hull2(points);
  if (dim == 3) return hull3(points);
  throw DomainError("hull dimension must be 2 or 3, got " + std::to_string(dim));
}

}  // namespace curvfun
