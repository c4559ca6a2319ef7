#pragma once

// Discrete geometry substrate: a weighted graph with node volumes and a
// per-node diagonal metric. Covers 1D intervals, flat 2D rectangles/tori
// and latitude-longitude spheres with explicit pole nodes.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace tunnelab {

inline constexpr double kPi = 3.14159265358979323846;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class DomainKind { interval, rectangle, torus2d, sphere_latlong };
enum class BoundaryKind { dirichlet_outer, periodic, closed_surface };

inline const char* to_string(DomainKind k) {
  switch (k) {
    case DomainKind::interval: return "interval";
    case DomainKind::rectangle: return "rectangle";
    case DomainKind::torus2d: return "torus2d";
    case DomainKind::sphere_latlong: return "sphere_latlong";
  }
  return "?";
}

struct DomainSpec {
  DomainKind kind = DomainKind::interval;
  std::array<double, 2> lo{{-1.0, -1.0}};
  std::array<double, 2> hi{{1.0, 1.0}};
  double radius = 1.0;  // sphere only
  std::array<int, 2> resolution{{0, 0}};
  BoundaryKind boundary = BoundaryKind::dirichlet_outer;

  int dim() const { return kind == DomainKind::interval ? 1 : 2; }

  void validate() const {
    const int d = dim();
    for (int i = 0; i < d; ++i) {
      if (resolution[i] < 8)
        throw Error("domain resolution must be >= 8 per axis, got " +
                    std::to_string(resolution[i]));
    }
    if (kind == DomainKind::sphere_latlong &&
        boundary != BoundaryKind::closed_surface)
      throw Error("sphere_latlong requires closed_surface boundary");
    if (kind == DomainKind::torus2d && boundary != BoundaryKind::periodic)
      throw Error("torus2d requires periodic boundary");
    if (kind == DomainKind::sphere_latlong && radius <= 0.0)
      throw Error("sphere radius must be positive");
    if (kind != DomainKind::sphere_latlong) {
      for (int i = 0; i < d; ++i)
        if (!(hi[i] > lo[i]))
          throw Error("domain bounds must satisfy lo < hi on axis " +
                      std::to_string(i));
      if (boundary == BoundaryKind::closed_surface)
        throw Error("closed_surface boundary is only valid for sphere_latlong");
    }
  }
};

// One value (rank = 1) or a rank-r fibre per node, component-major per node.
struct NodeField {
  std::vector<double> values;
  int rank = 1;

  NodeField() = default;
  NodeField(int nodes, int r) : values(static_cast<size_t>(nodes) * r, 0.0), rank(r) {}

  int node_count() const { return rank > 0 ? static_cast<int>(values.size()) / rank : 0; }
  double& at(int node, int comp = 0) { return values[static_cast<size_t>(node) * rank + comp]; }
  double at(int node, int comp = 0) const { return values[static_cast<size_t>(node) * rank + comp]; }
};

struct GraphEdge {
  std::int32_t a = -1, b = -1;
  std::int8_t axis = 0;       // coordinate axis of the edge (pole edges: 0)
  double conductance = 0.0;   // finite-volume face/length ratio
  double glength = 0.0;       // metric length of the edge
};

struct DomainGraph {
  DomainSpec spec;
  int dim = 1;
  std::array<int, 2> n{{0, 1}};          // grid nodes per axis (rings x cols on sphere)
  std::array<double, 2> delta{{0.0, 0.0}};
  std::array<bool, 2> periodic{{false, false}};

  std::vector<std::array<double, 2>> coords;   // (x[,y]) or (theta,phi)
  std::vector<double> volume;
  std::vector<std::array<double, 2>> metric;   // diagonal g_i at the node
  std::vector<GraphEdge> edges;
  // Structured neighbor ids: slot = 2*axis + dir, dir 0 = -, 1 = +; -1 if absent.
  // Ring-0 / last-ring nodes of a sphere have the pole as their theta neighbor.
  std::vector<std::array<std::int32_t, 4>> nbr;
  std::vector<std::int32_t> pole_nodes;                 // {north, south} on spheres
  std::vector<std::vector<std::int32_t>> pole_ring;     // ring adjacency per pole
  std::vector<bool> on_outer_boundary;

  int node_count() const { return static_cast<int>(coords.size()); }

  int grid_node(int i, int j = 0) const { return dim == 1 ? i : i * n[1] + j; }

  bool is_pole(int id) const {
    return std::find(pole_nodes.begin(), pole_nodes.end(), id) != pole_nodes.end();
  }

  double total_volume() const {
    return std::accumulate(volume.begin(), volume.end(), 0.0);
  }

  // Count of grid nodes (excluding pole nodes).
  int grid_count() const { return dim == 1 ? n[0] : n[0] * n[1]; }

  std::vector<std::int32_t> neighbors(int id) const {
    std::vector<std::int32_t> out;
    if (is_pole(id)) {
      size_t p = (id == pole_nodes[0]) ? 0 : 1;
      out.assign(pole_ring[p].begin(), pole_ring[p].end());
      return out;
    }
    for (int s = 0; s < 2 * dim; ++s)
      if (nbr[id][s] >= 0) out.push_back(nbr[id][s]);
    return out;
  }
};

namespace detail {

inline void build_flat(DomainGraph& g) {
  const DomainSpec& spec = g.spec;
  const int d = spec.dim();
  g.dim = d;
  for (int i = 0; i < d; ++i) {
    g.n[i] = spec.resolution[i];
    g.periodic[i] = (spec.boundary == BoundaryKind::periodic);
    // Periodic axes have n distinct nodes over [lo, hi); Dirichlet axes
    // include both endpoints.
    g.delta[i] = g.periodic[i] ? (spec.hi[i] - spec.lo[i]) / g.n[i]
                               : (spec.hi[i] - spec.lo[i]) / (g.n[i] - 1);
  }
  const int n0 = g.n[0], n1 = (d == 2) ? g.n[1] : 1;
  const int total = n0 * n1;
  g.coords.resize(total);
  g.volume.resize(total);
  g.metric.assign(total, {1.0, 1.0});
  g.nbr.assign(total, {-1, -1, -1, -1});
  g.on_outer_boundary.assign(total, false);

  auto axis_weight = [&](int axis, int i) {
    if (g.periodic[axis]) return g.delta[axis];
    return (i == 0 || i == g.n[axis] - 1) ? 0.5 * g.delta[axis] : g.delta[axis];
  };

  for (int i = 0; i < n0; ++i) {
    for (int j = 0; j < n1; ++j) {
      const int id = (d == 1) ? i : i * n1 + j;
      g.coords[id] = {spec.lo[0] + i * g.delta[0],
                      d == 2 ? spec.lo[1] + j * g.delta[1] : 0.0};
      double vol = axis_weight(0, i);
      if (d == 2) vol *= axis_weight(1, j);
      g.volume[id] = vol;
      bool bdry = false;
      if (!g.periodic[0] && (i == 0 || i == n0 - 1)) bdry = true;
      if (d == 2 && !g.periodic[1] && (j == 0 || j == n1 - 1)) bdry = true;
      g.on_outer_boundary[id] = bdry;
    }
  }

  auto link = [&](int a, int b, int axis) {
    double other = 1.0;
    if (d == 2) other = g.delta[1 - axis];
    g.edges.push_back({static_cast<std::int32_t>(a), static_cast<std::int32_t>(b),
                       static_cast<std::int8_t>(axis), other / g.delta[axis],
                       g.delta[axis]});
    g.nbr[a][2 * axis + 1] = b;
    g.nbr[b][2 * axis + 0] = a;
  };

  for (int i = 0; i < n0; ++i) {
    for (int j = 0; j < n1; ++j) {
      const int id = (d == 1) ? i : i * n1 + j;
      if (i + 1 < n0) link(id, (d == 1) ? i + 1 : (i + 1) * n1 + j, 0);
      else if (g.periodic[0]) link(id, (d == 1) ? 0 : j, 0);
      if (d == 2) {
        if (j + 1 < n1) link(id, i * n1 + j + 1, 1);
        else if (g.periodic[1]) link(id, i * n1, 1);
      }
    }
  }
}

inline void build_sphere(DomainGraph& g) {
  const DomainSpec& spec = g.spec;
  g.dim = 2;
  const int nt = spec.resolution[0];  // latitude rings
  const int np = spec.resolution[1];  // longitudes
  const double r = spec.radius;
  const double dt = kPi / nt;
  const double dp = 2.0 * kPi / np;
  g.n = {nt, np};
  g.delta = {dt, dp};
  g.periodic = {false, true};

  const int total = nt * np + 2;
  const int north = nt * np, south = nt * np + 1;
  g.coords.resize(total);
  g.volume.resize(total);
  g.metric.resize(total);
  g.nbr.assign(total, {-1, -1, -1, -1});
  g.on_outer_boundary.assign(total, false);
  g.pole_nodes = {north, south};
  g.pole_ring.resize(2);

  // Rings sit half a cell away from the poles.
  for (int i = 0; i < nt; ++i) {
    const double theta = (i + 0.5) * dt;
    const double st = std::sin(theta);
    for (int j = 0; j < np; ++j) {
      const int id = i * np + j;
      g.coords[id] = {theta, j * dp};
      g.metric[id] = {r * r, r * r * st * st};
      g.volume[id] = r * r * st * dt * dp;
    }
  }
  g.coords[north] = {0.0, 0.0};
  g.coords[south] = {kPi, 0.0};
  g.metric[north] = g.metric[south] = {r * r, r * r};
  const double cap = 2.0 * kPi * r * r * (1.0 - std::cos(0.5 * dt));
  g.volume[north] = g.volume[south] = cap;

  auto push_edge = [&](int a, int b, int axis, double cond, double len) {
    g.edges.push_back({static_cast<std::int32_t>(a), static_cast<std::int32_t>(b),
                       static_cast<std::int8_t>(axis), cond, len});
  };

  for (int i = 0; i < nt; ++i) {
    const double theta = (i + 0.5) * dt;
    for (int j = 0; j < np; ++j) {
      const int id = i * np + j;
      // phi edge within the ring
      const int jn = i * np + (j + 1) % np;
      push_edge(id, jn, 1, dt / (std::sin(theta) * dp), r * std::sin(theta) * dp);
      g.nbr[id][3] = jn;
      g.nbr[jn][2] = id;
      // theta edge to the next ring
      if (i + 1 < nt) {
        const int in = (i + 1) * np + j;
        push_edge(id, in, 0, std::sin((i + 1) * dt) * dp / dt, r * dt);
        g.nbr[id][1] = in;
        g.nbr[in][0] = id;
      }
    }
  }
  // Pole edges: face at theta = dt/4 (midpoint of pole and first ring).
  for (int j = 0; j < np; ++j) {
    const int id0 = j, id1 = (nt - 1) * np + j;
    push_edge(north, id0, 0, std::sin(0.25 * dt) * dp / (0.5 * dt), 0.5 * r * dt);
    push_edge(south, id1, 0, std::sin(0.25 * dt) * dp / (0.5 * dt), 0.5 * r * dt);
    g.nbr[id0][0] = north;
    g.nbr[id1][1] = south;
    g.pole_ring[0].push_back(id0);
    g.pole_ring[1].push_back(id1);
  }
}

inline void check_connected(const DomainGraph& g) {
  const int n = g.node_count();
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  std::vector<std::vector<int>> adj(n);
  for (const auto& e : g.edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  if (count != n) throw Error("domain graph is not connected");
}

}  // namespace detail

inline DomainGraph build_domain(const DomainSpec& spec) {
  spec.validate();
  DomainGraph g;
  g.spec = spec;
  if (spec.kind == DomainKind::sphere_latlong)
    detail::build_sphere(g);
  else
    detail::build_flat(g);
  detail::check_connected(g);
  return g;
}

// Per-node gradient covector of a scalar field: centered differences in the
// interior, one-sided at boundaries. Pole nodes get the ring-averaged radial
// difference, which vanishes for smooth extrema at the pole.
inline std::vector<std::array<double, 2>> discrete_gradient(const DomainGraph& g,
                                                            const NodeField& f) {
  if (f.rank != 1) throw Error("discrete_gradient requires a scalar field");
  if (f.node_count() != g.node_count()) throw Error("field size mismatch");
  std::vector<std::array<double, 2>> out(g.node_count(), {0.0, 0.0});
  for (int id = 0; id < g.node_count(); ++id) {
    if (g.is_pole(id)) {
      size_t p = (id == g.pole_nodes[0]) ? 0 : 1;
      double acc = 0.0;
      for (int rn : g.pole_ring[p]) acc += (f.at(rn) - f.at(id)) / (0.5 * g.delta[0]);
      out[id] = {acc / static_cast<double>(g.pole_ring[p].size()), 0.0};
      continue;
    }
    for (int axis = 0; axis < g.dim; ++axis) {
      const int lo = g.nbr[id][2 * axis + 0];
      const int hi = g.nbr[id][2 * axis + 1];
      const double h = g.delta[axis];
      double v = 0.0;
      if (lo >= 0 && hi >= 0) {
        const bool lo_pole = g.is_pole(lo), hi_pole = g.is_pole(hi);
        if (lo_pole || hi_pole) {
          // uneven spacing next to a pole: h/2 on the pole side
          const double hl = lo_pole ? 0.5 * h : h;
          const double hh = hi_pole ? 0.5 * h : h;
          v = (f.at(hi) - f.at(lo)) / (hl + hh);
        } else {
          v = (f.at(hi) - f.at(lo)) / (2.0 * h);
        }
      } else if (hi >= 0) {
        v = (f.at(hi) - f.at(id)) / h;
      } else if (lo >= 0) {
        v = (f.at(id) - f.at(lo)) / h;
      }
      out[id][axis] = v;
    }
  }
  return out;
}

// |omega|^2 in the inverse metric at a node, for a covector omega.
inline double covector_norm2(const DomainGraph& g, int node,
                             const std::array<double, 2>& omega) {
  double s = 0.0;
  for (int axis = 0; axis < g.dim; ++axis)
    s += omega[axis] * omega[axis] / g.metric[node][axis];
  return s;
}

// Bilinear interpolation of node values at arbitrary coordinates.
// Handles periodic wrap and the half-cell offset next to sphere poles.
class FieldSampler {
 public:
  FieldSampler(const DomainGraph& g, const std::vector<double>& values)
      : g_(g), v_(values) {}

  double operator()(const std::array<double, 2>& x) const {
    if (g_.dim == 1) return sample1d(x[0]);
    if (g_.spec.kind == DomainKind::sphere_latlong) return sample_sphere(x);
    return sample_flat2d(x);
  }

 private:
  const DomainGraph& g_;
  const std::vector<double>& v_;

  double sample1d(double x) const {
    const double lo = g_.spec.lo[0], h = g_.delta[0];
    const int n = g_.n[0];
    double t = (x - lo) / h;
    if (g_.periodic[0]) {
      t -= std::floor(t / n) * n;
      const int i = static_cast<int>(std::floor(t));
      const double f = t - i;
      return (1 - f) * v_[i % n] + f * v_[(i + 1) % n];
    }
    t = std::clamp(t, 0.0, static_cast<double>(n - 1));
    const int i = std::min(static_cast<int>(std::floor(t)), n - 2);
    const double f = t - i;
    return (1 - f) * v_[i] + f * v_[i + 1];
  }

  double sample_flat2d(const std::array<double, 2>& x) const {
    double w[2][2];
    int idx[2][2];
    for (int axis = 0; axis < 2; ++axis) {
      const double lo = g_.spec.lo[axis], h = g_.delta[axis];
      const int n = g_.n[axis];
      double t = (x[axis] - lo) / h;
      if (g_.periodic[axis]) {
        t -= std::floor(t / n) * n;
        const int i = static_cast<int>(std::floor(t));
        const double f = t - i;
        idx[axis][0] = i % n;
        idx[axis][1] = (i + 1) % n;
        w[axis][0] = 1 - f;
        w[axis][1] = f;
      } else {
        t = std::clamp(t, 0.0, static_cast<double>(n - 1));
        const int i = std::min(static_cast<int>(std::floor(t)), n - 2);
        const double f = t - i;
        idx[axis][0] = i;
        idx[axis][1] = i + 1;
        w[axis][0] = 1 - f;
        w[axis][1] = f;
      }
    }
    double acc = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        acc += w[0][a] * w[1][b] * v_[idx[0][a] * g_.n[1] + idx[1][b]];
    return acc;
  }

  double sample_sphere(const std::array<double, 2>& x) const {
    const int nt = g_.n[0], np = g_.n[1];
    const double dt = g_.delta[0], dp = g_.delta[1];
    double theta = std::clamp(x[0], 0.0, kPi);
    double phi = x[1] - std::floor(x[1] / (2 * kPi)) * 2 * kPi;
    const double tr = theta / dt - 0.5;  // ring coordinate
    const double pr = phi / dp;
    const int j0 = static_cast<int>(std::floor(pr)) % np;
    const int j1 = (j0 + 1) % np;
    const double fp = pr - std::floor(pr);
    auto ring_val = [&](int i) {
      return (1 - fp) * v_[i * np + j0] + fp * v_[i * np + j1];
    };
    if (tr < 0.0) {  // between north pole and ring 0
      const double f = theta / (0.5 * dt);
      return (1 - f) * v_[g_.pole_nodes[0]] + f * ring_val(0);
    }
    if (tr > nt - 1.0) {  // between last ring and south pole
      const double f = (theta - (nt - 0.5) * dt) / (0.5 * dt);
      return (1 - std::clamp(f, 0.0, 1.0)) * ring_val(nt - 1) +
             std::clamp(f, 0.0, 1.0) * v_[g_.pole_nodes[1]];
    }
    const int i0 = std::min(static_cast<int>(std::floor(tr)), nt - 2);
    const double ft = tr - i0;
    return (1 - ft) * ring_val(i0) + ft * ring_val(i0 + 1);
  }
};

// Diagonal metric at arbitrary coordinates (analytic, not interpolated).
inline std::array<double, 2> metric_at(const DomainGraph& g,
                                       const std::array<double, 2>& x) {
  if (g.spec.kind == DomainKind::sphere_latlong) {
    const double r = g.spec.radius, st = std::sin(x[0]);
    return {r * r, r * r * st * st};
  }
  return {1.0, 1.0};
}

inline int nearest_node(const DomainGraph& g, const std::array<double, 2>& x) {
  int best = 0;
  double bd = std::numeric_limits<double>::max();
  for (int id = 0; id < g.node_count(); ++id) {
    double d2 = 0.0;
    for (int axis = 0; axis < g.dim; ++axis) {
      double diff = g.coords[id][axis] - x[axis];
      if (g.periodic[axis]) {
        const double span = g.n[axis] * g.delta[axis];
        diff -= std::round(diff / span) * span;
      }
      if (g.spec.kind == DomainKind::sphere_latlong && axis == 1) {
        diff -= std::round(diff / (2 * kPi)) * 2 * kPi;
        diff *= std::sin(0.5 * (g.coords[id][0] + x[0]));
      }
      d2 += diff * diff;
    }
    if (d2 < bd) {
      bd = d2;
      best = id;
    }
  }
  return best;
}

}  // namespace tunnelab
