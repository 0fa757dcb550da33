#include "faultfem/mesh.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace faultfem {

namespace {

constexpr double kTagTol = 1e-12;

// Local edge i is opposite vertex i.
constexpr int kEdgeEnds[3][2] = {{1, 2}, {2, 0}, {0, 1}};

std::uint64_t pair_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

double signed_area(Vec2 p0, Vec2 p1, Vec2 p2) { return 0.5 * cross(p1 - p0, p2 - p0); }

}  // namespace

EdgeTag Mesh::derive_tag_geometric(int a, int b, bool boundary) const {
  const Vec2 pa = vertex_pos(a);
  const Vec2 pb = vertex_pos(b);
  const auto on_line = [&](double va, double vb, double c) {
    return std::abs(va - c) <= kTagTol && std::abs(vb - c) <= kTagTol;
  };
  if (boundary) {
    const bool horizontal = on_line(pa.y, pb.y, 0.0) || on_line(pa.y, pb.y, 1.0);
    if (horizontal && geometry_.layout == BoundaryLayout::TopBottomNeumann)
      return EdgeTag::NeumannBoundary;
    return EdgeTag::DirichletBoundary;
  }
  if (on_line(pa.x, pb.x, 0.5) && pa.y >= geometry_.gamma_y0 - kTagTol &&
      pa.y <= geometry_.gamma_y1 + kTagTol && pb.y >= geometry_.gamma_y0 - kTagTol &&
      pb.y <= geometry_.gamma_y1 + kTagTol)
    return EdgeTag::InterfaceGamma;
  return EdgeTag::Interior;
}

template <class TagHint>
Mesh Mesh::finalize(std::vector<Vertex> vertices, std::vector<Cell> cells,
                    const ProblemGeometry& geometry, int generation, TagHint&& tag_hint) {
  Mesh mesh;
  mesh.vertices_ = std::move(vertices);
  mesh.cells_ = std::move(cells);
  mesh.geometry_ = geometry;
  mesh.generation_ = generation;

  // Edge table in deterministic first-seen order over (cell, local edge).
  std::unordered_map<std::uint64_t, int> edge_id;
  edge_id.reserve(mesh.cells_.size() * 2);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    Cell& cell = mesh.cells_[c];
    if (signed_area(mesh.vertex_pos(cell.v[0]), mesh.vertex_pos(cell.v[1]),
                    mesh.vertex_pos(cell.v[2])) <= 0.0)
      throw std::invalid_argument("mesh: cell " + std::to_string(c) +
                                  " has non-positive signed area");
    for (int le = 0; le < 3; ++le) {
      const int a = cell.v[kEdgeEnds[le][0]];
      const int b = cell.v[kEdgeEnds[le][1]];
      const auto key = pair_key(a, b);
      auto [it, inserted] = edge_id.try_emplace(key, mesh.num_edges());
      if (inserted) {
        Edge e;
        e.a = std::min(a, b);
        e.b = std::max(a, b);
        e.cell = {c, -1};
        mesh.edges_.push_back(e);
      } else {
        Edge& e = mesh.edges_[it->second];
        if (e.cell[1] != -1)
          throw std::invalid_argument("mesh: edge shared by more than two cells");
        e.cell[1] = c;
      }
      cell.edge[le] = it->second;
    }
  }

  for (Edge& e : mesh.edges_) {
    const bool boundary = e.cell[1] < 0;
    const int hint = tag_hint(e.a, e.b);
    e.tag = hint >= 0 ? static_cast<EdgeTag>(hint)
                      : mesh.derive_tag_geometric(e.a, e.b, boundary);
    const bool boundary_tag =
        e.tag == EdgeTag::DirichletBoundary || e.tag == EdgeTag::NeumannBoundary;
    if (boundary != boundary_tag)
      throw std::invalid_argument("mesh: edge adjacency inconsistent with its tag");
  }

  // Orient interior/Gamma edges: cell[0] is the side the normal points out of.
  for (int e = 0; e < mesh.num_edges(); ++e) {
    Edge& edge = mesh.edges_[e];
    if (edge.cell[1] < 0) continue;
    const Vec2 n = mesh.edge_normal(e);
    const Vec2 to_c0 = mesh.cell_centroid(edge.cell[0]) - mesh.edge_midpoint(e);
    if (dot(to_c0, n) > 0.0) std::swap(edge.cell[0], edge.cell[1]);
  }
  return mesh;
}

Mesh Mesh::structured(int n, const ProblemGeometry& geometry) {
  if (n <= 0 || n % 4 != 0)
    throw std::invalid_argument(
        "structured mesh size must be a positive multiple of 4 so that the fault and the "
        "lines y = 1/4, 3/4 are mesh lines; got " +
        std::to_string(n));

  std::vector<Vertex> vertices;
  vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});

  const auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 3>> cells;
  cells.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j);
      const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      // Hypotenuse (the diagonal) first: it is the refinement edge.
      cells.push_back({v11, v00, v10});
      cells.push_back({v00, v11, v01});
    }
  }
  return from_cells(std::move(vertices), std::move(cells), geometry);
}

Mesh Mesh::from_cells(std::vector<Vertex> vertices, std::vector<std::array<int, 3>> raw,
                      const ProblemGeometry& geometry) {
  std::vector<Cell> cells(raw.size());
  for (std::size_t c = 0; c < raw.size(); ++c) cells[c].v = raw[c];
  return finalize(std::move(vertices), std::move(cells), geometry, 0,
                  [](int, int) { return -1; });
}

Mesh Mesh::refine(const std::vector<int>& marked) const {
  std::vector<char> cell_marked(num_cells(), 0);
  for (int c : marked) {
    if (c < 0 || c >= num_cells())
      throw std::invalid_argument("refine: marked cell id out of range: " + std::to_string(c));
    cell_marked[c] = 1;
  }

  // Closure: a cell with any marked edge must have its refinement edge marked.
  std::vector<char> edge_marked(num_edges(), 0);
  for (int c = 0; c < num_cells(); ++c)
    if (cell_marked[c]) edge_marked[cells_[c].edge[2]] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (const Cell& cell : cells_) {
      if (edge_marked[cell.edge[2]]) continue;
      if (edge_marked[cell.edge[0]] || edge_marked[cell.edge[1]]) {
        edge_marked[cell.edge[2]] = 1;
        changed = true;
      }
    }
  }

  std::vector<Vertex> vertices = vertices_;
  std::unordered_map<std::uint64_t, int> midpoint;
  for (int e = 0; e < num_edges(); ++e) {
    if (!edge_marked[e]) continue;
    const Edge& edge = edges_[e];
    midpoint[pair_key(edge.a, edge.b)] = static_cast<int>(vertices.size());
    vertices.push_back({0.5 * (vertices_[edge.a].x + vertices_[edge.b].x),
                        0.5 * (vertices_[edge.a].y + vertices_[edge.b].y)});
  }

  // Bisect each cell at its refinement edge (v0,v1); children inherit the
  // parent's remaining edges as their refinement edges, so a cell with two or
  // three marked edges is split recursively. Midpoint lookups only ever hit
  // edges of the original mesh.
  std::vector<Cell> cells;
  cells.reserve(num_cells() + 3 * midpoint.size());
  const auto emit = [&](auto&& self, int a, int b, int c, int parent) -> void {
    const auto it = midpoint.find(pair_key(a, b));
    if (it == midpoint.end()) {
      Cell cell;
      cell.v = {a, b, c};
      cell.parent = parent;
      cells.push_back(cell);
      return;
    }
    const int m = it->second;
    self(self, c, a, m, parent);
    self(self, b, c, m, parent);
  };
  for (int c = 0; c < num_cells(); ++c)
    emit(emit, cells_[c].v[0], cells_[c].v[1], cells_[c].v[2], c);

  // Tag inheritance: halves of a split edge keep the parent tag; the bisector
  // edges introduced inside a cell are interior.
  std::unordered_map<std::uint64_t, int> tags;
  tags.reserve(edges_.size() * 2);
  for (const Edge& edge : edges_) {
    const int tag = static_cast<int>(edge.tag);
    const auto it = midpoint.find(pair_key(edge.a, edge.b));
    if (it == midpoint.end()) {
      tags[pair_key(edge.a, edge.b)] = tag;
    } else {
      tags[pair_key(edge.a, it->second)] = tag;
      tags[pair_key(it->second, edge.b)] = tag;
    }
  }
  return finalize(std::move(vertices), std::move(cells), geometry_, generation_ + 1,
                  [&tags](int a, int b) {
                    const auto it = tags.find(pair_key(a, b));
                    return it == tags.end() ? static_cast<int>(EdgeTag::Interior) : it->second;
                  });
}

Vec2 Mesh::point(int c, double l0, double l1, double l2) const {
  const Cell& cell = cells_[c];
  return l0 * vertex_pos(cell.v[0]) + l1 * vertex_pos(cell.v[1]) + l2 * vertex_pos(cell.v[2]);
}

double Mesh::cell_area(int c) const {
  const Cell& cell = cells_[c];
  return signed_area(vertex_pos(cell.v[0]), vertex_pos(cell.v[1]), vertex_pos(cell.v[2]));
}

double Mesh::cell_diameter(int c) const {
  const Cell& cell = cells_[c];
  double d = 0.0;
  for (int le = 0; le < 3; ++le)
    d = std::max(d, norm(vertex_pos(cell.v[kEdgeEnds[le][0]]) -
                         vertex_pos(cell.v[kEdgeEnds[le][1]])));
  return d;
}

Vec2 Mesh::cell_centroid(int c) const {
  const Cell& cell = cells_[c];
  return (1.0 / 3.0) *
         (vertex_pos(cell.v[0]) + vertex_pos(cell.v[1]) + vertex_pos(cell.v[2]));
}

double Mesh::edge_length(int e) const {
  return norm(vertex_pos(edges_[e].b) - vertex_pos(edges_[e].a));
}

Vec2 Mesh::edge_midpoint(int e) const {
  return 0.5 * (vertex_pos(edges_[e].a) + vertex_pos(edges_[e].b));
}

Vec2 Mesh::edge_tangent(int e) const {
  const Vec2 t = vertex_pos(edges_[e].b) - vertex_pos(edges_[e].a);
  const double len = norm(t);
  if (len <= 0.0) throw std::invalid_argument("degenerate edge");
  return (1.0 / len) * t;
}

Vec2 Mesh::edge_normal(int e) const {
  Vec2 n = rot_cw(edge_tangent(e));
  if (edges_[e].tag == EdgeTag::InterfaceGamma && n.x < 0.0) n = -n;
  return n;
}

Vec2 Mesh::outward_normal(int c, int le) const {
  const Cell& cell = cells_[c];
  const Vec2 a = vertex_pos(cell.v[kEdgeEnds[le][0]]);
  const Vec2 b = vertex_pos(cell.v[kEdgeEnds[le][1]]);
  // Local edges run counterclockwise around the cell, so the clockwise
  // rotation of the a->b direction points outward.
  const Vec2 t = b - a;
  return (1.0 / norm(t)) * rot_cw(t);
}

int Mesh::local_vertex(int c, int v) const {
  for (int i = 0; i < 3; ++i)
    if (cells_[c].v[i] == v) return i;
  throw std::invalid_argument("vertex not in cell");
}

int Mesh::local_edge(int c, int e) const {
  for (int i = 0; i < 3; ++i)
    if (cells_[c].edge[i] == e) return i;
  throw std::invalid_argument("edge not in cell");
}

int Mesh::count_edges(EdgeTag tag) const {
  int n = 0;
  for (const Edge& e : edges_)
    if (e.tag == tag) ++n;
  return n;
}

bool Mesh::conforming() const {
  std::vector<int> uses(num_edges(), 0);
  for (const Cell& cell : cells_) {
    if (signed_area(vertex_pos(cell.v[0]), vertex_pos(cell.v[1]), vertex_pos(cell.v[2])) <= 0.0)
      return false;
    for (int le = 0; le < 3; ++le) ++uses[cell.edge[le]];
  }
  for (int e = 0; e < num_edges(); ++e) {
    const bool boundary =
        edges_[e].tag == EdgeTag::DirichletBoundary || edges_[e].tag == EdgeTag::NeumannBoundary;
    if (uses[e] != (boundary ? 1 : 2)) return false;
    if (edges_[e].cell[0] < 0) return false;
    if ((edges_[e].cell[1] < 0) != boundary) return false;
  }
  return true;
}

double min_angle(const Mesh& mesh) {
  double amin = std::numeric_limits<double>::infinity();
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Cell& cell = mesh.cell(c);
    for (int i = 0; i < 3; ++i) {
      const Vec2 p = mesh.vertex_pos(cell.v[i]);
      const Vec2 u = mesh.vertex_pos(cell.v[(i + 1) % 3]) - p;
      const Vec2 w = mesh.vertex_pos(cell.v[(i + 2) % 3]) - p;
      amin = std::min(amin, std::acos(std::clamp(dot(u, w) / (norm(u) * norm(w)), -1.0, 1.0)));
    }
  }
  return amin;
}

double total_area(const Mesh& mesh) {
  double a = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) a += mesh.cell_area(c);
  return a;
}

void write_mesh(std::ostream& os, const Mesh& mesh) {
  const auto tag_name = [](EdgeTag t) {
    switch (t) {
      case EdgeTag::Interior: return "int";
      case EdgeTag::InterfaceGamma: return "gamma";
      case EdgeTag::DirichletBoundary: return "dir";
      case EdgeTag::NeumannBoundary: return "neu";
    }
    return "int";
  };
  os << "mesh " << mesh.num_vertices() << ' ' << mesh.num_cells() << ' ' << mesh.num_edges()
     << '\n';
  char buf[80];
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g\n", mesh.vertex(v).x, mesh.vertex(v).y);
    os << buf;
  }
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Cell& cell = mesh.cell(c);
    os << "c " << cell.v[0] << ' ' << cell.v[1] << ' ' << cell.v[2] << '\n';
  }
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    os << "e " << edge.a << ' ' << edge.b << ' ' << tag_name(edge.tag) << '\n';
  }
}

}  // namespace faultfem
