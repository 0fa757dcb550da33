#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "faultfem/geometry.hpp"

namespace faultfem {

enum class EdgeTag { Interior, InterfaceGamma, DirichletBoundary, NeumannBoundary };

enum class BoundaryLayout {
  AllDirichlet,     // every boundary edge Dirichlet
  TopBottomNeumann  // y = 0 and y = 1 Neumann, x = 0 and x = 1 Dirichlet
};

/// Fault segment {x = 1/2} x [gamma_y0, gamma_y1] plus the boundary tag layout.
struct ProblemGeometry {
  double gamma_y0 = 0.25;
  double gamma_y1 = 0.75;
  BoundaryLayout layout = BoundaryLayout::AllDirichlet;

  static ProblemGeometry problem1() { return {0.25, 0.75, BoundaryLayout::AllDirichlet}; }
  static ProblemGeometry problem2() { return {0.25, 0.75, BoundaryLayout::TopBottomNeumann}; }
  /// Fault spanning the whole height; used by exactness tests whose solution
  /// jumps across the entire line x = 1/2.
  static ProblemGeometry full_fault() { return {0.0, 1.0, BoundaryLayout::AllDirichlet}; }
};

struct Vertex {
  double x = 0.0;
  double y = 0.0;
};

/// Triangle with counterclockwise vertices. The refinement edge for
/// newest-vertex bisection is always (v[0], v[1]); local edge i is the edge
/// opposite v[i], so the refinement edge is local edge 2.
struct Cell {
  std::array<int, 3> v{};
  std::array<int, 3> edge{};
  int parent = -1;  // cell id in the parent mesh, -1 on generation 0
};

struct Edge {
  int a = -1;  // vertex ids, a < b
  int b = -1;
  EdgeTag tag = EdgeTag::Interior;
  // Adjacent cells. For interior and Gamma edges cell[0] is the "plus" side,
  // the cell out of which edge_normal() points; for boundary edges cell[0] is
  // the unique cell and cell[1] = -1.
  std::array<int, 2> cell{-1, -1};
};

/// Conforming triangle mesh of the unit square, aligned with the fault and
/// with the solution-regularity lines y = 1/4, y = 3/4. Immutable after
/// construction; refine() returns a new mesh.
class Mesh {
 public:
  /// Structured n x n mesh (n a positive multiple of 4), each square split
  /// along the lower-left/upper-right diagonal. Throws std::invalid_argument
  /// on an invalid n.
  static Mesh structured(int n, const ProblemGeometry& geometry);

  /// Build from raw vertex/cell lists (cells CCW, refinement edge (v0,v1)).
  /// Edge tags are derived geometrically from `geometry`. Intended for tests
  /// and tools; structured() uses the same path.
  static Mesh from_cells(std::vector<Vertex> vertices,
                         std::vector<std::array<int, 3>> cells,
                         const ProblemGeometry& geometry);

  /// Newest-vertex bisection of the marked cells plus recursive closure.
  /// Every marked cell is bisected at least once, tags are inherited, and the
  /// result is conforming. marked may be in any order; duplicates are fine.
  Mesh refine(const std::vector<int>& marked) const;

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int generation() const { return generation_; }
  const ProblemGeometry& geometry() const { return geometry_; }

  const Vertex& vertex(int v) const { return vertices_[v]; }
  const Cell& cell(int c) const { return cells_[c]; }
  const Edge& edge(int e) const { return edges_[e]; }

  Vec2 vertex_pos(int v) const { return {vertices_[v].x, vertices_[v].y}; }

  /// Physical point of barycentric coordinates (l0,l1,l2) in cell c.
  Vec2 point(int c, double l0, double l1, double l2) const;

  double cell_area(int c) const;
  double cell_diameter(int c) const;  // longest edge
  Vec2 cell_centroid(int c) const;

  double edge_length(int e) const;
  Vec2 edge_midpoint(int e) const;

  /// Unit normal with a fixed global orientation: rotate the a->b tangent by
  /// -90 degrees, except that InterfaceGamma normals are forced to point from
  /// {x < 1/2} into {x > 1/2}, i.e. equal (1,0) for the vertical fault.
  Vec2 edge_normal(int e) const;

  /// Unit tangent from the lower-id endpoint a to b; arc length for edge
  /// moment functions is measured from a.
  Vec2 edge_tangent(int e) const;

  int edge_cell_plus(int e) const { return edges_[e].cell[0]; }
  int edge_cell_minus(int e) const { return edges_[e].cell[1]; }
  bool is_boundary_edge(int e) const { return edges_[e].cell[1] < 0; }

  /// Outward unit normal of cell c on its local edge le.
  Vec2 outward_normal(int c, int le) const;

  /// Local index (0..2) of global vertex v within cell c; throws if absent.
  int local_vertex(int c, int v) const;

  /// Local index (0..2) of global edge e within cell c; throws if absent.
  int local_edge(int c, int e) const;

  int count_edges(EdgeTag tag) const;

  /// Every interior/Gamma edge has exactly two cells, every boundary edge one,
  /// and all cells have positive area.
  bool conforming() const;

 private:
  Mesh() = default;

  // Shared finalization: builds the edge table in deterministic (cell, local
  // edge) first-seen order, assigns tags, orients plus/minus sides, validates.
  // tag_hint(a, b) returns the inherited tag or -1 to derive geometrically.
  template <class TagHint>
  static Mesh finalize(std::vector<Vertex> vertices, std::vector<Cell> cells,
                       const ProblemGeometry& geometry, int generation,
                       TagHint&& tag_hint);

  EdgeTag derive_tag_geometric(int a, int b, bool boundary) const;

  std::vector<Vertex> vertices_;
  std::vector<Cell> cells_;
  std::vector<Edge> edges_;
  ProblemGeometry geometry_;
  int generation_ = 0;
};

/// Smallest interior angle over all cells (radians).
double min_angle(const Mesh& mesh);

double total_area(const Mesh& mesh);

/// Text dump: "mesh <nv> <nc> <ne>" then v/c/e lines, tags {int,gamma,dir,neu}.
void write_mesh(std::ostream& os, const Mesh& mesh);

}  // namespace faultfem
