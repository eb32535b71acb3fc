#ifndef DUALMESH_MESH_HPP
#define DUALMESH_MESH_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace dualmesh {

using Index = std::int32_t;
using Vec = std::array<double, 3>;  // third component unused (zero) in 2D

// Simplex mesh container: triangles (dim=2) or tetrahedra (dim=3), plus
// oriented boundary elements (edges / triangles) whose directed areas
// point out of the domain. Node indices are 0-based; file I/O converts
// from the 1-based external format.
//
// Elements are stored in canonical positive orientation: counterclockwise
// triangles, positively-oriented tetrahedra. validate_mesh rejects
// anything else rather than silently reordering.
struct Mesh {
  int dim = 2;                  // 2 or 3
  std::vector<double> coords;   // dim doubles per node
  std::vector<Index> elements;  // dim+1 indices per element
  std::vector<Index> boundary;  // dim indices per boundary element

  std::size_t num_nodes() const { return coords.size() / static_cast<std::size_t>(dim); }
  std::size_t num_elements() const {
    return elements.size() / static_cast<std::size_t>(dim + 1);
  }
  std::size_t num_boundary() const { return boundary.size() / static_cast<std::size_t>(dim); }

  const double* node(Index j) const {
    return coords.data() + static_cast<std::size_t>(dim) * static_cast<std::size_t>(j);
  }
  const Index* element(std::size_t e) const {
    return elements.data() + static_cast<std::size_t>(dim + 1) * e;
  }
  const Index* boundary_element(std::size_t b) const {
    return boundary.data() + static_cast<std::size_t>(dim) * b;
  }
};

// Deduplicated element edges, each stored as (j, k) with j < k and sorted
// lexicographically. A CSR index over origin nodes backs the pair lookup.
struct EdgeList {
  std::vector<std::array<Index, 2>> edges;
  std::vector<std::size_t> origin_start;  // size num_nodes + 1

  std::size_t size() const { return edges.size(); }

  // Index of the edge joining a and b (order-insensitive); -1 if absent.
  Index edge_of(Index a, Index b) const;
};

struct ValidationOutcome {
  std::vector<std::string> violations;          // empty means valid
  std::vector<signed char> volume_signs;        // sign of each element's volume
  bool valid() const { return violations.empty(); }
};

// Checks every Mesh invariant: index ranges, positive element volumes,
// interior faces shared by exactly two elements, boundary elements that
// each match a single-incidence face and point outward.
ValidationOutcome validate_mesh(const Mesh& mesh);

// Extracts the unique element edges as canonically-oriented (min, max)
// pairs in lexicographic order; the result is independent of element
// ordering in the input.
EdgeList build_edges(const Mesh& mesh);

// Signed area (dim=2) or signed volume (dim=3); positive for valid meshes.
double element_volume(const Mesh& mesh, std::size_t e);

// Outward directed area of the face of element e opposite its i-th node.
// Sums to the zero vector over i for any element.
Vec opposite_face_normal(const Mesh& mesh, std::size_t e, int i);

// Outward directed area of boundary element b: (y_k - y_j, x_j - x_k) for
// a boundary edge (j, k); half the cross product of the two face edge
// vectors for a boundary triangle.
Vec boundary_normal(const Mesh& mesh, std::size_t b);

// Single-incidence element faces, oriented outward from the owning
// element. Used when an input file carries no boundary section.
std::vector<Index> derive_boundary_faces(const Mesh& mesh);

// Largest face directed-area magnitude over all elements; the scale used
// by relative metric tolerances (edge length in 2D, face area in 3D).
double max_face_area(const Mesh& mesh);

double max_element_volume(const Mesh& mesh);
double total_volume(const Mesh& mesh);

// Nodes that appear in at least one boundary element.
std::vector<bool> boundary_node_mask(const Mesh& mesh);

}  // namespace dualmesh

#endif
