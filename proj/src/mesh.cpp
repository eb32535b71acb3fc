#include "dualmesh/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace dualmesh {

namespace {

// Local node triples of the outward-oriented faces of a positively-oriented
// tetrahedron (t0,t1,t2,t3); entry i is the face opposite node i.
constexpr int tet_opposite_face[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};

constexpr int tet_local_edges[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

std::uint64_t pack_pair(Index a, Index b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(b));
}

Vec cross(const double* u, const double* v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

double norm(const Vec& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

// Key for a face of an element: sorted node ids (one id in 2D is the
// partner of the other, so a 2-node edge; 3 nodes in 3D).
struct FaceKey {
  std::array<Index, 3> nodes;  // sorted; [2] = -1 in 2D
  bool operator==(const FaceKey&) const = default;
};

struct FaceKeyHash {
  std::size_t operator()(const FaceKey& f) const {
    std::uint64_t h = 1469598103934665603ull;
    for (Index n : f.nodes) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(n));
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

FaceKey make_face_key(const Index* nodes, int count) {
  FaceKey key{{-1, -1, -1}};
  for (int i = 0; i < count; ++i) key.nodes[static_cast<std::size_t>(i)] = nodes[i];
  std::sort(key.nodes.begin(), key.nodes.begin() + count);
  return key;
}

}  // namespace

Index EdgeList::edge_of(Index a, Index b) const {
  if (a > b) std::swap(a, b);
  if (a < 0 || static_cast<std::size_t>(a) + 1 >= origin_start.size()) return -1;
  std::size_t lo = origin_start[static_cast<std::size_t>(a)];
  std::size_t hi = origin_start[static_cast<std::size_t>(a) + 1];
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (edges[mid][1] < b)
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < origin_start[static_cast<std::size_t>(a) + 1] && edges[lo][1] == b)
    return static_cast<Index>(lo);
  return -1;
}

double element_volume(const Mesh& mesh, std::size_t e) {
  const Index* el = mesh.element(e);
  if (mesh.dim == 2) {
    const double* a = mesh.node(el[0]);
    const double* b = mesh.node(el[1]);
    const double* c = mesh.node(el[2]);
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]));
  }
  const double* a = mesh.node(el[0]);
  const double* b = mesh.node(el[1]);
  const double* c = mesh.node(el[2]);
  const double* d = mesh.node(el[3]);
  double u[3] = {b[0] - a[0], b[1] - a[1], b[2] - a[2]};
  double v[3] = {c[0] - a[0], c[1] - a[1], c[2] - a[2]};
  double w[3] = {d[0] - a[0], d[1] - a[1], d[2] - a[2]};
  Vec uv = cross(u, v);
  return (uv[0] * w[0] + uv[1] * w[1] + uv[2] * w[2]) / 6.0;
}

Vec opposite_face_normal(const Mesh& mesh, std::size_t e, int i) {
  const Index* el = mesh.element(e);
  if (mesh.dim == 2) {
    // Face opposite local node i is the edge from local i+1 to i+2; for a
    // counterclockwise triangle the outward rotation is (dy, -dx).
    const double* p = mesh.node(el[(i + 1) % 3]);
    const double* q = mesh.node(el[(i + 2) % 3]);
    return {q[1] - p[1], p[0] - q[0], 0.0};
  }
  const int* f = tet_opposite_face[i];
  const double* p0 = mesh.node(el[f[0]]);
  const double* p1 = mesh.node(el[f[1]]);
  const double* p2 = mesh.node(el[f[2]]);
  double d1[3] = {p1[0] - p0[0], p1[1] - p0[1], p1[2] - p0[2]};
  double d2[3] = {p2[0] - p0[0], p2[1] - p0[1], p2[2] - p0[2]};
  Vec c = cross(d1, d2);
  return {0.5 * c[0], 0.5 * c[1], 0.5 * c[2]};
}

Vec boundary_normal(const Mesh& mesh, std::size_t b) {
  const Index* bl = mesh.boundary_element(b);
  if (mesh.dim == 2) {
    const double* j = mesh.node(bl[0]);
    const double* k = mesh.node(bl[1]);
    return {k[1] - j[1], j[0] - k[0], 0.0};
  }
  const double* j = mesh.node(bl[0]);
  const double* r = mesh.node(bl[1]);
  const double* l = mesh.node(bl[2]);
  double d1[3] = {r[0] - j[0], r[1] - j[1], r[2] - j[2]};
  double d2[3] = {l[0] - j[0], l[1] - j[1], l[2] - j[2]};
  Vec c = cross(d1, d2);
  return {0.5 * c[0], 0.5 * c[1], 0.5 * c[2]};
}

ValidationOutcome validate_mesh(const Mesh& mesh) {
  ValidationOutcome out;
  auto fail = [&out](std::string msg) { out.violations.push_back(std::move(msg)); };

  if (mesh.dim != 2 && mesh.dim != 3) {
    fail("dim must be 2 or 3, got " + std::to_string(mesh.dim));
    return out;
  }
  const Index nn = static_cast<Index>(mesh.num_nodes());
  const std::size_t ne = mesh.num_elements();
  const std::size_t nb = mesh.num_boundary();
  const int npe = mesh.dim + 1;
  const int npb = mesh.dim;

  if (mesh.coords.size() % static_cast<std::size_t>(mesh.dim) != 0)
    fail("coordinate array length is not a multiple of dim");
  if (mesh.elements.size() % static_cast<std::size_t>(npe) != 0)
    fail("element array length is not a multiple of dim+1");
  if (mesh.boundary.size() % static_cast<std::size_t>(npb) != 0)
    fail("boundary array length is not a multiple of dim");
  if (!out.violations.empty()) return out;

  bool indices_ok = true;
  for (std::size_t e = 0; e < ne; ++e) {
    const Index* el = mesh.element(e);
    for (int i = 0; i < npe; ++i) {
      if (el[i] < 0 || el[i] >= nn) {
        fail("out-of-range node index in element " + std::to_string(e + 1));
        indices_ok = false;
        break;
      }
    }
  }
  for (std::size_t b = 0; b < nb; ++b) {
    const Index* bl = mesh.boundary_element(b);
    for (int i = 0; i < npb; ++i) {
      if (bl[i] < 0 || bl[i] >= nn) {
        fail("out-of-range node index in boundary element " + std::to_string(b + 1));
        indices_ok = false;
        break;
      }
    }
  }
  if (!indices_ok) return out;

  out.volume_signs.resize(ne, 0);
  for (std::size_t e = 0; e < ne; ++e) {
    double v = element_volume(mesh, e);
    out.volume_signs[e] = static_cast<signed char>(v > 0.0 ? 1 : (v < 0.0 ? -1 : 0));
    if (!(v > 0.0)) fail("nonpositive volume, element " + std::to_string(e + 1));
  }

  // Face incidence: interior faces must be shared by exactly two elements;
  // single-incidence faces form the mesh boundary.
  std::unordered_map<FaceKey, std::pair<int, std::size_t>, FaceKeyHash> incidence;
  incidence.reserve(ne * static_cast<std::size_t>(npe));
  for (std::size_t e = 0; e < ne; ++e) {
    const Index* el = mesh.element(e);
    for (int i = 0; i < npe; ++i) {
      Index face[3] = {-1, -1, -1};
      if (mesh.dim == 2) {
        face[0] = el[(i + 1) % 3];
        face[1] = el[(i + 2) % 3];
      } else {
        const int* f = tet_opposite_face[i];
        face[0] = el[f[0]];
        face[1] = el[f[1]];
        face[2] = el[f[2]];
      }
      FaceKey key = make_face_key(face, npb);
      auto [it, inserted] = incidence.try_emplace(key, std::make_pair(0, e));
      it->second.first += 1;
      if (it->second.first > 2)
        fail("face shared by more than two elements, element " + std::to_string(e + 1));
    }
  }

  std::unordered_set<FaceKey, FaceKeyHash> seen_boundary;
  seen_boundary.reserve(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    const Index* bl = mesh.boundary_element(b);
    FaceKey key = make_face_key(bl, npb);
    auto it = incidence.find(key);
    if (it == incidence.end()) {
      fail("boundary element " + std::to_string(b + 1) + " is not a face of any element");
      continue;
    }
    if (it->second.first != 1) {
      fail("boundary element " + std::to_string(b + 1) + " matches an interior face of element " +
           std::to_string(it->second.second + 1));
      continue;
    }
    if (!seen_boundary.insert(key).second) {
      fail("duplicate boundary element " + std::to_string(b + 1));
      continue;
    }
    // Outward check against the owning element: the directed area must
    // point away from the element node opposite this face.
    std::size_t owner = it->second.second;
    Vec n = boundary_normal(mesh, b);
    const Index* el = mesh.element(owner);
    Index opp = -1;
    for (int i = 0; i < npe; ++i) {
      bool on_face = false;
      for (int f = 0; f < npb; ++f) on_face = on_face || (el[i] == bl[f]);
      if (!on_face) opp = el[i];
    }
    const double* xo = mesh.node(opp);
    const double* xf = mesh.node(bl[0]);
    double dot = 0.0;
    for (int d = 0; d < mesh.dim; ++d) dot += n[static_cast<std::size_t>(d)] * (xo[d] - xf[d]);
    if (!(dot < 0.0))
      fail("boundary element " + std::to_string(b + 1) + " has inward orientation (element " +
           std::to_string(owner + 1) + ")");
  }

  // Every single-incidence face must be covered, or downstream boundary
  // corrections would be incomplete.
  std::size_t exposed = 0;
  for (const auto& [key, inc] : incidence)
    if (inc.first == 1 && !seen_boundary.count(key)) ++exposed;
  if (exposed > 0)
    fail(std::to_string(exposed) + " mesh-boundary face(s) missing from the boundary list");

  return out;
}

EdgeList build_edges(const Mesh& mesh) {
  const std::size_t ne = mesh.num_elements();
  std::unordered_set<std::uint64_t> pairs;
  pairs.reserve(ne * (mesh.dim == 2 ? 3u : 6u));
  if (mesh.dim == 2) {
    for (std::size_t e = 0; e < ne; ++e) {
      const Index* el = mesh.element(e);
      pairs.insert(pack_pair(el[0], el[1]));
      pairs.insert(pack_pair(el[1], el[2]));
      pairs.insert(pack_pair(el[2], el[0]));
    }
  } else {
    for (std::size_t e = 0; e < ne; ++e) {
      const Index* el = mesh.element(e);
      for (const int* le : tet_local_edges) pairs.insert(pack_pair(el[le[0]], el[le[1]]));
    }
  }

  EdgeList list;
  list.edges.reserve(pairs.size());
  for (std::uint64_t p : pairs)
    list.edges.push_back({static_cast<Index>(p >> 32), static_cast<Index>(p & 0xffffffffu)});
  std::sort(list.edges.begin(), list.edges.end());

  list.origin_start.assign(mesh.num_nodes() + 1, 0);
  for (const auto& jk : list.edges) list.origin_start[static_cast<std::size_t>(jk[0]) + 1] += 1;
  for (std::size_t j = 1; j < list.origin_start.size(); ++j)
    list.origin_start[j] += list.origin_start[j - 1];
  return list;
}

std::vector<Index> derive_boundary_faces(const Mesh& mesh) {
  const std::size_t ne = mesh.num_elements();
  const int npe = mesh.dim + 1;
  const int npb = mesh.dim;

  // Count incidence, remembering the outward-ordered nodes from the first
  // (and for boundary faces, only) owning element.
  std::unordered_map<FaceKey, std::pair<int, std::array<Index, 3>>, FaceKeyHash> incidence;
  incidence.reserve(ne * static_cast<std::size_t>(npe));
  for (std::size_t e = 0; e < ne; ++e) {
    const Index* el = mesh.element(e);
    for (int i = 0; i < npe; ++i) {
      std::array<Index, 3> oriented{-1, -1, -1};
      if (mesh.dim == 2) {
        oriented[0] = el[(i + 1) % 3];
        oriented[1] = el[(i + 2) % 3];
      } else {
        const int* f = tet_opposite_face[i];
        oriented = {el[f[0]], el[f[1]], el[f[2]]};
      }
      FaceKey key = make_face_key(oriented.data(), npb);
      auto [it, inserted] = incidence.try_emplace(key, std::make_pair(0, oriented));
      it->second.first += 1;
    }
  }

  std::vector<std::array<Index, 3>> faces;
  for (const auto& [key, inc] : incidence)
    if (inc.first == 1) faces.push_back(inc.second);
  std::sort(faces.begin(), faces.end());  // deterministic order

  std::vector<Index> flat;
  flat.reserve(faces.size() * static_cast<std::size_t>(npb));
  for (const auto& f : faces)
    for (int i = 0; i < npb; ++i) flat.push_back(f[static_cast<std::size_t>(i)]);
  return flat;
}

double max_face_area(const Mesh& mesh) {
  double m = 0.0;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e)
    for (int i = 0; i <= mesh.dim; ++i) m = std::max(m, norm(opposite_face_normal(mesh, e, i)));
  return m;
}

double max_element_volume(const Mesh& mesh) {
  double m = 0.0;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e)
    m = std::max(m, std::abs(element_volume(mesh, e)));
  return m;
}

double total_volume(const Mesh& mesh) {
  double sum = 0.0;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) sum += element_volume(mesh, e);
  return sum;
}

std::vector<bool> boundary_node_mask(const Mesh& mesh) {
  std::vector<bool> mask(mesh.num_nodes(), false);
  for (Index n : mesh.boundary) mask[static_cast<std::size_t>(n)] = true;
  return mask;
}

}  // namespace dualmesh
