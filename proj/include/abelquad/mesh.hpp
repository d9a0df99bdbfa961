#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "abelquad/core.hpp"

namespace abelquad {

// ---------------------------------------------------------------------------
// Halfedge mesh
//
// Faces are oriented counterclockwise and restricted to degree 3 or 4.
// Every halfedge has a twin; halfedges bounding a hole carry face == kInvalid
// and are linked into boundary next-cycles, so rotation around any vertex is
// always closed.
// ---------------------------------------------------------------------------

class Mesh {
public:
    struct Halfedge {
        int origin = kInvalid;
        int twin = kInvalid;
        int next = kInvalid;
        int prev = kInvalid;
        int face = kInvalid;  // kInvalid on boundary halfedges
        int edge = kInvalid;
    };

    std::vector<Halfedge> halfedges;
    std::vector<int> vertex_halfedge;  // one outgoing halfedge per vertex
    std::vector<int> face_halfedge;    // one halfedge per face
    std::vector<int> edge_halfedge;    // representative halfedge per edge
    std::vector<Eigen::Vector3d> positions;
    bool has_positions = false;

    int n_vertices() const { return static_cast<int>(vertex_halfedge.size()); }
    int n_faces() const { return static_cast<int>(face_halfedge.size()); }
    int n_edges() const { return static_cast<int>(edge_halfedge.size()); }
    int n_halfedges() const { return static_cast<int>(halfedges.size()); }

    int next(int h) const { return halfedges[h].next; }
    int prev(int h) const { return halfedges[h].prev; }
    int twin(int h) const { return halfedges[h].twin; }
    int origin(int h) const { return halfedges[h].origin; }
    int head(int h) const { return halfedges[halfedges[h].twin].origin; }
    int face(int h) const { return halfedges[h].face; }
    int edge(int h) const { return halfedges[h].edge; }

    bool is_boundary_halfedge(int h) const { return halfedges[h].face == kInvalid; }
    bool is_boundary_edge(int e) const
    {
        int h = edge_halfedge[e];
        return is_boundary_halfedge(h) || is_boundary_halfedge(twin(h));
    }

    /// Rotate counterclockwise around origin(h).
    int rot_ccw(int h) const { return twin(prev(h)); }
    /// Rotate clockwise around origin(h).
    int rot_cw(int h) const { return next(twin(h)); }

    int degree(int f) const
    {
        int h = face_halfedge[f], d = 0;
        int cur = h;
        do {
            ++d;
            cur = next(cur);
        } while (cur != h);
        return d;
    }

    std::vector<int> face_halfedges(int f) const
    {
        std::vector<int> out;
        int h = face_halfedge[f], cur = h;
        do {
            out.push_back(cur);
            cur = next(cur);
        } while (cur != h);
        return out;
    }

    std::vector<int> face_vertices(int f) const
    {
        std::vector<int> out;
        for (int h : face_halfedges(f)) out.push_back(origin(h));
        return out;
    }

    /// Outgoing halfedges of v in counterclockwise order.
    std::vector<int> outgoing(int v) const
    {
        std::vector<int> out;
        int h0 = vertex_halfedge[v], h = h0;
        do {
            out.push_back(h);
            h = rot_ccw(h);
        } while (h != h0);
        return out;
    }

    int valence(int v) const
    {
        int h0 = vertex_halfedge[v], h = h0, k = 0;
        do {
            ++k;
            h = rot_ccw(h);
        } while (h != h0);
        return k;
    }

    bool is_boundary_vertex(int v) const
    {
        for (int h : outgoing(v))
            if (is_boundary_halfedge(h) || is_boundary_halfedge(twin(h))) return true;
        return false;
    }

    bool is_closed() const
    {
        for (const auto& he : halfedges)
            if (he.face == kInvalid) return false;
        return true;
    }

    int euler_characteristic() const { return n_vertices() - n_edges() + n_faces(); }

    /// Genus of a closed surface.
    int genus() const
    {
        if (!is_closed()) throw OpenMeshError("genus requires a closed mesh");
        return (2 - euler_characteristic()) / 2;
    }

    int n_boundary_loops() const
    {
        std::vector<char> seen(halfedges.size(), 0);
        int loops = 0;
        for (int h = 0; h < n_halfedges(); ++h) {
            if (!is_boundary_halfedge(h) || seen[h]) continue;
            ++loops;
            int cur = h;
            do {
                seen[cur] = 1;
                cur = next(cur);
            } while (cur != h);
        }
        return loops;
    }

    /// Vertices of one boundary loop, in boundary-cycle order, starting from
    /// the lowest-id boundary vertex.
    std::vector<int> boundary_loop() const
    {
        int start = kInvalid;
        for (int h = 0; h < n_halfedges(); ++h) {
            if (!is_boundary_halfedge(h)) continue;
            if (start == kInvalid || origin(h) < origin(start)) start = h;
        }
        if (start == kInvalid) return {};
        std::vector<int> out;
        int cur = start;
        do {
            out.push_back(origin(cur));
            cur = next(cur);
        } while (cur != start);
        return out;
    }

    Eigen::Vector3d edge_vector(int h) const
    {
        return positions[head(h)] - positions[origin(h)];
    }

    double edge_length(int e) const
    {
        return edge_vector(edge_halfedge[e]).norm();
    }

    std::vector<int> valence_histogram() const
    {
        std::vector<int> hist;
        for (int v = 0; v < n_vertices(); ++v) {
            int k = valence(v);
            if (k >= static_cast<int>(hist.size())) hist.resize(k + 1, 0);
            hist[k]++;
        }
        return hist;
    }

    static Mesh from_polygons(const std::vector<Eigen::Vector3d>& pos,
                              const std::vector<std::vector<int>>& faces,
                              bool with_positions = true);
};

inline Mesh Mesh::from_polygons(const std::vector<Eigen::Vector3d>& pos,
                                const std::vector<std::vector<int>>& faces,
                                bool with_positions)
{
    if (faces.empty()) throw EmptyMeshError("mesh has no faces");

    Mesh m;
    m.positions = pos;
    m.has_positions = with_positions;
    m.vertex_halfedge.assign(pos.size(), kInvalid);

    for (const auto& f : faces) {
        if (f.size() != 3 && f.size() != 4)
            throw UnsupportedFaceDegree(
                "face of degree " + std::to_string(f.size()) + " (only 3 or 4 supported)");
        for (int v : f)
            if (v < 0 || v >= static_cast<int>(pos.size()))
                throw MeshError("face references vertex " + std::to_string(v) +
                                " out of range");
    }

    // Interior halfedges, one per face corner.
    std::map<std::pair<int, int>, int> directed;  // (origin, head) -> halfedge
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
        const auto& poly = faces[f];
        int d = static_cast<int>(poly.size());
        int base = m.n_halfedges();
        for (int i = 0; i < d; ++i) {
            Halfedge he;
            he.origin = poly[i];
            he.face = f;
            he.next = base + (i + 1) % d;
            he.prev = base + (i + d - 1) % d;
            m.halfedges.push_back(he);
            int u = poly[i], v = poly[(i + 1) % d];
            if (u == v) throw MeshError("degenerate face edge at vertex " + std::to_string(u));
            auto key = std::make_pair(u, v);
            if (directed.count(key)) {
                // A repeated directed edge means two faces traverse it the
                // same way: inconsistent orientation (or worse).
                auto rkey = std::make_pair(v, u);
                if (directed.count(rkey))
                    throw NonManifoldError("edge (" + std::to_string(u) + "," +
                                           std::to_string(v) + ") has more than two incident faces");
                throw OrientationError("faces disagree on orientation across edge (" +
                                       std::to_string(u) + "," + std::to_string(v) + ")");
            }
            directed[key] = base + i;
        }
        m.face_halfedge.push_back(base);
    }

    // Twin matching; unmatched halfedges get boundary twins.
    for (auto& [key, h] : directed) {
        auto rkey = std::make_pair(key.second, key.first);
        auto it = directed.find(rkey);
        if (it != directed.end()) {
            m.halfedges[h].twin = it->second;
        }
    }
    std::vector<std::pair<int, int>> open;  // (halfedge, head)
    for (auto& [key, h] : directed)
        if (m.halfedges[h].twin == kInvalid) open.push_back({h, key.second});
    for (auto& [h, headv] : open) {
        Halfedge bhe;
        bhe.origin = headv;
        bhe.face = kInvalid;
        int bh = m.n_halfedges();
        bhe.twin = h;
        m.halfedges.push_back(bhe);
        m.halfedges[h].twin = bh;
    }

    // Link boundary halfedges into loops: for each boundary halfedge b=(u->v),
    // next(b) is the unique boundary halfedge with origin v. Uniqueness is a
    // manifoldness condition and is checked.
    {
        std::map<int, std::vector<int>> boundary_at;  // origin -> boundary halfedges
        for (int h = 0; h < m.n_halfedges(); ++h)
            if (m.halfedges[h].face == kInvalid)
                boundary_at[m.halfedges[h].origin].push_back(h);
        for (auto& [v, hs] : boundary_at)
            if (hs.size() > 1)
                throw NonManifoldError("vertex " + std::to_string(v) +
                                       " lies on more than one boundary wedge");
        for (int h = 0; h < m.n_halfedges(); ++h) {
            if (m.halfedges[h].face != kInvalid) continue;
            int v = m.halfedges[m.halfedges[h].twin].origin;  // head(h)
            auto it = boundary_at.find(v);
            if (it == boundary_at.end())
                throw NonManifoldError("boundary does not close at vertex " + std::to_string(v));
            int nb = it->second.front();
            m.halfedges[h].next = nb;
            m.halfedges[nb].prev = h;
        }
    }

    // Edges.
    for (int h = 0; h < m.n_halfedges(); ++h) {
        if (m.halfedges[h].edge != kInvalid) continue;
        int e = m.n_edges();
        m.halfedges[h].edge = e;
        m.halfedges[m.halfedges[h].twin].edge = e;
        m.edge_halfedge.push_back(h);
    }

    // Vertex halfedges. Interior halfedges were created first, so the first
    // outgoing halfedge in scan order is interior whenever one exists.
    for (int h = 0; h < m.n_halfedges(); ++h) {
        int v = m.halfedges[h].origin;
        if (m.vertex_halfedge[v] == kInvalid) m.vertex_halfedge[v] = h;
    }
    for (int v = 0; v < m.n_vertices(); ++v)
        if (m.vertex_halfedge[v] == kInvalid)
            throw MeshError("isolated vertex " + std::to_string(v));

    // Vertex manifoldness: the rotation fan at v must reach every halfedge
    // with origin v.
    {
        std::vector<int> out_count(m.n_vertices(), 0);
        for (const auto& he : m.halfedges) out_count[he.origin]++;
        for (int v = 0; v < m.n_vertices(); ++v) {
            int h0 = m.vertex_halfedge[v], h = h0, k = 0;
            do {
                ++k;
                h = m.halfedges[m.halfedges[h].prev].twin;
                if (k > out_count[v]) break;
            } while (h != h0);
            if (k != out_count[v])
                throw NonManifoldError("pinched (non-manifold) vertex " + std::to_string(v));
        }
    }

    // Connectivity over faces.
    {
        std::vector<char> seen(m.n_faces(), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int reached = 1;
        while (!stack.empty()) {
            int f = stack.back();
            stack.pop_back();
            for (int h : m.face_halfedges(f)) {
                int g = m.halfedges[m.halfedges[h].twin].face;
                if (g != kInvalid && !seen[g]) {
                    seen[g] = 1;
                    ++reached;
                    stack.push_back(g);
                }
            }
        }
        if (reached != m.n_faces()) throw MeshError("mesh is not connected");
    }

    return m;
}

// ---------------------------------------------------------------------------
// OBJ I/O
// ---------------------------------------------------------------------------

inline Mesh load_obj(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<Eigen::Vector3d> pos;
    std::vector<std::vector<int>> faces;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (tag == "v") {
            double x = 0, y = 0, z = 0;
            ss >> x >> y >> z;
            pos.emplace_back(x, y, z);
        } else if (tag == "f") {
            std::vector<int> f;
            std::string tok;
            while (ss >> tok) {
                // accept v, v/t, v//n, v/t/n
                size_t slash = tok.find('/');
                int idx = std::stoi(slash == std::string::npos ? tok : tok.substr(0, slash));
                if (idx < 0) idx = static_cast<int>(pos.size()) + idx + 1;
                f.push_back(idx - 1);
            }
            if (!f.empty()) faces.push_back(std::move(f));
        }
    }
    if (pos.empty() || faces.empty()) throw EmptyMeshError("no geometry in " + path);
    return Mesh::from_polygons(pos, faces);
}

/// Writes v/f records; when `uv` is non-null it must hold one complex UV per
/// face corner (outer index = face, inner order = face_halfedges order) and
/// vt/f v/t records are emitted.
inline void save_obj(const Mesh& m, const std::string& path,
                     const std::vector<std::vector<cplx>>* uv = nullptr)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    char buf[256];
    for (const auto& p : m.positions) {
        std::snprintf(buf, sizeof(buf), "v %.17g %.17g %.17g\n", p.x(), p.y(), p.z());
        out << buf;
    }
    if (uv) {
        for (int f = 0; f < m.n_faces(); ++f)
            for (const cplx& w : (*uv)[f]) {
                std::snprintf(buf, sizeof(buf), "vt %.17g %.17g\n", w.real(), w.imag());
                out << buf;
            }
    }
    int t = 1;
    for (int f = 0; f < m.n_faces(); ++f) {
        out << "f";
        for (int v : m.face_vertices(f)) {
            if (uv)
                out << ' ' << (v + 1) << '/' << t++;
            else
                out << ' ' << (v + 1);
        }
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// Divisors
// ---------------------------------------------------------------------------

/// Finite formal integer combination of sites. Entries are kept sorted with
/// nonzero orders and distinct sites.
template <class Site>
class DivisorT {
public:
    struct Entry {
        Site site;
        int order;
    };

    DivisorT() = default;
    explicit DivisorT(std::vector<Entry> entries)
    {
        for (auto& e : entries) add(e.site, e.order);
    }

    void add(const Site& s, int order)
    {
        if (order == 0) return;
        auto it = std::find_if(entries_.begin(), entries_.end(),
                               [&](const Entry& e) { return e.site == s; });
        if (it == entries_.end()) {
            entries_.push_back({s, order});
            sort();
        } else {
            it->order += order;
            if (it->order == 0) entries_.erase(it);
        }
    }

    int order_at(const Site& s) const
    {
        for (const auto& e : entries_)
            if (e.site == s) return e.order;
        return 0;
    }

    int degree() const
    {
        int d = 0;
        for (const auto& e : entries_) d += e.order;
        return d;
    }

    const std::vector<Entry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    size_t size() const { return entries_.size(); }

    DivisorT operator+(const DivisorT& o) const
    {
        DivisorT r = *this;
        for (const auto& e : o.entries_) r.add(e.site, e.order);
        return r;
    }
    DivisorT operator-(const DivisorT& o) const
    {
        DivisorT r = *this;
        for (const auto& e : o.entries_) r.add(e.site, -e.order);
        return r;
    }
    DivisorT operator*(int k) const
    {
        DivisorT r;
        if (k == 0) return r;
        for (const auto& e : entries_) r.add(e.site, k * e.order);
        return r;
    }
    DivisorT operator-() const { return *this * -1; }
    bool operator==(const DivisorT& o) const
    {
        if (entries_.size() != o.entries_.size()) return false;
        for (size_t i = 0; i < entries_.size(); ++i)
            if (!(entries_[i].site == o.entries_[i].site) ||
                entries_[i].order != o.entries_[i].order)
                return false;
        return true;
    }

private:
    void sort()
    {
        std::sort(entries_.begin(), entries_.end(),
                  [](const Entry& a, const Entry& b) {
                      if constexpr (std::is_same_v<Site, cplx>) {
                          return a.site.real() != b.site.real()
                                     ? a.site.real() < b.site.real()
                                     : a.site.imag() < b.site.imag();
                      } else {
                          return a.site < b.site;
                      }
                  });
    }

    std::vector<Entry> entries_;
};

using Divisor = DivisorT<int>;         // sites are vertex ids
using PlanarDivisor = DivisorT<cplx>;  // sites are points in the plane

inline nlohmann::ordered_json divisor_to_json(const Divisor& d)
{
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const auto& e : d.entries())
        entries.push_back({{"vertex", e.site}, {"order", e.order}});
    return {{"entries", entries}};
}

inline Divisor divisor_from_json(const nlohmann::json& j)
{
    Divisor d;
    for (const auto& e : j.at("entries"))
        d.add(e.at("vertex").get<int>(), e.at("order").get<int>());
    return d;
}

inline Divisor load_divisor(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return divisor_from_json(j);
}

// ---------------------------------------------------------------------------
// Quad-mesh singularity bookkeeping
// ---------------------------------------------------------------------------

inline bool all_faces_quad(const Mesh& m)
{
    for (int f = 0; f < m.n_faces(); ++f)
        if (m.degree(f) != 4) return false;
    return true;
}

/// Divisor of a closed quad mesh: one entry of order valence-4 per singular
/// vertex.
inline Divisor divisor_of_quad_mesh(const Mesh& m)
{
    if (!m.is_closed()) throw OpenMeshError("quad-mesh divisor requires a closed mesh");
    if (!all_faces_quad(m)) throw UnsupportedFaceDegree("mesh has a non-quad face");
    Divisor d;
    for (int v = 0; v < m.n_vertices(); ++v) {
        int k = m.valence(v);
        if (k != 4) d.add(v, k - 4);
    }
    return d;
}

struct GaussBonnetReport {
    long long lhs = 0;  // sum over vertices of (4 - valence)
    long long rhs = 0;  // 4 * Euler characteristic
    bool ok = false;
};

/// Integer Gauss-Bonnet check for closed quad meshes, in the curvature form
/// sum_v (pi/2)(4-k(v)) = 2 pi chi, i.e. sum_v (4-k(v)) = 4 chi.
inline GaussBonnetReport gauss_bonnet_report(const Mesh& m)
{
    if (!m.is_closed()) throw OpenMeshError("Gauss-Bonnet check requires a closed mesh");
    if (!all_faces_quad(m)) throw UnsupportedFaceDegree("mesh has a non-quad face");
    GaussBonnetReport r;
    for (int v = 0; v < m.n_vertices(); ++v) r.lhs += 4 - m.valence(v);
    r.rhs = 4LL * m.euler_characteristic();
    r.ok = (r.lhs == r.rhs);
    return r;
}

} // namespace abelquad
