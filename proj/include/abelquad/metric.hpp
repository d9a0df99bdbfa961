#pragma once

#include <cmath>

#include "abelquad/mesh.hpp"

namespace abelquad {

// ---------------------------------------------------------------------------
// MetricMesh: a mesh together with edge lengths and per-corner angles.
//
// All differential-geometric computation happens on an auxiliary triangle
// mesh `tri` that shares vertex ids with the source mesh: triangle sources
// are used as-is, quads are split along the diagonal from their
// lowest-indexed corner so the split is reproducible.
//
// Two metrics are supported: the embedded metric (lengths from vertex
// positions) and the unit-square quad metric (every source edge has length 1,
// diagonals sqrt(2), cotangent weights exactly 1 on source edges and 0 on
// diagonals).
// ---------------------------------------------------------------------------

class MetricMesh {
public:
    Mesh source;
    Mesh tri;
    bool quad_flat = false;

    std::vector<int> tri_edge_source;            // source edge id, -1 for diagonals
    std::vector<double> edge_sq_length;          // per tri edge
    std::vector<double> edge_length;             // per tri edge
    std::vector<std::array<double, 3>> corner_angle;  // per tri face; entry i is the
                                                      // angle at origin(face_halfedges[i])
    std::vector<double> cotan;                   // per tri edge
    std::vector<double> cone_angle;              // per vertex

    double curvature(int v) const { return 2.0 * kPi - cone_angle[v]; }

    /// Flat coordinates of triangle f: P0 at the origin, P1 on the positive
    /// real axis, P2 in the upper half plane (faces are ccw).
    std::array<cplx, 3> local_coords(int f) const
    {
        auto hs = tri.face_halfedges(f);
        double a = edge_length[tri.edge(hs[0])];
        double b = edge_length[tri.edge(hs[1])];
        double c = edge_length[tri.edge(hs[2])];
        double x2 = (a * a + c * c - b * b) / (2.0 * a);
        double y2sq = c * c - x2 * x2;
        if (!(a > 0.0) || y2sq <= 1e-24 * c * c)
            throw MeshError("degenerate triangle " + std::to_string(f));
        return {cplx(0.0, 0.0), cplx(a, 0.0), cplx(x2, std::sqrt(y2sq))};
    }

    double face_area(int f) const
    {
        auto P = local_coords(f);
        return 0.5 * P[1].real() * P[2].imag();
    }
};

namespace detail {

/// Splits quads along the diagonal from the lowest-indexed corner; triangles
/// pass through. Returns the triangle mesh plus the source edge of each
/// triangle-mesh edge (-1 for diagonals).
inline std::pair<Mesh, std::vector<int>> triangulate(const Mesh& src)
{
    std::vector<std::vector<int>> tris;
    for (int f = 0; f < src.n_faces(); ++f) {
        auto vs = src.face_vertices(f);
        if (vs.size() == 3) {
            tris.push_back({vs[0], vs[1], vs[2]});
        } else {
            int c = static_cast<int>(std::min_element(vs.begin(), vs.end()) - vs.begin());
            auto at = [&](int i) { return vs[(c + i) % 4]; };
            tris.push_back({at(0), at(1), at(2)});
            tris.push_back({at(0), at(2), at(3)});
        }
    }
    Mesh tri = Mesh::from_polygons(src.positions, tris, src.has_positions);

    std::map<std::pair<int, int>, int> src_edge;
    for (int e = 0; e < src.n_edges(); ++e) {
        int h = src.edge_halfedge[e];
        src_edge[std::minmax(src.origin(h), src.head(h))] = e;
    }
    std::vector<int> edge_src(tri.n_edges(), -1);
    for (int e = 0; e < tri.n_edges(); ++e) {
        int h = tri.edge_halfedge[e];
        auto it = src_edge.find(std::minmax(tri.origin(h), tri.head(h)));
        if (it != src_edge.end()) edge_src[e] = it->second;
    }
    return {std::move(tri), std::move(edge_src)};
}

inline void fill_angles_and_cotans(MetricMesh& mm)
{
    const Mesh& tri = mm.tri;
    mm.corner_angle.assign(tri.n_faces(), {0.0, 0.0, 0.0});
    mm.cotan.assign(tri.n_edges(), 0.0);
    mm.cone_angle.assign(tri.n_vertices(), 0.0);
    for (int f = 0; f < tri.n_faces(); ++f) {
        auto hs = tri.face_halfedges(f);
        double sq[3];
        for (int i = 0; i < 3; ++i) sq[i] = mm.edge_sq_length[tri.edge(hs[i])];
        for (int i = 0; i < 3; ++i) {
            // angle at origin(hs[i]), between edges i and i+2
            double adj1 = sq[i], adj2 = sq[(i + 2) % 3], opp = sq[(i + 1) % 3];
            double cosv = (adj1 + adj2 - opp) / (2.0 * std::sqrt(adj1 * adj2));
            cosv = std::clamp(cosv, -1.0, 1.0);
            double ang = std::acos(cosv);
            mm.corner_angle[f][i] = ang;
            mm.cone_angle[tri.origin(hs[i])] += ang;
        }
        for (int i = 0; i < 3; ++i) {
            // the angle opposite halfedge hs[i] sits at corner i+2
            double ang = mm.corner_angle[f][(i + 2) % 3];
            double s = std::sin(ang);
            if (s < 1e-12)
                throw MeshError("degenerate cotangent weight in triangle " + std::to_string(f));
            mm.cotan[tri.edge(hs[i])] += 0.5 * std::cos(ang) / s;
        }
    }
}

} // namespace detail

/// Metric from the 3D embedding of the source mesh.
inline MetricMesh embedded_metric(const Mesh& src)
{
    if (!src.has_positions)
        throw MeshError("embedded metric requires vertex positions");
    MetricMesh mm;
    mm.source = src;
    auto [tri, edge_src] = detail::triangulate(src);
    mm.tri = std::move(tri);
    mm.tri_edge_source = std::move(edge_src);
    mm.edge_sq_length.resize(mm.tri.n_edges());
    mm.edge_length.resize(mm.tri.n_edges());
    for (int e = 0; e < mm.tri.n_edges(); ++e) {
        double l = mm.tri.edge_length(e);
        if (!(l > 0.0)) throw MeshError("zero-length edge " + std::to_string(e));
        mm.edge_length[e] = l;
        mm.edge_sq_length[e] = l * l;
    }
    detail::fill_angles_and_cotans(mm);
    return mm;
}

/// Unit-square quad metric: every face of the (all-quad) source is a unit
/// square. Corner angles and cotangent weights are exact.
inline MetricMesh quad_metric(const Mesh& src)
{
    if (!all_faces_quad(src)) throw UnsupportedFaceDegree("quad metric requires all faces quad");
    MetricMesh mm;
    mm.source = src;
    mm.quad_flat = true;
    auto [tri, edge_src] = detail::triangulate(src);
    mm.tri = std::move(tri);
    mm.tri_edge_source = std::move(edge_src);
    mm.edge_sq_length.resize(mm.tri.n_edges());
    mm.edge_length.resize(mm.tri.n_edges());
    for (int e = 0; e < mm.tri.n_edges(); ++e) {
        bool diag = (mm.tri_edge_source[e] < 0);
        mm.edge_sq_length[e] = diag ? 2.0 : 1.0;
        mm.edge_length[e] = diag ? std::sqrt(2.0) : 1.0;
    }
    // Each split quad gives two right isoceles triangles: angles pi/2
    // opposite the diagonal, pi/4 opposite the unit edges. Weights follow
    // exactly: cot(pi/4) = 1 contributed once per side of a source edge,
    // cot(pi/2) = 0 for diagonals.
    mm.corner_angle.assign(mm.tri.n_faces(), {0.0, 0.0, 0.0});
    mm.cotan.assign(mm.tri.n_edges(), 0.0);
    mm.cone_angle.assign(mm.tri.n_vertices(), 0.0);
    for (int f = 0; f < mm.tri.n_faces(); ++f) {
        auto hs = mm.tri.face_halfedges(f);
        for (int i = 0; i < 3; ++i) {
            bool d1 = mm.tri_edge_source[mm.tri.edge(hs[i])] < 0;
            bool d2 = mm.tri_edge_source[mm.tri.edge(hs[(i + 2) % 3])] < 0;
            double ang = (d1 || d2) ? kPi / 4.0 : kPi / 2.0;
            mm.corner_angle[f][i] = ang;
            mm.cone_angle[mm.tri.origin(hs[i])] += ang;
        }
        for (int i = 0; i < 3; ++i)
            if (mm.tri_edge_source[mm.tri.edge(hs[i])] >= 0)
                mm.cotan[mm.tri.edge(hs[i])] += 0.5;
    }
    return mm;
}

/// Metric choice used by the verification pipeline: the quad metric on all-quad
/// meshes, the embedded metric otherwise.
inline MetricMesh natural_metric(const Mesh& src)
{
    return all_faces_quad(src) ? quad_metric(src) : embedded_metric(src);
}

} // namespace abelquad
