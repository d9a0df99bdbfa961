#pragma once

#include <optional>
#include <queue>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "abelquad/metric.hpp"

namespace abelquad {

// ---------------------------------------------------------------------------
// Genus-zero constructive pipeline: conformal chart, rational meromorphic
// quartic differential f(z) dz^4, cut graph through the singularities, and
// branch-consistent integration of the 4th root into a UV atlas.
// ---------------------------------------------------------------------------

struct ConformalChart {
    enum class Domain { Disk, Plane };
    Domain domain = Domain::Disk;
    std::vector<cplx> z;                        // per vertex of the triangle mesh
    int punctured_face = kInvalid;              // Plane: removed triangle
    std::array<int, 3> puncture_vertices{kInvalid, kInvalid, kInvalid};
    double conformal_residual = 0.0;            // rms least-squares CR residual
    std::vector<Eigen::Vector3d> sphere_image;  // Plane: inverse stereographic
};

namespace detail {

struct LscmSystem {
    std::vector<Eigen::Triplet<cplx>> trip;
    std::vector<cplx> rhs_fixed;  // contribution of pinned vertices per row
};

/// One least-squares Cauchy-Riemann row per triangle:
///   [w_i (W_k - W_j) + w_j (W_i - W_k) + w_k (W_j - W_i)] / sqrt(2 area).
inline Eigen::VectorXcd solve_lscm(const MetricMesh& mm, const std::map<int, cplx>& pinned,
                                   const std::vector<char>& keep_face, double* residual)
{
    const Mesh& m = mm.tri;
    const int nv = m.n_vertices();
    std::vector<int> col(nv, kInvalid);
    int nfree = 0;
    for (int v = 0; v < nv; ++v)
        if (!pinned.count(v)) col[v] = nfree++;

    std::vector<Eigen::Triplet<cplx>> trip;
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(m.n_faces());
    int nrows = 0;
    std::vector<std::array<std::pair<int, cplx>, 3>> rows;
    for (int f = 0; f < m.n_faces(); ++f) {
        if (!keep_face.empty() && !keep_face[f]) continue;
        auto hs = m.face_halfedges(f);
        auto P = mm.local_coords(f);
        double area = 0.5 * P[1].real() * P[2].imag();
        double s = 1.0 / std::sqrt(2.0 * area);
        int vi = m.origin(hs[0]), vj = m.origin(hs[1]), vk = m.origin(hs[2]);
        rows.push_back({std::make_pair(vi, s * (P[2] - P[1])),
                        std::make_pair(vj, s * (P[0] - P[2])),
                        std::make_pair(vk, s * (P[1] - P[0]))});
        ++nrows;
    }
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(nrows);
    for (int r = 0; r < nrows; ++r)
        for (auto& [v, coef] : rows[r]) {
            if (pinned.count(v))
                b[r] -= coef * pinned.at(v);
            else
                trip.emplace_back(r, col[v], coef);
        }
    Eigen::SparseMatrix<cplx> A(nrows, nfree);
    A.setFromTriplets(trip.begin(), trip.end());

    Eigen::SparseMatrix<cplx> N = (A.adjoint() * A).pruned();
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu(N);
    if (lu.info() != Eigen::Success) throw SolveError("LSCM normal equations are singular");
    Eigen::VectorXcd x = lu.solve(A.adjoint() * b);

    if (residual) {
        double num = (A * x - b).squaredNorm();
        double den = 0.0;
        for (int r = 0; r < nrows; ++r)
            for (auto& [v, coef] : rows[r]) {
                cplx w = pinned.count(v) ? pinned.at(v) : x[col[v]];
                den += std::norm(coef * w);
            }
        *residual = std::sqrt(num / std::max(den, 1e-30));
    }

    Eigen::VectorXcd w(nv);
    for (int v = 0; v < nv; ++v)
        w[v] = pinned.count(v) ? pinned.at(v) : x[col[v]];
    return w;
}

inline int count_flips(const Mesh& m, const std::vector<cplx>& z,
                       const std::vector<char>& keep_face)
{
    int flips = 0;
    for (int f = 0; f < m.n_faces(); ++f) {
        if (!keep_face.empty() && !keep_face[f]) continue;
        auto vs = m.face_vertices(f);
        cplx a = z[vs[1]] - z[vs[0]], b = z[vs[2]] - z[vs[0]];
        if (a.real() * b.imag() - a.imag() * b.real() <= 0.0) ++flips;
    }
    return flips;
}

} // namespace detail

/// Conformal chart of a genus-zero mesh. Meshes with boundary map to the unit
/// disk (boundary pinned to the circle by arc length); closed meshes are
/// punctured at one face, flattened with a free boundary, and sent through
/// z -> 1/(z - c) so the puncture plays the point at infinity.
inline ConformalChart conformal_flatten(const Mesh& mesh, int puncture_face = kInvalid)
{
    MetricMesh mm = embedded_metric(mesh);
    const Mesh& m = mm.tri;
    ConformalChart chart;

    if (m.is_closed()) {
        if (m.genus() != 0) throw MeshError("conformal flattening requires genus zero");
        chart.domain = ConformalChart::Domain::Plane;
        int pf = puncture_face == kInvalid ? 0 : puncture_face;
        chart.punctured_face = pf;
        std::vector<char> keep(m.n_faces(), 1);
        keep[pf] = 0;
        auto pvs = m.face_vertices(pf);
        chart.puncture_vertices = {pvs[0], pvs[1], pvs[2]};

        // pin two vertices far from the puncture to fix the similarity
        std::map<int, cplx> pinned;
        {
            int far1 = 0;
            double best = -1.0;
            Eigen::Vector3d pc = (m.positions[pvs[0]] + m.positions[pvs[1]] +
                                  m.positions[pvs[2]]) / 3.0;
            for (int v = 0; v < m.n_vertices(); ++v) {
                double d = (m.positions[v] - pc).norm();
                if (d > best) {
                    best = d;
                    far1 = v;
                }
            }
            int far2 = m.head(m.vertex_halfedge[far1]);
            pinned[far1] = cplx(0.0, 0.0);
            pinned[far2] = cplx(1.0, 0.0);
        }
        Eigen::VectorXcd w = detail::solve_lscm(mm, pinned, keep, &chart.conformal_residual);
        chart.z.assign(w.data(), w.data() + w.size());

        int flips = detail::count_flips(m, chart.z, keep);
        if (flips > 0)
            throw MeshError("conformal flattening produced " + std::to_string(flips) +
                            " flipped triangles");

        // Moebius: send the puncture to infinity, then normalize the scale.
        cplx c = (chart.z[pvs[0]] + chart.z[pvs[1]] + chart.z[pvs[2]]) / 3.0;
        for (auto& zz : chart.z) zz = 1.0 / (zz - c);
        std::vector<double> mags;
        for (const auto& zz : chart.z) mags.push_back(std::abs(zz));
        std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
        double s = 1.0 / mags[mags.size() / 2];
        for (auto& zz : chart.z) zz *= s;

        chart.sphere_image.resize(m.n_vertices());
        for (int v = 0; v < m.n_vertices(); ++v) {
            const cplx& zz = chart.z[v];
            double d = std::norm(zz) + 1.0;
            chart.sphere_image[v] = {2.0 * zz.real() / d, 2.0 * zz.imag() / d,
                                     (std::norm(zz) - 1.0) / d};
        }
        return chart;
    }

    if (m.euler_characteristic() != 1 || m.n_boundary_loops() != 1)
        throw MeshError("open input must be a topological disk");
    chart.domain = ConformalChart::Domain::Disk;

    // boundary pinned to the unit circle by cumulative arc length, oriented
    // counterclockwise with respect to the interior
    auto bl = m.boundary_loop();
    std::reverse(bl.begin() + 1, bl.end());  // boundary next-cycles run clockwise
    std::vector<double> cum{0.0};
    for (size_t i = 0; i < bl.size(); ++i) {
        int u = bl[i], v = bl[(i + 1) % bl.size()];
        cum.push_back(cum.back() + (m.positions[u] - m.positions[v]).norm());
    }
    std::map<int, cplx> pinned;
    for (size_t i = 0; i < bl.size(); ++i) {
        double th = 2.0 * kPi * cum[i] / cum.back();
        pinned[bl[i]] = cplx(std::cos(th), std::sin(th));
    }
    Eigen::VectorXcd w = detail::solve_lscm(mm, pinned, {}, &chart.conformal_residual);
    chart.z.assign(w.data(), w.data() + w.size());
    int flips = detail::count_flips(m, chart.z, {});
    if (flips > 0)
        throw MeshError("conformal flattening produced " + std::to_string(flips) +
                        " flipped triangles");
    return chart;
}

// ---------------------------------------------------------------------------
// Rational quartic differentials  f(z) dz^4
// ---------------------------------------------------------------------------

struct RationalQuartic {
    std::vector<std::pair<cplx, int>> zeros;  // (point, multiplicity >= 1)
    std::vector<std::pair<cplx, int>> poles;

    cplx eval(const cplx& z) const
    {
        cplx f(1.0, 0.0);
        for (const auto& [p, n] : zeros)
            for (int i = 0; i < n; ++i) f *= (z - p);
        for (const auto& [q, mdeg] : poles)
            for (int i = 0; i < mdeg; ++i) f /= (z - q);
        return f;
    }

    /// sum of pole orders minus sum of zero orders
    int balance() const
    {
        int b = 0;
        for (const auto& [p, n] : zeros) b -= n;
        for (const auto& [q, mdeg] : poles) b += mdeg;
        return b;
    }

    /// all singular points with signed order (+zero, -pole)
    std::vector<std::pair<cplx, int>> singular_points() const
    {
        std::vector<std::pair<cplx, int>> out;
        for (const auto& [p, n] : zeros) out.push_back({p, n});
        for (const auto& [q, mdeg] : poles) out.push_back({q, -mdeg});
        return out;
    }
};

/// Validated container; `sphere_mode` additionally enforces the closed-sphere
/// balance (pole excess 8, so the differential is regular at infinity).
inline RationalQuartic build_rational_quartic(std::vector<std::pair<cplx, int>> zeros,
                                              std::vector<std::pair<cplx, int>> poles,
                                              bool sphere_mode = false)
{
    RationalQuartic rq{std::move(zeros), std::move(poles)};
    double scale = 1e-12;
    auto pts = rq.singular_points();
    for (const auto& [p, o] : pts) {
        if (o == 0) throw Error("singular point with zero order");
        scale = std::max(scale, std::abs(p));
    }
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            if (std::abs(pts[i].first - pts[j].first) < 1e-12 * scale)
                throw Error("coincident zero/pole points must be cancelled first");
    for (const auto& [p, n] : rq.zeros)
        if (n < 1) throw Error("zero multiplicity must be >= 1");
    for (const auto& [q, mdeg] : rq.poles)
        if (mdeg < 1) throw Error("pole multiplicity must be >= 1");
    if (sphere_mode && rq.balance() != 8)
        throw Error("closed-sphere balance violated: sum(m) - sum(n) = " +
                    std::to_string(rq.balance()) + ", expected 8");
    return rq;
}

inline RationalQuartic load_rational_quartic(const std::string& path, bool sphere_mode = false)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    nlohmann::json j;
    in >> j;
    std::vector<std::pair<cplx, int>> zeros, poles;
    for (const auto& e : j.value("zeros", nlohmann::json::array()))
        zeros.push_back({cplx(e.at("re").get<double>(), e.at("im").get<double>()),
                         e.value("mult", 1)});
    for (const auto& e : j.value("poles", nlohmann::json::array()))
        poles.push_back({cplx(e.at("re").get<double>(), e.at("im").get<double>()),
                         e.value("mult", 1)});
    return build_rational_quartic(std::move(zeros), std::move(poles), sphere_mode);
}

// ---------------------------------------------------------------------------
// Cut graph
// ---------------------------------------------------------------------------

struct CutGraph {
    std::vector<int> snapped;           // chart vertex per singular point
    std::vector<double> snap_distance;  // chart distance of each snap
    std::vector<int> edges;             // tree edges (triangle-mesh edge ids)
    int boundary_vertex = kInvalid;     // disk mode attachment
};

/// Tree of shortest chart-length edge paths connecting all snapped singular
/// vertices, and, on disk domains, one boundary vertex.
inline CutGraph singular_cut_graph(const Mesh& m, const ConformalChart& chart,
                                   const RationalQuartic& rq)
{
    CutGraph cg;
    auto pts = rq.singular_points();
    for (const auto& [p, o] : pts) {
        int best = 0;
        double bd = std::abs(chart.z[0] - p);
        for (int v = 1; v < m.n_vertices(); ++v) {
            double d = std::abs(chart.z[v] - p);
            if (d < bd) {
                bd = d;
                best = v;
            }
        }
        for (int s : cg.snapped)
            if (s == best)
                throw SnapError("two singular points snap to vertex " + std::to_string(best) +
                                "; refine the mesh");
        cg.snapped.push_back(best);
        cg.snap_distance.push_back(bd);
    }
    if (cg.snapped.empty()) return cg;  // nothing to cut

    std::vector<char> in_tree_v(m.n_vertices(), 0);
    in_tree_v[cg.snapped[0]] = 1;
    std::vector<char> target(m.n_vertices(), 0);
    for (size_t i = 1; i < cg.snapped.size(); ++i) target[cg.snapped[i]] = 1;
    int remaining = 0;
    for (int v = 0; v < m.n_vertices(); ++v) remaining += target[v];

    auto grow_to = [&](const std::vector<char>& goal) {
        // Dijkstra from the whole tree; stops at the nearest goal vertex.
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        std::vector<double> dist(m.n_vertices(), std::numeric_limits<double>::infinity());
        std::vector<int> from(m.n_vertices(), kInvalid);
        for (int v = 0; v < m.n_vertices(); ++v)
            if (in_tree_v[v]) {
                dist[v] = 0.0;
                pq.push({0.0, v});
            }
        int hit = kInvalid;
        while (!pq.empty()) {
            auto [d, v] = pq.top();
            pq.pop();
            if (d > dist[v]) continue;
            if (goal[v] && !in_tree_v[v]) {
                hit = v;
                break;
            }
            for (int h : m.outgoing(v)) {
                int u = m.head(h);
                double nd = d + std::abs(chart.z[u] - chart.z[v]);
                if (nd < dist[u] - 1e-15) {
                    dist[u] = nd;
                    from[u] = h;
                    pq.push({nd, u});
                }
            }
        }
        if (hit == kInvalid) throw Error("cut graph target unreachable");
        for (int v = hit; !in_tree_v[v];) {
            in_tree_v[v] = 1;
            if (from[v] == kInvalid) break;
            cg.edges.push_back(m.edge(from[v]));
            v = m.origin(from[v]);
        }
        return hit;
    };

    while (remaining > 0) {
        int hit = grow_to(target);
        target[hit] = 0;
        --remaining;
    }
    if (chart.domain == ConformalChart::Domain::Disk) {
        std::vector<char> bnd(m.n_vertices(), 0);
        bool tree_touches_boundary = false;
        for (int v = 0; v < m.n_vertices(); ++v) {
            if (m.is_boundary_vertex(v)) {
                bnd[v] = 1;
                if (in_tree_v[v]) tree_touches_boundary = true;
            }
        }
        if (!tree_touches_boundary) cg.boundary_vertex = grow_to(bnd);
    }
    return cg;
}

// ---------------------------------------------------------------------------
// Fourth-root integration
// ---------------------------------------------------------------------------

struct UVAtlas {
    std::vector<std::array<cplx, 3>> corner_w;  // per triangle, in corner order
    std::vector<cplx> face_h;                   // branch value at face centroid
    std::vector<int> cut_edges;

    struct Transition {
        int edge;
        int rot_k;              // rotation class, multiples of pi/2
        double rot_err_deg;     // angular deviation from exactly k*pi/2
        cplx translation;
        double translation_err; // disagreement of the two corner estimates
    };
    std::vector<Transition> transitions;

    struct Tear {
        int edge;
        double arg_jump;  // radians
    };
    std::vector<Tear> tears;

    double closure_max = 0.0;      // worst per-face integration closure defect
    double path_defect_max = 0.0;  // worst w disagreement across non-tree dual edges
    double edge_scale = 1.0;       // mean |w| edge image, for relative thresholds
};

namespace detail {

class BranchedRoot {
public:
    BranchedRoot(const RationalQuartic& rq) : rq_(rq) {}

    /// Branch value at the starting point, rotated so arg h lies in
    /// (-pi/4, pi/4] when rotate_to_seed is set.
    cplx seed(const cplx& z) const
    {
        cplx h = std::pow(rq_.eval(z), 0.25);
        while (std::arg(h) > kPi / 4.0) h *= cplx(0, -1);
        while (std::arg(h) <= -kPi / 4.0) h *= cplx(0, 1);
        return h;
    }

    /// Continue the branch from (z_prev, h_prev) to z_new, bisecting the
    /// segment while the argument of f moves too fast.
    cplx continue_to(const cplx& z_prev, const cplx& h_prev, const cplx& z_new,
                     int depth = 0) const
    {
        cplx f_prev = rq_.eval(z_prev), f_new = rq_.eval(z_new);
        double jump = delta_arg(f_prev, f_new);
        if (std::abs(jump) > kPi / 2.0 && depth < 24) {
            cplx zm = 0.5 * (z_prev + z_new);
            cplx hm = continue_to(z_prev, h_prev, zm, depth + 1);
            return continue_to(zm, hm, z_new, depth + 1);
        }
        double expected = std::arg(h_prev) + jump / 4.0;
        cplx root = std::pow(f_new, 0.25);
        cplx best = root;
        double bd = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 4; ++k) {
            double d = std::abs(std::remainder(std::arg(root) - expected, 2.0 * kPi));
            if (d < bd) {
                bd = d;
                best = root;
            }
            root *= cplx(0, 1);
        }
        return best;
    }

private:
    const RationalQuartic& rq_;
};

} // namespace detail

struct IntegrateOptions {
    bool collect_tears = false;  // report tears in the atlas instead of throwing
    double checker_scale = 8.0;  // recorded for export convenience
};

/// Integrate h dz, h = f^{1/4}, into per-corner w values. The branch is seeded
/// at the face containing the chart centroid and propagated by continuity over
/// a dual spanning forest of the cut complement; mismatches across cut edges
/// are recorded as rotation class + translation.
inline UVAtlas integrate_fourth_root(const Mesh& m, const ConformalChart& chart,
                                     const RationalQuartic& rq, const CutGraph& cut,
                                     const IntegrateOptions& opts = {})
{
    UVAtlas atlas;
    atlas.cut_edges = cut.edges;
    detail::BranchedRoot root(rq);

    std::vector<char> is_cut(m.n_edges(), 0);
    for (int e : cut.edges) is_cut[e] = 1;

    // singular vertices and 2-ring distances drive quadrature refinement
    std::vector<int> sing_order(m.n_vertices(), 0);
    for (size_t i = 0; i < cut.snapped.size(); ++i)
        sing_order[cut.snapped[i]] = rq.singular_points()[i].second;
    std::vector<int> ring(m.n_vertices(), 1 << 20);
    {
        std::deque<int> q;
        for (int v = 0; v < m.n_vertices(); ++v)
            if (sing_order[v] != 0) {
                ring[v] = 0;
                q.push_back(v);
            }
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            if (ring[v] >= 2) continue;
            for (int h : m.outgoing(v))
                if (ring[m.head(h)] > ring[v] + 1) {
                    ring[m.head(h)] = ring[v] + 1;
                    q.push_back(m.head(h));
                }
        }
    }

    auto zc = [&](int f) {
        auto vs = m.face_vertices(f);
        return (chart.z[vs[0]] + chart.z[vs[1]] + chart.z[vs[2]]) / 3.0;
    };

    // midpoint quadrature with branch continuation; h is carried along
    auto quad_run = [&](cplx za, cplx zb, cplx& h, cplx z_at_h, int pieces) {
        cplx I(0, 0);
        cplx zh = z_at_h;
        cplx step = (zb - za) / static_cast<double>(pieces);
        for (int s = 0; s < pieces; ++s) {
            cplx mid = za + (static_cast<double>(s) + 0.5) * step;
            h = root.continue_to(zh, h, mid);
            zh = mid;
            I += h * step;
        }
        return std::make_pair(I, zh);
    };

    // integral along a directed edge from the branch state at the face
    // centroid; dyadic tail toward singular endpoints with a closing stub
    // integrated from the local power model h ~ c (z - z0)^{k/4}
    auto edge_integral = [&](int face, int va, int vb, cplx h_face) {
        cplx za = chart.z[va], zb = chart.z[vb];
        bool sa = sing_order[va] != 0, sb = sing_order[vb] != 0;
        int pieces = (std::min(ring[va], ring[vb]) <= 2) ? 4 : 1;
        cplx zmid = 0.5 * (za + zb);
        cplx hc = root.continue_to(zc(face), h_face, zmid);

        auto half_integral = [&](cplx target, bool singular, int order) {
            // from zmid toward target; returns the integral of h dz
            cplx I(0, 0);
            cplx h = hc;
            cplx zh = zmid;
            if (!singular) {
                auto [seg, znew] = quad_run(zmid, target, h, zh, std::max(1, pieces / 2));
                (void)znew;
                return seg;
            }
            cplx from = zmid;
            for (int j = 0; j < 8; ++j) {
                cplx to = zmid + (target - zmid) * (1.0 - std::pow(0.5, j + 1));
                auto [seg, znew] = quad_run(from, to, h, zh, 4);
                I += seg;
                zh = znew;
                from = to;
            }
            h = root.continue_to(zh, h, from);
            I += h * (target - from) / (0.25 * order + 1.0);
            return I;
        };
        cplx Ia = half_integral(za, sa, sing_order[va]);  // zmid -> za
        cplx Ib = half_integral(zb, sb, sing_order[vb]);  // zmid -> zb
        return Ib - Ia;                                   // za -> zb
    };

    // seed face: the one containing the chart centroid (fallback: nearest)
    cplx centroid(0, 0);
    for (const auto& zz : chart.z) centroid += zz;
    centroid /= static_cast<double>(chart.z.size());
    int seed_face = kInvalid;
    double best_d = std::numeric_limits<double>::infinity();
    int nearest = 0;
    for (int f = 0; f < m.n_faces(); ++f) {
        auto vs = m.face_vertices(f);
        if (sing_order[vs[0]] || sing_order[vs[1]] || sing_order[vs[2]]) continue;
        cplx a = chart.z[vs[0]], b = chart.z[vs[1]], c = chart.z[vs[2]];
        auto cross = [](cplx u, cplx v) { return u.real() * v.imag() - u.imag() * v.real(); };
        if (cross(b - a, centroid - a) >= 0 && cross(c - b, centroid - b) >= 0 &&
            cross(a - c, centroid - c) >= 0) {
            seed_face = f;
            break;
        }
        double d = std::abs(zc(f) - centroid);
        if (d < best_d) {
            best_d = d;
            nearest = f;
        }
    }
    if (seed_face == kInvalid) seed_face = nearest;

    atlas.face_h.assign(m.n_faces(), cplx(0, 0));
    atlas.corner_w.assign(m.n_faces(), {cplx(0, 0), cplx(0, 0), cplx(0, 0)});
    std::vector<char> visited(m.n_faces(), 0);
    std::vector<char> crossed(m.n_edges(), 0);  // dual tree edges

    atlas.face_h[seed_face] = root.seed(zc(seed_face));
    visited[seed_face] = 1;

    // corner values of a face, walking forward from already-known corners so
    // corners transferred from the parent face are never overwritten
    auto fill_face = [&](int f, int known0, int known1) {
        auto vs = m.face_vertices(f);
        cplx I[3];
        for (int i = 0; i < 3; ++i)
            I[i] = edge_integral(f, vs[i], vs[(i + 1) % 3], atlas.face_h[f]);
        atlas.closure_max = std::max(atlas.closure_max, std::abs(I[0] + I[1] + I[2]));
        auto& w = atlas.corner_w[f];
        std::array<char, 3> have{0, 0, 0};
        have[known0] = 1;
        if (known1 >= 0) have[known1] = 1;
        for (int step = 0; step < 3; ++step)
            for (int i = 0; i < 3; ++i)
                if (have[i] && !have[(i + 1) % 3]) {
                    w[(i + 1) % 3] = w[i] + I[i];
                    have[(i + 1) % 3] = 1;
                }
    };
    fill_face(seed_face, 0, -1);

    std::deque<int> q{seed_face};
    while (!q.empty()) {
        int f = q.front();
        q.pop_front();
        for (int h : m.face_halfedges(f)) {
            int t = m.twin(h);
            int g = m.face(t);
            if (g == kInvalid || visited[g] || is_cut[m.edge(h)]) continue;
            // transfer branch across the shared edge midpoint
            cplx mid = 0.5 * (chart.z[m.origin(h)] + chart.z[m.head(h)]);
            cplx hmid = root.continue_to(zc(f), atlas.face_h[f], mid);
            atlas.face_h[g] = root.continue_to(mid, hmid, zc(g));
            visited[g] = 1;
            crossed[m.edge(h)] = 1;
            // shared corners inherit w values
            auto vs_g = m.face_vertices(g);
            int a = m.origin(h), b = m.head(h);
            auto idx_of = [&](int v) {
                for (int i = 0; i < 3; ++i)
                    if (vs_g[i] == v) return i;
                throw Error("internal: shared vertex not found");
            };
            auto vs_f = m.face_vertices(f);
            auto fidx_of = [&](int v) {
                for (int i = 0; i < 3; ++i)
                    if (vs_f[i] == v) return i;
                throw Error("internal: shared vertex not found");
            };
            atlas.corner_w[g][idx_of(a)] = atlas.corner_w[f][fidx_of(a)];
            atlas.corner_w[g][idx_of(b)] = atlas.corner_w[f][fidx_of(b)];
            fill_face(g, idx_of(a), idx_of(b));
            q.push_back(g);
        }
    }
    for (int f = 0; f < m.n_faces(); ++f)
        if (!visited[f])
            throw Error("cut complement is disconnected: face " + std::to_string(f) +
                        " unreachable");

    // typical image edge length, for relative thresholds
    {
        double s = 0.0;
        int cnt = 0;
        for (int f = 0; f < m.n_faces(); ++f)
            for (int i = 0; i < 3; ++i) {
                s += std::abs(atlas.corner_w[f][(i + 1) % 3] - atlas.corner_w[f][i]);
                ++cnt;
            }
        atlas.edge_scale = s / std::max(1, cnt);
    }

    // consistency over non-tree dual edges: branch agreement off the cut,
    // rotation + translation bookkeeping across the cut
    for (int e = 0; e < m.n_edges(); ++e) {
        int h = m.edge_halfedge[e];
        int f = m.face(h), g = m.face(m.twin(h));
        if (f == kInvalid || g == kInvalid || crossed[e]) continue;
        cplx mid = 0.5 * (chart.z[m.origin(h)] + chart.z[m.head(h)]);
        cplx hf = root.continue_to(zc(f), atlas.face_h[f], mid);
        cplx hg = root.continue_to(zc(g), atlas.face_h[g], mid);
        double jump = delta_arg(hf, hg);
        int k = static_cast<int>(std::lround(jump / (kPi / 2.0))) & 3;
        double err = std::abs(std::remainder(jump - k * kPi / 2.0, 2.0 * kPi));

        if (!is_cut[e]) {
            if (k != 0 || err > kPi / 4.0) {
                atlas.tears.push_back({e, jump});
                if (!opts.collect_tears)
                    throw BranchTear("branch tear across edge " + std::to_string(e) +
                                     " (arg jump " + std::to_string(jump) + ")");
                continue;
            }
            // path independence: w values on both sides must agree
            auto vs_f = m.face_vertices(f);
            auto vs_g = m.face_vertices(g);
            for (int v : {m.origin(h), m.head(h)}) {
                cplx wf, wg;
                for (int i = 0; i < 3; ++i) {
                    if (vs_f[i] == v) wf = atlas.corner_w[f][i];
                    if (vs_g[i] == v) wg = atlas.corner_w[g][i];
                }
                atlas.path_defect_max = std::max(atlas.path_defect_max, std::abs(wf - wg));
            }
        } else {
            // transition w_g = i^k w_f + t, estimated at both shared corners
            auto vs_f = m.face_vertices(f);
            auto vs_g = m.face_vertices(g);
            cplx rot = std::pow(cplx(0, 1), k);
            cplx t[2];
            int idx = 0;
            for (int v : {m.origin(h), m.head(h)}) {
                cplx wf, wg;
                for (int i = 0; i < 3; ++i) {
                    if (vs_f[i] == v) wf = atlas.corner_w[f][i];
                    if (vs_g[i] == v) wg = atlas.corner_w[g][i];
                }
                t[idx++] = wg - rot * wf;
            }
            atlas.transitions.push_back({e, k, err * 180.0 / kPi, 0.5 * (t[0] + t[1]),
                                         std::abs(t[0] - t[1])});
        }
    }
    return atlas;
}

/// Total image angle at a chart vertex: the sum of the w-triangle corner
/// angles of its incident faces.
inline double measured_cone_angle(const Mesh& m, const UVAtlas& atlas, int v)
{
    double total = 0.0;
    for (int h : m.outgoing(v)) {
        int f = m.face(h);
        if (f == kInvalid) continue;
        auto vs = m.face_vertices(f);
        int i = 0;
        while (vs[i] != v) ++i;
        cplx w0 = atlas.corner_w[f][i];
        cplx u1 = atlas.corner_w[f][(i + 1) % 3] - w0;
        cplx u2 = atlas.corner_w[f][(i + 2) % 3] - w0;
        total += std::abs(delta_arg(u1, u2));
    }
    return total;
}

/// OBJ with per-corner texture coordinates (Re w, Im w) * checker_scale.
inline void export_obj_with_uv(const Mesh& m, const UVAtlas& atlas, const std::string& path,
                               double checker_scale = 8.0)
{
    std::vector<std::vector<cplx>> uv(m.n_faces());
    for (int f = 0; f < m.n_faces(); ++f)
        for (int i = 0; i < 3; ++i) uv[f].push_back(atlas.corner_w[f][i] * checker_scale);
    save_obj(m, path, &uv);
}

} // namespace abelquad
