#pragma once

#include <deque>
#include <set>

#include <Eigen/Dense>

#include "abelquad/mesh.hpp"

namespace abelquad {

// ---------------------------------------------------------------------------
// Homology of closed oriented surface meshes.
//
// Generators come from a tree-cotree decomposition. Each generator is a
// simple oriented edge cycle. The canonical (symplectic) basis is obtained by
// an exact unimodular change of basis computed on the integer intersection
// matrix; basis elements are integer chains over the raw generators, plus a
// realization as closed edge walks used for slicing and serialization.
// ---------------------------------------------------------------------------

struct HomologyBasis {
    int genus = 0;

    std::vector<std::vector<int>> raw_loops;   // oriented halfedge cycles
    std::vector<std::vector<int>> raw_dual;    // per raw loop: integer crossing form,
                                               // one value per halfedge
    Eigen::MatrixXi raw_intersection;          // raw_i . raw_j
    Eigen::MatrixXi basis_change;              // canonical_j = sum_k basis_change(k, j) raw_k
    Eigen::MatrixXi intersection;              // canonical intersection form

    struct Loop {
        std::string label;                     // a1..ag, b1..bg
        Eigen::VectorXi chain;                 // coefficients over raw_loops
        std::vector<std::vector<int>> cycles;  // realized closed walks (halfedges)
    };
    std::vector<Loop> loops;                   // ordered a1..ag, b1..bg

    int a_index(int i) const { return i; }
    int b_index(int i) const { return genus + i; }

    /// Standard symplectic form in the (a_1..a_g, b_1..b_g) ordering.
    static Eigen::MatrixXi standard_form(int g)
    {
        Eigen::MatrixXi J = Eigen::MatrixXi::Zero(2 * g, 2 * g);
        for (int i = 0; i < g; ++i) {
            J(i, g + i) = 1;
            J(g + i, i) = -1;
        }
        return J;
    }
};

namespace detail {

struct TreeCotree {
    std::vector<int> parent_he;   // per vertex: halfedge v -> parent, kInvalid at root
    std::vector<char> in_tree;    // per edge
    std::vector<char> in_cotree;  // per edge
    std::vector<int> leftover;    // edge ids
};

inline TreeCotree tree_cotree(const Mesh& m)
{
    TreeCotree tc;
    tc.parent_he.assign(m.n_vertices(), kInvalid);
    tc.in_tree.assign(m.n_edges(), 0);
    tc.in_cotree.assign(m.n_edges(), 0);

    std::vector<char> vseen(m.n_vertices(), 0);
    std::deque<int> queue{0};
    vseen[0] = 1;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int h : m.outgoing(v)) {
            int u = m.head(h);
            if (!vseen[u]) {
                vseen[u] = 1;
                tc.in_tree[m.edge(h)] = 1;
                tc.parent_he[u] = m.twin(h);  // u -> v
                queue.push_back(u);
            }
        }
    }

    std::vector<char> fseen(m.n_faces(), 0);
    std::deque<int> fqueue{0};
    fseen[0] = 1;
    while (!fqueue.empty()) {
        int f = fqueue.front();
        fqueue.pop_front();
        for (int h : m.face_halfedges(f)) {
            int e = m.edge(h);
            if (tc.in_tree[e]) continue;
            int g = m.face(m.twin(h));
            if (g != kInvalid && !fseen[g]) {
                fseen[g] = 1;
                tc.in_cotree[e] = 1;
                fqueue.push_back(g);
            }
        }
    }

    for (int e = 0; e < m.n_edges(); ++e)
        if (!tc.in_tree[e] && !tc.in_cotree[e]) tc.leftover.push_back(e);
    return tc;
}

/// Tree path from v up to the root as a halfedge list (v -> parent -> ...).
inline std::vector<int> path_to_root(const Mesh& m, const TreeCotree& tc, int v)
{
    std::vector<int> out;
    int cur = v;
    while (tc.parent_he[cur] != kInvalid) {
        out.push_back(tc.parent_he[cur]);
        cur = m.head(tc.parent_he[cur]);
    }
    return out;
}

} // namespace detail

/// Tree-cotree homology generators of a closed connected mesh: 2g simple
/// oriented edge cycles. Genus zero yields an empty list.
inline std::vector<std::vector<int>> raw_generators(const Mesh& m)
{
    if (!m.is_closed()) throw OpenMeshError("homology generators require a closed mesh");
    auto tc = detail::tree_cotree(m);
    const int g = m.genus();
    if (static_cast<int>(tc.leftover.size()) != 2 * g)
        throw Error("tree-cotree leftover count " + std::to_string(tc.leftover.size()) +
                    " does not match 2g = " + std::to_string(2 * g));

    std::vector<std::vector<int>> loops;
    for (int e : tc.leftover) {
        int h = m.edge_halfedge[e];  // u -> v
        int u = m.origin(h), v = m.head(h);
        auto pu = detail::path_to_root(m, tc, u);
        auto pv = detail::path_to_root(m, tc, v);
        // strip the common tail above the least common ancestor
        while (!pu.empty() && !pv.empty() && pu.back() == pv.back()) {
            pu.pop_back();
            pv.pop_back();
        }
        std::vector<int> loop{h};
        for (int t : pv) loop.push_back(t);           // v down-up to lca
        for (auto it = pu.rbegin(); it != pu.rend(); ++it)
            loop.push_back(m.twin(*it));              // lca back down to u
        loops.push_back(std::move(loop));
    }
    std::sort(loops.begin(), loops.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return loops;
}

/// Integer closed 1-form dual to crossing the given simple oriented loop:
/// the differential of the 0/1 indicator of the loop's left bank on the mesh
/// cut open along the loop. Its period over a cycle c equals the signed
/// crossing count of c through the loop.
inline std::vector<int> dual_crossing_form(const Mesh& m, const std::vector<int>& loop)
{
    std::vector<int> out_he(m.n_vertices(), kInvalid);  // loop halfedge leaving v
    std::vector<int> in_he(m.n_vertices(), kInvalid);   // loop halfedge entering v
    std::vector<char> on_loop_edge(m.n_halfedges(), 0);
    for (int h : loop) {
        int v = m.origin(h);
        if (out_he[v] != kInvalid)
            throw Error("dual form requires a simple loop (vertex revisited)");
        out_he[v] = h;
        in_he[m.head(h)] = h;
        on_loop_edge[h] = on_loop_edge[m.twin(h)] = 1;
    }

    // side[h] for halfedges leaving a loop vertex: +1 left bank, -1 right bank,
    // 0 along the loop. Rotating ccw from the outgoing loop edge, halfedges
    // before the reversed incoming edge lie on the left of the loop direction.
    std::vector<signed char> side(m.n_halfedges(), 0);
    for (int h : loop) {
        int v = m.origin(h);
        int stop = m.twin(in_he[v]);
        int cur = m.rot_ccw(h);
        int bank = 1;
        int guard = 0;
        while (cur != h) {
            if (cur == stop)
                bank = -1;
            else
                side[cur] = static_cast<signed char>(bank);
            cur = m.rot_ccw(cur);
            if (++guard > m.n_halfedges()) throw Error("vertex rotation did not close");
        }
    }

    std::vector<int> eta(m.n_halfedges(), 0);
    for (int h = 0; h < m.n_halfedges(); ++h) {
        if (on_loop_edge[h]) continue;
        int u = m.origin(h), v = m.head(h);
        int f_head = (out_he[v] != kInvalid && side[m.twin(h)] > 0) ? 1 : 0;
        int f_tail = (out_he[u] != kInvalid && side[h] > 0) ? 1 : 0;
        eta[h] = f_head - f_tail;
    }
    return eta;
}

/// Integer period of an integer 1-form over an oriented halfedge cycle.
inline long long integer_period(const std::vector<int>& form, const std::vector<int>& loop)
{
    long long s = 0;
    for (int h : loop) s += form[h];
    return s;
}

namespace detail {

/// Congruent unimodular reduction of an integer skew-symmetric matrix to the
/// paired block form diag([[0,1],[-1,0]], ...). Returns the change of basis U
/// with U^T M U in block form. Throws NonUnimodular when an elementary
/// divisor exceeds 1, and Error when the form is degenerate.
inline Eigen::MatrixXi skew_normalize(Eigen::MatrixXi M)
{
    using Mat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
    const int n = static_cast<int>(M.rows());
    Mat W = M.cast<long long>();
    Mat U = Mat::Identity(n, n);

    auto colop = [&](int j, int k, long long t) {
        // column j += t * column k, with the mirrored row operation
        W.col(j) += t * W.col(k);
        W.row(j) += t * W.row(k);
        U.col(j) += t * U.col(k);
    };
    auto swap_cols = [&](int j, int k) {
        if (j == k) return;
        W.col(j).swap(W.col(k));
        W.row(j).swap(W.row(k));
        U.col(j).swap(U.col(k));
    };

    for (int off = 0; off < n; off += 2) {
        for (int iter = 0;; ++iter) {
            if (iter > 64 * n * n) throw Error("symplectic reduction did not converge");
            // smallest-magnitude pivot in the active block, ties to lowest index
            int pr = -1, pc = -1;
            long long best = 0;
            for (int r = off; r < n; ++r)
                for (int c = r + 1; c < n; ++c)
                    if (W(r, c) != 0 && (pr < 0 || std::abs(W(r, c)) < best)) {
                        best = std::abs(W(r, c));
                        pr = r;
                        pc = c;
                    }
            if (pr < 0)
                throw Error("input loops dependent: intersection form is degenerate");
            swap_cols(off, pr);
            if (pc == off) pc = pr;  // pivot column followed the swap
            swap_cols(off + 1, pc);
            long long p = W(off, off + 1);

            bool clean = true;
            for (int j = off + 2; j < n && clean; ++j) {
                if (W(off, j) != 0) {
                    long long q = W(off, j) / p;
                    colop(j, off + 1, -q);
                    if (W(off, j) != 0) clean = false;
                }
            }
            for (int j = off + 2; j < n && clean; ++j) {
                if (W(off + 1, j) != 0) {
                    long long q = W(off + 1, j) / (-p);
                    colop(j, off, -q);
                    if (W(off + 1, j) != 0) clean = false;
                }
            }
            if (!clean) continue;  // a smaller remainder appeared somewhere
            if (std::llabs(p) != 1)
                throw NonUnimodular("intersection form has elementary divisor " +
                                    std::to_string(std::llabs(p)));
            if (p == -1) swap_cols(off, off + 1);
            break;
        }
    }
    Eigen::MatrixXi out(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) out(r, c) = static_cast<int>(U(r, c));
    return out;
}

/// Realize an integer chain over the raw loops as closed edge walks: net
/// halfedge multiplicities, decomposed into closed walks (Hierholzer).
inline std::vector<std::vector<int>> realize_chain(
    const Mesh& m, const std::vector<std::vector<int>>& raw,
    const Eigen::VectorXi& chain)
{
    std::map<int, long long> net;  // edge -> multiplicity along edge_halfedge direction
    for (int k = 0; k < chain.size(); ++k) {
        if (chain[k] == 0) continue;
        for (int h : raw[k]) {
            int e = m.edge(h);
            net[e] += (h == m.edge_halfedge[e]) ? chain[k] : -chain[k];
        }
    }
    std::map<int, std::vector<int>> out_edges;  // vertex -> directed halfedges (with multiplicity)
    for (auto& [e, mult] : net) {
        if (mult == 0) continue;
        int h = mult > 0 ? m.edge_halfedge[e] : m.twin(m.edge_halfedge[e]);
        for (long long i = 0; i < std::llabs(mult); ++i)
            out_edges[m.origin(h)].push_back(h);
    }
    for (auto& [v, hs] : out_edges) std::sort(hs.begin(), hs.end());

    std::vector<std::vector<int>> walks;
    while (true) {
        int start = kInvalid;
        for (auto& [v, hs] : out_edges)
            if (!hs.empty()) {
                start = v;
                break;
            }
        if (start == kInvalid) break;
        // Hierholzer: repeatedly follow unused out-edges, splicing sub-tours.
        std::vector<int> walk;
        std::vector<int> stack_v{start};
        std::vector<int> stack_h;
        while (!stack_v.empty()) {
            int v = stack_v.back();
            auto& hs = out_edges[v];
            if (hs.empty()) {
                stack_v.pop_back();
                if (!stack_h.empty()) {
                    walk.push_back(stack_h.back());
                    stack_h.pop_back();
                }
            } else {
                int h = hs.back();
                hs.pop_back();
                stack_h.push_back(h);
                stack_v.push_back(m.head(h));
            }
        }
        std::reverse(walk.begin(), walk.end());
        if (!walk.empty()) walks.push_back(std::move(walk));
    }
    return walks;
}

} // namespace detail

/// Canonicalize raw generators into a symplectic basis a_1..a_g, b_1..b_g
/// with a_i . b_j = delta_ij computed exactly over the integers.
inline HomologyBasis canonicalize(const Mesh& m, const std::vector<std::vector<int>>& raw)
{
    HomologyBasis basis;
    basis.genus = static_cast<int>(raw.size()) / 2;
    basis.raw_loops = raw;
    if (raw.empty()) {
        basis.raw_intersection.resize(0, 0);
        basis.basis_change.resize(0, 0);
        basis.intersection.resize(0, 0);
        return basis;
    }
    const int n = static_cast<int>(raw.size());

    for (const auto& loop : raw) basis.raw_dual.push_back(dual_crossing_form(m, loop));

    // intersection number: raw_i . raw_j = -period of eta_i over loop_j
    Eigen::MatrixXi M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            M(i, j) = static_cast<int>(-integer_period(basis.raw_dual[i], raw[j]));
    if (M != (-M.transpose()).eval())
        throw Error("intersection form is not antisymmetric (corrupt connectivity?)");
    basis.raw_intersection = M;

    // paired form (a1 b1 a2 b2 ...), then regroup as (a1..ag, b1..bg)
    Eigen::MatrixXi U = detail::skew_normalize(M);
    const int g = basis.genus;
    Eigen::MatrixXi S(n, n);
    for (int i = 0; i < g; ++i) {
        S.col(i) = U.col(2 * i);
        S.col(g + i) = U.col(2 * i + 1);
    }
    basis.basis_change = S;
    basis.intersection = S.transpose() * M * S;
    if (basis.intersection != HomologyBasis::standard_form(g))
        throw Error("symplectic reduction failed to reach the standard form");

    for (int j = 0; j < n; ++j) {
        HomologyBasis::Loop loop;
        loop.label = (j < g ? "a" : "b") + std::to_string(j < g ? j + 1 : j - g + 1);
        loop.chain = S.col(j);
        loop.cycles = detail::realize_chain(m, raw, loop.chain);
        basis.loops.push_back(std::move(loop));
    }
    return basis;
}

inline nlohmann::ordered_json loops_to_json(const Mesh& m, const HomologyBasis& basis)
{
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& loop : basis.loops) {
        nlohmann::ordered_json cycles = nlohmann::ordered_json::array();
        for (const auto& cyc : loop.cycles) {
            nlohmann::ordered_json verts = nlohmann::ordered_json::array();
            for (int h : cyc) verts.push_back(m.origin(h));
            cycles.push_back(std::move(verts));
        }
        arr.push_back({{"label", loop.label}, {"cycles", std::move(cycles)}});
    }
    return arr;
}

// ---------------------------------------------------------------------------
// Slicing to a fundamental domain
// ---------------------------------------------------------------------------

struct SlicedMesh {
    Mesh disk;
    std::vector<int> vertex_to_source;    // per disk vertex
    std::vector<int> halfedge_to_source;  // per disk halfedge (boundary maps to the
                                          // source halfedge running the same way)
    std::vector<int> cut_edges;           // source edge ids
    // boundary runs: (loop label, signed edge count); each cut edge shows up
    // twice on the boundary with opposite signs, so the per-label totals
    // cancel exactly
    std::vector<std::pair<std::string, int>> boundary_word;
    bool noop = false;       // genus zero: nothing to cut
    bool augmented = false;  // tree paths were added to connect the cut graph
};

namespace detail {

/// Shortest edge paths (BFS) used to connect cut-graph components.
inline std::vector<int> connect_components(const Mesh& m, std::vector<char>& cut_edge)
{
    // components of the cut graph over its vertices
    std::vector<int> comp(m.n_vertices(), -1);
    int n_comp = 0;
    for (int v0 = 0; v0 < m.n_vertices(); ++v0) {
        bool on_cut = false;
        for (int h : m.outgoing(v0))
            if (cut_edge[m.edge(h)]) on_cut = true;
        if (!on_cut || comp[v0] >= 0) continue;
        std::deque<int> q{v0};
        comp[v0] = n_comp;
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int h : m.outgoing(v))
                if (cut_edge[m.edge(h)] && comp[m.head(h)] < 0) {
                    comp[m.head(h)] = n_comp;
                    q.push_back(m.head(h));
                }
        }
        ++n_comp;
    }
    std::vector<int> added;
    while (n_comp > 1) {
        // BFS from component 0 until another component is met
        std::vector<int> from(m.n_vertices(), kInvalid);
        std::vector<char> seen(m.n_vertices(), 0);
        std::deque<int> q;
        for (int v = 0; v < m.n_vertices(); ++v)
            if (comp[v] == 0) {
                q.push_back(v);
                seen[v] = 1;
            }
        int hit = kInvalid;
        while (!q.empty() && hit == kInvalid) {
            int v = q.front();
            q.pop_front();
            for (int h : m.outgoing(v)) {
                int u = m.head(h);
                if (seen[u]) continue;
                seen[u] = 1;
                from[u] = h;
                if (comp[u] > 0) {
                    hit = u;
                    break;
                }
                q.push_back(u);
            }
        }
        if (hit == kInvalid) throw SliceError("cut graph cannot be connected");
        int merged = comp[hit];
        for (int v = hit; from[v] != kInvalid;) {
            int h = from[v];
            cut_edge[m.edge(h)] = 1;
            added.push_back(m.edge(h));
            v = m.origin(h);
            if (comp[v] == 0) break;
        }
        for (int v = 0; v < m.n_vertices(); ++v) {
            if (comp[v] == merged) comp[v] = 0;
        }
        // vertices on the new path join component 0 implicitly; recount
        --n_comp;
    }
    return added;
}

} // namespace detail

/// Cut a closed mesh along the realized canonical loops, producing a
/// simply connected fundamental domain (chi = 1, one boundary loop).
inline SlicedMesh slice(const Mesh& m, const HomologyBasis& basis)
{
    SlicedMesh out;
    std::vector<char> cut_edge(m.n_edges(), 0);
    // label ownership: edge -> (loop index, +1 if the loop runs along
    // edge_halfedge direction)
    std::vector<std::pair<int, int>> owner(m.n_edges(), {kInvalid, 0});
    for (int li = 0; li < static_cast<int>(basis.loops.size()); ++li)
        for (const auto& cyc : basis.loops[li].cycles)
            for (int h : cyc) {
                int e = m.edge(h);
                cut_edge[e] = 1;
                if (owner[e].first == kInvalid)
                    owner[e] = {li, h == m.edge_halfedge[e] ? 1 : -1};
            }

    if (basis.genus == 0) {
        out.disk = m;
        out.noop = true;
        out.vertex_to_source.resize(m.n_vertices());
        std::iota(out.vertex_to_source.begin(), out.vertex_to_source.end(), 0);
        out.halfedge_to_source.resize(m.n_halfedges());
        std::iota(out.halfedge_to_source.begin(), out.halfedge_to_source.end(), 0);
        return out;
    }

    auto added = detail::connect_components(m, cut_edge);
    out.augmented = !added.empty();
    if (out.augmented)
        log(LogLevel::Info, "slice: cut graph augmented with " +
                                std::to_string(added.size()) + " connector edges");

    for (int e = 0; e < m.n_edges(); ++e)
        if (cut_edge[e]) out.cut_edges.push_back(e);

    // Wedge-split every vertex that touches the cut: rotating ccw, a new copy
    // starts at every outgoing cut halfedge.
    std::vector<int> copy_of_corner(m.n_halfedges(), kInvalid);  // per outgoing halfedge
    int n_copies = 0;
    std::vector<int> vertex_to_source;
    for (int v = 0; v < m.n_vertices(); ++v) {
        auto ring = m.outgoing(v);
        int cut_deg = 0;
        for (int h : ring)
            if (cut_edge[m.edge(h)]) ++cut_deg;
        if (cut_deg == 0) {
            for (int h : ring) copy_of_corner[h] = n_copies;
            vertex_to_source.push_back(v);
            ++n_copies;
            continue;
        }
        // rotate so the ring starts at a cut halfedge
        int start = 0;
        while (!cut_edge[m.edge(ring[start])]) ++start;
        int current = -1;
        for (size_t i = 0; i < ring.size(); ++i) {
            int h = ring[(start + i) % ring.size()];
            if (cut_edge[m.edge(h)]) {
                current = n_copies++;
                vertex_to_source.push_back(v);
            }
            copy_of_corner[h] = current;
        }
    }

    std::vector<Eigen::Vector3d> pos(n_copies);
    for (int c = 0; c < n_copies; ++c) pos[c] = m.positions[vertex_to_source[c]];
    std::vector<std::vector<int>> faces(m.n_faces());
    for (int f = 0; f < m.n_faces(); ++f)
        for (int h : m.face_halfedges(f)) faces[f].push_back(copy_of_corner[h]);

    Mesh disk;
    try {
        disk = Mesh::from_polygons(pos, faces, m.has_positions);
    } catch (const MeshError& err) {
        std::string edges;
        for (int e : out.cut_edges) edges += " " + std::to_string(e);
        throw SliceError(std::string("cut does not open into a disk (") + err.what() +
                         "); cut edges:" + edges);
    }

    if (disk.euler_characteristic() != 1 || disk.n_boundary_loops() != 1) {
        std::string edges;
        for (int e : out.cut_edges) edges += " " + std::to_string(e);
        throw SliceError("cut surface is not a disk: chi = " +
                         std::to_string(disk.euler_characteristic()) + ", boundary loops = " +
                         std::to_string(disk.n_boundary_loops()) + "; cut edges:" + edges);
    }

    // Interior halfedges are created in identical face-corner order by
    // from_polygons, so they correspond 1:1; boundary halfedges map through
    // their twins.
    out.halfedge_to_source.assign(disk.n_halfedges(), kInvalid);
    int n_interior = 0;
    for (int f = 0; f < m.n_faces(); ++f) n_interior += m.degree(f);
    for (int h = 0; h < n_interior; ++h) {
        out.halfedge_to_source[h] = h;
        if (disk.origin(h) >= 0 &&
            vertex_to_source[disk.origin(h)] != m.origin(h))
            throw Error("internal: disk halfedge correspondence is inconsistent");
    }
    for (int h = n_interior; h < disk.n_halfedges(); ++h)
        out.halfedge_to_source[h] = m.twin(out.halfedge_to_source[disk.twin(h)]);

    out.disk = std::move(disk);
    out.vertex_to_source = std::move(vertex_to_source);

    // Boundary word: walk the boundary loop; each step is labeled by the loop
    // owning its source edge, signed by traversal direction. Connector edges
    // are unlabeled and skipped. Consecutive repeats collapse.
    {
        int start = kInvalid;
        for (int h = 0; h < out.disk.n_halfedges(); ++h)
            if (out.disk.is_boundary_halfedge(h)) {
                start = h;
                break;
            }
        std::vector<std::pair<std::string, int>> word;
        int cur = start;
        do {
            int sh = out.halfedge_to_source[cur];
            int e = m.edge(sh);
            auto [li, dir] = owner[e];
            if (li != kInvalid) {
                int sign = (sh == m.edge_halfedge[e] ? 1 : -1) * dir;
                const std::string& label = basis.loops[li].label;
                if (!word.empty() && word.back().first == label &&
                    (word.back().second > 0) == (sign > 0))
                    word.back().second += sign;
                else
                    word.push_back({label, sign});
            }
            cur = out.disk.next(cur);
        } while (cur != start);
        if (word.size() > 1 && word.front().first == word.back().first &&
            (word.front().second > 0) == (word.back().second > 0)) {
            word.front().second += word.back().second;
            word.pop_back();
        }
        out.boundary_word = std::move(word);
    }
    return out;
}

/// BFS edge path between two vertices of a (sliced) mesh, as halfedges.
inline std::vector<int> bfs_path(const Mesh& m, int from, int to)
{
    if (from == to) return {};
    std::vector<int> pred(m.n_vertices(), kInvalid);
    std::vector<char> seen(m.n_vertices(), 0);
    std::deque<int> q{from};
    seen[from] = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        if (v == to) break;
        for (int h : m.outgoing(v)) {
            int u = m.head(h);
            if (!seen[u]) {
                seen[u] = 1;
                pred[u] = h;
                q.push_back(u);
            }
        }
    }
    if (!seen[to]) throw Error("internal: sliced disk is not connected");
    std::vector<int> path;
    for (int v = to; v != from;) {
        path.push_back(pred[v]);
        v = m.origin(pred[v]);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

} // namespace abelquad
