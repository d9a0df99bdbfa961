#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "abelquad/homology.hpp"
#include "abelquad/metric.hpp"

namespace abelquad {

// ---------------------------------------------------------------------------
// Discrete 1-forms on the auxiliary triangle mesh.
//
// A form is a value per oriented halfedge with value(twin(h)) = -value(h).
// Closedness means the values around every face sum to zero; harmonicity
// additionally requires zero cotan-weighted divergence at every vertex.
// Holomorphic forms are complex: omega = eta + i * star(eta) with the star
// re-projected onto the harmonic span so omega stays exactly closed.
// ---------------------------------------------------------------------------

using RealForm = Eigen::VectorXd;     // indexed by halfedge
using ComplexForm = Eigen::VectorXcd; // indexed by halfedge

template <class Form>
inline double closedness_residual(const Mesh& m, const Form& form)
{
    double worst = 0.0;
    for (int f = 0; f < m.n_faces(); ++f) {
        typename Form::Scalar s{};
        for (int h : m.face_halfedges(f)) s += form[h];
        worst = std::max(worst, std::abs(s));
    }
    return worst;
}

template <class Form>
inline double divergence_residual(const MetricMesh& mm, const Form& form)
{
    const Mesh& m = mm.tri;
    double worst = 0.0;
    for (int v = 0; v < m.n_vertices(); ++v) {
        if (m.is_boundary_vertex(v)) continue;
        typename Form::Scalar s{};
        for (int h : m.outgoing(v)) s += mm.cotan[m.edge(h)] * form[h];
        worst = std::max(worst, std::abs(s));
    }
    return worst;
}

template <class Form>
inline typename Form::Scalar loop_period(const Form& form, const std::vector<int>& loop)
{
    typename Form::Scalar s{};
    for (int h : loop) s += form[h];
    return s;
}

/// Period over a canonical basis element given as a chain over raw loops.
template <class Form>
inline typename Form::Scalar chain_period(const Form& form, const HomologyBasis& basis,
                                          int loop_index)
{
    const Eigen::VectorXi& chain = basis.loops[loop_index].chain;
    typename Form::Scalar s{};
    for (int k = 0; k < chain.size(); ++k) {
        if (chain[k] == 0) continue;
        s += static_cast<double>(chain[k]) * loop_period(form, basis.raw_loops[k]);
    }
    return s;
}

namespace detail {

/// Cotan Laplacian solver with vertex 0 pinned to zero.
class PinnedLaplacian {
public:
    explicit PinnedLaplacian(const MetricMesh& mm) : n_(mm.tri.n_vertices())
    {
        std::vector<Eigen::Triplet<double>> trip;
        for (int e = 0; e < mm.tri.n_edges(); ++e) {
            int h = mm.tri.edge_halfedge[e];
            int u = mm.tri.origin(h), v = mm.tri.head(h);
            double w = mm.cotan[e];
            if (u > 0 && v > 0) {
                trip.emplace_back(u - 1, v - 1, -w);
                trip.emplace_back(v - 1, u - 1, -w);
            }
            if (u > 0) trip.emplace_back(u - 1, u - 1, w);
            if (v > 0) trip.emplace_back(v - 1, v - 1, w);
        }
        L_.resize(n_ - 1, n_ - 1);
        L_.setFromTriplets(trip.begin(), trip.end());
        ldlt_.compute(L_);
        use_lu_ = (ldlt_.info() != Eigen::Success);
        if (use_lu_) {
            lu_.compute(L_);
            if (lu_.info() != Eigen::Success)
                throw SolveError("Laplace system could not be factorized");
        }
    }

    /// Solves L f = rhs with f[0] = 0; checks the residual.
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const
    {
        Eigen::VectorXd r = rhs.tail(n_ - 1);
        Eigen::VectorXd x;
        if (use_lu_)
            x = lu_.solve(r);
        else
            x = ldlt_.solve(r);
        double res = (L_ * x - r).cwiseAbs().maxCoeff();
        double scale = std::max(1.0, r.cwiseAbs().maxCoeff());
        if (res > 1e-10 * scale)
            throw SolveError("Laplace solve residual " + std::to_string(res));
        Eigen::VectorXd f(n_);
        f[0] = 0.0;
        f.tail(n_ - 1) = x;
        return f;
    }

private:
    int n_;
    Eigen::SparseMatrix<double> L_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
    bool use_lu_ = false;
};

} // namespace detail

/// Harmonic representatives of the canonical basis duals: for each basis
/// element, take the integer crossing form and subtract df with
/// L f = div(eta0), leaving a closed and co-closed form.
inline std::vector<RealForm> harmonic_basis(const MetricMesh& mm, const HomologyBasis& basis)
{
    const Mesh& m = mm.tri;
    if (!m.is_closed()) throw OpenMeshError("harmonic basis requires a closed mesh");
    std::vector<RealForm> out;
    if (basis.genus == 0) return out;

    detail::PinnedLaplacian lap(mm);
    const int n = 2 * basis.genus;
    for (int j = 0; j < n; ++j) {
        const Eigen::VectorXi& chain = basis.loops[j].chain;
        RealForm eta0 = RealForm::Zero(m.n_halfedges());
        for (int k = 0; k < chain.size(); ++k) {
            if (chain[k] == 0) continue;
            const auto& dual = basis.raw_dual[k];
            for (int h = 0; h < m.n_halfedges(); ++h)
                eta0[h] += static_cast<double>(chain[k]) * dual[h];
        }
        Eigen::VectorXd div = Eigen::VectorXd::Zero(m.n_vertices());
        for (int h = 0; h < m.n_halfedges(); ++h)
            div[m.origin(h)] += mm.cotan[m.edge(h)] * eta0[h];
        Eigen::VectorXd f = lap.solve(-div);
        RealForm eta(m.n_halfedges());
        for (int h = 0; h < m.n_halfedges(); ++h)
            eta[h] = eta0[h] - (f[m.head(h)] - f[m.origin(h)]);
        out.push_back(std::move(eta));
    }
    return out;
}

/// Discrete Hodge star: reconstruct the constant covector in each flat
/// triangle, rotate it by +pi/2, sample back onto edges, and average the two
/// face contributions per edge.
template <class Form>
inline Form hodge_star(const MetricMesh& mm, const Form& form)
{
    const Mesh& m = mm.tri;
    using Scalar = typename Form::Scalar;
    std::vector<Scalar> acc(m.n_edges(), Scalar{});
    std::vector<int> cnt(m.n_edges(), 0);
    for (int f = 0; f < m.n_faces(); ++f) {
        auto hs = m.face_halfedges(f);
        auto P = mm.local_coords(f);
        cplx E0 = P[1] - P[0], E1 = P[2] - P[1];
        Scalar t0 = form[hs[0]], t1 = form[hs[1]];
        double det = E0.real() * E1.imag() - E0.imag() * E1.real();
        // covector c with c.E0 = t0, c.E1 = t1
        Scalar cx = (t0 * E1.imag() - t1 * E0.imag()) / det;
        Scalar cy = (t1 * E0.real() - t0 * E1.real()) / det;
        // rotate by +pi/2: (cx, cy) -> (-cy, cx)
        Scalar rx = -cy, ry = cx;
        cplx E[3] = {E0, E1, P[0] - P[2]};
        for (int i = 0; i < 3; ++i) {
            int e = m.edge(hs[i]);
            Scalar val = rx * E[i].real() + ry * E[i].imag();
            acc[e] += (hs[i] == m.edge_halfedge[e]) ? val : -val;
            cnt[e]++;
        }
    }
    Form out(m.n_halfedges());
    for (int e = 0; e < m.n_edges(); ++e) {
        Scalar val = acc[e] / static_cast<double>(cnt[e]);
        int h = m.edge_halfedge[e];
        out[h] = val;
        out[m.twin(h)] = -val;
    }
    return out;
}

/// Constant covector of a closed form in the flat chart of triangle f,
/// reconstructed from two independent edge values.
inline Eigen::Vector2d face_covector(const MetricMesh& mm, const RealForm& form, int f)
{
    auto hs = mm.tri.face_halfedges(f);
    auto P = mm.local_coords(f);
    cplx E0 = P[1] - P[0], E1 = P[2] - P[1];
    double t0 = form[hs[0]], t1 = form[hs[1]];
    double det = E0.real() * E1.imag() - E0.imag() * E1.real();
    return {(t0 * E1.imag() - t1 * E0.imag()) / det,
            (t1 * E0.real() - t0 * E1.real()) / det};
}

/// Exact L2 inner product of piecewise-constant closed forms.
inline double form_inner(const MetricMesh& mm, const RealForm& a, const RealForm& b)
{
    double s = 0.0;
    for (int f = 0; f < mm.tri.n_faces(); ++f)
        s += mm.face_area(f) * face_covector(mm, a, f).dot(face_covector(mm, b, f));
    return s;
}

/// Exact wedge integral of piecewise-constant closed forms.
inline double form_wedge(const MetricMesh& mm, const RealForm& a, const RealForm& b)
{
    double s = 0.0;
    for (int f = 0; f < mm.tri.n_faces(); ++f) {
        Eigen::Vector2d ca = face_covector(mm, a, f), cb = face_covector(mm, b, f);
        s += mm.face_area(f) * (ca.x() * cb.y() - ca.y() * cb.x());
    }
    return s;
}

/// L2 projection of a form onto the span of the harmonic basis.
inline RealForm project_harmonic(const MetricMesh& mm, const std::vector<RealForm>& harmonics,
                                 const RealForm& form)
{
    const int n = static_cast<int>(harmonics.size());
    Eigen::MatrixXd G(n, n);
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) {
        r[i] = form_inner(mm, harmonics[i], form);
        for (int j = i; j < n; ++j) G(i, j) = G(j, i) = form_inner(mm, harmonics[i], harmonics[j]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(G);
    if (!lu.isInvertible())
        throw SolveError("harmonic Gram matrix is singular; basis did not span H^1");
    Eigen::VectorXd c = lu.solve(r);
    RealForm out = RealForm::Zero(form.size());
    for (int i = 0; i < n; ++i) out += c[i] * harmonics[i];
    return out;
}

/// Best harmonic representatives of star(eta_k) for every basis element at
/// once. The projection coefficients need no pointwise star: testing against
/// eta_j gives <eta_j, star eta_k> = -integral(eta_j wedge eta_k), so only
/// exact Gram and wedge pairings of the basis enter.
inline std::vector<RealForm> harmonic_conjugates(const MetricMesh& mm,
                                                 const std::vector<RealForm>& harmonics)
{
    const int n = static_cast<int>(harmonics.size());
    Eigen::MatrixXd G(n, n), W(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            G(i, j) = form_inner(mm, harmonics[i], harmonics[j]);
            W(i, j) = form_wedge(mm, harmonics[i], harmonics[j]);
        }
    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success)
        throw SolveError("harmonic Gram matrix is not positive definite");
    Eigen::MatrixXd Lambda = llt.solve(-W);  // column k: coefficients of star eta_k
    std::vector<RealForm> out;
    for (int k = 0; k < n; ++k) {
        RealForm s = RealForm::Zero(harmonics[0].size());
        for (int l = 0; l < n; ++l) s += Lambda(l, k) * harmonics[l];
        out.push_back(std::move(s));
    }
    return out;
}

struct HolomorphicBasis {
    std::vector<ComplexForm> forms;  // omega_1 .. omega_g, a-normalized
    double a_residual = 0.0;         // max |A - I| entry after normalization
};

/// Holomorphic 1-form basis with int_{a_i} omega_j = delta_ij. Candidates are
/// eta_k + i * Proj(star eta_k); a g-subset with well-conditioned a-periods is
/// selected by column-pivoted QR and recombined to hit the normalization.
inline HolomorphicBasis holomorphic_basis(const MetricMesh& mm, const HomologyBasis& basis,
                                          const std::vector<RealForm>& harmonics)
{
    HolomorphicBasis out;
    const int g = basis.genus;
    if (g == 0) return out;
    const int n = 2 * g;

    std::vector<ComplexForm> cand;
    auto conj = harmonic_conjugates(mm, harmonics);
    for (int k = 0; k < n; ++k) {
        ComplexForm zeta(harmonics[k].size());
        for (int h = 0; h < harmonics[k].size(); ++h)
            zeta[h] = cplx(harmonics[k][h], conj[k][h]);
        cand.push_back(std::move(zeta));
    }

    Eigen::MatrixXcd Pa(g, n);
    for (int i = 0; i < g; ++i)
        for (int k = 0; k < n; ++k)
            Pa(i, k) = chain_period(cand[k], basis, basis.a_index(i));

    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(Pa);
    if (qr.rank() < g)
        throw SolveError("a-period matrix of candidate holomorphic forms is singular");
    std::vector<int> sel(qr.colsPermutation().indices().data(),
                         qr.colsPermutation().indices().data() + g);

    Eigen::MatrixXcd Psel(g, g);
    for (int j = 0; j < g; ++j) Psel.col(j) = Pa.col(sel[j]);
    Eigen::MatrixXcd C = Psel.fullPivLu().solve(Eigen::MatrixXcd::Identity(g, g));

    for (int j = 0; j < g; ++j) {
        ComplexForm omega = ComplexForm::Zero(cand[0].size());
        for (int k = 0; k < g; ++k) omega += C(k, j) * cand[sel[k]];
        out.forms.push_back(std::move(omega));
    }
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            cplx aij = chain_period(out.forms[j], basis, basis.a_index(i));
            out.a_residual = std::max(out.a_residual,
                                      std::abs(aij - (i == j ? cplx(1, 0) : cplx(0, 0))));
        }
    return out;
}

// ---------------------------------------------------------------------------
// Zeros of a holomorphic form
// ---------------------------------------------------------------------------

struct ZeroDivisorReport {
    Divisor divisor;                              // vertex-sited, face defects folded in
    std::vector<std::pair<int, int>> face_zeros;  // (face, order) before folding
    int degree = 0;
};

/// Locate the zeros of a complex 1-form by winding: the index of a vertex is
/// the winding number of the halfedge values around its star minus one, and a
/// face whose corner-argument sum winds measures a zero in its interior,
/// assigned to its lowest-indexed corner. The total degree is 2g - 2 exactly.
inline ZeroDivisorReport form_zero_divisor(const Mesh& m, const ComplexForm& omega)
{
    if (!m.is_closed()) throw OpenMeshError("zero divisor requires a closed mesh");
    double mean = 0.0;
    for (int h = 0; h < m.n_halfedges(); ++h) mean += std::abs(omega[h]);
    mean /= std::max(1, m.n_halfedges());
    for (int e = 0; e < m.n_edges(); ++e) {
        int h = m.edge_halfedge[e];
        if (std::abs(omega[h]) < 1e-12 * mean)
            throw ZeroOnEdge("form vanishes on edge " + std::to_string(e) +
                             "; perturb the homology basis or metric");
    }

    ZeroDivisorReport rep;
    for (int v = 0; v < m.n_vertices(); ++v) {
        auto ring = m.outgoing(v);
        double total = 0.0;
        for (size_t i = 0; i < ring.size(); ++i)
            total += delta_arg(omega[ring[i]], omega[ring[(i + 1) % ring.size()]]);
        int winding = static_cast<int>(std::lround(total / (2.0 * kPi)));
        if (std::abs(total - 2.0 * kPi * winding) > 1e-6)
            throw Error("vertex winding is not integral at vertex " + std::to_string(v));
        if (winding != 1) rep.divisor.add(v, winding - 1);
    }
    for (int f = 0; f < m.n_faces(); ++f) {
        auto hs = m.face_halfedges(f);
        double corner_sum = 0.0;
        for (size_t i = 0; i < hs.size(); ++i)
            corner_sum += delta_arg(omega[hs[i]],
                                    omega[m.twin(hs[(i + hs.size() - 1) % hs.size()])]);
        int mf = static_cast<int>(std::lround((corner_sum - kPi) / (2.0 * kPi)));
        if (std::abs(corner_sum - kPi - 2.0 * kPi * mf) > 1e-6)
            throw Error("face winding is not integral at face " + std::to_string(f));
        if (mf != 0) {
            int site = *std::min_element(hs.begin(), hs.end(), [&](int a, int b) {
                return m.origin(a) < m.origin(b);
            });
            rep.face_zeros.push_back({f, -mf});
            rep.divisor.add(m.origin(site), -mf);
            log(LogLevel::Info, "zero of order " + std::to_string(-mf) + " inside face " +
                                    std::to_string(f) + " assigned to vertex " +
                                    std::to_string(m.origin(site)));
        }
    }
    rep.degree = rep.divisor.degree();
    return rep;
}

/// Exact holomorphic 1-form on a holonomy-trivial quad mesh (square-tiled
/// surface): develop every face as a unit square in a common frame by BFS;
/// the complex edge vectors form dz. Returns an empty form when the holonomy
/// is nontrivial (some development transfer disagrees), which happens exactly
/// when the mesh is not square-tiled.
inline ComplexForm translation_form(const MetricMesh& mm)
{
    if (!mm.quad_flat || !mm.source.is_closed()) return {};
    const Mesh& src = mm.source;
    const cplx I(0.0, 1.0);

    std::vector<cplx> val(src.n_halfedges(), cplx(0, 0));
    std::vector<char> assigned(src.n_halfedges(), 0);
    std::vector<char> fseen(src.n_faces(), 0);
    std::deque<int> q{0};
    fseen[0] = 1;
    {
        auto hs = src.face_halfedges(0);
        cplx v(1.0, 0.0);
        for (int h : hs) {
            val[h] = v;
            assigned[h] = 1;
            v *= I;
        }
    }
    while (!q.empty()) {
        int f = q.front();
        q.pop_front();
        for (int h : src.face_halfedges(f)) {
            int t = src.twin(h);
            int g = src.face(t);
            cplx across = -val[h];
            if (assigned[t]) {
                if (std::abs(val[t] - across) > 1e-9) return {};  // nontrivial holonomy
                continue;
            }
            // develop face g starting from the shared edge
            cplx v = across;
            int cur = t;
            for (int i = 0; i < src.degree(g); ++i) {
                if (assigned[cur] && std::abs(val[cur] - v) > 1e-9) return {};
                val[cur] = v;
                assigned[cur] = 1;
                cur = src.next(cur);
                v *= I;
            }
            if (!fseen[g]) {
                fseen[g] = 1;
                q.push_back(g);
            }
        }
    }

    // transfer to the triangulated mesh; diagonals close each triangle
    const Mesh& tri = mm.tri;
    ComplexForm out = ComplexForm::Zero(tri.n_halfedges());
    std::vector<char> have(tri.n_halfedges(), 0);
    std::map<std::pair<int, int>, int> src_he;
    for (int h = 0; h < src.n_halfedges(); ++h)
        src_he[{src.origin(h), src.head(h)}] = h;
    for (int h = 0; h < tri.n_halfedges(); ++h) {
        if (mm.tri_edge_source[tri.edge(h)] < 0) continue;
        out[h] = val[src_he.at({tri.origin(h), tri.head(h)})];
        have[h] = 1;
    }
    for (int f = 0; f < tri.n_faces(); ++f) {
        auto hs = tri.face_halfedges(f);
        for (int i = 0; i < 3; ++i)
            if (!have[hs[i]]) {
                out[hs[i]] = -(out[hs[(i + 1) % 3]] + out[hs[(i + 2) % 3]]);
                have[hs[i]] = 1;
            }
    }
    return out;
}

/// Per-halfedge values keyed by (face-id, corner-index); corner i carries the
/// value of the halfedge from corner i to corner i+1.
inline nlohmann::ordered_json form_to_json(const Mesh& m, const ComplexForm& omega)
{
    nlohmann::ordered_json faces = nlohmann::ordered_json::array();
    for (int f = 0; f < m.n_faces(); ++f) {
        nlohmann::ordered_json vals = nlohmann::ordered_json::array();
        for (int h : m.face_halfedges(f))
            vals.push_back({round_sig(omega[h].real()), round_sig(omega[h].imag())});
        faces.push_back({{"face", f}, {"values", std::move(vals)}});
    }
    return {{"faces", std::move(faces)}};
}

} // namespace abelquad
