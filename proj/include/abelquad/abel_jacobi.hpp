#pragma once

#include "abelquad/hodge.hpp"

namespace abelquad {

// ---------------------------------------------------------------------------
// Period matrices, the Abel-Jacobi map, and Algorithm 1 style verification of
// the divisor condition mu(D - 4(omega_0)) = 0 in the Jacobian.
// ---------------------------------------------------------------------------

struct PeriodMatrices {
    Eigen::MatrixXcd A;  // A(i, j) = integral of omega_j over a_i
    Eigen::MatrixXcd B;  // B(i, j) = integral of omega_j over b_i

    /// The 2g real column vectors (Re, Im) of [A | B] must be independent for
    /// the period lattice to have full rank.
    bool full_rank_lattice(double tol = 1e-9) const
    {
        const int g = static_cast<int>(A.rows());
        if (g == 0) return true;
        Eigen::MatrixXd R(2 * g, 2 * g);
        R.topLeftCorner(g, g) = A.real();
        R.bottomLeftCorner(g, g) = A.imag();
        R.topRightCorner(g, g) = B.real();
        R.bottomRightCorner(g, g) = B.imag();
        Eigen::FullPivLU<Eigen::MatrixXd> lu(R);
        lu.setThreshold(tol);
        return lu.isInvertible();
    }
};

inline PeriodMatrices period_matrices(const HolomorphicBasis& holo, const HomologyBasis& basis)
{
    const int g = basis.genus;
    PeriodMatrices P;
    P.A.resize(g, g);
    P.B.resize(g, g);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            P.A(i, j) = chain_period(holo.forms[j], basis, basis.a_index(i));
            P.B(i, j) = chain_period(holo.forms[j], basis, basis.b_index(i));
        }
    return P;
}

namespace detail {

inline int first_copy(const SlicedMesh& sliced, int source_vertex)
{
    for (int v = 0; v < static_cast<int>(sliced.vertex_to_source.size()); ++v)
        if (sliced.vertex_to_source[v] == source_vertex) return v;
    throw Error("vertex " + std::to_string(source_vertex) + " has no copy in the sliced disk");
}

} // namespace detail

/// Abel-Jacobi image of a point: integrals of the basis forms along a path
/// from the base vertex inside the fundamental domain. Closedness of the
/// forms makes the value path-independent there.
inline Eigen::VectorXcd abel_jacobi_point(int p, int base, const SlicedMesh& sliced,
                                          const HolomorphicBasis& holo)
{
    auto path = bfs_path(sliced.disk, detail::first_copy(sliced, base),
                         detail::first_copy(sliced, p));
    Eigen::VectorXcd mu = Eigen::VectorXcd::Zero(holo.forms.size());
    for (int h : path) {
        int sh = sliced.halfedge_to_source[h];
        for (size_t j = 0; j < holo.forms.size(); ++j) mu[j] += holo.forms[j][sh];
    }
    return mu;
}

inline Eigen::VectorXcd abel_jacobi_divisor(const Divisor& D, int base, const SlicedMesh& sliced,
                                            const HolomorphicBasis& holo)
{
    Eigen::VectorXcd mu = Eigen::VectorXcd::Zero(holo.forms.size());
    for (const auto& e : D.entries())
        mu += static_cast<double>(e.order) * abel_jacobi_point(e.site, base, sliced, holo);
    return mu;
}

struct LatticeCoordinates {
    Eigen::VectorXd alpha;
    Eigen::VectorXd beta;
    double imag_leakage = 0.0;  // |Im alpha| left over when treating A alpha as real
};

/// Solve v = A alpha + B beta for real alpha, beta: first Im(B) beta = Im(v)
/// (A is real up to normalization error), then A alpha = v - B beta.
inline LatticeCoordinates lattice_reduce(const Eigen::VectorXcd& v, const PeriodMatrices& P)
{
    const int g = static_cast<int>(P.A.rows());
    LatticeCoordinates out;
    if (g == 0) {
        out.alpha.resize(0);
        out.beta.resize(0);
        return out;
    }
    Eigen::MatrixXd ImB = P.B.imag();
    Eigen::FullPivLU<Eigen::MatrixXd> lub(ImB);
    if (!lub.isInvertible())
        throw DegeneratePeriodLattice(
            "Im(B) is singular: the homology basis produced real b-periods; re-basis advised");
    out.beta = lub.solve(v.imag());

    Eigen::VectorXcd rhs = v - P.B * out.beta.cast<cplx>();
    Eigen::FullPivLU<Eigen::MatrixXcd> lua(P.A);
    if (!lua.isInvertible()) throw DegeneratePeriodLattice("A period matrix is singular");
    Eigen::VectorXcd alpha_c = lua.solve(rhs);
    out.alpha = alpha_c.real();
    out.imag_leakage = alpha_c.imag().cwiseAbs().maxCoeff();
    return out;
}

// ---------------------------------------------------------------------------
// Verification pipeline
// ---------------------------------------------------------------------------

struct VerifyOptions {
    double tolerance = 1e-3;  // integrality tolerance on alpha, beta
    int omega_index = -1;     // which basis form plays omega_0; -1 selects
                              // automatically (translation form on square-tiled
                              // meshes, else the first basis form whose zeros
                              // are cleanly detectable)
};

struct VerificationReport {
    bool verdict = false;
    std::string reason;  // "ok" on success, otherwise the failing check
    double tolerance = 1e-3;

    int genus = 0;
    int chi = 0;
    int divisor_degree = 0;
    int expected_degree = 0;

    Eigen::VectorXcd mu;
    Eigen::VectorXd alpha, beta;
    Eigen::VectorXd alpha_residual, beta_residual;
    double max_residual = 0.0;
    double imag_leakage = 0.0;
    double a_residual = 0.0;

    Eigen::MatrixXcd A, B;
    Divisor divisor;
    Divisor omega_zero_divisor;
    int omega_index = 0;              // basis index used, or -1
    std::string omega_source;         // "basis:<j>" or "translation"
    nlohmann::ordered_json loops_json;
};

inline nlohmann::ordered_json report_to_json(const VerificationReport& r)
{
    auto cvec = [](const Eigen::VectorXcd& v) {
        nlohmann::ordered_json a = nlohmann::ordered_json::array();
        for (int i = 0; i < v.size(); ++i)
            a.push_back({round_sig(v[i].real()), round_sig(v[i].imag())});
        return a;
    };
    auto rvec = [](const Eigen::VectorXd& v) {
        nlohmann::ordered_json a = nlohmann::ordered_json::array();
        for (int i = 0; i < v.size(); ++i) a.push_back(round_sig(v[i]));
        return a;
    };
    auto cmat = [&](const Eigen::MatrixXcd& M) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (int i = 0; i < M.rows(); ++i) {
            nlohmann::ordered_json row = nlohmann::ordered_json::array();
            for (int j = 0; j < M.cols(); ++j)
                row.push_back({round_sig(M(i, j).real()), round_sig(M(i, j).imag())});
            rows.push_back(std::move(row));
        }
        return rows;
    };
    nlohmann::ordered_json j;
    j["verdict"] = r.verdict;
    j["reason"] = r.reason;
    j["tolerance"] = round_sig(r.tolerance);
    j["genus"] = r.genus;
    j["chi"] = r.chi;
    j["divisor_degree"] = r.divisor_degree;
    j["expected_degree"] = r.expected_degree;
    j["divisor"] = divisor_to_json(r.divisor);
    j["omega_index"] = r.omega_index;
    j["omega_source"] = r.omega_source;
    j["omega_zero_divisor"] = divisor_to_json(r.omega_zero_divisor);
    j["mu"] = cvec(r.mu);
    j["alpha"] = rvec(r.alpha);
    j["beta"] = rvec(r.beta);
    j["alpha_residuals"] = rvec(r.alpha_residual);
    j["beta_residuals"] = rvec(r.beta_residual);
    j["max_residual"] = round_sig(r.max_residual);
    j["imag_leakage"] = round_sig(r.imag_leakage);
    j["a_normalization_residual"] = round_sig(r.a_residual);
    j["period_A"] = cmat(r.A);
    j["period_B"] = cmat(r.B);
    j["loops"] = r.loops_json;
    return j;
}

/// Full Abel-Jacobi condition check: degree precheck against 8g-8, canonical
/// homology and a-normalized holomorphic bases, zero divisor of omega_0, then
/// integrality of the lattice coordinates of mu(D - 4(omega_0)).
inline VerificationReport verify_abel(const Mesh& mesh, const Divisor& D,
                                      const VerifyOptions& opts = {})
{
    if (!(opts.tolerance > 0.0 && opts.tolerance < 0.5))
        throw Error("tolerance must lie in (0, 0.5)");
    if (!mesh.is_closed()) throw OpenMeshError("verification requires a closed mesh");

    VerificationReport r;
    r.tolerance = opts.tolerance;
    r.omega_index = opts.omega_index;
    r.chi = mesh.euler_characteristic();
    r.genus = mesh.genus();
    r.divisor = D;
    r.divisor_degree = D.degree();
    r.expected_degree = 8 * r.genus - 8;

    if (r.divisor_degree != r.expected_degree) {
        r.verdict = false;
        r.reason = "DegreeMismatch";
        return r;
    }
    if (r.genus == 0) {
        // The Jacobian is trivial: the degree check is the whole condition.
        r.verdict = true;
        r.reason = "ok";
        return r;
    }

    MetricMesh mm = natural_metric(mesh);
    auto raw = raw_generators(mm.tri);
    HomologyBasis basis = canonicalize(mm.tri, raw);
    if (opts.omega_index >= r.genus)
        throw Error("omega index out of range [0, g)");

    auto harmonics = harmonic_basis(mm, basis);
    HolomorphicBasis holo = holomorphic_basis(mm, basis, harmonics);
    r.a_residual = holo.a_residual;

    PeriodMatrices P = period_matrices(holo, basis);
    r.A = P.A;
    r.B = P.B;
    if (!P.full_rank_lattice())
        throw DegeneratePeriodLattice("period lattice does not have full rank");

    // Choose omega_0 and detect its zero divisor. A zero divisor counts as
    // clean when the degree law holds, no zero fell inside a face, and no
    // vertex carries a negative index (holomorphic forms have no poles).
    const int want_deg = 2 * r.genus - 2;
    auto is_clean = [&](const ZeroDivisorReport& zr) {
        if (zr.degree != want_deg || !zr.face_zeros.empty()) return false;
        for (const auto& e : zr.divisor.entries())
            if (e.order < 0) return false;
        return true;
    };
    ZeroDivisorReport zero_rep;
    bool have_zero = false;
    if (opts.omega_index >= 0) {
        zero_rep = form_zero_divisor(mm.tri, holo.forms[opts.omega_index]);
        r.omega_index = opts.omega_index;
        r.omega_source = "basis:" + std::to_string(opts.omega_index);
        have_zero = true;
    } else {
        // On square-tiled meshes the translation form is exact and its zeros
        // sit at the cones; prefer it, then fall back to the basis forms.
        ComplexForm dz = translation_form(mm);
        if (dz.size() > 0) {
            auto zr = form_zero_divisor(mm.tri, dz);
            if (is_clean(zr)) {
                zero_rep = std::move(zr);
                r.omega_index = -1;
                r.omega_source = "translation";
                have_zero = true;
            }
        }
        for (int j = 0; j < r.genus && !have_zero; ++j) {
            try {
                auto zr = form_zero_divisor(mm.tri, holo.forms[j]);
                if (is_clean(zr) || j == r.genus - 1) {
                    zero_rep = std::move(zr);
                    r.omega_index = j;
                    r.omega_source = "basis:" + std::to_string(j);
                    have_zero = true;
                }
            } catch (const ZeroOnEdge&) {
                if (j == r.genus - 1) throw;
            }
        }
    }
    r.omega_zero_divisor = zero_rep.divisor;
    if (zero_rep.degree != want_deg)
        throw Error("zero divisor of omega_0 has degree " + std::to_string(zero_rep.degree) +
                    " instead of " + std::to_string(want_deg) +
                    "; mesh resolution is too coarse");

    SlicedMesh sliced = slice(mm.tri, basis);
    r.loops_json = loops_to_json(mm.tri, basis);

    Divisor E = D - zero_rep.divisor * 4;
    int base = sliced.vertex_to_source[0];
    r.mu = abel_jacobi_divisor(E, base, sliced, holo);

    LatticeCoordinates lc = lattice_reduce(r.mu, P);
    r.alpha = lc.alpha;
    r.beta = lc.beta;
    r.imag_leakage = lc.imag_leakage;
    if (r.imag_leakage > 1e-5)
        log(LogLevel::Warn,
            "imaginary leakage " + std::to_string(r.imag_leakage) + " while splitting mu");

    r.alpha_residual.resize(r.genus);
    r.beta_residual.resize(r.genus);
    for (int i = 0; i < r.genus; ++i) {
        r.alpha_residual[i] = std::abs(r.alpha[i] - std::round(r.alpha[i]));
        r.beta_residual[i] = std::abs(r.beta[i] - std::round(r.beta[i]));
        r.max_residual = std::max({r.max_residual, r.alpha_residual[i], r.beta_residual[i]});
    }
    r.verdict = r.max_residual < opts.tolerance;
    r.reason = r.verdict ? "ok" : "NonIntegralLatticeCoordinates";
    return r;
}

} // namespace abelquad
