#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "abelquad/abel_jacobi.hpp"
#include "abelquad/shapes.hpp"

using namespace abelquad;

namespace {

struct Pipeline {
    MetricMesh mm;
    HomologyBasis basis;
    HolomorphicBasis holo;
    PeriodMatrices P;
    SlicedMesh sliced;
};

Pipeline make_pipeline(const Mesh& mesh)
{
    Pipeline p{natural_metric(mesh), {}, {}, {}, {}};
    p.basis = canonicalize(p.mm.tri, raw_generators(p.mm.tri));
    auto harmonics = harmonic_basis(p.mm, p.basis);
    p.holo = holomorphic_basis(p.mm, p.basis, harmonics);
    p.P = period_matrices(p.holo, p.basis);
    p.sliced = slice(p.mm.tri, p.basis);
    return p;
}

} // namespace

TEST_CASE("torus period matrices")
{
    auto p = make_pipeline(shapes::torus_grid(8, 8));
    REQUIRE(p.P.A.rows() == 1);
    CHECK(std::abs(p.P.A(0, 0) - cplx(1, 0)) < 1e-8);
    CHECK(std::abs(p.P.B(0, 0) - cplx(0, 1)) < 1e-8);
    CHECK(p.P.full_rank_lattice());
}

TEST_CASE("genus-2 period lattice has full rank")
{
    auto p = make_pipeline(shapes::genus2_tiled(3));
    CHECK(p.P.full_rank_lattice());
    CHECK(p.holo.a_residual < 1e-6);
}

TEST_CASE("abel-jacobi map of points on the flat torus")
{
    const int N = 8;
    auto p = make_pipeline(shapes::torus_grid(N, N));
    int base = p.sliced.vertex_to_source[0];

    SECTION("base point maps to zero")
    {
        auto mu = abel_jacobi_point(base, base, p.sliced, p.holo);
        CHECK(mu.norm() == 0.0);
    }
    SECTION("grid offsets integrate dz: mu = (j + i k)/N up to lattice symmetry")
    {
        int bx = base % N, by = base / N;
        for (auto [dx, dy] : std::vector<std::pair<int, int>>{{1, 0}, {2, 3}, {5, 1}}) {
            int pvtx = (bx + dx) % N + N * ((by + dy) % N);
            auto mu = abel_jacobi_point(pvtx, base, p.sliced, p.holo);
            REQUIRE(mu.size() == 1);
            cplx want(static_cast<double>(dx) / N, static_cast<double>(dy) / N);
            // the canonical basis fixes dz only up to a lattice symmetry
            bool match = false;
            for (int t = 0; t < 4; ++t) {
                cplx rot = std::pow(cplx(0, 1), t) * mu[0];
                // compare modulo the unit lattice
                double re = rot.real() - want.real(), im = rot.imag() - want.imag();
                re -= std::round(re);
                im -= std::round(im);
                if (std::abs(re) < 1e-8 && std::abs(im) < 1e-8) match = true;
            }
            CHECK(match);
        }
    }
    SECTION("two paths to the same point agree")
    {
        // mu via an intermediate stop must equal the direct integral
        int q = p.sliced.vertex_to_source[p.sliced.disk.n_vertices() / 2];
        int target = p.sliced.vertex_to_source[p.sliced.disk.n_vertices() / 3];
        auto direct = abel_jacobi_point(target, base, p.sliced, p.holo);
        auto via = abel_jacobi_point(q, base, p.sliced, p.holo) +
                   abel_jacobi_point(target, q, p.sliced, p.holo);
        CHECK((direct - via).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("abel-jacobi map of divisors")
{
    auto p = make_pipeline(shapes::torus_grid(6, 6));
    int base = p.sliced.vertex_to_source[0];

    Divisor D;
    CHECK(abel_jacobi_divisor(D, base, p.sliced, p.holo).size() == 1);
    CHECK(abel_jacobi_divisor(D, base, p.sliced, p.holo).norm() == 0.0);

    D.add(7, 1);
    D.add(13, -2);
    D.add(20, 1);
    auto mu = abel_jacobi_divisor(D, base, p.sliced, p.holo);
    auto mu_neg = abel_jacobi_divisor(-D, base, p.sliced, p.holo);
    CHECK((mu + mu_neg).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("degree-zero divisors are base-point independent")
{
    auto p = make_pipeline(shapes::torus_grid(7, 7));
    Divisor D;
    D.add(3, 1);
    D.add(11, -1);
    auto mu1 = abel_jacobi_divisor(D, p.sliced.vertex_to_source[0], p.sliced, p.holo);
    auto mu2 = abel_jacobi_divisor(D, p.sliced.vertex_to_source[5], p.sliced, p.holo);
    auto mu3 = abel_jacobi_divisor(D, p.sliced.vertex_to_source[17], p.sliced, p.holo);
    CHECK((mu1 - mu2).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((mu1 - mu3).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("lattice reduction")
{
    PeriodMatrices P;
    P.A = Eigen::MatrixXcd::Identity(1, 1);
    P.B = Eigen::MatrixXcd::Constant(1, 1, cplx(0, 1));

    SECTION("zero reduces to zero")
    {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(1);
        auto lc = lattice_reduce(v, P);
        CHECK(lc.alpha[0] == 0.0);
        CHECK(lc.beta[0] == 0.0);
    }
    SECTION("unit lattice point")
    {
        Eigen::VectorXcd v(1);
        v[0] = cplx(1, 1);
        auto lc = lattice_reduce(v, P);
        CHECK(lc.alpha[0] == Catch::Approx(1.0).margin(1e-12));
        CHECK(lc.beta[0] == Catch::Approx(1.0).margin(1e-12));
        CHECK(lc.imag_leakage < 1e-12);
    }
    SECTION("half period flags downstream failure")
    {
        Eigen::VectorXcd v(1);
        v[0] = cplx(0.5, 0);
        auto lc = lattice_reduce(v, P);
        CHECK(lc.alpha[0] == Catch::Approx(0.5).margin(1e-12));
        CHECK(lc.beta[0] == Catch::Approx(0.0).margin(1e-12));
    }
    SECTION("real b-periods are degenerate")
    {
        PeriodMatrices bad = P;
        bad.B(0, 0) = cplx(2, 0);
        Eigen::VectorXcd v(1);
        v[0] = cplx(0.25, 0.25);
        CHECK_THROWS_AS(lattice_reduce(v, bad), DegeneratePeriodLattice);
    }
    SECTION("reconstruction and shift invariance on a genus-2 lattice")
    {
        auto p = make_pipeline(shapes::genus2_tiled(3));
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> uni(-2.0, 2.0);
        std::uniform_int_distribution<int> zint(-3, 3);
        for (int trial = 0; trial < 50; ++trial) {
            Eigen::VectorXcd v(2);
            v << cplx(uni(rng), uni(rng)), cplx(uni(rng), uni(rng));
            auto lc = lattice_reduce(v, p.P);
            Eigen::VectorXcd back =
                p.P.A * lc.alpha.cast<cplx>() + p.P.B * lc.beta.cast<cplx>();
            CHECK((v - back).cwiseAbs().maxCoeff() < 1e-6);

            Eigen::VectorXd mshift(2), nshift(2);
            mshift << zint(rng), zint(rng);
            nshift << zint(rng), zint(rng);
            Eigen::VectorXcd shifted =
                v + p.P.A * mshift.cast<cplx>() + p.P.B * nshift.cast<cplx>();
            auto lc2 = lattice_reduce(shifted, p.P);
            CHECK((lc2.alpha - lc.alpha - mshift).cwiseAbs().maxCoeff() < 1e-6);
            CHECK((lc2.beta - lc.beta - nshift).cwiseAbs().maxCoeff() < 1e-6);
        }
    }
}

TEST_CASE("verify_abel end to end")
{
    SECTION("regular torus, empty divisor: condition holds")
    {
        auto rep = verify_abel(shapes::torus_grid(8, 8), Divisor{});
        CHECK(rep.verdict);
        CHECK(rep.reason == "ok");
        CHECK(rep.max_residual < 1e-9);
    }
    SECTION("torus with p - q: no such quad mesh exists")
    {
        Divisor D;
        D.add(3 + 16 * 5, 1);
        D.add(0, -1);
        auto rep = verify_abel(shapes::torus_grid(16, 16), D);
        CHECK_FALSE(rep.verdict);
        CHECK(rep.reason == "NonIntegralLatticeCoordinates");
        double min_res = std::min(rep.alpha_residual.minCoeff(), rep.beta_residual.minCoeff());
        CHECK(min_res >= 3.0 / 16.0 - 1e-6);
    }
    SECTION("cube: genus zero, the degree check is the condition")
    {
        auto rep = verify_abel(shapes::cube(), divisor_of_quad_mesh(shapes::cube()));
        CHECK(rep.verdict);
        CHECK(rep.genus == 0);
    }
    SECTION("degree mismatch short-circuits")
    {
        Divisor D;
        D.add(0, 1);
        auto rep = verify_abel(shapes::torus_grid(5, 5), D);
        CHECK_FALSE(rep.verdict);
        CHECK(rep.reason == "DegreeMismatch");
    }
    SECTION("square-tiled genus 2 satisfies the condition")
    {
        Mesh g2 = shapes::genus2_tiled(6);
        auto rep = verify_abel(g2, divisor_of_quad_mesh(g2));
        CHECK(rep.verdict);
        CHECK(rep.max_residual < 1e-3);
        CHECK(rep.omega_source == "translation");
    }
    SECTION("explicit omega index is honored")
    {
        VerifyOptions opts;
        opts.omega_index = 0;
        auto rep = verify_abel(shapes::torus_grid(8, 8), Divisor{}, opts);
        CHECK(rep.verdict);
        CHECK(rep.omega_source == "basis:0");
        opts.omega_index = 5;
        CHECK_THROWS(verify_abel(shapes::torus_grid(8, 8), Divisor{}, opts));
    }
    SECTION("tolerance domain is validated")
    {
        VerifyOptions opts;
        opts.tolerance = 0.7;
        CHECK_THROWS(verify_abel(shapes::torus_grid(5, 5), Divisor{}, opts));
        opts.tolerance = 0.0;
        CHECK_THROWS(verify_abel(shapes::torus_grid(5, 5), Divisor{}, opts));
    }
    SECTION("open meshes are rejected")
    {
        CHECK_THROWS_AS(verify_abel(shapes::rect_grid(3, 3), Divisor{}), OpenMeshError);
    }
}

TEST_CASE("verification report serializes with all intermediates")
{
    Divisor D;
    D.add(2, 1);
    D.add(9, -1);
    auto rep = verify_abel(shapes::torus_grid(6, 6), D);
    auto j = report_to_json(rep);
    CHECK(j.contains("verdict"));
    CHECK(j.contains("mu"));
    CHECK(j.contains("alpha"));
    CHECK(j.contains("beta"));
    CHECK(j.contains("period_A"));
    CHECK(j.contains("period_B"));
    CHECK(j.contains("loops"));
    CHECK(j.contains("imag_leakage"));
    CHECK(j["divisor"]["entries"].size() == 2);
    // byte-identical determinism of the serialization
    CHECK(j.dump() == report_to_json(verify_abel(shapes::torus_grid(6, 6), D)).dump());
}
