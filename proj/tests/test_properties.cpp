#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "abelquad/abel_jacobi.hpp"
#include "abelquad/shapes.hpp"

using namespace abelquad;

// Randomized property suites over mixed mesh families: flat tori of random
// aspect, random square-tiled (origami) surfaces, and jittered embedded tori.

namespace {

struct Config {
    Mesh mesh;
    std::string name;
};

std::vector<Config> random_configs(unsigned seed, int count)
{
    std::mt19937 rng(seed);
    std::vector<Config> out;
    while (static_cast<int>(out.size()) < count) {
        switch (rng() % 3) {
        case 0: {
            int n = 4 + static_cast<int>(rng() % 8), m = 4 + static_cast<int>(rng() % 8);
            out.push_back({shapes::torus_grid(n, m), "torus_" + std::to_string(n) + "x" +
                                                         std::to_string(m)});
            break;
        }
        case 1: {
            int squares = 3 + static_cast<int>(rng() % 4);
            int sub = 3 + static_cast<int>(rng() % 3);
            out.push_back({shapes::random_square_tiled(rng, squares, sub),
                           "origami_" + std::to_string(squares) + "_" + std::to_string(sub)});
            break;
        }
        default: {
            int n = 5 + static_cast<int>(rng() % 6), m = 5 + static_cast<int>(rng() % 6);
            out.push_back({shapes::torus_grid(n, m, 0.35, rng()), "embedded_torus"});
            break;
        }
        }
    }
    return out;
}

MetricMesh metric_for(const Config& c)
{
    // jittered tori exercise the embedded metric; flat families the quad metric
    if (c.name == "embedded_torus") return embedded_metric(c.mesh);
    return quad_metric(c.mesh);
}

} // namespace

TEST_CASE("property: closedness and harmonicity residuals")
{
    for (const auto& cfg : random_configs(101, 21)) {
        INFO(cfg.name);
        MetricMesh mm = metric_for(cfg);
        HomologyBasis basis = canonicalize(mm.tri, raw_generators(mm.tri));
        auto harmonics = harmonic_basis(mm, basis);
        for (const auto& eta : harmonics) {
            CHECK(closedness_residual(mm.tri, eta) < 1e-9);
            CHECK(divergence_residual(mm, eta) < 1e-8);
        }
        HolomorphicBasis holo = holomorphic_basis(mm, basis, harmonics);
        for (const auto& w : holo.forms) CHECK(closedness_residual(mm.tri, w) < 1e-9);
    }
}

TEST_CASE("property: symplectic intersection matrix is exactly standard")
{
    for (const auto& cfg : random_configs(202, 24)) {
        INFO(cfg.name);
        MetricMesh mm = metric_for(cfg);
        HomologyBasis basis = canonicalize(mm.tri, raw_generators(mm.tri));
        CHECK(basis.intersection == HomologyBasis::standard_form(basis.genus));
        CHECK(basis.raw_intersection == (-basis.raw_intersection.transpose()).eval());
    }
}

TEST_CASE("property: path independence of the abel-jacobi map")
{
    std::mt19937 rng(303);
    for (const auto& cfg : random_configs(303, 20)) {
        INFO(cfg.name);
        MetricMesh mm = metric_for(cfg);
        HomologyBasis basis = canonicalize(mm.tri, raw_generators(mm.tri));
        auto harmonics = harmonic_basis(mm, basis);
        HolomorphicBasis holo = holomorphic_basis(mm, basis, harmonics);
        SlicedMesh sliced = slice(mm.tri, basis);

        int base = sliced.vertex_to_source[0];
        int nv = sliced.disk.n_vertices();
        for (int trial = 0; trial < 3; ++trial) {
            int target = sliced.vertex_to_source[static_cast<int>(rng() % nv)];
            int via = sliced.vertex_to_source[static_cast<int>(rng() % nv)];
            auto direct = abel_jacobi_point(target, base, sliced, holo);
            auto detour = abel_jacobi_point(via, base, sliced, holo) +
                          abel_jacobi_point(target, via, sliced, holo);
            CHECK((direct - detour).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
}

TEST_CASE("property: lattice reconstruction")
{
    std::mt19937 rng(404);
    std::uniform_real_distribution<double> uni(-3.0, 3.0);
    for (const auto& cfg : random_configs(404, 20)) {
        INFO(cfg.name);
        MetricMesh mm = metric_for(cfg);
        HomologyBasis basis = canonicalize(mm.tri, raw_generators(mm.tri));
        auto harmonics = harmonic_basis(mm, basis);
        HolomorphicBasis holo = holomorphic_basis(mm, basis, harmonics);
        PeriodMatrices P = period_matrices(holo, basis);
        CHECK(P.full_rank_lattice());
        for (int trial = 0; trial < 5; ++trial) {
            Eigen::VectorXcd v(basis.genus);
            for (int i = 0; i < v.size(); ++i) v[i] = cplx(uni(rng), uni(rng));
            auto lc = lattice_reduce(v, P);
            Eigen::VectorXcd back = P.A * lc.alpha.cast<cplx>() + P.B * lc.beta.cast<cplx>();
            CHECK((v - back).cwiseAbs().maxCoeff() < 1e-6);
        }
    }
}

TEST_CASE("property: square-tiled surfaces satisfy the abel-jacobi condition")
{
    std::mt19937 rng(505);
    int done = 0;
    while (done < 20) {
        Mesh mesh = shapes::random_square_tiled(rng, 3 + static_cast<int>(rng() % 4),
                                                3 + static_cast<int>(rng() % 3));
        INFO("genus " << mesh.genus());
        Divisor D = divisor_of_quad_mesh(mesh);
        CHECK(D.degree() == 8 * mesh.genus() - 8);
        auto rep = verify_abel(mesh, D);
        CHECK(rep.verdict);
        CHECK(rep.max_residual < 1e-3);
        ++done;
    }
}

TEST_CASE("property: divisor degree law 8g-8 across the corpus")
{
    std::mt19937 rng(606);
    for (int i = 0; i < 20; ++i) {
        Mesh mesh = shapes::random_square_tiled(rng, 3 + static_cast<int>(rng() % 5), 3);
        CHECK(divisor_of_quad_mesh(mesh).degree() == 8 * mesh.genus() - 8);
        auto gb = gauss_bonnet_report(mesh);
        CHECK(gb.ok);
    }
}
