// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>

#include "abelquad/abelquad.hpp"

using namespace abelquad;

namespace {

int failures = 0;

void criterion(int number, const std::string& name, const std::function<bool(std::string&)>& body)
{
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", number, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct QuarticCorpusStats {
    double worst_rotation_deg = 0.0;
    int tears = 0;
    int transitions = 0;

    void absorb(const UVAtlas& atlas)
    {
        tears += static_cast<int>(atlas.tears.size());
        transitions += static_cast<int>(atlas.transitions.size());
        for (const auto& t : atlas.transitions)
            worst_rotation_deg = std::max(worst_rotation_deg, t.rot_err_deg);
    }
};

QuarticCorpusStats corpus_stats;

} // namespace

int main()
{
    criterion(1, "flat-torus period oracle (A = 1, B = i on the 16x16 grid)", [](std::string& d) {
        auto t0 = std::chrono::steady_clock::now();
        Mesh torus = shapes::torus_grid(16, 16);
        MetricMesh mm = quad_metric(torus);
        HomologyBasis basis = canonicalize(mm.tri, raw_generators(mm.tri));
        auto harmonics = harmonic_basis(mm, basis);
        HolomorphicBasis holo = holomorphic_basis(mm, basis, harmonics);
        PeriodMatrices P = period_matrices(holo, basis);
        double errA = std::abs(P.A(0, 0) - cplx(1, 0));
        double errB = std::abs(P.B(0, 0) - cplx(0, 1));
        double dt = seconds_since(t0);
        char buf[160];
        std::snprintf(buf, sizeof(buf), "|A-1| = %.3e, |B-i| = %.3e, %.2fs", errA, errB, dt);
        d = buf;
        return errA < 1e-6 && errB < 1e-6 && dt < 1.0;
    });

    criterion(2, "genus-one impossibility (p - q at offset (3,5) on the 16x16 torus)",
              [](std::string& d) {
                  auto t0 = std::chrono::steady_clock::now();
                  Divisor D;
                  D.add(3 + 16 * 5, 1);
                  D.add(0, -1);
                  auto rep = verify_abel(shapes::torus_grid(16, 16), D);
                  double min_res =
                      std::min(rep.alpha_residual.minCoeff(), rep.beta_residual.minCoeff());
                  double dt = seconds_since(t0);
                  char buf[160];
                  std::snprintf(buf, sizeof(buf), "verdict = %s, min residual = %.9f, %.2fs",
                                rep.verdict ? "true" : "false", min_res, dt);
                  d = buf;
                  return !rep.verdict && min_res >= 3.0 / 16.0 - 1e-6 && dt < 1.0;
              });

    criterion(3, "square-tiled genus-2 positive control (10k faces)", [](std::string& d) {
        auto t0 = std::chrono::steady_clock::now();
        Mesh g2 = shapes::genus2_tiled(50);  // 4 * 50^2 = 10000 quads
        Divisor D = divisor_of_quad_mesh(g2);
        auto rep = verify_abel(g2, D);
        double dt = seconds_since(t0);
        char buf[200];
        std::snprintf(buf, sizeof(buf),
                      "faces = %d, verdict = %s, max residual = %.3e, omega = %s, %.2fs",
                      g2.n_faces(), rep.verdict ? "true" : "false", rep.max_residual,
                      rep.omega_source.c_str(), dt);
        d = buf;
        return rep.verdict && rep.max_residual < 1e-3 && dt < 10.0;
    });

    criterion(4, "degree laws (zeros: 2g-2; quad divisors: 8g-8)", [](std::string& d) {
        Mesh torus = shapes::torus_grid(12, 12);
        MetricMesh tm = quad_metric(torus);
        HomologyBasis tb = canonicalize(tm.tri, raw_generators(tm.tri));
        auto th = harmonic_basis(tm, tb);
        HolomorphicBasis tholo = holomorphic_basis(tm, tb, th);
        int torus_deg = form_zero_divisor(tm.tri, tholo.forms[0]).degree;

        Mesh g2 = shapes::genus2_tiled(8);
        MetricMesh gm = quad_metric(g2);
        HomologyBasis gb = canonicalize(gm.tri, raw_generators(gm.tri));
        auto gh = harmonic_basis(gm, gb);
        HolomorphicBasis gholo = holomorphic_basis(gm, gb, gh);
        int g2_deg_basis = form_zero_divisor(gm.tri, gholo.forms[0]).degree;
        int g2_deg_translation = form_zero_divisor(gm.tri, translation_form(gm)).degree;

        int cube_deg = divisor_of_quad_mesh(shapes::cube()).degree();
        int torus_div = divisor_of_quad_mesh(torus).degree();
        int g2_div = divisor_of_quad_mesh(g2).degree();
        char buf[200];
        std::snprintf(buf, sizeof(buf),
                      "zero degrees: torus %d, g2 %d/%d; divisors: cube %d, torus %d, g2 %d",
                      torus_deg, g2_deg_basis, g2_deg_translation, cube_deg, torus_div, g2_div);
        d = buf;
        return torus_deg == 0 && g2_deg_basis == 2 && g2_deg_translation == 2 &&
               cube_deg == -8 && torus_div == 0 && g2_div == 8;
    });

    criterion(5, "cone-angle law (k in {-3,-2,-1,1,2}, 2% on a 20k-triangle disk)",
              [](std::string& d) {
                  Mesh disk = shapes::graded_disk(64, 157);
                  ConformalChart chart = conformal_flatten(disk);
                  MetricMesh mm = embedded_metric(disk);
                  bool ok = true;
                  std::string parts = "rel errs:";
                  for (int k : {-3, -2, -1, 1, 2}) {
                      auto t0 = std::chrono::steady_clock::now();
                      RationalQuartic rq =
                          k > 0 ? build_rational_quartic({{cplx(0, 0), k}}, {})
                                : build_rational_quartic({}, {{cplx(0, 0), -k}});
                      CutGraph cut = singular_cut_graph(mm.tri, chart, rq);
                      UVAtlas atlas = integrate_fourth_root(mm.tri, chart, rq, cut);
                      corpus_stats.absorb(atlas);
                      double angle = measured_cone_angle(mm.tri, atlas, cut.snapped[0]);
                      double expect = (k + 4) * kPi / 2.0;
                      double rel = std::abs(angle - expect) / expect;
                      double dt = seconds_since(t0);
                      char buf[64];
                      std::snprintf(buf, sizeof(buf), " k=%d: %.4f%% (%.2fs)", k, 100.0 * rel,
                                    dt);
                      parts += buf;
                      ok = ok && rel < 0.02 && dt < 5.0;
                  }
                  d = parts;
                  return ok;
              });

    criterion(6, "holonomy law: every cut transition is a quarter rotation within 1 degree",
              [](std::string& d) {
                  // extend the corpus beyond the cone-law runs
                  Mesh disk = shapes::graded_disk(32, 24);
                  std::vector<std::pair<cplx, int>> face_poles = {
                      {{0.451559, 0.21962}, 1},  {{0.45696, 0.617636}, 1},
                      {{0.706853, 0.52086}, 1},  {{0.533522, 0.407822}, 1},
                      {{0.250598, 0.471244}, 1}, {{0.747474, 0.28336}, 1}};
                  QuarticRun six = run_quartic(disk, build_rational_quartic({}, face_poles));
                  corpus_stats.absorb(six.atlas);

                  QuarticRun mix = run_quartic(
                      disk, build_rational_quartic(
                                {{cplx(0.250598, 0.471244), 1}, {cplx(0.747474, 0.28336), 1}},
                                {{cplx(0.451559, 0.21962), 1},
                                 {cplx(0.45696, 0.617636), 1},
                                 {cplx(0.706853, 0.52086), 1},
                                 {cplx(0.533522, 0.407822), 1}}));
                  corpus_stats.absorb(mix.atlas);

                  Mesh sphere = shapes::icosphere(3);
                  std::vector<std::pair<cplx, int>> eight = {
                      {{1.3, 1.3}, 1},    {{-1.3, 1.3}, 1},   {{1.3, -1.25}, 1},
                      {{-1.3, -1.3}, 1},  {{0.47, -0.46}, 1}, {{-0.44, -0.47}, 1},
                      {{0.45, 0.46}, 1},  {{-0.45, 0.47}, 1}};
                  QuarticRun sph = run_quartic(sphere, build_rational_quartic({}, eight, true));
                  corpus_stats.absorb(sph.atlas);

                  char buf[160];
                  std::snprintf(buf, sizeof(buf),
                                "%d transitions, worst deviation %.4f deg, %d tears",
                                corpus_stats.transitions, corpus_stats.worst_rotation_deg,
                                corpus_stats.tears);
                  d = buf;
                  return corpus_stats.tears == 0 && corpus_stats.worst_rotation_deg < 1.0 &&
                         corpus_stats.transitions > 0;
              });

    criterion(7, "property suites over 20+ randomized configurations", [](std::string& d) {
        std::mt19937 rng(2024);
        int configs = 0;
        double worst_closed = 0, worst_div = 0, worst_path = 0, worst_lattice = 0;
        bool symplectic_ok = true;
        std::uniform_real_distribution<double> uni(-2.0, 2.0);
        for (int i = 0; i < 21; ++i) {
            Mesh mesh;
            MetricMesh mm;
            int kind = i % 3;
            if (kind == 0) {
                mesh = shapes::torus_grid(4 + static_cast<int>(rng() % 8),
                                          4 + static_cast<int>(rng() % 8));
                mm = quad_metric(mesh);
            } else if (kind == 1) {
                mesh = shapes::random_square_tiled(rng, 3 + static_cast<int>(rng() % 4),
                                                   3 + static_cast<int>(rng() % 3));
                mm = quad_metric(mesh);
            } else {
                mesh = shapes::torus_grid(5 + static_cast<int>(rng() % 6),
                                          5 + static_cast<int>(rng() % 6), 0.35, rng());
                mm = embedded_metric(mesh);
            }
            HomologyBasis basis = canonicalize(mm.tri, raw_generators(mm.tri));
            symplectic_ok =
                symplectic_ok && basis.intersection == HomologyBasis::standard_form(basis.genus);
            auto harmonics = harmonic_basis(mm, basis);
            for (const auto& eta : harmonics) {
                worst_closed = std::max(worst_closed, closedness_residual(mm.tri, eta));
                worst_div = std::max(worst_div, divergence_residual(mm, eta));
            }
            HolomorphicBasis holo = holomorphic_basis(mm, basis, harmonics);
            PeriodMatrices P = period_matrices(holo, basis);
            SlicedMesh sliced = slice(mm.tri, basis);
            int base = sliced.vertex_to_source[0];
            int nv = sliced.disk.n_vertices();
            for (int t = 0; t < 2; ++t) {
                int target = sliced.vertex_to_source[static_cast<int>(rng() % nv)];
                int via = sliced.vertex_to_source[static_cast<int>(rng() % nv)];
                auto direct = abel_jacobi_point(target, base, sliced, holo);
                auto detour = abel_jacobi_point(via, base, sliced, holo) +
                              abel_jacobi_point(target, via, sliced, holo);
                worst_path = std::max(worst_path, (direct - detour).cwiseAbs().maxCoeff());
            }
            for (int t = 0; t < 3; ++t) {
                Eigen::VectorXcd v(basis.genus);
                for (int j = 0; j < v.size(); ++j) v[j] = cplx(uni(rng), uni(rng));
                auto lc = lattice_reduce(v, P);
                Eigen::VectorXcd back =
                    P.A * lc.alpha.cast<cplx>() + P.B * lc.beta.cast<cplx>();
                worst_lattice = std::max(worst_lattice, (v - back).cwiseAbs().maxCoeff());
            }
            ++configs;
        }
        char buf[240];
        std::snprintf(buf, sizeof(buf),
                      "%d configs; closed %.2e (<1e-9), harmonic %.2e (<1e-8), "
                      "path %.2e (<1e-9), lattice %.2e (<1e-6), symplectic %s",
                      configs, worst_closed, worst_div, worst_path, worst_lattice,
                      symplectic_ok ? "exact" : "BROKEN");
        d = buf;
        return configs >= 20 && worst_closed < 1e-9 && worst_div < 1e-8 &&
               worst_path < 1e-9 && worst_lattice < 1e-6 && symplectic_ok;
    });

    if (failures == 0)
        std::printf("all acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
