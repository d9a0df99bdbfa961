#pragma once

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "abelquad/mesh.hpp"

namespace abelquad {
namespace shapes {

inline Mesh cube()
{
    std::vector<Eigen::Vector3d> pos = {
        {-1, -1, -1}, {1, -1, -1}, {1, 1, -1}, {-1, 1, -1},
        {-1, -1, 1},  {1, -1, 1},  {1, 1, 1},  {-1, 1, 1},
    };
    std::vector<std::vector<int>> faces = {
        {0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4},
        {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7},
    };
    return Mesh::from_polygons(pos, faces);
}

/// N x M quad grid on a torus, embedded as a torus of revolution. The quad
/// metric treats each cell as a unit square; vertex (x, y) has id x + N*y.
inline Mesh torus_grid(int N, int M, double jitter = 0.0, unsigned seed = 1)
{
    if (N < 3 || M < 3)
        throw Error("torus grid needs N, M >= 3 to stay a simplicial-style complex");
    std::vector<Eigen::Vector3d> pos(N * M);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const double R = 2.0, r = 0.75;
    for (int y = 0; y < M; ++y)
        for (int x = 0; x < N; ++x) {
            double th = 2.0 * kPi * x / N + jitter * uni(rng) / N;
            double ph = 2.0 * kPi * y / M + jitter * uni(rng) / M;
            pos[x + N * y] = {(R + r * std::cos(ph)) * std::cos(th),
                              (R + r * std::cos(ph)) * std::sin(th),
                              r * std::sin(ph)};
        }
    std::vector<std::vector<int>> faces;
    for (int y = 0; y < M; ++y)
        for (int x = 0; x < N; ++x) {
            int x1 = (x + 1) % N, y1 = (y + 1) % M;
            faces.push_back({x + N * y, x1 + N * y, x1 + N * y1, x + N * y1});
        }
    return Mesh::from_polygons(pos, faces);
}

namespace detail {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a)
    {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

} // namespace detail

/// Closed quad mesh glued from n unit squares, each subdivided m x m.
/// sigma_r[i] is the square to the right of square i, sigma_u[i] the square
/// above it; both gluings are translations. The result is a square-tiled
/// (origami) surface whose quad metric is flat away from the glued corners.
inline Mesh square_tiled(const std::vector<int>& sigma_r,
                         const std::vector<int>& sigma_u, int m = 3)
{
    const int n = static_cast<int>(sigma_r.size());
    // With fewer than 3 cells per side, gluings around high-order cones make
    // distinct edges share both endpoints, which the halfedge builder rejects.
    if (m < 3) throw Error("square_tiled needs subdivision m >= 3");
    const int side = m + 1;
    const int slots_per_square = side * side;
    auto slot = [&](int sq, int x, int y) { return sq * slots_per_square + y * side + x; };

    detail::UnionFind uf(n * slots_per_square);
    for (int i = 0; i < n; ++i) {
        int jr = sigma_r[i], ju = sigma_u[i];
        for (int y = 0; y <= m; ++y) uf.unite(slot(i, m, y), slot(jr, 0, y));
        for (int x = 0; x <= m; ++x) uf.unite(slot(i, x, m), slot(ju, x, 0));
    }

    std::vector<int> vid(n * slots_per_square, kInvalid);
    std::vector<Eigen::Vector3d> pos;
    for (int s = 0; s < n * slots_per_square; ++s) {
        int root = uf.find(s);
        if (vid[root] == kInvalid) {
            int sq = root / slots_per_square;
            int x = root % side, y = (root % slots_per_square) / side;
            // Layout squares side by side; positions of glued vertices are
            // representative only (the quad metric is what matters).
            vid[root] = static_cast<int>(pos.size());
            pos.emplace_back(sq * (m + 0.5) + x, y, 0.0);
        }
        vid[s] = vid[root];
    }

    std::vector<std::vector<int>> faces;
    for (int i = 0; i < n; ++i)
        for (int y = 0; y < m; ++y)
            for (int x = 0; x < m; ++x)
                faces.push_back({vid[slot(i, x, y)], vid[slot(i, x + 1, y)],
                                 vid[slot(i, x + 1, y + 1)], vid[slot(i, x, y + 1)]});
    return Mesh::from_polygons(pos, faces, /*with_positions=*/false);
}

/// L-shaped square-tiled surface with 4 squares (3 wide, 2 tall in the first
/// column): a genus-2 surface with a single cone of angle 6*pi, i.e. one
/// valence-12 vertex after gluing.
inline Mesh genus2_tiled(int m = 3)
{
    // squares 0,1,2 form the bottom row; square 3 sits on top of square 0
    std::vector<int> sr = {1, 2, 0, 3};
    std::vector<int> su = {3, 1, 2, 0};
    return square_tiled(sr, su, m);
}

/// Random connected square-tiled surface from random gluing permutations.
/// Regenerates until the gluing is connected and the genus is at least 1.
inline Mesh random_square_tiled(std::mt19937& rng, int n_squares, int m = 3)
{
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<int> sr(n_squares), su(n_squares);
        std::iota(sr.begin(), sr.end(), 0);
        std::iota(su.begin(), su.end(), 0);
        std::shuffle(sr.begin(), sr.end(), rng);
        std::shuffle(su.begin(), su.end(), rng);
        // connectivity of the square adjacency under both permutations
        std::vector<char> seen(n_squares, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int reached = 1;
        while (!stack.empty()) {
            int i = stack.back();
            stack.pop_back();
            for (int j : {sr[i], su[i], static_cast<int>(std::find(sr.begin(), sr.end(), i) - sr.begin()),
                          static_cast<int>(std::find(su.begin(), su.end(), i) - su.begin())}) {
                if (!seen[j]) {
                    seen[j] = 1;
                    ++reached;
                    stack.push_back(j);
                }
            }
        }
        if (reached != n_squares) continue;
        Mesh mesh = square_tiled(sr, su, m);
        if (mesh.genus() >= 1) return mesh;
    }
    throw Error("failed to generate a connected square-tiled surface");
}

/// Planar rectangle grid (open quad mesh), nx x ny cells of size w x h.
inline Mesh rect_grid(int nx, int ny, double w = 1.0, double h = 1.0)
{
    std::vector<Eigen::Vector3d> pos;
    for (int y = 0; y <= ny; ++y)
        for (int x = 0; x <= nx; ++x) pos.emplace_back(x * w, y * h, 0.0);
    std::vector<std::vector<int>> faces;
    auto id = [&](int x, int y) { return x + (nx + 1) * y; };
    for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x)
            faces.push_back({id(x, y), id(x + 1, y), id(x + 1, y + 1), id(x, y + 1)});
    return Mesh::from_polygons(pos, faces);
}

/// Triangulated unit disk with rings graded toward the center: ring j of K
/// has radius (j/K)^grading. Vertex 0 is the center.
inline Mesh graded_disk(int n_sectors, int n_rings, double grading = 2.0)
{
    std::vector<Eigen::Vector3d> pos;
    pos.emplace_back(0.0, 0.0, 0.0);
    auto vid = [&](int ring, int s) { return 1 + (ring - 1) * n_sectors + (s % n_sectors); };
    for (int j = 1; j <= n_rings; ++j) {
        double r = std::pow(double(j) / n_rings, grading);
        for (int s = 0; s < n_sectors; ++s) {
            double th = 2.0 * kPi * s / n_sectors;
            pos.emplace_back(r * std::cos(th), r * std::sin(th), 0.0);
        }
    }
    std::vector<std::vector<int>> faces;
    for (int s = 0; s < n_sectors; ++s)
        faces.push_back({0, vid(1, s), vid(1, s + 1)});
    for (int j = 1; j < n_rings; ++j)
        for (int s = 0; s < n_sectors; ++s) {
            int a = vid(j, s), b = vid(j, s + 1), c = vid(j + 1, s + 1), d = vid(j + 1, s);
            faces.push_back({a, d, c});
            faces.push_back({a, c, b});
        }
    return Mesh::from_polygons(pos, faces);
}

/// Icosphere: subdivided icosahedron projected to the unit sphere.
inline Mesh icosphere(int level)
{
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Eigen::Vector3d> pos = {
        {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
        {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    for (auto& p : pos) p.normalize();
    std::vector<std::array<int, 3>> faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    for (int l = 0; l < level; ++l) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            Eigen::Vector3d p = (pos[a] + pos[b]).normalized();
            int id = static_cast<int>(pos.size());
            pos.push_back(p);
            midpoint[key] = id;
            return id;
        };
        std::vector<std::array<int, 3>> next;
        for (auto& f : faces) {
            int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }
    std::vector<std::vector<int>> polys;
    for (auto& f : faces) polys.push_back({f[0], f[1], f[2]});
    return Mesh::from_polygons(pos, polys);
}

/// Triangulated upper hemisphere of the unit sphere; boundary on the equator.
inline Mesh hemisphere(int n_rings, int n_sectors)
{
    std::vector<Eigen::Vector3d> pos;
    pos.emplace_back(0.0, 0.0, 1.0);  // pole
    auto vid = [&](int ring, int s) { return 1 + (ring - 1) * n_sectors + (s % n_sectors); };
    for (int j = 1; j <= n_rings; ++j) {
        double phi = (kPi / 2.0) * j / n_rings;  // polar angle from the pole
        for (int s = 0; s < n_sectors; ++s) {
            double th = 2.0 * kPi * s / n_sectors;
            pos.emplace_back(std::sin(phi) * std::cos(th), std::sin(phi) * std::sin(th),
                             std::cos(phi));
        }
    }
    std::vector<std::vector<int>> faces;
    for (int s = 0; s < n_sectors; ++s)
        faces.push_back({0, vid(1, s), vid(1, s + 1)});
    for (int j = 1; j < n_rings; ++j)
        for (int s = 0; s < n_sectors; ++s) {
            int a = vid(j, s), b = vid(j, s + 1), c = vid(j + 1, s + 1), d = vid(j + 1, s);
            faces.push_back({a, d, c});
            faces.push_back({a, c, b});
        }
    return Mesh::from_polygons(pos, faces);
}

} // namespace shapes
} // namespace abelquad
