#include "topovol/persistence.hpp"
#include "topovol/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace topovol {

double DistanceMatrix::diameter() const {
    double m = 0.0;
    for (double x : d) m = std::max(m, x);
    return m;
}

DistanceMatrix pairwise_distances(const PointCloud& cloud) {
    const std::size_t n = cloud.size();
    if (n < 2) throw InvalidInput("pairwise_distances needs at least 2 points");
    const std::size_t dim = cloud.dim;
    DistanceMatrix dm;
    dm.n = n;
    dm.d.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* pi = cloud.point(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double* pj = cloud.point(j);
            double s = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                const double diff = pi[k] - pj[k];
                s += diff * diff;
            }
            const double dist = std::sqrt(s);
            dm.at(i, j) = dist;
            dm.at(j, i) = dist;
        }
    }
    return dm;
}

namespace {

bool simplex_less(const Simplex& a, const Simplex& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.v < b.v;
}

void sort_pairs(PersistenceDiagram& d) {
    std::sort(d.pairs.begin(), d.pairs.end(), [](const DiagramPair& a, const DiagramPair& b) {
        if (a.birth != b.birth) return a.birth < b.birth;
        return a.death < b.death;
    });
}

// Union-find with path halving; tracks nothing but connectivity.
struct UnionFind {
    std::vector<std::uint32_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<std::uint32_t>(i);
    }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    // returns false if already connected
    bool unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[b] = a;
        return true;
    }
};

// Symmetric difference of two sorted index vectors into out.
void add_column(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b,
                std::vector<std::int32_t>& out) {
    out.clear();
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) out.push_back(a[i++]);
        else if (b[j] < a[i]) out.push_back(b[j++]);
        else { ++i; ++j; }
    }
    out.insert(out.end(), a.begin() + i, a.end());
    out.insert(out.end(), b.begin() + j, b.end());
}

} // namespace

FiltrationComplex build_rips(const DistanceMatrix& dist, double max_scale) {
    if (!(max_scale > 0.0)) throw InvalidInput("build_rips needs max_scale > 0");
    const std::size_t n = dist.n;
    FiltrationComplex fc;
    fc.n_vertices = n;
    fc.max_scale = max_scale;

    fc.simplices.reserve(n + n * (n - 1) / 2 + n * (n - 1) * (n - 2) / 6);
    for (std::size_t i = 0; i < n; ++i) {
        Simplex s;
        s.v = {static_cast<std::uint32_t>(i), 0, 0};
        s.dim = 0;
        s.value = 0.0;
        fc.simplices.push_back(s);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = dist.at(i, j);
            if (v <= max_scale) {
                Simplex s;
                s.v = {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), 0};
                s.dim = 1;
                s.value = v;
                fc.simplices.push_back(s);
            }
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dij = dist.at(i, j);
            if (dij > max_scale) continue;
            for (std::size_t k = j + 1; k < n; ++k) {
                const double v = std::max({dij, dist.at(i, k), dist.at(j, k)});
                if (v <= max_scale) {
                    Simplex s;
                    s.v = {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                           static_cast<std::uint32_t>(k)};
                    s.dim = 2;
                    s.value = v;
                    fc.simplices.push_back(s);
                }
            }
        }
    std::sort(fc.simplices.begin(), fc.simplices.end(), simplex_less);
    return fc;
}

PersistenceDiagram reduce_h1(const FiltrationComplex& fc) {
    PersistenceDiagram diag;
    diag.degree = 1;
    diag.max_scale = fc.max_scale;

    // Per-dimension views in global filtration order.
    std::vector<const Simplex*> edges, triangles;
    for (const auto& s : fc.simplices) {
        if (s.dim == 1) edges.push_back(&s);
        else if (s.dim == 2) triangles.push_back(&s);
    }
    const std::size_t ne = edges.size();
    const std::size_t nt = triangles.size();
    if (ne == 0) return diag;

    // Edge (i,j) -> its position in the sorted edge order.
    const std::size_t n = fc.n_vertices;
    std::vector<std::int32_t> edge_index(n * n, -1);
    for (std::size_t e = 0; e < ne; ++e)
        edge_index[edges[e]->v[0] * n + edges[e]->v[1]] = static_cast<std::int32_t>(e);

    // An edge creates a 1-cycle iff its endpoints are already connected.
    // This classification is canonical, so it can replace the reduction of
    // the dimension-1 columns entirely.
    std::vector<char> creates_cycle(ne, 0);
    UnionFind uf(n);
    for (std::size_t e = 0; e < ne; ++e)
        if (!uf.unite(edges[e]->v[0], edges[e]->v[1])) creates_cycle[e] = 1;

    // Persistent cohomology route: reduce the coboundary columns of the
    // edges in decreasing filtration order. It yields exactly the same
    // (edge, triangle) pairs as reducing triangle boundary columns, with
    // an order of magnitude fewer columns and collisions for Rips input
    // (the unit tests pin equality against the naive homology oracle).
    std::vector<std::vector<std::int32_t>> cobound(ne);
    for (std::size_t t = 0; t < nt; ++t) {
        const Simplex& tri = *triangles[t];
        cobound[edge_index[tri.v[0] * n + tri.v[1]]].push_back(static_cast<std::int32_t>(t));
        cobound[edge_index[tri.v[0] * n + tri.v[2]]].push_back(static_cast<std::int32_t>(t));
        cobound[edge_index[tri.v[1] * n + tri.v[2]]].push_back(static_cast<std::int32_t>(t));
    }

    // Pivot of a coboundary column = the earliest triangle in its support.
    // Clearing: tree edges die in degree 0, so their coboundary columns are
    // guaranteed to reduce to zero and are skipped outright.
    std::vector<std::int32_t> pivot_owner(nt, -1);
    std::vector<std::vector<std::int32_t>> reduced(ne);
    std::vector<std::int32_t> col, scratch;
    for (std::size_t r = ne; r-- > 0;) {
        if (!creates_cycle[r]) continue;
        col = std::move(cobound[r]); // ascending triangle positions
        while (!col.empty()) {
            const std::int32_t piv = col.front();
            const std::int32_t owner = pivot_owner[piv];
            if (owner < 0) {
                pivot_owner[piv] = static_cast<std::int32_t>(r);
                const double birth = edges[r]->value;
                const double death = triangles[piv]->value;
                if (death > birth) diag.pairs.push_back({birth, death, false});
                reduced[r] = std::move(col);
                break;
            }
            add_column(col, reduced[owner], scratch);
            col.swap(scratch);
        }
        // Cycle-creating edge whose column vanished: no triangle ever
        // kills it, clamp the death at max_scale.
        if (reduced[r].empty() && creates_cycle[r]) {
            ++diag.clamped_count;
            if (fc.max_scale > edges[r]->value)
                diag.pairs.push_back({edges[r]->value, fc.max_scale, true});
        }
    }
    sort_pairs(diag);
    return diag;
}

PersistenceDiagram reduce_h0(const FiltrationComplex& fc) {
    PersistenceDiagram diag;
    diag.degree = 0;
    diag.max_scale = fc.max_scale;
    const std::size_t n = fc.n_vertices;

    std::vector<const Simplex*> edges;
    for (const auto& s : fc.simplices)
        if (s.dim == 1) edges.push_back(&s);

    // Standard column reduction with vertex pivots. All vertices are born
    // at 0, so the surviving detail is which edge kills which component.
    std::vector<std::int32_t> pivot_owner(n, -1);
    std::vector<std::vector<std::int32_t>> reduced(edges.size());
    std::vector<char> vertex_killed(n, 0);
    std::vector<std::int32_t> col, scratch;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        col = {static_cast<std::int32_t>(edges[e]->v[0]),
               static_cast<std::int32_t>(edges[e]->v[1])};
        while (!col.empty()) {
            const std::int32_t piv = col.back();
            const std::int32_t owner = pivot_owner[piv];
            if (owner < 0) break;
            add_column(col, reduced[owner], scratch);
            col.swap(scratch);
        }
        if (!col.empty()) {
            const std::int32_t piv = col.back();
            pivot_owner[piv] = static_cast<std::int32_t>(e);
            reduced[e] = col;
            vertex_killed[piv] = 1;
            if (edges[e]->value > 0.0) diag.pairs.push_back({0.0, edges[e]->value, false});
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (!vertex_killed[v]) {
            ++diag.clamped_count;
            if (fc.max_scale > 0.0) diag.pairs.push_back({0.0, fc.max_scale, true});
        }
    }
    sort_pairs(diag);
    return diag;
}

PersistenceDiagram diagram_for_cloud(const PointCloud& cloud) {
    if (cloud.size() < 3)
        throw InvalidInput("diagram_for_cloud needs at least 3 points");
    const DistanceMatrix dm = pairwise_distances(cloud);
    const double diam = dm.diameter();
    if (diam <= 0.0) {
        // Fully degenerate cloud: every feature has zero persistence.
        PersistenceDiagram empty;
        empty.degree = 1;
        return empty;
    }
    return reduce_h1(build_rips(dm, diam));
}

void dump_diagram(std::ostream& os, const PersistenceDiagram& diag) {
    char buf[64];
    for (const auto& p : diag.pairs) {
        std::snprintf(buf, sizeof(buf), "%.17g\t%.17g\n", p.birth, p.death);
        os << buf;
    }
}

} // namespace topovol
