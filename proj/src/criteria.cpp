#include "wg/criteria.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "json.hpp"

namespace wg {

namespace {

bool is_cartan(const BicharacterMatrix& m) {
    for (int i = 0; i < m.dim(); ++i)
        if (m.at(i, i).is_one())
            return false;
    return detect_cartan_type(m).has_value();
}

bool order_in(const Scalar& s, std::initializer_list<long long> orders) {
    auto o = s.order();
    if (!o)
        return false;
    for (long long n : orders)
        if (*o == n)
            return true;
    return false;
}

std::string mark(bool applicable, bool satisfied) {
    return !applicable ? "hypothesis not matched" : satisfied ? "holds" : "violated";
}

} // namespace

std::string reports_to_json(const std::vector<PredicateReport>& reports) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports)
        arr.push_back({{"name", r.name},
                       {"applicable", r.applicable},
                       {"satisfied", r.satisfied},
                       {"detail", r.detail}});
    return arr.dump();
}

PredicateReport rank2_neg_one_condition(const BicharacterMatrix& m) {
    if (m.dim() != 2)
        throw StateError("rank2_neg_one_condition needs dim 2, got " + std::to_string(m.dim()));
    const Scalar q11 = m.at(0, 0), q22 = m.at(1, 1);
    const Scalar e12 = m.edge_product(0, 1);
    const Scalar minus1 = Scalar::minus_one(m.modulus());
    const Scalar one = Scalar::one(m.modulus());
    PredicateReport rep;
    rep.name = "rank2-neg-one";
    rep.applicable = q11 * e12 * q22 == minus1;
    rep.satisfied =
        rep.applicable && ((q11 == minus1 && e12 * q22 == one) || (q22 == minus1 && q11 * e12 == one));
    rep.detail = mark(rep.applicable, rep.satisfied);
    return rep;
}

std::vector<PredicateReport> rank3_conditions(const BicharacterMatrix& m) {
    if (m.dim() != 3)
        throw StateError("rank3_conditions needs dim 3, got " + std::to_string(m.dim()));
    const int n = m.modulus();
    const Scalar one = Scalar::one(n);
    const Scalar minus1 = Scalar::minus_one(n);
    const Scalar q1 = m.at(0, 0), q2 = m.at(1, 1), q3 = m.at(2, 2);
    const Scalar e12 = m.edge_product(0, 1), e13 = m.edge_product(0, 2), e23 = m.edge_product(1, 2);
    auto edge = [&](int i, int j) { return m.edge_product(i - 1, j - 1); };
    auto q = [&](int i) { return m.at(i - 1, i - 1); };

    std::vector<PredicateReport> out;
    auto add = [&](const std::string& name, bool applicable, bool satisfied) {
        out.push_back({name, applicable, applicable && satisfied, mark(applicable, satisfied)});
    };

    // (i)
    {
        bool hyp = e13 == one && q1 != minus1 && q2 != minus1 && q3 != minus1;
        bool concl = false;
        if (hyp) {
            concl = is_cartan(m);
            for (int i : {1, 3}) {
                int j = 4 - i;
                bool alt = order_in(q(i), {3}) && order_in(q(2), {6, 9}) && order_in(q(j), {6, 9}) &&
                           q(j) * edge(j, 2) == one && q(2) * edge(2, i) == one &&
                           (edge(j, 2) * q(2) == one || edge(j, 2) * q(2) * q(2) == one);
                concl = concl || alt;
            }
        }
        add("rank3-i", hyp, concl);
    }
    // (ii)
    {
        bool hyp = e12 != one && e13 != one && e23 != one;
        bool concl = false;
        if (hyp) {
            concl = e12 * e13 * e23 == one && (q1 == minus1 || q2 == minus1 || q3 == minus1);
            // refinement when exactly one vertex label is -1
            for (int i = 1; concl && i <= 3; ++i) {
                int a = i == 1 ? 2 : 1;
                int b = i == 3 ? 2 : 3;
                if (q(i) == minus1 && q(a) != minus1 && q(b) != minus1) {
                    Scalar sq = edge(i, a) * edge(i, a);
                    concl = sq == edge(i, b) * edge(i, b) && order_in(sq, {3}) &&
                            edge(i, a) * q(a) == one && edge(i, b) * q(b) == one;
                }
            }
        }
        add("rank3-ii", hyp, concl);
    }
    // (iii)
    {
        bool hyp = e13 == one && q2 == minus1 && q1 * e12 == one && q1 != minus1 && q3 != minus1;
        bool concl = false;
        if (hyp) {
            concl = e23 * q3 == one ||
                    (e23 * q3 * q3 == one &&
                     (q1 * q3.pow(2) == one || q1 * q3.pow(3) == minus1)) ||
                    (q3 == minus1 * q1 && order_in(q3, {3}) && (e23 == minus1 || e23 == minus1 * q3));
        }
        add("rank3-iii", hyp, concl);
    }
    // (iv)
    {
        bool hyp = e13 == one && q3 == minus1 && q1 != minus1 && q2 != minus1 &&
                   q1 * e12 == one && e12 * q2 == one;
        bool concl = false;
        if (hyp)
            concl = q2 * e23 == one || (q2 * q2 * e23 == one && order_in(q1, {3, 4, 6}));
        add("rank3-iv", hyp, concl);
    }
    // (v)
    {
        bool hyp = e13 == one && q3 == minus1 && e12 * q2 == one && q2 * e23 == one;
        bool concl = false;
        if (hyp)
            concl = q1 == q2 || q1 * q1 == q2 || q1 == minus1 ||
                    (order_in(q1, {3}) && q1 * q2 == minus1);
        add("rank3-v", hyp, concl);
    }
    // (vi)
    {
        bool hyp = e13 == one && q1 == minus1 && q2 == minus1 && q3 != minus1;
        bool concl = false;
        if (hyp) {
            bool alt1 = e12 == minus1 && order_in(q3, {3}) && e23 * e23 * q3 == one;
            bool alt2 = e23 * q3 == one &&
                        (e12 == minus1 || e12 * e23 == minus1 || e12.pow(2) * e23 == one ||
                         e12.pow(3) * e23 == one);
            bool alt3 = e12 * e23 == one &&
                        (e23 * q3 == one || e23 * q3 * q3 == one || e23 == minus1 * q3);
            concl = alt1 || alt2 || alt3;
        }
        add("rank3-vi", hyp, concl);
    }
    // (vii)
    {
        bool hyp = e13 == one && q2 != minus1 && e12 * q2 != one && q2 * e23 != one;
        bool concl = false;
        if (hyp && e12 * q2 * e23 == minus1) {
            for (int i : {1, 3}) {
                int j = 4 - i;
                bool alt = order_in(q2, {3, 6}) && q(i) == minus1 && q2 * q2 * edge(2, i) == one &&
                           edge(2, j) == minus1 * q2 &&
                           (q(j) == minus1 || q(j) == minus1 * q2.inverse());
                concl = concl || alt;
            }
        }
        add("rank3-vii", hyp, concl);
    }
    // (viii)
    {
        bool hyp = e13 == one && q1 == minus1 && q3 == minus1 && e12 * q2 == one && q2 != minus1;
        bool concl = false;
        if (hyp)
            concl = q2 * e23 == one || (e23 == minus1 && order_in(q2, {3, 4, 6})) ||
                    (e23 * e23 == q2 * q2 && order_in(q2 * q2, {3}));
        add("rank3-viii", hyp, concl);
    }
    // (ix)
    {
        bool hyp = e12 != one && e13 != one && e23 != one;
        bool concl = true;
        if (hyp) {
            for (int i = 1; i <= 3; ++i) {
                bool some = false;
                for (int j = 1; j <= 3; ++j)
                    if (j != i)
                        some = some || q(i) == minus1 || q(i) * edge(i, j) == one;
                concl = concl && some;
            }
        }
        add("rank3-ix", hyp, hyp && concl);
    }
    return out;
}

namespace {

struct Graph {
    const DynkinDiagram* d;
    int n;
    std::vector<std::vector<int>> adj;

    explicit Graph(const DynkinDiagram& dia) : d(&dia), n(dia.dim()), adj(dia.dim()) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && dia.has_edge(i, j))
                    adj[i].push_back(j);
    }
    int deg(int v) const { return static_cast<int>(adj[v].size()); }
    bool has(int i, int j) const { return d->has_edge(i, j); }
};

// all simple paths of exactly k vertices, as ordered sequences (each path
// reported in both directions; callers not caring about direction dedupe)
void for_each_path(const Graph& g, int k, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> path;
    std::vector<char> used(g.n, 0);
    std::function<void()> rec = [&]() {
        if (static_cast<int>(path.size()) == k) {
            fn(path);
            return;
        }
        for (int w : g.adj[path.back()])
            if (!used[w]) {
                used[w] = 1;
                path.push_back(w);
                rec();
                path.pop_back();
                used[w] = 0;
            }
    };
    for (int v = 0; v < g.n; ++v) {
        used[v] = 1;
        path = {v};
        rec();
        used[v] = 0;
    }
}

// induced simple path: no extra adjacencies among the chosen vertices
bool path_is_induced(const Graph& g, const std::vector<int>& p) {
    for (size_t a = 0; a < p.size(); ++a)
        for (size_t b = a + 2; b < p.size(); ++b)
            if (g.has(p[a], p[b]))
                return false;
    return true;
}

// does the diagram contain a chordless cycle on >= 4 vertices; a vertex
// subset carries one iff each member has degree exactly 2 inside it and the
// induced subgraph is connected
bool has_big_induced_cycle(const Graph& g) {
    const int n = g.n;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) < 4)
            continue;
        bool cycle = true;
        int start = -1;
        for (int v = 0; v < n && cycle; ++v) {
            if (!(mask >> v & 1))
                continue;
            start = v;
            int deg = 0;
            for (int w : g.adj[v])
                deg += (mask >> w & 1);
            cycle = deg == 2;
        }
        if (!cycle)
            continue;
        unsigned seen = 1u << start;
        std::vector<int> stack{start};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : g.adj[v])
                if ((mask >> w & 1) && !(seen >> w & 1)) {
                    seen |= 1u << w;
                    stack.push_back(w);
                }
        }
        if (seen == mask)
            return true;
    }
    return false;
}

} // namespace

std::vector<PredicateReport> structural_filters(const BicharacterMatrix& m) {
    const DynkinDiagram dia = to_dynkin(m);
    const Graph g(dia);
    const int d = dia.dim();
    const int n = dia.modulus();
    const Scalar one = Scalar::one(n);
    const Scalar minus1 = Scalar::minus_one(n);
    std::vector<PredicateReport> out;
    auto add = [&](const std::string& name, bool applicable, bool satisfied) {
        out.push_back({name, applicable, applicable && satisfied, mark(applicable, satisfied)});
    };

    // rank 4: the complete graph is impossible
    if (d == 4) {
        bool some_missing = false;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                some_missing = some_missing || !dia.has_edge(i, j);
        add("no-tetrahedron", true, some_missing);

        int full = 0;
        for (int v = 0; v < 4; ++v)
            if (g.deg(v) == 3)
                ++full;
        add("no-double-triangle", true, full <= 1);

        bool is_cycle = true;
        int edges = 0;
        for (int v = 0; v < 4; ++v) {
            is_cycle = is_cycle && g.deg(v) == 2;
            edges += g.deg(v);
        }
        is_cycle = is_cycle && edges / 2 == 4 && is_connected(dia);
        add("no-4cycle", is_cycle, false);
    }

    // any cycle on >= 4 vertices (chordless) is impossible
    {
        bool big = has_big_induced_cycle(g);
        add("no-big-cycle", big, false);
    }

    // tent: triangle {x,y,z} with deg z = 2, legs leaving x and y into
    // different components; forces the apex label to -1
    if (d >= 5) {
        bool applicable = false, ok = true;
        for (int z = 0; z < d; ++z) {
            if (g.deg(z) != 2)
                continue;
            int x = g.adj[z][0], y = g.adj[z][1];
            if (!g.has(x, y) || g.deg(x) != 3 || g.deg(y) != 3)
                continue;
            int px = -1, py = -1;
            for (int w : g.adj[x])
                if (w != y && w != z)
                    px = w;
            for (int w : g.adj[y])
                if (w != x && w != z)
                    py = w;
            if (px < 0 || py < 0 || px == py)
                continue;
            // legs must live in different components of G - {x,y,z}
            std::vector<char> blocked(d, 0), seen(d, 0);
            blocked[x] = blocked[y] = blocked[z] = 1;
            std::vector<int> stack{px};
            seen[px] = 1;
            bool joined = false;
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                if (v == py)
                    joined = true;
                for (int w : g.adj[v])
                    if (!blocked[w] && !seen[w]) {
                        seen[w] = 1;
                        stack.push_back(w);
                    }
            }
            if (joined)
                continue;
            applicable = true;
            ok = ok && dia.vertex(z) == minus1;
        }
        add("tent", applicable, ok);
    }

    // octopus: induced  a,b - c1 - ... - cm - y,z  with all prong and path
    // edges present (the y-z edge is unconstrained); impossible
    if (d >= 5) {
        bool found = false;
        for (int len = 1; len <= d - 4 && !found; ++len) {
            for_each_path(g, len, [&](const std::vector<int>& p) {
                if (found || !path_is_induced(g, p))
                    return;
                int c1 = p.front(), cm = p.back();
                auto off = [&](int v) {
                    std::vector<int> r;
                    for (int w : g.adj[v])
                        if (std::find(p.begin(), p.end(), w) == p.end())
                            r.push_back(w);
                    return r;
                };
                auto left = off(c1), right = off(cm);
                for (int a : left)
                    for (int b : left) {
                        if (a >= b)
                            continue;
                        for (int y : right)
                            for (int z : right) {
                                if (y >= z)
                                    continue;
                                std::vector<int> six = {a, b, y, z};
                                std::sort(six.begin(), six.end());
                                if (std::unique(six.begin(), six.end()) != six.end())
                                    continue;
                                if (a == y || a == z || b == y || b == z)
                                    continue;
                                // induced: prongs unrelated to the path interior
                                // and to the opposite end; a-b and prong-path
                                // non-edges enforced, y-z free
                                bool ind = !g.has(a, b);
                                for (int v : {a, b})
                                    for (int w : p)
                                        ind = ind && (w == c1 || !g.has(v, w));
                                for (int v : {y, z})
                                    for (int w : p)
                                        ind = ind && (w == cm || !g.has(v, w));
                                for (int v : {a, b})
                                    ind = ind && !g.has(v, y) && !g.has(v, z);
                                if (ind)
                                    found = true;
                            }
                    }
            });
        }
        add("no-octopus", found, false);
    }

    // ufo: induced path a-b-c-e, apex f on b,c, antenna h on f; impossible
    if (d >= 6) {
        bool found = false;
        for_each_path(g, 4, [&](const std::vector<int>& p) {
            if (found || !path_is_induced(g, p))
                return;
            int b = p[1], c = p[2];
            for (int f = 0; f < g.n && !found; ++f) {
                if (std::find(p.begin(), p.end(), f) != p.end())
                    continue;
                if (!g.has(f, b) || !g.has(f, c) || g.has(f, p[0]) || g.has(f, p[3]))
                    continue;
                for (int h : g.adj[f]) {
                    if (std::find(p.begin(), p.end(), h) != p.end())
                        continue;
                    bool ind = true;
                    for (int w : p)
                        ind = ind && !g.has(h, w);
                    if (ind) {
                        found = true;
                        break;
                    }
                }
            }
        });
        add("no-ufo", found, false);
    }

    // five-vertex induced chains: (q22^2 p r - 1)(q44^2 s t - 1) = 0,
    // plus the midpoint refinement when both factors vanish
    if (d >= 5) {
        bool applicable = false, ok = true;
        bool mid_applicable = false, mid_ok = true;
        for_each_path(g, 5, [&](const std::vector<int>& pth) {
            if (pth[0] > pth[4] || !path_is_induced(g, pth))
                return;
            applicable = true;
            const Scalar p = dia.edge(pth[0], pth[1]);
            const Scalar r = dia.edge(pth[1], pth[2]);
            const Scalar s = dia.edge(pth[2], pth[3]);
            const Scalar t = dia.edge(pth[3], pth[4]);
            const Scalar q22 = dia.vertex(pth[1]);
            const Scalar q33 = dia.vertex(pth[2]);
            const Scalar q44 = dia.vertex(pth[3]);
            const Scalar q55 = dia.vertex(pth[4]);
            const bool left = q22 * q22 * p * r == one;
            const bool rightv = q44 * q44 * s * t == one;
            ok = ok && (left || rightv);
            const Scalar mid = q33 * q33 * r * s;
            if (left && rightv && mid != one) {
                mid_applicable = true;
                bool c = (p == s || p * s == one) && (r == t || r * t == one) &&
                         (mid == r || mid == r.inverse()) &&
                         (q22 * r * q33 == minus1 || q22 * r * q33 * mid == one) &&
                         (q33 * s * q44 == minus1 || q33 * s * q44 * mid == one);
                if (q33 * s * q44 == t)
                    c = c && q55 * t == one;
                mid_ok = mid_ok && c;
            }
        });
        add("chain5", applicable, ok);
        add("chain5-mid", mid_applicable, mid_ok);
    }

    // D-shaped subgraphs: induced path w1..wk plus an off-path vertex u on
    // w_{k-1}; every label along the tail is tied to t = edge(w_{k-1}, u)
    if (d >= 4) {
        bool applicable = false, ok = true;
        for (int k = 3; k <= d - 1; ++k) {
            for_each_path(g, k, [&](const std::vector<int>& p) {
                if (!path_is_induced(g, p))
                    return;
                const int hub = p[k - 2];
                for (int u = 0; u < g.n; ++u) {
                    if (std::find(p.begin(), p.end(), u) != p.end())
                        continue;
                    if (!g.has(hub, u))
                        continue;
                    bool ind = true;
                    for (int w : p)
                        ind = ind && (w == hub || !g.has(u, w));
                    if (!ind)
                        continue;
                    applicable = true;
                    const Scalar t = dia.edge(hub, u);
                    const Scalar tinv = t.inverse();
                    bool c = true;
                    for (int j = 0; j < k; ++j) {
                        const Scalar& v = dia.vertex(p[j]);
                        c = c && (v == t || v == tinv || v == minus1);
                    }
                    {
                        const Scalar& v = dia.vertex(u);
                        c = c && (v == t || v == tinv || v == minus1);
                    }
                    for (int j = 0; j + 1 < k; ++j) {
                        const Scalar e = dia.edge(p[j], p[j + 1]);
                        c = c && (e == t || e == tinv);
                    }
                    for (int j = 0; j + 1 < k - 1; ++j)
                        if (dia.vertex(p[j]) == minus1) {
                            const Scalar e = dia.edge(p[j], p[j + 1]);
                            const Scalar& w = dia.vertex(p[j + 1]);
                            c = c && (w == minus1 || e * w == one);
                        }
                    ok = ok && c;
                }
            });
        }
        add("d-graph", applicable, ok);
    }

    return out;
}

namespace {

// is target a nonnegative integer combination of gens[0..upto)
bool in_nonneg_span(const RootVec& target, const std::vector<RootVec>& gens, size_t upto) {
    for (int x : target)
        if (x < 0)
            return false;
    bool zero = std::all_of(target.begin(), target.end(), [](int x) { return x == 0; });
    if (zero)
        return true;
    if (upto == 0)
        return false;
    // try all multiplicities of the last generator, recurse on the rest
    RootVec t = target;
    for (int mult = 0;; ++mult) {
        if (in_nonneg_span(t, gens, upto - 1))
            return true;
        bool fits = true;
        for (size_t k = 0; k < t.size(); ++k) {
            t[k] -= gens[upto - 1][k];
            if (t[k] < 0)
                fits = false;
        }
        if (!fits)
            return false;
        (void)mult;
    }
}

bool linearly_independent(const std::vector<RootVec>& vecs) {
    if (vecs.empty())
        return true;
    std::vector<std::vector<long long>> m;
    for (const auto& v : vecs)
        m.emplace_back(v.begin(), v.end());
    size_t rows = m.size(), cols = m[0].size(), rank = 0;
    for (size_t c = 0; c < cols && rank < rows; ++c) {
        size_t piv = rank;
        while (piv < rows && m[piv][c] == 0)
            ++piv;
        if (piv == rows)
            continue;
        std::swap(m[piv], m[rank]);
        for (size_t r = rank + 1; r < rows; ++r) {
            if (m[r][c] == 0)
                continue;
            long long g = std::gcd(m[r][c], m[rank][c]);
            long long fr = m[rank][c] / g, fp = m[r][c] / g;
            for (size_t k = 0; k < cols; ++k)
                m[r][k] = m[r][k] * fr - m[rank][k] * fp;
        }
        ++rank;
    }
    return rank == rows;
}

} // namespace

int subsystem_obstruction(const GroupoidResult& r, const std::vector<RootVec>& roots) {
    for (size_t j = 0; j < roots.size(); ++j) {
        for (const RootVec& beta : r.roots) {
            if (beta == roots[j])
                continue;
            RootVec diff(beta.size());
            for (size_t k = 0; k < beta.size(); ++k)
                diff[k] = roots[j][k] - beta[k];
            if (in_nonneg_span(diff, roots, j))
                return static_cast<int>(j + 1);
        }
    }
    return 0;
}

int subsystem_obstruction_conservative(int dim, const std::vector<RootVec>& roots) {
    for (size_t j = 0; j < roots.size(); ++j) {
        const RootVec& aj = roots[j];
        if (static_cast<int>(aj.size()) != dim)
            throw StateError("subsystem root " + std::to_string(j + 1) + " has wrong length");
        int maxc = 0;
        for (int x : aj)
            maxc = std::max(maxc, x);
        // enumerate m in [0, maxc]^j; any hit outside the box reduces into it
        std::vector<int> m(j, 0);
        while (true) {
            RootVec diff = aj;
            for (size_t i = 0; i < j; ++i)
                for (size_t k = 0; k < diff.size(); ++k)
                    diff[k] -= m[i] * roots[i][k];
            bool nonneg = true, nonpos = true, is_aj = true;
            for (size_t k = 0; k < diff.size(); ++k) {
                nonneg = nonneg && diff[k] >= 0;
                nonpos = nonpos && diff[k] <= 0;
                is_aj = is_aj && diff[k] == aj[k];
            }
            if ((nonneg && !is_aj) || nonpos)
                return static_cast<int>(j + 1);
            size_t pos = 0;
            while (pos < j && m[pos] == maxc)
                m[pos++] = 0;
            if (pos == j)
                break;
            ++m[pos];
        }
    }
    return 0;
}

BicharacterMatrix root_subsystem(const BicharacterMatrix& m, const GroupoidResult& r,
                                 const std::vector<RootVec>& roots) {
    if (r.verdict != Verdict::full_finite)
        throw StateError("root_subsystem needs a full_finite exploration");
    if (roots.empty())
        throw StateError("root_subsystem needs at least one root");
    auto pos = positive_roots(r);
    for (size_t j = 0; j < roots.size(); ++j)
        if (!pos.count(roots[j]))
            throw StateError("root " + print_root(roots[j]) + " (position " + std::to_string(j + 1) +
                             ") is not a positive root");
    if (!linearly_independent(roots))
        throw StateError("subsystem roots are linearly dependent");
    if (int j = subsystem_obstruction(r, roots))
        throw StateError("non-representability condition fails at root " + std::to_string(j));
    BicharacterMatrix out(static_cast<int>(roots.size()), m.modulus());
    for (size_t a = 0; a < roots.size(); ++a)
        for (size_t b = 0; b < roots.size(); ++b)
            out.at(static_cast<int>(a), static_cast<int>(b)) = chi_of(m, roots[a], roots[b]);
    return out;
}

} // namespace wg
