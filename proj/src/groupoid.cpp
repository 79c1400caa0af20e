#include "wg/groupoid.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

namespace wg {

Basis Basis::standard(int dim) {
    Basis b;
    b.f.assign(dim, RootVec(dim, 0));
    for (int i = 0; i < dim; ++i)
        b.f[i][i] = 1;
    return b;
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::full_finite:
        return "full_finite";
    case Verdict::not_full:
        return "not_full";
    case Verdict::cap_exceeded:
        return "cap_exceeded";
    }
    return "?";
}

Basis GroupoidResult::basis(size_t k) const {
    Basis b;
    b.f.assign(dim, RootVec(dim));
    const int16_t* p = basis_raw(k);
    for (int i = 0; i < dim; ++i)
        for (int v = 0; v < dim; ++v)
            b.f[i][v] = p[i * dim + v];
    return b;
}

std::optional<long long> cartan_integer(const BicharacterMatrix& m, const Basis& f, int i,
                                        int j) {
    if (i == j)
        throw StateError("cartan_integer needs i != j");
    const RootVec& fi = f.f[i - 1];
    const RootVec& fj = f.f[j - 1];
    const Scalar p = chi_of(m, fi, fi);
    const Scalar r = chi_of(m, fi, fj) * chi_of(m, fj, fi);
    auto mm = cartan_exponent(p, r);
    if (!mm)
        return std::nullopt;
    return -*mm;
}

Basis reflect(const BicharacterMatrix& m, const Basis& f, int i) {
    const int d = f.dim();
    Basis out = f;
    for (int v = 0; v < d; ++v)
        out.f[i - 1][v] = -f.f[i - 1][v];
    for (int j = 1; j <= d; ++j) {
        if (j == i)
            continue;
        auto a = cartan_integer(m, f, i, j);
        if (!a)
            throw ReflectionUndefined(f, i, j,
                                      "reflection at " + std::to_string(i) +
                                          " undefined: no Cartan integer for pair (" +
                                          std::to_string(i) + "," + std::to_string(j) + ")");
        const long long c = -*a;
        if (c != 0)
            for (int v = 0; v < d; ++v)
                out.f[j - 1][v] = static_cast<int>(f.f[j - 1][v] + c * f.f[i - 1][v]);
    }
    return out;
}

namespace {

// exponent-level view of the bicharacter for the exploration hot path;
// bases live as flat row-major d*d coordinate arrays
struct FlatChi {
    int d;
    int n;
    std::vector<long long> free;
    std::vector<int> tor;

    explicit FlatChi(const BicharacterMatrix& m) : d(m.dim()), n(m.modulus()) {
        free.resize(static_cast<size_t>(d) * d);
        tor.resize(static_cast<size_t>(d) * d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                free[static_cast<size_t>(i) * d + j] = m.at(i, j).free_exp();
                tor[static_cast<size_t>(i) * d + j] = m.at(i, j).tor_exp();
            }
    }

    // coordinates stay within 16 bits and exponents are small, so the
    // accumulators cannot overflow before the final reduction
    Scalar chi(const int16_t* x, const int16_t* y) const {
        long long fe = 0, te = 0;
        for (int i = 0; i < d; ++i) {
            if (x[i] == 0)
                continue;
            const size_t row = static_cast<size_t>(i) * d;
            for (int j = 0; j < d; ++j) {
                if (y[j] == 0)
                    continue;
                const long long c = static_cast<long long>(x[i]) * y[j];
                fe += free[row + j] * c;
                te += tor[row + j] * c;
            }
        }
        return Scalar(fe, te % n, n);
    }
};

// open-addressing set of fixed-stride int16 arrays living in one arena
struct VisitedTable {
    int stride;
    std::vector<int16_t> arena;
    std::vector<uint32_t> slots; // arena index + 1; 0 marks empty
    size_t count = 0;

    explicit VisitedTable(int stride_) : stride(stride_), slots(1 << 12, 0) {}

    static size_t hash(const int16_t* b, int stride) {
        size_t h = 1469598103934665603ull;
        for (int k = 0; k < stride; ++k) {
            h ^= static_cast<size_t>(static_cast<uint16_t>(b[k]));
            h *= 1099511628211ull;
        }
        return h;
    }

    const int16_t* at(size_t k) const { return arena.data() + k * stride; }

    bool insert(const int16_t* b) {
        if (2 * (count + 1) > slots.size())
            grow();
        size_t mask = slots.size() - 1;
        size_t pos = hash(b, stride) & mask;
        while (slots[pos]) {
            if (std::equal(b, b + stride, at(slots[pos] - 1)))
                return false;
            pos = (pos + 1) & mask;
        }
        arena.insert(arena.end(), b, b + stride);
        slots[pos] = static_cast<uint32_t>(++count);
        return true;
    }

    void grow() {
        std::vector<uint32_t> bigger(slots.size() * 2, 0);
        size_t mask = bigger.size() - 1;
        for (uint32_t s : slots) {
            if (!s)
                continue;
            size_t pos = hash(at(s - 1), stride) & mask;
            while (bigger[pos])
                pos = (pos + 1) & mask;
            bigger[pos] = s;
        }
        slots.swap(bigger);
    }
};

// reflect flat basis at index i (0-based); fail_j reports the pair with no
// Cartan integer, capped flags a coordinate beyond the cap
bool reflect_flat(const FlatChi& chi, const int16_t* f, int i, std::vector<int16_t>& out,
                  long long max_coeff, int& fail_j, bool& capped) {
    const int d = chi.d;
    out.assign(f, f + static_cast<size_t>(d) * d);
    const int16_t* fi = f + static_cast<size_t>(i) * d;
    const Scalar p = chi.chi(fi, fi);
    for (int v = 0; v < d; ++v)
        out[static_cast<size_t>(i) * d + v] = static_cast<int16_t>(-fi[v]);
    for (int j = 0; j < d; ++j) {
        if (j == i)
            continue;
        const int16_t* fj = f + static_cast<size_t>(j) * d;
        const Scalar r = chi.chi(fi, fj) * chi.chi(fj, fi);
        auto mm = cartan_exponent(p, r);
        if (!mm) {
            fail_j = j;
            return false;
        }
        if (*mm != 0)
            for (int v = 0; v < d; ++v) {
                long long nv = fj[v] + *mm * fi[v];
                if (std::abs(nv) > max_coeff) {
                    capped = true;
                    nv = nv < 0 ? -32767 : 32767;
                }
                out[static_cast<size_t>(j) * d + v] = static_cast<int16_t>(nv);
            }
    }
    return true;
}

Basis unflatten(const int16_t* f, int d) {
    Basis b;
    b.f.assign(d, RootVec(d));
    for (int i = 0; i < d; ++i)
        for (int v = 0; v < d; ++v)
            b.f[i][v] = f[i * d + v];
    return b;
}

} // namespace

GroupoidResult explore(const BicharacterMatrix& m, const ExploreCaps& caps) {
    const int d = m.dim();
    for (int i = 0; i < d; ++i)
        if (m.at(i, i).is_one())
            throw StateError("explore needs q_ii != 1 for all i (vertex " + std::to_string(i + 1) +
                             " is 1)");
    const long long coeff_cap = std::min<long long>(caps.max_coeff, 32767);
    const FlatChi chi(m);
    const int stride = d * d;
    GroupoidResult res;
    res.dim = d;

    VisitedTable seen(stride);
    std::vector<int16_t> start(stride, 0);
    for (int i = 0; i < d; ++i)
        start[static_cast<size_t>(i) * d + i] = 1;
    seen.insert(start.data());

    std::vector<uint32_t> frontier{0};
    std::vector<uint32_t> order;
    int depth = 0;
    std::vector<int16_t> child;

    auto finalize = [&](Verdict v) {
        res.verdict = v;
        res.depth = depth;
        res.basis_count = order.size();
        res.basis_data.reserve(order.size() * stride);
        struct VecHash {
            size_t operator()(const RootVec& v) const {
                size_t h = 1469598103934665603ull;
                for (int x : v) {
                    h ^= static_cast<size_t>(static_cast<unsigned>(x));
                    h *= 1099511628211ull;
                }
                return h;
            }
        };
        std::unordered_set<RootVec, VecHash> roots;
        RootVec vec(d), neg(d);
        for (uint32_t k : order) {
            const int16_t* b = seen.at(k);
            res.basis_data.insert(res.basis_data.end(), b, b + stride);
            for (int i = 0; i < d; ++i) {
                for (int v = 0; v < d; ++v) {
                    vec[v] = b[i * d + v];
                    neg[v] = -vec[v];
                }
                roots.insert(vec);
                roots.insert(neg);
            }
        }
        res.roots.insert(roots.begin(), roots.end());
        return res;
    };

    auto level_less = [&](uint32_t a, uint32_t b) {
        return std::lexicographical_compare(seen.at(a), seen.at(a) + stride, seen.at(b),
                                            seen.at(b) + stride);
    };

    while (!frontier.empty()) {
        std::sort(frontier.begin(), frontier.end(), level_less);
        std::vector<uint32_t> next;
        for (uint32_t bk : frontier) {
            order.push_back(bk);
            for (int i = 0; i < d; ++i) {
                int fail_j = 0;
                bool capped = false;
                // seen.at(bk) stays valid within this call: inserts may grow
                // the arena, so re-resolve the pointer each round
                if (!reflect_flat(chi, seen.at(bk), i, child, coeff_cap, fail_j, capped)) {
                    res.failure_basis = unflatten(seen.at(bk), d);
                    res.failure_i = i + 1;
                    res.failure_j = fail_j + 1;
                    return finalize(Verdict::not_full);
                }
                if (capped)
                    return finalize(Verdict::cap_exceeded);
                if (seen.insert(child.data())) {
                    if (seen.count > caps.max_bases)
                        return finalize(Verdict::cap_exceeded);
                    next.push_back(static_cast<uint32_t>(seen.count - 1));
                }
            }
        }
        if (!next.empty())
            ++depth;
        frontier = std::move(next);
    }
    return finalize(Verdict::full_finite);
}

std::set<RootVec> positive_roots(const GroupoidResult& r) {
    if (r.verdict != Verdict::full_finite)
        throw StateError("positive_roots needs a full_finite result, got " + to_string(r.verdict));
    std::set<RootVec> out;
    for (const RootVec& v : r.roots) {
        bool nonneg = true;
        for (int x : v)
            nonneg = nonneg && x >= 0;
        if (nonneg)
            out.insert(v);
    }
    return out;
}

WordResult apply_word(const BicharacterMatrix& m, const ReflectionWord& w) {
    WordResult res;
    res.final = Basis::standard(m.dim());
    res.trace.push_back(res.final);
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        if (*it < 1 || *it > m.dim())
            throw StateError("word letter " + std::to_string(*it) + " out of range 1.." +
                             std::to_string(m.dim()));
        try {
            res.final = reflect(m, res.final, *it);
        } catch (ReflectionUndefined& e) {
            e.word_position = static_cast<int>(it - w.rbegin()) + 1;
            throw;
        }
        res.trace.push_back(res.final);
    }
    return res;
}

bool witnesses_finiteness_induction(const BicharacterMatrix& m, const ReflectionWord& w,
                                    const ExploreCaps& caps) {
    const int d = m.dim();
    WordResult r = apply_word(m, w);
    std::vector<char> kept(d, 0);
    int negatives = 0;
    for (const RootVec& v : r.final.f) {
        int unit = -1;
        bool is_unit = true, nonpos = true;
        for (int k = 0; k < d; ++k) {
            if (v[k] < 0)
                is_unit = false;
            if (v[k] > 0)
                nonpos = false;
            if (v[k] != 0) {
                if (unit >= 0 || v[k] != 1)
                    is_unit = false;
                if (unit < 0)
                    unit = k;
            }
        }
        if (is_unit && unit >= 0) {
            if (kept[unit])
                return false;
            kept[unit] = 1;
        } else if (nonpos) {
            ++negatives;
        } else {
            return false;
        }
    }
    if (negatives != 1)
        return false;
    int missing = -1;
    for (int k = 0; k < d; ++k)
        if (!kept[k])
            missing = k;
    if (missing < 0)
        return false;
    std::vector<int> rest;
    for (int k = 1; k <= d; ++k)
        if (k != missing + 1)
            rest.push_back(k);
    GroupoidResult sub = explore(restrict(m, rest), caps);
    return sub.verdict == Verdict::full_finite;
}

BicharacterMatrix matrix_at_basis(const BicharacterMatrix& m, const Basis& f) {
    const int d = m.dim();
    BicharacterMatrix out(d, m.modulus());
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            out.at(i, j) = chi_of(m, f.f[i], f.f[j]);
    return out;
}

std::set<std::vector<long long>> orbit_diagram_keys(const BicharacterMatrix& m,
                                                    const ExploreCaps& caps) {
    return orbit_diagram_keys(m, explore(m, caps));
}

std::set<std::vector<long long>> orbit_diagram_keys(const BicharacterMatrix& m,
                                                    const GroupoidResult& r) {
    if (r.verdict != Verdict::full_finite)
        throw StateError("orbit diagrams need a full_finite groupoid, got " +
                         to_string(r.verdict));
    const FlatChi chi(m);
    const int d = m.dim();
    // dedupe raw diagrams first; canonicalization costs d! per distinct one
    struct VecHash {
        size_t operator()(const std::vector<long long>& v) const {
            size_t h = 1469598103934665603ull;
            for (long long x : v) {
                h ^= static_cast<size_t>(x);
                h *= 1099511628211ull;
            }
            return h;
        }
    };
    std::unordered_set<std::vector<long long>, VecHash> raw;
    std::set<std::vector<long long>> keys;
    std::vector<long long> enc;
    for (size_t k = 0; k < r.basis_count; ++k) {
        const int16_t* b = r.basis_raw(k);
        enc.clear();
        std::vector<Scalar> verts(d, Scalar::one(m.modulus()));
        for (int i = 0; i < d; ++i) {
            verts[i] = chi.chi(b + i * d, b + i * d);
            enc.push_back(verts[i].free_exp());
            enc.push_back(verts[i].tor_exp());
        }
        std::vector<Scalar> edges;
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) {
                Scalar e = chi.chi(b + i * d, b + j * d) * chi.chi(b + j * d, b + i * d);
                edges.push_back(e);
                enc.push_back(e.free_exp());
                enc.push_back(e.tor_exp());
            }
        if (!raw.insert(enc).second)
            continue;
        DynkinDiagram dia(d, m.modulus());
        size_t eix = 0;
        for (int i = 0; i < d; ++i) {
            dia.vertex(i) = verts[i];
            for (int j = i + 1; j < d; ++j)
                dia.set_edge(i, j, edges[eix++]);
        }
        keys.insert(dia.canonical_key());
    }
    return keys;
}

bool weyl_equivalent(const BicharacterMatrix& m1, const BicharacterMatrix& m2,
                     const ExploreCaps& caps) {
    if (m1.dim() != m2.dim())
        throw StateError("Weyl equivalence needs equal dimensions");
    auto k1 = orbit_diagram_keys(m1, caps);
    auto k2 = orbit_diagram_keys(m2, caps);
    for (const auto& k : k1)
        if (k2.count(k))
            return true;
    return false;
}

namespace {

// integer inverse of the transpose of a unimodular basis matrix: solves
// coordinates c with sum_i c_i f_i = x via c = inv * x
std::vector<long long> transpose_inverse(const int16_t* f, int d) {
    // Gauss-Jordan on [B^T | I] over rationals kept as exact integers: at
    // each step rows are cross-multiplied; unimodularity makes the final
    // division exact
    std::vector<std::vector<long long>> a(d, std::vector<long long>(2 * d, 0));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            a[j][i] = f[i * d + j]; // B^T
    for (int i = 0; i < d; ++i)
        a[i][d + i] = 1;
    for (int col = 0; col < d; ++col) {
        int piv = -1;
        for (int r = col; r < d; ++r)
            if (a[r][col] != 0 && (piv < 0 || std::abs(a[r][col]) < std::abs(a[piv][col])))
                piv = r;
        std::swap(a[piv], a[col]);
        for (int r = 0; r < d; ++r) {
            if (r == col || a[r][col] == 0)
                continue;
            long long g = std::gcd(a[r][col], a[col][col]);
            long long fr = a[col][col] / g, fp = a[r][col] / g;
            for (int c = 0; c < 2 * d; ++c)
                a[r][c] = a[r][c] * fr - a[col][c] * fp;
        }
    }
    std::vector<long long> inv(static_cast<size_t>(d) * d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
            long long num = a[r][d + c];
            if (num % a[r][r] != 0)
                throw StateError("basis matrix is not unimodular");
            inv[static_cast<size_t>(r) * d + c] = num / a[r][r];
        }
    return inv;
}

} // namespace

std::string check_root_propositions(const BicharacterMatrix& m, const GroupoidResult& r) {
    if (r.verdict != Verdict::full_finite)
        return "exploration is not full_finite";
    const int d = m.dim();
    const FlatChi chi(m);
    std::vector<RootVec> roots(r.roots.begin(), r.roots.end());
    std::vector<std::vector<long long>> coords(roots.size(), std::vector<long long>(d));
    std::vector<long long> mrow(d);
    for (size_t k = 0; k < r.basis_count; ++k) {
        const int16_t* b = r.basis_raw(k);
        std::vector<long long> inv = transpose_inverse(b, d);
        for (size_t t = 0; t < roots.size(); ++t)
            for (int i = 0; i < d; ++i) {
                long long s = 0;
                for (int j = 0; j < d; ++j)
                    s += inv[static_cast<size_t>(i) * d + j] * roots[t][j];
                coords[t][i] = s;
            }
        // positivity split at this basis
        for (size_t t = 0; t < roots.size(); ++t) {
            bool nonneg = true, nonpos = true;
            for (int i = 0; i < d; ++i) {
                nonneg = nonneg && coords[t][i] >= 0;
                nonpos = nonpos && coords[t][i] <= 0;
            }
            if (!nonneg && !nonpos)
                return "root " + print_root(roots[t]) + " is not one-signed at basis " +
                       print_basis_tuple(unflatten(b, d));
        }
        // each reflection must move exactly its own vector out of the
        // positive system: in s_i(F)-coordinates only slot i changes, to
        // sum_j m_ij c_j - c_i
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                if (j == i) {
                    mrow[j] = 0;
                    continue;
                }
                const Scalar p = chi.chi(b + i * d, b + i * d);
                const Scalar rr =
                    chi.chi(b + i * d, b + j * d) * chi.chi(b + j * d, b + i * d);
                auto mm = cartan_exponent(p, rr);
                if (!mm)
                    return "reflection undefined inside a full_finite exploration";
                mrow[j] = *mm;
            }
            for (size_t t = 0; t < roots.size(); ++t) {
                bool pos_before = true;
                for (int j = 0; j < d; ++j)
                    pos_before = pos_before && coords[t][j] >= 0;
                long long ci = 0;
                for (int j = 0; j < d; ++j)
                    ci += j == i ? -coords[t][i] : mrow[j] * coords[t][j];
                bool pos_after = ci >= 0;
                for (int j = 0; j < d; ++j)
                    if (j != i)
                        pos_after = pos_after && coords[t][j] >= 0;
                bool is_fi = true, is_minus_fi = true;
                for (int j = 0; j < d; ++j) {
                    is_fi = is_fi && coords[t][j] == (j == i ? 1 : 0);
                    is_minus_fi = is_minus_fi && coords[t][j] == (j == i ? -1 : 0);
                }
                bool expect = (pos_before && !is_fi) || is_minus_fi;
                if (pos_after != expect)
                    return "positive system not shifted by exactly one root at basis " +
                           print_basis_tuple(unflatten(b, d)) + " direction " +
                           std::to_string(i + 1);
            }
        }
    }
    return "";
}

std::string print_root(const RootVec& v) {
    bool nonneg = true, nonpos = true, zero = true;
    for (int x : v) {
        nonneg = nonneg && x >= 0;
        nonpos = nonpos && x <= 0;
        zero = zero && x == 0;
    }
    if (zero)
        return "0";
    if (!nonneg && !nonpos) { // not a signed root; plain coordinate list
        std::string s = "[";
        for (size_t i = 0; i < v.size(); ++i)
            s += (i ? "," : "") + std::to_string(v[i]);
        return s + "]";
    }
    std::string s;
    if (nonpos)
        s += '-';
    for (size_t i = 0; i < v.size(); ++i) {
        int c = std::abs(v[i]);
        if (c == 0)
            continue;
        s += std::to_string(i + 1);
        if (c != 1)
            s += '^' + std::to_string(c);
    }
    return s;
}

std::string print_basis_tuple(const Basis& f) {
    std::string s = "(";
    for (int i = 0; i < f.dim(); ++i)
        s += (i ? "," : "") + print_root(f.f[i]);
    return s + ")";
}

std::string GroupoidResult::to_json() const {
    nlohmann::json j;
    j["verdict"] = to_string(verdict);
    j["num_bases"] = basis_count;
    j["num_roots"] = roots.size();
    j["depth"] = depth;
    auto pos = nlohmann::json::array();
    if (verdict == Verdict::full_finite)
        for (const RootVec& v : positive_roots(*this))
            pos.push_back(v);
    j["positive_roots"] = pos;
    return j.dump();
}

} // namespace wg
