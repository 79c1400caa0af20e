#include "wg/diagram.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace wg {

Scalar chi_of(const BicharacterMatrix& m, std::span<const int> x, std::span<const int> y) {
    if (static_cast<int>(x.size()) != m.dim() || static_cast<int>(y.size()) != m.dim())
        throw DiagramError("chi_of: vector length does not match dim " + std::to_string(m.dim()));
    long long free = 0;
    long long tor = 0;
    const int n = m.modulus();
    for (int i = 0; i < m.dim(); ++i) {
        if (x[i] == 0)
            continue;
        for (int j = 0; j < m.dim(); ++j) {
            if (y[j] == 0)
                continue;
            const long long c = static_cast<long long>(x[i]) * y[j];
            const Scalar& q = m.at(i, j);
            free += q.free_exp() * c;
            tor = (tor + q.tor_exp() * (c % n)) % n;
        }
    }
    return Scalar(free, tor, n);
}

std::vector<long long> DynkinDiagram::canonical_key() const {
    const int d = dim_;
    std::vector<int> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<long long> best, cur;
    const size_t keylen = 2 * (static_cast<size_t>(d) + static_cast<size_t>(d) * (d - 1) / 2);
    cur.reserve(keylen);
    do {
        cur.clear();
        for (int i = 0; i < d; ++i) {
            cur.push_back(vertex_[perm[i]].free_exp());
            cur.push_back(vertex_[perm[i]].tor_exp());
        }
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) {
                const Scalar& e = edge(perm[i], perm[j]);
                cur.push_back(e.free_exp());
                cur.push_back(e.tor_exp());
            }
        if (best.empty() || cur < best)
            best = cur;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::string DynkinDiagram::to_json() const {
    nlohmann::json j;
    j["dim"] = dim_;
    auto verts = nlohmann::json::array();
    for (int i = 0; i < dim_; ++i)
        verts.push_back(to_string(vertex_[i]));
    j["vertices"] = verts;
    auto edges = nlohmann::json::array();
    for (int i = 0; i < dim_; ++i)
        for (int k = i + 1; k < dim_; ++k)
            if (has_edge(i, k))
                edges.push_back({i + 1, k + 1, to_string(edge(i, k))});
    j["edges"] = edges;
    return j.dump();
}

DynkinDiagram to_dynkin(const BicharacterMatrix& m) {
    DynkinDiagram d(m.dim(), m.modulus());
    for (int i = 0; i < m.dim(); ++i) {
        d.vertex(i) = m.at(i, i);
        for (int j = i + 1; j < m.dim(); ++j)
            d.set_edge(i, j, m.edge_product(i, j));
    }
    return d;
}

BicharacterMatrix to_matrix(const DynkinDiagram& d) {
    BicharacterMatrix m(d.dim(), d.modulus());
    for (int i = 0; i < d.dim(); ++i) {
        m.at(i, i) = d.vertex(i);
        for (int j = i + 1; j < d.dim(); ++j)
            m.at(i, j) = d.edge(i, j);
    }
    return m;
}

bool is_connected(const DynkinDiagram& d) {
    if (d.dim() <= 1)
        return d.dim() == 1;
    std::vector<char> seen(d.dim(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w = 0; w < d.dim(); ++w)
            if (!seen[w] && d.has_edge(v, w)) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
    }
    return count == d.dim();
}

std::optional<std::vector<int>> detect_cartan_type(const BicharacterMatrix& m) {
    const int d = m.dim();
    for (int i = 0; i < d; ++i)
        if (m.at(i, i).is_one())
            throw DiagramError("Cartan-type detection needs q_ii != 1 (vertex " +
                               std::to_string(i + 1) + " is 1)");
    std::vector<int> cartan(static_cast<size_t>(d) * d, 0);
    for (int i = 0; i < d; ++i) {
        cartan[static_cast<size_t>(i) * d + i] = 2;
        for (int j = 0; j < d; ++j) {
            if (i == j)
                continue;
            auto mij = cartan_exponent(m.at(i, i), m.edge_product(i, j));
            if (!mij)
                return std::nullopt;
            // only the genuine exponent relation counts, not the torsion escape
            if (m.edge_product(i, j) != m.at(i, i).pow(-*mij))
                return std::nullopt;
            cartan[static_cast<size_t>(i) * d + j] = static_cast<int>(-*mij);
        }
    }
    return cartan;
}

DynkinDiagram build_simple_chain(const SimpleChainSpec& spec) {
    const int d = spec.length;
    if (d < 1)
        throw DiagramError("simple chain length must be >= 1");
    if (spec.q.is_one())
        throw DiagramError("simple chain parameter q must differ from 1");
    std::vector<char> marked(d + 1, 0);
    int prev = 0;
    for (int ix : spec.indices) {
        if (ix < 1 || ix > d || ix <= prev)
            throw DiagramError("simple chain indices must be strictly increasing within 1.." +
                               std::to_string(d));
        marked[ix] = 1;
        prev = ix;
    }
    const int n = spec.q.modulus();
    const Scalar q = spec.q;
    const Scalar qinv = q.inverse();
    const Scalar minus1 = Scalar::minus_one(n);
    // p[i] = edge product between i-1 and i (p[1] is the virtual left edge)
    std::vector<Scalar> p(d + 1, Scalar::one(n));
    for (int i = 1; i <= d; ++i)
        p[i] = marked[i] ? q : qinv;

    DynkinDiagram out(d, n);
    for (int i = 1; i < d; ++i) {
        out.vertex(i - 1) = (p[i] == p[i + 1]) ? p[i].inverse() : minus1;
        out.set_edge(i - 1, i, p[i + 1]);
    }
    out.vertex(d - 1) = marked[d] ? minus1 : q;
    return out;
}

BicharacterMatrix restrict(const BicharacterMatrix& m, const std::vector<int>& subset) {
    if (subset.empty())
        throw DiagramError("restriction needs a nonempty index set");
    for (int ix : subset)
        if (ix < 1 || ix > m.dim())
            throw DiagramError("restriction index " + std::to_string(ix) + " out of range 1.." +
                               std::to_string(m.dim()));
    BicharacterMatrix out(static_cast<int>(subset.size()), m.modulus());
    for (size_t a = 0; a < subset.size(); ++a)
        for (size_t b = 0; b < subset.size(); ++b)
            out.at(static_cast<int>(a), static_cast<int>(b)) = m.at(subset[a] - 1, subset[b] - 1);
    return out;
}

Scalar DiagramTemplate::default_param() const {
    switch (gen_kind_) {
    case GenKind::generic:
        return Scalar::generator(torsion_);
    case GenKind::order:
        return Scalar::root_of_unity(gen_order_, torsion_);
    case GenKind::none:
        return Scalar::one(torsion_);
    }
    return Scalar::one(torsion_);
}

Scalar DiagramTemplate::eval(const Expr& e, const Scalar& param) const {
    return param.pow(e.qexp) * Scalar(0, e.tor, torsion_);
}

DynkinDiagram DiagramTemplate::instantiate(const Scalar& param) const {
    if (param.modulus() != torsion_)
        throw ConfigError("parameter torsion order " + std::to_string(param.modulus()) +
                          " does not match file torsion " + std::to_string(torsion_));
    DynkinDiagram d(dim_, torsion_);
    for (int i = 0; i < dim_; ++i)
        d.vertex(i) = eval(vertex_[i], param);
    for (const auto& [ij, e] : edges_)
        d.set_edge(ij.first - 1, ij.second - 1, eval(e, param));
    return d;
}

BicharacterMatrix DiagramTemplate::instantiate_matrix(const Scalar& param) const {
    return to_matrix(instantiate(param));
}

DiagramTemplate DiagramTemplate::parse(std::istream& in, const std::string& source_name) {
    DiagramTemplate t;
    std::string line;
    int lineno = 0;
    bool have_dim = false;
    std::vector<char> vertex_set;
    auto fail = [&](const std::string& what) {
        throw ParseError(source_name + ":" + std::to_string(lineno) + ": " + what);
    };
    std::vector<std::tuple<int, int, std::string>> raw_edges;
    std::vector<std::pair<int, std::string>> raw_vertices;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw))
            continue;
        if (kw == "dim") {
            if (!(ls >> t.dim_) || t.dim_ < 1)
                fail("bad dim line");
            have_dim = true;
            vertex_set.assign(t.dim_, 0);
        } else if (kw == "torsion") {
            if (!(ls >> t.torsion_) || t.torsion_ < 2 || t.torsion_ % 2)
                fail("torsion must be even and >= 2");
        } else if (kw == "gen") {
            std::string name, kind;
            if (!(ls >> name >> kind) || name != "q")
                fail("expected 'gen q generic' or 'gen q order K'");
            if (kind == "generic") {
                t.gen_kind_ = GenKind::generic;
            } else if (kind == "order") {
                t.gen_kind_ = GenKind::order;
                if (!(ls >> t.gen_order_) || t.gen_order_ < 1)
                    fail("bad generator order");
            } else {
                fail("unknown generator kind '" + kind + "'");
            }
        } else if (kw == "v") {
            int i;
            std::string lit;
            if (!(ls >> i >> lit))
                fail("bad vertex line");
            raw_vertices.emplace_back(i, lit);
        } else if (kw == "e") {
            int i, j;
            std::string lit;
            if (!(ls >> i >> j >> lit))
                fail("bad edge line");
            raw_edges.emplace_back(i, j, lit);
        } else {
            fail("unknown keyword '" + kw + "'");
        }
    }
    lineno = 0;
    if (!have_dim)
        fail("missing dim line");
    if (t.gen_kind_ == GenKind::order && t.torsion_ % t.gen_order_ != 0)
        fail("generator order must divide torsion order");
    t.vertex_.assign(t.dim_, Expr{});
    auto to_expr = [&](const std::string& lit) {
        Scalar s = parse_scalar(lit, t.torsion_);
        return Expr{s.free_exp(), s.tor_exp()};
    };
    for (auto& [i, lit] : raw_vertices) {
        if (i < 1 || i > t.dim_)
            fail("vertex index " + std::to_string(i) + " out of range");
        t.vertex_[i - 1] = to_expr(lit);
        vertex_set[i - 1] = 1;
    }
    for (int i = 0; i < t.dim_; ++i)
        if (!vertex_set[i])
            fail("vertex " + std::to_string(i + 1) + " has no label");
    for (auto& [i, j, lit] : raw_edges) {
        if (i < 1 || i > t.dim_ || j < 1 || j > t.dim_ || i == j)
            fail("bad edge endpoints " + std::to_string(i) + "," + std::to_string(j));
        t.edges_.push_back({{std::min(i, j), std::max(i, j)}, to_expr(lit)});
    }
    return t;
}

DiagramTemplate DiagramTemplate::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open diagram file " + path);
    return parse(in, path);
}

DiagramTemplate DiagramTemplate::from_diagram(const DynkinDiagram& d) {
    DiagramTemplate t;
    t.dim_ = d.dim();
    t.torsion_ = d.modulus();
    t.gen_kind_ = GenKind::none;
    for (int i = 0; i < d.dim(); ++i) {
        if (d.vertex(i).free_exp() != 0)
            throw DiagramError("from_diagram needs torsion-only labels");
        t.vertex_.push_back({0, d.vertex(i).tor_exp()});
    }
    for (int i = 0; i < d.dim(); ++i)
        for (int j = i + 1; j < d.dim(); ++j)
            if (d.has_edge(i, j)) {
                if (d.edge(i, j).free_exp() != 0)
                    throw DiagramError("from_diagram needs torsion-only labels");
                t.edges_.push_back({{i + 1, j + 1}, {0, d.edge(i, j).tor_exp()}});
            }
    return t;
}

std::string DiagramTemplate::to_file_string() const {
    std::ostringstream out;
    out << "dim " << dim_ << "\n";
    if (torsion_ != 2520)
        out << "torsion " << torsion_ << "\n";
    if (gen_kind_ == GenKind::generic)
        out << "gen q generic\n";
    else if (gen_kind_ == GenKind::order)
        out << "gen q order " << gen_order_ << "\n";
    auto expr_str = [&](const Expr& e) {
        return to_string(Scalar(e.qexp, e.tor, torsion_));
    };
    for (int i = 0; i < dim_; ++i)
        out << "v " << i + 1 << " " << expr_str(vertex_[i]) << "\n";
    for (const auto& [ij, e] : edges_)
        out << "e " << ij.first << " " << ij.second << " " << expr_str(e) << "\n";
    return out.str();
}

} // namespace wg
