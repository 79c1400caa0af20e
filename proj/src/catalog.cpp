#include "wg/catalog.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace wg {

std::string to_string(Table t) { return t == Table::rank4 ? "rank4" : "rank_ge5"; }

static Table table_from_string(const std::string& s) {
    if (s == "rank4")
        return Table::rank4;
    if (s == "rank_ge5")
        return Table::rank_ge5;
    throw ParseError("unknown table name '" + s + "'");
}

bool ParamConstraint::admits(const Scalar& p) const {
    if (primitive_order)
        return is_primitive_root(p, primitive_order);
    for (long long k : nonunit_powers)
        if (p.pow(k).is_one())
            return false;
    return true;
}

ParamConstraint ParamConstraint::parse(const std::string& s) {
    ParamConstraint c;
    c.text = s;
    c.nonunit_powers.clear();
    std::stringstream ss(s);
    std::string atom;
    while (std::getline(ss, atom, ',')) {
        if (atom.empty())
            continue;
        if (atom[0] == 'R') {
            c.primitive_order = std::stoi(atom.substr(1));
        } else if (atom == "q!=1") {
            c.nonunit_powers.push_back(1);
        } else if (atom.rfind("q^", 0) == 0) {
            auto bang = atom.find("!=1");
            if (bang == std::string::npos)
                throw ParseError("bad constraint atom '" + atom + "'");
            c.nonunit_powers.push_back(std::stoll(atom.substr(2, bang - 2)));
        } else {
            throw ParseError("bad constraint atom '" + atom + "'");
        }
    }
    return c;
}

std::vector<Scalar> ParamConstraint::sample_params(int modulus) const {
    std::vector<Scalar> out;
    if (primitive_order) {
        // both "directions" of a primitive root
        out.push_back(Scalar::root_of_unity(primitive_order, modulus));
        int k = primitive_order - 1; // order n again, inverse of the first
        out.push_back(Scalar::root_of_unity(primitive_order, modulus).pow(k));
        if (out[1] == out[0])
            out.pop_back();
        return out;
    }
    out.push_back(Scalar::generator(modulus));
    Scalar z7 = Scalar::root_of_unity(7, modulus);
    if (admits(z7))
        out.push_back(z7);
    else
        out.push_back(Scalar::root_of_unity(11, modulus));
    return out;
}

DynkinDiagram CatalogEntry::instantiate(const Scalar& param) const {
    if (!constraint.admits(param))
        throw StateError("parameter " + wg::to_string(param) + " violates the row constraint " +
                         constraint.text + " (" + file + ")");
    return tmpl.instantiate(param);
}

BicharacterMatrix CatalogEntry::instantiate_matrix(const Scalar& param) const {
    return to_matrix(instantiate(param));
}

std::string Catalog::default_dir() {
    if (const char* env = std::getenv("WG_DATA_DIR"))
        return std::string(env) + "/catalog";
    return std::string(WG_DATA_DIR) + "/catalog";
}

Catalog Catalog::load(const std::string& dir) {
    Catalog cat;
    std::ifstream manifest(dir + "/manifest.txt");
    if (!manifest)
        throw ParseError("cannot open catalog manifest " + dir + "/manifest.txt");
    std::string line;
    int lineno = 0;
    while (std::getline(manifest, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::string table, file, constraint;
        int row, diagram;
        if (!(ls >> table))
            continue;
        if (!(ls >> row >> diagram >> file >> constraint))
            throw ParseError("manifest.txt:" + std::to_string(lineno) + ": bad entry");
        CatalogEntry e;
        e.table = table_from_string(table);
        e.row = row;
        e.diagram = diagram;
        e.file = file;
        e.constraint = ParamConstraint::parse(constraint);
        e.tmpl = DiagramTemplate::load(dir + "/" + file);
        e.dim = e.tmpl.dim();
        cat.entries_.push_back(std::move(e));
    }

    for (const char* name : {"appendix_rank4.txt", "appendix_rank_ge5.txt"}) {
        std::ifstream in(dir + "/" + name);
        if (!in)
            continue;
        AppendixEntry cur;
        bool open = false;
        int no = 0;
        auto flush = [&]() {
            if (open) {
                if (cur.word.empty())
                    throw ParseError(std::string(name) + ": entry for row " +
                                     std::to_string(cur.row) + " has no word");
                cat.appendix_.push_back(cur);
            }
            cur = AppendixEntry{};
            open = false;
        };
        while (std::getline(in, line)) {
            ++no;
            auto hash = line.find('#');
            if (hash != std::string::npos)
                line.erase(hash);
            std::istringstream ls(line);
            std::string kw;
            if (!(ls >> kw))
                continue;
            if (kw == "entry") {
                flush();
                open = true;
                std::string table;
                ls >> table;
                cur.table = table_from_string(table);
                cur.dim = cur.table == Table::rank4 ? 4 : 0;
                std::string field;
                while (ls >> field) {
                    if (field == "row")
                        ls >> cur.row;
                    else if (field == "label")
                        ls >> cur.label;
                    else if (field == "dim")
                        ls >> cur.dim;
                    else
                        throw ParseError(std::string(name) + ":" + std::to_string(no) +
                                         ": bad field '" + field + "'");
                }
                if (!cur.label)
                    cur.label = cur.row;
            } else if (kw == "indices") {
                int i;
                while (ls >> i)
                    cur.start_indices.push_back(i);
            } else if (kw == "word") {
                int i;
                while (ls >> i)
                    cur.word.push_back(i);
            } else if (kw == "trace") {
                std::string tok;
                while (ls >> tok)
                    cur.expected_trace.push_back(tok);
            } else {
                throw ParseError(std::string(name) + ":" + std::to_string(no) +
                                 ": unknown keyword '" + kw + "'");
            }
        }
        flush();
    }
    return cat;
}

const CatalogEntry* Catalog::find(Table t, int row, int diagram, int dim) const {
    for (const auto& e : entries_)
        if (e.table == t && e.row == row && e.diagram == diagram && e.dim == dim)
            return &e;
    return nullptr;
}

std::vector<const CatalogEntry*> Catalog::row_entries(Table t, int row, int dim) const {
    std::vector<const CatalogEntry*> out;
    for (const auto& e : entries_)
        if (e.table == t && e.row == row && e.dim == dim)
            out.push_back(&e);
    return out;
}

std::vector<int> Catalog::rows(Table t, int dim) const {
    std::vector<int> out;
    for (const auto& e : entries_)
        if (e.table == t && e.dim == dim && std::find(out.begin(), out.end(), e.row) == out.end())
            out.push_back(e.row);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// run fn(i) for i in [0, n) on all cores; results land by index
void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
    unsigned workers = std::min<size_t>(std::max(1u, std::thread::hardware_concurrency()), n);
    if (workers <= 1) {
        for (size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                fn(i);
        });
    for (auto& t : pool)
        t.join();
}

// prolong a diagram by one vertex hanging off `anchor` (1-based)
DynkinDiagram attach_tail(const DynkinDiagram& d, int anchor, const Scalar& edge,
                          const Scalar& vertex) {
    DynkinDiagram out(d.dim() + 1, d.modulus());
    for (int i = 0; i < d.dim(); ++i) {
        out.vertex(i) = d.vertex(i);
        for (int j = i + 1; j < d.dim(); ++j)
            out.set_edge(i, j, d.edge(i, j));
    }
    out.vertex(d.dim()) = vertex;
    out.set_edge(anchor - 1, d.dim(), edge);
    return out;
}

DynkinDiagram chain(int len, const Scalar& q, const std::vector<int>& indices) {
    return build_simple_chain({len, q, indices});
}

} // namespace

DynkinDiagram rank_ge5_family_diagram(int row, int which, int d, const std::vector<int>& s,
                                      const Scalar& p) {
    const int n = p.modulus();
    const Scalar m1 = Scalar::minus_one(n);
    const Scalar pinv = p.inverse();
    auto need = [&](bool cond) {
        if (!cond)
            throw StateError("no such family diagram: rank_ge5 row " + std::to_string(row) +
                             " diagram " + std::to_string(which));
    };
    switch (row) {
    case 1:
        need(which == 1 && s.empty());
        return chain(d, p, {});
    case 2:
        need(which == 1 || which == 2);
        return chain(d, which == 1 ? p : pinv, s);
    case 3:
        need(which == 1 && s.empty());
        return attach_tail(chain(d - 1, p * p, {}), d - 1, p.pow(-2), p);
    case 4:
        need(which == 1 || which == 2);
        if (which == 1)
            return attach_tail(chain(d - 1, p * p, s), d - 1, p.pow(-2), p);
        return attach_tail(chain(d - 1, p.pow(-2), s), d - 1, p * p, m1 * pinv);
    case 5:
        need(which == 1 && s.empty());
        return attach_tail(chain(d - 1, m1 * pinv, {}), d - 1, m1 * p, p);
    case 6:
        need(which == 1 || which == 2);
        if (which == 1)
            return attach_tail(chain(d - 1, m1 * pinv, s), d - 1, m1 * p, p);
        return attach_tail(chain(d - 1, m1 * p, s), d - 1, m1 * pinv, pinv);
    case 7:
        need(which == 1 && s.empty());
        return attach_tail(attach_tail(chain(d - 2, p, {}), d - 2, pinv, p), d - 1, p.pow(-2),
                           p * p);
    case 8: {
        need(which == 1 && s.empty());
        DynkinDiagram c = attach_tail(chain(d - 2, p, {}), d - 2, pinv, p);
        return attach_tail(c, d - 2, pinv, p);
    }
    case 9:
        need(which >= 1 && which <= 3);
        if (which == 1) {
            need(s.size() == 1);
            return attach_tail(attach_tail(chain(d - 2, p, s), d - 2, pinv, p), d - 1, p.pow(-2),
                               p * p);
        }
        if (which == 2) {
            std::vector<int> full(d - 2);
            std::iota(full.begin(), full.end(), 1);
            need(s.empty() || s == full);
            return attach_tail(attach_tail(chain(d - 2, pinv, full), d - 2, p, m1), d - 1,
                               p.pow(-2), p * p);
        }
        {
            need(s.empty());
            DynkinDiagram c = attach_tail(chain(d - 2, p, {}), d - 2, pinv, m1);
            c = attach_tail(c, d - 2, pinv, m1);
            c.set_edge(d - 2, d - 1, p * p);
            return c;
        }
    case 10:
        need(which >= 1 && which <= 3);
        if (which == 1)
            return attach_tail(chain(d - 1, p, s), d - 1, p.pow(-2), p * p);
        if (which == 2) {
            DynkinDiagram c = attach_tail(chain(d - 2, p, s), d - 2, pinv, m1);
            c = attach_tail(c, d - 2, pinv, m1);
            c.set_edge(d - 2, d - 1, p * p);
            return c;
        }
        {
            DynkinDiagram c = attach_tail(chain(d - 2, pinv, s), d - 2, p, pinv);
            return attach_tail(c, d - 2, p, pinv);
        }
    default:
        need(false);
    }
    throw StateError("unreachable");
}

std::vector<DynkinDiagram> rank_ge5_row_members(const Catalog& cat, int row, int d,
                                                const Scalar& p) {
    std::vector<DynkinDiagram> out;
    auto subsets_of_size = [&](int range, int size, auto&& fn) {
        std::vector<int> s;
        std::function<void(int)> rec = [&](int from) {
            if (static_cast<int>(s.size()) == size) {
                fn(s);
                return;
            }
            for (int v = from; v <= range; ++v) {
                s.push_back(v);
                rec(v + 1);
                s.pop_back();
            }
        };
        rec(1);
    };
    switch (row) {
    case 1:
        out.push_back(rank_ge5_family_diagram(1, 1, d, {}, p));
        break;
    case 2:
        for (int j = 1; 2 * j <= d + 1; ++j) {
            subsets_of_size(d, j, [&](const std::vector<int>& s) {
                out.push_back(rank_ge5_family_diagram(2, 1, d, s, p));
            });
            subsets_of_size(d, d + 1 - j, [&](const std::vector<int>& s) {
                out.push_back(rank_ge5_family_diagram(2, 2, d, s, p));
            });
        }
        break;
    case 3:
        out.push_back(rank_ge5_family_diagram(3, 1, d, {}, p));
        break;
    case 4:
    case 6:
        for (int j = 1; j <= d - 1; ++j) {
            subsets_of_size(d - 1, j, [&](const std::vector<int>& s) {
                out.push_back(rank_ge5_family_diagram(row, 1, d, s, p));
            });
            subsets_of_size(d - 1, d - j, [&](const std::vector<int>& s) {
                out.push_back(rank_ge5_family_diagram(row, 2, d, s, p));
            });
        }
        break;
    case 5:
        out.push_back(rank_ge5_family_diagram(5, 1, d, {}, p));
        break;
    case 7:
    case 8:
        out.push_back(rank_ge5_family_diagram(row, 1, d, {}, p));
        break;
    case 9:
        for (int i = 1; i <= d - 2; ++i)
            out.push_back(rank_ge5_family_diagram(9, 1, d, {i}, p));
        out.push_back(rank_ge5_family_diagram(9, 2, d, {}, p));
        out.push_back(rank_ge5_family_diagram(9, 3, d, {}, p));
        break;
    case 10:
        for (int j = 2; j <= d - 1; ++j) {
            subsets_of_size(d - 1, j, [&](const std::vector<int>& s) {
                out.push_back(rank_ge5_family_diagram(10, 1, d, s, p));
            });
            subsets_of_size(d - 2, j - 1, [&](const std::vector<int>& s) {
                out.push_back(rank_ge5_family_diagram(10, 2, d, s, p));
            });
            subsets_of_size(d - 2, d - j, [&](const std::vector<int>& s) {
                out.push_back(rank_ge5_family_diagram(10, 3, d, s, p));
            });
        }
        break;
    default:
        for (const CatalogEntry* e : cat.row_entries(Table::rank_ge5, row, d))
            if (e->constraint.admits(p))
                out.push_back(e->tmpl.instantiate(p));
        break;
    }
    return out;
}

bool VerifyReport::all_ok() const {
    return std::all_of(items.begin(), items.end(), [](const VerifyItem& i) { return i.ok; });
}

void VerifyReport::add(const std::string& name, bool ok, const std::string& detail) {
    items.push_back({name, ok, detail});
}

void VerifyReport::merge(const VerifyReport& other) {
    items.insert(items.end(), other.items.begin(), other.items.end());
}

std::string VerifyReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& i : items)
        arr.push_back({{"name", i.name}, {"ok", i.ok}, {"detail", i.detail}});
    nlohmann::json j;
    j["items"] = arr;
    j["ok"] = all_ok();
    size_t passed = 0;
    for (const auto& i : items)
        passed += i.ok;
    j["passed"] = passed;
    j["total"] = items.size();
    return j.dump();
}

std::string VerifyReport::to_text() const {
    std::ostringstream out;
    size_t passed = 0;
    for (const auto& i : items) {
        out << (i.ok ? "PASS " : "FAIL ") << i.name;
        if (!i.detail.empty())
            out << "  (" << i.detail << ")";
        out << "\n";
        passed += i.ok;
    }
    out << passed << "/" << items.size() << " checks passed\n";
    return out.str();
}

VerifyReport verify_row(const Catalog& cat, Table t, int row, int dim, const ExploreCaps& caps) {
    VerifyReport rep;
    auto entries = cat.row_entries(t, row, dim);
    if (entries.empty()) {
        rep.add(to_string(t) + " row " + std::to_string(row), false,
                "no catalog entries at dim " + std::to_string(dim));
        return rep;
    }
    const std::string tag = to_string(t) + " row " + std::to_string(row) + " d" +
                            std::to_string(dim);
    auto params = entries[0]->constraint.sample_params();
    struct Unit {
        const CatalogEntry* e;
        Scalar p;
        bool finite = false;
        std::string detail;
        std::set<std::vector<long long>> orbit;
    };
    std::vector<Unit> units;
    for (const Scalar& p : params)
        for (const CatalogEntry* e : entries) {
            Unit u;
            u.e = e;
            u.p = p;
            units.push_back(std::move(u));
        }
    parallel_for(units.size(), [&](size_t i) {
        Unit& u = units[i];
        BicharacterMatrix m = u.e->instantiate_matrix(u.p);
        GroupoidResult r = explore(m, caps);
        u.finite = r.verdict == Verdict::full_finite;
        u.detail = to_string(r.verdict) + ", " + std::to_string(r.basis_count) + " bases";
        if (u.finite)
            u.orbit = orbit_diagram_keys(m, r);
    });
    for (size_t pi = 0; pi < params.size(); ++pi) {
        bool all_finite = true;
        std::vector<const Unit*> row_units;
        for (const Unit& u : units)
            if (u.p == params[pi]) {
                rep.add(tag + " diagram " + std::to_string(u.e->diagram) + " @" + to_string(u.p) +
                            " finite",
                        u.finite, u.detail);
                all_finite = all_finite && u.finite;
                row_units.push_back(&u);
            }
        if (all_finite && row_units.size() > 1) {
            bool equiv = true;
            for (size_t a = 1; a < row_units.size(); ++a) {
                bool hit = false;
                for (const auto& k : row_units[0]->orbit)
                    if (row_units[a]->orbit.count(k)) {
                        hit = true;
                        break;
                    }
                equiv = equiv && hit;
            }
            rep.add(tag + " @" + to_string(params[pi]) + " within-row Weyl equivalence", equiv);
        }
    }
    return rep;
}

VerifyReport verify_tables(const Catalog& cat, const ExploreCaps& caps) {
    VerifyReport rep;
    for (int row : cat.rows(Table::rank4, 4))
        rep.merge(verify_row(cat, Table::rank4, row, 4, caps));
    for (int dim : {5, 6})
        for (int row : cat.rows(Table::rank_ge5, dim))
            rep.merge(verify_row(cat, Table::rank_ge5, row, dim, caps));

    // sampled cross-row pairs must stay inequivalent
    auto cross = [&](Table t, int dim, int rowa, int rowb) {
        const CatalogEntry* a = cat.find(t, rowa, 1, dim);
        const CatalogEntry* b = cat.find(t, rowb, 1, dim);
        if (!a || !b)
            return;
        Scalar pa = a->constraint.sample_params()[0];
        Scalar pb = b->constraint.sample_params()[0];
        bool eq = weyl_equivalent(a->tmpl.instantiate_matrix(pa), b->tmpl.instantiate_matrix(pb),
                                  caps);
        rep.add("cross-row " + to_string(t) + " " + std::to_string(rowa) + " vs " +
                    std::to_string(rowb) + " d" + std::to_string(dim) + " inequivalent",
                !eq);
    };
    for (int r = 1; r <= 10; ++r)
        cross(Table::rank4, 4, 2 * r - 1, 2 * r);
    for (int r = 1; r <= 10; ++r)
        cross(Table::rank_ge5, 5, r, r + 1 <= 15 ? r + 1 : 1);
    return rep;
}

namespace {

BicharacterMatrix appendix_start_matrix(const Catalog& cat, const AppendixEntry& e,
                                        const Scalar& p) {
    if (e.table == Table::rank_ge5 && e.row <= 10)
        return to_matrix(rank_ge5_family_diagram(e.row, 1, e.dim, e.start_indices, p));
    const CatalogEntry* entry = cat.find(e.table, e.row, 1, e.dim);
    if (!entry)
        throw StateError("no catalog entry for " + to_string(e.table) + " row " +
                         std::to_string(e.row) + " at dim " + std::to_string(e.dim));
    return entry->instantiate_matrix(p);
}

Scalar appendix_param(const Catalog& cat, const AppendixEntry& e) {
    if (e.table == Table::rank_ge5 && e.row <= 10) {
        static const char* family_constraint[] = {"",       "q!=1", "q^2!=1", "q^2!=1", "q^4!=1",
                                                  "R3",     "R3",   "q^2!=1", "q!=1",   "q^2!=1",
                                                  "q^2!=1"};
        return ParamConstraint::parse(family_constraint[e.row]).sample_params()[0];
    }
    const CatalogEntry* entry = cat.find(e.table, e.row, 1, e.dim);
    if (!entry)
        throw StateError("no catalog entry for " + to_string(e.table) + " row " +
                         std::to_string(e.row) + " at dim " + std::to_string(e.dim));
    return entry->constraint.sample_params()[0];
}

} // namespace

VerifyReport verify_appendix_entry(const Catalog& cat, const AppendixEntry& e,
                                   const ExploreCaps& caps) {
    VerifyReport rep;
    const std::string tag = to_string(e.table) + " row " + std::to_string(e.row) + " d" +
                            std::to_string(e.dim);
    Scalar p = appendix_param(cat, e);
    BicharacterMatrix m = appendix_start_matrix(cat, e, p);
    WordResult wr;
    try {
        wr = apply_word(m, e.word);
    } catch (const ReflectionUndefined& ex) {
        rep.add(tag + " word applies", false,
                std::string(ex.what()) + " at letter " + std::to_string(ex.word_position));
        return rep;
    }
    if (!e.expected_trace.empty()) {
        bool ok = wr.trace.size() == e.expected_trace.size();
        std::string diff;
        for (size_t i = 0; ok && i < wr.trace.size(); ++i) {
            std::string got = print_basis_tuple(wr.trace[i]);
            if (got != e.expected_trace[i]) {
                ok = false;
                diff = "step " + std::to_string(i) + ": computed " + got + ", listed " +
                       e.expected_trace[i];
            }
        }
        if (wr.trace.size() != e.expected_trace.size())
            diff = "computed " + std::to_string(wr.trace.size()) + " tuples, listed " +
                   std::to_string(e.expected_trace.size());
        rep.add(tag + " printed chain", ok, diff);
    }
    rep.add(tag + " finiteness certificate", witnesses_finiteness_induction(m, e.word, caps));
    return rep;
}

VerifyReport verify_appendix(const Catalog& cat, const ExploreCaps& caps) {
    VerifyReport rep;
    for (const AppendixEntry& e : cat.appendix())
        rep.merge(verify_appendix_entry(cat, e, caps));
    return rep;
}

namespace {

// compact labeled diagram over mu_n: vertex and edge labels as exponents
struct CompactDiagram {
    int d;
    std::vector<uint8_t> v;    // size d, values 1..n-1
    std::vector<uint8_t> e;    // size d*(d-1)/2, values 0..n-1 (0 = absent)
    int eix(int i, int j) const { // i < j
        return (i * (2 * d - i - 1)) / 2 + (j - i - 1);
    }
};

DynkinDiagram materialize(const CompactDiagram& c, int subgroup, int modulus) {
    DynkinDiagram dia(c.d, modulus);
    const int step = modulus / subgroup;
    for (int i = 0; i < c.d; ++i)
        dia.vertex(i) = Scalar(0, c.v[i] * step, modulus);
    for (int i = 0; i < c.d; ++i)
        for (int j = i + 1; j < c.d; ++j)
            dia.set_edge(i, j, Scalar(0, c.e[c.eix(i, j)] * step, modulus));
    return dia;
}

} // namespace

SweepReport exhaustive_sweep(const Catalog& cat, int d, int subgroup, const SweepOptions& opts) {
    if (d < 2 || d > 5)
        throw StateError("exhaustive_sweep supports dims 2..5");
    const int modulus = 2520;
    if (modulus % subgroup != 0)
        throw StateError("subgroup order must divide 2520");
    SweepReport rep;
    rep.dim = d;
    rep.subgroup = subgroup;

    const int ne = d * (d - 1) / 2;
    std::vector<std::vector<int>> perms;
    {
        std::vector<int> p(d);
        std::iota(p.begin(), p.end(), 0);
        do
            perms.push_back(p);
        while (std::next_permutation(p.begin(), p.end()));
    }
    // connectivity per edge-presence mask
    std::vector<char> mask_connected(1 << ne, 0);
    CompactDiagram probe;
    probe.d = d;
    for (unsigned mask = 0; mask < (1u << ne); ++mask) {
        std::vector<int> comp(d, -1);
        std::function<void(int, int)> dfs = [&](int v, int c) {
            comp[v] = c;
            for (int w = 0; w < d; ++w) {
                if (w == v || comp[w] >= 0)
                    continue;
                int i = std::min(v, w), j = std::max(v, w);
                if (mask >> probe.eix(i, j) & 1)
                    dfs(w, c);
            }
        };
        dfs(0, 0);
        mask_connected[mask] = std::all_of(comp.begin(), comp.end(), [](int c) { return c >= 0; });
    }

    // enumerate labelings, keep canonical representatives of connected classes
    std::set<std::vector<uint8_t>> seen;
    std::vector<CompactDiagram> reps;
    CompactDiagram cur;
    cur.d = d;
    cur.v.assign(d, 1);
    cur.e.assign(ne, 0);
    std::vector<uint8_t> enc(d + ne), best(d + ne), trial(d + ne);
    while (true) {
        ++rep.labelings;
        unsigned mask = 0;
        for (int k = 0; k < ne; ++k)
            if (cur.e[k])
                mask |= 1u << k;
        if (mask_connected[mask]) {
            bool first = true;
            for (const auto& perm : perms) {
                for (int i = 0; i < d; ++i)
                    trial[i] = cur.v[perm[i]];
                for (int i = 0; i < d; ++i)
                    for (int j = i + 1; j < d; ++j) {
                        int a = std::min(perm[i], perm[j]), b = std::max(perm[i], perm[j]);
                        trial[d + cur.eix(i, j)] = cur.e[cur.eix(a, b)];
                    }
                if (first || trial < best) {
                    best = trial;
                    first = false;
                }
            }
            if (seen.insert(best).second) {
                CompactDiagram rep_diagram;
                rep_diagram.d = d;
                rep_diagram.v.assign(best.begin(), best.begin() + d);
                rep_diagram.e.assign(best.begin() + d, best.end());
                reps.push_back(std::move(rep_diagram));
            }
        }
        // odometer step: vertices run over 1..subgroup-1, edges over 0..subgroup-1
        int pos = 0;
        for (; pos < d + ne; ++pos) {
            uint8_t lo = pos < d ? 1 : 0;
            uint8_t& slot = pos < d ? cur.v[pos] : cur.e[pos - d];
            if (slot + 1 < subgroup) {
                ++slot;
                break;
            }
            slot = lo;
        }
        if (pos == d + ne)
            break;
    }
    rep.classes = reps.size();

    // explore the representatives
    ExploreCaps caps{opts.max_bases, opts.max_coeff};
    std::vector<char> is_finite(reps.size(), 0);
    parallel_for(reps.size(), [&](size_t i) {
        DynkinDiagram dia = materialize(reps[i], subgroup, modulus);
        GroupoidResult r = explore(to_matrix(dia), caps);
        is_finite[i] = r.verdict == Verdict::full_finite;
    });
    std::set<std::vector<long long>> survivor_keys;
    std::vector<std::pair<std::vector<long long>, DynkinDiagram>> survivors;
    for (size_t i = 0; i < reps.size(); ++i) {
        if (!is_finite[i])
            continue;
        ++rep.finite;
        DynkinDiagram dia = materialize(reps[i], subgroup, modulus);
        auto key = dia.canonical_key();
        survivor_keys.insert(key);
        survivors.push_back({std::move(key), std::move(dia)});
    }

    // table side: every admissible instantiation over mu_subgroup
    std::set<std::vector<long long>> table_keys;
    std::map<std::vector<long long>, std::string> table_names;
    auto consider = [&](const DynkinDiagram& dia, const std::string& name) {
        for (int i = 0; i < dia.dim(); ++i) {
            if (!dia.vertex(i).in_mu(subgroup) || dia.vertex(i).is_one())
                return;
            for (int j = i + 1; j < dia.dim(); ++j)
                if (!dia.edge(i, j).in_mu(subgroup))
                    return;
        }
        if (!is_connected(dia))
            return;
        auto key = dia.canonical_key();
        table_keys.insert(key);
        table_names.emplace(key, name);
    };
    if (d == 4 || d == 5) {
        for (int t = 0; t < modulus; ++t) {
            Scalar p(0, t, modulus);
            if (d == 4) {
                for (const CatalogEntry& e : cat.entries())
                    if (e.table == Table::rank4 && e.constraint.admits(p))
                        consider(e.tmpl.instantiate(p),
                                 "rank4 row " + std::to_string(e.row) + " diagram " +
                                     std::to_string(e.diagram) + " @" + to_string(p));
            } else {
                static const char* row_constraint[] = {"",   "q!=1", "q^2!=1", "q^2!=1",
                                                       "q^4!=1", "R3", "R3",   "q^2!=1",
                                                       "q!=1",   "q^2!=1", "q^2!=1"};
                for (int row = 1; row <= 15; ++row) {
                    ParamConstraint pc = row <= 10
                                             ? ParamConstraint::parse(row_constraint[row])
                                             : cat.row_entries(Table::rank_ge5, row, d)[0]
                                                   ->constraint;
                    if (!pc.admits(p))
                        continue;
                    for (const DynkinDiagram& dia : rank_ge5_row_members(cat, row, d, p))
                        consider(dia, "rank_ge5 row " + std::to_string(row) + " @" + to_string(p));
                }
            }
        }
        rep.table_instantiations = table_keys.size();

        for (const auto& [key, dia] : survivors)
            if (!table_keys.count(key))
                rep.unmatched_survivors.push_back(dia.to_json());
        for (const auto& [key, name] : table_names)
            if (!survivor_keys.count(key))
                rep.missing_instantiations.push_back(name);
    }

    // criteria must hold on every survivor, under every vertex numbering
    for (const auto& [key, dia] : survivors) {
        std::vector<int> perm(d);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            DynkinDiagram pd(d, modulus);
            for (int i = 0; i < d; ++i)
                pd.vertex(i) = dia.vertex(perm[i]);
            for (int i = 0; i < d; ++i)
                for (int j = i + 1; j < d; ++j)
                    pd.set_edge(i, j, dia.edge(perm[i], perm[j]));
            BicharacterMatrix pm = to_matrix(pd);
            std::vector<PredicateReport> checks;
            if (d == 2)
                checks.push_back(rank2_neg_one_condition(pm));
            else if (d == 3)
                checks = rank3_conditions(pm);
            else
                checks = structural_filters(pm);
            for (const auto& c : checks)
                if (c.applicable && !c.satisfied)
                    rep.criteria_violations.push_back(c.name + " on " + pd.to_json());
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return rep;
}

std::string SweepReport::to_json() const {
    nlohmann::json j;
    j["dim"] = dim;
    j["subgroup"] = subgroup;
    j["labelings"] = labelings;
    j["classes"] = classes;
    j["finite"] = finite;
    j["table_instantiations"] = table_instantiations;
    j["unmatched_survivors"] = unmatched_survivors;
    j["missing_instantiations"] = missing_instantiations;
    j["criteria_violations"] = criteria_violations;
    j["clean"] = clean();
    return j.dump();
}

std::string SweepReport::to_text() const {
    std::ostringstream out;
    out << "sweep d=" << dim << " over mu_" << subgroup << ": " << labelings << " labelings, "
        << classes << " connected classes, " << finite << " finite, " << table_instantiations
        << " table instantiations\n";
    for (const auto& s : unmatched_survivors)
        out << "  survivor not in tables: " << s << "\n";
    for (const auto& s : missing_instantiations)
        out << "  instantiation not found: " << s << "\n";
    for (const auto& s : criteria_violations)
        out << "  criteria violation: " << s << "\n";
    out << (clean() ? "clean" : "DISCREPANCIES FOUND") << "\n";
    return out.str();
}

} // namespace wg
