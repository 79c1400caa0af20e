#include "wg/catalog.hpp"

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

using namespace wg;

namespace {

struct GlobalOpts {
    int torsion = 2520;
    size_t cap_bases = 1000000;
    long long cap_coeff = 10000;
    bool json = false;

    ExploreCaps caps() const { return {cap_bases, cap_coeff}; }
};

std::string cartan_type_name(const std::vector<int>& cartan, int d) {
    // classify a generalized Cartan matrix against the finite types
    auto a = [&](int i, int j) { return cartan[static_cast<size_t>(i) * d + j]; };
    std::vector<std::vector<int>> adj(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i != j && a(i, j) != 0)
                adj[i].push_back(j);
    for (int i = 0; i < d; ++i)
        if (adj[i].size() > 3)
            return "";
    int forks = 0, fork = -1;
    std::vector<int> ends;
    for (int i = 0; i < d; ++i) {
        if (adj[i].size() == 3) {
            ++forks;
            fork = i;
        }
        if (adj[i].size() <= 1)
            ends.push_back(i);
    }
    int doubled = 0, tripled = 0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            if (i == j)
                continue;
            if (a(i, j) * a(j, i) == 2)
                ++doubled;
            if (a(i, j) * a(j, i) == 3)
                ++tripled;
        }
    doubled /= 2;
    tripled /= 2;
    if (forks == 0) {
        if (d == 1)
            return "A_1";
        if (ends.size() != 2)
            return "";
        if (doubled == 0 && tripled == 0)
            return "A_" + std::to_string(d);
        if (d == 2 && tripled == 1)
            return "G_2";
        if (doubled == 1 && tripled == 0) {
            // which end is long determines B vs C; F_4 has the double bond inside
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    if (i != j && a(i, j) == -2) {
                        bool inner = adj[i].size() == 2 && adj[j].size() == 2;
                        if (inner && d == 4)
                            return "F_4";
                        if (inner)
                            return "";
                        return (adj[j].size() == 1 ? "B_" : "C_") + std::to_string(d);
                    }
        }
        return "";
    }
    if (forks == 1 && doubled == 0 && tripled == 0) {
        std::vector<int> arms;
        for (int e : ends) {
            int len = 1, prev = -1, cur = e;
            while (cur != fork) {
                int next = -1;
                for (int w : adj[cur])
                    if (w != prev)
                        next = w;
                prev = cur;
                cur = next;
                ++len;
            }
            arms.push_back(len - 1);
        }
        std::sort(arms.begin(), arms.end());
        if (arms.size() == 3 && arms[0] == 1 && arms[1] == 1)
            return "D_" + std::to_string(d);
        if (arms.size() == 3 && arms[0] == 1 && arms[1] == 2 && arms[2] >= 2 && d >= 6 && d <= 8)
            return "E_" + std::to_string(d);
    }
    return "";
}

int run_classify(const std::string& file, const GlobalOpts& g, bool roots_only) {
    DiagramTemplate t = DiagramTemplate::load(file);
    BicharacterMatrix m = to_matrix(t.instantiate_default());
    GroupoidResult r = explore(m, g.caps());
    if (roots_only) {
        if (r.verdict != Verdict::full_finite) {
            std::cout << to_string(r.verdict) << "\n";
            return 1;
        }
        if (g.json) {
            std::cout << r.to_json() << "\n";
        } else {
            for (const RootVec& v : positive_roots(r))
                std::cout << print_root(v) << "\n";
        }
        return 0;
    }
    std::string cartan;
    if (r.verdict == Verdict::full_finite) {
        if (auto c = detect_cartan_type(m))
            cartan = cartan_type_name(*c, m.dim());
    }
    if (g.json) {
        nlohmann::json j = nlohmann::json::parse(r.to_json());
        j["diagram"] = nlohmann::json::parse(to_dynkin(m).to_json());
        if (!cartan.empty())
            j["cartan_type"] = cartan;
        std::cout << j.dump() << "\n";
    } else {
        std::cout << to_string(r.verdict);
        if (r.verdict == Verdict::full_finite) {
            std::cout << ", " << positive_roots(r).size() << " positive roots, "
                      << r.basis_count << " bases";
            std::cout << (cartan.empty() ? ", not of Cartan type" : ", Cartan type " + cartan);
        } else if (r.verdict == Verdict::not_full) {
            std::cout << ": reflection " << r.failure_i << " undefined against " << r.failure_j
                      << " at basis " << print_basis_tuple(r.failure_basis);
        } else {
            std::cout << " (presumed infinite; caps hit at depth " << r.depth << ")";
        }
        std::cout << "\n";
    }
    return 0;
}

int run_equiv(const std::string& fa, const std::string& fb, const GlobalOpts& g) {
    BicharacterMatrix a = to_matrix(DiagramTemplate::load(fa).instantiate_default());
    BicharacterMatrix b = to_matrix(DiagramTemplate::load(fb).instantiate_default());
    auto ka = orbit_diagram_keys(a, g.caps());
    auto kb = orbit_diagram_keys(b, g.caps());
    std::vector<long long> shared;
    bool eq = false;
    for (const auto& k : ka)
        if (kb.count(k)) {
            eq = true;
            shared = k;
            break;
        }
    if (g.json) {
        nlohmann::json j;
        j["equivalent"] = eq;
        if (eq)
            j["shared_diagram"] = shared;
        std::cout << j.dump() << "\n";
    } else {
        std::cout << (eq ? "Weyl equivalent (shared orbit diagram found)" : "not Weyl equivalent")
                  << "\n";
    }
    return 0;
}

int run_chain(int d, const std::string& qlit, const std::vector<int>& indices,
              const GlobalOpts& g) {
    Scalar q = parse_scalar(qlit, TorsionConfig(g.torsion).modulus);
    DynkinDiagram dia = build_simple_chain({d, q, indices});
    if (g.json) {
        std::cout << dia.to_json() << "\n";
        return 0;
    }
    for (int i = 0; i < d; ++i) {
        std::cout << "v " << i + 1 << " " << to_string(dia.vertex(i)) << "\n";
        if (i + 1 < d)
            std::cout << "e " << i + 1 << " " << i + 2 << " " << to_string(dia.edge(i, i + 1))
                      << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weyl groupoids and arithmetic root systems of diagonal bicharacters"};
    app.require_subcommand(1);
    GlobalOpts g;
    if (const char* env = std::getenv("WG_TORSION"))
        g.torsion = std::atoi(env);
    app.add_option("--torsion", g.torsion, "torsion subgroup order (even)");
    app.add_option("--cap-bases", g.cap_bases, "exploration cap on reached bases");
    app.add_option("--cap-coeff", g.cap_coeff, "exploration cap on root coordinates");
    app.add_flag("--json", g.json, "machine-readable output");

    std::string file, file_b, qlit;
    int chain_d = 0;
    std::vector<int> chain_indices;
    int sweep_d = 4, sweep_n = 3;

    auto* classify = app.add_subcommand("classify", "explore a diagram file; print the verdict");
    classify->add_option("file", file)->required();
    auto* roots = app.add_subcommand("roots", "print the positive roots of a finite system");
    roots->add_option("file", file)->required();
    auto* equiv = app.add_subcommand("equiv", "decide Weyl equivalence of two diagram files");
    equiv->add_option("fileA", file)->required();
    equiv->add_option("fileB", file_b)->required();
    auto* chain = app.add_subcommand("chain", "reconstruct a simple chain C(d,q;i_1,...)");
    chain->add_option("d", chain_d)->required();
    chain->add_option("q", qlit)->required();
    chain->add_option("indices", chain_indices);
    auto* verify = app.add_subcommand("verify", "run the catalog verification suites");
    std::string what;
    verify->add_option("what", what, "tables | appendix | sweep")->required();
    verify->add_option("--d", sweep_d, "sweep dimension");
    verify->add_option("--n", sweep_n, "sweep subgroup order");
    for (auto* sub : {classify, roots, equiv, chain, verify})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*classify)
            return run_classify(file, g, false);
        if (*roots)
            return run_classify(file, g, true);
        if (*equiv)
            return run_equiv(file, file_b, g);
        if (*chain)
            return run_chain(chain_d, qlit, chain_indices, g);
        if (*verify) {
            Catalog cat = Catalog::load();
            if (what == "tables") {
                VerifyReport r = verify_tables(cat, g.caps());
                std::cout << (g.json ? r.to_json() : r.to_text()) << "\n";
                return r.all_ok() ? 0 : 1;
            }
            if (what == "appendix") {
                VerifyReport r = verify_appendix(cat, g.caps());
                std::cout << (g.json ? r.to_json() : r.to_text()) << "\n";
                return r.all_ok() ? 0 : 1;
            }
            if (what == "sweep") {
                SweepReport r = exhaustive_sweep(cat, sweep_d, sweep_n);
                std::cout << (g.json ? r.to_json() : r.to_text()) << "\n";
                return r.clean() ? 0 : 1;
            }
            std::cerr << "unknown verify target '" << what << "'\n";
            return 2;
        }
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
