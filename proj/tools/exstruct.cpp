// exstruct: analyze a finite-type module category as an extriangulated
// category, enumerate its substructures, and verify the classification
// against brute force.

#include <iostream>

#include <CLI11.hpp>

#include "exstruct/shell.hpp"

using namespace exstruct;

namespace {

struct CommonOpts {
    std::string input;
    std::string dot;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::size_t samples = 0;
    bool samples_set = false;
    bool no_cache = false;
    std::uint64_t p = 0;
    bool p_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("input", o.input, "input JSON file")->required();
    cmd->add_option("--dot", o.dot, "write the substructure poset as a DOT digraph");
    cmd->add_option("--seed", o.seed, "sampling seed")->each([&](const std::string&) {
        o.seed_set = true;
    });
    cmd->add_option("--samples", o.samples, "sample count")->each([&](const std::string&) {
        o.samples_set = true;
    });
    cmd->add_flag("--no-cache", o.no_cache, "disable the on-disk table cache");
    cmd->add_option("--p", o.p, "override the field characteristic")->each([&](const std::string&) {
        o.p_set = true;
    });
}

Workspace make_workspace(const CommonOpts& o) {
    InputDescription in = parse_input(o.input);
    if (o.p_set) in.p = o.p;
    if (o.seed_set) in.seed = o.seed;
    if (o.samples_set) in.samples = o.samples;
    return build_workspace(std::move(in));
}

void maybe_write_dot(Workspace& w, const CommonOpts& o) {
    if (o.dot.empty()) return;
    std::ofstream out(o.dot);
    if (!out) throw ParseError("cannot write " + o.dot);
    out << hasse_dot(w);
}

int cmd_analyze(const CommonOpts& o) {
    Workspace w = make_workspace(o);
    std::optional<DimTables> tables;
    std::uint64_t hash = input_hash(o.input) ^ w.input.p;
    if (!o.no_cache) tables = load_cached_tables(hash);
    if (!tables) {
        tables = compute_tables(w);
        if (!o.no_cache) store_cached_tables(hash, *tables);
    }
    std::cout << analysis_report(w, *tables);
    maybe_write_dot(w, o);
    return 0;
}

int cmd_substructures(const CommonOpts& o) {
    Workspace w = make_workspace(o);
    std::cout << "substructure count: "
              << (std::size_t{1} << w.engine->simple_defects().size()) << "\n";
    std::cout << substructure_inventory(w);
    for (const auto& [lo, hi] : w.engine->hasse_edges())
        std::cout << "hasse: " << lo << " -> " << hi << "\n";
    try {
        auto rep = w.engine->exact_structure_report(w.input.full_module_category);
        std::cout << "exact structures (ambient = full module category): " << rep.entries.size()
                  << "\n";
        for (std::size_t k = 0; k < rep.entries.size(); ++k)
            if (rep.entries[k].maximal)
                std::cout << "maximal exact structure: substructure " << k
                          << (rep.emax_is_full ? " (all short exact sequences)" : "") << "\n";
    } catch (const NotFullModuleCategory&) {
        std::cout << "ambient not flagged as a full module category; "
                  << "listing substructures of the given E only\n";
    }
    maybe_write_dot(w, o);
    return 0;
}

int cmd_defect(const CommonOpts& o, const std::vector<std::string>& cls) {
    Workspace w = make_workspace(o);
    if (cls.size() < 2) throw ParseError("--class needs <c> <a> [coeffs...]");
    std::size_t c = w.atlas_index(cls[0]);
    std::size_t a = w.atlas_index(cls[1]);
    const ExtGroup& eg = w.engine->ext_pair(c, a);
    if (cls.size() - 2 != eg.dim())
        throw ParseError("expected " + std::to_string(eg.dim()) + " coefficients for E(" +
                         cls[0] + "," + cls[1] + ")");
    FieldMatrix delta(*w.field, eg.dim(), 1);
    for (std::size_t i = 0; i < eg.dim(); ++i)
        delta.at(i, 0) = w.field->reduce(std::stoll(cls[2 + i]));
    ConflationClass conf = w.calc->realize(eg, delta);
    Defect d = w.engine->defect(conf);
    std::cout << "defect of class in E(" << cls[0] << "," << cls[1] << "):\n";
    std::cout << "dims:";
    for (std::size_t i = 0; i < w.atlas.size(); ++i) std::cout << " " << d.module.dim(i);
    std::cout << "\nfactors:";
    bool any = false;
    for (const auto& [idx, mult] : d.factors)
        if (mult) {
            std::cout << " " << w.atlas_name(idx) << ":" << mult;
            any = true;
        }
    if (!any) std::cout << " (none)";
    std::cout << "\n";
    return 0;
}

int cmd_verify(const CommonOpts& o) {
    Workspace w = make_workspace(o);
    SuiteResult res = run_verification(w);
    std::cout << res.text();
    maybe_write_dot(w, o);
    return res.ok() ? 0 : 1;
}

int cmd_oracle(const CommonOpts& o) {
    Workspace w = make_workspace(o);
    auto oracle = w.engine->enumerate_substructures_oracle();
    std::vector<Substructure> serre;
    for (const auto& s : w.engine->serre_subsets())
        serre.push_back(w.engine->substructure_from_serre(s));
    bool identical = oracle.size() == serre.size();
    for (const auto& f : oracle) {
        bool found = false;
        for (const auto& g : serre)
            if (f == g) found = true;
        if (!found) identical = false;
    }
    std::cout << "oracle = " << oracle.size() << ", serre = " << serre.size() << ", sets "
              << (identical ? "identical" : "DIFFER") << "\n";
    return identical ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"substructures of extriangulated module categories"};
    app.require_subcommand(1);

    CommonOpts oa, os, od, ov, oo;
    std::vector<std::string> cls;
    CLI::App* analyze = app.add_subcommand("analyze", "print Hom/Ext tables and simple defects");
    add_common(analyze, oa);
    CLI::App* subs = app.add_subcommand("substructures", "enumerate the substructure poset");
    add_common(subs, os);
    CLI::App* defect = app.add_subcommand("defect", "print the defect of one Ext class");
    add_common(defect, od);
    defect->add_option("--class", cls, "c a coeffs...")->expected(-2);
    CLI::App* verify = app.add_subcommand("verify", "run the full invariant suite");
    add_common(verify, ov);
    CLI::App* oracle = app.add_subcommand("oracle", "brute-force enumeration diff");
    add_common(oracle, oo);

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return cmd_analyze(oa);
        if (subs->parsed()) return cmd_substructures(os);
        if (defect->parsed()) return cmd_defect(od, cls);
        if (verify->parsed()) return cmd_verify(ov);
        if (oracle->parsed()) return cmd_oracle(oo);
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const InvariantViolation& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const TooLarge& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const NotAdmissible& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const NotHomogeneousRelation& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const NotPrime& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "check failure: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
