// Input parsing, workspace assembly, reports, DOT output and the disk cache
// for the exstruct command-line tool.

#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "defectcore.hpp"

namespace exstruct {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct AtlasEntry {
    std::string name;
    std::vector<std::size_t> dims;
    std::map<std::string, std::vector<std::int64_t>> arrow_entries;  // row-major
};

struct InputDescription {
    std::uint64_t p = 101;
    Quiver quiver;
    RelationSet relations;
    std::vector<AtlasEntry> atlas;
    bool full_module_category = false;
    std::size_t samples = 100;
    std::uint64_t seed = 0;
};

inline InputDescription parse_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    InputDescription d;
    try {
        if (j.contains("p")) d.p = j.at("p").get<std::uint64_t>();
        const auto& q = j.at("quiver");
        d.quiver.vertices = q.at("vertices").get<std::size_t>();
        for (const auto& a : q.value("arrows", nlohmann::json::array())) {
            Arrow ar;
            ar.name = a.at("name").get<std::string>();
            ar.source = a.at("source").get<std::size_t>();
            ar.target = a.at("target").get<std::size_t>();
            d.quiver.arrows.push_back(std::move(ar));
        }
        const auto& rel = j.value("relations", nlohmann::json::object());
        d.relations.nilpotency_bound = rel.value("nilpotency_bound", std::size_t{1});
        for (const auto& r : rel.value("relations", nlohmann::json::array())) {
            Relation relation;
            for (const auto& t : r.at("terms")) {
                RelationTerm term;
                term.coeff = t.at("coeff").get<std::int64_t>();
                for (const auto& an : t.at("arrows")) term.arrow_names.push_back(an.get<std::string>());
                relation.terms.push_back(std::move(term));
            }
            d.relations.relations.push_back(std::move(relation));
        }
        for (const auto& e : j.at("atlas")) {
            AtlasEntry entry;
            entry.name = e.at("name").get<std::string>();
            for (const auto& dim : e.at("dims")) entry.dims.push_back(dim.get<std::size_t>());
            const nlohmann::json arrows_obj = e.value("arrows", nlohmann::json::object());
            for (const auto& [an, mat] : arrows_obj.items()) {
                std::vector<std::int64_t> entries;
                for (const auto& x : mat) entries.push_back(x.get<std::int64_t>());
                entry.arrow_entries[an] = std::move(entries);
            }
            d.atlas.push_back(std::move(entry));
        }
        d.full_module_category = j.value("full_module_category", false);
        d.samples = j.value("samples", std::size_t{100});
        d.seed = j.value("seed", std::uint64_t{0});
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("missing or malformed field: ") + e.what());
    }
    // structural validation before any algebra is built
    std::map<std::string, int> names;
    for (const auto& e : d.atlas)
        if (++names[e.name] > 1) throw InvariantViolation("duplicate atlas name " + e.name);
    for (const auto& e : d.atlas) {
        if (e.dims.size() != d.quiver.vertices)
            throw InvariantViolation("atlas entry " + e.name + ": wrong number of vertex dims");
        for (const auto& a : d.quiver.arrows) {
            auto it = e.arrow_entries.find(a.name);
            std::size_t expect = e.dims[a.target] * e.dims[a.source];
            std::size_t got = it == e.arrow_entries.end() ? 0 : it->second.size();
            if (got != expect && !(it == e.arrow_entries.end() && expect == 0))
                throw InvariantViolation("atlas entry " + e.name + ", arrow " + a.name +
                                         ": expected " + std::to_string(expect) + " entries");
        }
    }
    return d;
}

/// everything built from one input, with stable ownership order
struct Workspace {
    InputDescription input;
    std::unique_ptr<Field> field;
    std::unique_ptr<Algebra> algebra;
    std::vector<Representation> atlas;
    std::unique_ptr<ExtCalculator> calc;
    std::unique_ptr<CategoryTable> table;
    std::unique_ptr<DefectEngine> engine;

    std::size_t atlas_index(const std::string& name) const {
        for (std::size_t i = 0; i < input.atlas.size(); ++i)
            if (input.atlas[i].name == name) return i;
        throw ParseError("unknown atlas member " + name);
    }
    const std::string& atlas_name(std::size_t i) const { return input.atlas[i].name; }
};

inline Workspace build_workspace(InputDescription in) {
    Workspace w;
    w.input = std::move(in);
    try {
        w.field = std::make_unique<Field>(w.input.p);
    } catch (const std::exception& e) {
        throw ParseError(e.what());
    }
    w.algebra = std::make_unique<Algebra>(*w.field, w.input.quiver, w.input.relations);
    for (const auto& e : w.input.atlas) {
        std::vector<FieldMatrix> mats;
        for (const auto& a : w.input.quiver.arrows) {
            auto it = e.arrow_entries.find(a.name);
            std::vector<std::int64_t> entries(e.dims[a.target] * e.dims[a.source], 0);
            if (it != e.arrow_entries.end()) entries = it->second;
            mats.emplace_back(*w.field, e.dims[a.target], e.dims[a.source], std::move(entries));
        }
        w.atlas.emplace_back(w.algebra.get(), e.dims, std::move(mats));
    }
    w.calc = std::make_unique<ExtCalculator>(w.algebra.get());
    w.table = std::make_unique<CategoryTable>(w.calc.get(), w.atlas);
    w.engine = std::make_unique<DefectEngine>(w.table.get());
    return w;
}

// ---------------------------------------------------------------- disk cache

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::filesystem::path cache_dir() {
    if (const char* env = std::getenv("EXSTRUCT_CACHE_DIR")) return env;
    return std::filesystem::temp_directory_path() / "exstruct-cache";
}

inline std::uint64_t input_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return fnv1a(ss.str());
}

/// hom/ext dimension tables, the cacheable core of `analyze`
struct DimTables {
    std::vector<std::vector<std::size_t>> hom;
    std::vector<std::vector<std::size_t>> ext;
};

inline DimTables compute_tables(Workspace& w) {
    DimTables t;
    const std::size_t n = w.atlas.size();
    t.hom.assign(n, std::vector<std::size_t>(n, 0));
    t.ext.assign(n, std::vector<std::size_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            t.hom[i][j] = w.table->hom(i, j).dim();
            t.ext[i][j] = w.engine->ext_pair(i, j).dim();
        }
    return t;
}

inline std::optional<DimTables> load_cached_tables(std::uint64_t hash) {
    auto file = cache_dir() / (std::to_string(hash) + ".json");
    std::ifstream in(file);
    if (!in) return std::nullopt;
    try {
        nlohmann::json j;
        in >> j;
        DimTables t;
        t.hom = j.at("hom").get<std::vector<std::vector<std::size_t>>>();
        t.ext = j.at("ext").get<std::vector<std::vector<std::size_t>>>();
        return t;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

inline void store_cached_tables(std::uint64_t hash, const DimTables& t) {
    std::error_code ec;
    std::filesystem::create_directories(cache_dir(), ec);
    if (ec) return;
    nlohmann::json j;
    j["hom"] = t.hom;
    j["ext"] = t.ext;
    std::ofstream out(cache_dir() / (std::to_string(hash) + ".json"));
    out << j.dump(1) << "\n";
}

// ------------------------------------------------------------------- reports

inline std::string serre_label(const Workspace& w, const SerreSubset& s) {
    std::string out = "{";
    for (std::size_t k = 0; k < s.indices.size(); ++k) {
        if (k) out += ",";
        out += w.atlas_name(s.indices[k]);
    }
    return out + "}";
}

inline std::string dim_table_text(const Workspace& w, const std::vector<std::vector<std::size_t>>& t,
                                  const std::string& title) {
    std::ostringstream os;
    os << title << " (rows = first argument):\n";
    for (std::size_t i = 0; i < t.size(); ++i) {
        os << "  " << w.atlas_name(i) << ":";
        for (std::size_t j = 0; j < t[i].size(); ++j) os << " " << t[i][j];
        os << "\n";
    }
    return os.str();
}

inline std::string analysis_report(Workspace& w, const DimTables& tables) {
    std::ostringstream os;
    os << "field p = " << w.input.p << "\n";
    os << "algebra dimension = " << w.algebra->dim() << "\n";
    os << "atlas:";
    for (const auto& e : w.input.atlas) os << " " << e.name;
    os << "\n";
    os << dim_table_text(w, tables.hom, "hom dims");
    os << dim_table_text(w, tables.ext, "ext dims");
    os << "simple defects:";
    for (auto c : w.engine->simple_defects()) os << " " << w.atlas_name(c);
    if (w.engine->simple_defects().empty()) os << " (none)";
    os << "\n";
    os << "substructures: " << (std::size_t{1} << w.engine->simple_defects().size()) << "\n";
    return os.str();
}

inline std::string substructure_inventory(Workspace& w) {
    std::ostringstream os;
    auto subsets = w.engine->serre_subsets();
    const std::size_t n = w.atlas.size();
    for (std::size_t k = 0; k < subsets.size(); ++k) {
        Substructure f = w.engine->substructure_from_serre(subsets[k]);
        os << "substructure " << k << " serre=" << serre_label(w, subsets[k]) << " dims:";
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t a = 0; a < n; ++a)
                if (w.engine->ext_pair(c, a).dim() > 0)
                    os << " " << w.atlas_name(c) << "/" << w.atlas_name(a) << "="
                       << f.sub[c * n + a].cols();
        os << "\n";
    }
    return os.str();
}

inline std::string hasse_dot(Workspace& w) {
    std::ostringstream os;
    auto subsets = w.engine->serre_subsets();
    const std::size_t n = w.atlas.size();
    os << "digraph substructures {\n";
    os << "  rankdir=BT;\n";
    for (std::size_t k = 0; k < subsets.size(); ++k) {
        Substructure f = w.engine->substructure_from_serre(subsets[k]);
        std::ostringstream label;
        label << serre_label(w, subsets[k]);
        label << " [";
        bool first = true;
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t a = 0; a < n; ++a)
                if (w.engine->ext_pair(c, a).dim() > 0) {
                    if (!first) label << " ";
                    first = false;
                    label << f.sub[c * n + a].cols();
                }
        label << "]";
        os << "  n" << k << " [label=\"" << label.str() << "\"];\n";
    }
    for (const auto& [lo, hi] : w.engine->hasse_edges()) os << "  n" << lo << " -> n" << hi << ";\n";
    os << "}\n";
    return os.str();
}

// --------------------------------------------------------- verification suite

struct SuiteResult {
    std::vector<std::pair<std::string, bool>> checks;
    std::vector<std::string> details;

    void record(const std::string& name, bool pass, const std::string& detail = "") {
        checks.emplace_back(name, pass);
        if (!detail.empty()) details.push_back(name + ": " + detail);
    }
    bool ok() const {
        for (const auto& [name, pass] : checks)
            if (!pass) return false;
        return true;
    }
    std::string text() const {
        std::ostringstream os;
        for (const auto& [name, pass] : checks)
            os << "check " << name << ": " << (pass ? "pass" : "FAIL") << "\n";
        for (const auto& d : details) os << "  " << d << "\n";
        os << (ok() ? "all checks passed" : "CHECKS FAILED") << "\n";
        return os.str();
    }
};

namespace detail {

/// random nonzero Ext class over a random atlas pair; nullopt if all vanish
inline std::optional<ConflationClass> random_conflation(DefectEngine& eng, Sampler& rng) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t c = 0; c < eng.n(); ++c)
        for (std::size_t a = 0; a < eng.n(); ++a)
            if (eng.ext_pair(c, a).dim() > 0) pairs.emplace_back(c, a);
    if (pairs.empty()) return std::nullopt;
    auto [c, a] = pairs[rng.pick(pairs.size())];
    const ExtGroup& eg = eng.ext_pair(c, a);
    return eng.calc()->realize(eg, rng.nonzero_vector(eng.field(), eg.dim()));
}

inline QuotientModule as_quotient(const Defect& d) { return {d.module, d.projection}; }

}  // namespace detail

/// criterion: both defect constructions agree, with an explicit isomorphism
inline bool suite_dual_agreement(DefectEngine& eng, std::size_t samples, Sampler& rng) {
    for (std::size_t s = 0; s < samples; ++s) {
        auto conf = detail::random_conflation(eng, rng);
        if (!conf) return true;
        Defect d = eng.defect(*conf);
        eng.defect_dual_iso(d);  // throws on disagreement
    }
    return true;
}

/// criterion: defect(c^* delta) -> defect(delta) injective,
/// defect(delta) -> defect(a_* delta) surjective
inline bool suite_monotonicity(DefectEngine& eng, std::size_t samples, Sampler& rng,
                               std::string& note) {
    for (std::size_t s = 0; s < samples; ++s) {
        auto conf = detail::random_conflation(eng, rng);
        if (!conf) return true;
        Defect d = eng.defect(*conf);
        // pullback side
        std::size_t c2 = rng.pick(eng.n());
        const HomSpace& h = eng.calc()->hom(eng.table().member(c2), conf->c);
        if (h.dim() > 0) {
            std::vector<std::uint64_t> coords;
            FieldMatrix v = rng.nonzero_vector(eng.field(), h.dim());
            for (std::size_t i = 0; i < h.dim(); ++i) coords.push_back(v.at(i, 0));
            RepMorphism gamma = h.element(coords);
            auto rp = eng.calc()->realize_pullback(gamma, *conf);
            Defect dp = eng.defect(rp.pulled);
            GammaModuleMap inj = eng.induced_cokernel_map(detail::as_quotient(dp),
                                                          detail::as_quotient(d), gamma);
            for (std::size_t i = 0; i < eng.n(); ++i)
                if (rank(inj.at[i]) != dp.module.dim(i)) {
                    note = "pullback map not injective (sample " + std::to_string(s) + ")";
                    return false;
                }
        }
        // pushout side
        std::size_t a2 = rng.pick(eng.n());
        const HomSpace& ha = eng.calc()->hom(conf->a, eng.table().member(a2));
        if (ha.dim() > 0) {
            std::vector<std::uint64_t> coords;
            FieldMatrix v = rng.nonzero_vector(eng.field(), ha.dim());
            for (std::size_t i = 0; i < ha.dim(); ++i) coords.push_back(v.at(i, 0));
            RepMorphism alpha = ha.element(coords);
            FieldMatrix cls2 = eng.calc()->pushout_ext(alpha, *conf->group, conf->delta);
            const ExtGroup& eg2 = eng.calc()->ext(conf->c, eng.table().member(a2));
            ConflationClass conf2 = eng.calc()->realize(eg2, cls2);
            Defect d2 = eng.defect(conf2);
            GammaModuleMap surj = eng.induced_cokernel_map(
                detail::as_quotient(d), detail::as_quotient(d2), RepMorphism::identity(conf->c));
            for (std::size_t i = 0; i < eng.n(); ++i)
                if (rank(surj.at[i]) != d2.module.dim(i)) {
                    note = "pushout map not surjective (sample " + std::to_string(s) + ")";
                    return false;
                }
        }
    }
    return true;
}

/// criterion: four-term exactness for sampled composable deflation pairs
inline bool suite_step3(DefectEngine& eng, std::size_t samples, Sampler& rng, std::string& note) {
    Substructure full = eng.full_substructure();
    for (std::size_t s = 0; s < samples; ++s) {
        auto outer = detail::random_conflation(eng, rng);
        if (!outer) return true;
        auto inner = eng.sample_inner_conflation(full, *outer, rng);
        if (!inner) continue;
        auto res = eng.check_step3(*outer, *inner);
        if (!res.ok()) {
            note = res.notes.empty() ? "failed" : res.notes.front();
            return false;
        }
    }
    return true;
}

/// criterion: additivity of classes and defects under direct sums
inline bool suite_additivity(DefectEngine& eng, std::size_t samples, Sampler& rng,
                             std::string& note) {
    for (std::size_t s = 0; s < samples; ++s) {
        auto c1 = detail::random_conflation(eng, rng);
        auto c2 = detail::random_conflation(eng, rng);
        if (!c1 || !c2) return true;
        DirectSum sa = direct_sum({c1->a, c2->a});
        DirectSum sb = direct_sum({c1->b, c2->b});
        DirectSum sc = direct_sum({c1->c, c2->c});
        RepMorphism x = compose(sb.inclusions[0], compose(c1->x, sa.projections[0])) +
                        compose(sb.inclusions[1], compose(c2->x, sa.projections[1]));
        RepMorphism y = compose(sc.inclusions[0], compose(c1->y, sb.projections[0])) +
                        compose(sc.inclusions[1], compose(c2->y, sb.projections[1]));
        const ExtGroup& eg = eng.calc()->ext(sc.sum, sa.sum);
        FieldMatrix cls = eng.calc()->extract_class(eg, x, y);
        // expected class: pull back along the projections, push out along the
        // inclusions, and add
        FieldMatrix expect = eg.zero_class();
        const ConflationClass* parts[2] = {&*c1, &*c2};
        for (int k = 0; k < 2; ++k) {
            FieldMatrix pulled = eng.calc()->pullback_ext(sc.projections[k], *parts[k]->group,
                                                          parts[k]->delta);
            const ExtGroup& mid = eng.calc()->ext(sc.sum, parts[k]->a);
            expect = expect + eng.calc()->pushout_ext(sa.inclusions[k], mid, pulled);
        }
        if (!(cls == expect)) {
            note = "direct-sum class mismatch (sample " + std::to_string(s) + ")";
            return false;
        }
        // defect additivity, with an explicit isomorphism
        ConflationClass sum_conf{&eg, cls, sa.sum, sb.sum, sc.sum, x, y};
        Defect d = eng.defect(sum_conf);
        Defect d1 = eng.defect(*c1);
        Defect d2 = eng.defect(*c2);
        GammaModule ds = gamma_direct_sum(d1.module, d2.module);
        std::vector<FieldMatrix> mats;
        bool bad = false;
        for (std::size_t i = 0; i < eng.n(); ++i) {
            const HomSpace& h1 = eng.calc()->hom(eng.table().member(i), c1->c);
            const HomSpace& h2 = eng.calc()->hom(eng.table().member(i), c2->c);
            const HomSpace& hs = eng.calc()->hom(eng.table().member(i), sc.sum);
            FieldMatrix left = d.projection.at[i] * post_matrix(h1, hs, sc.inclusions[0]) *
                               detail::right_inverse(d1.projection.at[i]);
            FieldMatrix right = d.projection.at[i] * post_matrix(h2, hs, sc.inclusions[1]) *
                                detail::right_inverse(d2.projection.at[i]);
            FieldMatrix m = left.hconcat(right);
            if (m.cols() != d.module.dim(i) || rank(m) != d.module.dim(i)) bad = true;
            mats.push_back(std::move(m));
        }
        if (bad) {
            note = "defect direct sum not isomorphic (sample " + std::to_string(s) + ")";
            return false;
        }
        GammaModuleMap iso(ds, d.module, std::move(mats));  // naturality checked here
        (void)iso;
    }
    return true;
}

/// criterion: realizations of nonzero classes over simple defects are radical
inline bool suite_effaceability(DefectEngine& eng, std::string& note) {
    for (auto c : eng.simple_defects())
        for (std::size_t a = 0; a < eng.n(); ++a) {
            const ExtGroup& eg = eng.ext_pair(c, a);
            for (std::size_t k = 0; k < eg.dim(); ++k) {
                FieldMatrix cls = eg.zero_class();
                cls.at(k, 0) = 1;
                ConflationClass conf = eng.calc()->realize(eg, cls);
                if (!eng.deflation_is_radical(conf)) {
                    note = "non-radical deflation over " + std::to_string(c);
                    return false;
                }
            }
        }
    return true;
}

inline SuiteResult run_verification(Workspace& w) {
    DefectEngine& eng = *w.engine;
    const std::size_t samples = w.input.samples;
    SuiteResult res;

    try {
        eng.simple_defects();
        res.record("simple-defect-consistency", true);
    } catch (const InvariantViolation& e) {
        res.record("simple-defect-consistency", false, e.what());
    }

    {
        auto rt = eng.theorem_roundtrip();
        std::ostringstream os;
        os << "serre=" << rt.serre_count << " oracle=" << rt.oracle_count;
        res.record("theorem-roundtrip", rt.ok(), rt.ok() ? os.str() : rt.notes.front());
    }

    {
        Sampler rng(w.input.seed);
        bool ok = true;
        std::string note;
        try {
            ok = suite_dual_agreement(eng, std::max<std::size_t>(samples, 200), rng);
        } catch (const std::exception& e) {
            ok = false;
            note = e.what();
        }
        res.record("defect-dual-agreement", ok, note);
    }
    {
        Sampler rng(w.input.seed + 1);
        std::string note;
        bool ok = suite_monotonicity(eng, samples, rng, note);
        res.record("step1-monotonicity", ok, note);
    }
    {
        Sampler rng(w.input.seed + 2);
        std::string note;
        bool ok = suite_step3(eng, samples, rng, note);
        res.record("step3-exactness", ok, note);
    }
    {
        Sampler rng(w.input.seed + 3);
        std::string note;
        bool ok = suite_additivity(eng, samples, rng, note);
        res.record("additivity", ok, note);
    }
    {
        std::string note;
        bool ok = suite_effaceability(eng, note);
        res.record("effaceability", ok, note);
    }
    {
        bool ok = true;
        std::string note;
        try {
            for (const auto& s : eng.serre_subsets())
                eng.verify_closed(eng.substructure_from_serre(s), std::max<std::size_t>(samples / 10, 5),
                                  w.input.seed + 4);
        } catch (const std::exception& e) {
            ok = false;
            note = e.what();
        }
        res.record("closure", ok, note);
    }
    return res;
}

}  // namespace exstruct
