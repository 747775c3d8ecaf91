// dmflag: build, validate, and analyze differential modules over exact
// polynomial rings. All structured output is JSON on stdout; exit code 0
// means success / a true verdict, 1 a failed check or negative verdict,
// 2 an input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dmflag/dgmod.hpp"
#include "dmflag/flags.hpp"
#include "dmflag/json_io.hpp"
#include "dmflag/koszul.hpp"

using namespace dmflag;

namespace {

uint64_t default_characteristic() {
    const char* env = std::getenv("DMFLAG_CHAR");
    if (!env || !*env) return 0;
    std::string s(env);
    if (s == "0" || s == "q" || s == "Q") return 0;
    if (s == "p" || s == "fp") return 32003;  // finite field, no modulus given
    uint64_t v = std::stoull(s);
    if (v != 0 && !is_prime_u64(v))
        throw ParseError("DMFLAG_CHAR must be 0 or a prime");
    return v;
}

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json load_json(const std::string& path) {
    try {
        return json::parse(slurp(path));
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

LoadedModule load_module(const std::string& path) {
    return dm_from_json(load_json(path));
}

// "koszul:p1,p2,..." over the given ring.
ChainComplex parse_anchor(const std::string& spec, const PolyRing& ring) {
    const std::string prefix = "koszul:";
    if (spec.rfind(prefix, 0) != 0)
        throw ParseError("anchor must look like koszul:x1,x2,...");
    std::vector<Polynomial> entries;
    std::string body = spec.substr(prefix.size());
    size_t pos = 0;
    while (pos <= body.size()) {
        size_t comma = body.find(',', pos);
        std::string piece = body.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (piece.find_first_not_of(" \t") != std::string::npos)
            entries.push_back(Polynomial::parse(ring, piece));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (entries.empty()) throw ParseError("anchor has no entries");
    DualElement psi(ring, static_cast<int>(entries.size()), 1);
    for (size_t i = 0; i < entries.size(); ++i)
        psi.add_term(IndexSet(1) << i, entries[i]);
    return koszul_complex(psi, static_cast<int>(entries.size()));
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int run(int argc, char** argv) {
    CLI::App app{"differential modules over exact polynomial rings"};
    app.require_subcommand(1);
    uint64_t charac = default_characteristic();

    std::string check_file = "-";
    auto* c_check = app.add_subcommand(
        "check", "validate square-zero (and grading) of a module or complex");
    c_check->add_option("file", check_file, "module/complex JSON, - for stdin");

    std::string io_file = "-";
    std::string io_gallery;
    std::string gal_f;
    auto* c_export =
        app.add_subcommand("export", "re-emit a module as canonical JSON");
    c_export->add_option("file", io_file);
    c_export->add_option("--gallery", io_gallery, "export a gallery object");
    std::string import_file = "-";
    auto* c_import =
        app.add_subcommand("import", "validate a module and print a summary");
    c_import->add_option("file", import_file);

    std::string fold_file = "-";
    int fold_a = 0;
    auto* c_fold = app.add_subcommand("fold", "fold a complex into a module");
    c_fold->add_option("file", fold_file, "complex JSON");
    c_fold->add_option("--a", fold_a, "differential degree of the fold");

    std::string hom_file = "-";
    int hom_max_deg = -1;
    int jobs = 1;
    auto* c_hom = app.add_subcommand("homology", "degreewise homology dims");
    c_hom->add_option("file", hom_file);
    c_hom->add_option("--max-deg", hom_max_deg, "certificate bound");
    c_hom->add_option("--jobs", jobs, "parallelism hint");

    std::string cone_file = "-";
    std::string cone_var;
    auto* c_cone =
        app.add_subcommand("cone", "mapping cone of multiplication");
    c_cone->add_option("file", cone_file);
    c_cone->add_option("--var", cone_var,
                       "multiplier variable; appended to the ring if fresh")
        ->required();

    std::string box_complex, box_dm;
    auto* c_box = app.add_subcommand("box", "box product of complex and module");
    c_box->add_option("complex", box_complex)->required();
    c_box->add_option("module", box_dm)->required();

    std::string koszul_psi;
    int koszul_n = 2;
    auto* c_koszul =
        app.add_subcommand("koszul", "Koszul complex of a weight-1 dual");
    c_koszul->add_option("--psi", koszul_psi, "e.g. \"x1*e{1} + x2*e{2}\"")
        ->required();
    c_koszul->add_option("--n", koszul_n, "rank of E (default 2)");
    c_koszul->add_option("--char", charac, "coefficient characteristic");

    std::string kdm_duals;
    int kdm_a = 0;
    bool kdm_ungraded = false;
    auto* c_kdm = app.add_subcommand(
        "koszul-dm", "Koszul differential module from a duals file");
    c_kdm->add_option("--duals", kdm_duals, "JSON: {n, ring, duals: [...]}")
        ->required();
    c_kdm->add_option("--a", kdm_a, "differential degree");
    c_kdm->add_flag("--ungraded", kdm_ungraded, "skip twist inference");

    int sr_n = 2;
    auto* c_sr = app.add_subcommand(
        "smallrank", "rank 2^(n-1) degree-2 module with homology k");
    c_sr->add_option("--n", sr_n)->required();
    c_sr->add_option("--char", charac);

    std::string gal_id;
    auto* c_gal = app.add_subcommand("gallery", "built-in example objects");
    c_gal->add_option("id", gal_id)->required();
    c_gal->add_option("--f", gal_f, "corner entry for ex1.2");
    c_gal->add_option("--char", charac);

    std::string fd_file = "-";
    std::string fd_anchor;
    auto* c_fd = app.add_subcommand(
        "fold-decision", "decide isomorphism to the fold of the anchor");
    c_fd->add_option("file", fd_file);
    c_fd->add_option("--anchor", fd_anchor, "koszul:p1,p2,...")->required();

    std::string can_file = "-";
    std::string can_anchor;
    auto* c_can = app.add_subcommand(
        "cancel", "clear all blocks above the first off-diagonal");
    c_can->add_option("file", can_file);
    c_can->add_option("--anchor", can_anchor)->required();

    std::string da_file = "-";
    int da_a = 0;
    auto* c_da = app.add_subcommand(
        "degree-analysis", "twist bookkeeping for flags with homology k");
    c_da->add_option("file", da_file);
    c_da->add_option("--a", da_a, "differential degree")->required();

    std::string dgc_file = "-";
    std::string dgc_anchor, dgc_table, dgc_gallery;
    bool dgc_nonunital = false;
    auto* c_dgc =
        app.add_subcommand("dg-check", "verify a DG-module action table");
    c_dgc->add_option("file", dgc_file);
    c_dgc->add_option("--anchor", dgc_anchor, "koszul:p1,p2,...");
    c_dgc->add_option("--table", dgc_table, "action table JSON");
    c_dgc->add_option("--gallery", dgc_gallery,
                      "use a gallery module and its printed table (ex5.4)");
    c_dgc->add_flag("--non-unital", dgc_nonunital);

    std::string dgs_file = "-";
    std::string dgs_anchor, dgs_gallery;
    int dgs_max_deg = -1;
    bool dgs_nonunital = false;
    auto* c_dgs = app.add_subcommand(
        "dg-solve", "search for a DG-module action degree by degree");
    c_dgs->add_option("file", dgs_file);
    c_dgs->add_option("--anchor", dgs_anchor, "koszul:p1,p2,...");
    c_dgs->add_option("--gallery", dgs_gallery);
    int dgs_jobs = 1;
    c_dgs->add_option("--max-deg", dgs_max_deg);
    c_dgs->add_flag("--non-unital", dgs_nonunital);
    c_dgs->add_option("--char", charac);
    c_dgs->add_option("--jobs", dgs_jobs, "parallelism hint");

    CLI11_PARSE(app, argc, argv);

    if (c_check->parsed()) {
        json j = load_json(check_file);
        try {
            if (json_is_complex(j)) {
                ChainComplex c = complex_from_json(j);
                std::cout << "complex: ok (length " << c.length() << ")\n";
                std::cout << "square-zero: ok\n";
                if (c.graded()) std::cout << "graded: ok\n";
            } else {
                LoadedModule m = dm_from_json(j);
                if (m.levels) FreeFlag(m.dm, *m.levels);  // flag invariant
                std::cout << "square-zero: ok\n";
                if (m.dm.graded())
                    std::cout << "graded: ok (degree " << m.dm.degree()
                              << ")\n";
                if (m.levels) std::cout << "flag: ok\n";
            }
        } catch (const NotSquareZero& e) {
            std::cout << "square-zero: FAILED (" << e.what() << ")\n";
            return 1;
        } catch (const NotHomogeneous& e) {
            std::cout << "graded: FAILED (" << e.what() << ")\n";
            return 1;
        } catch (const PreconditionViolated& e) {
            std::cout << "flag: FAILED (" << e.what() << ")\n";
            return 1;
        }
        return 0;
    }

    if (c_export->parsed()) {
        if (!io_gallery.empty()) {
            GalleryItem item =
                gallery(io_gallery, charac,
                        gal_f.empty() ? std::nullopt
                                      : std::make_optional(gal_f));
            if (std::holds_alternative<FreeFlag>(item))
                emit(flag_to_json(std::get<FreeFlag>(item)));
            else
                emit(dm_to_json(std::get<DifferentialModule>(item)));
            return 0;
        }
        json j = load_json(io_file);
        if (json_is_complex(j))
            emit(complex_to_json(complex_from_json(j)));
        else {
            LoadedModule m = dm_from_json(j);
            emit(dm_to_json(m.dm, m.levels));
        }
        return 0;
    }

    if (c_import->parsed()) {
        LoadedModule m = load_module(import_file);
        std::cout << "ring: " << m.dm.ring().str() << "\n"
                  << "rank: " << m.dm.rank() << "\n"
                  << "degree: " << m.dm.degree() << "\n"
                  << "graded: " << (m.dm.graded() ? "yes" : "no") << "\n"
                  << "flag levels: " << (m.levels ? "yes" : "no") << "\n"
                  << "minimal: " << (is_minimal(m.dm) ? "yes" : "no") << "\n";
        return 0;
    }

    if (c_fold->parsed()) {
        ChainComplex c = complex_from_json(load_json(fold_file));
        emit(flag_to_json(fold(c, fold_a)));
        return 0;
    }

    if (c_hom->parsed()) {
        LoadedModule m = load_module(hom_file);
        int bound = hom_max_deg >= 0 ? hom_max_deg : default_max_deg(m.dm);
        HilbertVector h = homology_hilbert(m.dm, bound, jobs);
        json j;
        j["max_deg"] = bound;
        j["hilbert"] = h.dims;
        emit(j);
        return 0;
    }

    if (c_cone->parsed()) {
        LoadedModule m = load_module(cone_file);
        PolyRing ring = m.dm.ring();
        DifferentialModule src = m.dm;
        if (ring.var_index(cone_var) < 0) {
            std::vector<std::string> names = ring.var_names();
            names.push_back(cone_var);
            PolyRing wide(std::move(names), ring.characteristic());
            src = change_ring(src, wide);
            ring = wide;
        }
        Polynomial mult = Polynomial::variable(
            ring, static_cast<size_t>(ring.var_index(cone_var)));
        emit(dm_to_json(mapping_cone(src, mult)));
        return 0;
    }

    if (c_box->parsed()) {
        ChainComplex c = complex_from_json(load_json(box_complex));
        LoadedModule m = load_module(box_dm);
        emit(dm_to_json(box_product(c, m.dm)));
        return 0;
    }

    if (c_koszul->parsed()) {
        PolyRing ring = PolyRing::standard(koszul_n, charac);
        DualElement psi = DualElement::parse(ring, koszul_n, koszul_psi);
        emit(complex_to_json(koszul_complex(psi, koszul_n)));
        return 0;
    }

    if (c_kdm->parsed()) {
        json j = load_json(kdm_duals);
        PolyRing ring = ring_from_json(j.at("ring"));
        int n = j.at("n").get<int>();
        std::vector<DualElement> duals;
        int w = 1;
        for (const auto& s : j.at("duals")) {
            if (s.is_null() || s.get<std::string>().empty())
                duals.emplace_back(ring, n, w);
            else
                duals.push_back(
                    DualElement::parse(ring, n, s.get<std::string>()));
            ++w;
        }
        FreeFlag f = koszul_dm(KoszulData::make(n, std::move(duals)), kdm_a,
                               !kdm_ungraded);
        emit(flag_to_json(f));
        return 0;
    }

    if (c_sr->parsed()) {
        emit(dm_to_json(small_rank_dm(sr_n, charac)));
        return 0;
    }

    if (c_gal->parsed()) {
        GalleryItem item =
            gallery(gal_id, charac,
                    gal_f.empty() ? std::nullopt : std::make_optional(gal_f));
        if (std::holds_alternative<FreeFlag>(item))
            emit(flag_to_json(std::get<FreeFlag>(item)));
        else
            emit(dm_to_json(std::get<DifferentialModule>(item)));
        return 0;
    }

    if (c_fd->parsed()) {
        LoadedModule m = load_module(fd_file);
        FreeFlag flag = m.as_flag();
        ChainComplex anchor = parse_anchor(fd_anchor, m.dm.ring());
        FoldDecision res = fold_decision_ci(flag, anchor);
        emit(fold_decision_to_json(res));
        return std::holds_alternative<IsoToFold>(res) ? 0 : 1;
    }

    if (c_can->parsed()) {
        LoadedModule m = load_module(can_file);
        FreeFlag flag = m.as_flag();
        ChainComplex anchor = parse_anchor(can_anchor, m.dm.ring());
        CancelResult res = cancel_diagonals(flag, anchor);
        json j;
        j["flag"] = flag_to_json(res.flag);
        j["change_of_basis"] = matrix_to_json(res.change_of_basis);
        emit(j);
        return 0;
    }

    if (c_da->parsed()) {
        LoadedModule m = load_module(da_file);
        DegreeVerdict v = degree_analysis(m.as_flag(), da_a);
        json j;
        j["verdict"] =
            v == DegreeVerdict::ForcedFold ? "forced_fold" : "indeterminate";
        emit(j);
        return v == DegreeVerdict::ForcedFold ? 0 : 1;
    }

    if (c_dgc->parsed()) {
        DifferentialModule dm;
        ProductTable table;
        if (!dgc_gallery.empty()) {
            if (dgc_gallery != "ex5.4")
                throw ParseError("dg-check --gallery only knows ex5.4");
            GalleryItem item = gallery(dgc_gallery, charac);
            dm = std::get<FreeFlag>(item).dm();
            table = ex54_product_table(dm);
            dgc_anchor = "koszul:x1,x2";
        } else {
            LoadedModule m = load_module(dgc_file);
            dm = m.dm;
            if (dgc_anchor.empty() || dgc_table.empty())
                throw ParseError("dg-check needs --anchor and --table");
            table = product_table_from_json(load_json(dgc_table), dm.ring(),
                                            dm.rank());
        }
        ChainComplex anchor = parse_anchor(dgc_anchor, dm.ring());
        bool ok = check_dg_module(anchor, dm, table, !dgc_nonunital);
        json j;
        j["dg_module"] = ok;
        emit(j);
        return ok ? 0 : 1;
    }

    if (c_dgs->parsed()) {
        DifferentialModule dm;
        if (!dgs_gallery.empty()) {
            GalleryItem item = gallery(dgs_gallery, charac);
            dm = gallery_dm(item);
            if (dgs_anchor.empty()) {
                dgs_anchor = "koszul:";
                for (size_t i = 0; i < dm.ring().arity(); ++i)
                    dgs_anchor +=
                        (i ? "," : "") + dm.ring().var_name(i);
            }
        } else {
            LoadedModule m = load_module(dgs_file);
            dm = m.dm;
            if (dgs_anchor.empty())
                throw ParseError("dg-solve needs --anchor (or --gallery)");
        }
        ChainComplex anchor = parse_anchor(dgs_anchor, dm.ring());
        int bound = dgs_max_deg >= 0 ? dgs_max_deg : default_max_deg(dm);
        DGSolveResult res =
            solve_dg_module(anchor, dm, bound, !dgs_nonunital, dgs_jobs);
        if (std::holds_alternative<DgFeasible>(res)) {
            emit(product_table_to_json(std::get<DgFeasible>(res).table));
            return 0;
        }
        json j;
        j["infeasible_at_degree"] =
            std::get<DgInfeasible>(res).first_obstructed_degree;
        emit(j);
        return 1;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
