#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>

#include "dmflag/dgmod.hpp"
#include "dmflag/json_io.hpp"
#include "dmflag/koszul.hpp"

using namespace dmflag;

namespace {

struct RunResult {
    int code;
    std::string out;
};

RunResult run_cli(const std::string& args, const std::string& stdin_data = "") {
    std::string cmd;
    if (!stdin_data.empty()) {
        std::string tmp = std::string("cli_stdin.tmp");
        std::ofstream f(tmp);
        f << stdin_data;
        f.close();
        cmd = std::string(DMFLAG_BIN) + " " + args + " < " + tmp + " 2>/dev/null";
    } else {
        cmd = std::string(DMFLAG_BIN) + " " + args + " 2>/dev/null";
    }
    std::array<char, 4096> buf{};
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    int status = pclose(p);
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, out};
}

ChainComplex koszul_vars(const PolyRing& r) {
    DualElement psi(r, static_cast<int>(r.arity()), 1);
    for (size_t i = 0; i < r.arity(); ++i)
        psi.add_term(IndexSet(1) << i, Polynomial::variable(r, i));
    return koszul_complex(psi, static_cast<int>(r.arity()));
}

}  // namespace

TEST_CASE("module JSON round-trip preserves everything") {
    for (const std::string& id : gallery_ids()) {
        GalleryItem item = gallery(id);
        if (std::holds_alternative<FreeFlag>(item)) {
            const FreeFlag& f = std::get<FreeFlag>(item);
            LoadedModule back = dm_from_json(flag_to_json(f));
            REQUIRE(back.levels.has_value());
            CHECK(back.dm.matrix() == f.dm().matrix());
            CHECK(back.dm.module().twists == f.dm().module().twists);
            CHECK(back.dm.degree() == f.dm().degree());
            CHECK(back.dm.graded() == f.dm().graded());
            CHECK(*back.levels == f.levels());
        } else {
            const DifferentialModule& d = std::get<DifferentialModule>(item);
            LoadedModule back = dm_from_json(dm_to_json(d));
            CHECK(!back.levels.has_value());
            CHECK(back.dm.matrix() == d.matrix());
        }
    }
}

TEST_CASE("complex JSON round-trip") {
    PolyRing r = PolyRing::standard(3);
    ChainComplex c = koszul_vars(r);
    json j = complex_to_json(c);
    CHECK(json_is_complex(j));
    ChainComplex back = complex_from_json(j);
    REQUIRE(back.length() == c.length());
    for (size_t i = 1; i <= c.length(); ++i)
        CHECK(back.differential(i) == c.differential(i));
    for (size_t i = 0; i <= c.length(); ++i)
        CHECK(back.level(i).twists == c.level(i).twists);
}

TEST_CASE("product table JSON round-trip") {
    GalleryItem item = gallery("ex5.4");
    const FreeFlag& d = std::get<FreeFlag>(item);
    ProductTable t = ex54_product_table(d.dm());
    json j = product_table_to_json(t);
    ProductTable back = product_table_from_json(j, d.dm().ring(), 4);
    CHECK(back.entries == t.entries);
}

TEST_CASE("ring weights survive the JSON layer") {
    PolyRing r({"x", "y"}, 0, {1, 2});
    json j = ring_to_json(r);
    CHECK(ring_from_json(j) == r);
}

TEST_CASE("cli: gallery | check for every id") {
    for (const std::string& id : gallery_ids()) {
        RunResult g = run_cli("gallery " + id);
        REQUIRE(g.code == 0);
        RunResult c = run_cli("check -", g.out);
        CHECK(c.code == 0);
        CHECK(c.out.find("square-zero: ok") != std::string::npos);
    }
}

TEST_CASE("cli: schema stability across producing and consuming commands") {
    RunResult k = run_cli("koszul --psi \"x1*e{1} + x2*e{2}\" --n 2");
    REQUIRE(k.code == 0);
    RunResult f = run_cli("fold -", k.out);
    REQUIRE(f.code == 0);
    RunResult h = run_cli("homology - --max-deg 6", f.out);
    REQUIRE(h.code == 0);
    json hj = json::parse(h.out);
    CHECK(hj["hilbert"] == json::parse("[1,0,0,0,0,0,0]"));

    RunResult cone = run_cli("cone - --var x3", f.out);
    REQUIRE(cone.code == 0);
    RunResult h2 = run_cli("homology - --max-deg 6", cone.out);
    REQUIRE(h2.code == 0);
    CHECK(json::parse(h2.out)["hilbert"] == json::parse("[1,0,0,0,0,0,0]"));

    // fold output feeds fold-decision and cancel.
    RunResult fd = run_cli("fold-decision - --anchor koszul:x1,x2", f.out);
    CHECK(fd.code == 0);
    CHECK(json::parse(fd.out)["verdict"] == "iso");
    RunResult can = run_cli("cancel - --anchor koszul:x1,x2", f.out);
    CHECK(can.code == 0);

    // export is idempotent bytes-for-bytes (deterministic ordering).
    RunResult e1 = run_cli("export -", f.out);
    RunResult e2 = run_cli("export -", e1.out);
    CHECK(e1.out == e2.out);
}

TEST_CASE("cli: the documented pipeline example") {
    RunResult g = run_cli("gallery ex1.2 --f x1^2");
    REQUIRE(g.code == 0);
    RunResult fd = run_cli("fold-decision - --anchor koszul:x1,x2", g.out);
    CHECK(fd.code == 0);
    json j = json::parse(fd.out);
    CHECK(j["verdict"] == "iso");
    CHECK(j.contains("witness"));
}

TEST_CASE("cli: dg-solve verdicts and exit codes") {
    RunResult bad = run_cli("dg-solve --gallery cor3.x-corner1 --max-deg 8");
    CHECK(bad.code == 1);
    json j = json::parse(bad.out);
    REQUIRE(j.contains("infeasible_at_degree"));
    CHECK(j["infeasible_at_degree"].get<long>() <= 4);

    RunResult good = run_cli("dg-solve --gallery ex5.4 --max-deg 8");
    CHECK(good.code == 0);

    RunResult check54 = run_cli("dg-check --gallery ex5.4");
    CHECK(check54.code == 0);
}

TEST_CASE("cli: degree-analysis") {
    RunResult g = run_cli("gallery cor3.x-corner1");
    RunResult da = run_cli("degree-analysis - --a 2", g.out);
    CHECK(da.code == 1);
    CHECK(json::parse(da.out)["verdict"] == "indeterminate");

    RunResult f0 = run_cli("gallery ex1.2 --f x1*x2");
    RunResult da0 = run_cli("degree-analysis - --a 0", f0.out);
    CHECK(da0.code == 0);
    CHECK(json::parse(da0.out)["verdict"] == "forced_fold");
}

TEST_CASE("cli: smallrank, koszul-dm, import") {
    RunResult sr = run_cli("smallrank --n 4");
    REQUIRE(sr.code == 0);
    LoadedModule m = dm_from_json(json::parse(sr.out));
    CHECK(m.dm.rank() == 8);

    std::ofstream duals("cli_duals.tmp");
    duals << R"({"n": 2, "ring": {"vars": ["x1", "x2"], "char": 0},)"
          << R"( "duals": ["x1*e{1} + x2*e{2}", "x1*x2*e{1,2}"]})";
    duals.close();
    RunResult kdm = run_cli("koszul-dm --duals cli_duals.tmp --a 0");
    REQUIRE(kdm.code == 0);
    RunResult chk = run_cli("check -", kdm.out);
    CHECK(chk.code == 0);

    RunResult imp = run_cli("import -", sr.out);
    CHECK(imp.code == 0);
    CHECK(imp.out.find("rank: 8") != std::string::npos);
    CHECK(imp.out.find("minimal: yes") != std::string::npos);
}

TEST_CASE("cli: error paths exit with 1 or 2") {
    // Invalid module: d^2 != 0 is a failed check.
    json bad;
    bad["ring"] = json{{"vars", json::array({"x1"})}, {"char", 0}};
    bad["generators"] = json::array({json{{"twist", 0}}});
    bad["degree"] = 0;
    bad["graded"] = false;
    bad["matrix"] = json::array({json::array({"x1"})});
    RunResult r1 = run_cli("check -", bad.dump());
    CHECK(r1.code == 1);
    CHECK(r1.out.find("square-zero: FAILED") != std::string::npos);

    RunResult r2 = run_cli("check -", "this is not json");
    CHECK(r2.code == 2);

    RunResult r3 = run_cli("gallery no-such-id");
    CHECK(r3.code == 2);

    RunResult r4 = run_cli("fold-decision - --anchor nonsense",
                           run_cli("gallery ex1.2").out);
    CHECK(r4.code == 2);
}
