#include "dmflag/json_io.hpp"

namespace dmflag {

json ring_to_json(const PolyRing& ring) {
    json j;
    j["vars"] = ring.var_names();
    j["char"] = ring.characteristic();
    bool unit_weights = true;
    for (int w : ring.weights())
        if (w != 1) unit_weights = false;
    if (!unit_weights) j["weights"] = ring.weights();
    return j;
}

PolyRing ring_from_json(const json& j) {
    try {
        std::vector<std::string> vars =
            j.at("vars").get<std::vector<std::string>>();
        uint64_t charac = j.value("char", 0);
        std::vector<int> weights;
        if (j.contains("weights")) weights = j["weights"].get<std::vector<int>>();
        return PolyRing(std::move(vars), charac, std::move(weights));
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad ring JSON: ") + e.what());
    }
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (size_t c = 0; c < m.cols(); ++c) row.push_back(m.at(r, c).str());
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j, const PolyRing& ring) {
    if (!j.is_array()) throw ParseError("matrix JSON must be an array of rows");
    std::vector<std::vector<Polynomial>> rows;
    for (const auto& jr : j) {
        std::vector<Polynomial> row;
        for (const auto& cell : jr)
            row.push_back(Polynomial::parse(ring, cell.get<std::string>()));
        rows.push_back(std::move(row));
    }
    return Matrix::from_rows(ring, std::move(rows));
}

json dm_to_json(const DifferentialModule& dm,
                const std::optional<std::vector<int>>& levels) {
    json j;
    j["ring"] = ring_to_json(dm.ring());
    json gens = json::array();
    for (size_t g = 0; g < dm.rank(); ++g) {
        json jg;
        jg["twist"] = dm.module().twists[g];
        if (levels) jg["flag_level"] = (*levels)[g];
        gens.push_back(std::move(jg));
    }
    j["generators"] = std::move(gens);
    j["degree"] = dm.degree();
    j["graded"] = dm.graded();
    j["matrix"] = matrix_to_json(dm.matrix());
    return j;
}

json flag_to_json(const FreeFlag& flag) {
    return dm_to_json(flag.dm(), flag.levels());
}

FreeFlag LoadedModule::as_flag() const {
    if (!levels)
        throw PreconditionViolated(
            "this operation needs flag levels (generators[].flag_level)");
    return FreeFlag(dm, *levels);
}

LoadedModule dm_from_json(const json& j) {
    try {
        PolyRing ring = ring_from_json(j.at("ring"));
        GradedFreeModule mod{ring, {}};
        std::optional<std::vector<int>> levels;
        for (const auto& jg : j.at("generators")) {
            mod.twists.push_back(jg.value("twist", 0));
            if (jg.contains("flag_level")) {
                if (!levels) levels.emplace();
                levels->push_back(jg["flag_level"].get<int>());
            }
        }
        if (levels && levels->size() != mod.twists.size())
            throw ParseError("flag_level must be set on all generators or none");
        Matrix m = matrix_from_json(j.at("matrix"), ring);
        DifferentialModule dm =
            make_dm(std::move(mod), std::move(m), j.value("degree", 0),
                    j.value("graded", false));
        return LoadedModule{std::move(dm), std::move(levels)};
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad module JSON: ") + e.what());
    }
}

json complex_to_json(const ChainComplex& c) {
    json j;
    j["ring"] = ring_to_json(c.ring());
    json mods = json::array();
    for (size_t i = 0; i <= c.length(); ++i) {
        json level = json::array();
        for (int t : c.level(i).twists) level.push_back(json{{"twist", t}});
        mods.push_back(std::move(level));
    }
    j["modules"] = std::move(mods);
    json diffs = json::array();
    for (size_t i = 1; i <= c.length(); ++i)
        diffs.push_back(matrix_to_json(c.differential(i)));
    j["differentials"] = std::move(diffs);
    j["graded"] = c.graded();
    return j;
}

ChainComplex complex_from_json(const json& j) {
    try {
        PolyRing ring = ring_from_json(j.at("ring"));
        std::vector<GradedFreeModule> modules;
        for (const auto& jl : j.at("modules")) {
            GradedFreeModule m{ring, {}};
            for (const auto& jg : jl) m.twists.push_back(jg.value("twist", 0));
            modules.push_back(std::move(m));
        }
        std::vector<Matrix> diffs;
        for (const auto& jm : j.at("differentials"))
            diffs.push_back(matrix_from_json(jm, ring));
        return ChainComplex(std::move(modules), std::move(diffs),
                            j.value("graded", false));
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad complex JSON: ") + e.what());
    }
}

bool json_is_complex(const json& j) { return j.contains("differentials"); }

json product_table_to_json(const ProductTable& t) {
    json j = json::object();
    for (const auto& [key, v] : t.entries) {
        auto [i, b, g] = key;
        std::string k = std::to_string(i) + "," + std::to_string(b) + "," +
                        std::to_string(g);
        json vec = json::array();
        for (const auto& p : v) vec.push_back(p.str());
        j[k] = std::move(vec);
    }
    return j;
}

ProductTable product_table_from_json(const json& j, const PolyRing& ring,
                                     size_t rank) {
    ProductTable t;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        size_t c1 = key.find(','), c2 = key.rfind(',');
        if (c1 == std::string::npos || c2 == c1)
            throw ParseError("product table key must be i,basis,gen: " + key);
        int i = std::stoi(key.substr(0, c1));
        int b = std::stoi(key.substr(c1 + 1, c2 - c1 - 1));
        int g = std::stoi(key.substr(c2 + 1));
        std::vector<Polynomial> v;
        for (const auto& cell : it.value())
            v.push_back(Polynomial::parse(ring, cell.get<std::string>()));
        if (v.size() != rank)
            throw ParseError("product table value has wrong rank");
        t.entries[{i, b, g}] = std::move(v);
    }
    return t;
}

json fold_decision_to_json(const FoldDecision& d) {
    json j;
    if (std::holds_alternative<IsoToFold>(d)) {
        j["verdict"] = "iso";
        j["witness"] = matrix_to_json(std::get<IsoToFold>(d).change_of_basis);
    } else {
        const NotIso& n = std::get<NotIso>(d);
        j["verdict"] = "not_iso";
        j["witness"] = json{{"level", n.level},
                            {"entry", n.entry.str()},
                            {"normal_form", n.normal_form.str()}};
    }
    return j;
}

}  // namespace dmflag
