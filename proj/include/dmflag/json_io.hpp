#ifndef DMFLAG_JSON_IO_HPP
#define DMFLAG_JSON_IO_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "dmflag/dgmod.hpp"
#include "dmflag/diffmod.hpp"
#include "dmflag/flags.hpp"

namespace dmflag {

using nlohmann::json;

json ring_to_json(const PolyRing& ring);
PolyRing ring_from_json(const json& j);

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, const PolyRing& ring);

// {"ring": {...}, "generators": [{"twist": t, "flag_level": l}, ...],
//  "degree": a, "graded": bool, "matrix": [["poly", ...], ...]}
// flag_level is present exactly when the object carries flag levels.
json dm_to_json(const DifferentialModule& dm,
                const std::optional<std::vector<int>>& levels = std::nullopt);
json flag_to_json(const FreeFlag& flag);

struct LoadedModule {
    DifferentialModule dm;
    std::optional<std::vector<int>> levels;

    FreeFlag as_flag() const;
};
LoadedModule dm_from_json(const json& j);

// {"ring": {...}, "modules": [[{"twist": t}, ...], ...],
//  "differentials": [matrix, ...], "graded": bool}
json complex_to_json(const ChainComplex& c);
ChainComplex complex_from_json(const json& j);

// Detects a module ("matrix") vs a complex ("differentials").
bool json_is_complex(const json& j);

json product_table_to_json(const ProductTable& t);
ProductTable product_table_from_json(const json& j, const PolyRing& ring,
                                     size_t rank);

json fold_decision_to_json(const FoldDecision& d);

}  // namespace dmflag

#endif
