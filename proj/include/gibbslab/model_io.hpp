#pragma once

#include <optional>
#include <string>

#include "gibbslab/json_writer.hpp"
#include "gibbslab/potential.hpp"
#include "gibbslab/shift_space.hpp"

namespace gibbslab {

/// A model file: shift, potential, metric parameter and optional observable.
struct Model {
    ShiftSpace space;
    FiniteMemoryFunction potential;
    double alpha = FiniteMemoryFunction::kDefaultAlpha;
    std::optional<FiniteMemoryFunction> observable;
};

/// Schema errors (missing or mistyped fields, bad word keys) throw Error(Schema);
/// shift and table validation errors keep their own kinds.
Model parse_model(const Json& j);
Model load_model(const std::string& path);

/// Canonical form: alphabet, transitions, potential, alpha, observable (if any);
/// table keys in lexicographic word order, 1-based symbols.
Json model_to_json(const Model& m);

/// "1,2" ↔ {0, 1}
std::string word_key(const Word& w);
Word parse_word_key(const std::string& key, int alphabet_size);

}  // namespace gibbslab
