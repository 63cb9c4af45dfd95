#include "gibbslab/model_io.hpp"

#include <fstream>
#include <sstream>

#include "gibbslab/error.hpp"

namespace gibbslab {

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorKind::Schema, what); }

const Json& field(const Json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) schema(std::string("missing field '") + name + "'");
    return j.at(name);
}

int integer_field(const Json& j, const char* name) {
    const Json& v = field(j, name);
    if (!v.is_number_integer()) schema(std::string("field '") + name + "' must be an integer");
    return v.get<int>();
}

FiniteMemoryFunction parse_table(const Json& j, const ShiftSpace& space, double alpha, const char* what) {
    if (!j.is_object()) schema(std::string(what) + " must be an object");
    const int memory = integer_field(j, "memory");
    if (memory < 1) schema(std::string(what) + ".memory must be >= 1");
    const Json& values = field(j, "values");
    if (!values.is_object()) schema(std::string(what) + ".values must be an object");
    std::map<Word, double> table;
    for (const auto& [key, v] : values.items()) {
        if (!v.is_number()) schema(std::string(what) + " value for '" + key + "' is not a number");
        Word w = parse_word_key(key, space.alphabet_size());
        if (!table.emplace(std::move(w), v.get<double>()).second) schema("duplicate word key '" + key + "'");
    }
    return FiniteMemoryFunction::from_table(space, memory, table, alpha);
}

Json table_to_json(const FiniteMemoryFunction& f) {
    Json values = Json::object();
    for (const auto& [w, v] : f.table()) values[word_key(w)] = v;
    Json j = Json::object();
    j["memory"] = f.memory();
    j["values"] = std::move(values);
    return j;
}

}  // namespace

std::string word_key(const Word& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(w[i] + 1);
    }
    return s;
}

Word parse_word_key(const std::string& key, int alphabet_size) {
    Word w;
    std::stringstream ss(key);
    std::string part;
    while (std::getline(ss, part, ',')) {
        std::size_t used = 0;
        int symbol = 0;
        try {
            symbol = std::stoi(part, &used);
        } catch (const std::exception&) {
            schema("bad word key '" + key + "'");
        }
        if (used != part.size() || symbol < 1 || symbol > alphabet_size)
            schema("bad symbol in word key '" + key + "'");
        w.push_back(symbol - 1);
    }
    if (w.empty()) schema("empty word key");
    return w;
}

Model parse_model(const Json& j) {
    if (!j.is_object()) schema("model must be a JSON object");
    const int n = integer_field(j, "alphabet");
    const Json& rows = field(j, "transitions");
    if (!rows.is_array()) schema("transitions must be an array of rows");
    TransitionMatrix a;
    for (const Json& row : rows) {
        if (!row.is_array()) schema("transitions must be an array of rows");
        std::vector<int> r;
        for (const Json& x : row) {
            if (!x.is_number_integer()) schema("transition entries must be integers");
            r.push_back(x.get<int>());
        }
        a.push_back(std::move(r));
    }
    ShiftSpace space = ShiftSpace::validate(n, a);

    double alpha = FiniteMemoryFunction::kDefaultAlpha;
    if (j.contains("alpha")) {
        if (!j.at("alpha").is_number()) schema("alpha must be a number");
        alpha = j.at("alpha").get<double>();
        if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0, 1)");
    }
    FiniteMemoryFunction potential = parse_table(field(j, "potential"), space, alpha, "potential");
    std::optional<FiniteMemoryFunction> observable;
    if (j.contains("observable") && !j.at("observable").is_null())
        observable = parse_table(j.at("observable"), space, alpha, "observable");
    for (const auto& [key, v] : j.items())
        if (key != "alphabet" && key != "transitions" && key != "potential" && key != "alpha" && key != "observable")
            schema("unknown field '" + key + "'");
    return Model{std::move(space), std::move(potential), alpha, std::move(observable)};
}

Model load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Schema, "cannot open model file '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        schema(std::string("invalid JSON: ") + e.what());
    }
    return parse_model(j);
}

Json model_to_json(const Model& m) {
    Json j = Json::object();
    j["alphabet"] = m.space.alphabet_size();
    j["transitions"] = m.space.transitions();
    j["potential"] = table_to_json(m.potential);
    j["alpha"] = m.alpha;
    if (m.observable) j["observable"] = table_to_json(*m.observable);
    return j;
}

}  // namespace gibbslab
