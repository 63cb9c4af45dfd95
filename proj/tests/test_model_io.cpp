#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "gibbslab/builtins.hpp"
#include "gibbslab/error.hpp"
#include "gibbslab/model_io.hpp"

using namespace gibbslab;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an Error");
    return ErrorKind::Schema;
}

Json golden_json() {
    return Json::parse(R"({
      "alphabet": 2,
      "transitions": [[1, 1], [1, 0]],
      "potential": {"memory": 2, "values": {"1,1": 0.25, "1,2": -0.5, "2,1": 1.0}},
      "alpha": 0.25,
      "observable": {"memory": 1, "values": {"1": 1, "2": 0}}
    })");
}

}  // namespace

TEST_CASE("word keys are 1-based") {
    CHECK(word_key({0, 1, 0}) == "1,2,1");
    CHECK(parse_word_key("1,2,1", 2) == Word{0, 1, 0});
    CHECK(kind_of([] { parse_word_key("1,3", 2); }) == ErrorKind::Schema);
    CHECK(kind_of([] { parse_word_key("0", 2); }) == ErrorKind::Schema);
    CHECK(kind_of([] { parse_word_key("1,x", 2); }) == ErrorKind::Schema);
    CHECK(kind_of([] { parse_word_key("", 2); }) == ErrorKind::Schema);
}

TEST_CASE("parse a model") {
    const Model m = parse_model(golden_json());
    CHECK(m.space.mixing_time() == 2);
    CHECK(m.alpha == 0.25);
    CHECK(m.potential.memory() == 2);
    CHECK(m.potential(Word{0, 1}) == -0.5);
    REQUIRE(m.observable.has_value());
    CHECK((*m.observable)(Word{0}) == 1.0);
}

TEST_CASE("round trip is exact and canonical") {
    const Json j = golden_json();
    const Json back = model_to_json(parse_model(j));
    CHECK(dump_json(back) == dump_json(j));
    for (const auto& name : builtin_names()) {
        const Model m = builtin_model(name, {.p = 0.3, .beta = 0.1 + 1.0 / 3.0, .field = 0.7, .a = -1.1});
        const Json once = model_to_json(m);
        const Json twice = model_to_json(parse_model(Json::parse(dump_json(once))));
        CHECK(dump_json(once) == dump_json(twice));
        CHECK(parse_model(once).potential.table() == m.potential.table());
    }
}

TEST_CASE("schema violations") {
    auto with = [](auto edit) {
        Json j = golden_json();
        edit(j);
        return j;
    };
    CHECK(kind_of([&] { parse_model(with([](Json& j) { j.erase("potential"); })); }) == ErrorKind::Schema);
    CHECK(kind_of([&] { parse_model(with([](Json& j) { j["extra"] = 1; })); }) == ErrorKind::Schema);
    CHECK(kind_of([&] { parse_model(with([](Json& j) { j["alphabet"] = "two"; })); }) == ErrorKind::Schema);
    CHECK(kind_of([&] { parse_model(with([](Json& j) { j["transitions"][0][0] = 0.5; })); }) == ErrorKind::Schema);
    CHECK(kind_of([&] { parse_model(with([](Json& j) { j["alpha"] = 1.5; })); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { parse_model(with([](Json& j) { j["potential"]["values"]["2,2"] = 0; })); }) ==
          ErrorKind::Schema);
    CHECK(kind_of([&] { parse_model(with([](Json& j) { j["potential"]["values"].erase("2,1"); })); }) ==
          ErrorKind::Schema);
    CHECK(kind_of([&] { parse_model(with([](Json& j) { j["potential"]["values"]["1,1"] = "x"; })); }) ==
          ErrorKind::Schema);
    CHECK(kind_of([&] { parse_model(with([](Json& j) { j["transitions"] = {{1, 0}, {0, 1}}; })); }) ==
          ErrorKind::NotPrimitive);
    CHECK(kind_of([] { load_model("/nonexistent/model.json"); }) == ErrorKind::Schema);
}

TEST_CASE("load from a file") {
    const std::string path = "test_model_io_tmp.json";
    {
        std::ofstream out(path);
        out << dump_json(golden_json());
    }
    const Model m = load_model(path);
    CHECK(m.potential(Word{1, 0}) == 1.0);
    {
        std::ofstream out(path);
        out << "{ not json";
    }
    CHECK(kind_of([&] { load_model(path); }) == ErrorKind::Schema);
    std::remove(path.c_str());
}

TEST_CASE("json number formatting") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(std::nan("")) == "null");
    CHECK(csv_double(std::numeric_limits<double>::infinity()) == "inf");
    Json j = Json::object();
    j["a"] = std::vector<double>{1.5, 2.0};
    j["b"] = Json::object();
    j["b"]["c"] = 1.0 / 3.0;
    CHECK(dump_json(j) == "{\n  \"a\": [1.5, 2],\n  \"b\": {\n    \"c\": 0.33333333333333331\n  }\n}\n");
}
