#include "gibbslab/json_writer.hpp"

#include <cmath>
#include <cstdio>

namespace gibbslab {

namespace {

void write(const Json& j, int depth, std::string& out) {
    const std::string pad(2 * (depth + 1), ' ');
    const std::string close(2 * depth, ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out += ",\n";
                first = false;
                out += pad + Json(key).dump() + ": ";
                write(value, depth + 1, out);
            }
            out += "\n" + close + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // numeric arrays stay on one line
            bool scalar = true;
            for (const auto& v : j) scalar = scalar && v.is_primitive();
            out += scalar ? "[" : "[\n";
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += scalar ? ", " : ",\n";
                first = false;
                if (!scalar) out += pad;
                write(v, depth + 1, out);
            }
            out += scalar ? "]" : "\n" + close + "]";
            return;
        }
        case Json::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        default:
            out += j.dump();
    }
}

}  // namespace

std::string format_double(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return format_double(x);
}

std::string dump_json(const Json& j) {
    std::string out;
    write(j, 0, out);
    out += "\n";
    return out;
}

}  // namespace gibbslab
