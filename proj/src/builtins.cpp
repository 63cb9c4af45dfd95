#include "gibbslab/builtins.hpp"

#include <cmath>

#include "gibbslab/error.hpp"

namespace gibbslab {

namespace {

double spin(Symbol s) { return s == 0 ? 1.0 : -1.0; }

}  // namespace

std::vector<std::string> builtin_names() { return {"bernoulli", "ising", "golden-mean"}; }

Model builtin_model(const std::string& name, const BuiltinParams& prm) {
    if (!(prm.alpha > 0.0 && prm.alpha < 1.0)) throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0, 1)");
    if (name == "bernoulli") {
        if (!(prm.p > 0.0 && prm.p < 1.0)) throw Error(ErrorKind::InvalidArgument, "p must lie in (0, 1)");
        ShiftSpace s = ShiftSpace::validate(2, {{1, 1}, {1, 1}});
        auto phi = FiniteMemoryFunction::from_table(s, 1, {{{0}, std::log(prm.p)}, {{1}, std::log1p(-prm.p)}},
                                                    prm.alpha);
        auto psi = FiniteMemoryFunction::from_table(s, 1, {{{0}, 1.0 - prm.p}, {{1}, -prm.p}}, prm.alpha);
        return Model{s, std::move(phi), prm.alpha, std::move(psi)};
    }
    if (name == "ising") {
        if (!std::isfinite(prm.beta) || !std::isfinite(prm.field))
            throw Error(ErrorKind::InvalidArgument, "beta and field must be finite");
        ShiftSpace s = ShiftSpace::validate(2, {{1, 1}, {1, 1}});
        auto phi = FiniteMemoryFunction::from_function(
            s, 2,
            [&](std::span<const Symbol> w) {
                return prm.beta * spin(w[0]) * spin(w[1]) + 0.5 * prm.field * (spin(w[0]) + spin(w[1]));
            },
            prm.alpha);
        auto psi = FiniteMemoryFunction::from_function(s, 1, [](std::span<const Symbol> w) { return spin(w[0]); },
                                                       prm.alpha);
        return Model{s, std::move(phi), prm.alpha, std::move(psi)};
    }
    if (name == "golden-mean") {
        if (!std::isfinite(prm.a)) throw Error(ErrorKind::InvalidArgument, "a must be finite");
        ShiftSpace s = ShiftSpace::validate(2, {{1, 1}, {1, 0}});
        auto phi = FiniteMemoryFunction::from_table(s, 1, {{{0}, prm.a}, {{1}, 0.0}}, prm.alpha);
        return Model{s, std::move(phi), prm.alpha, indicator(s, 0).with_alpha(prm.alpha)};
    }
    throw Error(ErrorKind::InvalidArgument, "unknown builtin '" + name + "'");
}

FiniteMemoryFunction observable_or_default(const Model& m) {
    return m.observable ? *m.observable : indicator(m.space, 0).with_alpha(m.alpha);
}

}  // namespace gibbslab
