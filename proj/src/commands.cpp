#include "gibbslab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gibbslab/cone.hpp"
#include "gibbslab/error.hpp"
#include "gibbslab/gibbs.hpp"
#include "gibbslab/json_writer.hpp"
#include "gibbslab/sampler.hpp"
#include "gibbslab/stats.hpp"
#include "gibbslab/transfer.hpp"
#include "gibbslab/verify.hpp"

namespace gibbslab {

namespace {

namespace fs = std::filesystem;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Json>> rows;
};

std::string cell(const Json& v) {
    if (v.is_number_float()) return csv_double(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

std::string render_csv(const Table& t) {
    std::string s;
    for (std::size_t i = 0; i < t.header.size(); ++i) s += (i ? "," : "") + t.header[i];
    s += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + cell(row[i]);
        s += "\n";
    }
    return s;
}

Json table_json(const Table& t) {
    Json arr = Json::array();
    for (const auto& row : t.rows) {
        Json o = Json::object();
        for (std::size_t i = 0; i < row.size(); ++i) o[t.header[i]] = row[i];
        arr.push_back(std::move(o));
    }
    return arr;
}

void flatten(const Json& j, const std::string& prefix, Table& t) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, t);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), t);
    } else {
        t.rows.push_back({prefix, j});
    }
}

std::string render(const Json& j, const std::string& format) {
    if (format == "csv") {
        Table t{{"key", "value"}, {}};
        flatten(j, "", t);
        return render_csv(t);
    }
    return dump_json(j);
}

std::string render(const Table& t, const std::string& format) {
    return format == "json" ? dump_json(table_json(t)) : render_csv(t);
}

// Writes to <out_dir>/<name> when an output directory is set, else to `out`.
void emit(const CommandOptions& opts, const std::string& name, const std::string& content, std::ostream& out) {
    if (!opts.out_dir) {
        out << content;
        return;
    }
    fs::create_directories(*opts.out_dir);
    const fs::path path = fs::path(*opts.out_dir) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path.string() + "'");
    f << content;
}

std::string extension(const std::string& format) { return format == "csv" ? ".csv" : ".json"; }

// Reports default to JSON, tables (curves, ldp) to CSV.
std::string format_or(const CommandOptions& opts, const char* fallback) {
    return opts.format.empty() ? fallback : opts.format;
}

Json vec(const Eigen::VectorXd& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Json optional_number(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

Json state_labels(const std::vector<Word>& blocks) {
    Json a = Json::array();
    for (const Word& w : blocks) a.push_back(word_key(w));
    return a;
}

Json scan_json(const GibbsScanReport& s) {
    Json j = Json::object();
    j["n_max"] = s.n_max;
    j["min_ratio"] = s.min_ratio;
    j["max_ratio"] = s.max_ratio;
    j["c1"] = s.c1;
    j["c2"] = s.c2;
    j["pass"] = s.pass;
    j["within_band"] = s.within_band;
    j["stable_in_n"] = s.stable_in_n;
    return j;
}

Json verify_json(const VerifyReport& r) {
    Json entries = Json::array();
    for (const auto& e : r.entries) {
        Json o = Json::object();
        o["id"] = e.id;
        o["name"] = e.name;
        o["metric"] = e.metric;
        o["tolerance"] = e.tolerance;
        o["pass"] = e.pass;
        o["detail"] = e.detail;
        entries.push_back(std::move(o));
    }
    Json j = Json::object();
    j["characterizations"] = std::move(entries);
    j["pass"] = r.pass;
    return j;
}

MarkovMeasure load_candidate_measure(const std::string& path, const ShiftSpace& space) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Schema, "cannot open candidate measure '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
        const int l = j.at("block_length").get<int>();
        const auto pi = j.at("pi").get<std::vector<double>>();
        const auto q = j.at("q").get<std::vector<std::vector<double>>>();
        Eigen::VectorXd p(static_cast<Eigen::Index>(pi.size()));
        for (std::size_t i = 0; i < pi.size(); ++i) p(i) = pi[i];
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p.size(), p.size());
        if (q.size() != pi.size()) throw Error(ErrorKind::Schema, "candidate q must be square over the blocks");
        for (std::size_t r = 0; r < q.size(); ++r) {
            if (q[r].size() != pi.size()) throw Error(ErrorKind::Schema, "candidate q must be square over the blocks");
            for (std::size_t c = 0; c < q[r].size(); ++c) m(r, c) = q[r][c];
        }
        return markov_measure(space, l, p, m);
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::Schema, std::string("candidate measure: ") + e.what());
    }
}

// ---- subcommands ----

int cmd_analyze(const CommandOptions& opts, std::ostream& out) {
    const Model m = resolve_model(opts);
    const SolvedSystem sys = solve(m.potential);
    const EigenData& e = sys.eigen;
    const GapEstimate gap = spectral_gap(sys.transfer, e);
    const GibbsMeasure g = gibbs_measure(sys.transfer, e);
    const GibbsScanReport scan = gibbs_ratio_scan(g.measure, m.potential, e.pressure, opts.n_max);
    const ConstantsReport cr = constants_report(m.potential, m.alpha, e);
    const FiniteMemoryFunction psi = observable_or_default(m);

    Json j = Json::object();
    j["model"] = model_to_json(m);
    j["shift"] = {{"alphabet", m.space.alphabet_size()}, {"mixing_time", m.space.mixing_time()}};

    Json eigen = Json::object();
    eigen["block_length"] = sys.transfer.block_length();
    eigen["states"] = state_labels(sys.transfer.states());
    eigen["lambda"] = e.lambda;
    eigen["pressure"] = e.pressure;
    eigen["h"] = vec(e.h);
    eigen["nu"] = vec(e.nu);
    eigen["min_h"] = e.min_h;
    eigen["gap_ratio"] = e.gap_ratio;
    eigen["ess_radius_bound"] = e.ess_radius_bound;
    eigen["residual_h"] = e.residual_h;
    eigen["residual_nu"] = e.residual_nu;
    eigen["iterations"] = e.iterations;
    j["eigen"] = std::move(eigen);

    j["gap"] = {{"gamma", gap.gamma},
                {"deflation", optional_number(gap.deflation)},
                {"full_solve", optional_number(gap.full_solve)},
                {"method", gap.method}};

    const int pn = std::max(1, std::min(opts.n_max, 16));
    j["pressure_partition"] = {{"n", pn}, {"value", pressure_via_partition(m.potential, pn)}};

    Json cone = Json::object();
    cone["delta_prime"] = cr.cone.delta_prime;
    cone["n0"] = cr.cone.n0;
    cone["delta"] = 2.0 * cr.cone.delta_prime;
    cone["kappa"] = cr.cone.delta_prime > 0.0 ? Json(cr.cone.kappa(2.0 * cr.cone.delta_prime)) : Json(0.0);
    j["cone"] = std::move(cone);

    Json consts = Json::object();
    Json bm = Json::array();
    for (double x : cr.b_m) bm.push_back(x);
    consts["b_m"] = std::move(bm);
    consts["holder_b"] = cr.holder_b;
    consts["b0_geometric"] = cr.b0_geometric;
    consts["k_cone"] = cr.k_cone;
    consts["ess_radius_bound"] = cr.ess_radius_bound;
    consts["gibbs_c1_variation"] = cr.gibbs_c1_variation;
    consts["gibbs_c2_variation"] = cr.gibbs_c2_variation;
    consts["norm_f"] = cr.norm_f;
    consts["gibbs_c1_norm"] = cr.gibbs_c1_norm;
    consts["gibbs_c2_norm"] = cr.gibbs_c2_norm;
    consts["not_computed"] = cr.not_computed;
    j["constants"] = std::move(consts);

    Json gibbs = Json::object();
    gibbs["states"] = state_labels(g.measure.chain.blocks.blocks);
    gibbs["pi"] = vec(g.measure.chain.pi);
    Json q = Json::array();
    for (int u = 0; u < g.measure.chain.size(); ++u) q.push_back(vec(g.measure.chain.q.row(u).transpose()));
    gibbs["q"] = std::move(q);
    gibbs["entropy"] = entropy(g.measure);
    gibbs["potential_integral"] = expectation(g.measure, m.potential);
    gibbs["variational_defect"] = variational_defect(g.measure, m.potential, e.pressure);
    j["gibbs"] = std::move(gibbs);
    j["gibbs_scan"] = scan_json(scan);

    const VarianceReport var = asymptotic_variance(g.measure, psi);
    j["observable"] = {{"mean", expectation(g.measure, psi)},
                       {"variance", var.variance},
                       {"xi2", var.value},
                       {"xi2_green_kubo", var.green_kubo}};

    const std::string fmt = format_or(opts, "json");
    emit(opts, "analyze" + extension(fmt), render(j, fmt), out);

    if (opts.out_dir) {
        // contraction trace from 1 and a ramp spanning δ′ (inside the 2δ′ cone)
        const int n = sys.transfer.size();
        Eigen::VectorXd f = Eigen::VectorXd::Ones(n), v(n);
        for (int i = 0; i < n; ++i) v(i) = std::exp(n > 1 ? cr.cone.delta_prime * i / (n - 1) : 0.0);
        Table t{{"step", "theta", "factor", "in_cone_flag"}, {}};
        if (cr.cone.delta_prime > 0.0) {
            const ContractionTrace tr = contraction_trace(sys.transfer, e, f, v, opts.trace_blocks);
            for (const auto& s : tr.steps) t.rows.push_back({s.step, s.theta, s.factor, s.in_cone ? 1 : 0});
        }
        emit(opts, "trace.csv", render_csv(t), out);
        emit(opts, "scan.json", dump_json(scan_json(scan)), out);
    }
    return kExitOk;
}

int cmd_verify(const CommandOptions& opts, std::ostream& out) {
    const Model m = resolve_model(opts);
    VerifyOptions vo;
    if (opts.tol) vo.tol = *opts.tol;
    vo.n_max = opts.n_max;
    if (opts.candidate_measure_path) vo.candidate_measure = load_candidate_measure(*opts.candidate_measure_path, m.space);
    if (!opts.candidate_nu.empty()) {
        Eigen::VectorXd nu(static_cast<Eigen::Index>(opts.candidate_nu.size()));
        for (std::size_t i = 0; i < opts.candidate_nu.size(); ++i) nu(i) = opts.candidate_nu[i];
        vo.candidate_nu = nu;
    }
    const VerifyReport r = verify_characterizations(m.potential, observable_or_default(m), vo);
    if (format_or(opts, "json") == "csv") {
        Table t{{"id", "name", "metric", "tolerance", "pass"}, {}};
        for (const auto& e : r.entries) t.rows.push_back({e.id, e.name, e.metric, e.tolerance, e.pass});
        emit(opts, "verify.csv", render_csv(t), out);
    } else {
        emit(opts, "verify.json", dump_json(verify_json(r)), out);
    }
    return r.pass ? kExitOk : kExitVerifyFailed;
}

std::string status_of(const Error& e) { return to_string(e.kind()); }

int cmd_pressure_curve(const CommandOptions& opts, std::ostream& out) {
    const Model m = resolve_model(opts);
    const Cumulant c(m.potential, observable_or_default(m));
    std::vector<double> grid = opts.grid;
    std::sort(grid.begin(), grid.end());
    Table t{{"s", "Lambda", "dLambda", "pressure", "status"}, {}};
    for (double s : grid) {
        try {
            t.rows.push_back({s, c(s), c.derivative(s), c.pressure(s), "ok"});
        } catch (const Error& e) {
            if (!is_numerical(e.kind()) && e.kind() != ErrorKind::OutOfRange) throw;
            const double nan = std::numeric_limits<double>::quiet_NaN();
            t.rows.push_back({s, nan, nan, nan, status_of(e)});
        }
    }
    const std::string fmt = format_or(opts, "csv");
    emit(opts, "pressure_curve" + extension(fmt), render(t, fmt), out);
    return kExitOk;
}

int cmd_rate_curve(const CommandOptions& opts, std::ostream& out) {
    const Model m = resolve_model(opts);
    const Cumulant c(m.potential, observable_or_default(m));
    const double mean = c.derivative(0.0);
    std::vector<double> grid = opts.grid;
    std::sort(grid.begin(), grid.end());
    Table t{{"t", "t_centered", "I", "s_star", "status"}, {}};
    for (double x : grid) {
        try {
            const RateFunctionPoint p = rate_function(c, x);
            t.rows.push_back({x, x - mean, p.rate, p.s_star, "ok"});
        } catch (const Error& e) {
            if (!is_numerical(e.kind()) && e.kind() != ErrorKind::OutOfRange) throw;
            const double nan = std::numeric_limits<double>::quiet_NaN();
            t.rows.push_back({x, x - mean, nan, nan, status_of(e)});
        }
    }
    const std::string fmt = format_or(opts, "csv");
    emit(opts, "rate_curve" + extension(fmt), render(t, fmt), out);
    return kExitOk;
}

std::string distribution_csv(const LatticeDistribution& d) {
    std::string s = "# n=" + std::to_string(d.n) + ",a=" + format_double(d.offset) + ",b=" + format_double(d.span) +
                    "\nk,value,probability\n";
    for (std::size_t k = 0; k < d.probs.size(); ++k)
        s += std::to_string(k) + "," + csv_double(d.value(k)) + "," + csv_double(d.probs[k]) + "\n";
    return s;
}

int cmd_clt(const CommandOptions& opts, std::ostream& out) {
    const Model m = resolve_model(opts);
    const FiniteMemoryFunction psi = observable_or_default(m);
    const GibbsMeasure g = gibbs_measure(m.potential);
    const double mean = expectation(g.measure, psi);
    const double xi2 = asymptotic_variance(g.measure, psi).value;
    std::vector<int> ns = opts.n_list;
    std::sort(ns.begin(), ns.end());
    Json diags = Json::array();
    std::optional<Lattice> lattice;
    for (int n : ns) {
        const LatticeDistribution d = exact_birkhoff_distribution(g.measure, psi, n);
        lattice = Lattice{d.offset, d.span};
        const CltDiagnostics c = clt_diagnostics(d, mean, xi2);
        Json o = Json::object();
        o["n"] = n;
        o["ks"] = c.ks;
        o["be_constant"] = c.be_constant;
        o["lle_max_error"] = local_limit_check(d, mean, xi2);
        diags.push_back(std::move(o));
        if (opts.out_dir) emit(opts, "distribution_n" + std::to_string(n) + ".csv", distribution_csv(d), out);
    }
    Json j = Json::object();
    j["mean"] = mean;
    j["xi2"] = xi2;
    if (lattice) j["lattice"] = {{"offset", lattice->offset}, {"span", lattice->span}};
    j["diagnostics"] = std::move(diags);
    const std::string fmt = format_or(opts, "json");
    emit(opts, "clt" + extension(fmt), render(j, fmt), out);
    return kExitOk;
}

int cmd_ldp(const CommandOptions& opts, std::ostream& out) {
    const Model m = resolve_model(opts);
    const FiniteMemoryFunction psi = observable_or_default(m);
    const GibbsMeasure g = gibbs_measure(m.potential);
    const Cumulant c(m.potential, psi);
    const double mean = c.derivative(0.0);
    std::vector<int> ns = opts.n_list;
    std::sort(ns.begin(), ns.end());
    std::vector<LatticeDistribution> laws;
    for (int n : ns) laws.push_back(exact_birkhoff_distribution(g.measure, psi, n));
    double rate_nan = std::numeric_limits<double>::quiet_NaN();
    std::string rate_status = "ok";
    auto rate = [&](double t) {
        try {
            return rate_function(c, t).rate;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::OutOfRange) throw;
            rate_status = status_of(e);
            return rate_nan;
        }
    };
    const auto rows = ldp_empirical(laws, opts.a, opts.b, mean, rate);
    Table t{{"n", "probability", "empirical_rate", "rate_inf", "gap", "status"}, {}};
    for (const auto& r : rows)
        t.rows.push_back({r.n, r.probability, r.empirical_rate, r.rate_inf, r.gap,
                          r.zero_probability ? std::string("ZeroProbability") : rate_status});
    const std::string fmt = format_or(opts, "csv");
    emit(opts, "ldp" + extension(fmt), render(t, fmt), out);
    return kExitOk;
}

int cmd_sample(const CommandOptions& opts, std::ostream& out) {
    const Model m = resolve_model(opts);
    const FiniteMemoryFunction psi = observable_or_default(m);
    const GibbsMeasure g = gibbs_measure(m.potential);
    std::optional<LatticeDistribution> exact;
    try {
        exact = exact_birkhoff_distribution(g.measure, psi, opts.n);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotLattice && e.kind() != ErrorKind::SizeGuard) throw;
    }
    const SampleConfig cfg{opts.seed, opts.n, opts.trials};
    const EmpiricalBirkhoff eb = empirical_birkhoff(g.measure, psi, cfg, exact ? &*exact : nullptr);
    Json j = Json::object();
    j["mean"] = eb.mean;
    j["var_over_n"] = eb.var_over_n;
    j["ks"] = optional_number(eb.ks);
    const std::string fmt = format_or(opts, "json");
    emit(opts, "sample_summary" + extension(fmt), render(j, fmt), out);
    if (opts.out_dir) {
        std::string lines;
        for (int t = 0; t < opts.trials; ++t) {
            const Word w = sample_trial_path(g.measure, opts.n, opts.seed, static_cast<std::uint64_t>(t));
            lines += word_key(w) + "\n";
        }
        emit(opts, "samples.csv", lines, out);
    }
    return kExitOk;
}

int cmd_examples(const CommandOptions& opts, std::ostream& out) {
    Json list = Json::array();
    for (const std::string& name : builtin_names()) {
        const Model m = builtin_model(name, opts.params);
        list.push_back({{"name", name}, {"model", model_to_json(m)}});
        if (opts.out_dir) emit(opts, name + ".json", dump_json(model_to_json(m)), out);
    }
    if (!opts.out_dir) out << dump_json(list);
    return kExitOk;
}

}  // namespace

std::vector<double> make_grid(double from, double to, double step) {
    std::vector<double> g;
    if (!(step > 0.0) || !std::isfinite(from) || !std::isfinite(to))
        throw Error(ErrorKind::InvalidArgument, "grid needs finite bounds and a positive step");
    if (to < from) return g;
    const long count = std::lround(std::floor((to - from) / step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) g.push_back(from + static_cast<double>(i) * step);
    return g;
}

Model resolve_model(const CommandOptions& opts) {
    if (opts.model_path && opts.builtin) throw Error(ErrorKind::InvalidArgument, "use either --model or --builtin");
    if (opts.model_path) return load_model(*opts.model_path);
    if (opts.builtin) return builtin_model(*opts.builtin, opts.params);
    throw Error(ErrorKind::InvalidArgument, "a model is required (--model FILE or --builtin NAME)");
}

int run_command(const std::string& name, const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        if (!opts.format.empty() && opts.format != "json" && opts.format != "csv")
            throw Error(ErrorKind::InvalidArgument, "--format must be json or csv");
        if (name == "analyze") return cmd_analyze(opts, out);
        if (name == "verify") return cmd_verify(opts, out);
        if (name == "pressure-curve") return cmd_pressure_curve(opts, out);
        if (name == "rate-curve") return cmd_rate_curve(opts, out);
        if (name == "clt") return cmd_clt(opts, out);
        if (name == "ldp") return cmd_ldp(opts, out);
        if (name == "sample") return cmd_sample(opts, out);
        if (name == "examples") return cmd_examples(opts, out);
        throw Error(ErrorKind::InvalidArgument, "unknown subcommand '" + name + "'");
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return is_numerical(e.kind()) ? kExitNumerical : kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}

}  // namespace gibbslab
