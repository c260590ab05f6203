#include "cfdim/cli.hpp"

#include "cfdim/cache.hpp"
#include "cfdim/decompose.hpp"
#include "cfdim/dimension.hpp"
#include "cfdim/errors.hpp"
#include "cfdim/geometry.hpp"
#include "cfdim/pressure.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace cfdim {

using json = nlohmann::ordered_json;

namespace {

class Params {
public:
    explicit Params(const RunConfig& c) : cfg_(c) {}

    bool has(const std::string& k) const { return cfg_.params.count(k) > 0; }

    std::string str(const std::string& k, const std::string& def) const {
        auto it = cfg_.params.find(k);
        return it == cfg_.params.end() ? def : it->second;
    }
    std::string required(const std::string& k) const {
        auto it = cfg_.params.find(k);
        if (it == cfg_.params.end()) throw ConfigError("missing parameter '" + k + "'");
        return it->second;
    }
    Rational rational(const std::string& k, const std::string& def) const { return parse_rational(str(k, def)); }
    double real(const std::string& k, double def) const {
        if (!has(k)) return def;
        return to_double(parse_rational(required(k)));
    }
    std::uint64_t count(const std::string& k, std::uint64_t def) const {
        if (!has(k)) return def;
        Rational r = parse_rational(required(k));
        if (r.get_den() != 1 || r < 0 || !r.get_num().fits_ulong_p())
            throw DomainError("parameter '" + k + "' must be a non-negative integer");
        return r.get_num().get_ui();
    }
    bool flag(const std::string& k) const {
        std::string v = str(k, "false");
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw DomainError("parameter '" + k + "' must be true or false");
    }
    std::vector<unsigned> list(const std::string& k, const std::string& def) const {
        std::vector<unsigned> out;
        std::stringstream ss(str(k, def));
        std::string item;
        while (std::getline(ss, item, ',')) {
            Rational r = parse_rational(item);
            if (r.get_den() != 1 || r < 1 || !r.get_num().fits_uint_p())
                throw DomainError("parameter '" + k + "' must be a comma list of positive integers");
            out.push_back(static_cast<unsigned>(r.get_num().get_ui()));
        }
        if (out.empty()) throw DomainError("parameter '" + k + "' is empty");
        return out;
    }

private:
    const RunConfig& cfg_;
};

json big(const BigInt& z) {
    if (z.fits_slong_p()) return json(z.get_si());
    return json(z.get_str(10));
}

json rat(const Rational& r) { return json(to_string(r)); }

json seq_json(const EvenRestrictedSeq& s) {
    json even = json::array();
    for (const auto& a : s.even_quotients) even.push_back(big(a));
    Rational v = s.value();
    return {{"a0", big(s.integer_part)}, {"even", even}, {"odd_tail", s.odd_tail},
            {"cf", to_string(s.materialize())}, {"value", rat(v)}, {"value_float", to_double(v)}};
}

json solution_json(const PressureSolution& s) {
    return {{"s", s.s_value},       {"residual", s.residual}, {"bracket", {s.lo, s.hi}}, {"iterations", s.iterations},
            {"tolerance", s.tolerance}, {"leaves", s.leaves},   {"mode", to_string(s.mode)}, {"certified", s.certified}};
}

SolveOptions solve_options(const RunConfig& cfg, const Params& P) {
    SolveOptions o;
    o.leaf_budget = cfg.budget;
    o.threads = cfg.threads;
    o.mode = P.flag("exact") ? SummationMode::ExactRational : SummationMode::CompensatedFloat;
    return o;
}

json cmd_decompose(const Params& P) {
    Rational x = P.rational("x", P.required("x"));
    std::string op = P.str("op", "sum");
    if (op != "sum" && op != "product") throw DomainError("op must be sum or product");
    std::size_t k_max = P.count("k_max", 32);
    DecompOp dop = op == "sum" ? DecompOp::Sum : DecompOp::Product;
    DecompositionResult r = dop == DecompOp::Sum ? sum_decompose(x, k_max) : product_decompose(x, k_max);
    VerificationReport v = verify_decomposition(r, x, dop);
    if (!v.pass) throw InvariantViolation("decomposition failed verification: " + v.message);
    return {{"x", rat(x)},
            {"op", op},
            {"status", to_string(r.status)},
            {"first", seq_json(r.first)},
            {"second", seq_json(r.second)},
            {"bracket", {rat(r.bracket.low), rat(r.bracket.high)}},
            {"bracket_float", {to_double(r.bracket.low), to_double(r.bracket.high)}},
            {"residual_width", rat(v.residual_width)},
            {"steps", r.steps}};
}

Alphabet alphabet_param(const Params& P) {
    if (P.has("alphabet")) {
        auto l = P.list("alphabet", "");
        return Alphabet::of({l.begin(), l.end()});
    }
    return Alphabet::bounded(P.count("alpha", 2));
}

json cmd_pressure(const RunConfig& cfg, const Params& P, std::ostream& err) {
    PressureProblem p;
    p.alphabet = alphabet_param(P);
    p.B = P.rational("B", "2");
    p.n = static_cast<unsigned>(P.count("n", 1));
    p.mode = P.flag("exact") ? SummationMode::ExactRational : SummationMode::CompensatedFloat;
    p.leaf_budget = cfg.budget;
    p.threads = cfg.threads;
    p.validate();
    if (P.has("rho")) {
        Rational rho = P.rational("rho", "0");
        if (p.mode == SummationMode::ExactRational) {
            const BigInt& den = rho.get_den();
            if (mpz_popcount(den.get_mpz_t()) != 1) throw DomainError("exact mode needs a dyadic rho (k/2^j)");
            Dyadic d{rho.get_num(), static_cast<unsigned>(mpz_sizeinbase(den.get_mpz_t(), 2) - 1)};
            Enclosure e = pressure_sum_exact(p, d, static_cast<unsigned>(P.count("bits", 128)));
            return {{"rho", rat(rho)},
                    {"f_enclosure", {rat(e.lo), rat(e.hi)}},
                    {"f_enclosure_float", {to_double(e.lo), to_double(e.hi)}},
                    {"precision_bits", e.precision_bits}};
        }
        PressureValue v = pressure_sum(p, to_double(rho));
        return {{"rho", rat(rho)}, {"f", v.value}, {"error_bound", v.error_bound}, {"leaves", v.leaves}};
    }
    double tol = P.real("tol", 1e-12);
    if (!(tol > 0)) throw DomainError("tol must be positive");
    std::optional<std::string> cache_path = cfg.cache_path.empty() ? PressureCache::path_from_env() : cfg.cache_path;
    CacheKey key = make_cache_key(p, tol);
    if (cache_path && !P.flag("no_cache")) {
        PressureCache cache(*cache_path);
        if (auto hit = cache.lookup(key, err)) {
            json j = solution_json(*hit);
            j["source"] = "cache";
            return j;
        }
        PressureSolution s = solve_s(p, tol);
        cache.store(key, s);
        json j = solution_json(s);
        j["source"] = "computed";
        return j;
    }
    json j = solution_json(solve_s(p, tol));
    j["source"] = "computed";
    return j;
}

Schedule schedule_param(const Params& P) {
    return Schedule::make(P.list("indices", "1,3"), P.rational("B", "2"), P.count("alpha", 2));
}

std::string opt_rat(const std::optional<Rational>& r) { return r ? to_string(*r) : ""; }
std::string opt_float(const std::optional<Rational>& r) { return r ? format_double(to_double(*r)) : ""; }

json cmd_gaps(const RunConfig& cfg, const Params& P) {
    Schedule s = schedule_param(P);
    unsigned depth = static_cast<unsigned>(P.count("depth", 2));
    std::ostringstream csv;
    csv << "depth,word,length,length_float,g_left,g_left_float,g_right,g_right_float,g_min,g_min_float,ratio,"
           "ratio_float,left_bound,right_bound,next,holds\n";
    std::size_t words = 0, violations = 0;
    for (unsigned n = 1; n <= depth; ++n) {
        auto st = enumerate_Dn(s, n, cfg.budget);
        while (auto w = st.next()) {
            GapReport g = gaps(s, *w);
            Rational ratio = g.g_min / g.length;
            bool sched = g.next_scheduled;
            Rational need = sched ? Rational(2) : make_rational(2, static_cast<unsigned long>(s.alpha));
            bool holds = ratio >= need;
            ++words;
            if (!holds) ++violations;
            csv << n << ",\"" << to_string(*w) << "\"," << to_string(g.length) << ","
                << format_double(to_double(g.length)) << "," << opt_rat(g.g_left) << "," << opt_float(g.g_left) << ","
                << opt_rat(g.g_right) << "," << opt_float(g.g_right) << "," << to_string(g.g_min) << ","
                << format_double(to_double(g.g_min)) << "," << to_string(ratio) << ","
                << format_double(to_double(ratio)) << "," << opt_rat(g.left_bound) << "," << opt_rat(g.right_bound)
                << "," << (sched ? "next_scheduled" : "next_free") << "," << (holds ? "true" : "false") << "\n";
        }
    }
    if (!cfg.out_path.empty()) {
        std::ofstream f(cfg.out_path);
        if (!f) throw ResourceError("cannot write " + cfg.out_path);
        f << csv.str();
    }
    return {{"schedule", s.label()}, {"depth", depth}, {"words", words}, {"violations", violations},
            {"csv", cfg.out_path.empty() ? json(csv.str()) : json(cfg.out_path)}};
}

json cmd_measure(const RunConfig& cfg, const Params& P) {
    Schedule s = schedule_param(P);
    unsigned depth = static_cast<unsigned>(P.count("depth", std::min(3u, s.last_index())));
    if (depth > s.last_index()) throw ConfigError("depth exceeds the last scheduled index");
    double tol = P.real("tol", 0.0);
    SolveOptions opt = solve_options(cfg, P);
    STable table = build_s_table(s, tol, opt);
    json exps = json::object();
    for (auto [m, v] : table) exps[std::to_string(m)] = v;

    double level1 = 0;
    {
        auto st = enumerate_Dn(s, 1, cfg.budget);
        while (auto w = st.next()) level1 += measure_mu(s, *w, table, cfg.budget).mu;
    }
    double worst = 0;
    for (unsigned n = 1; n < depth; ++n) {
        auto st = enumerate_Dn(s, n, cfg.budget);
        while (auto w = st.next()) {
            double parent = measure_mu(s, *w, table, cfg.budget).mu;
            double sum = 0;
            auto next = s.range_at(n + 1);
            for (BigInt c = next.lo; c <= next.hi; ++c) {
                AdmissibleWord child = *w;
                child.sigma.push_back(c);
                sum += measure_mu(s, child, table, cfg.budget).mu;
            }
            worst = std::max(worst, std::fabs(sum - parent) / parent);
        }
    }
    json out = {{"schedule", s.label()}, {"depth", depth}, {"exponents", exps}, {"level1_total", level1},
                {"max_child_sum_rel_error", worst}};
    if (P.has("sB") || P.has("eps")) {
        double sB = P.has("sB") ? P.real("sB", 0) : extrapolate_sB(s.B, s.alpha, {1, 2, 3}, 1e-12, opt).estimate;
        EstimationParams ep = EstimationParams::make(s, P.real("eps", 0.05), sB, static_cast<unsigned>(P.count("k0", 1)));
        HolderScan hs = holder_scan(s, depth, table, ep, cfg.budget);
        double min_ratio = INFINITY;
        for (const auto& r : hs.rows) min_ratio = std::min(min_ratio, r.ratio);
        out["holder"] = {{"t", ep.t}, {"eps", ep.eps}, {"k0", ep.k0}, {"log_c_I", ep.log_c_I},
                         {"nodes", hs.rows.size()}, {"violations", hs.violations}, {"min_ratio", min_ratio},
                         {"threshold", ep.t - ep.eps}};
    }
    return out;
}

json dimension_json(const GrowthDimension& d) {
    switch (d.kind) {
    case GrowthDimension::Kind::Value: return {{"kind", "value"}, {"value", d.value}};
    case GrowthDimension::Kind::SB:
        return {{"kind", "s_B"}, {"estimate", d.value}, {"uncertainty", d.uncertainty}, {"note", d.note}};
    case GrowthDimension::Kind::Interval:
        return {{"kind", "interval"},
                {"lower", d.value},
                {"lower_uncertainty", d.uncertainty},
                {"upper", "not computed"},
                {"note", d.note}};
    }
    return {};
}

json extended(double v) { return std::isinf(v) ? json("inf") : json(v); }

json cmd_classify(const RunConfig& cfg, const Params& P) {
    std::string fam = P.str("family", "exp");
    PhiSpec phi;
    unsigned horizon = static_cast<unsigned>(P.count("horizon", 128));
    if (fam == "power") {
        phi = PhiSpec::power(P.real("p", 1));
    } else if (fam == "exp") {
        phi = PhiSpec::exponential(P.real("B0", 2));
    } else if (fam == "dexp") {
        phi = PhiSpec::double_exponential(P.real("b0", 2), P.real("c0", 2));
    } else if (fam == "table") {
        std::ifstream in(P.required("table"));
        if (!in) throw ConfigError("cannot read table file " + P.required("table"));
        std::vector<long double> vals;
        std::string line;
        while (std::getline(in, line)) {
            auto c = line.find(',');
            std::string v = c == std::string::npos ? line : line.substr(c + 1);
            if (v.find_first_not_of(" \t\r") == std::string::npos) continue;
            vals.push_back(std::stold(v));
        }
        phi = PhiSpec::from_table(std::move(vals));
    } else if (fam == "expr") {
        phi = PhiSpec::from_log_expression(compile_expression(P.required("log_phi")), horizon);
    } else if (fam == "expr-loglog") {
        phi = PhiSpec::from_log_log_expression(compile_expression(P.required("log_log_phi")), horizon);
    } else {
        throw DomainError("unknown family '" + fam + "' (power, exp, dexp, table, expr, expr-loglog)");
    }
    ClassifyOptions opt;
    opt.alpha = P.count("alpha", 4);
    opt.depths = P.list("depths", "1,2,3,4");
    opt.tol = P.real("tol", 1e-9);
    opt.solve = solve_options(cfg, P);
    GrowthClass g = classify_phi(phi, opt);
    json out = {{"case", to_string(g.tag)},
                {"B", extended(g.B_estimate)},
                {"b", g.b_estimate ? extended(*g.b_estimate) : json(nullptr)},
                {"dimension", dimension_json(g.dimension)},
                {"heuristic", g.heuristic}};
    if (g.reciprocal_sum) out["reciprocal_sum"] = static_cast<double>(*g.reciprocal_sum);
    return out;
}

json cmd_dim_f(const RunConfig& cfg, const Params& P) {
    DimFEstimate d = dim_F(P.rational("B", "2"), P.count("alpha", 2), P.list("depths", "1,2,3"), P.real("tol", 1e-12),
                           solve_options(cfg, P));
    json per = json::array();
    for (std::size_t i = 0; i < d.extrapolation.depths.size(); ++i)
        per.push_back({{"n", d.extrapolation.depths[i]}, {"s", d.extrapolation.solutions[i].s_value}});
    return {{"estimate", d.estimate},   {"uncertainty", d.uncertainty},
            {"depths", per},            {"relation_violations", d.extrapolation.relation_violations},
            {"in_sanity_band", d.in_sanity_band}};
}

json cmd_ebc(const Params& P) {
    DimEbc d = dim_Ebc(P.real("b", 2), P.real("c", 2), static_cast<unsigned>(P.count("k_max", 8)));
    json ev = json::array();
    for (const auto& r : d.evidence) ev.push_back(r.R);
    return {{"value", d.value}, {"ratios", ev}, {"flagged", d.flagged}};
}

json cmd_luczak(const Params& P) {
    LuczakResult r = luczak_count(P.count("m", 4), static_cast<unsigned>(P.count("k", 2)));
    return {{"count", big(r.count)}, {"bound", r.bound}, {"holds", r.holds}};
}

json cmd_nested(const Params& P) {
    unsigned k = static_cast<unsigned>(P.count("k", 8));
    double b = P.real("b", 2), c = P.real("c", 2);
    json rows = json::array();
    for (unsigned j = 1; j <= k; ++j) {
        NestedRatio r = nested_Ek_ratio(b, c, j);
        json exact = json::array();
        for (bool e : r.exact_count) exact.push_back(e);
        rows.push_back({{"k", j}, {"R", r.R}, {"exact_count", exact}});
    }
    return {{"b", b}, {"c", c}, {"limit", 1.0 / (1.0 + b * b)}, {"ratios", rows}};
}

std::string canonical_command(const RunConfig& cfg) {
    static const std::map<std::string, std::string> alias = {
        {"geometry-gaps", "geometry-gaps"}, {"gaps", "geometry-gaps"}, {"measure-check", "measure-check"},
        {"classify", "classify"},           {"dimension", "classify"}, {"dim-f", "dim-f"},
        {"ebc", "ebc"},                     {"decompose", "decompose"}, {"pressure", "pressure"},
        {"luczak", "luczak"},               {"nested-ratio", "nested-ratio"}, {"verify-suite", "verify-suite"}};
    auto it = alias.find(cfg.command);
    if (it == alias.end()) throw DomainError("unknown command '" + cfg.command + "'");
    return it->second;
}

} // namespace

void merge_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos) throw ConfigError("bad config line: " + line);
            continue;
        }
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r"), e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
        if (k == "threads") {
            // command-line values win; the defaults are the only way to tell they were not given
            if (cfg.threads == 1) cfg.threads = static_cast<unsigned>(std::stoul(v));
        } else if (k == "budget") {
            if (cfg.budget == (std::uint64_t{1} << 26)) cfg.budget = std::stoull(v);
        } else if (k == "out") {
            if (cfg.out_path.empty()) cfg.out_path = v;
        } else if (k == "cache") {
            if (cfg.cache_path.empty()) cfg.cache_path = v;
        } else {
            cfg.params.emplace(k, v);  // existing (command-line) keys win
        }
    }
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err, const SuiteRunner& suite) {
    try {
        std::string cmd = canonical_command(cfg);
        if (cmd == "verify-suite") {
            if (!suite) throw ConfigError("verify-suite is not available in this build");
            int failed = suite(out);
            return failed == 0 ? 0 : 4;
        }
        Params P(cfg);
        json result;
        if (cmd == "decompose") result = cmd_decompose(P);
        else if (cmd == "pressure") result = cmd_pressure(cfg, P, err);
        else if (cmd == "geometry-gaps") result = cmd_gaps(cfg, P);
        else if (cmd == "measure-check") result = cmd_measure(cfg, P);
        else if (cmd == "classify") result = cmd_classify(cfg, P);
        else if (cmd == "dim-f") result = cmd_dim_f(cfg, P);
        else if (cmd == "ebc") result = cmd_ebc(P);
        else if (cmd == "luczak") result = cmd_luczak(P);
        else result = cmd_nested(P);

        json config = json::object();
        for (const auto& [k, v] : cfg.params) config[k] = v;
        config["threads"] = cfg.threads;
        config["budget"] = cfg.budget;
        json artifact = {{"schema_version", kSchemaVersion}, {"command", cmd}, {"config", config}, {"result", result}};
        std::string text = artifact.dump(2) + "\n";
        out << text;
        if (!cfg.out_path.empty() && cmd != "geometry-gaps") {
            std::ofstream f(cfg.out_path);
            if (!f) throw ResourceError("cannot write " + cfg.out_path);
            f << text;
        }
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        switch (e.kind()) {
        case ErrorKind::Domain: return 2;
        case ErrorKind::Resource: return 3;
        case ErrorKind::Invariant: return 4;
        }
        return 4;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 4;
    }
}

} // namespace cfdim
