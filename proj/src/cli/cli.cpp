#include "vlambda/cli.hpp"

#include "common.hpp"
#include "output.hpp"
#include "selftest.hpp"

#include "vlambda/errors.hpp"
#include "vlambda/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

namespace vlambda::cli {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& what)
{
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v))
        throw Error(ErrorCode::invalid_argument, "cannot parse " + what + " value '" + text + "'");
    return v;
}

void require_keys(const std::map<std::string, double>& kv, std::initializer_list<const char*> allowed,
                  std::initializer_list<const char*> required, const std::string& family)
{
    for (const auto& [k, v] : kv) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }) == allowed.end())
            throw Error(ErrorCode::invalid_argument, "unknown parameter '" + k + "' for " + family);
    }
    for (const char* r : required) {
        if (!kv.count(r))
            throw Error(ErrorCode::invalid_argument, family + " needs parameter " + r);
    }
}

std::size_t thread_count()
{
    const char* env = std::getenv("VLAMBDA_THREADS");
    if (!env || !*env)
        return 1;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1)
        return 1;
    return static_cast<std::size_t>(std::min<long>(n, 256));
}

/// Fills rows[i] = compute(i); rows keep input order whatever the thread count.
void fill_rows(std::vector<Row>& rows, const std::function<void(std::size_t, Row&)>& compute)
{
    auto guarded = [&](std::size_t i) {
        try {
            compute(i, rows[i]);
        } catch (const Error& e) {
            rows[i].outputs = json::object();
            rows[i].error_code = std::string(to_string(e.code()));
            rows[i].error_message = e.what();
        } catch (const std::exception& e) {
            rows[i].outputs = json::object();
            rows[i].error_code = "internal_error";
            rows[i].error_message = e.what();
        }
    };
    const std::size_t threads = std::min(thread_count(), rows.size());
    if (threads <= 1) {
        for (std::size_t i = 0; i < rows.size(); ++i)
            guarded(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < rows.size(); i = next++)
                guarded(i);
        });
    }
    for (auto& th : pool)
        th.join();
}

json diagnostics_json(const BoundResult& r)
{
    json d = json::object();
    for (const auto& [k, v] : r.diagnostics)
        d[k] = v;
    return d;
}

struct ClassLists {
    std::vector<double> alpha{1.0};
    std::vector<double> gamma{0.0};
    std::vector<double> delta{1.0};
    std::vector<double> xi{0.0};
};

void add_class_options(CLI::App* app, ClassLists& lists, bool with_xi = true)
{
    app->add_option("--alpha", lists.alpha, "alpha values (comma list)")->delimiter(',')->capture_default_str();
    app->add_option("--gamma", lists.gamma, "gamma values (comma list)")->delimiter(',')->capture_default_str();
    app->add_option("--delta", lists.delta, "delta values (comma list)")->delimiter(',')->capture_default_str();
    if (with_xi)
        app->add_option("--xi", lists.xi, "target xi values (comma list)")->delimiter(',')->capture_default_str();
}

struct Tuple {
    double alpha;
    double gamma;
    double delta;
    double xi;
};

std::vector<Tuple> expand(const ClassLists& l, bool use_class)
{
    std::vector<Tuple> out;
    if (!use_class) {
        for (double x : l.xi)
            out.push_back({std::nan(""), std::nan(""), std::nan(""), x});
        return out;
    }
    for (double a : l.alpha)
        for (double g : l.gamma)
            for (double d : l.delta)
                for (double x : l.xi)
                    out.push_back({a, g, d, x});
    return out;
}

json list_json(const std::vector<double>& v)
{
    json a = json::array();
    for (double x : v)
        a.push_back(x);
    return a;
}

const Bernardi* bernardi_of(const WeightSpec& w)
{
    return std::get_if<Bernardi>(&w.variant());
}

// ---------------------------------------------------------------- bound

struct BoundArgs {
    int thm = 1;
    ClassLists lists;
    std::string weight = "bernardi:c=0";
    std::string hohlov = "a=1,b=0.5,c=2.7";
    std::vector<double> beta1{0.0};
    std::string method = "auto";
    std::string format = "json";
    double tol = 1e-9;
};

// Tabulated weights are rescaled to unit mass; record the factor.
void note_weight(Report& report, const WeightSpec& w)
{
    if (const auto* c = std::get_if<Custom>(&w.variant()))
        report.config["weight_renormalization"] = c->renormalization;
}

int cmd_bound(const BoundArgs& a, std::ostream& out)
{
    Report report;
    report.config = json{{"command", "bound"},
                         {"thm", a.thm},
                         {"alpha", list_json(a.lists.alpha)},
                         {"gamma", list_json(a.lists.gamma)},
                         {"delta", list_json(a.lists.delta)},
                         {"xi", list_json(a.lists.xi)},
                         {"weight", a.weight},
                         {"method", a.method},
                         {"tol", a.tol}};
    if (a.thm == 3) {
        report.config["hohlov"] = a.hohlov;
        report.config["beta1"] = list_json(a.beta1);
        report.config.erase("xi");
        report.config.erase("weight");
    }

    if (a.thm == 3) {
        struct T3 {
            double alpha, gamma, delta, beta1;
        };
        std::vector<T3> tuples;
        for (double al : a.lists.alpha)
            for (double g : a.lists.gamma)
                for (double d : a.lists.delta)
                    for (double b1 : a.beta1)
                        tuples.push_back({al, g, d, b1});
        report.rows.resize(tuples.size());
        fill_rows(report.rows, [&](std::size_t i, Row& row) {
            const T3& t = tuples[i];
            row.inputs = json{{"thm", 3}, {"alpha", t.alpha}, {"gamma", t.gamma}, {"delta", t.delta},
                              {"hohlov", a.hohlov},  {"beta1", t.beta1}};
            const HohlovParams h = parse_hohlov(a.hohlov, t.beta1);
            const BoundResult r = beta_thm3(h, ClassParams{t.alpha, t.gamma, t.delta});
            row.outputs = json{{"beta", r.beta}, {"beta2", r.diagnostic("beta2")}, {"method", r.method},
                               {"error_estimate", r.error_estimate}};
            row.diagnostics = diagnostics_json(r);
        });
        write_report(report, parse_format(a.format), out);
        return 0;
    }

    const WeightSpec w = parse_weight(a.weight);
    note_weight(report, w);
    const bool closed_available = bernardi_of(w) != nullptr;
    if (a.method == "closed" && !closed_available)
        throw Error(ErrorCode::invalid_argument, "--method closed needs a Bernardi weight");
    const auto tuples = expand(a.lists, a.thm == 1);
    report.rows.resize(tuples.size());
    fill_rows(report.rows, [&](std::size_t i, Row& row) {
        const Tuple& t = tuples[i];
        const TargetParams target{t.xi};
        if (a.thm == 1)
            row.inputs = json{{"thm", 1}, {"alpha", t.alpha}, {"gamma", t.gamma}, {"delta", t.delta},
                              {"xi", t.xi},   {"weight", w.describe()}};
        else
            row.inputs = json{{"thm", 2}, {"xi", t.xi}, {"weight", w.describe()}};

        const ClassParams p{t.alpha, t.gamma, t.delta};
        auto closed = [&] {
            return a.thm == 1 ? beta_thm1_bernardi_closed(p, bernardi_of(w)->c, target)
                              : beta_thm2_bernardi_closed(bernardi_of(w)->c, target);
        };
        auto quad = [&] {
            if (a.thm == 1) {
                Thm1Options opt;
                opt.tolerance = a.tol;
                return beta_thm1(p, w, target, opt);
            }
            return beta_thm2(w, target, std::min(a.tol, 1e-10));
        };

        BoundResult r;
        if (a.method == "closed") {
            r = closed();
        } else {
            r = quad();
        }
        row.outputs = json{{"beta", r.beta}, {"method", r.method}, {"error_estimate", r.error_estimate}};
        row.diagnostics = diagnostics_json(r);
        if (a.method != "closed" && a.method != "quadrature" && closed_available) {
            const BoundResult c = closed();
            row.diagnostics["beta_closed_form"] = c.beta;
            row.diagnostics["closed_vs_quadrature"] = std::abs(c.beta - r.beta);
        }
    });
    write_report(report, parse_format(a.format), out);
    return 0;
}

// ---------------------------------------------------------------- verify

struct GridArgs {
    std::size_t radii = 20;
    std::size_t theta = 720;
    std::size_t phi = 720;

    MembershipGrid grid() const
    {
        MembershipGrid g = MembershipGrid::standard();
        if (radii != g.radii.size()) {
            g.radii.clear();
            for (std::size_t i = 0; i < radii; ++i)
                g.radii.push_back(radii == 1 ? 0.995 : 0.1 + (0.995 - 0.1) * static_cast<double>(i) / static_cast<double>(radii - 1));
        }
        g.theta_points = theta;
        g.phi_points = phi;
        return g;
    }
};

void add_grid_options(CLI::App* app, GridArgs& g)
{
    app->add_option("--radii", g.radii, "number of radii in [0.1, 0.995]")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--theta", g.theta, "angles per radius")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--phi", g.phi, "rotation angles")->check(CLI::PositiveNumber)->capture_default_str();
}

struct VerifyArgs {
    ClassLists lists;
    int thm = 2;
    std::string weight = "bernardi:c=0";
    std::string format = "json";
    // identity
    std::size_t samples = 3;
    std::size_t degree = 32;
    unsigned long long seed = 1;
    // membership
    std::string f = "identity";
    double beta = 0.0;
    std::optional<double> test_beta;
    std::size_t order = 8192;
    GridArgs grid;
    // hohlov
    std::string hohlov = "a=1,b=0.5,c=2.7";
    ClassLists hohlov_lists{{0.5}, {0.0}, {1.0}, {0.0}};
    double beta1 = 0.0;
};

bool row_passed(const Row& r)
{
    return !r.error_code && r.outputs.contains("pass") && r.outputs["pass"].get<bool>();
}

int finish_verify(Report& report, const std::string& format, std::ostream& out)
{
    std::size_t passed = 0;
    for (const auto& r : report.rows)
        passed += row_passed(r) ? 1 : 0;
    report.summary = json{{"checks", report.rows.size()}, {"passed", passed},
                          {"failed", report.rows.size() - passed}};
    write_report(report, parse_format(format), out);
    return passed == report.rows.size() ? 0 : 1;
}

int cmd_verify_sharpness(const VerifyArgs& a, std::ostream& out)
{
    Report report;
    report.config = json{{"command", "verify sharpness"}, {"thm", a.thm}, {"weight", a.weight},
                         {"xi", list_json(a.lists.xi)}};
    if (a.thm == 1) {
        report.config["alpha"] = list_json(a.lists.alpha);
        report.config["gamma"] = list_json(a.lists.gamma);
        report.config["delta"] = list_json(a.lists.delta);
    }
    const WeightSpec w = parse_weight(a.weight);
    note_weight(report, w);
    const auto tuples = expand(a.lists, a.thm == 1);
    report.rows.resize(tuples.size());
    fill_rows(report.rows, [&](std::size_t i, Row& row) {
        const Tuple& t = tuples[i];
        const TargetParams target{t.xi};
        SharpnessReport s;
        if (a.thm == 1) {
            row.inputs = json{{"thm", 1}, {"alpha", t.alpha}, {"gamma", t.gamma}, {"delta", t.delta},
                              {"xi", t.xi},   {"weight", w.describe()}};
            s = sharpness_thm1(ClassParams{t.alpha, t.gamma, t.delta}, w, target);
        } else {
            row.inputs = json{{"thm", 2}, {"xi", t.xi}, {"weight", w.describe()}};
            s = sharpness_thm2(w, target);
        }
        row.outputs = json{{"target", s.target}, {"achieved", s.achieved}, {"deviation", std::abs(s.achieved - s.target)},
                           {"tail_estimate", s.tail_estimate}, {"beta", s.beta}, {"pass", s.pass}};
    });
    return finish_verify(report, a.format, out);
}

PowerSeries random_function(std::mt19937_64& rng, std::size_t degree)
{
    // |a_n| <= 2^-(n-1)/2 keeps |f/z - 1| < 1/2, so f/z has no zeros in the closed disk.
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PowerSeries f = PowerSeries::identity(degree);
    for (std::size_t n = 2; n <= degree; ++n) {
        const double env = 0.5 * std::ldexp(1.0, -static_cast<int>(n - 1)) / std::sqrt(2.0);
        const double re = u(rng);
        const double im = u(rng);
        f[n] = Complex(env * re, env * im);
    }
    return f;
}

int cmd_verify_identity(const VerifyArgs& a, std::ostream& out)
{
    Report report;
    report.config = json{{"command", "verify identity"}, {"weight", a.weight}, {"delta", list_json(a.lists.delta)},
                         {"samples", a.samples}, {"degree", a.degree}, {"seed", a.seed}};
    const WeightSpec w = parse_weight(a.weight);
    note_weight(report, w);
    struct Case {
        std::string name;
        double delta;
        PowerSeries f;
    };
    std::vector<Case> cases;
    std::mt19937_64 rng(a.seed);
    for (double d : a.lists.delta) {
        if (!(d > 0.0))
            throw Error(ErrorCode::inadmissible_parameters, "delta must be > 0");
        cases.push_back({"identity", d, PowerSeries::identity(a.degree)});
        for (std::size_t k = 0; k < a.samples; ++k)
            cases.push_back({"random#" + std::to_string(k), d, random_function(rng, a.degree)});
        cases.push_back({"extremal(beta=0.5,alpha=1,gamma=0)", d, extremal_series(0.5, d, 0.0, 1.0, a.degree)});
    }
    report.rows.resize(cases.size());
    fill_rows(report.rows, [&](std::size_t i, Row& row) {
        const Case& c = cases[i];
        row.inputs = json{{"case", c.name}, {"delta", c.delta}, {"weight", w.describe()}, {"order", c.f.order()}};
        const IdentityReport r = transform_identity_check(c.f, w, c.delta);
        row.outputs = json{{"max_deviation", r.max_deviation}, {"worst_index", r.worst_index},
                           {"tolerance", 1e-10}, {"pass", r.max_deviation <= 1e-10}};
    });
    return finish_verify(report, a.format, out);
}

int cmd_verify_membership(const VerifyArgs& a, std::ostream& out)
{
    Report report;
    const MembershipGrid grid = a.grid.grid();
    report.config = json{{"command", "verify membership"}, {"f", a.f},
                         {"alpha", list_json(a.lists.alpha)}, {"gamma", list_json(a.lists.gamma)},
                         {"delta", list_json(a.lists.delta)}, {"beta", a.beta}, {"grid", grid.describe()}};
    if (a.test_beta)
        report.config["test_beta"] = *a.test_beta;
    if (a.f != "identity" && a.f != "extremal")
        throw Error(ErrorCode::invalid_argument, "--f must be identity or extremal");
    ClassLists lists = a.lists;
    lists.xi = {0.0};
    const auto tuples = expand(lists, true);
    report.rows.resize(tuples.size());
    fill_rows(report.rows, [&](std::size_t i, Row& row) {
        const Tuple& t = tuples[i];
        const double level = a.test_beta.value_or(a.beta);
        row.inputs = json{{"f", a.f},        {"alpha", t.alpha}, {"gamma", t.gamma},
                          {"delta", t.delta}, {"beta", a.beta},  {"test_beta", level}};
        ClassParams p{t.alpha, t.gamma, t.delta, level};
        MembershipReport m;
        if (a.f == "identity") {
            m = membership_test(PowerSeries::identity(default_series_order), p, grid);
        } else {
            // The extremal function's functional in power form (see README).
            const MuNu mn = p.mu_nu();
            const PowerSeries power = extremal_power_form(a.beta, t.delta, mn.mu, mn.nu, a.order);
            m = membership_test_functional(functional_H_from_power_form(power, t.alpha, t.gamma, t.delta), level, grid);
        }
        row.outputs = json{{"is_member", m.is_member},
                           {"margin", m.margin},
                           {"best_phi", m.best_phi},
                           {"evaluated_points", m.evaluated_points},
                           {"excluded_points", m.excluded_points},
                           {"pass", m.is_member}};
        row.diagnostics = json{{"grid", m.grid}};
    });
    return finish_verify(report, a.format, out);
}

int cmd_verify_hohlov(const VerifyArgs& a, std::ostream& out)
{
    Report report;
    const MembershipGrid grid = a.grid.grid();
    report.config = json{{"command", "verify hohlov"}, {"hohlov", a.hohlov},
                         {"alpha", list_json(a.hohlov_lists.alpha)}, {"gamma", list_json(a.hohlov_lists.gamma)},
                         {"delta", list_json(a.hohlov_lists.delta)}, {"beta1", a.beta1}, {"grid", grid.describe()}};
    ClassLists lists = a.hohlov_lists;
    lists.xi = {0.0};
    const auto tuples = expand(lists, true);
    report.rows.resize(tuples.size());
    fill_rows(report.rows, [&](std::size_t i, Row& row) {
        const Tuple& t = tuples[i];
        row.inputs = json{{"hohlov", a.hohlov}, {"alpha", t.alpha}, {"gamma", t.gamma},
                          {"delta", t.delta},   {"beta1", a.beta1}};
        const HohlovParams h = parse_hohlov(a.hohlov, a.beta1);
        const ClassParams p{t.alpha, t.gamma, t.delta};
        const HohlovValidation v = validate_hohlov(h, p);
        row.diagnostics = json{{"e1", v.e1}, {"e2", v.e2}, {"min_e3", v.min_e3}, {"min_e3_n", v.min_e3_index},
                               {"min_n4", v.min_n4}, {"min_n4_t", v.min_n4_t}};
        if (!v.valid) {
            row.outputs = json{{"valid", false}, {"violation", v.first_violation}, {"pass", false}};
            return;
        }
        const HohlovKernelReport k = hohlov_kernel_check(h, p, grid);
        row.outputs = json{{"valid", true},
                           {"beta2", k.n3_at_minus_one},
                           {"n3_series_at_minus_one", k.n3_series_at_minus_one},
                           {"min_re_n3", k.min_re_n3},
                           {"n3_at_zero", k.n3_at_zero},
                           {"beta", k.beta},
                           {"excluded_points", k.excluded_points},
                           {"pass", k.pass}};
    });
    return finish_verify(report, a.format, out);
}

// ---------------------------------------------------------------- config

/// Reads flat key=value lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::io_error, "cannot open config file " + path);
    std::vector<std::pair<std::string, std::string>> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos || trim(line.substr(0, eq)).empty())
            throw Error(ErrorCode::invalid_argument,
                        path + ":" + std::to_string(lineno) + ": expected key=value");
        kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return kv;
}

bool is_command_word(const std::string& s)
{
    return s == "bound" || s == "verify" || s == "selftest";
}

/// Merges --config into the argument list. Options given on the command line win.
std::vector<std::string> apply_config(std::vector<std::string> args)
{
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size())
                throw Error(ErrorCode::invalid_argument, "--config needs a path");
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (path.empty())
        return args;

    auto given = [&](const std::string& key) {
        const std::string flag = "--" + key;
        return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
            return a == flag || a.rfind(flag + "=", 0) == 0;
        });
    };
    const bool has_command = std::any_of(args.begin(), args.end(), is_command_word);
    for (const auto& [key, value] : read_config(path)) {
        if (key == "command") {
            if (!has_command) {
                std::istringstream words(value);
                std::vector<std::string> cmd;
                for (std::string w; words >> w;)
                    cmd.push_back(w);
                args.insert(args.begin(), cmd.begin(), cmd.end());
            }
            continue;
        }
        if (!given(key))
            args.push_back("--" + key + "=" + value);
    }
    return args;
}

} // namespace

// ---------------------------------------------------------------- parsing helpers

std::map<std::string, double> parse_key_values(const std::string& text)
{
    std::map<std::string, double> kv;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::invalid_argument, "expected key=value, got '" + item + "'");
        const std::string key = trim(item.substr(0, eq));
        if (key.empty() || kv.count(key))
            throw Error(ErrorCode::invalid_argument, "empty or repeated key in '" + text + "'");
        kv[key] = parse_number(item.substr(eq + 1), key);
    }
    return kv;
}

WeightSpec parse_weight(const std::string& descriptor)
{
    const auto colon = descriptor.find(':');
    const std::string family = trim(descriptor.substr(0, colon));
    const std::string rest = colon == std::string::npos ? "" : descriptor.substr(colon + 1);
    if (family == "custom") {
        const std::string r = trim(rest);
        if (r.rfind("file=", 0) != 0 || r.size() == 5)
            throw Error(ErrorCode::invalid_argument, "custom weight expects custom:file=PATH");
        return load_custom_weight(r.substr(5));
    }
    const auto kv = parse_key_values(rest);
    if (family == "bernardi") {
        require_keys(kv, {"c"}, {"c"}, "bernardi");
        return WeightSpec(Bernardi{kv.at("c")});
    }
    if (family == "hohlov") {
        require_keys(kv, {"a", "b", "c"}, {"a", "b", "c"}, "hohlov");
        return WeightSpec(Hohlov{kv.at("a"), kv.at("b"), kv.at("c")});
    }
    if (family == "carlson-shaffer") {
        require_keys(kv, {"b", "c"}, {"b", "c"}, "carlson-shaffer");
        return WeightSpec(CarlsonShaffer{kv.at("b"), kv.at("c")});
    }
    throw Error(ErrorCode::invalid_argument, "unknown weight family '" + family + "'");
}

HohlovParams parse_hohlov(const std::string& text, double beta1)
{
    const auto kv = parse_key_values(text);
    require_keys(kv, {"a", "b", "c"}, {"a", "b", "c"}, "--hohlov");
    return HohlovParams{kv.at("a"), kv.at("b"), kv.at("c"), beta1};
}

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> args;
    try {
        args = apply_config(raw_args);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    CLI::App app{"Sharp admissibility bounds for the weighted integral transform V_lambda^delta", "vlambda"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "vlambda 0.1.0");
    std::string config_unused;
    app.add_option("--config", config_unused, "flat key=value file; command-line options take precedence");

    BoundArgs ba;
    auto* bound = app.add_subcommand("bound", "compute beta for Theorem 1, 2 or 3 over a parameter grid");
    bound->add_option("--thm", ba.thm, "1, 2 or 3")->check(CLI::IsMember({1, 2, 3}))->capture_default_str();
    add_class_options(bound, ba.lists);
    bound->add_option("--weight", ba.weight, "bernardi:c=.. | hohlov:a=..,b=..,c=.. | carlson-shaffer:b=..,c=.. | custom:file=PATH")
        ->capture_default_str();
    bound->add_option("--hohlov", ba.hohlov, "a=..,b=..,c=.. for --thm 3")->capture_default_str();
    bound->add_option("--beta1", ba.beta1, "beta_1 values for --thm 3")->delimiter(',')->capture_default_str();
    bound->add_option("--method", ba.method, "auto | quadrature | closed")
        ->check(CLI::IsMember({"auto", "quadrature", "closed"}))
        ->capture_default_str();
    bound->add_option("--format", ba.format, "json | csv | text")->check(CLI::IsMember({"json", "csv", "text"}))->capture_default_str();
    bound->add_option("--tol", ba.tol, "quadrature tolerance")->check(CLI::PositiveNumber)->capture_default_str();

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "numerical checks of sharpness, identities and membership");
    verify->require_subcommand(1);
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", va.format, "json | csv | text")->check(CLI::IsMember({"json", "csv", "text"}))->capture_default_str();
    };

    auto* sharp = verify->add_subcommand("sharpness", "extremal value at z = -1 against xi");
    sharp->add_option("--thm", va.thm, "1 or 2")->check(CLI::IsMember({1, 2}))->capture_default_str();
    add_class_options(sharp, va.lists);
    sharp->add_option("--weight", va.weight, "weight descriptor")->capture_default_str();
    add_format(sharp);

    auto* ident = verify->add_subcommand("identity", "coefficient identity of the transform");
    ident->add_option("--weight", va.weight, "weight descriptor")->capture_default_str();
    ident->add_option("--delta", va.lists.delta, "delta values")->delimiter(',')->capture_default_str();
    ident->add_option("--samples", va.samples, "random functions per delta")->capture_default_str();
    ident->add_option("--degree", va.degree, "polynomial degree of the test functions")->check(CLI::Range(3, 4096))->capture_default_str();
    ident->add_option("--seed", va.seed, "random seed")->capture_default_str();
    add_format(ident);

    auto* memb = verify->add_subcommand("membership", "grid test of the class condition");
    memb->add_option("--f", va.f, "identity | extremal")->capture_default_str();
    add_class_options(memb, va.lists, false);
    memb->add_option("--beta", va.beta, "class level beta (and extremal parameter)")->capture_default_str();
    memb->add_option("--test-beta", va.test_beta, "level to test against (default --beta)");
    memb->add_option("--order", va.order, "series order for the extremal function")->check(CLI::Range(16, 1 << 16))->capture_default_str();
    add_grid_options(memb, va.grid);
    add_format(memb);

    auto* hoh = verify->add_subcommand("hohlov", "hypotheses and kernel inequality of the Hohlov bound");
    hoh->add_option("--hohlov", va.hohlov, "a=..,b=..,c=..")->capture_default_str();
    add_class_options(hoh, va.hohlov_lists, false);
    hoh->add_option("--beta1", va.beta1, "beta_1")->capture_default_str();
    add_grid_options(hoh, va.grid);
    add_format(hoh);

    SelftestOptions so;
    std::string self_format = "json";
    auto* self = app.add_subcommand("selftest", "golden-value suite");
    self->add_flag("--inject-fault", so.inject_fault, "corrupt one coefficient (harness check)");
    self->add_option("--min-tol", so.min_tolerance, "raise every tolerance to at least this value")->capture_default_str();
    self->add_option("--format", self_format, "json | text")->check(CLI::IsMember({"json", "csv", "text"}))->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        if (bound->parsed())
            return cmd_bound(ba, out);
        if (sharp->parsed())
            return cmd_verify_sharpness(va, out);
        if (ident->parsed())
            return cmd_verify_identity(va, out);
        if (memb->parsed())
            return cmd_verify_membership(va, out);
        if (hoh->parsed())
            return cmd_verify_hohlov(va, out);
        if (self->parsed()) {
            bool ok = false;
            const Report r = run_selftest(so, ok);
            write_report(r, parse_format(self_format), out);
            if (!ok)
                err << "selftest: failures detected\n";
            return ok ? 0 : 1;
        }
    } catch (const Error& e) {
        err << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace vlambda::cli
