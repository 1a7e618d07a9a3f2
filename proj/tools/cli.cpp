#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "iqlambda/error.hpp"
#include "iqlambda/families.hpp"
#include "iqlambda/lambda.hpp"
#include "iqlambda/lvalues.hpp"
#include "iqlambda/quadforms.hpp"
#include "iqlambda/scanner.hpp"

namespace iqlambda::cli {

namespace {

using json = nlohmann::ordered_json;

struct Options {
    Int p = 0;
    Int d = 0;
    std::string n;
    std::string kind;
    std::optional<Int> x1;
    std::optional<Int> max_x;
    std::string mod_class;
    std::string split;
    std::string inert;
    std::string exclude;
    Int bound = 0;
    Int q = 0;
    Int level = 0;
    Int k2 = 0;
    unsigned threads = 1;
    Int chunk = 4096;
    bool resume = false;
    bool forms = false;
    bool progress = false;
    std::string out_path;
    std::string output = "text";
    std::string suite = "all";
    Budget budget;
};

int exit_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::BudgetExceeded:
    case ErrorKind::NotFoundWithinBudget:
        return ExitBudget;
    case ErrorKind::CriterionDisagreement:
    case ErrorKind::IntegralityViolation:
    case ErrorKind::NonIntegralCoefficient:
    case ErrorKind::NoRepresentation:
        return ExitFailure;
    default:
        return ExitUsage;
    }
}

std::vector<Int> parse_ints(const std::string& text)
{
    std::vector<Int> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty())
            continue;
        size_t used = 0;
        Int v = std::stoll(item, &used);
        if (used != item.size())
            raise(ErrorKind::PreconditionViolated, "not an integer: " + item);
        out.push_back(v);
    }
    return out;
}

std::set<Int> parse_set(const std::string& text)
{
    auto v = parse_ints(text);
    return {v.begin(), v.end()};
}

// "2-13", "2,4,7" or a mix
std::vector<int> parse_ns(const std::string& text)
{
    std::vector<int> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const size_t dash = item.find('-', 1);
        if (dash == std::string::npos) {
            out.push_back(std::stoi(item));
            continue;
        }
        const int lo = std::stoi(item.substr(0, dash)), hi = std::stoi(item.substr(dash + 1));
        for (int n = lo; n <= hi; ++n)
            out.push_back(n);
    }
    if (out.empty())
        raise(ErrorKind::PreconditionViolated, "empty n list");
    return out;
}

std::optional<ModClass> parse_mod_class(const std::string& text)
{
    if (text.empty())
        return std::nullopt;
    auto v = parse_ints(text);
    if (v.size() != 2 || v[1] <= 0)
        raise(ErrorKind::PreconditionViolated, "--mod-class expects A,B with B > 0");
    return ModClass{v[0], v[1]};
}

// --d takes a fundamental discriminant or a radicand
RadicandField parse_field(Int d, const Budget& budget)
{
    if (d < 0 && FundamentalDiscriminant::is_fundamental(d)) {
        const FundamentalDiscriminant D = FundamentalDiscriminant::from(d);
        const Int d0 = d % 4 == 0 ? d / 4 : d;
        return RadicandField{D, d0, 1};
    }
    return fundamental_from_radicand(d, budget);
}

json factors_json(const std::vector<Int>& factors)
{
    return json(factors);
}

void add_budget(CLI::App* sub, Budget& b)
{
    sub->add_option("--budget-class-group", b.class_group_abs_disc, "largest |D| for class-group enumeration")
        ->envname("IQLAM_BUDGET_CLASS_GROUP");
    sub->add_option("--budget-lvalue", b.lvalue_abs_disc, "largest |D| for the L-value criterion")
        ->envname("IQLAM_BUDGET_LVALUE");
    sub->add_option("--budget-bernoulli-n", b.gen_bernoulli_max_n, "largest n for B(n, chi)")
        ->envname("IQLAM_BUDGET_BERNOULLI_N");
    sub->add_option("--budget-bernoulli-index", b.bernoulli_max_index, "largest Bernoulli index")
        ->envname("IQLAM_BUDGET_BERNOULLI_INDEX");
    sub->add_option("--budget-generator-bits", b.generator_max_bits, "bit size cap for 4p^s")
        ->envname("IQLAM_BUDGET_GENERATOR_BITS");
    sub->add_option("--budget-rho", b.rho_iterations, "Pollard rho iteration cap")
        ->envname("IQLAM_BUDGET_RHO");
    sub->add_option("--budget-power", b.power_max_abs, "largest |p^n| for family radicands")
        ->envname("IQLAM_BUDGET_POWER");
}

void add_output(CLI::App* sub, Options& o)
{
    sub->add_option("--output", o.output, "json, csv, md or text")
        ->check(CLI::IsMember({"json", "csv", "md", "text"}));
}

std::optional<std::filesystem::path> take_config(std::vector<std::string>& args)
{
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size())
                raise(ErrorKind::PreconditionViolated, "--config needs a file");
            std::filesystem::path path = args[i + 1];
            args.erase(args.begin() + long(i), args.begin() + long(i) + 2);
            return path;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            std::filesystem::path path = args[i].substr(9);
            args.erase(args.begin() + long(i));
            return path;
        }
    }
    return std::nullopt;
}

// key=value lines become --key=value unless the flag is already on the command line
void merge_config(const std::filesystem::path& path, std::vector<std::string>& args)
{
    std::ifstream in(path);
    if (!in)
        raise(ErrorKind::PreconditionViolated, "cannot read config " + path.string());
    auto given = [&](const std::string& key) {
        const std::string flag = "--" + key;
        return std::any_of(args.begin(), args.end(),
                           [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
    };
    std::vector<std::string> extra;
    std::string line;
    while (std::getline(in, line)) {
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = trim(line.substr(0, line.find('#')));
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            raise(ErrorKind::PreconditionViolated, "config line without '=': " + line);
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (!given(key))
            extra.push_back("--" + key + "=" + value);
    }
    const auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) { return a.rfind("-", 0) != 0; });
    const auto at = sub == args.end() ? args.end() : sub + 1;
    args.insert(at, extra.begin(), extra.end());
}

std::string md_row(const std::vector<std::string>& cells)
{
    std::string row = "|";
    for (const auto& c : cells)
        row += " " + c + " |";
    return row;
}

std::string csv_row(const std::vector<std::string>& cells)
{
    std::string row;
    for (size_t i = 0; i < cells.size(); ++i) {
        const bool quote = cells[i].find_first_of(",\"") != std::string::npos;
        row += (i ? "," : "") + (quote ? "\"" + cells[i] + "\"" : cells[i]);
    }
    return row;
}

void emit_table(std::ostream& out, const std::string& format, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows)
{
    if (format == "csv") {
        out << csv_row(header) << '\n';
        for (const auto& r : rows)
            out << csv_row(r) << '\n';
        return;
    }
    out << md_row(header) << '\n' << "|";
    for (size_t i = 0; i < header.size(); ++i)
        out << " --- |";
    out << '\n';
    for (const auto& r : rows)
        out << md_row(r) << '\n';
}

template <class T>
std::string opt_str(const std::optional<T>& v)
{
    if (!v)
        return "";
    if constexpr (std::is_same_v<T, std::string>)
        return *v;
    else
        return std::to_string(*v);
}

int run_classify(const Options& o, std::ostream& out)
{
    const RadicandField f = parse_field(o.d, o.budget);
    const LambdaVerdict v = classify_lambda(f.D, o.p, o.budget);
    const std::string lambda(to_string(v.value)), method(to_string(v.method));
    if (o.output == "json") {
        json j;
        j["d"] = f.D.value();
        j["p"] = o.p;
        j["field"] = f.label();
        j["lambda"] = lambda;
        j["method"] = method;
        j["witnesses"] = v.witnesses;
        out << j.dump() << '\n';
    } else if (o.output == "csv" || o.output == "md") {
        emit_table(out, o.output, {"d", "p", "field", "lambda", "method"},
                   {{std::to_string(f.D.value()), std::to_string(o.p), f.label(), lambda, method}});
    } else {
        out << "D=" << f.D.value() << " p=" << o.p << " field=" << f.label() << " lambda=" << lambda
            << " method=" << method << '\n';
        for (const auto& [k, val] : v.witnesses)
            out << "  " << k << "=" << val << '\n';
    }
    return ExitOk;
}

int run_class_group(const Options& o, std::ostream& out)
{
    const RadicandField f = parse_field(o.d, o.budget);
    const ClassGroup cg = class_group(f.D, o.budget);
    const std::string structure = format_invariant_factors(cg.invariant_factors());
    if (o.output == "json") {
        json j;
        j["d"] = f.D.value();
        j["field"] = f.label();
        j["h"] = cg.h();
        j["factors"] = factors_json(cg.invariant_factors());
        j["structure"] = structure;
        if (o.forms) {
            json forms = json::array();
            for (const auto& q : cg.forms())
                forms.push_back({q.a, q.b, q.c});
            j["forms"] = forms;
        }
        out << j.dump() << '\n';
    } else if (o.output == "csv" || o.output == "md") {
        emit_table(out, o.output, {"d", "field", "h", "invariant factors"},
                   {{std::to_string(f.D.value()), f.label(), std::to_string(cg.h()), structure}});
    } else {
        out << "D=" << f.D.value() << " field=" << f.label() << " h=" << cg.h() << " " << structure << '\n';
        if (o.forms) {
            for (const auto& q : cg.forms())
                out << "  (" << q.a << ", " << q.b << ", " << q.c << ")\n";
        }
    }
    return ExitOk;
}

int run_family(const Options& o, std::ostream& out)
{
    const auto kind = parse_family_kind(o.kind);
    if (!kind)
        raise(ErrorKind::PreconditionViolated, "unknown family kind " + o.kind);
    const auto rows = family_table(*kind, o.p, parse_ns(o.n), o.x1, o.budget);
    if (o.output == "json") {
        json arr = json::array();
        for (const auto& r : rows) {
            json j;
            j["n"] = r.n;
            j["radicand"] = r.radicand;
            j["field"] = r.field.label();
            j["d"] = r.field.D.value();
            j["h"] = r.h ? json(*r.h) : json(nullptr);
            j["factors"] = r.invariant_factors ? factors_json(*r.invariant_factors) : json(nullptr);
            j["verdict"] = r.verdict ? json(*r.verdict) : json(nullptr);
            j["s"] = r.s ? json(*r.s) : json(nullptr);
            arr.push_back(j);
        }
        out << arr.dump() << '\n';
        return ExitOk;
    }
    std::vector<std::vector<std::string>> cells;
    for (const auto& r : rows) {
        cells.push_back({std::to_string(r.n), r.field.label(),
                         r.invariant_factors ? format_invariant_factors(*r.invariant_factors) : "over budget",
                         opt_str(r.verdict), opt_str(r.s)});
    }
    emit_table(out, o.output == "csv" ? "csv" : "md", {"n", "field", "invariant factors", "verdict", "s"}, cells);
    return ExitOk;
}

int run_series(const Options& o, std::ostream& out)
{
    QSeries g = build_scaled_series(o.p, o.bound, o.budget);
    if (const auto ab = parse_mod_class(o.mod_class)) {
        if (o.q == 0)
            raise(ErrorKind::PreconditionViolated, "--mod-class needs --q");
        g = eisenstein_pipeline(g, parse_set(o.split), parse_set(o.inert), o.q, *ab);
    }
    if (o.output == "json") {
        json arr = json::array();
        for (Int N = 0; N <= g.bound; ++N) {
            arr.push_back({{"n", N}, {"coefficient", to_string(g[N])}, {"integral", g[N].get_den() == 1}});
        }
        out << arr.dump() << '\n';
        return ExitOk;
    }
    std::vector<std::vector<std::string>> rows;
    for (Int N = 0; N <= g.bound; ++N)
        rows.push_back({std::to_string(N), to_string(g[N]), g[N].get_den() == 1 ? "1" : "0"});
    emit_table(out, o.output == "md" ? "md" : "csv", {"N", "coefficient", "integral"}, rows);
    return ExitOk;
}

int run_verify(const Options& o, std::ostream& out, std::ostream& err)
{
    std::vector<Suite> suites;
    if (o.suite == "all") {
        suites = {Suite::Lemma23Sweep, Suite::BoundSweep, Suite::Tables, Suite::CrossCriterion};
    } else if (auto s = parse_suite(o.suite)) {
        suites = {*s};
    } else {
        raise(ErrorKind::PreconditionViolated, "unknown suite " + o.suite);
    }
    SuiteOptions so;
    so.budget = o.budget;
    if (o.max_x) {
        so.bound_x = *o.max_x;
        so.cross_x = *o.max_x;
    }
    if (o.progress)
        so.progress = &err;
    bool pass = true;
    json arr = json::array();
    for (Suite s : suites) {
        const SuiteReport r = verify_suite(s, so);
        pass = pass && r.pass;
        if (o.output == "json") {
            arr.push_back({{"suite", std::string(to_string(s))}, {"pass", r.pass}, {"checked", r.checked},
                           {"skipped", r.skipped}, {"counterexample", r.counterexample}, {"lines", r.lines}});
            continue;
        }
        out << "suite=" << to_string(s) << " " << (r.pass ? "pass" : "FAIL") << " checked=" << r.checked
            << " skipped=" << r.skipped << '\n';
        for (const auto& line : r.lines)
            out << "  " << line << '\n';
    }
    if (o.output == "json")
        out << arr.dump() << '\n';
    return pass ? ExitOk : ExitFailure;
}

int run_d0(const Options& o, std::ostream& out)
{
    const auto ab = parse_mod_class(o.mod_class);
    if (!ab)
        raise(ErrorKind::PreconditionViolated, "d0 needs --mod-class");
    const auto D = search_D0(o.p, *ab, parse_set(o.split), parse_set(o.inert), o.max_x.value_or(10'000'000), o.budget);
    if (o.output == "json") {
        const ResidueClasses rc = residue_classes(*ab, parse_set(o.split), parse_set(o.inert));
        out << json{{"d", D.value()}, {"modulus", rc.modulus}, {"classes", rc.classes}}.dump() << '\n';
    } else {
        out << D.value() << '\n';
    }
    return ExitOk;
}

int run_constants(const Options& o, std::ostream& out)
{
    json j;
    if (o.p) {
        j["p"] = o.p;
        j["alpha"] = alpha(o.p);
    }
    if (const auto ab = parse_mod_class(o.mod_class)) {
        if (!o.p || !o.q)
            raise(ErrorKind::PreconditionViolated, "kappa needs --p, --q and --mod-class");
        const auto k = kappa_constants(o.p, parse_set(o.split), parse_set(o.inert), o.q, *ab);
        j["kappa"] = k.kappa.get_str();
        j["P1"] = k.P1.get_str();
        j["P2"] = k.P2.get_str();
        j["P3"] = k.P3.get_str();
    }
    if (o.level) {
        const Int k2 = o.k2 ? o.k2 : 2 * o.p + 1;
        if (k2 <= 0)
            raise(ErrorKind::PreconditionViolated, "Sturm data needs --k2 or --p");
        const SturmData sd = sturm_data(k2, o.level);
        j["level"] = o.level;
        j["k_times_2"] = k2;
        j["sturm_index"] = sd.index.get_str();
        j["sturm_bound"] = to_string(sd.bound);
    }
    if (j.empty())
        raise(ErrorKind::PreconditionViolated, "constants needs --p, --mod-class or --level");
    if (o.output == "json") {
        out << j.dump() << '\n';
    } else {
        for (const auto& [k, v] : j.items())
            out << k << "=" << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    }
    return ExitOk;
}

int run_scan(const Options& o, std::ostream& out, std::ostream& err)
{
    if (!o.max_x)
        raise(ErrorKind::PreconditionViolated, "scan needs --max-x");
    ScanFilter filter{*o.max_x, o.p, parse_mod_class(o.mod_class), parse_set(o.split), parse_set(o.inert),
                      parse_set(o.exclude)};
    if (o.p < 3 || !is_prime(std::uint64_t(o.p)))
        raise(ErrorKind::PreconditionViolated, "--p must be an odd prime");
    if (!filter.splus.empty() && !filter.splus.count(o.p))
        raise(ErrorKind::PreconditionViolated, "--split must contain p");
    ScanOptions so{std::max(1u, o.threads), o.chunk, o.budget};

    bool fatal = false;
    Int seen = 0;
    auto observe = [&](const ScanRecord& r) {
        if (r.error && (*r.error == to_string(ErrorKind::CriterionDisagreement) ||
                        *r.error == to_string(ErrorKind::IntegralityViolation)))
            fatal = true;
        if (o.progress && ++seen % 10000 == 0)
            err << "records: " << seen << " |D| = " << -r.d << '\n';
    };
    if (!o.out_path.empty()) {
        const Int n = scan_to_jsonl(filter, so, o.out_path, o.resume, observe);
        err << "wrote " << n << " records to " << o.out_path << '\n';
        return fatal ? ExitFailure : ExitOk;
    }
    if (o.output == "csv" || o.output == "md") {
        std::vector<std::vector<std::string>> rows;
        scan(filter, so, [&](const ScanRecord& r) {
            observe(r);
            std::string factors;
            for (Int f : r.factors)
                factors += (factors.empty() ? "" : " ") + std::to_string(f);
            rows.push_back({std::to_string(r.d), opt_str(r.h), factors, opt_str(r.s),
                            r.lambda ? std::string(to_string(*r.lambda)) : "",
                            r.method ? std::string(to_string(*r.method)) : "", opt_str(r.error)});
        });
        emit_table(out, o.output, {"d", "h", "factors", "s", "lambda", "method", "error"}, rows);
    } else {
        scan(filter, so, [&](const ScanRecord& r) {
            observe(r);
            out << r.to_json() << '\n';
        });
    }
    return fatal ? ExitFailure : ExitOk;
}

} // namespace

int dispatch(const std::vector<std::string>& input, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> args = input;
    Options o;
    CLI::App app{"Iwasawa lambda_p classification for imaginary quadratic fields", "iqlambda"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    auto* classify = app.add_subcommand("classify", "lambda_p = 1 or > 1 for a split prime p");
    classify->add_option("--p", o.p, "odd prime")->required();
    classify->add_option("--d", o.d, "fundamental discriminant or radicand")->required();

    auto* cgroup = app.add_subcommand("class-group", "class number and invariant factors");
    cgroup->add_option("--d", o.d, "fundamental discriminant or radicand")->required();
    cgroup->add_flag("--forms", o.forms, "list the reduced forms");

    auto* scan_cmd = app.add_subcommand("scan", "classify every fundamental -X < D < 0 passing the filter");
    scan_cmd->add_option("--p", o.p, "odd prime")->required();
    scan_cmd->add_option("--max-x", o.max_x, "scan -X < D < 0")->required();
    scan_cmd->add_option("--mod-class", o.mod_class, "A,B: keep D = A mod B");
    scan_cmd->add_option("--split", o.split, "primes that must split");
    scan_cmd->add_option("--inert", o.inert, "primes that must be inert");
    scan_cmd->add_option("--exclude", o.exclude, "discriminants to skip");
    scan_cmd->add_option("--threads", o.threads, "worker threads");
    scan_cmd->add_option("--chunk", o.chunk, "|D| interval per work item");
    scan_cmd->add_option("--out", o.out_path, "JSONL output file");
    scan_cmd->add_flag("--resume", o.resume, "continue after the last complete record in --out");
    scan_cmd->add_flag("--progress", o.progress, "record counter on stderr");

    auto* family = app.add_subcommand("family", "class groups and verdicts along a radicand family");
    family->add_option("--kind", o.kind,
                       "one-minus-4pn, a-sq-minus-4p2n, one-minus-pn, four-minus-pn, q1sq-minus-pn, four-q1sq-minus-pn")
        ->required();
    family->add_option("--p", o.p, "odd prime")->required();
    family->add_option("--n", o.n, "exponents, e.g. 2-13 or 2,4,7")->required();
    family->add_option("--x1", o.x1, "a for a-sq-minus-4p2n, q1 for the q1 families");

    auto* series = app.add_subcommand("series", "alpha(p) H(p, N) / p coefficients, optionally filtered");
    series->add_option("--p", o.p, "odd prime")->required();
    series->add_option("--bound", o.bound, "largest N")->required();
    series->add_option("--mod-class", o.mod_class, "A,B: run the twist/U/V pipeline");
    series->add_option("--split", o.split, "S+ primes");
    series->add_option("--inert", o.inert, "S- primes");
    series->add_option("--q", o.q, "auxiliary prime Q");

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("--suite", o.suite, "lemma23, bound, tables, cross or all");
    verify->add_option("--max-x", o.max_x, "range for the bound and cross suites");
    verify->add_flag("--progress", o.progress, "per-row progress on stderr");

    auto* d0 = app.add_subcommand("d0", "least |D0| with D0 = A mod B, splitting conditions and lambda_p = 1");
    d0->add_option("--p", o.p, "odd prime")->required();
    d0->add_option("--mod-class", o.mod_class, "A,B")->required();
    d0->add_option("--split", o.split, "S+ primes");
    d0->add_option("--inert", o.inert, "S- primes");
    d0->add_option("--max-x", o.max_x, "search limit on |D|");

    auto* constants = app.add_subcommand("constants", "alpha(p), kappa and P constants, Sturm data");
    constants->add_option("--p", o.p, "odd prime");
    constants->add_option("--mod-class", o.mod_class, "A,B");
    constants->add_option("--split", o.split, "S+ primes");
    constants->add_option("--inert", o.inert, "S- primes");
    constants->add_option("--q", o.q, "auxiliary prime Q");
    constants->add_option("--level", o.level, "N1 for the Sturm index");
    constants->add_option("--k2", o.k2, "twice the weight (default 2p + 1)");

    for (auto* sub : {classify, cgroup, scan_cmd, family, series, verify, d0, constants}) {
        add_budget(sub, o.budget);
        add_output(sub, o);
    }

    try {
        if (auto path = take_config(args))
            merge_config(*path, args);
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return ExitUsage;
    } catch (const Error& e) {
        err << e.what() << '\n';
        return ExitUsage;
    }

    try {
        if (classify->parsed())
            return run_classify(o, out);
        if (cgroup->parsed())
            return run_class_group(o, out);
        if (scan_cmd->parsed())
            return run_scan(o, out, err);
        if (family->parsed())
            return run_family(o, out);
        if (series->parsed())
            return run_series(o, out);
        if (verify->parsed())
            return run_verify(o, out, err);
        if (d0->parsed())
            return run_d0(o, out);
        if (constants->parsed())
            return run_constants(o, out);
    } catch (const Error& e) {
        err << e.what() << '\n';
        return exit_for(e.kind());
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return ExitUsage;
    } catch (const std::out_of_range& e) {
        err << "usage error: " << e.what() << '\n';
        return ExitUsage;
    }
    return ExitUsage;
}

} // namespace iqlambda::cli
