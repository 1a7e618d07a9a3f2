#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "iqlambda/error.hpp"
#include "iqlambda/families.hpp"
#include "iqlambda/lambda.hpp"
#include "iqlambda/lvalues.hpp"
#include "iqlambda/quadforms.hpp"
#include "iqlambda/scanner.hpp"

namespace py = pybind11;
using namespace iqlambda;

namespace {

py::object to_py(const mpz_class& z)
{
    return py::reinterpret_steal<py::object>(PyLong_FromString(z.get_str().c_str(), nullptr, 10));
}

py::object to_py(const Rational& q)
{
    static py::object fraction = py::module_::import("fractions").attr("Fraction");
    return fraction(to_py(q.get_num()), to_py(q.get_den()));
}

FundamentalDiscriminant disc(Int D)
{
    return FundamentalDiscriminant::from(D);
}

py::dict verdict_dict(const LambdaVerdict& v)
{
    py::dict d;
    d["lambda"] = std::string(to_string(v.value));
    d["method"] = std::string(to_string(v.method));
    d["witnesses"] = v.witnesses;
    return d;
}

FamilyKind kind_from(const std::string& name)
{
    if (auto k = parse_family_kind(name))
        return *k;
    raise(ErrorKind::PreconditionViolated, "unknown family kind " + name);
}

py::dict member_dict(const FamilyMember& m)
{
    py::dict d;
    d["kind"] = std::string(to_string(m.kind));
    d["p"] = m.p;
    d["n"] = m.n;
    d["radicand"] = m.radicand;
    d["d"] = m.D().value();
    d["d0"] = m.field.d0;
    d["label"] = m.field.label();
    return d;
}

} // namespace

PYBIND11_MODULE(_iqlambda, m)
{
    m.doc() = "Iwasawa lambda_p classification for imaginary quadratic fields";

    static py::exception<Error> error(m, "IqlambdaError");
    py::register_exception_translator([](std::exception_ptr ptr) {
        try {
            if (ptr)
                std::rethrow_exception(ptr);
        } catch (const Error& e) {
            py::object exc = py::handle(error.ptr())(e.what());
            exc.attr("kind") = std::string(to_string(e.kind()));
            PyErr_SetObject(error.ptr(), exc.ptr());
        }
    });

    py::class_<Budget>(m, "Budget")
        .def(py::init<>())
        .def_readwrite("class_group_abs_disc", &Budget::class_group_abs_disc)
        .def_readwrite("lvalue_abs_disc", &Budget::lvalue_abs_disc)
        .def_readwrite("gen_bernoulli_max_n", &Budget::gen_bernoulli_max_n)
        .def_readwrite("bernoulli_max_index", &Budget::bernoulli_max_index)
        .def_readwrite("generator_max_bits", &Budget::generator_max_bits)
        .def_readwrite("rho_iterations", &Budget::rho_iterations)
        .def_readwrite("power_max_abs", &Budget::power_max_abs);

    m.def("kronecker", &kronecker, py::arg("a"), py::arg("n"));
    m.def("is_fundamental", &FundamentalDiscriminant::is_fundamental, py::arg("d"));

    m.def(
        "field",
        [](Int t, const Budget& b) {
            const RadicandField f = fundamental_from_radicand(t, b);
            return py::dict(py::arg("d") = f.D.value(), py::arg("d0") = f.d0, py::arg("m") = f.m,
                            py::arg("label") = f.label());
        },
        py::arg("t"), py::arg("budget") = Budget{}, "Fundamental discriminant of Q(sqrt(t)) for t < 0.");

    m.def(
        "class_group",
        [](Int D, const Budget& b) {
            const ClassGroup g = class_group(disc(D), b);
            std::vector<std::tuple<Int, Int, Int>> forms;
            for (const auto& f : g.forms())
                forms.emplace_back(f.a, f.b, f.c);
            return py::dict(py::arg("h") = g.h(), py::arg("factors") = g.invariant_factors(),
                            py::arg("forms") = forms);
        },
        py::arg("d"), py::arg("budget") = Budget{});
    m.def(
        "ideal_class_order", [](Int D, Int p, const Budget& b) { return ideal_class_order(disc(D), p, b); },
        py::arg("d"), py::arg("p"), py::arg("budget") = Budget{});
    m.def(
        "analytic_h_bound", [](Int D) { return to_py(analytic_h_bound(disc(D))); }, py::arg("d"));

    m.def(
        "classify",
        [](Int D, Int p, const Budget& b) { return verdict_dict(classify_lambda(disc(D), p, b)); },
        py::arg("d"), py::arg("p"), py::arg("budget") = Budget{});
    m.def(
        "sands_test",
        [](Int D, Int p, const Budget& b) {
            const auto fd = disc(D);
            return verdict_dict(sands_test(split_context(fd, p, b), class_group(fd, b).h()));
        },
        py::arg("d"), py::arg("p"), py::arg("budget") = Budget{});
    m.def(
        "lvalue_test", [](Int D, Int p, const Budget& b) { return verdict_dict(lvalue_test(disc(D), p, b)); },
        py::arg("d"), py::arg("p"), py::arg("budget") = Budget{});
    m.def(
        "closed_congruence",
        [](const std::string& kind, Int p) {
            if (kind != "one-minus-p" && kind != "four-minus-p")
                raise(ErrorKind::PreconditionViolated, "kind is one-minus-p or four-minus-p");
            return closed_congruence(kind == "one-minus-p" ? CongruenceKind::OneMinusP : CongruenceKind::FourMinusP, p);
        },
        py::arg("kind"), py::arg("p"));
    m.def(
        "find_D0", [](Int p) { return find_D0(p).value(); }, py::arg("p"));
    m.def("wieferich", &wieferich, py::arg("p"));
    m.def("find_q1", &find_q1, py::arg("p"));

    m.def(
        "generalized_bernoulli",
        [](int n, Int D, const Budget& b) { return to_py(generalized_bernoulli(n, D, b)); }, py::arg("n"),
        py::arg("d"), py::arg("budget") = Budget{});
    m.def(
        "l_value_neg", [](int n, Int D, const Budget& b) { return to_py(l_value_neg(n, D, b)); }, py::arg("n"),
        py::arg("d"), py::arg("budget") = Budget{});
    m.def(
        "cohen_h", [](int r, Int N) { return to_py(cohen_h(r, N)); }, py::arg("r"), py::arg("n"));
    m.def("alpha", &alpha, py::arg("p"));
    m.def(
        "scaled_series",
        [](Int p, Int bound) {
            const QSeries g = build_scaled_series(p, bound);
            py::list out;
            for (Int N = 0; N <= g.bound; ++N)
                out.append(to_py(g[N]));
            return out;
        },
        py::arg("p"), py::arg("bound"));
    m.def(
        "kappa_constants",
        [](Int p, std::set<Int> splus, std::set<Int> sminus, Int Q, Int A, Int B) {
            const KappaConstants k = kappa_constants(p, splus, sminus, Q, {A, B});
            return py::dict(py::arg("kappa") = to_py(k.kappa), py::arg("P1") = to_py(k.P1),
                            py::arg("P2") = to_py(k.P2), py::arg("P3") = to_py(k.P3));
        },
        py::arg("p"), py::arg("splus"), py::arg("sminus"), py::arg("q"), py::arg("a"), py::arg("b"));

    m.def("a_set", [](Int p, int n) { return a_set(p, n); }, py::arg("p"), py::arg("n"));
    m.def(
        "member",
        [](const std::string& kind, Int p, int n, std::optional<Int> a_or_q1) {
            return member_dict(member(kind_from(kind), p, n, a_or_q1));
        },
        py::arg("kind"), py::arg("p"), py::arg("n"), py::arg("a_or_q1") = py::none());
    m.def(
        "verify_order",
        [](const std::string& kind, Int p, int n, std::optional<Int> a_or_q1) {
            const OrderCheck c = verify_order(member(kind_from(kind), p, n, a_or_q1));
            return py::dict(py::arg("s") = c.s, py::arg("expected") = c.expected,
                            py::arg("matches") = c.matches(), py::arg("excluded") = c.excluded(),
                            py::arg("note") = c.note);
        },
        py::arg("kind"), py::arg("p"), py::arg("n"), py::arg("a_or_q1") = py::none());
    m.def(
        "collision_scan",
        [](const std::string& kind, Int p, int n_lo, int n_hi, std::vector<int> skip) {
            return collision_scan(kind_from(kind), p, n_lo, n_hi, skip);
        },
        py::arg("kind"), py::arg("p"), py::arg("n_lo"), py::arg("n_hi"), py::arg("skip") = std::vector<int>{});
    m.def("diophantine_count", &diophantine_count, py::arg("d1"), py::arg("d2"), py::arg("p"),
          py::arg("y_max") = 40);
    m.def(
        "no_pm1_solution",
        [](const std::string& shape, Int q, Int p, Int x_max) {
            if (shape != "4q2" && shape != "16q2")
                raise(ErrorKind::PreconditionViolated, "shape is 4q2 or 16q2");
            return no_pm1_solution(shape == "4q2" ? PmOneShape::FourQSq : PmOneShape::SixteenQSq, q, p, x_max);
        },
        py::arg("shape"), py::arg("q"), py::arg("p"), py::arg("x_max") = 40);

    m.def("enumerate_fundamental", &enumerate_fundamental, py::arg("x"));
    m.def(
        "residue_classes",
        [](Int A, Int B, std::set<Int> splus, std::set<Int> sminus) {
            const ResidueClasses rc = residue_classes({A, B}, splus, sminus);
            return py::make_tuple(rc.modulus, rc.classes);
        },
        py::arg("a"), py::arg("b"), py::arg("splus") = std::set<Int>{}, py::arg("sminus") = std::set<Int>{});
    m.def(
        "search_D0",
        [](Int p, Int A, Int B, std::set<Int> splus, std::set<Int> sminus, Int max_abs) {
            return search_D0(p, {A, B}, splus, sminus, max_abs).value();
        },
        py::arg("p"), py::arg("a"), py::arg("b"), py::arg("splus") = std::set<Int>{},
        py::arg("sminus") = std::set<Int>{}, py::arg("max_abs") = 10'000'000);
    m.def(
        "scan_jsonl",
        [](Int X, Int p, std::optional<std::pair<Int, Int>> ab, std::set<Int> splus, std::set<Int> sminus,
           std::set<Int> exclude, unsigned threads) {
            ScanFilter f{X, p, std::nullopt, splus, sminus, exclude};
            if (ab)
                f.ab = ModClass{ab->first, ab->second};
            ScanOptions opt;
            opt.threads = std::max(1u, threads);
            std::vector<std::string> lines;
            {
                py::gil_scoped_release release;
                scan(f, opt, [&](const ScanRecord& r) { lines.push_back(r.to_json()); });
            }
            return lines;
        },
        py::arg("x"), py::arg("p"), py::arg("mod_class") = py::none(), py::arg("splus") = std::set<Int>{},
        py::arg("sminus") = std::set<Int>{}, py::arg("exclude") = std::set<Int>{}, py::arg("threads") = 1);
    m.def(
        "verify_suite",
        [](const std::string& name) {
            const auto suite = parse_suite(name);
            if (!suite)
                raise(ErrorKind::PreconditionViolated, "unknown suite " + name);
            SuiteReport r;
            {
                py::gil_scoped_release release;
                r = verify_suite(*suite);
            }
            return py::dict(py::arg("suite") = name, py::arg("pass") = r.pass, py::arg("checked") = r.checked,
                            py::arg("skipped") = r.skipped, py::arg("counterexample") = r.counterexample,
                            py::arg("lines") = r.lines);
        },
        py::arg("name"));
}
