#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pmf/cache.hpp"
#include "pmf/eisenstein.hpp"
#include "pmf/json_io.hpp"
#include "pmf/orientation.hpp"

namespace py = pybind11;
using namespace pmf;

namespace {

CycRingPtr make_ring(long L, const std::string& flavor, long p, long M) {
    if (flavor == "rational") return CycRing::rational(L);
    if (flavor == "residue") return CycRing::residue(L, p, M);
    throw ParameterError("flavor must be 'rational' or 'residue'");
}

py::int_ to_py_int(const mpz_class& z) {
    return py::reinterpret_steal<py::int_>(
        PyLong_FromString(z.get_str().c_str(), nullptr, 10));
}

nlohmann::json kummer_units_json(const KummerUnitsReport& r) {
    nlohmann::json fails = nlohmann::json::array();
    for (const auto& f : r.failures)
        fails.push_back({{"k", f.k}, {"k2", f.k2}, {"r", f.r}, {"q", f.q_index}});
    return {{"pass", r.pass}, {"pairs", r.pairs_checked}, {"failures", fails}};
}

nlohmann::json condition_json(const ConditionReport& rep) {
    nlohmann::json c1 = nlohmann::json::array();
    for (const auto& [c, kr] : rep.kummer) {
        auto e = kummer_units_json(kr);
        e["c"] = c;
        c1.push_back(e);
    }
    nlohmann::json c2 = nlohmann::json::array();
    for (const auto& mr : rep.means)
        c2.push_back({{"c", mr.c}, {"valuations", mr.valuations}, {"pass", mr.pass}});
    nlohmann::json c3 = nlohmann::json::array();
    for (const auto& ke : rep.kernels)
        c3.push_back({{"k", ke.k}, {"pass", ke.pass}, {"first_fail", ke.first_fail_index}});
    nlohmann::json sol = nlohmann::json::array();
    for (const auto& s : rep.classicality.solution) sol.push_back(scalar_to_string(s));
    nlohmann::json c4{{"pass", rep.classicality.pass},
                      {"q_checked", rep.classicality.q_checked},
                      {"solution", sol}};
    return {{"conditions", {{"c1", c1}, {"c2", c2}, {"c3", c3}, {"c4", c4}}},
            {"overall", rep.overall}};
}

MomentSequence build_moments(const std::string& which, const DirichletCharacter& chi,
                             long p, long M, long Q, long c, long K) {
    MeasureParams mp{chi, p, M, Q, 0};
    if (which == "jtilde") return moments_j_tilde(mp, c, K);
    if (which == "nubar") return moments_nu_bar(mp, c, K);
    if (which == "mu") return moments_mu(mp, c, K);
    throw ParameterError("measure must be 'jtilde', 'nubar' or 'mu'");
}

} // namespace

PYBIND11_MODULE(_pmf, m) {
    m.doc() = "p-adic modular forms: q-expansions, operators, Eisenstein measures";

    py::register_exception<Error>(m, "PmfError");

    py::class_<DirichletCharacter>(m, "Character")
        .def_readonly("modulus", &DirichletCharacter::modulus)
        .def_readonly("order", &DirichletCharacter::order)
        .def_readonly("parity", &DirichletCharacter::parity)
        .def_property_readonly("name", &DirichletCharacter::id)
        .def("is_trivial", &DirichletCharacter::is_trivial)
        .def("ring_conductor", &DirichletCharacter::ring_conductor)
        .def("__repr__",
             [](const DirichletCharacter& c) { return "<Character " + c.id() + ">"; });

    m.def("character", &parse_character, py::arg("name"),
          "parse 'N:index' or 'N:quad'");
    m.def("characters", &enumerate_characters, py::arg("N"));

    py::class_<QExpansion>(m, "Form")
        .def_property_readonly("q_prec", &QExpansion::q_prec)
        .def_property_readonly("weight",
                               [](const QExpansion& f) { return f.weight; })
        .def_readonly("level", &QExpansion::level)
        .def("is_zero", &QExpansion::is_zero)
        .def("coeff",
             [](const QExpansion& f, long n) { return scalar_to_string(f.coeff(n)); },
             py::arg("n"), "coordinate string of the q^n coefficient")
        .def("agrees_with", &QExpansion::agrees_with)
        .def("__add__", &QExpansion::operator+)
        .def("__sub__",
             [](const QExpansion& a, const QExpansion& b) { return a - b; })
        .def("__mul__", &QExpansion::operator*)
        .def("__neg__", [](const QExpansion& f) { return -f; })
        .def("valuation", &QExpansion::valuation)
        .def("congruent", &QExpansion::congruent, py::arg("other"), py::arg("m"))
        .def("reduce_padic", &QExpansion::reduce_padic, py::arg("p"), py::arg("M"))
        .def("to_json", [](const QExpansion& f) { return qexp_to_json(f).dump(); })
        .def("__repr__", [](const QExpansion& f) {
            return "<Form prec=" + std::to_string(f.q_prec()) + ">";
        });

    m.def("form_from_json",
          [](const std::string& s) { return qexp_from_json(nlohmann::json::parse(s)); });

    m.def(
        "eisenstein",
        [](long k, const DirichletCharacter& chi, long Q, const std::string& flavor,
           long p, long M) {
            return eisenstein_chi(k, chi, Q, make_ring(chi.ring_conductor(), flavor, p, M));
        },
        py::arg("k"), py::arg("chi"), py::arg("Q"), py::arg("flavor") = "rational",
        py::arg("p") = 0, py::arg("M") = 0);

    m.def("diamond",
          [](const QExpansion& f, long n) { return diamond(f, mpz_class(n)); },
          py::arg("f"), py::arg("n"));
    m.def("frob", &frob, py::arg("f"), py::arg("p"));
    m.def("atkin_u", &atkin_u, py::arg("f"), py::arg("p"));
    m.def("hecke_tp", &hecke_tp, py::arg("f"), py::arg("k"), py::arg("p"));
    m.def("p_stabilize", &p_stabilize, py::arg("f"), py::arg("k"), py::arg("p"));
    m.def("ell2_apply", &ell2_apply, py::arg("f"), py::arg("k"), py::arg("p"));
    m.def(
        "kernel_check_atkin",
        [](const QExpansion& f, long p, long q_eff, long M) {
            auto r = kernel_check_atkin(f, p, q_eff, M);
            return py::make_tuple(r.pass, r.first_fail_index, r.q_checked);
        },
        py::arg("f"), py::arg("p"), py::arg("q_eff"), py::arg("M"));

    // measures
    m.def(
        "moment",
        [](const std::string& which, const DirichletCharacter& chi, long p, long M,
           long Q, long k, long c) {
            MeasureParams mp{chi, p, M, Q, 0};
            if (which == "jtilde") return j_tilde_moment(mp, k, c);
            if (which == "nubar") return nu_bar_moment(mp, k, c);
            if (which == "mu") return mu_moment(mp, k, c);
            throw ParameterError("measure must be 'jtilde', 'nubar' or 'mu'");
        },
        py::arg("measure"), py::arg("chi"), py::arg("p"), py::arg("M"), py::arg("Q"),
        py::arg("k"), py::arg("c"));
    m.def(
        "h_moment",
        [](const DirichletCharacter& chi, long p, long M, long Q, long k, long a, long b,
           bool restricted) {
            MeasureParams mp{chi, p, M, Q, 0};
            return h_moment(mp, k, a, b, restricted);
        },
        py::arg("chi"), py::arg("p"), py::arg("M"), py::arg("Q"), py::arg("k"),
        py::arg("a"), py::arg("b"), py::arg("restricted") = false);
    m.def(
        "kummer_units_json",
        [](const std::string& which, const DirichletCharacter& chi, long p, long M,
           long Q, long c, long K) {
            return kummer_units_json(kummer_check_units(build_moments(which, chi, p, M, Q, c, K)))
                .dump();
        },
        py::arg("measure"), py::arg("chi"), py::arg("p"), py::arg("M"), py::arg("Q"),
        py::arg("c"), py::arg("K"));
    m.def(
        "iwasawa_log",
        [](long c, long p, long M) { return to_py_int(iwasawa_log(c, p, M)); },
        py::arg("c"), py::arg("p"), py::arg("M"), "log_p(c^{p-1}) mod p^M");

    // orientation
    m.def(
        "charseries",
        [](const DirichletCharacter& chi, long D, long Q) {
            auto K = characteristic_series(chi, D, Q);
            std::vector<QExpansion> out;
            for (long i = 0; i <= K.D(); ++i) out.push_back(K.t(i));
            return out;
        },
        py::arg("chi"), py::arg("D"), py::arg("Q"),
        "u^i coefficients of the characteristic series");
    m.def(
        "genus",
        [](const DirichletCharacter& chi, long D, long Q, long n) {
            return genus_cpn(characteristic_series(chi, D, Q), n);
        },
        py::arg("chi"), py::arg("D"), py::arg("Q"), py::arg("n"));
    m.def(
        "verify_json",
        [](const DirichletCharacter& chi, long p, const std::vector<long>& c_set, long K,
           long Q, long M, long r_max, long inject_k, long inject_q) {
            OrientParams op;
            op.chi = chi;
            op.p = p;
            op.c_set = c_set;
            op.K = K;
            op.Q = Q;
            op.M = M;
            op.r_max = r_max;
            op.inject_k = inject_k;
            op.inject_q = inject_q;
            return condition_json(verify_conditions(op)).dump();
        },
        py::arg("chi"), py::arg("p"), py::arg("c_set"), py::arg("K") = 8,
        py::arg("Q") = 16, py::arg("M") = 5, py::arg("r_max") = 3,
        py::arg("inject_k") = -1, py::arg("inject_q") = 0);
}
