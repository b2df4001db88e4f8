#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "pmf/cache.hpp"
#include "pmf/config.hpp"
#include "pmf/eisenstein.hpp"
#include "pmf/json_io.hpp"
#include "pmf/orientation.hpp"

using nlohmann::json;
using namespace pmf;

namespace {

struct InjectSpec {
    long k = -1;
    long q = 0;
};

InjectSpec parse_inject(const std::string& s) {
    InjectSpec is;
    if (s.empty()) return is;
    // "k=3" or "k=3,q=0"
    for (size_t pos = 0; pos < s.size();) {
        auto comma = s.find(',', pos);
        std::string item = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        auto eq = item.find('=');
        if (eq == std::string::npos) throw ParameterError("bad --inject-error spec: " + s);
        std::string key = item.substr(0, eq);
        long val = std::stol(item.substr(eq + 1));
        if (key == "k")
            is.k = val;
        else if (key == "q")
            is.q = val;
        else
            throw ParameterError("bad --inject-error key: " + key);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return is;
}

void emit(const json& j, const std::string& format, std::ostream& os) {
    if (format == "json") {
        os << j.dump(2) << "\n";
        return;
    }
    // text: flat two-column rendering
    std::function<void(const json&, const std::string&)> walk = [&](const json& v,
                                                                    const std::string& prefix) {
        if (v.is_object()) {
            for (auto it = v.begin(); it != v.end(); ++it)
                walk(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key());
        } else if (v.is_array()) {
            for (size_t i = 0; i < v.size(); ++i) walk(v[i], prefix + "[" + std::to_string(i) + "]");
        } else {
            os << prefix << "\t" << v.dump() << "\n";
        }
    };
    walk(j, "");
}

void write_report(const json& j, const std::string& out, const std::string& format) {
    if (!out.empty()) {
        std::ofstream f(out);
        f << j.dump(2) << "\n";
    }
    emit(j, format, std::cout);
}

json coeff_list(const QExpansion& f) {
    json a = json::array();
    for (long n = 0; n <= f.q_prec(); ++n) a.push_back(scalar_to_string(f.coeff(n)));
    return a;
}

MomentSequence build_moments(const std::string& which, const MeasureParams& mp, long c, long a,
                             long b, long K) {
    if (which == "H") return eisenstein_moments(mp, a, b, K, false);
    if (which == "H_restricted") return eisenstein_moments(mp, a, b, K, true);
    if (which == "jtilde") return moments_j_tilde(mp, c, K);
    if (which == "nubar") return moments_nu_bar(mp, c, K);
    if (which == "mu") return moments_mu(mp, c, K);
    throw ParameterError("unknown measure: " + which);
}

QExpansion random_form(std::mt19937_64& rng, const CycRingPtr& ring,
                       const DirichletCharacter& chi, long Q, long k) {
    QExpansion f(ring, Q);
    std::uniform_int_distribution<long> dist(0, 1000000);
    for (long n = 0; n <= Q; ++n) {
        std::vector<mpz_class> poly(ring->degree());
        for (auto& x : poly) x = dist(rng);
        f.coeff(n) = CycScalar::from_poly(ring, poly);
    }
    f.weight = k;
    f.level = chi.modulus;
    f.nebentypus = chi;
    return f;
}

json ops_verify(long Q, long M, long trials, unsigned long seed) {
    json table = json::array();
    bool all = true;
    std::mt19937_64 rng(seed);
    for (long p : {3L, 5L, 7L}) {
        for (long N : {3L, 5L}) {
            if (N % p == 0) continue;
            auto chars = enumerate_characters(N);
            std::vector<DirichletCharacter> usable;
            for (const auto& ch : chars)
                if (ch.ring_conductor() % p != 0) usable.push_back(ch);
            long fails_uf = 0, fails_tp = 0, fails_l2 = 0;
            for (long t = 0; t < trials; ++t) {
                const auto& chi = usable[t % usable.size()];
                auto ring = CycRing::residue(chi.ring_conductor(), p, M);
                long k = 1 + (long)(rng() % 6);
                QExpansion f = random_form(rng, ring, chi, Q, k);
                if (!atkin_u(frob(f, p), p).agrees_with(f)) ++fails_uf;
                if (!hecke_tp(f, k, p).agrees_with(hecke_tp_classical(f, k, p))) ++fails_tp;
                // (1 - <p>U)(1 - p^{k-1} Frob) f vs 1 - T_p + p^{k-1}<p>
                QExpansion s = p_stabilize(f, k, p);
                QExpansion lhs = s - diamond(atkin_u(s, p), p);
                if (!lhs.agrees_with(ell2_apply(f, k, p))) ++fails_l2;
            }
            bool ok = fails_uf + fails_tp + fails_l2 == 0;
            all = all && ok;
            table.push_back({{"p", p},
                             {"N", N},
                             {"trials", trials},
                             {"u_frob_id_failures", fails_uf},
                             {"tp_vs_classical_failures", fails_tp},
                             {"ell2_factorization_failures", fails_l2},
                             {"pass", ok}});
        }
    }
    return json{{"checks", table}, {"overall", all}};
}

json condition_report_json(const ConditionReport& rep) {
    json c1 = json::array();
    for (const auto& [c, kr] : rep.kummer) {
        json fails = json::array();
        for (const auto& f : kr.failures)
            fails.push_back({{"k", f.k}, {"k2", f.k2}, {"r", f.r}, {"q", f.q_index}});
        c1.push_back({{"c", c}, {"pairs", kr.pairs_checked}, {"pass", kr.pass}, {"failures", fails}});
    }
    json c2 = json::array();
    for (const auto& mr : rep.means)
        c2.push_back({{"c", mr.c}, {"valuations", mr.valuations}, {"pass", mr.pass}});
    json c3 = json::array();
    for (const auto& ke : rep.kernels)
        c3.push_back({{"k", ke.k}, {"pass", ke.pass}, {"first_fail_q", ke.first_fail_index}});
    json sol = json::array();
    for (const auto& s : rep.classicality.solution) sol.push_back(scalar_to_string(s));
    json c4{{"pass", rep.classicality.pass},
            {"q_checked", rep.classicality.q_checked},
            {"solution", sol}};
    return json{{"conditions", {{"c1", c1}, {"c2", c2}, {"c3", c3}, {"c4", c4}}},
                {"overall", rep.overall}};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-adic modular form engine"};
    app.require_subcommand(1);
    std::string format = "json";
    app.add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

    long p = 5, N = 3, k = 2, Q = 16, M = 6, K = 8, D = 8, r_max = 3, n_genus = 4;
    long c = 2, a = 2, b = 1, trials = 50;
    unsigned long seed = 20260823;
    std::string chi_name = "3:quad", out, config_path, cache_dir, measure_name = "mu",
                flavor = "rational", inject;

    auto* eisen = app.add_subcommand("eisen", "Eisenstein q-expansion");
    eisen->add_option("--p", p);
    eisen->add_option("--N", N);
    eisen->add_option("--chi", chi_name);
    eisen->add_option("--k", k)->required();
    eisen->add_option("--Q", Q);
    eisen->add_option("--M", M);
    eisen->add_option("--flavor", flavor)->check(CLI::IsMember({"rational", "residue"}));
    eisen->add_option("--cache-dir", cache_dir);
    eisen->add_option("--out", out);

    auto* ops = app.add_subcommand("ops", "operator calculus");
    auto* opsv = ops->add_subcommand("verify", "operator identity battery");
    opsv->add_option("--Q", Q);
    opsv->add_option("--M", M);
    opsv->add_option("--trials", trials);
    opsv->add_option("--seed", seed);
    opsv->add_option("--out", out);

    auto* meas = app.add_subcommand("measure", "Eisenstein measures");
    for (auto* sub : {meas->add_subcommand("moments", "moment q-expansions"),
                      meas->add_subcommand("kummer", "Kummer congruence checks"),
                      meas->add_subcommand("mean", "mean via moment limits")}) {
        sub->add_option("--p", p);
        sub->add_option("--N", N);
        sub->add_option("--chi", chi_name);
        sub->add_option("--c", c);
        sub->add_option("--a", a);
        sub->add_option("--b", b);
        sub->add_option("--K", K);
        sub->add_option("--Q", Q);
        sub->add_option("--M", M);
        sub->add_option("--rmax", r_max);
        sub->add_option("--measure", measure_name);
        sub->add_option("--inject-error", inject);
        sub->add_option("--out", out);
    }
    meas->get_subcommand("moments")->add_flag("--restricted");

    auto* orient = app.add_subcommand("orient", "Theorem-level verification");
    auto* overify = orient->add_subcommand("verify", "four orientation conditions");
    overify->add_option("--config", config_path)->required();
    overify->add_option("--inject-error", inject);
    overify->add_option("--Q", Q, "")->capture_default_str();
    overify->add_option("--out", out);
    auto* ochar = orient->add_subcommand("charseries", "characteristic series");
    ochar->add_option("--N", N);
    ochar->add_option("--chi", chi_name);
    ochar->add_option("--D", D);
    ochar->add_option("--Q", Q);
    ochar->add_option("--out", out);
    auto* ogenus = orient->add_subcommand("genus", "CP^n genus");
    ogenus->add_option("--N", N);
    ogenus->add_option("--chi", chi_name);
    ogenus->add_option("--D", D);
    ogenus->add_option("--Q", Q);
    ogenus->add_option("--n", n_genus);
    ogenus->add_option("--out", out);

    auto* cachecmd = app.add_subcommand("cache", "disk cache maintenance");
    auto* cclear = cachecmd->add_subcommand("clear", "remove all entries");
    auto* cstat = cachecmd->add_subcommand("stat", "entry count and size");
    cclear->add_option("--cache-dir", cache_dir);
    cstat->add_option("--cache-dir", cache_dir);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*eisen) {
            DirichletCharacter chi = parse_character(chi_name);
            CycRingPtr ring = flavor == "rational"
                                  ? CycRing::rational(chi.ring_conductor())
                                  : CycRing::residue(chi.ring_conductor(), p, M);
            std::string key = "eisen|" + chi.id() + "|k=" + std::to_string(k) +
                              "|Q=" + std::to_string(Q) + "|" + flavor +
                              (flavor == "residue"
                                   ? "|p=" + std::to_string(p) + "|M=" + std::to_string(M)
                                   : "");
            DiskCache cache(default_cache_dir(cache_dir));
            json jf;
            if (auto hit = cache.get(key)) {
                jf = *hit;
            } else {
                jf = qexp_to_json(eisenstein_chi(k, chi, Q, ring));
                cache.put(key, jf);
            }
            QExpansion f = qexp_from_json(jf);
            json rep{{"params", {{"chi", chi.id()}, {"k", k}, {"Q", Q}, {"flavor", flavor}}},
                     {"coeffs", coeff_list(f)},
                     {"raw", jf}};
            write_report(rep, out, format);
            return 0;
        }
        if (*opsv) {
            json rep = ops_verify(Q, M, trials, seed);
            write_report(rep, out, format);
            return rep["overall"].get<bool>() ? 0 : 1;
        }
        if (*meas) {
            DirichletCharacter chi = parse_character(chi_name);
            MeasureParams mp{chi, p, M, Q, 0};
            InjectSpec is = parse_inject(inject);
            json params{{"p", p}, {"chi", chi.id()}, {"c", c}, {"K", K}, {"Q", Q}, {"M", M},
                        {"measure", measure_name}};
            if (*meas->get_subcommand("moments")) {
                bool restricted = meas->get_subcommand("moments")->count("--restricted") > 0;
                std::string which = restricted && measure_name == "H" ? "H_restricted" : measure_name;
                MomentSequence seq = build_moments(which, mp, c, a, b, K);
                json ms = json::array();
                for (const auto& m : seq.moments) ms.push_back(qexp_to_json(m));
                write_report(json{{"params", params}, {"moments", ms}}, out, format);
                return 0;
            }
            if (*meas->get_subcommand("kummer")) {
                // run at working precision M + v_p(K!) so Mahler divisions land at M
                long vK = 0;
                for (long q = p; q <= K; q *= p) vK += K / q;
                MeasureParams wide = mp;
                wide.M = M + vK;
                json checks = json::array();
                bool all = true;
                MomentSequence h = build_moments("H", wide, c, c, 1, K);
                if (is.k >= 0 && is.k <= K) {
                    auto& co = h.moments[is.k].coeff(is.q);
                    co = co + CycScalar::from_int(h.moments[is.k].ring(), 1);
                }
                auto zp = kummer_check_zp(h, M);
                all = all && zp.pass;
                checks.push_back({{"name", "kummer_zp_H"},
                                  {"pass", zp.pass},
                                  {"witness", {{"m", zp.fail_m}, {"q", zp.fail_q}, {"coord", zp.fail_coord}}}});
                for (const char* which : {"jtilde", "nubar", "mu"}) {
                    MomentSequence s = build_moments(which, mp, c, a, b, K);
                    if (is.k >= 0 && is.k <= K) {
                        auto& co = s.moments[is.k].coeff(is.q);
                        co = co + CycScalar::from_int(s.moments[is.k].ring(), 1);
                    }
                    auto ur = kummer_check_units(s);
                    all = all && ur.pass;
                    json w = json::array();
                    for (const auto& f : ur.failures)
                        w.push_back({{"k", f.k}, {"k2", f.k2}, {"r", f.r}, {"q", f.q_index}});
                    checks.push_back({{"name", std::string("kummer_units_") + which},
                                      {"pass", ur.pass},
                                      {"witness", w}});
                }
                write_report(json{{"params", params}, {"checks", checks}, {"overall", all}}, out,
                             format);
                return all ? 0 : 1;
            }
            // mean
            auto lim = mean_via_limit(
                [&](const mpz_class& kk) {
                    if (measure_name == "jtilde") return j_tilde_moment(mp, kk, c);
                    if (measure_name == "nubar") return nu_bar_moment(mp, kk, c);
                    return mu_moment(mp, kk, c);
                },
                p, r_max);
            json rep{{"params", params},
                     {"valuations", lim.valuations},
                     {"diff_valuations", lim.diff_valuations},
                     {"iwasawa_log", iwasawa_log(c, p, M).get_str()}};
            write_report(rep, out, format);
            return 0;
        }
        if (*overify) {
            RunConfig rc = run_config_from_toml(parse_toml_file(config_path));
            if (overify->count("--Q")) rc.Q = Q;
            if (out.empty()) out = rc.out;
            InjectSpec is = parse_inject(inject);
            json results = json::array();
            bool all = true;
            for (long cc : rc.c_set) {
                OrientParams op;
                op.chi = parse_character(rc.chi);
                op.p = rc.p;
                op.c_set = {cc};
                op.K = rc.K;
                op.Q = rc.Q;
                op.M = rc.M;
                op.r_max = rc.r_max;
                op.inject_k = is.k;
                op.inject_q = is.q;
                ConditionReport rep = verify_conditions(op);
                all = all && rep.overall;
                json jr = condition_report_json(rep);
                jr["c"] = cc;
                results.push_back(jr);
            }
            json params{{"p", rc.p}, {"N", rc.N}, {"chi", rc.chi}, {"c_set", rc.c_set},
                        {"K", rc.K}, {"Q", rc.Q}, {"M", rc.M}, {"rmax", rc.r_max}};
            write_report(json{{"params", params}, {"runs", results}, {"overall", all}}, out,
                         format);
            return all ? 0 : 1;
        }
        if (*ochar || *ogenus) {
            DirichletCharacter chi = parse_character(chi_name);
            CharSeries Kb = characteristic_series(chi, D, Q);
            if (*ochar) {
                json ts = json::array();
                for (long i = 0; i <= Kb.D(); ++i) ts.push_back(coeff_list(Kb.t(i)));
                write_report(json{{"params", {{"chi", chi.id()}, {"D", D}, {"Q", Q}}},
                                  {"t", ts}},
                             out, format);
            } else {
                QExpansion g = genus_cpn(Kb, n_genus);
                write_report(json{{"params", {{"chi", chi.id()}, {"n", n_genus}}},
                                  {"genus", coeff_list(g)}},
                             out, format);
            }
            return 0;
        }
        if (*cclear || *cstat) {
            DiskCache cache(default_cache_dir(cache_dir));
            if (*cclear) {
                long n = cache.clear();
                emit(json{{"removed", n}}, format, std::cout);
            } else {
                auto s = cache.stat();
                emit(json{{"entries", s.entries}, {"bytes", s.bytes}}, format, std::cout);
            }
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
