#include "pmf/json_io.hpp"

namespace pmf {

namespace {

std::string coord_str(const mpq_class& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

mpq_class coord_parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return mpq_class(mpz_class(s));
    mpq_class q(mpz_class(s.substr(0, slash)), mpz_class(s.substr(slash + 1)));
    q.canonicalize();
    return q;
}

} // namespace

std::string scalar_to_string(const CycScalar& s) {
    std::string out = "[";
    if (s.ring()->flavor() == Flavor::Rational) {
        const auto& rc = s.rational_coords();
        for (size_t i = 0; i < rc.size(); ++i) {
            if (i) out += ",";
            out += coord_str(rc[i]);
        }
    } else {
        const auto& zc = s.residue_coords();
        for (size_t i = 0; i < zc.size(); ++i) {
            if (i) out += ",";
            out += zc[i].get_str();
        }
    }
    return out + "]";
}

nlohmann::json qexp_to_json(const QExpansion& f) {
    nlohmann::json j;
    const auto& ring = f.ring();
    j["ring"] = {{"L", ring->conductor()},
                 {"flavor", ring->flavor() == Flavor::Rational ? "rational" : "residue"},
                 {"p", ring->p()},
                 {"M", ring->precision()}};
    if (f.weight) j["k"] = *f.weight;
    j["N"] = f.level;
    if (f.nebentypus) j["chi"] = f.nebentypus->id();
    nlohmann::json coeffs = nlohmann::json::array();
    for (long n = 0; n <= f.q_prec(); ++n) {
        nlohmann::json c = nlohmann::json::array();
        if (ring->flavor() == Flavor::Rational)
            for (const auto& x : f.coeff(n).rational_coords()) c.push_back(coord_str(x));
        else
            for (const auto& x : f.coeff(n).residue_coords()) c.push_back(x.get_str());
        coeffs.push_back(std::move(c));
    }
    j["coeffs"] = std::move(coeffs);
    return j;
}

QExpansion qexp_from_json(const nlohmann::json& j) {
    const auto& rj = j.at("ring");
    long L = rj.at("L").get<long>();
    CycRingPtr ring;
    bool rational = rj.at("flavor").get<std::string>() == "rational";
    if (rational)
        ring = CycRing::rational(L);
    else
        ring = CycRing::residue(L, rj.at("p").get<long>(), rj.at("M").get<long>());
    const auto& coeffs = j.at("coeffs");
    QExpansion f(ring, (long)coeffs.size() - 1);
    for (long n = 0; n < (long)coeffs.size(); ++n) {
        const auto& c = coeffs[n];
        if ((long)c.size() != ring->degree())
            throw ParameterError("coefficient arity does not match the ring degree");
        if (rational) {
            std::vector<mpq_class> v;
            for (const auto& x : c) v.push_back(coord_parse(x.get<std::string>()));
            f.coeff(n) = CycScalar::from_rational_poly(ring, v);
        } else {
            std::vector<mpz_class> v;
            for (const auto& x : c) v.emplace_back(x.get<std::string>());
            f.coeff(n) = CycScalar::from_poly(ring, v);
        }
    }
    if (j.contains("k")) f.weight = j.at("k").get<long>();
    if (j.contains("N")) f.level = j.at("N").get<long>();
    if (j.contains("chi")) f.nebentypus = parse_character(j.at("chi").get<std::string>());
    return f;
}

} // namespace pmf
