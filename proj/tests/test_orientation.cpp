#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pmf/eisenstein.hpp"
#include "pmf/orientation.hpp"

using namespace pmf;

namespace {

// untruncated polynomial power, as an independent oracle for genus_cpn
std::vector<QExpansion> naive_pow(const std::vector<QExpansion>& a, long e,
                                  const CycRingPtr& ring, long Q) {
    std::vector<QExpansion> r{QExpansion(ring, Q)};
    r[0].coeff(0) = CycScalar::from_int(ring, 1);
    for (long i = 0; i < e; ++i) {
        std::vector<QExpansion> nr(r.size() + a.size() - 1, QExpansion(ring, Q));
        for (size_t x = 0; x < r.size(); ++x)
            for (size_t y = 0; y < a.size(); ++y) nr[x + y] = nr[x + y] + r[x] * a[y];
        r = std::move(nr);
    }
    return r;
}

} // namespace

TEST_CASE("characteristic series coefficients") {
    auto chi = parse_character("3:quad");
    auto K = characteristic_series(chi, 8, 16);
    auto ring = K.ring();
    long Q = 16;
    QExpansion one(ring, Q);
    one.coeff(0) = CycScalar::from_int(ring, 1);
    CHECK(K.t(0).agrees_with(one));
    CHECK(K.t(1).is_zero());

    auto triv = enumerate_characters(1)[0];
    auto g2 = eisenstein_chi(2, triv, Q, ring);
    auto g3 = eisenstein_chi(3, chi, Q, ring);
    CHECK(K.t(2).agrees_with(g2.scale(CycScalar::from_rational(ring, mpq_class(1, 2)))));
    CHECK(K.t(3).agrees_with(g3.scale(CycScalar::from_rational(ring, mpq_class(1, 6)))));

    CHECK_THROWS_AS(characteristic_series(chi, 1, 8), ParameterError);
}

TEST_CASE("formal group law exponential") {
    auto chi = parse_character("3:quad");
    long D = 8, Q = 16;
    auto K = characteristic_series(chi, D, Q);
    auto [ef, lf] = fgl_exponential(K);

    // trivial law: K = 1 gives exp_F = u
    auto Kone = CharSeries::one(K.ring(), D, Q);
    auto [ef1, lf1] = fgl_exponential(Kone);
    CHECK(ef1.is_identity_map());
    CHECK(lf1.is_identity_map());

    CHECK(ef.compose(lf).is_identity_map());
    CHECK(lf.compose(ef).is_identity_map());

    // exp_F = u - t_2 u^3 - ...: the first correction -G_2/2 sits at u^3
    // (the u^2-coefficient vanishes with t_1)
    auto triv = enumerate_characters(1)[0];
    auto g2 = eisenstein_chi(2, triv, Q, K.ring());
    CHECK(ef.t(2).is_zero());
    CHECK(ef.t(3).agrees_with(
        g2.scale(CycScalar::from_rational(K.ring(), mpq_class(-1, 2)))));

    // re-division reproduces K: exp_F * K = u
    auto u = CharSeries::variable(K.ring(), D, Q);
    auto prod = ef * K;
    for (long i = 0; i <= D; ++i) CHECK(prod.t(i).agrees_with(u.t(i)));
}

TEST_CASE("CP^n genus") {
    auto chi = parse_character("3:quad");
    long D = 8, Q = 16;
    auto K = characteristic_series(chi, D, Q);
    auto ring = K.ring();
    QExpansion one(ring, Q);
    one.coeff(0) = CycScalar::from_int(ring, 1);
    CHECK(genus_cpn(K, 0).agrees_with(one));
    CHECK(genus_cpn(K, 1).is_zero());

    auto triv = enumerate_characters(1)[0];
    auto g2 = eisenstein_chi(2, triv, Q, ring);
    CHECK(genus_cpn(K, 2).agrees_with(g2.scale(CycScalar::from_rational(ring, mpq_class(3, 2)))));

    // independent naive polynomial power for n <= 6
    std::vector<QExpansion> kpoly;
    for (long i = 0; i <= D; ++i) kpoly.push_back(K.t(i));
    for (long n = 0; n <= 6; ++n) {
        auto pw = naive_pow(kpoly, n + 1, ring, Q);
        CHECK(genus_cpn(K, n).agrees_with(pw[n]));
    }
    CHECK_THROWS_AS(genus_cpn(K, D + 1), ParameterError);
}

TEST_CASE("basis membership") {
    auto chi = parse_character("3:quad");
    auto ring = CycRing::rational(chi.ring_conductor());
    long Q = 16;
    auto g1 = eisenstein_chi(1, chi, Q, ring);
    auto g3 = eisenstein_chi(3, chi, Q, ring);
    std::vector<QExpansion> basis{g1, g3};

    auto rep = basis_membership(g1, basis, Q);
    CHECK(rep.pass);
    CHECK(rep.solution[0].is_one());
    CHECK(rep.solution[1].is_zero());

    QExpansion zero(ring, Q);
    auto repz = basis_membership(zero, basis, Q);
    CHECK(repz.pass);
    CHECK(repz.solution[0].is_zero());
    CHECK(repz.solution[1].is_zero());

    // a combination is recovered
    auto f = g1.scale(CycScalar::from_rational(ring, mpq_class(2, 3))) +
             g3.scale(CycScalar::from_int(ring, -5));
    auto repf = basis_membership(f, basis, Q);
    CHECK(repf.pass);
    CHECK(repf.solution[0] == CycScalar::from_rational(ring, mpq_class(2, 3)));

    // something outside the span
    QExpansion out = g1;
    out.coeff(7) = out.coeff(7) + CycScalar::from_int(ring, 1);
    CHECK_FALSE(basis_membership(out, basis, Q).pass);

    // dependent basis
    std::vector<QExpansion> dep{g1, g1.scale(CycScalar::from_int(ring, 2))};
    CHECK_THROWS_AS(basis_membership(g3, dep, Q), DegenerateBasisError);
}

TEST_CASE("membership verdict is invariant under basis recombination") {
    std::mt19937_64 rng(23);
    auto chi = parse_character("3:quad");
    auto ring = CycRing::rational(chi.ring_conductor());
    long Q = 16;
    auto g1 = eisenstein_chi(1, chi, Q, ring);
    auto g3 = eisenstein_chi(3, chi, Q, ring);
    std::vector<QExpansion> basis{g1, g3};
    auto f = g1.scale(CycScalar::from_int(ring, 4)) + g3;
    for (int i = 0; i < 5; ++i) {
        // unimodular 2x2: [[1,m],[0,1]] * [[1,0],[n,1]]
        long m = (long)(rng() % 7) - 3, n = (long)(rng() % 7) - 3;
        auto b0 = basis[0] + basis[1].scale(CycScalar::from_int(ring, m));
        auto b1 = basis[1] + b0.scale(CycScalar::from_int(ring, n));
        std::vector<QExpansion> rb{b0, b1};
        CHECK(basis_membership(f, rb, Q).pass);
        QExpansion out = f;
        out.coeff(5) = out.coeff(5) + CycScalar::from_int(ring, 1);
        CHECK_FALSE(basis_membership(out, rb, Q).pass);
    }
}

TEST_CASE("verify_conditions on the canonical p=5 config") {
    OrientParams op;
    op.chi = parse_character("3:quad");
    op.p = 5;
    op.c_set = {2, 3};
    op.K = 8;
    op.Q = 16;
    op.M = 5;
    op.r_max = 3;
    auto rep = verify_conditions(op);
    CHECK(rep.overall);
    for (const auto& [c, kr] : rep.kummer) CHECK(kr.pass);
    for (const auto& mr : rep.means) CHECK(mr.pass);
    for (const auto& ke : rep.kernels) CHECK(ke.pass);
    CHECK(rep.classicality.pass);
}

TEST_CASE("verify_conditions rejects bad parameters") {
    OrientParams op;
    op.chi = parse_character("3:quad");
    op.p = 5;
    op.c_set = {};
    CHECK_THROWS_AS(verify_conditions(op), ParameterError);
    op.c_set = {2};
    op.chi = parse_character("5:quad"); // even character
    CHECK_THROWS_AS(verify_conditions(op), ParameterError);
    op.chi = parse_character("3:quad");
    op.p = 4;
    CHECK_THROWS_AS(verify_conditions(op), ParameterError);
    op.p = 5;
    op.c_set = {5};
    CHECK_THROWS_AS(verify_conditions(op), ParameterError);
}

TEST_CASE("injected perturbation breaks condition 1 with a witness") {
    OrientParams op;
    op.chi = parse_character("3:quad");
    op.p = 5;
    op.c_set = {2};
    op.K = 8;
    op.Q = 16;
    op.M = 5;
    op.r_max = 1;
    op.inject_k = 3;
    op.inject_q = 0;
    auto rep = verify_conditions(op);
    CHECK_FALSE(rep.overall);
    CHECK_FALSE(rep.kummer[0].second.pass);
    bool witnessed = false;
    for (const auto& f : rep.kummer[0].second.failures)
        witnessed = witnessed || f.k == 3 || f.k2 == 3;
    CHECK(witnessed);
}
