#include "pmf/measures.hpp"

#include "pmf/eisenstein.hpp"

namespace pmf {

namespace {

long legendre_vp_factorial(long m, long p) {
    long v = 0;
    for (long q = p; q <= m; q *= p) {
        v += m / q;
        if (q > m / p) break;
    }
    return v;
}

long vp_mpz(const mpz_class& x, long p, long cap) {
    if (x == 0) return cap;
    mpz_class t = x;
    long v = 0;
    while (v < cap && mpz_divisible_ui_p(t.get_mpz_t(), (unsigned long)p)) {
        t /= p;
        ++v;
    }
    return v;
}

QExpansion divide_series_exact_p(const QExpansion& f, long v) {
    QExpansion r(f.ring(), f.q_prec());
    for (long n = 0; n <= f.q_prec(); ++n)
        r.coeff(n) = f.coeff(n).divide_exact_p(v);
    return r;
}

/// f - p^{k-1} Frob f with an arbitrary-precision weight exponent.
QExpansion stabilize_frob(const QExpansion& f, const mpz_class& k, long p) {
    const auto& ring = f.ring();
    mpz_class pe = pow_reduce(p, k - 1, p, ring->precision());
    return f - frob(f, p).scale(CycScalar::from_int(ring, pe));
}

const DirichletCharacter& trivial_char_mod1() {
    static const DirichletCharacter chi = enumerate_characters(1)[0];
    return chi;
}

} // namespace

CycRingPtr MeasureParams::ring() const {
    long L = conductor > 0 ? conductor : chi.ring_conductor();
    return CycRing::residue(L, p, M);
}

std::vector<std::vector<mpz_class>> stirling_first(long K) {
    std::vector<std::vector<mpz_class>> s(K + 1);
    s[0] = {1};
    for (long m = 0; m < K; ++m) {
        s[m + 1].assign(m + 2, 0);
        for (long j = 0; j <= m + 1; ++j) {
            if (j > 0) s[m + 1][j] += s[m][j - 1];
            if (j <= m) s[m + 1][j] -= m * s[m][j];
        }
    }
    return s;
}

static QExpansion binomial_numerator(const MomentSequence& b,
                                     const std::vector<std::vector<mpz_class>>& s, long m) {
    const auto& ring = b.moments[0].ring();
    QExpansion num(ring, b.moments[0].q_prec());
    for (long j = 0; j <= m; ++j) {
        if (s[m][j] == 0) continue;
        num = num + b.moments[j].scale(CycScalar::from_int(ring, s[m][j]));
    }
    return num;
}

MahlerTable mahler_from_moments(const MomentSequence& b, long M) {
    if (b.moments.empty()) throw ParameterError("empty moment sequence");
    const auto& ring = b.moments[0].ring();
    if (ring->flavor() != Flavor::Residue)
        throw RingMismatchError("Mahler transform needs residue flavor");
    long K = b.K();
    long p = ring->p();
    long Mwork = ring->precision();
    long vK = legendre_vp_factorial(K, p);
    if (Mwork < M + vK)
        throw InsufficientPrecisionError("moment precision " + std::to_string(Mwork) +
                                         " < " + std::to_string(M + vK) +
                                         " needed for K = " + std::to_string(K));
    auto s = stirling_first(K);
    auto target = CycRing::residue(ring->conductor(), p, M);
    MahlerTable out;
    mpz_class fact = 1;
    for (long m = 0; m <= K; ++m) {
        if (m > 0) fact *= m;
        QExpansion num = binomial_numerator(b, s, m);
        long v = legendre_vp_factorial(m, p);
        long got = num.valuation();
        out.slack.push_back(got - v);
        if (got < v) {
            // non-integral entry: record the unreduced numerator at target precision
            out.values.push_back(num.truncate_precision(M));
            continue;
        }
        mpz_class unit = fact;
        for (long i = 0; i < v; ++i) unit /= p;
        QExpansion w = divide_series_exact_p(num, v).truncate_precision(M);
        CycScalar uinv = CycScalar::from_int(target, unit).inverse();
        out.values.push_back(w.scale(uinv));
    }
    return out;
}

KummerZpReport kummer_check_zp(const MomentSequence& b, long M) {
    KummerZpReport rep;
    if (b.moments.empty()) return rep;
    const auto& ring = b.moments[0].ring();
    long K = b.K();
    long p = ring->p();
    long Mwork = ring->precision();
    long vK = legendre_vp_factorial(K, p);
    if (Mwork < M + vK)
        throw InsufficientPrecisionError("moment precision too low for Kummer check");
    auto s = stirling_first(K);
    for (long m = 0; m <= K && rep.pass; ++m) {
        long v = legendre_vp_factorial(m, p);
        if (v == 0) continue;
        QExpansion num = binomial_numerator(b, s, m);
        for (long q = 0; q <= num.q_prec() && rep.pass; ++q) {
            if (num.coeff(q).divisible_by(v)) continue;
            rep.pass = false;
            rep.fail_m = m;
            rep.fail_q = q;
            const auto& zc = num.coeff(q).residue_coords();
            for (long i = 0; i < (long)zc.size(); ++i) {
                if (vp_mpz(zc[i], p, v) < v) {
                    rep.fail_coord = i;
                    break;
                }
            }
        }
    }
    return rep;
}

KummerUnitsReport kummer_check_units(const MomentSequence& b) {
    KummerUnitsReport rep;
    if (b.moments.empty()) return rep;
    long K = b.K();
    long p = b.moments[0].ring()->p();
    long Mwork = b.moments[0].ring()->precision();
    for (long k = 1; k <= K; ++k) {
        for (long k2 = k + 1; k2 <= K; ++k2) {
            long diff = k2 - k;
            if (diff % (p - 1) != 0) continue;
            long r = 0;
            long d = diff;
            while (d % p == 0) {
                d /= p;
                ++r;
            }
            long m = std::min(r + 1, Mwork);
            ++rep.pairs_checked;
            if (b.moments[k].congruent(b.moments[k2], m)) continue;
            rep.pass = false;
            long q_fail = -1;
            long Q = std::min(b.moments[k].q_prec(), b.moments[k2].q_prec());
            for (long q = 0; q <= Q; ++q) {
                if (!b.moments[k].coeff(q).congruent(b.moments[k2].coeff(q), m)) {
                    q_fail = q;
                    break;
                }
            }
            rep.failures.push_back({k, k2, r, q_fail});
        }
    }
    return rep;
}

QExpansion h_moment(const MeasureParams& mp, const mpz_class& k, long a, long b,
                    bool restricted) {
    auto ring = mp.ring();
    QExpansion g = eisenstein_chi(k + 1, mp.chi, mp.Q, ring);
    mpz_class ak = pow_reduce(a, k + 1, mp.p, mp.M);
    CycScalar factor =
        CycScalar::from_int(ring, 1) - CycScalar::from_int(ring, ak) * mp.chi.eval(b, ring);
    QExpansion f = g.scale(factor);
    if (restricted) f = stabilize_frob(f, k + 1, mp.p);
    return f;
}

QExpansion j_tilde_moment(const MeasureParams& mp, const mpz_class& k, long c) {
    auto ring = mp.ring();
    if (k == 0) return QExpansion(ring, mp.Q);
    QExpansion g = eisenstein_chi(k, mp.chi, mp.Q, ring);
    mpz_class ck = pow_reduce(c, k, mp.p, mp.M);
    CycScalar factor = CycScalar::from_int(ring, 1 - ck);
    return stabilize_frob(g.scale(factor), k, mp.p);
}

QExpansion nu_bar_moment(const MeasureParams& mp, const mpz_class& k, long c) {
    auto ring = mp.ring();
    const auto& triv = trivial_char_mod1();
    if (k == 0 || mpz_odd_p(k.get_mpz_t())) {
        QExpansion z(ring, mp.Q);
        z.nebentypus = triv;
        return z;
    }
    // fold (1 - c^k) into the constant: small k exactly, large k via the
    // regularized zeta values (zeta(1-k) alone need not be p-integral)
    CycScalar constant;
    if (k <= 64) {
        auto rat = CycRing::rational(ring->conductor());
        mpz_class ckz;
        mpz_pow_ui(ckz.get_mpz_t(), mpz_class(c).get_mpz_t(), k.get_ui());
        CycScalar lv = l_value(triv, (long)k.get_si(), rat);
        constant = (CycScalar::from_int(rat, 1 - ckz) * lv).reduce(ring);
    } else {
        constant = CycScalar::from_int(ring, stabilized_zeta(k, c, mp.p, mp.M));
    }
    QExpansion g = eisenstein_chi_with_constant(k, triv, mp.Q, ring, constant);
    mpz_class ck = pow_reduce(c, k, mp.p, mp.M);
    CycScalar factor = CycScalar::from_int(ring, 1 - ck);
    for (long n = 1; n <= g.q_prec(); ++n) g.coeff(n) = factor * g.coeff(n);
    return stabilize_frob(g, k, mp.p);
}

QExpansion mu_moment(const MeasureParams& mp, const mpz_class& k, long c) {
    return nu_bar_moment(mp, k, c) + j_tilde_moment(mp, k, c);
}

static MomentSequence collect(const MeasureParams& mp, long K, Domain dom,
                              const std::string& tag,
                              const std::function<QExpansion(long)>& at) {
    MomentSequence seq;
    seq.domain = dom;
    seq.provenance = tag;
    seq.p = mp.p;
    seq.M = mp.M;
    seq.Q = mp.Q;
    seq.moments.reserve(K + 1);
    for (long k = 0; k <= K; ++k) seq.moments.push_back(at(k));
    return seq;
}

MomentSequence eisenstein_moments(const MeasureParams& mp, long a, long b, long K,
                                  bool restricted) {
    return collect(mp, K, restricted ? Domain::ZpUnits : Domain::Zp,
                   restricted ? "H_restricted" : "H",
                   [&](long k) { return h_moment(mp, k, a, b, restricted); });
}

MomentSequence moments_j_tilde(const MeasureParams& mp, long c, long K) {
    return collect(mp, K, Domain::ZpUnits, "J_tilde",
                   [&](long k) { return j_tilde_moment(mp, k, c); });
}

MomentSequence moments_nu_bar(const MeasureParams& mp, long c, long K) {
    return collect(mp, K, Domain::ZpUnits, "nu_bar",
                   [&](long k) { return nu_bar_moment(mp, k, c); });
}

MomentSequence moments_mu(const MeasureParams& mp, long c, long K) {
    return collect(mp, K, Domain::ZpUnits, "mu",
                   [&](long k) { return mu_moment(mp, k, c); });
}

MeanLimit mean_via_limit(const std::function<QExpansion(const mpz_class&)>& moment_at, long p,
                         long r_max) {
    MeanLimit out;
    mpz_class e = p - 1;
    for (long r = 0; r <= r_max; ++r) {
        out.approximations.push_back(moment_at(e));
        out.valuations.push_back(out.approximations.back().valuation());
        e *= p;
    }
    for (long r = 0; r + 1 <= r_max; ++r)
        out.diff_valuations.push_back(
            (out.approximations[r + 1] - out.approximations[r]).valuation());
    return out;
}

mpz_class iwasawa_log(long c, long p, long M) {
    if (c % p == 0) throw ParameterError("iwasawa_log needs a p-adic unit");
    mpz_class cp;
    mpz_pow_ui(cp.get_mpz_t(), mpz_class(c).get_mpz_t(), (unsigned long)(p - 1));
    mpz_class z = cp - 1; // in pZ_p
    mpz_class pM;
    mpz_pow_ui(pM.get_mpz_t(), mpz_class(p).get_mpz_t(), (unsigned long)M);
    // v_p(z^n / n) >= n - log_p(n), so 2M + 4 terms are always enough
    long terms = 2 * M + 4;
    mpq_class acc = 0;
    mpz_class zn = 1;
    for (long n = 1; n <= terms; ++n) {
        zn *= z;
        mpq_class term(zn, mpz_class(n));
        term.canonicalize();
        if (n % 2 == 0)
            acc -= term;
        else
            acc += term;
    }
    // reduce the exact rational mod p^M (denominator is prime to p)
    mpz_class num = acc.get_num(), den = acc.get_den(), dinv, r;
    if (!mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), pM.get_mpz_t()))
        throw NonUnitError("denominator not prime to p in iwasawa_log");
    r = num * dinv;
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), pM.get_mpz_t());
    return r;
}

} // namespace pmf
