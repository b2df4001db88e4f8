#include "pmf/operators.hpp"

namespace pmf {

namespace {

const DirichletCharacter& require_tag(const QExpansion& f) {
    if (!f.nebentypus)
        throw UntaggedFormError("operator requires a nebentypus-tagged form");
    return *f.nebentypus;
}

CycScalar p_power_scalar(const CycRingPtr& ring, long p, long k) {
    // p^{k-1} as a ring scalar
    if (k < 1) throw ParameterError("weight must be >= 1 for integral p^{k-1}");
    if (ring->flavor() == Flavor::Residue)
        return CycScalar::from_int(ring, pow_reduce(p, k - 1, ring->p(), ring->precision()));
    mpz_class v;
    mpz_pow_ui(v.get_mpz_t(), mpz_class(p).get_mpz_t(), (unsigned long)(k - 1));
    return CycScalar::from_int(ring, v);
}

} // namespace

QExpansion diamond(const QExpansion& f, const mpz_class& n) {
    const auto& chi = require_tag(f);
    if (mpz_class(gcd_long((long)mpz_fdiv_ui(n.get_mpz_t(), (unsigned long)chi.modulus),
                           chi.modulus)) != 1 && chi.modulus > 1)
        throw ParameterError("diamond operator needs n prime to the level");
    QExpansion r = f.scale(chi.eval(n, f.ring()));
    r.weight = f.weight;
    r.level = f.level;
    r.nebentypus = f.nebentypus;
    return r;
}

QExpansion frob(const QExpansion& f, long p) {
    const auto& chi = require_tag(f);
    if (chi.modulus % p == 0) throw ParameterError("frob needs p prime to the level");
    CycScalar chip = chi.eval(p, f.ring());
    QExpansion r(f.ring(), f.q_prec() * p);
    for (long n = 0; n <= f.q_prec(); ++n)
        r.coeff(n * p) = chip * f.coeff(n);
    r.weight = f.weight;
    r.level = f.level;
    r.nebentypus = f.nebentypus;
    return r;
}

QExpansion atkin_u(const QExpansion& f, long p) {
    const auto& chi = require_tag(f);
    if (chi.modulus % p == 0) throw ParameterError("atkin_u needs p prime to the level");
    // chi(p)^{-1} = chi(p^{-1} mod N)
    CycScalar chip_inv = CycScalar::from_int(f.ring(), 1);
    if (chi.modulus > 1) {
        mpz_class pinv;
        mpz_invert(pinv.get_mpz_t(), mpz_class(p).get_mpz_t(), mpz_class(chi.modulus).get_mpz_t());
        chip_inv = chi.eval(pinv, f.ring());
    }
    QExpansion r(f.ring(), f.q_prec() / p);
    for (long n = 0; n <= r.q_prec(); ++n)
        r.coeff(n) = chip_inv * f.coeff(n * p);
    r.weight = f.weight;
    r.level = f.level;
    r.nebentypus = f.nebentypus;
    return r;
}

QExpansion hecke_tp(const QExpansion& f, long k, long p) {
    QExpansion a = frob(f, p).scale(p_power_scalar(f.ring(), p, k));
    QExpansion b = diamond(atkin_u(f, p), p);
    QExpansion r = a + b; // truncates to floor(Q/p)
    r.weight = f.weight;
    r.level = f.level;
    r.nebentypus = f.nebentypus;
    return r;
}

QExpansion hecke_tp_classical(const QExpansion& f, long k, long p) {
    const auto& chi = require_tag(f);
    CycScalar chip = chi.eval(p, f.ring());
    CycScalar pk = p_power_scalar(f.ring(), p, k);
    QExpansion r(f.ring(), f.q_prec() / p);
    for (long n = 0; n <= r.q_prec(); ++n) {
        CycScalar c = f.coeff(n * p); // a_{np}
        if (n % p == 0)
            c = c + pk * chip * f.coeff(n / p); // p^{k-1} <p> a_{n/p} at q^n
        r.coeff(n) = c;
    }
    r.weight = f.weight;
    r.level = f.level;
    r.nebentypus = f.nebentypus;
    return r;
}

QExpansion p_stabilize(const QExpansion& f, long k, long p) {
    if (k < 1 && f.ring()->flavor() == Flavor::Residue)
        throw ParameterError("p-stabilization needs k >= 1 in residue flavor");
    if (k < 1) throw ParameterError("p-stabilization needs k >= 1");
    QExpansion r = f - frob(f, p).scale(p_power_scalar(f.ring(), p, k));
    r.weight = f.weight;
    r.level = f.level;
    r.nebentypus = f.nebentypus;
    return r;
}

QExpansion ell2_apply(const QExpansion& f, long k, long p) {
    QExpansion r = f - hecke_tp(f, k, p) + diamond(f, p).scale(p_power_scalar(f.ring(), p, k));
    r.weight = f.weight;
    r.level = f.level;
    r.nebentypus = f.nebentypus;
    return r;
}

KernelReport kernel_check_atkin(const QExpansion& f, long p, long q_eff, long M) {
    QExpansion g = f - diamond(atkin_u(f, p), p);
    KernelReport rep;
    rep.q_checked = std::min(q_eff, g.q_prec());
    rep.pass = true;
    for (long n = 0; n <= rep.q_checked; ++n) {
        bool ok;
        if (g.ring()->flavor() == Flavor::Residue)
            ok = g.coeff(n).divisible_by(M);
        else
            ok = g.coeff(n).is_zero();
        if (!ok) {
            rep.pass = false;
            rep.first_fail_index = n;
            break;
        }
    }
    return rep;
}

} // namespace pmf
