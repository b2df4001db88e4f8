#pragma once

#include "pmf/qseries.hpp"

namespace pmf {

/// <n> f = chi(n) f on a nebentypus eigenform. Throws UntaggedFormError
/// when f carries no nebentypus tag.
QExpansion diamond(const QExpansion& f, const mpz_class& n);

/// (Frob f)(q) = sum <p> a_n q^{np}; usable precision grows to p * q_prec(f).
QExpansion frob(const QExpansion& f, long p);

/// Atkin operator: coefficient of q^n is chi(p)^{-1} a_{np}; precision floor(Q/p).
QExpansion atkin_u(const QExpansion& f, long p);

/// T_p = p^{k-1} Frob + <p> U.
QExpansion hecke_tp(const QExpansion& f, long k, long p);

/// Independent implementation of the classical q-expansion formula
/// T_p f(q) = p^{k-1} sum <p> a_n q^{pn} + sum a_{np} q^n, used as an oracle.
QExpansion hecke_tp_classical(const QExpansion& f, long k, long p);

/// p-stabilization f - p^{k-1} Frob f (the arithmetic effect of the
/// K(1)-local logarithm).
QExpansion p_stabilize(const QExpansion& f, long k, long p);

/// f - T_p f + p^{k-1} <p> f (the arithmetic effect of the K(2)-local
/// logarithm).
QExpansion ell2_apply(const QExpansion& f, long k, long p);

struct KernelReport {
    bool pass = false;
    long first_fail_index = -1; // q-index of the first violated coefficient
    long q_checked = 0;
};

/// Checks f - <p> U f == 0 mod p^M through q^{Q_eff}.
KernelReport kernel_check_atkin(const QExpansion& f, long p, long q_eff, long M);

} // namespace pmf
