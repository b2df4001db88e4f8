#include "pmf/eisenstein.hpp"

namespace pmf {

CycScalar eisenstein_divisor_sum(long n, const mpz_class& k, const DirichletCharacter& chi,
                                 const CycRingPtr& ring) {
    CycScalar s(ring);
    mpz_class e = k - 1;
    for (long d : divisors(n)) {
        CycScalar ch = chi.eval(d, ring);
        if (ch.is_zero()) continue;
        CycScalar dk;
        if (ring->flavor() == Flavor::Residue) {
            dk = CycScalar::from_int(ring, pow_reduce(d, e, ring->p(), ring->precision()));
        } else {
            if (!e.fits_slong_p() || e > 4096)
                throw ParameterError("weight too large for rational-flavor divisor sums");
            mpz_class dp;
            mpz_pow_ui(dp.get_mpz_t(), mpz_class(d).get_mpz_t(), e.get_ui());
            dk = CycScalar::from_int(ring, dp);
        }
        s = s + ch * dk;
    }
    return s;
}

static bool parity_matches(const DirichletCharacter& chi, const mpz_class& k) {
    int km1 = mpz_odd_p(k.get_mpz_t()) ? -1 : 1;
    return chi.parity == km1;
}

QExpansion eisenstein_chi_with_constant(const mpz_class& k, const DirichletCharacter& chi,
                                        long Q, const CycRingPtr& ring,
                                        const CycScalar& constant) {
    if (k < 1) throw ParameterError("Eisenstein weight must be >= 1");
    QExpansion f(ring, Q);
    f.weight = k.fits_slong_p() ? std::optional<long>((long)k.get_si()) : std::nullopt;
    f.level = chi.modulus;
    f.nebentypus = chi;
    if (!parity_matches(chi, k)) return f; // zero series by the parity convention
    CycScalar two = CycScalar::from_int(ring, 2);
    f.coeff(0) = constant;
    for (long n = 1; n <= Q; ++n)
        f.coeff(n) = two * eisenstein_divisor_sum(n, k, chi, ring);
    return f;
}

QExpansion eisenstein_chi(const mpz_class& k, const DirichletCharacter& chi, long Q,
                          const CycRingPtr& ring) {
    if (k < 1) throw ParameterError("Eisenstein weight must be >= 1");
    if (!parity_matches(chi, k)) {
        QExpansion f(ring, Q);
        f.weight = k.fits_slong_p() ? std::optional<long>((long)k.get_si()) : std::nullopt;
        f.level = chi.modulus;
        f.nebentypus = chi;
        return f;
    }
    CycScalar constant;
    if (ring->flavor() == Flavor::Rational) {
        if (k > 64) throw ParameterError("weight too large for rational flavor");
        constant = l_value(chi, (long)k.get_si(), ring);
    } else {
        if (chi.is_trivial() && chi.modulus == 1 && k > 64)
            throw ParameterError("large-weight level-1 constants require a stabilized construction");
        if (k <= 64) {
            auto rat = CycRing::rational(ring->conductor());
            constant = l_value(chi, (long)k.get_si(), rat).reduce(ring);
        } else {
            constant = l_value_residue(chi, k, ring);
        }
    }
    return eisenstein_chi_with_constant(k, chi, Q, ring, constant);
}

} // namespace pmf
