#pragma once

#include "pmf/qseries.hpp"

namespace pmf {

/// Eisenstein series G_k^chi = L(1-k,chi) + 2 sum_{n>=1} q^n sum_{d|n} d^{k-1} chi(d),
/// tagged (weight k, level N, nebentypus chi). Returns the zero series when
/// chi(-1) != (-1)^k. The trivial character mod 1 yields the level-1 G_k with
/// constant zeta(1-k). In residue flavor, arbitrarily large weights are
/// supported (divisor sums via pow_reduce, constant via the regularized
/// Bernoulli measure when out of reach of exact arithmetic).
QExpansion eisenstein_chi(const mpz_class& k, const DirichletCharacter& chi, long Q,
                          const CycRingPtr& ring);

/// Same series with the constant term supplied by the caller (used by the
/// measure layer when a stabilization factor must be folded into the constant
/// before reduction is possible).
QExpansion eisenstein_chi_with_constant(const mpz_class& k, const DirichletCharacter& chi,
                                        long Q, const CycRingPtr& ring,
                                        const CycScalar& constant);

/// The divisor sum sum_{d|n} d^{k-1} chi(d) in `ring`.
CycScalar eisenstein_divisor_sum(long n, const mpz_class& k, const DirichletCharacter& chi,
                                 const CycRingPtr& ring);

} // namespace pmf
