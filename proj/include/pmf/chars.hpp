#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pmf/cyclo.hpp"

namespace pmf {

/// A Dirichlet character mod N, stored as exponents of zeta_m (m = order)
/// on each unit residue class. Ring-independent; evaluation picks the
/// representation of zeta_m inside a given CycRing (which needs m | L).
class DirichletCharacter {
public:
    long modulus = 1;
    long order = 1;
    int parity = 1; // chi(-1)
    long index = 0; // position in the deterministic enumeration
    std::vector<long> exps; // size N; exps[u] in [0, order) for units, -1 otherwise

    bool is_trivial() const { return order == 1; }

    /// chi(n) as an element of `ring`; zero when gcd(n, N) > 1.
    CycScalar eval(const mpz_class& n, const CycRingPtr& ring) const;

    /// exponent of zeta_order at n, or -1 when gcd(n, N) > 1
    long exp_at(const mpz_class& n) const;

    std::string id() const { return std::to_string(modulus) + ":" + std::to_string(index); }

    /// Smallest conductor of a cyclotomic ring housing both zeta_N and all values.
    long ring_conductor() const { return modulus / gcd_long(modulus, order) * order; }
};

/// All phi(N) characters mod N, ordered by exponent vector on fixed generators.
std::vector<DirichletCharacter> enumerate_characters(long N);

/// Parse "N:index" or "N:quad" (the unique quadratic character, when unique).
DirichletCharacter parse_character(const std::string& name);

/// Ordinary Bernoulli numbers B_0..B_n (B_1 = -1/2).
std::vector<mpq_class> bernoulli_numbers(long n);

/// Generalized Bernoulli number B_n^chi by the Bernoulli-polynomial closed form,
/// as an exact element of the rational-flavor `ring` (needs order | L).
CycScalar gen_bernoulli(const DirichletCharacter& chi, long n, const CycRingPtr& ring);

/// L(1-k, chi) = -B_k^chi / k, exact rational flavor.
CycScalar l_value(const DirichletCharacter& chi, long k, const CycRingPtr& ring);

/// (1 - chi(c) c^k) B_k^chi / k mod p^t via the c-regularized Bernoulli
/// measure: sum over a < N p^t of chi(a) a^{k-1} E_c(a) with
/// E_c(a) = (a - c<c^{-1}a>)/F + (c-1)/2. Works for arbitrarily large k.
CycScalar stabilized_bk_over_k(const DirichletCharacter& chi, const mpz_class& k, long c,
                               long p, long t, const CycRingPtr& out_ring);

/// L(1-k, chi) mod p^M for a nontrivial character, any k >= 1.
/// Small k go through the exact rational path; large k through the
/// regularized measure with an auxiliary unit twist.
CycScalar l_value_residue(const DirichletCharacter& chi, const mpz_class& k,
                          const CycRingPtr& residue_ring);

/// (1 - c^k) * zeta(1-k) mod p^M for the trivial character mod 1 (level 1).
mpz_class stabilized_zeta(const mpz_class& k, long c, long p, long M);

} // namespace pmf
