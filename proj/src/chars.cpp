#include "pmf/chars.hpp"

#include <algorithm>
#include <numeric>

namespace pmf {

namespace {

long lcm_long(long a, long b) { return a / gcd_long(a, b) * b; }

long powmod_long(long b, long e, long m) {
    unsigned __int128 acc = 1, base = ((b % m) + m) % m;
    while (e) {
        if (e & 1) acc = acc * base % (unsigned long)m;
        base = base * base % (unsigned long)m;
        e >>= 1;
    }
    return (long)acc;
}

long multiplicative_order(long g, long n) {
    long o = 1, x = g % n;
    while (x != 1) { x = (long)((unsigned __int128)x * g % (unsigned long)n); ++o; }
    return o;
}

long primitive_root(long q, long e) {
    // primitive root mod q^e for odd prime q
    long qe = 1;
    for (long i = 0; i < e; ++i) qe *= q;
    long phi_q = q - 1;
    for (long g = 2; g < q; ++g) {
        if (multiplicative_order(g, q) == phi_q) {
            long target = euler_phi(qe);
            if (multiplicative_order(g, qe) == target) return g;
            if (multiplicative_order(g + q, qe) == target) return g + q;
        }
    }
    throw ParameterError("no primitive root found");
}

struct UnitGroup {
    long N;
    std::vector<long> gens;   // generators as residues mod N
    std::vector<long> orders; // cyclic factor orders
    std::vector<std::vector<long>> dlog; // dlog[u] = exponent tuple, empty for non-units
};

UnitGroup unit_group(long N) {
    UnitGroup G;
    G.N = N;
    if (N <= 2) {
        // trivial group
    } else {
        // factor N and pick generators per prime power via CRT
        long n = N;
        std::vector<std::pair<long, long>> pps; // (q^e, generator residue mod q^e) pairs as lists
        std::vector<long> local_gens, local_mods, local_orders;
        for (long q = 2; q * q <= n || n > 1; ++q) {
            long use_q = (q * q <= n) ? q : n;
            if (n % use_q != 0) continue;
            long e = 0, qe = 1;
            while (n % use_q == 0) { n /= use_q; ++e; qe *= use_q; }
            if (use_q == 2) {
                if (e == 2) { local_gens.push_back(3); local_mods.push_back(4); local_orders.push_back(2); }
                else if (e >= 3) {
                    local_gens.push_back(qe - 1); local_mods.push_back(qe); local_orders.push_back(2);
                    local_gens.push_back(5); local_mods.push_back(qe); local_orders.push_back(qe / 4);
                }
                // e == 1 contributes nothing
            } else {
                long g = primitive_root(use_q, e);
                local_gens.push_back(g);
                local_mods.push_back(qe);
                local_orders.push_back(euler_phi(qe));
            }
            if (n == 1) break;
        }
        // lift each generator to a residue mod N that is 1 in the other factors
        for (size_t i = 0; i < local_gens.size(); ++i) {
            long m = local_mods[i];
            long lifted = 0;
            for (long x = 0; x < N; ++x) {
                if (gcd_long(x, N) != 1) continue;
                if (x % m != local_gens[i] % m) continue;
                bool ok = true;
                for (size_t j = 0; j < local_mods.size(); ++j) {
                    // other prime-power blocks (may share m when N = 2^e with two gens)
                    if (j == i) continue;
                    long mj = local_mods[j];
                    if (mj == m) continue; // handled jointly below for 2^e
                    if (x % mj != 1) { ok = false; break; }
                }
                if (ok) { lifted = x; break; }
            }
            G.gens.push_back(lifted);
            G.orders.push_back(local_orders[i]);
        }
        // special handling when N has a 2^e (e>=3) block: the two generators
        // share the modulus; redo the lift requiring the other 2-part gen slot to be 1
        // (the simple scan above already yields a valid generating set for the
        //  product because <-1> x <5> generate (Z/2^e)^x and CRT is direct).
    }
    // discrete logs by enumerating the full group
    G.dlog.assign(N > 0 ? N : 1, {});
    size_t r = G.gens.size();
    std::vector<long> tuple(r, 0);
    long total = 1;
    for (long o : G.orders) total *= o;
    long elem = 1 % N;
    if (N == 1) { G.dlog[0] = {}; G.dlog[0] = std::vector<long>(); }
    // iterate tuples in mixed radix, maintaining the group element
    for (long cnt = 0; cnt < total; ++cnt) {
        long u = 1 % N;
        // compute product for this tuple (group is small; direct powmod is fine)
        for (size_t i = 0; i < r; ++i)
            u = (long)((unsigned __int128)u * powmod_long(G.gens[i], tuple[i], N) % (unsigned long)(N == 0 ? 1 : N));
        if (N == 1) u = 0;
        G.dlog[u] = tuple;
        // increment tuple
        for (size_t i = 0; i < r; ++i) {
            if (++tuple[i] < G.orders[i]) break;
            tuple[i] = 0;
        }
    }
    (void)elem;
    return G;
}

} // namespace

std::vector<DirichletCharacter> enumerate_characters(long N) {
    if (N < 1) throw ParameterError("modulus must be positive");
    UnitGroup G = unit_group(N);
    size_t r = G.gens.size();
    long E = 1;
    for (long o : G.orders) E = lcm_long(E, o);
    long total = 1;
    for (long o : G.orders) total *= o;
    if (r == 0) total = 1;

    std::vector<DirichletCharacter> out;
    std::vector<long> t(r, 0);
    for (long cnt = 0; cnt < total; ++cnt) {
        DirichletCharacter chi;
        chi.modulus = N;
        chi.index = cnt;
        // order of the character
        long m = 1;
        for (size_t i = 0; i < r; ++i) {
            long d = G.orders[i];
            long oi = d / gcd_long(d, t[i]);
            m = lcm_long(m, oi);
        }
        chi.order = m;
        chi.exps.assign(std::max(N, 1L), -1);
        for (long u = 0; u < std::max(N, 1L); ++u) {
            if (N == 1) { chi.exps[0] = 0; break; }
            if (gcd_long(u, N) != 1) continue;
            const auto& dl = G.dlog[u];
            long eE = 0; // exponent of zeta_E
            for (size_t i = 0; i < r; ++i)
                eE = (eE + t[i] * (E / G.orders[i]) % E * dl[i]) % E;
            // convert to exponent of zeta_m (E/m divides eE)
            chi.exps[u] = (eE / (E / m)) % m;
        }
        long neg = (N - 1) % N;
        chi.parity = (N <= 2 || chi.exps[neg] == 0) ? 1 : -1;
        out.push_back(std::move(chi));
        for (size_t i = 0; i < r; ++i) {
            if (++t[i] < G.orders[i]) break;
            t[i] = 0;
        }
    }
    return out;
}

long DirichletCharacter::exp_at(const mpz_class& n) const {
    long u = (long)mpz_fdiv_ui(n.get_mpz_t(), (unsigned long)modulus);
    return exps[u];
}

CycScalar DirichletCharacter::eval(const mpz_class& n, const CycRingPtr& ring) const {
    long e = exp_at(n);
    if (e < 0) return CycScalar(ring); // zero
    long L = ring->conductor();
    if (L % order != 0) throw ParameterError("ring conductor does not contain the character values");
    return CycScalar::root_of_unity(ring, e * (L / order));
}

DirichletCharacter parse_character(const std::string& name) {
    auto pos = name.find(':');
    if (pos == std::string::npos) throw ParameterError("character name must be N:index or N:quad");
    long N = std::stol(name.substr(0, pos));
    std::string sel = name.substr(pos + 1);
    auto all = enumerate_characters(N);
    if (sel == "quad") {
        const DirichletCharacter* found = nullptr;
        for (const auto& c : all) {
            if (c.order == 2) {
                if (found) throw ParameterError("quadratic character mod " + std::to_string(N) + " is not unique");
                found = &c;
            }
        }
        if (!found) throw ParameterError("no quadratic character mod " + std::to_string(N));
        return *found;
    }
    long idx = std::stol(sel);
    if (idx < 0 || idx >= (long)all.size()) throw ParameterError("character index out of range");
    return all[idx];
}

std::vector<mpq_class> bernoulli_numbers(long n) {
    std::vector<mpq_class> B;
    B.reserve(n + 1);
    B.push_back(mpq_class(1));
    for (long m = 1; m <= n; ++m) {
        // binom(m+1, j) for j = 0..m
        std::vector<mpz_class> row(m + 1);
        row[0] = 1;
        for (long j = 1; j <= m; ++j) {
            mpz_class b;
            mpz_bin_uiui(b.get_mpz_t(), (unsigned long)(m + 1), (unsigned long)j);
            row[j] = b;
        }
        mpq_class s(0);
        for (long j = 0; j < m; ++j) s += mpq_class(row[j]) * B[j];
        mpq_class bm = -s / mpq_class(m + 1);
        bm.canonicalize();
        B.push_back(bm);
    }
    return B;
}

CycScalar gen_bernoulli(const DirichletCharacter& chi, long n, const CycRingPtr& ring) {
    if (n < 1) throw ParameterError("gen_bernoulli requires n >= 1");
    if (ring->flavor() != Flavor::Rational) throw ParameterError("gen_bernoulli needs rational flavor");
    long N = chi.modulus;
    auto B = bernoulli_numbers(n);
    CycScalar total(ring);
    for (long r = 1; r <= N; ++r) {
        CycScalar ch = chi.eval(r, ring);
        if (ch.is_zero()) continue;
        // B_n(r/N) = sum_k binom(n,k) B_k (r/N)^{n-k}
        mpq_class x(r, N);
        x.canonicalize();
        mpq_class val(0), xp(1);
        // evaluate with Horner on k descending: sum_{k=0}^{n} binom(n,k) B_k x^{n-k}
        for (long k = 0; k <= n; ++k) {
            mpz_class bk;
            mpz_bin_uiui(bk.get_mpz_t(), (unsigned long)n, (unsigned long)k);
            mpq_class term = mpq_class(bk) * B[k];
            // multiply by x^{n-k}
            mpq_class power(1);
            mpq_class base = x;
            long e = n - k;
            while (e) { if (e & 1) power *= base; base *= base; e >>= 1; }
            val += term * power;
        }
        val.canonicalize();
        total = total + ch * CycScalar::from_rational(ring, val);
        (void)xp;
    }
    // N^{n-1}
    mpq_class scale;
    if (n >= 1) {
        mpz_class Nn;
        mpz_ui_pow_ui(Nn.get_mpz_t(), (unsigned long)N, (unsigned long)(n - 1));
        scale = mpq_class(Nn);
    }
    return total * CycScalar::from_rational(ring, scale);
}

CycScalar l_value(const DirichletCharacter& chi, long k, const CycRingPtr& ring) {
    if (k < 1) throw ParameterError("l_value requires k >= 1");
    CycScalar bk = gen_bernoulli(chi, k, ring);
    return bk * CycScalar::from_rational(ring, mpq_class(-1, k));
}

// ---- regularized Bernoulli measure sums ---------------------------------

namespace {

using u64 = unsigned long long;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return (u64)((u128)a * b % m); }

u64 powmod_u64(u64 b, const mpz_class& e, u64 m) {
    mpz_class er = e;
    u64 acc = 1 % m, base = b % m;
    // square-and-multiply over the bits of e
    size_t bits = mpz_sizeinbase(er.get_mpz_t(), 2);
    for (long i = (long)bits - 1; i >= 0; --i) {
        acc = mulmod(acc, acc, m);
        if (mpz_tstbit(er.get_mpz_t(), (mp_bitcnt_t)i)) acc = mulmod(acc, base, m);
    }
    return acc;
}

} // namespace

CycScalar stabilized_bk_over_k(const DirichletCharacter& chi, const mpz_class& k, long c,
                               long p, long t, const CycRingPtr& out_ring) {
    if (out_ring->flavor() != Flavor::Residue || out_ring->p() != p)
        throw ParameterError("stabilized_bk_over_k needs a residue ring at prime p");
    if (out_ring->precision() > t)
        throw ParameterError("requested precision exceeds the level of the measure sum");
    long N = chi.modulus;
    if (c <= 1 || gcd_long(c, p) != 1 || gcd_long(c, N) != 1)
        throw ParameterError("regularization unit c must be > 1 and coprime to Np");
    mpz_class pt_z;
    mpz_ui_pow_ui(pt_z.get_mpz_t(), (unsigned long)p, (unsigned long)t);
    if (!pt_z.fits_ulong_p() || mpz_class(pt_z * N) > mpz_class("9223372036854775807"))
        throw ParameterError("measure level too large for the 64-bit kernel");
    u64 pt = (u64)pt_z.get_ui();
    u64 F = (u64)N * pt;
    mpz_class cinv_z;
    if (!mpz_invert(cinv_z.get_mpz_t(), mpz_class(c).get_mpz_t(), mpz_class((unsigned long)F).get_mpz_t()))
        throw ParameterError("c not invertible mod the level");
    u64 cinv = (u64)cinv_z.get_ui();

    // exponent k-1, reduced for unit bases
    mpz_class e = k - 1;
    mpz_class lam;
    mpz_ui_pow_ui(lam.get_mpz_t(), (unsigned long)p, (unsigned long)(t - 1));
    lam *= (p - 1);
    mpz_class e_red = e % lam;
    if (e_red == 0 && e != 0) e_red = lam;

    // (c-1)/2 mod p^t
    mpz_class inv2;
    mpz_invert(inv2.get_mpz_t(), mpz_class(2).get_mpz_t(), pt_z.get_mpz_t());
    u64 half_c = mulmod((u64)((c - 1) % (long)pt + pt) % pt, (u64)inv2.get_ui(), pt);

    std::vector<u64> S(N, 0); // per residue class mod N
    bool e_small = (e < t);
    unsigned long e_small_v = e_small ? e.get_ui() : 0;
    for (u64 a = 0; a < F; ++a) {
        long r = (long)(a % (u64)N);
        if (N > 1 && chi.exps[r] < 0) continue;
        u64 apow;
        if (a % (u64)p == 0) {
            if (!e_small) continue; // a^{k-1} = 0 mod p^t
            // small exponent: compute directly
            u64 acc = 1 % pt, base = a % pt;
            unsigned long ee = e_small_v;
            while (ee) { if (ee & 1) acc = mulmod(acc, base, pt); base = mulmod(base, base, pt); ee >>= 1; }
            apow = acc;
            if (e == 0) apow = 1 % pt;
        } else {
            apow = powmod_u64(a % pt, e_red, pt);
        }
        if (apow == 0) continue;
        u64 ca = (u64)((u128)cinv * a % F);
        // E_c(a) integer part: (a - c*ca)/F, exact
        __int128 diff = (__int128)a - (__int128)c * ca;
        __int128 quot = diff / (__int128)F; // exact: diff is a multiple of F
        long long qmod = (long long)(quot % (__int128)pt);
        u64 ec = (u64)((qmod % (long long)pt + (long long)pt) % (long long)pt);
        ec = (ec + half_c) % pt;
        S[r] = (S[r] + mulmod(apow, ec, pt)) % pt;
    }

    CycScalar total(out_ring);
    if (N == 1) {
        total = CycScalar::from_int(out_ring, mpz_class((unsigned long)S[0]) % out_ring->modulus());
    } else {
        for (long r = 0; r < N; ++r) {
            if (chi.exps[r] < 0 || S[r] == 0) continue;
            CycScalar ch = chi.eval(r, out_ring);
            total = total + ch * CycScalar::from_int(out_ring, mpz_class((unsigned long)S[r]) % out_ring->modulus());
        }
    }
    return total;
}

CycScalar l_value_residue(const DirichletCharacter& chi, const mpz_class& k,
                          const CycRingPtr& ring) {
    if (ring->flavor() != Flavor::Residue) throw ParameterError("l_value_residue needs residue flavor");
    if (k < 1) throw ParameterError("l_value_residue requires k >= 1");
    long p = ring->p(), M = ring->precision();
    if (k <= 64) {
        auto rat = CycRing::rational(ring->conductor());
        return l_value(chi, (long)k.get_si(), rat).reduce(ring);
    }
    if (chi.is_trivial() && chi.modulus == 1)
        throw ParameterError("large-weight zeta values need the stabilized form");
    long N = chi.modulus;
    long t = M + 2;
    mpz_class pt;
    mpz_ui_pow_ui(pt.get_mpz_t(), (unsigned long)p, (unsigned long)t);
    // c0 = 1 mod p^t, g mod N with chi(g) != 1; then 1 - chi(c0)c0^k = 1 - chi(g)
    for (long g = 2; g < N + (long)2; ++g) {
        long gr = g % N;
        if (gcd_long(gr, N) != 1 || chi.exps[gr] <= 0) continue;
        // CRT lift
        mpz_class ptmodN = pt % N;
        mpz_class inv;
        if (!mpz_invert(inv.get_mpz_t(), ptmodN.get_mpz_t(), mpz_class(N).get_mpz_t())) continue;
        mpz_class s = ((mpz_class(gr) - 1) * inv) % N;
        if (s < 0) s += N;
        mpz_class c0 = 1 + pt * s;
        if (c0 <= 1) continue;
        try {
            auto sum_ring = CycRing::residue(ring->conductor(), p, t);
            CycScalar S = stabilized_bk_over_k(chi, k, (long)c0.get_si(), p, t, sum_ring);
            CycScalar u = CycScalar::from_int(sum_ring, 1) - chi.eval(c0, sum_ring);
            CycScalar L = -(S * u.inverse());
            return L.truncate_precision(ring);
        } catch (const NonUnitError&) {
            continue;
        }
    }
    throw ParameterError("no usable regularization twist found for this character");
}

mpz_class stabilized_zeta(const mpz_class& k, long c, long p, long M) {
    if (k < 1) throw ParameterError("stabilized_zeta requires k >= 1");
    mpz_class pM;
    mpz_ui_pow_ui(pM.get_mpz_t(), (unsigned long)p, (unsigned long)M);
    if (k <= 64) {
        long kk = (long)k.get_si();
        auto B = bernoulli_numbers(kk);
        mpz_class ck;
        mpz_pow_ui(ck.get_mpz_t(), mpz_class(c).get_mpz_t(), (unsigned long)kk);
        mpq_class val = (mpq_class(1) - mpq_class(ck)) * (-B[kk] / mpq_class(kk));
        val.canonicalize();
        mpz_class den = val.get_den(), inv;
        if (!mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pM.get_mpz_t()))
            throw DenominatorNotPrimeError("stabilized zeta value not p-integral");
        mpz_class r = ((val.get_num() % pM) * inv) % pM;
        if (r < 0) r += pM;
        return r;
    }
    long t = M + 2;
    DirichletCharacter triv;
    triv.modulus = 1;
    triv.order = 1;
    triv.parity = 1;
    triv.exps = {0};
    auto sum_ring = CycRing::residue(1, p, t);
    CycScalar S = stabilized_bk_over_k(triv, k, c, p, t, sum_ring);
    mpz_class r = (-S).residue_coords()[0] % pM;
    if (r < 0) r += pM;
    return r;
}

} // namespace pmf
