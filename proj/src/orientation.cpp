#include "pmf/orientation.hpp"

#include "pmf/eisenstein.hpp"

namespace pmf {

namespace {

QExpansion q_one(const CycRingPtr& ring, long Q) {
    QExpansion f(ring, Q);
    f.coeff(0) = CycScalar::from_int(ring, 1);
    return f;
}

const DirichletCharacter& trivial_char_mod1() {
    static const DirichletCharacter chi = enumerate_characters(1)[0];
    return chi;
}

} // namespace

CharSeries::CharSeries(CycRingPtr ring, long D, long Q)
    : ring_(std::move(ring)), Qprec_(Q), t_(D + 1, QExpansion(ring_, Q)) {}

CharSeries CharSeries::one(const CycRingPtr& ring, long D, long Q) {
    CharSeries s(ring, D, Q);
    s.t_[0] = q_one(ring, Q);
    return s;
}

CharSeries CharSeries::variable(const CycRingPtr& ring, long D, long Q) {
    CharSeries s(ring, D, Q);
    if (D >= 1) s.t_[1] = q_one(ring, Q);
    return s;
}

CharSeries CharSeries::operator+(const CharSeries& o) const {
    CharSeries r = *this;
    for (long i = 0; i <= D(); ++i) r.t_[i] = r.t_[i] + o.t_[i];
    return r;
}

CharSeries CharSeries::operator-(const CharSeries& o) const {
    CharSeries r = *this;
    for (long i = 0; i <= D(); ++i) r.t_[i] = r.t_[i] - o.t_[i];
    return r;
}

CharSeries CharSeries::operator*(const CharSeries& o) const {
    CharSeries r(ring_, D(), Qprec_);
    for (long i = 0; i <= D(); ++i)
        for (long j = 0; i + j <= D(); ++j)
            r.t_[i + j] = r.t_[i + j] + t_[i] * o.t_[j];
    return r;
}

CharSeries CharSeries::scale(const CycScalar& s) const {
    CharSeries r = *this;
    for (auto& c : r.t_) c = c.scale(s);
    return r;
}

CharSeries CharSeries::pow(long n) const {
    CharSeries r = one(ring_, D(), Qprec_);
    for (long i = 0; i < n; ++i) r = r * *this;
    return r;
}

CharSeries CharSeries::inverse() const {
    if (!(t_[0] == q_one(ring_, Qprec_)))
        throw ParameterError("series inversion implemented for constant term 1");
    CharSeries rest = *this;
    rest.t_[0] = QExpansion(ring_, Qprec_);
    CharSeries acc = one(ring_, D(), Qprec_);
    CharSeries p = one(ring_, D(), Qprec_);
    for (long j = 1; j <= D(); ++j) {
        p = p * rest;
        acc = (j % 2 == 1) ? acc - p : acc + p;
    }
    return acc;
}

CharSeries CharSeries::exp() const {
    if (!t_[0].is_zero()) throw ParameterError("formal exp needs zero constant term");
    CharSeries acc = one(ring_, D(), Qprec_);
    CharSeries term = one(ring_, D(), Qprec_);
    for (long j = 1; j <= D(); ++j) {
        term = (term * *this).scale(CycScalar::from_rational(ring_, mpq_class(1, j)));
        acc = acc + term;
    }
    return acc;
}

CharSeries CharSeries::compose(const CharSeries& o) const {
    if (!o.t_[0].is_zero()) throw ParameterError("composition needs zero constant term");
    CharSeries acc(ring_, D(), Qprec_);
    CharSeries powb = one(ring_, D(), Qprec_);
    for (long i = 0; i <= D(); ++i) {
        if (i > 0) powb = powb * o;
        // add t_i * o^i
        CharSeries part(ring_, D(), Qprec_);
        for (long j = 0; j <= D(); ++j) part.t_[j] = powb.t_[j] * t_[i];
        acc = acc + part;
    }
    return acc;
}

bool CharSeries::is_identity_map() const {
    CharSeries u = variable(ring_, D(), Qprec_);
    for (long i = 0; i <= D(); ++i)
        if (!(t_[i] == u.t_[i])) return false;
    return true;
}

CharSeries characteristic_series(const DirichletCharacter& chi, long D, long Q) {
    if (chi.parity != -1) throw ParameterError("characteristic series needs an odd character");
    if (D < 2) throw ParameterError("truncation degree must be >= 2");
    auto ring = CycRing::rational(chi.ring_conductor());
    const auto& triv = trivial_char_mod1();
    CharSeries s(ring, D, Q);
    mpz_class fact = 1;
    for (long k = 2; k <= D; ++k) {
        fact *= k;
        QExpansion g = eisenstein_chi(k, triv, Q, ring) + eisenstein_chi(k, chi, Q, ring);
        s.t(k) = g.scale(CycScalar::from_rational(ring, mpq_class(1, fact)));
    }
    return s.exp();
}

std::pair<CharSeries, CharSeries> fgl_exponential(const CharSeries& K) {
    long D = K.D();
    auto inv = K.inverse();
    // exp_F = u * K^{-1}: shift by one power of u
    CharSeries ef(K.ring(), D, K.Q());
    for (long i = 1; i <= D; ++i) ef.t(i) = inv.t(i - 1);
    // compositional inverse by degreewise correction
    CharSeries lf = CharSeries::variable(K.ring(), D, K.Q());
    for (long n = 2; n <= D; ++n) {
        CharSeries e = ef.compose(lf);
        lf.t(n) = lf.t(n) - e.t(n);
    }
    return {ef, lf};
}

QExpansion genus_cpn(const CharSeries& K, long n) {
    if (n < 0 || n > K.D()) throw ParameterError("genus degree out of range");
    return K.pow(n + 1).t(n);
}

MembershipReport basis_membership(const QExpansion& f, const std::vector<QExpansion>& basis,
                                  long q_eff) {
    long rows = std::min(q_eff, f.q_prec());
    for (const auto& b : basis) rows = std::min(rows, b.q_prec());
    rows += 1;
    long n = (long)basis.size();
    const auto& ring = f.ring();
    std::vector<std::vector<CycScalar>> A(rows, std::vector<CycScalar>(n + 1, CycScalar(ring)));
    for (long i = 0; i < rows; ++i) {
        for (long j = 0; j < n; ++j) A[i][j] = basis[j].coeff(i);
        A[i][n] = f.coeff(i);
    }
    // Gaussian elimination over the cyclotomic field
    std::vector<long> pivot_row(n, -1);
    long rank = 0;
    for (long col = 0; col < n && rank < rows; ++col) {
        long pr = -1;
        for (long i = rank; i < rows; ++i)
            if (!A[i][col].is_zero()) { pr = i; break; }
        if (pr < 0) continue;
        std::swap(A[rank], A[pr]);
        CycScalar pinv = A[rank][col].inverse();
        for (long j = col; j <= n; ++j) A[rank][j] = A[rank][j] * pinv;
        for (long i = 0; i < rows; ++i) {
            if (i == rank || A[i][col].is_zero()) continue;
            CycScalar m = A[i][col];
            for (long j = col; j <= n; ++j) A[i][j] = A[i][j] - m * A[rank][j];
        }
        pivot_row[col] = rank;
        ++rank;
    }
    if (rank < n) throw DegenerateBasisError("basis is linearly dependent through q^" +
                                             std::to_string(rows - 1));
    MembershipReport rep;
    rep.q_checked = rows - 1;
    rep.pass = true;
    for (long i = rank; i < rows; ++i)
        if (!A[i][n].is_zero()) rep.pass = false;
    if (rep.pass)
        for (long j = 0; j < n; ++j) rep.solution.push_back(A[pivot_row[j]][n]);
    return rep;
}

ConditionReport verify_conditions(const OrientParams& op,
                                  const std::vector<QExpansion>* basis) {
    const auto& chi = op.chi;
    long p = op.p, L = chi.ring_conductor();
    if (chi.is_trivial()) throw ParameterError("needs a nontrivial character");
    if (chi.parity != -1) throw ParameterError("needs an odd character");
    if (op.c_set.empty()) throw ParameterError("empty c set");
    if (p < 3 || !is_prime(p)) throw ParameterError("p must be an odd prime");
    if (L % p == 0) throw ParameterError("p must not divide the conductor");
    for (long c : op.c_set)
        if (c % p == 0) throw ParameterError("c must be a p-adic unit");

    MeasureParams mp{chi, p, op.M, op.Q, 0};
    auto ring = mp.ring();
    ConditionReport rep;

    // condition 1: Kummer congruences on Z_p^x for the mu moments
    for (long c : op.c_set) {
        MomentSequence seq = moments_mu(mp, c, op.K);
        if (op.inject_k >= 0 && op.inject_k <= op.K && op.inject_q <= mp.Q) {
            auto& co = seq.moments[op.inject_k].coeff(op.inject_q);
            co = co + CycScalar::from_int(ring, 1);
        }
        rep.kummer.emplace_back(c, kummer_check_units(seq));
    }

    // condition 2: means converge to (1/p) log(c^{p-1})
    for (long c : op.c_set) {
        MeanConditionReport mr;
        mr.c = c;
        mpz_class target = iwasawa_log(c, p, op.M + 1) / p;
        QExpansion ts(ring, mp.Q);
        ts.coeff(0) = CycScalar::from_int(ring, target);
        auto lim = mean_via_limit(
            [&](const mpz_class& k) { return mu_moment(mp, k, c); }, p, op.r_max);
        mr.pass = true;
        for (long r = 0; r <= op.r_max; ++r) {
            long v = (lim.approximations[r] - ts).valuation();
            mr.valuations.push_back(v);
            if (v < std::min(r + 1, op.M)) mr.pass = false;
        }
        rep.means.push_back(std::move(mr));
    }

    // condition 3: p-stabilized g_k lies in the kernel of 1 - <p>U (exact check)
    auto rat = CycRing::rational(L);
    const auto& triv = trivial_char_mod1();
    for (long k = 1; k <= op.K; ++k) {
        const DirichletCharacter& comp = (k % 2 == 0) ? triv : chi;
        QExpansion g = eisenstein_chi(k, comp, op.Q, rat);
        QExpansion f = p_stabilize(g, k, p);
        auto kr = kernel_check_atkin(f, p, op.Q / p, op.M);
        rep.kernels.push_back({k, kr.pass, kr.first_fail_index});
    }

    // condition 4: classicality of g_1 = G_1^chi against a weight-1 basis
    std::vector<QExpansion> b;
    if (basis) {
        b = *basis;
    } else {
        for (const auto& ch : enumerate_characters(chi.modulus)) {
            if (ch.parity != -1) continue;
            if (L % ch.ring_conductor() != 0) continue;
            b.push_back(eisenstein_chi(1, ch, op.Q, rat));
        }
    }
    QExpansion g1 = eisenstein_chi(1, chi, op.Q, rat);
    rep.classicality = basis_membership(g1, b, op.Q);

    rep.overall = rep.classicality.pass;
    for (const auto& [c, kr] : rep.kummer) rep.overall = rep.overall && kr.pass;
    for (const auto& mr : rep.means) rep.overall = rep.overall && mr.pass;
    for (const auto& ke : rep.kernels) rep.overall = rep.overall && ke.pass;
    return rep;
}

} // namespace pmf
