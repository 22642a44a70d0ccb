#include "stripwave/stability.hpp"
#include <cstdio>
#include <cstdlib>

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/LU>

#include "stripwave/errors.hpp"
#include "stripwave/symbols.hpp"

namespace stripwave {

namespace {

CoeffSeq<double> mid_seq(const CoeffSeq<IScalar>& u) {
    CoeffSeq<double> out(u.box, u.d1, u.d2);
    for (int n1 = 0; n1 <= u.box.n1max; ++n1)
        for (int n2 = 0; n2 <= u.box.n2max; ++n2) out.at(n1, n2) = u.at(n1, n2).mid();
    return out;
}

OperatorBlock<IScalar> block_add(const OperatorBlock<IScalar>& x, const OperatorBlock<IScalar>& y) {
    if (!(x.rows_box == y.rows_box) || !(x.cols_box == y.cols_box) || x.sector != y.sector)
        throw ShapeMismatch("block_add: operand shapes differ");
    OperatorBlock<IScalar> out = x;
    for (long i = 0; i < out.a.rows(); ++i)
        for (long j = 0; j < out.a.cols(); ++j) out.a(i, j) = x.a(i, j) + y.a(i, j);
    return out;
}

using IMat = Eigen::Matrix<IScalar, Eigen::Dynamic, Eigen::Dynamic>;

// plain spectral norm bound: min of sqrt(norm1 * norminf) and a Gershgorin
// bound on the Gram matrix of the smaller side
IScalar plain_norm2(const IMat& a) {
    const long r = a.rows(), c = a.cols();
    if (r == 0 || c == 0) return IScalar(0.0);
    IMat ab(r, c);
    std::vector<IScalar> rowsum((size_t)r, IScalar(0.0)), colsum((size_t)c, IScalar(0.0));
    for (long i = 0; i < r; ++i)
        for (long j = 0; j < c; ++j) {
            ab(i, j) = iabs(a(i, j));
            rowsum[(size_t)i] = rowsum[(size_t)i] + ab(i, j);
            colsum[(size_t)j] = colsum[(size_t)j] + ab(i, j);
        }
    double l1 = 0.0, linf = 0.0;
    for (long j = 0; j < c; ++j) l1 = std::max(l1, colsum[(size_t)j].hi());
    for (long i = 0; i < r; ++i) linf = std::max(linf, rowsum[(size_t)i].hi());
    double best = sqrt(IScalar(l1) * IScalar(linf)).hi();
    if (std::min(r, c) <= 700) {
        // |a| dominates a entrywise, so the Gram row sums of |a| still bound
        // the squared spectral norm
        double gmax = 0.0;
        const bool by_rows = r <= c;
        const long m = by_rows ? r : c;
        for (long i = 0; i < m; ++i) {
            IScalar s(0.0);
            for (long k = 0; k < m; ++k) {
                IScalar d(0.0);
                if (by_rows)
                    for (long j = 0; j < c; ++j) d = d + ab(i, j) * ab(k, j);
                else
                    for (long j = 0; j < r; ++j) d = d + ab(j, i) * ab(j, k);
                s = s + d;
            }
            gmax = std::max(gmax, s.hi());
        }
        best = std::min(best, sqrt(IScalar(gmax)).hi());
    }
    return IScalar(0.0, best);
}

// alpha-weights applied to the sequence-space side only: the eigenbasis
// coordinates carry the plain l2 norm, so operator norms between the two
// spaces are plain norms of Dr^{1/2} M Dc^{-1/2}
IMat mixed_scaled(const OperatorBlock<IScalar>& m, bool weighted_rows, bool weighted_cols) {
    IMat s = m.a;
    if (weighted_rows) {
        const std::vector<double> w = blocknorm::row_weights(m, true);
        for (long i = 0; i < s.rows(); ++i) {
            IScalar f = sqrt(IScalar(w[(size_t)i]));
            for (long j = 0; j < s.cols(); ++j) s(i, j) = s(i, j) * f;
        }
    }
    if (weighted_cols) {
        const std::vector<double> w = blocknorm::row_weights(m, false);
        for (long j = 0; j < s.cols(); ++j) {
            IScalar f = IScalar(1.0) / sqrt(IScalar(w[(size_t)j]));
            for (long i = 0; i < s.rows(); ++i) s(i, j) = s(i, j) * f;
        }
    }
    return s;
}

// Entrywise interval enclosure of the true inverse of p through its numeric
// approximate inverse q: with eta = ||I - q p|| < 1 the Neumann series gives
// ||p^{-1} - q|| <= ||q|| eta / (1 - eta) from the weighted space into the
// eigenbasis coordinates, and |m_ij| <= ||m|| sqrt(alpha_j) entrywise.
OperatorBlock<IScalar> enclose_inverse(const OperatorBlock<IScalar>& p,
                                       const OperatorBlock<IScalar>& q) {
    OperatorBlock<IScalar> e = block_sub(identity_block<IScalar>(p.rows_box, p.sector),
                                         block_mul(q, p));
    const IScalar eta = plain_norm2(e.a);
    if (!(eta.hi() < 1.0)) throw SingularBlock("eigenbasis block inverse not verifiable");
    const IScalar dq = plain_norm2(mixed_scaled(q, false, true)) * eta / (IScalar(1.0) - eta);
    const std::vector<double> w = blocknorm::row_weights(q, false);
    OperatorBlock<IScalar> out = q;
    for (long i = 0; i < out.a.rows(); ++i)
        for (long j = 0; j < out.a.cols(); ++j) {
            const IScalar pad = dq * sqrt(IScalar(w[(size_t)j]));
            out.a(i, j) = out.a(i, j) + IScalar(-pad.hi(), pad.hi());
        }
    return out;
}

bool inside(IndexBox outer, int n1, int n2) { return n1 <= outer.n1max && n2 <= outer.n2max; }

// alpha-weighted l2 pairing (V, V*E) with the multiplication tail folded in:
// the head term is exact because E is supplied on the doubled head box, and
// every cross term with the envelope part is controlled by sup_n |E_n|.
IScalar exp_pairing(const CoeffSeq<IScalar>& vhead, const IScalar& tail, double d1, double d2,
                    const IScalar& c, const IScalar& delta0) {
    IndexBox ebox{2 * vhead.box.n1max, 2 * vhead.box.n2max};
    CoeffSeq<IScalar> e = e_sequence(ebox, d1, d2, c, delta0);
    IScalar head = dot2(vhead, convolve(vhead, e, vhead.box));
    // |E_{n1,n2}| peaks at n1 = 0 (the n1 dependence only grows the
    // denominator) and decays in n2: every factor of C^2/(4a) shrinks as the
    // transverse symbol grows, so the (0,0) entry dominates the whole lattice.
    IScalar emax = iabs(e.at(0, 0));
    IScalar cross = emax * tail * (IScalar(2.0) * l1_norm(vhead) + tail);
    return head + iabs(cross);
}

struct Cluster {
    double lo;
    double hi;
    int members;
};

std::vector<Cluster> merge_intervals(const GershgorinSet& set) {
    std::vector<std::pair<double, double>> iv;
    iv.reserve(set.centers.size());
    for (size_t k = 0; k < set.centers.size(); ++k) {
        IScalar span = set.centers[k] + IScalar(-set.radii[k].hi(), set.radii[k].hi());
        iv.emplace_back(span.lo(), span.hi());
    }
    std::sort(iv.begin(), iv.end());
    std::vector<Cluster> out;
    for (const auto& [lo, hi] : iv) {
        if (!out.empty() && lo <= out.back().hi) {
            out.back().hi = std::max(out.back().hi, hi);
            out.back().members += 1;
        } else {
            out.push_back(Cluster{lo, hi, 1});
        }
    }
    return out;
}

// Count the enclosures of one sector: clusters entirely left of zero add
// their cardinality, a lone odd-sector cluster through zero is the
// translation mode, anything else touching zero spoils the count.
bool count_sector(const GershgorinSet& set, bool odd_sector, int& n, bool& zero_mode) {
    const double tail_lo = set.tail_floor.lo();
    for (const Cluster& cl : merge_intervals(set)) {
        if (cl.hi < 0.0) {
            n += cl.members;
        } else if (cl.lo > 0.0) {
            continue;
        } else if (odd_sector && !zero_mode && cl.members == 1 && cl.hi < tail_lo) {
            zero_mode = true;
        } else {
            return false;
        }
    }
    return true;
}

}  // namespace

IScalar essential_spectrum_floor(const IScalar& c) {
    return IScalar(1.0) - pow_k(c, 4) / IScalar(4.0);
}

IScalar lambda_min_bound(const EnclosedSeq& exp_enc, const IScalar& k2, const IScalar& r0,
                         const IScalar& c) {
    IScalar norm_exp = l1_norm(exp_enc.head) + tail_l1(exp_enc.env, exp_enc.head.box);
    return -(exp(k2 * r0) * norm_exp) - pow_k(c, 4) / IScalar(4.0);
}

GershgorinSet gershgorin_enclosure(const CoeffSeq<IScalar>& ubar, const EnclosedSeq& exp_enc,
                                   const IScalar& r0, const IScalar& k2,
                                   const SpectralWindow& window, Sector sector, IndexBox nbox,
                                   const IScalar& c) {
    const double d1 = ubar.d1, d2 = ubar.d2;
    const IScalar floor = essential_spectrum_floor(c);
    const IScalar delta0 = window.delta0;
    if (!(delta0.lo() > 0.0) || !(delta0.hi() < floor.lo()))
        throw DomainError("delta0 must sit strictly inside (0, 1 - c^4/4)");
    if (!(window.lambda_min.lo() < delta0.lo()))
        throw DomainError("spectral window is empty: lambda_min >= delta0");
    if (!((window.t + window.lambda_min).lo() > 0.0))
        throw DomainError("shift t must dominate |lambda_min|");
    if (!(exp_enc.head.box == ubar.box) || exp_enc.head.d1 != d1 || exp_enc.head.d2 != d2)
        throw ShapeMismatch("exponential head must live on the coefficient domain");
    if (nbox.n1max > ubar.box.n1max || nbox.n2max > ubar.box.n2max)
        throw ShapeMismatch("finite spectral window exceeds the coefficient box");

    // Multiplication data V = e^U - e0: enclosed head plus an l1 tail mass.
    CoeffSeq<IScalar> vhead = exp_enc.head;
    vhead.at(0, 0) = vhead.at(0, 0) - IScalar(1.0);
    const IScalar tail = tail_l1(exp_enc.env, exp_enc.head.box);
    bool v_zero = tail.hi() == 0.0;
    if (v_zero)
        for (int n1 = 0; n1 <= vhead.box.n1max && v_zero; ++n1)
            for (int n2 = 0; n2 <= vhead.box.n2max; ++n2)
                if (vhead.at(n1, n2).lo() != 0.0 || vhead.at(n1, n2).hi() != 0.0) {
                    v_zero = false;
                    break;
                }

    // Perturbation reach of the true potential: ||e^u - e^U||_1 over the gap.
    const IScalar gap = floor - delta0;
    const IScalar norm_exp = l1_norm(exp_enc.head) + tail;
    const IScalar c1r0 = norm_exp * (exp(k2 * r0) - IScalar(1.0)) / gap;
    if (!(c1r0.hi() < 1.0)) throw HypothesisFailed("C1 r0 reaches 1: spectral gap too thin");

    // Numeric eigenbasis of the finite block and a verified inverse.
    PseudoDiag pd = build_P(mid_seq(ubar), nbox, c.mid(), sector);
    const long n = sector_size(nbox, sector);
    std::vector<IScalar> lam((size_t)n), inv_shift((size_t)n);
    IScalar min_shift(0.0);
    for (long i = 0; i < n; ++i) {
        lam[(size_t)i] = IScalar(pd.lambda[(size_t)i]);
        IScalar sh = lam[(size_t)i] + window.t;
        if (!(sh.lo() > 0.0))
            throw HypothesisFailed("shift t does not clear the lowest block eigenvalue");
        inv_shift[(size_t)i] = IScalar(1.0) / sh;
        min_shift = (i == 0) ? sh : IScalar(std::min(min_shift.lo(), sh.lo()),
                                            std::min(min_shift.hi(), sh.hi()));
    }
    OperatorBlock<IScalar> pi_block = to_interval(pd.p);
    OperatorBlock<IScalar> qenc = enclose_inverse(pi_block, to_interval(pd.pinv));
    const IScalar norm_p = plain_norm2(mixed_scaled(pi_block, true, false));
    const IScalar norm_q = plain_norm2(mixed_scaled(qenc, false, true));
    const std::vector<IScalar> ldiag = l_diag(nbox, sector, d1, d2, c);
    const IScalar minlout = min_l_outside(nbox.n1max, nbox.n2max, d1, d2, c);
    const IScalar res_out = minlout - delta0;  // positive: minlout >= floor > delta0

    // Z13: the conjugated finite block against its numeric diagonal.
    IScalar z13(0.0), z14(0.0), z11(0.0), z12(0.0);
    {
        OperatorBlock<IScalar> lp = pi_block;
        scale_rows(lp, ldiag);
        OperatorBlock<IScalar> dfp =
            v_zero ? lp : block_add(lp, block_mul(mult_block(vhead, nbox, nbox, sector), pi_block));
        OperatorBlock<IScalar> r13 = block_mul(qenc, dfp);
        for (long i = 0; i < n; ++i) r13.a(i, i) = r13.a(i, i) - lam[(size_t)i];
        scale_rows(r13, inv_shift);
        z13 = plain_norm2(r13.a) + norm_q * tail * norm_p / min_shift;
    }

    // Band couplings: the multiplication head only reaches as far as its own
    // support, so rows/columns beyond nbox live in a finite band box.
    IndexBox bandbox{nbox.n1max + vhead.box.n1max, nbox.n2max + vhead.box.n2max};
    if (!v_zero) {
        OperatorBlock<IScalar> mio = mult_block(vhead, nbox, bandbox, sector);
        for (long j = 0; j < mio.a.cols(); ++j) {
            auto [c1, c2] = sector_unflat(bandbox, mio.sector, j);
            if (inside(nbox, c1, c2))
                for (long i = 0; i < mio.a.rows(); ++i) mio.a(i, j) = IScalar(0.0);
        }
        OperatorBlock<IScalar> r14 = block_mul(qenc, mio);
        scale_rows(r14, inv_shift);
        z14 = plain_norm2(mixed_scaled(r14, false, true)) + norm_q * tail / min_shift;

        OperatorBlock<IScalar> moi = mult_block(vhead, bandbox, nbox, sector);
        std::vector<IScalar> res_rows((size_t)moi.a.rows(), IScalar(1.0));
        for (long i = 0; i < moi.a.rows(); ++i) {
            auto [r1, r2] = sector_unflat(bandbox, moi.sector, i);
            if (inside(nbox, r1, r2)) {
                for (long j = 0; j < moi.a.cols(); ++j) moi.a(i, j) = IScalar(0.0);
            } else {
                res_rows[(size_t)i] = IScalar(1.0) / (l_index<IScalar>(r1, r2, d1, d2, c) - delta0);
            }
        }
        OperatorBlock<IScalar> r11 = block_mul(moi, pi_block);
        scale_rows(r11, res_rows);
        z11 = (plain_norm2(mixed_scaled(r11, true, false)) + tail * norm_p / res_out) / gap;
        z12 = (l1_norm(vhead) + tail) / (res_out * gap);
    } else {
        z14 = norm_q * tail / min_shift;
        z11 = tail * norm_p / (res_out * gap);
        z12 = tail / (res_out * gap);
    }

    // Norm of (S + t)^{-1} P^{-1} (L - delta0) on the finite block.
    IScalar norm_sp(0.0);
    {
        OperatorBlock<IScalar> sp = qenc;
        std::vector<IScalar> colw((size_t)n);
        for (long j = 0; j < n; ++j) colw[(size_t)j] = ldiag[(size_t)j] - delta0;
        scale_cols(sp, colw);
        scale_rows(sp, inv_shift);
        norm_sp = plain_norm2(mixed_scaled(sp, false, true));
    }

    // Exponential-pairing terms and the derivative-loss constants.
    IScalar zu1(0.0), zu2(0.0), zu3(0.0);
    if (!v_zero) {
        IScalar pair = exp_pairing(vhead, tail, d1, d2, c, delta0);
        IScalar a_inf = decay_rate_inf(d2, c, delta0);
        IScalar four_d1 = IScalar(4.0) * IScalar(d1);
        zu1 = four_d1 * pair;
        zu2 = (four_d1 + IScalar(2.0) * cd1_constant(a_inf, d1) *
                             exp(IScalar(-2.0) * a_inf * IScalar(d1))) *
              pair;
        zu3 = norm_sp * zu2;
    }

    // Row brackets combining the finite frame with the resolvent tail.
    const IScalar one(1.0);
    const IScalar beta1 = (zu1 + c1r0) / (one - c1r0);
    const IScalar amp = sqrt(one + sqr(beta1));
    const IScalar beta_den = one - z12 - zu2 - amp * c1r0;
    if (!(beta_den.lo() > 0.0))
        throw HypothesisFailed("beta denominator vanishes: off-block coupling too strong");
    const IScalar beta2 = (z11 + (zu2 + amp * c1r0) * norm_p) / beta_den;
    const IScalar c2r0 = c1r0 * norm_sp;
    const IScalar qden = one - z12 - zu2;
    const IScalar qfrac = (z11 + zu2 * norm_p) / qden;
    const IScalar qb = z13 + z14 * qfrac + zu3 * (norm_p + qfrac);
    const IScalar ib = z13 + z14 * beta2 + (zu3 + c2r0 * amp) * (norm_p + beta2);
    const double bracket = std::max(qb.hi(), ib.hi());
    if (std::getenv("SW_DEBUG_GERSH"))
        std::fprintf(stderr,
                     "z11=%.3e z12=%.3e z13=%.3e z14=%.3e zu1=%.3e zu2=%.3e zu3=%.3e "
                     "c1r0=%.3e nP=%.3e nQ=%.3e nSP=%.3e qb=%.3e ib=%.3e\n",
                     z11.hi(), z12.hi(), z13.hi(), z14.hi(), zu1.hi(), zu2.hi(), zu3.hi(),
                     c1r0.hi(), norm_p.hi(), norm_q.hi(), norm_sp.hi(), qb.hi(), ib.hi());

    GershgorinSet out;
    out.sector = sector;
    out.window = window;
    out.centers.resize((size_t)n);
    out.radii.resize((size_t)n);
    for (long i = 0; i < n; ++i) {
        out.centers[(size_t)i] = lam[(size_t)i];
        double eps = (iabs(lam[(size_t)i] + window.t) * IScalar(bracket)).hi();
        out.radii[(size_t)i] = IScalar(0.0, eps);
    }

    // Tail certificate: rows beyond the block keep their symbol centers, and
    // the uniform bracket must leave them above the window ceiling.
    IScalar qiv(0.0, bracket);
    IScalar tail_floor = (one - qiv) * minlout - window.t * qiv;
    if (!(bracket < 1.0) || !(tail_floor.lo() >= delta0.hi()))
        throw HypothesisFailed("tail radii exceed the spectral gap");
    out.tail_floor = tail_floor;
    return out;
}

NegativeCount count_negative(const GershgorinSet& even_set, const GershgorinSet& odd_set) {
    NegativeCount out;
    int n = 0;
    bool zero_mode = false;
    bool ok = count_sector(even_set, false, n, zero_mode) &&
              count_sector(odd_set, true, n, zero_mode);
    if (!ok) return out;  // an ambiguous cluster through zero: count unknown
    out.n_negative = n;
    out.zero_is_translation_mode = zero_mode;
    return out;
}

CoeffSeq<double> solve_wbar(const CoeffSeq<double>& ubar, double c) {
    const IndexBox box = ubar.box;
    OperatorBlock<double> df = jacobian_block(ubar, c, box, Sector::even);
    const long n = sector_size(box, Sector::even);
    Eigen::VectorXd rhs(n);
    const double pi = 3.14159265358979323846;
    for (long i = 0; i < n; ++i) {
        auto [n1, n2] = sector_unflat(box, Sector::even, i);
        const double k = pi * n1 / ubar.d1;
        rhs[i] = 2.0 * c * k * k * ubar.at(n1, n2);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(df.a);
    if (!lu.isInvertible()) throw SingularBlock("linearized block is singular");
    Eigen::VectorXd w = lu.solve(rhs);
    CoeffSeq<double> wfull(box, ubar.d1, ubar.d2);
    for (long i = 0; i < n; ++i) {
        auto [n1, n2] = sector_unflat(box, Sector::even, i);
        wfull.at(n1, n2) = w[i];
    }
    return trace_project(wfull, trace_matrix(box, ubar.d1));
}

IScalar invnorm_from_enclosure(const GershgorinSet& even_set) {
    double dist = even_set.window.delta0.lo();
    for (size_t k = 0; k < even_set.centers.size(); ++k) {
        IScalar span = even_set.centers[k] + IScalar(-even_set.radii[k].hi(), even_set.radii[k].hi());
        if (span.lo() <= 0.0 && span.hi() >= 0.0)
            throw HypothesisFailed("an eigenvalue enclosure touches zero");
        dist = std::min(dist, span.lo() > 0.0 ? span.lo() : -span.hi());
    }
    dist = std::min(dist, even_set.tail_floor.lo());
    if (!(dist > 0.0)) throw HypothesisFailed("zero distance to the spectrum vanished");
    return IScalar(1.0) / IScalar(dist);
}

IScalar theta_enclosure(const CoeffSeq<IScalar>& ubar, const CoeffSeq<IScalar>& wbar,
                        const IScalar& r0, const IScalar& invnorm_DF, const IScalar& k2,
                        const EnclosedSeq& exp_enc, const IScalar& c) {
    if (!(wbar.box == ubar.box) || wbar.d1 != ubar.d1 || wbar.d2 != ubar.d2)
        throw ShapeMismatch("wbar must live on the coefficient domain");
    if (!(exp_enc.head.box == ubar.box))
        throw ShapeMismatch("exponential head must live on the coefficient domain");
    const double d1 = ubar.d1, d2 = ubar.d2;
    const IScalar two_minus_c2 = IScalar(2.0) - sqr(c);
    if (!(two_minus_c2.lo() > 0.0))
        throw DomainError("second-derivative resolvent bound needs c^2 < 2");

    const IScalar pi = pi_enclosure();
    const IScalar area = IScalar(4.0) * IScalar(d1) * IScalar(d2);
    const IScalar sqrt_area = sqrt(area);
    const IScalar inv2c = IScalar(1.0) / (IScalar(2.0) * c);

    CoeffSeq<IScalar> d2u(ubar.box, d1, d2);
    CoeffSeq<IScalar> upw(ubar.box, d1, d2);
    for (int n1 = 0; n1 <= ubar.box.n1max; ++n1)
        for (int n2 = 0; n2 <= ubar.box.n2max; ++n2) {
            d2u.at(n1, n2) = -sqr(pi * IScalar(n1) / IScalar(d1)) * ubar.at(n1, n2);
            upw.at(n1, n2) = ubar.at(n1, n2) + IScalar(2.0) * c * wbar.at(n1, n2);
        }
    const IScalar theta0 = area * dot2(upw, d2u);

    // Defect of the numeric Jacobian equation DF(U) W = -2c dx1^2 U, measured
    // in L2 on the strip cell: g = dx1^2 U + (L W + e^U * W - W) / (2c).
    IndexBox sumbox{2 * ubar.box.n1max, 2 * ubar.box.n2max};
    CoeffSeq<IScalar> conv = convolve(exp_enc.head, wbar, sumbox);
    CoeffSeq<IScalar> g(sumbox, d1, d2);
    for (int n1 = 0; n1 <= sumbox.n1max; ++n1)
        for (int n2 = 0; n2 <= sumbox.n2max; ++n2) {
            IScalar v = conv.at(n1, n2);
            if (inside(ubar.box, n1, n2)) {
                v = v + (l_index<IScalar>(n1, n2, d1, d2, c) - IScalar(1.0)) * wbar.at(n1, n2);
                g.at(n1, n2) = d2u.at(n1, n2) + inv2c * v;
            } else {
                g.at(n1, n2) = inv2c * v;
            }
        }
    const IScalar tail = tail_l1(exp_enc.env, exp_enc.head.box);
    const IScalar defect = sqrt_area * (l2_norm(g) + inv2c * tail * l2_norm(wbar));
    const IScalar norm_ew = l1_norm(conv) + tail * l1_norm(wbar);

    const IScalar r_second = r0 / two_minus_c2;
    const IScalar eps0 =
        kappa1(c) * r0 + IScalar(4.0) * sqr(c) * invnorm_DF *
                             (defect + r_second + inv2c * (exp(k2 * r0) - IScalar(1.0)) * norm_ew);
    const IScalar eps =
        sqrt_area * l2_norm(upw) * r_second + eps0 * (sqrt_area * l2_norm(d2u) + r_second);
    return theta0 + IScalar(-eps.hi(), eps.hi());
}

StabilityVerdict classify(int n_negative, bool zero_is_translation_mode, const IScalar& theta) {
    StabilityVerdict out;
    out.n_negative = n_negative;
    out.zero_is_translation_mode = zero_is_translation_mode;
    out.theta = theta;
    const bool pos = theta.lo() > 0.0;
    const bool neg = theta.hi() < 0.0;
    if (n_negative == 0) {
        out.verdict = Verdict::stable;
    } else if (n_negative == 1) {
        out.verdict = pos ? Verdict::stable : (neg ? Verdict::unstable : Verdict::inconclusive);
    } else if (n_negative >= 2) {
        // theta > 0 detects an even count of unstable directions, theta < 0 an
        // odd one; a mismatch between the parity and the sign proves nothing.
        const bool even_count = n_negative % 2 == 0;
        if ((even_count && pos) || (!even_count && neg)) out.verdict = Verdict::unstable;
    }
    return out;
}

}  // namespace stripwave
