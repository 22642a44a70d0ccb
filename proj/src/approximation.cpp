#include "stripwave/approximation.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "stripwave/errors.hpp"
#include "stripwave/symbols.hpp"

namespace stripwave {

namespace {

// e^u with the head computed accurately past out_box; the margin swallows
// the convolution spill that would otherwise re-enter the head entries
CoeffSeq<double> exp_head(const CoeffSeq<double>& u, IndexBox out_box) {
    IndexBox cap{out_box.n1max + 24, out_box.n2max + 24};
    return seq_exp(u, 1e-15, cap).series;
}

Eigen::VectorXd flatten(const CoeffSeq<double>& u) {
    Eigen::VectorXd v(u.box.size());
    for (int i = 0; i <= u.box.n1max; ++i)
        for (int j = 0; j <= u.box.n2max; ++j)
            v[sector_flat(u.box, Sector::even, i, j)] = u.at(i, j);
    return v;
}

CoeffSeq<double> unflatten(const Eigen::VectorXd& v, IndexBox box, double d1, double d2) {
    CoeffSeq<double> u(box, d1, d2);
    for (int i = 0; i <= box.n1max; ++i)
        for (int j = 0; j <= box.n2max; ++j)
            u.at(i, j) = v[sector_flat(box, Sector::even, i, j)];
    return u;
}

} // namespace

CoeffSeq<double> residual_F(const CoeffSeq<double>& u, double c, IndexBox out_box) {
    CoeffSeq<double> eu = exp_head(u, out_box);
    CoeffSeq<double> out(out_box, u.d1, u.d2);
    for (int i = 0; i <= out_box.n1max; ++i)
        for (int j = 0; j <= out_box.n2max; ++j) {
            double lu = 0;
            if (u.box.contains(i, j)) lu = l_index<double>(i, j, u.d1, u.d2, c) * u.at(i, j);
            out.at(i, j) = lu + eu.look(i, j) - u.look(i, j);
        }
    out.at(0, 0) -= 1.0; // the e0 part of G
    return out;
}

OperatorBlock<double> jacobian_block(const CoeffSeq<double>& u, double c, IndexBox box, Sector sector) {
    CoeffSeq<double> v = exp_head(u, u.box);
    v.at(0, 0) -= 1.0;
    OperatorBlock<double> j = mult_block(v, box, box, sector);
    auto l = l_diag<double>(box, sector, u.d1, u.d2, c);
    for (long i = 0; i < j.rows(); ++i) j.a(i, i) += l[size_t(i)];
    return j;
}

TraceMatrix trace_matrix(IndexBox box, double d1) {
    if (d1 <= 0) throw ShapeMismatch("trace matrix needs a positive half-period");
    const int m = box.n2max + 1;
    TraceMatrix t;
    t.cols_box = box;
    t.d1 = d1;
    t.t.setZero(2 * m, box.size());
    const double pi = scal::pi_val<double>();
    for (int n2 = 0; n2 < m; ++n2)
        for (int n1 = 0; n1 <= box.n1max; ++n1) {
            long col = sector_flat(box, Sector::even, n1, n2);
            double sgn = (n1 % 2 == 0) ? 1.0 : -1.0;
            double base = (n1 == 0) ? 1.0 : 2.0 * sgn;
            double freq2 = pi * double(n1) / d1;
            t.t(n2, col) = base;
            t.t(m + n2, col) = base * freq2 * freq2;
        }
    return t;
}

Eigen::VectorXd trace_values(const TraceMatrix& t, const CoeffSeq<double>& u) {
    if (!(t.cols_box == u.box)) throw ShapeMismatch("trace matrix does not match the coefficient box");
    return t.t * flatten(u);
}

CoeffSeq<double> trace_project(const CoeffSeq<double>& u, const TraceMatrix& t) {
    if (!(t.cols_box == u.box)) throw ShapeMismatch("trace matrix does not match the coefficient box");
    const long n = u.box.size();
    Eigen::VectorXd winv(n);
    for (long i = 0; i < n; ++i) {
        auto [n1, n2] = sector_unflat(u.box, Sector::even, i);
        winv[i] = 1.0 / alpha_weight(n1, n2);
    }
    // adjoint in the weighted metric: T* = D^{-1} T^t
    Eigen::MatrixXd a = winv.asDiagonal() * t.t.transpose(); // n x m
    Eigen::MatrixXd gram = t.t * a;                          // m x m
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) throw SingularGram("trace Gram matrix is numerically singular");
    Eigen::VectorXd coef = lu.solve(t.t * flatten(u));
    Eigen::VectorXd out = flatten(u) - a * coef;
    return unflatten(out, u.box, u.d1, u.d2);
}

NewtonResult newton_solve(const CoeffSeq<double>& u0, double c, double tol, int max_iter) {
    const IndexBox box = u0.box;
    TraceMatrix tm = trace_matrix(box, u0.d1);
    const long n = box.size(), m = tm.t.rows();

    CoeffSeq<double> u = trace_project(u0, tm);
    NewtonResult res;
    double best = std::numeric_limits<double>::infinity();
    CoeffSeq<double> best_u = u;

    auto resid = [&](const CoeffSeq<double>& w) { return residual_F(w, c, box); };
    CoeffSeq<double> f = resid(u);
    double rnorm = l2_norm(f);
    res.history.push_back(rnorm);

    for (int it = 0; it < max_iter && rnorm > tol; ++it) {
        OperatorBlock<double> j = jacobian_block(u, c, box);
        Eigen::MatrixXd k(n + m, n + m);
        k.setZero();
        k.topLeftCorner(n, n) = j.a;
        Eigen::VectorXd winv(n);
        for (long i = 0; i < n; ++i) {
            auto [n1, n2] = sector_unflat(box, Sector::even, i);
            winv[i] = 1.0 / alpha_weight(n1, n2);
        }
        k.topRightCorner(n, m) = winv.asDiagonal() * tm.t.transpose();
        k.bottomLeftCorner(m, n) = tm.t;
        Eigen::VectorXd rhs(n + m);
        rhs.head(n) = -flatten(f);
        rhs.tail(m) = -tm.t * flatten(u);
        Eigen::VectorXd step = Eigen::PartialPivLU<Eigen::MatrixXd>(k).solve(rhs);
        if (!step.allFinite()) throw NonConvergence("newton step is not finite");

        double scale = 1.0;
        CoeffSeq<double> unew = u;
        double rnew = rnorm;
        for (int bt = 0; bt < 7; ++bt) {
            Eigen::VectorXd cand = flatten(u) + scale * step.head(n);
            unew = trace_project(unflatten(cand, box, u.d1, u.d2), tm);
            CoeffSeq<double> fnew = resid(unew);
            rnew = l2_norm(fnew);
            if (rnew < rnorm || rnew <= tol) { f = fnew; break; }
            scale *= 0.5;
        }
        if (rnew >= rnorm && rnorm > tol) {
            // stalled: keep the best iterate and stop early
            res.history.push_back(rnew);
            break;
        }
        u = unew;
        rnorm = rnew;
        res.history.push_back(rnorm);
        res.iterations = it + 1;
        if (rnorm < best) { best = rnorm; best_u = u; }
    }

    if (rnorm > best) { u = best_u; rnorm = best; }
    if (rnorm > tol)
        throw NonConvergence("newton did not reach tolerance; best residual " + shortest_decimal(rnorm));
    res.u = u;
    res.residual = rnorm;
    res.trace_norm = trace_values(tm, u).lpNorm<Eigen::Infinity>();
    return res;
}

OperatorBlock<double> build_BN(const CoeffSeq<double>& ubar, IndexBox nbox, double c) {
    CoeffSeq<double> v = exp_head(ubar, ubar.box);
    v.at(0, 0) -= 1.0;
    CoeffSeq<double> vn = project(v, nbox);
    OperatorBlock<double> a = mult_block(vn, nbox, nbox, Sector::even);
    auto l = l_diag<double>(nbox, Sector::even, ubar.d1, ubar.d2, c);
    std::vector<double> linv(l.size());
    for (size_t i = 0; i < l.size(); ++i) linv[i] = 1.0 / l[i];
    scale_cols(a, linv);
    for (long i = 0; i < a.rows(); ++i) a.a(i, i) += 1.0;

    OperatorBlock<double> b = a;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a.a);
    b.a = lu.inverse();
    double defect = (a.a * b.a - Eigen::MatrixXd::Identity(a.rows(), a.rows()))
                        .cwiseAbs()
                        .rowwise()
                        .sum()
                        .maxCoeff();
    if (!b.a.allFinite() || defect > 1e-8)
        throw SingularBlock("finite inverse block could not be certified as numerically regular");
    return b;
}

PseudoDiag build_P(const CoeffSeq<double>& ubar, IndexBox nbox, double c, Sector sector) {
    OperatorBlock<double> df = jacobian_block(ubar, c, nbox, sector);
    const long n = df.rows();
    Eigen::VectorXd ws(n);
    for (long i = 0; i < n; ++i) {
        auto [n1, n2] = sector_unflat(nbox, sector, i);
        ws[i] = std::sqrt(sector_weight(sector, n1, n2));
    }
    Eigen::MatrixXd sym = ws.asDiagonal() * df.a * ws.cwiseInverse().asDiagonal();
    sym = 0.5 * (sym + sym.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success) throw EigSolverFailure("symmetric eigensolver did not converge");

    PseudoDiag out;
    out.p = OperatorBlock<double>(nbox, nbox, sector);
    out.pinv = OperatorBlock<double>(nbox, nbox, sector);
    out.p.a = ws.cwiseInverse().asDiagonal() * es.eigenvectors();
    out.pinv.a = es.eigenvectors().transpose() * ws.asDiagonal();
    out.lambda.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);

    out.r = OperatorBlock<double>(nbox, nbox, sector);
    out.r.a = out.pinv.a * df.a * out.p.a;
    out.r.a.diagonal() -= es.eigenvalues();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.p.a);
    out.cond = svd.singularValues()(0) / svd.singularValues()(n - 1);
    return out;
}

} // namespace stripwave
