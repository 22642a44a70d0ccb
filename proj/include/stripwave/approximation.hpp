#pragma once
// Float-mode numerics that manufacture the objects the certification step
// later promotes to intervals: the Newton iterate (kept inside the kernel of
// the trace matrix), the approximate inverse block B^N, and the approximate
// eigenbasis P for the spectral enclosure.

#include <vector>

#include "stripwave/blocks.hpp"
#include "stripwave/sequences.hpp"

namespace stripwave {

// F(U) = L U + e^U - U - e0 restricted to out_box
CoeffSeq<double> residual_F(const CoeffSeq<double>& u, double c, IndexBox out_box);

// DF(U) = L + M_{e^U - e0} sectioned to box x box
OperatorBlock<double> jacobian_block(const CoeffSeq<double>& u, double c, IndexBox box,
                                     Sector sector = Sector::even);

// Rows force the cosine series and its second x1 derivative to vanish at
// x1 = +-d1, one pair of rows per transverse mode n2.
struct TraceMatrix {
    Eigen::MatrixXd t; // value rows (k=0) first, then the (2 pi n1~)^2 rows (k=2)
    IndexBox cols_box;
    double d1 = 0;
};
TraceMatrix trace_matrix(IndexBox box, double d1);

Eigen::VectorXd trace_values(const TraceMatrix& t, const CoeffSeq<double>& u);

// minimal correction in the alpha-weighted metric landing in Ker(T)
CoeffSeq<double> trace_project(const CoeffSeq<double>& u, const TraceMatrix& t);

struct NewtonResult {
    CoeffSeq<double> u;
    double residual = 0;   // ||pi^{N0} F(u)||_2 at the returned iterate
    double trace_norm = 0; // ||T u||_inf
    int iterations = 0;
    std::vector<double> history; // residual of each iterate, starting value first
};

// Bordered Newton iteration: each step solves the KKT system that keeps the
// iterate inside Ker(T) while driving F to zero.
NewtonResult newton_solve(const CoeffSeq<double>& u0, double c, double tol, int max_iter);

// numerical inverse of I + M_{V^N} L^{-1} on I_N, V = e^u - e0
OperatorBlock<double> build_BN(const CoeffSeq<double>& ubar, IndexBox nbox, double c);

// Pseudo-diagonalization of the DF(ubar) section in one symmetry sector:
// P has approximate eigenvectors as columns (unit alpha-weighted norm),
// lambda holds the ascending approximate eigenvalues, r = pinv*DF*p - S.
struct PseudoDiag {
    OperatorBlock<double> p, pinv;
    std::vector<double> lambda;
    OperatorBlock<double> r;
    double cond = 1; // plain 2-norm condition number of p
};
PseudoDiag build_P(const CoeffSeq<double>& ubar, IndexBox nbox, double c, Sector sector);

} // namespace stripwave
