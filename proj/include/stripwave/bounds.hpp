#pragma once
// Contraction bound suite for the zero-finding problem: the residual bound
// Y0, the linearization defect Z1 (finite block + unbounded-domain remainder
// + symbol tail), the r-independent coefficient of the Lipschitz bound
// Z2(r), and the radii-polynomial check that locates certified radii.

#include "stripwave/aliasing.hpp"
#include "stripwave/blocks.hpp"
#include "stripwave/symbols.hpp"

namespace stripwave {

struct BoundSet {
    IScalar Y0{0.0};
    IScalar Z1{0.0};
    IScalar Z2_coeff{0.0}; // Z2(r) = Z2_coeff * (e^{kappa2 r} - 1)/r
    IScalar kappa2{0.0};
    IScalar norm_BN{0.0};
};

enum class RadiiFailure { none, contraction, quadratic };

struct RadiiResult {
    IScalar r_min{0.0};
    IScalar r_max{0.0};
    bool success = false;
    RadiiFailure failed_condition = RadiiFailure::none;
};

// E_n = C_{n2}^2 a_{n2} (-1)^{n1} (1 - e^{-4 a_{n2} d1}) /
//       (d1 (4 a_{n2}^2 + (2 pi n1~)^2)):
// row n2 holds the cosine coefficients of x -> C^2 e^{-2 a d1} cosh(2 a x)
// on (-d1, d1).  A nonzero mu shifts the symbol (spectral enclosures).
CoeffSeq<IScalar> e_sequence(IndexBox box, double d1, double d2, const IScalar& c,
                             const IScalar& mu = IScalar(0.0));

// residual bound sqrt(2 d1) (||B^N F(U)||^2 + band between the operator box
// and the sequence box + envelope tail)^{1/2}; enc.head must sit exactly on
// ubar's box
IScalar y0_bound(const CoeffSeq<IScalar>& ubar, const OperatorBlock<IScalar>& BN,
                 const EnclosedSeq& enc, const IScalar& c);

// finite part of the defect: the two blocks on the doubled box plus the
// symbol tail ||V^N||_1 / min l outside the operator box
IScalar z1N_bound(const CoeffSeq<IScalar>& vbarN, const OperatorBlock<IScalar>& BN,
                  const IScalar& c);

// unbounded-domain remainder max{1,||B^N||} sqrt(Zu1^2 + Zu2^2) built from
// the E-sequence pairing (V, V*E)
IScalar zu_bound(const CoeffSeq<IScalar>& vbarN, const IScalar& c, const IScalar& norm_BN);

// Z1 + Zu + max{1,||B^N||} kappa1 ||V - V^N||_1
IScalar z1_total(const IScalar& z1N, const IScalar& zu, const IScalar& tail_l1_V,
                 const IScalar& norm_BN, const IScalar& c);

// kappa1 max{||B M_{e^U}||_2, 1}: finite block + multiplication-norm tail
IScalar z2_coeff(const EnclosedSeq& exp_enc, const OperatorBlock<IScalar>& BN,
                 const IScalar& c, const IScalar& norm_BN);

// both contraction conditions evaluated in intervals at the point radius r
bool radii_conditions(const BoundSet& b, double r);

// locate the validated radius range by sweep + bisection (relative step
// 2^-20) inside [Y0.hi, 1]; failure is a value, never a throw
RadiiResult radii_check(const BoundSet& b);

} // namespace stripwave
