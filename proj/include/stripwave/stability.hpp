#pragma once
// Rigorous spectral enclosures for the linearization about a certified wave,
// split into the even/odd cosine sectors, plus the theta pairing and the
// orbital-stability verdict assembled from both.

#include <vector>

#include "stripwave/aliasing.hpp"
#include "stripwave/approximation.hpp"
#include "stripwave/blocks.hpp"
#include "stripwave/bounds.hpp"

namespace stripwave {

// localization window J = [lambda_min, delta0] together with the shift t of
// the diagonal comparison operator; requires 0 < delta0 < 1 - c^4/4,
// lambda_min < delta0 and t > -lambda_min
struct SpectralWindow {
    IScalar lambda_min{0.0};
    IScalar delta0{0.0};
    IScalar t{0.0};
};

// one sector's enclosure: every eigenvalue in J lies in the union of
// [centers_k - radii_k, centers_k + radii_k]; whatever is indexed outside the
// finite window stays to the right of tail_floor (>= delta0 when verified)
struct GershgorinSet {
    std::vector<IScalar> centers;
    std::vector<IScalar> radii;
    Sector sector = Sector::even;
    IScalar tail_floor{0.0};
    SpectralWindow window; // the window the radii were verified against
};

struct NegativeCount {
    int n_negative = -1; // -1 when the interval geometry admits no count
    bool zero_is_translation_mode = false;
};

enum class Verdict { stable, unstable, inconclusive };

struct StabilityVerdict {
    int n_negative = -1;
    bool zero_is_translation_mode = false;
    IScalar theta{0.0};
    Verdict verdict = Verdict::inconclusive;
};

// enclosure of 1 - c^4/4, the left edge of the essential spectrum
IScalar essential_spectrum_floor(const IScalar& c);

// lambda_min = -e^{k2 r0} ||e^U||_1 - c^4/4, with ||e^U||_1 taken from the
// enclosed head plus its envelope tail; a rigorous lower bound for the
// spectrum in both sectors
IScalar lambda_min_bound(const EnclosedSeq& exp_enc, const IScalar& k2, const IScalar& r0,
                         const IScalar& c);

// Gershgorin-type enclosure of one sector over the finite window nbox.
// exp_enc must be the rigorous exponential of ubar with head on ubar's box;
// r0 is the validated radius around ubar (0 certifies ubar itself).
// Throws HypothesisFailed when a lemma hypothesis cannot be verified
// (contraction factor C1 r0, the beta denominator, the shift positivity, or
// the tail staying right of the window) and SingularBlock when the
// approximate eigenbasis is too ill-conditioned to enclose its inverse.
GershgorinSet gershgorin_enclosure(const CoeffSeq<IScalar>& ubar, const EnclosedSeq& exp_enc,
                                   const IScalar& r0, const IScalar& k2,
                                   const SpectralWindow& window, Sector sector, IndexBox nbox,
                                   const IScalar& c);

// counts enclosure intervals strictly left of zero across both sectors
// (clusters of overlapping intervals count by cardinality when the cluster is
// disjoint from everything else); an odd-sector cluster containing zero and
// nothing else is the translation eigenvalue and is not counted.  n_negative
// = -1 when some interval straddles zero without qualifying.
NegativeCount count_negative(const GershgorinSet& even_set, const GershgorinSet& odd_set);

// finite-block solve DF(ubar) W = -2c dx1^2 ubar followed by the trace
// projection; float pipeline, even sector.  Throws SingularBlock.
CoeffSeq<double> solve_wbar(const CoeffSeq<double>& ubar, double c);

// upper bound for ||DF restricted to the even sector, inverted||: the
// reciprocal distance from zero to the enclosed spectrum.  Throws
// HypothesisFailed when an interval contains zero.
IScalar invnorm_from_enclosure(const GershgorinSet& even_set);

// theta = theta0 + [-eps, eps] per the pairing of (ubar + 2c wbar) against
// dx1^2 ubar, with defect terms measured through the certificate radius
IScalar theta_enclosure(const CoeffSeq<IScalar>& ubar, const CoeffSeq<IScalar>& wbar,
                        const IScalar& r0, const IScalar& invnorm_DF, const IScalar& k2,
                        const EnclosedSeq& exp_enc, const IScalar& c);

// the stability table: pure in its three inputs; pass n_negative = -1 for an
// inconclusive count
StabilityVerdict classify(int n_negative, bool zero_is_translation_mode, const IScalar& theta);

} // namespace stripwave
