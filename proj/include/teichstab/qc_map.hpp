#pragma once

// The near-isometric map alpha : E(M) -> E'(M'), its Beltrami quotient,
// dilatation, Teichmuller upper bound and the Hausdorff distance of images.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "teichstab/fixed_point.hpp"
#include "teichstab/surface_model.hpp"

namespace teichstab {

/// 1/2 log K.
double teich_bound(double K);

/// max of the two directed sup-min distances, brute force over pairs.
double hausdorff_distance(const std::vector<std::vector<cplx>>& A, const std::vector<std::vector<cplx>>& B);

struct BeltramiResult {
    std::vector<cplx> mu;
    std::vector<double> k;
    double K = 1.0;
};

/// Central differences of a chart-coordinate map q with the given step.
BeltramiResult beltrami_dilatation(const std::function<cplx(cplx)>& q, const std::vector<cplx>& probes, double step = 1e-4);
/// Same with a per-probe evaluator (used to pin the chart of a stencil).
BeltramiResult beltrami_dilatation(const std::function<cplx(cplx, int)>& q, const std::vector<cplx>& probes, double step = 1e-4);

/// Quintic smoothstep: 1 for r <= r0/3, 0 for r >= 2 r0/3.
double kappa_profile(double r, double r0);

struct AlphaOptions {
    std::vector<double> r0_ladder{0.4, 0.2, 0.1};  // in units of L / 2 pi
    int geo_mu = 24;
    int geo_r = 14;
    double glue_tol = 1e-6;
    double fd_step = 1e-4;
    int interior_probes = 16;  // per direction
    int strip_l = 32;
    int strip_r = 8;
    int blend_l = 32;
    int blend_r = 4;
    int overlap_probes = 100;
    int hausdorff_boundary = 256;
    unsigned seed = 20240601u;
    double tol = 1e-14;
    int max_iter = 80;
};

/// A probe and the chart its finite-difference stencil is pinned to (-1: none).
struct Probe {
    cplx z;
    int chart = -1;
};

struct QcMapReport {
    std::vector<cplx> mu_samples;  // probe order: interior (row-major), strip (l-major), ring (l-major)
    double K = 1.0;
    double teich_upper = 0.0;
    double displacement = 0.0;
    double metric_distortion = 0.0;
    double hausdorff = 0.0;
    double r0 = 0.0;
    double glue_mismatch = 0.0;
    double boundary_mismatch = 0.0;
    double max_contraction = 0.0;
    double fd_noise_floor = 0.0;
    int n_probes = 0;
    int n_interior_discs = 0;
    int distortion_violations = 0;  // probes with k^2 > (1 + D)/(1 - D) beyond FD tolerance

    std::string to_json() const;
};

/// Interior sub-disc of the cover, in the global coordinate.
struct CoverDisc {
    cplx center;
    double radius;
};

class AlphaMap {
public:
    AlphaMap(std::shared_ptr<const SurfaceModel> M, std::shared_ptr<const SurfaceModel> Mp, double r0, const AlphaOptions& opt);

    double r0() const { return r0_; }
    const SurfaceModel& source() const { return *M_; }
    const SurfaceModel& target() const { return *Mp_; }

    struct Location {
        int chart = -1;
        double l = 0.0;
        double r = 1e300;  // semi-geodesic depth; huge when away from every strip chart
    };
    Location locate(cplx z, int chart_hint = -1) const;

    /// Global coordinate of alpha(xi(z)) on M'.
    cplx eval(cplx z, int chart_hint = -1) const;
    /// Point of E(M) over the source and of E'(M') over its image.
    std::vector<cplx> eval_point(cplx z, int chart_hint = -1) const;

    /// z on M (or M') at semi-geodesic coordinates (l, r) in chart c.
    cplx from_lr(bool target, int c, double l, double r) const;

    /// Contraction ratio of the minimization run by eval at z (0 in the strip).
    double contraction_at(cplx z, int chart_hint = -1) const;
    /// Chart-relative copy of l: within half a period of the base point of c.
    double unwrap(int c, double l) const;

private:
    cplx eval_impl(cplx z, int hint, double* ratio) const;
    cplx strip_map(int c, double l, double r) const;
    bool locate_target(int c, const Vec2& x, double& l, double& r, Mat2* dlr) const;

    std::shared_ptr<const SurfaceModel> M_, Mp_;
    double r0_;
    AlphaOptions opt_;
    std::vector<GeodesicPatch> geo_, geo_p_;
};

/// Largest r0 of the ladder whose geodesic bundles are caustic-free to 2 r0
/// on every strip chart of both surfaces. Throws CausticDetected otherwise.
double select_r0(const SurfaceModel& M, const SurfaceModel& Mp, const AlphaOptions& opt);

struct AlphaBuild {
    std::shared_ptr<const AlphaMap> alpha;
    QcMapReport report;
    std::vector<CoverDisc> cover;
    std::vector<Probe> probes;
};

AlphaBuild build_alpha(const Embedding& E, const Embedding& E_prime, const AlphaOptions& opt = {},
                       const SurfaceModelOptions& model_opt = {});
AlphaBuild build_alpha(std::shared_ptr<const SurfaceModel> M, std::shared_ptr<const SurfaceModel> Mp, const AlphaOptions& opt = {});

}  // namespace teichstab
