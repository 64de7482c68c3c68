#pragma once

#include <utility>
#include <vector>

#include "wielandt/core.hpp"
#include "wielandt/inequalities.hpp"
#include "wielandt/types.hpp"

namespace wielandt {

/// A parameter value where adjacent ordered eigenvalue curves meet, with the
/// 1-based pairs of curve indices involved and the smallest gap observed at
/// the refined location.
struct Crossing {
  double t = 0.0;
  std::vector<std::pair<int, int>> pairs;
  double min_gap = 0.0;
};

/// Sampled ordered eigenvalue curves of A + tB with matched eigenvector
/// frames and detected crossings. Curves rows are exactly the sorted spectra;
/// frame columns follow branches through degenerate regions where the sort
/// order is ambiguous.
struct PencilTrace {
  std::vector<double> grid;          ///< strictly increasing sample times
  std::vector<Vector> curves;        ///< per sample, non-increasing values
  std::vector<Matrix> frames;        ///< per sample, matched eigenvectors
  std::vector<Crossing> crossings;   ///< distinct refined locations
  std::vector<double> pair_min_gaps; ///< per adjacent pair: smallest gap seen
  std::vector<double> match_scores;  ///< frame-match quality per transition
  double gap_tol = 0.0;              ///< threshold used to declare crossings

  int samples() const { return static_cast<int>(grid.size()); }
  int n() const { return curves.empty() ? 0 : static_cast<int>(curves[0].size()); }
};

/// Trace the ordered eigenvalue curves on [t_lo, t_hi] from a uniform base
/// grid of `grid_size` samples. With `refine`, intervals that could contain a
/// crossing (by the Lipschitz bound on gaps) are bisected until crossings are
/// localized to width <= 1e-8 * (t_hi - t_lo). Pairs of curves that coincide
/// everywhere are one multiple branch, not a crossing.
PencilTrace trace_pencil(const HermitianMatrix& a, const HermitianMatrix& b,
                         double t_lo, double t_hi, int grid_size,
                         bool refine = true, const Tolerances& tol = {});

/// Alignment of `next` frame columns to `prev`: permutation[i] names the
/// column of `next` that continues prev column i. Only positions inside a
/// degenerate cluster of `next` may deviate from the identity, so the
/// non-increasing eigenvalue order is preserved within tolerance. The score
/// is the principal-angle overlap summed over blocks (equals the frame size
/// for frames spanning the same flags).
struct FrameMatch {
  std::vector<int> permutation;
  double score = 0.0;
};

FrameMatch match_frames(const OrthonormalFrame& prev,
                        const OrthonormalFrame& next,
                        const ClusterStructure& prev_clusters,
                        const ClusterStructure& next_clusters);

enum class Side { Left, Right };

/// One-sided derivatives of the ordered curves at t. The right side is the
/// perturbation rate of (A + tB, B); the left side flips direction, which
/// reverses the within-cluster order. Both sides agree away from crossings.
Vector derivative_at(const HermitianMatrix& a, const HermitianMatrix& b,
                     double t, Side side,
                     double tol_cluster = Tolerances{}.cluster);

/// phi(t_g) = sum over the index set of the traced curves at each sample.
std::vector<double> phi_curve(const PencilTrace& trace, const IndexSet& s);

/// Integral of phi' over [t0, t1] by per-interval Gauss-Legendre quadrature,
/// split at detected crossings; equals phi(t1) - phi(t0) within quadrature
/// tolerance because phi is continuous and piecewise analytic.
double integrate_phi_prime(const HermitianMatrix& a, const HermitianMatrix& b,
                           const IndexSet& s, double t0, double t1,
                           const Tolerances& tol = {});

}  // namespace wielandt
