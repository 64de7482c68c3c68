#include "wielandt/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <numeric>

#include "wielandt/perturbation.hpp"

namespace wielandt {

namespace {

struct Sample {
  double t;
  Vector values;
  Matrix vectors;
};

Sample solve_sample(const HermitianMatrix& a, const HermitianMatrix& b,
                    double t) {
  EigenDecomposition ed = eigh(pencil_at(a, b, t));
  return {t, ed.spectrum.values(), ed.frame.vectors()};
}

double pair_gap(const Sample& s, int i) { return s.values(i) - s.values(i + 1); }

// Best assignment inside one degenerate block: exhaustive for small blocks,
// greedy otherwise.
std::vector<int> best_block_assignment(const Eigen::MatrixXd& overlap) {
  const int m = static_cast<int>(overlap.rows());
  std::vector<int> best(m);
  std::iota(best.begin(), best.end(), 0);
  if (m <= 6) {
    std::vector<int> perm = best;
    double best_score = -1.0;
    do {
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += overlap(i, perm[i]);
      if (s > best_score) {
        best_score = s;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  std::vector<char> row_used(m, 0), col_used(m, 0);
  for (int step = 0; step < m; ++step) {
    int bi = -1, bj = -1;
    double bv = -1.0;
    for (int i = 0; i < m; ++i) {
      if (row_used[i]) continue;
      for (int j = 0; j < m; ++j) {
        if (col_used[j]) continue;
        if (overlap(i, j) > bv) {
          bv = overlap(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    best[bi] = bj;
    row_used[bi] = col_used[bj] = 1;
  }
  return best;
}

}  // namespace

FrameMatch match_frames(const OrthonormalFrame& prev,
                        const OrthonormalFrame& next,
                        const ClusterStructure& prev_clusters,
                        const ClusterStructure& next_clusters) {
  if (prev.ambient() != next.ambient() || prev.size() != next.size())
    throw DimensionMismatch("match_frames: frame shapes differ");
  const int k = prev.size();
  const Matrix& pv = prev.vectors();
  const Matrix& nv = next.vectors();

  FrameMatch fm;
  fm.permutation.resize(k);
  std::iota(fm.permutation.begin(), fm.permutation.end(), 0);

  // Order preservation allows deviations from the identity only inside
  // degenerate clusters of the incoming sample.
  for (int c = 0; c < next_clusters.count(); ++c) {
    const int a = next_clusters.begin(c);
    const int m = next_clusters.multiplicity(c);
    if (m <= 1 || a + m > k) continue;
    Eigen::MatrixXd overlap(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        overlap(i, j) = std::norm(Complex(pv.col(a + i).dot(nv.col(a + j))));
    std::vector<int> assign = best_block_assignment(overlap);
    for (int i = 0; i < m; ++i) fm.permutation[a + i] = a + assign[i];
  }

  // Quality by subspace, not by individual vectors: sum of squared principal
  // cosines over the coarsest partition refined by both cluster structures.
  std::vector<int> edges;
  std::set_intersection(prev_clusters.boundaries.begin(),
                        prev_clusters.boundaries.end(),
                        next_clusters.boundaries.begin(),
                        next_clusters.boundaries.end(),
                        std::back_inserter(edges));
  fm.score = 0.0;
  for (size_t e = 0; e + 1 < edges.size(); ++e) {
    const int a = edges[e];
    const int m = edges[e + 1] - a;
    if (a >= k) break;
    fm.score += (pv.middleCols(a, std::min(m, k - a)).adjoint() *
                 nv.middleCols(a, std::min(m, k - a)))
                    .squaredNorm();
  }
  return fm;
}

PencilTrace trace_pencil(const HermitianMatrix& a, const HermitianMatrix& b,
                         double t_lo, double t_hi, int grid_size, bool refine,
                         const Tolerances& tol) {
  if (a.n() != b.n()) throw DimensionMismatch("trace_pencil: dimension mismatch");
  if (!(t_lo < t_hi)) throw InvalidArgument("trace_pencil: need t_lo < t_hi");
  if (grid_size < 2) throw InvalidArgument("trace_pencil: grid_size must be >= 2");

  const int n = a.n();
  const int npairs = n - 1;
  const double span = t_hi - t_lo;
  const double gap_tol = 1e-6 * (1.0 + a.frobenius() + b.frobenius());
  const double bnorm = eigh(b).spectrum.max_abs();
  const double loc_width = 1e-8 * span;
  const double stop_width =
      bnorm > 0.0 ? std::min(loc_width, gap_tol / (4.0 * bnorm)) : loc_width;

  std::vector<Sample> samples;
  samples.reserve(grid_size);
  for (int g = 0; g < grid_size; ++g) {
    double t = t_lo + span * g / (grid_size - 1);
    samples.push_back(solve_sample(a, b, t));
  }

  // Pairs of curves that coincide at every base sample are one multiple
  // branch; they are never counted as crossings and never drive refinement.
  std::vector<char> identical(std::max(npairs, 0), 0);
  for (int i = 0; i < npairs; ++i) {
    bool all = true;
    for (const Sample& s : samples)
      if (pair_gap(s, i) > gap_tol) {
        all = false;
        break;
      }
    identical[i] = all;
  }

  if (refine && npairs > 0) {
    // Bisect every interval that could contain a crossing: gaps are
    // 2*||B||_2-Lipschitz, so a zero inside [t_a, t_b] forces the endpoint
    // gaps below 2*||B||_2*dt. Stops once intervals around suspected
    // crossings are narrower than the localization width.
    const int max_inserted = 20000;
    int inserted = 0;
    bool grew = true;
    while (grew && inserted < max_inserted) {
      grew = false;
      std::vector<Sample> added;
      for (size_t g = 0; g + 1 < samples.size(); ++g) {
        const double dt = samples[g + 1].t - samples[g].t;
        if (dt <= stop_width) continue;
        bool feasible = false;
        for (int i = 0; i < npairs && !feasible; ++i) {
          if (identical[i]) continue;
          double gmin =
              std::min(pair_gap(samples[g], i), pair_gap(samples[g + 1], i));
          if (gmin <= 2.0 * bnorm * dt) feasible = true;
        }
        if (feasible) {
          added.push_back(solve_sample(a, b, samples[g].t + 0.5 * dt));
          ++inserted;
        }
      }
      if (!added.empty()) {
        samples.insert(samples.end(), added.begin(), added.end());
        std::sort(samples.begin(), samples.end(),
                  [](const Sample& x, const Sample& y) { return x.t < y.t; });
        grew = true;
      }
    }
  }

  // Crossing extraction: per non-identical pair, a maximal run of samples
  // with gap below the threshold is either a pointlike dip (one event at the
  // gap minimum) or a plateau where the pair rides one multiple branch for a
  // while; plateau events sit at the boundaries where the branches join or
  // separate. Events within the threshold's own resolution merge into one
  // coincidence point.
  struct RawCross {
    double t;
    int pair;  // 0-based lower curve index
    double gap;
  };
  std::vector<RawCross> raw;
  std::vector<double> pair_min(std::max(npairs, 0),
                               std::numeric_limits<double>::infinity());
  const double plateau_tol = std::max(1e-4 * span, 64.0 * stop_width);
  for (int i = 0; i < npairs; ++i) {
    for (const Sample& s : samples)
      pair_min[i] = std::min(pair_min[i], pair_gap(s, i));
    if (identical[i]) continue;
    size_t g = 0;
    while (g < samples.size()) {
      if (pair_gap(samples[g], i) <= gap_tol) {
        size_t best = g, h = g;
        while (h < samples.size() && pair_gap(samples[h], i) <= gap_tol) {
          if (pair_gap(samples[h], i) < pair_gap(samples[best], i)) best = h;
          ++h;
        }
        const size_t last = h - 1;
        if (samples[last].t - samples[g].t <= plateau_tol) {
          raw.push_back({samples[best].t, i, pair_gap(samples[best], i)});
        } else {
          if (g != 0) raw.push_back({samples[g].t, i, pair_gap(samples[g], i)});
          if (h != samples.size())
            raw.push_back({samples[last].t, i, pair_gap(samples[last], i)});
        }
        g = h;
      } else {
        ++g;
      }
    }
  }
  std::sort(raw.begin(), raw.end(),
            [](const RawCross& x, const RawCross& y) { return x.t < y.t; });

  PencilTrace trace;
  trace.gap_tol = gap_tol;
  trace.pair_min_gaps = pair_min;

  const double merge_width = plateau_tol;
  size_t r = 0;
  while (r < raw.size()) {
    size_t h = r;
    Crossing cross;
    cross.min_gap = std::numeric_limits<double>::infinity();
    while (h < raw.size() && raw[h].t - raw[r].t <= merge_width) {
      cross.pairs.emplace_back(raw[h].pair + 1, raw[h].pair + 2);
      if (raw[h].gap < cross.min_gap) {
        cross.min_gap = raw[h].gap;
        cross.t = raw[h].t;
      }
      ++h;
    }
    std::sort(cross.pairs.begin(), cross.pairs.end());
    cross.pairs.erase(std::unique(cross.pairs.begin(), cross.pairs.end()),
                      cross.pairs.end());
    trace.crossings.push_back(std::move(cross));
    r = h;
  }

  // Sequential matching pass: permute frame columns inside degenerate blocks
  // for branch continuity, then align phases to the previous sample.
  std::vector<ClusterStructure> clus(samples.size());
  for (size_t g = 0; g < samples.size(); ++g)
    clus[g] = cluster_spectrum(Spectrum::from_sorted(samples[g].values),
                               tol.cluster);
  for (size_t g = 1; g < samples.size(); ++g) {
    FrameMatch fm = match_frames(OrthonormalFrame::trusted(samples[g - 1].vectors),
                                 OrthonormalFrame::trusted(samples[g].vectors),
                                 clus[g - 1], clus[g]);
    Matrix matched(n, n);
    for (int i = 0; i < n; ++i)
      matched.col(i) = samples[g].vectors.col(fm.permutation[i]);
    for (int i = 0; i < n; ++i) {
      Complex z = samples[g - 1].vectors.col(i).dot(matched.col(i));
      double az = std::abs(z);
      if (az > 1e-12) matched.col(i) *= std::conj(z) / az;
    }
    samples[g].vectors = std::move(matched);
    trace.match_scores.push_back(fm.score);
  }

  trace.grid.reserve(samples.size());
  trace.curves.reserve(samples.size());
  trace.frames.reserve(samples.size());
  for (Sample& s : samples) {
    trace.grid.push_back(s.t);
    trace.curves.push_back(std::move(s.values));
    trace.frames.push_back(std::move(s.vectors));
  }
  return trace;
}

Vector derivative_at(const HermitianMatrix& a, const HermitianMatrix& b,
                     double t, Side side, double tol_cluster) {
  HermitianMatrix at = pencil_at(a, b, t);
  if (side == Side::Right) return first_order_rates(at, b, tol_cluster).nu;
  return -first_order_rates(at, scale(b, -1.0), tol_cluster).nu;
}

std::vector<double> phi_curve(const PencilTrace& trace, const IndexSet& s) {
  if (s.n() != trace.n())
    throw DimensionMismatch("phi_curve: index set dimension " +
                            std::to_string(s.n()) + " vs trace dimension " +
                            std::to_string(trace.n()));
  std::vector<double> phi;
  phi.reserve(trace.curves.size());
  for (const Vector& row : trace.curves) {
    double sum = 0.0;
    for (int i : s.indices()) sum += row(i - 1);
    phi.push_back(sum);
  }
  return phi;
}

double integrate_phi_prime(const HermitianMatrix& a, const HermitianMatrix& b,
                           const IndexSet& s, double t0, double t1,
                           const Tolerances& tol) {
  if (!(t0 < t1)) throw InvalidArgument("integrate_phi_prime: need t0 < t1");
  PencilTrace trace = trace_pencil(a, b, t0, t1, 65, true, tol);

  std::vector<double> cuts{t0};
  const double edge = 1e-12 * (t1 - t0);
  for (const Crossing& c : trace.crossings)
    if (c.t > t0 + edge && c.t < t1 - edge) cuts.push_back(c.t);
  cuts.push_back(t1);
  std::sort(cuts.begin(), cuts.end());

  // 5-point Gauss-Legendre on [-1, 1]
  static const double xs[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                               0.5384693101056831, 0.9061798459386640};
  static const double ws[5] = {0.2369268850561891, 0.4786286704993665,
                               0.5688888888888889, 0.4786286704993665,
                               0.2369268850561891};

  double total = 0.0;
  for (size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double lo = cuts[c], hi = cuts[c + 1];
    const int panels =
        std::max(1, static_cast<int>(std::ceil(24.0 * (hi - lo) / (t1 - t0))));
    for (int p = 0; p < panels; ++p) {
      const double pa = lo + (hi - lo) * p / panels;
      const double pb = lo + (hi - lo) * (p + 1) / panels;
      const double mid = 0.5 * (pa + pb), half = 0.5 * (pb - pa);
      for (int q = 0; q < 5; ++q) {
        Vector nu = derivative_at(a, b, mid + half * xs[q], Side::Right,
                                  tol.cluster);
        double dphi = 0.0;
        for (int i : s.indices()) dphi += nu(i - 1);
        total += ws[q] * half * dphi;
      }
    }
  }
  return total;
}

}  // namespace wielandt
