#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dpplab/combi.hpp"
#include "dpplab/core/rng.hpp"
#include "dpplab/kernel.hpp"

// Exact sampling of the finite-N determinantal processes (sequential
// conditional densities with rejection), Bernoulli thinning, the random
// projection construction, Monte Carlo cumulant estimation and empirical
// correlation checks.

namespace dpplab::sampler {

struct PointConfig {
  int dimension = 1;
  std::vector<Point> pts;
  std::string model;
  int N = 0;  // rank of the sampled projection
  std::uint64_t seed = 0, replica = 0;
};

// Proposal distribution dominating the normalized diagonal: the guarantee is
// K(x,x) / rank <= margin() * density(x) everywhere.
class Proposal {
 public:
  virtual ~Proposal() = default;
  virtual Point sample(RngStream&) const = 0;
  virtual double density(Point p) const = 0;  // w.r.t. the reference measure
  virtual double margin() const = 0;
};

// Piecewise-constant envelope over the 1-d kernel diagonal; cell bounds are
// taken from a refined scan and verified on a finer audit grid.
std::unique_ptr<Proposal> envelope_proposal_1d(const Kernel& K, int cells = 512);

// Exact mixture for radial finite kernels: uniform mode, the exact radial law
// of |phi_k|^2 (Gamma in |z|^2 for the quadratic potential), uniform angle.
// Density equals K(z,z)/N exactly, so margin() == 1.
std::unique_ptr<Proposal> mixture_proposal_2d(const Kernel& K);

struct HkpvOptions {
  long proposal_budget = 10000;  // per point, before declaring envelope failure
};

// Draws exactly basis.size() points of the projection process.
PointConfig hkpv_sample(const ProjectionBasis& basis, const Proposal& prop,
                        RngStream& rng, const HkpvOptions& = {});

// Same, restricted to the sub-projection spanned by the kept mode indices.
PointConfig hkpv_sample_subset(const ProjectionBasis& basis,
                               const std::vector<int>& keep, const Proposal& prop,
                               RngStream& rng, const HkpvOptions& = {});

// Keeps each point independently with probability p.
PointConfig bernoulli_thin(const PointConfig& cfg, double p, RngStream& rng);

// Draws Bernoulli(p) mode indicators, then samples the retained projection;
// equal in law to thinning an exact sample.
PointConfig random_projection_sample(const ProjectionBasis& basis, double p,
                                     const Proposal& prop, RngStream& rng,
                                     const HkpvOptions& = {});

// Unbiased cumulant estimators (k-statistics) with jackknife standard errors.
struct KStats {
  std::array<double, 5> k{};   // k[1..max_order]
  std::array<double, 5> se{};  // jackknife standard errors
  long n = 0;
};
KStats mc_cumulants(const std::vector<double>& samples, int max_order = 4);

// Interval (1-d) or disk (2-d) observation window.
struct Window {
  Point center;
  double radius = 0.0;
};

long count_in(const PointConfig& cfg, const Window& w);

struct MomentEstimate {
  double value = 0.0;
  double se = 0.0;
  long replicas = 0;
};

// Monte Carlo estimate of E[ prod_j binom(count_j, k_j) ] over disjoint
// windows.
MomentEstimate empirical_binomial_moment(const std::vector<PointConfig>& reps,
                                         const std::vector<Window>& windows,
                                         const combi::Composition& k);

// Two-sample Kolmogorov-Smirnov p-value.
double ks_two_sample_p(std::vector<double> a, std::vector<double> b);

}  // namespace dpplab::sampler
