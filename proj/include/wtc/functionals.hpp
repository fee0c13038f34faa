#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "wtc/grid.hpp"
#include "wtc/interval.hpp"
#include "wtc/measure.hpp"

namespace wtc {

enum class ApKind { Classical, OneTailed, OneTailedDual, TwoTailed, Offset };
enum class KernelKind { Standard, Reproducing };

std::string_view toString(ApKind kind);
std::optional<ApKind> parseApKind(std::string_view name);

struct PoissonKind {
  KernelKind kernel = KernelKind::Standard;
  double alpha = 0;
};

struct Exponents {
  double p = 2;
  double alpha = 0;
  KernelKind kernel = KernelKind::Standard;

  double pPrime() const { return p / (p - 1); }
};

/// mu(I) / |I|^(1-alpha).
double avgDensity(const Measure& mu, const Interval& iv, double alpha = 0);
Rat avgDensityExact(const Measure& mu, const Interval& iv);

/// Integral of the kernel against mu, with dist(x,I) = 0 inside I.
/// outsideOnly drops the closed interval I itself.
double poisson(const Interval& iv, const Measure& mu, PoissonKind kind = {},
               bool outsideOnly = false);
/// Standard kernel with alpha = 0.
Rat poissonExact(const Interval& iv, const Measure& mu, bool outsideOnly = false);

/// Root form: classical = avg(w)^(1/p) avg(s)^(1/p'), etc. Offset has no root
/// and always uses p = 2.
double apLocal(const Measure& omega, const Measure& sigma, const Interval& iv, const Exponents& e,
               ApKind kind);
/// p-th power of apLocal (identical to it for Offset).
double apLocalPower(const Measure& omega, const Measure& sigma, const Interval& iv,
                    const Exponents& e, ApKind kind);
/// apLocalPower with p = 2, alpha = 0.
Rat apLocalPowerExact(const Measure& omega, const Measure& sigma, const Interval& iv, ApKind kind);

/// Max of fn over the family; ties keep the earliest member.
SupResult supOverFamily(const std::function<double(const Interval&)>& fn,
                        const ScanFamily& family);

/// Integral of (M 1_I)^p against w. Throws AtomPresent.
double maximalIndicatorIntegral(const Measure& w, const Interval& iv, double p);
Rat maximalIndicatorIntegralExact(const Measure& w, const Interval& iv, long p);

struct ProfilePoint {
  double size;   // |E| / |I|
  double ratio;  // w(E) / denominator
};

/// Prefix unions of the base^resolution cells of I, densest first.
std::vector<ProfilePoint> cpProfile(const Measure& w, const Interval& iv, double p,
                                    int resolution, int base = 2);
std::vector<ProfilePoint> aInfinityProfile(const Measure& w, const Interval& iv, int resolution,
                                           int base = 2);
/// max ratio / size over the curve.
double profileSlope(const std::vector<ProfilePoint>& curve);
/// Smallest prefix whose ratio reaches target.
std::optional<ProfilePoint> firstReaching(const std::vector<ProfilePoint>& curve, double target);

struct DoublingResult {
  double value = 0;
  std::optional<Interval> witness;
  std::uint64_t scanned = 0;
  std::uint64_t skipped = 0;  // members with mu(I) = 0
};

/// max of mu(factor I) / mu(I) over the family (concentric dilation).
DoublingResult doublingConstant(const Measure& mu, const ScanFamily& family, int factor);
/// min of the same ratio.
DoublingResult reverseDoublingConstant(const Measure& mu, const ScanFamily& family, int factor);

/// Lower bound for the A1 constant from family intervals containing each sample.
/// Throws ZeroDensity.
double a1Constant(const Measure& w, const std::vector<double>& samples, const ScanFamily& family);

/// Variance of position under omega on I over |I|^2. Throws ZeroMass.
Rat energyE2(const Interval& iv, const Measure& omega, Closure closure = Closure::Closed);

/// Sum over cells of omega(I_r) [E^2] P(I_r, 1_{I0} sigma)^p, divided by sigma(I0).
double pivotalSum(const Measure& omega, const Measure& sigma, const Partition& part,
                  const Exponents& e, bool withEnergy);
/// p = 2, alpha = 0.
Rat pivotalSumExact(const Measure& omega, const Measure& sigma, const Partition& part,
                    bool withEnergy);

struct MaximalResult {
  double value = 0;
  bool depthExhausted = false;  // atoms of sigma or omega met at the leaf level
  std::uint64_t leaves = 0;
};

/// Integral over I of (M_d 1_I sigma)^p d omega on the dyadic tree rooted at
/// I, resolved to maxDepth.
MaximalResult dyadicMaximalIntegral(const Measure& sigma, const Measure& omega,
                                    const Interval& iv, double p, int maxDepth);
/// dyadicMaximalIntegral / sigma(I). Throws ZeroMass.
double sawyerRatio(const Measure& omega, const Measure& sigma, const Interval& iv, double p,
                   int maxDepth);

struct RieszResult {
  double sup = 0;
  double normalized = 0;  // sup / (mu(I) |I|^(alpha-1))
  std::optional<double> argmax;
};

/// Max over samples of the integral over I of |x-y|^(alpha-1) d mu(y).
/// Throws SingularSample.
RieszResult rieszPotentialSup(const Measure& mu, const Interval& iv, double alpha,
                              const std::vector<double>& samples);
/// n cell midpoints of I.
std::vector<double> midpointSamples(const Interval& iv, int n);

/// avg(w) avg(w^(1-p'))^(p-1); infinite when w vanishes on part of I.
double oneWeightAp(const Measure& w, const Interval& iv, double p);

struct PowerWeightBound {
  bool finite = false;
  double value = 0;
};

PowerWeightBound powerWeightApBound(double alphaExp, double p);

}  // namespace wtc
