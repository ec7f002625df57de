#pragma once

// Conditional coverage, its moments and the beta-approximated meta
// distribution for a typical ground user under a Poisson constellation.

#include <span>
#include <string>

#include "leocov/geometry.hpp"
#include "leocov/special.hpp"

namespace leocov::analytic {

struct EtaConstant {
    int m = 1;
    double eta = 1.0;
};

/// eta = M (M!)^(-1/M), the constant of the Alzer bound
/// F(x) >= (1 - exp(-eta x))^M on the unit-mean Gamma(M) CDF.
EtaConstant eta(int m);

/// Quadrature orders for the distance-to-server integral (outer) and the
/// interference-field integral (inner).
struct QuadratureOrders {
    int outer = 768;
    int inner = 768;
};

class QuadratureRules {
public:
    explicit QuadratureRules(QuadratureOrders orders = {})
        : outer_(orders.outer), inner_(orders.inner)
    {
    }

    const special::ChebyshevRule& outer() const { return outer_; }
    const special::ChebyshevRule& inner() const { return inner_; }
    QuadratureOrders orders() const { return {outer_.order(), inner_.order()}; }

private:
    special::ChebyshevRule outer_;
    special::ChebyshevRule inner_;
};

struct MomentResult {
    int order_b = 1;
    double theta = 0.0;
    double value = 0.0;
    double unclamped = 0.0;  // quadrature output before clamping to [0, 1]
    int quad_outer = 0;
    int quad_inner = 0;
};

struct BetaFit {
    double kappa = 0.0;
    double beta = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    bool valid = false;
    std::string diagnostic;
};

/// Coverage probability of a fixed constellation, averaged over fading only.
/// `interferers` are the distances of every visible satellite except the
/// serving one, sorted ascending, each >= r1 and <= max_distance. Exact for
/// nakagami_m == 1, a tight approximation otherwise.
double conditional_coverage_lemma1(double theta, double r1, std::span<const double> interferers,
                                   const SystemConfig& config);

/// Density of the serving distance given at least one visible satellite.
/// Zero outside [altitude, max_distance].
double nearest_distance_pdf(double r, const SystemConfig& config, const DerivedGeometry& geo);

/// Closed-form CDF of the serving distance given visibility.
double nearest_distance_cdf(double r, const SystemConfig& config, const DerivedGeometry& geo);

/// Exponent of the interference-field generating functional beyond r1 for
/// one composition b_vector of b into M parts:
///     2 pi lambda (R_S/R_E) int_{r1}^{R_max} (1 - prod_m (1 + m eta theta r1^a / (M r^a))^{-M b_m}) r dr
double q_exponent(double r1, double theta, std::span<const int> b_vector, const SystemConfig& config,
                  const DerivedGeometry& geo, const special::ChebyshevRule& inner);

/// b-th moment of the conditional coverage probability at threshold theta.
/// The per-composition outer integrals run on `threads` workers (0 = all
/// cores) and are combined in composition order.
MomentResult moment(int b, double theta, const SystemConfig& config, const DerivedGeometry& geo,
                    const QuadratureRules& rules, unsigned threads = 1);

/// The first moment: mean coverage over users.
double coverage_probability(double theta, const SystemConfig& config, const DerivedGeometry& geo,
                            const QuadratureRules& rules);

/// M2 - M1^2, the spread of per-user coverage. Small negative values from
/// quadrature are clamped to zero; values below -1e-6 also emit a warning.
double variance(double theta, const SystemConfig& config, const DerivedGeometry& geo,
                const QuadratureRules& rules);

/// Beta distribution with mean m1 and second raw moment m2. Invalid unless
/// 0 < m1 < 1 and m1^2 < m2 < m1.
BetaFit beta_fit(double m1, double m2);

/// 1 - I_x(kappa, beta). Throws UnfittableMoments on an invalid fit.
double meta_ccdf(const BetaFit& fit, double x);

/// Fraction of users whose coverage at threshold theta exceeds x, under the
/// beta approximation. The atom at zero from an empty sky is not modeled;
/// see DerivedGeometry::visibility_probability.
double meta_ccdf(double theta, double x, const SystemConfig& config, const DerivedGeometry& geo,
                 const QuadratureRules& rules);

}  // namespace leocov::analytic
