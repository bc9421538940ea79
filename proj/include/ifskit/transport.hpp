#ifndef IFSKIT_TRANSPORT_HPP
#define IFSKIT_TRANSPORT_HPP

#include <cstddef>
#include <vector>

#include "ifskit/measures.hpp"

namespace ifskit {

/// 1-Lipschitz dual potential on a list of support points; values are pinned
/// to 0 at base_index (the objective pairs against two probability measures,
/// so the pin never changes the value).
struct LipPotential {
    std::vector<double> values;
    std::size_t base_index = 0;
};

/// Result of the exact transport LP. `potential` is a Lipschitz dual potential
/// on the concatenated supports (mu atoms first, then nu atoms);
/// dual_feasible reports that it passes lip_check and closes the duality gap.
struct TransportResult {
    double value = 0.0;
    int iterations = 0;
    LipPotential potential;
    std::vector<Point> support;  // points the potential lives on
    bool dual_feasible = false;
};

/// Kantorovich metric H: exact optimal value of the finite transport LP with
/// Euclidean ground cost. Inputs must be probability measures.
TransportResult kantorovich_h_full(const DiscreteMeasure& mu, const DiscreteMeasure& nu);
double kantorovich_h(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Independent 1-D oracle: integral of |F_mu - F_nu| over the line, summed
/// exactly over sorted breakpoints.
double kantorovich_h_cdf_oracle(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Bounded metric MH: Kantorovich sup restricted to ||f||_inf <= 1. Computed
/// as the transport LP with truncated ground cost min(d, 2); always <= min(2, H).
TransportResult modified_kantorovich_full(const DiscreteMeasure& mu, const DiscreteMeasure& nu);
double modified_kantorovich(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// True iff |f_i - f_j| <= d(p_i, p_j) + tol for all pairs and f[base] = 0.
bool lip_check(const LipPotential& f, const std::vector<Point>& points, double tol = 1e-12);

}  // namespace ifskit

#endif
