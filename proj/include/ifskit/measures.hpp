#ifndef IFSKIT_MEASURES_HPP
#define IFSKIT_MEASURES_HPP

#include <optional>
#include <vector>

#include "ifskit/geometry.hpp"

namespace ifskit {

/// Closed interval on the line; finite unions of these model the truncation
/// sets K_n and arbitrary Borel test sets at desk scale.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const { return x >= lo && x <= hi; }
};

using IntervalUnion = std::vector<Interval>;

bool interval_union_contains(const IntervalUnion& u, double x);

/// Finitely supported probability measure. Atoms are pairwise distinct,
/// weights are positive and sum to 1 (within 1e-12). Atoms may carry word
/// provenance labels recording which composition produced them.
class DiscreteMeasure {
public:
    DiscreteMeasure(std::vector<Point> atoms, std::vector<double> weights);
    DiscreteMeasure(std::vector<Point> atoms, std::vector<double> weights,
                    std::vector<Word> labels);

    std::size_t size() const { return atoms_.size(); }
    int dimension() const { return atoms_.front().dim; }
    const std::vector<Point>& atoms() const { return atoms_; }
    const std::vector<double>& weights() const { return weights_; }
    bool has_labels() const { return !labels_.empty(); }
    const std::vector<Word>& labels() const { return labels_; }

    double mass_on(const IntervalUnion& set) const;
    double total_mass() const;

private:
    void validate() const;

    std::vector<Point> atoms_;
    std::vector<double> weights_;
    std::vector<Word> labels_;  // empty or one per atom
};

/// One application of the transfer operator T(nu) = sum_i (1/N) nu o sigma_i^{-1}.
/// Images that coincide (exactly, or within merge_radius when positive) are
/// merged with summed weights; provenance labels gain the map index in front.
DiscreteMeasure transfer_step(const IFSystem& ifs, const DiscreteMeasure& nu,
                              double merge_radius = 0.0);

/// T^depth(delta_{x*}) with x* the fixed point of sigma_0; atoms carry
/// length-`depth` word labels.
DiscreteMeasure hutchinson_measure(const IFSystem& ifs, int depth, double merge_radius = 0.0);

/// The escaping-mass Cauchy sequence nu_n = 2^{-n} delta_{x_0} + sum_k 2^{-k} delta_{x_k}.
/// Requires |x_0 - x_k| <= k.
DiscreteMeasure kravchenko_sequence(int n, const std::vector<double>& positions);

/// Conditional measure mu(. intersect K)/mu(K); domain error when mu(K) = 0.
DiscreteMeasure truncate_measure(const DiscreteMeasure& mu, const IntervalUnion& k);

/// Nested truncations mu_n = mu(. intersect K_n)/mu(K_n) for K_1 <= K_2 <= ...
struct TruncationFamily {
    DiscreteMeasure base;
    std::vector<IntervalUnion> sets;
    std::vector<DiscreteMeasure> members;
};

TruncationFamily make_truncation_family(const DiscreteMeasure& base,
                                        std::vector<IntervalUnion> nested_sets);

}  // namespace ifskit

#endif
