#ifndef IFSKIT_SYMBOLIC_HPP
#define IFSKIT_SYMBOLIC_HPP

#include <cstdint>
#include <vector>

#include "ifskit/geometry.hpp"
#include "ifskit/measures.hpp"

namespace ifskit {

/// Depth-K truncation of the shift space Omega = {0..N-1}^inf. Words of
/// length K are enumerated lexicographically; index 0 is (0,...,0).
struct ShiftSpaceModel {
    int alphabet_size = 2;  // N
    int depth = 1;          // K

    ShiftSpaceModel(int n, int k);

    std::size_t word_count() const;                 // N^K
    std::size_t index_of(const Word& w) const;      // |w| = K required
    Word word_at(std::size_t index) const;
    double word_weight() const;                     // Bernoulli mass N^{-K}
};

/// Cylinder set: all depth-K words extending `prefix`.
struct Cylinder {
    Word prefix;
};

/// Metric on equal-length truncated words: 2^{-j} with j the first differing
/// position (1-based); 0 when equal.
double omega_metric(const Word& alpha, const Word& beta);

/// eta_i: prepend i; when the result would exceed depth K the last letter is
/// dropped (truncation semantics).
Word shift_in(int letter, const Word& w, const ShiftSpaceModel& model);

/// eta: drop the first letter. Domain error on the empty word.
Word shift_out(const Word& w);

/// Bernoulli mass of a cylinder: N^{-|prefix|}.
double bernoulli_mass(const Cylinder& c, const ShiftSpaceModel& model);

/// Preimage of a cylinder under eta_i: the cylinder whose mass eta_i pulls
/// back, or empty (nullopt semantics via `exists`) when the first letters clash.
struct CylinderPreimage {
    bool exists = false;
    Cylinder cylinder;  // valid when exists
};
CylinderPreimage shift_in_preimage(int letter, const Cylinder& c);

/// sigma_{w_1} o ... o sigma_{w_K} applied to the fixed point of sigma_0.
/// Matches the atoms of hutchinson_measure at the same depth bit for bit.
Point coding_point(const IFSystem& ifs, const Word& w);

/// Depth-K cylinders whose coding point lies in `delta` (a finite union of
/// closed intervals, 1-D). Cylinders whose ratio^K * diam(box) ball straddles
/// an endpoint of delta are flagged ambiguous.
struct CodingPreimage {
    std::vector<Word> inside;
    std::vector<Word> ambiguous;  // subset of inside plus near-miss outsiders
};
CodingPreimage coding_preimage(const IFSystem& ifs, const IntervalUnion& delta,
                               const ShiftSpaceModel& model);

}  // namespace ifskit

#endif
