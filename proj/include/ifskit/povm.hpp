#ifndef IFSKIT_POVM_HPP
#define IFSKIT_POVM_HPP

#include <cstdint>
#include <vector>

#include "ifskit/operators.hpp"

namespace ifskit {

/// Partition of the bounding interval into half-open cells [e_j, e_{j+1});
/// the last cell is closed on the right. Representatives are midpoints.
class CellPartition {
public:
    explicit CellPartition(std::vector<double> edges);
    static CellPartition uniform(double lo, double hi, int cells);

    std::size_t cell_count() const { return edges_.size() - 1; }
    double lo(std::size_t j) const { return edges_[j]; }
    double hi(std::size_t j) const { return edges_[j + 1]; }
    double rep(std::size_t j) const { return 0.5 * (edges_[j] + edges_[j + 1]); }
    double width(std::size_t j) const { return edges_[j + 1] - edges_[j]; }
    double mesh() const;
    double span_lo() const { return edges_.front(); }
    double span_hi() const { return edges_.back(); }
    bool covers(double x) const { return x >= span_lo() && x <= span_hi(); }
    std::size_t cell_of(double x) const;  // precondition: covers(x)

    bool operator==(const CellPartition& other) const { return edges_ == other.edges_; }

private:
    std::vector<double> edges_;
};

/// POVM on a finite partition: one weighted-self-adjoint PSD matrix per cell,
/// summing to the identity. Finite additivity is by construction (the value
/// of a union of cells is the sum of the cell values).
struct POVMTable {
    CellPartition partition;
    SpacePtr space;
    std::vector<Matrix> values;

    const Matrix& value(std::size_t cell) const { return values.at(cell); }
    /// Value of an arbitrary interval: exact on unions of cells, proportional
    /// splitting of straddled cells otherwise.
    Matrix value_on_interval(double lo, double hi) const;
};

/// Invariant diagnostics: PSD floor, distance of the total from the identity,
/// worst per-cell idempotency defect (diagnostic only; POVMs need not be PVMs).
struct POVMDiagnostics {
    double min_eigenvalue = 0.0;
    double sum_identity_defect = 0.0;
    double max_idempotency_defect = 0.0;
};

POVMDiagnostics povm_diagnostics(const POVMTable& table, bool precise = true);

/// cell -> mu_K(cell) * id.
POVMTable trivial_povm(const CellPartition& partition, const DiscreteMeasure& mu_k,
                       const SpacePtr& space);
/// cell -> diagonal indicator of the atoms in the cell (multiplication PVM).
POVMTable multiplication_pvm(const CellPartition& partition, const DiscreteMeasure& mu_k,
                             const SpacePtr& space);

/// The canonical projection-valued measure on cylinder sets of the depth-K
/// shift space: E(cylinder) = diagonal indicator, exactly a projection.
struct CylinderPVM {
    ShiftSpaceModel model;
    SpacePtr space;

    Matrix value(const Cylinder& c) const;
    Matrix value_of_words(const std::vector<Word>& depth_k_words) const;
};

CylinderPVM build_cylinder_pvm(const ShiftSpaceModel& model);

/// One application of the POVM transfer map
///   B(.) -> sum_i S_i B(sigma_i^{-1}(.)) S_i^*,
/// with preimages computed exactly (affine inverses of intervals) and off-grid
/// intervals evaluated by proportional splitting of straddled cells.
POVMTable povm_transfer(const IFSystem& ifs, const CuntzFamily& family, const POVMTable& b);

/// Finite surrogate for the sup over Lip_1(X): distance functions to every
/// cell representative plus seeded McShane-regularized random functions.
struct LipDictionary {
    std::vector<std::vector<double>> values_at_reps;
    std::uint64_t seed = 0;
};

LipDictionary lip_dictionary_generate(const CellPartition& partition, int count,
                                      std::uint64_t seed);

/// Bracket for the generalized Kantorovich distance at partition resolution.
/// lower: max over the dictionary of || sum_c f(rep_c) (A-B)(c) ||, a certified
/// lower bound (each value is a Rayleigh quotient of an integrated difference).
/// upper: 2*mesh + sum_c ||(A-B)(c)|| with Frobenius-dominated cell norms.
struct RhoEstimate {
    double lower = 0.0;
    double upper = 0.0;
    int dictionary_size = 0;
    double mesh = 0.0;
};

RhoEstimate rho_estimate(const POVMTable& a, const POVMTable& b, const LipDictionary& dict);

enum class FixpointStart { trivial, multiplication_pvm };

struct FixpointStep {
    double res_lower = 0.0;
    double res_upper = 0.0;
    double min_eig = 0.0;
    double sum_defect = 0.0;
};

struct FixpointResult {
    POVMTable table;
    std::vector<FixpointStep> history;
    double fitted_ratio = 0.0;  // median of successive residual ratios after burn-in
    int iterations = 0;
};

/// Banach iteration for the fixed POVM. Stops when the certified residual
/// lower bound drops to tol; throws ConvergenceError (with residual history)
/// past max_iter.
FixpointResult povm_fixpoint(const IFSystem& ifs, const CuntzFamily& family,
                             const DiscreteMeasure& mu_k, const CellPartition& partition,
                             const LipDictionary& dict, double tol, int max_iter,
                             FixpointStart start = FixpointStart::trivial);

/// Per-cell Naimark defect || V^* E(pi^{-1}(cell)) V - A(cell) ||. Membership
/// of coding points uses the partition's own cell assignment; cylinders whose
/// ratio^K ball straddles a cell edge contribute a reported slack term.
struct DilationReport {
    std::vector<double> defects;
    std::vector<double> slacks;
    std::vector<int> ambiguous_counts;
    double max_defect = 0.0;
    double constant = 0.0;  // max_defect / ratio^K
};

DilationReport dilation_check(const IFSystem& ifs, const ShiftSpaceModel& model,
                              const POVMTable& a, const MatrixOperator& v);

}  // namespace ifskit

#endif
