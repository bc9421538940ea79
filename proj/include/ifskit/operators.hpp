#ifndef IFSKIT_OPERATORS_HPP
#define IFSKIT_OPERATORS_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ifskit/linalg.hpp"
#include "ifskit/measures.hpp"
#include "ifskit/symbolic.hpp"

namespace ifskit {

/// Finite-dimensional weighted Hilbert space: <f, g> = sum_i w_i f_i conj(g_i).
/// Labels name the basis entries (word strings or atom labels).
class HilbertSpace {
public:
    HilbertSpace(std::vector<std::string> labels, std::vector<double> weights);

    std::size_t dim() const { return weights_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<double>& weights() const { return weights_; }

    cplx inner(const std::vector<cplx>& f, const std::vector<cplx>& g) const;
    double norm(const std::vector<cplx>& f) const;

private:
    std::vector<std::string> labels_;
    std::vector<double> weights_;
};

using SpacePtr = std::shared_ptr<const HilbertSpace>;

/// Cylinder space L^2(Omega_K, P): uniform weights N^{-K}, word-string labels.
SpacePtr cylinder_space(const ShiftSpaceModel& model);
/// Atom space L^2(X, mu_K): weights are atom masses, labels the provenance words.
SpacePtr atom_space(const DiscreteMeasure& mu_k);

/// Dense operator between weighted spaces. Entries act on coordinates:
/// (A f)_i = sum_j entries(i, j) f_j.
struct MatrixOperator {
    Matrix entries;  // codomain.dim x domain.dim
    SpacePtr domain;
    SpacePtr codomain;

    std::vector<cplx> apply(const std::vector<cplx>& f) const { return entries.apply(f); }
};

MatrixOperator compose(const MatrixOperator& a, const MatrixOperator& b);  // a after b
MatrixOperator operator_difference(const MatrixOperator& a, const MatrixOperator& b);
MatrixOperator identity_operator(const SpacePtr& space);

/// Unique B with <A x, y>_cod = <x, B y>_dom; in coordinates W_dom^{-1} A^H W_cod.
MatrixOperator adjoint(const MatrixOperator& op);

/// Largest singular value with respect to the weighted inner products
/// (symmetric eigen-decomposition of the weighted Gram form).
double operator_norm(const MatrixOperator& op);

/// PSD floor of a weighted-self-adjoint operator: min eigenvalue of the
/// conjugated Hermitian form W^{1/2} A W^{-1/2}.
double weighted_min_eig(const MatrixOperator& op);

/// Projects a square matrix onto the weighted-self-adjoint part.
Matrix weighted_hermitian_part(const Matrix& a, const std::vector<double>& weights);

struct CuntzFamily {
    enum class Flavor { geometric, symbolic };

    std::vector<MatrixOperator> isometries;  // S_0 ... S_{N-1} on one space
    Flavor flavor = Flavor::geometric;

    std::size_t size() const { return isometries.size(); }
    const SpacePtr& space() const { return isometries.front().domain; }
    const MatrixOperator& s(std::size_t i) const { return isometries.at(i); }
};

/// Cuntz relation diagnostics: ||sum S_i S_i^* - id|| and, per pair,
/// ||S_i^* S_j - delta_ij id|| restricted to the depth-(K-1) subspace where
/// relation (2) is exact at finite truncation.
struct CuntzRelationReport {
    double identity_sum_defect = 0.0;       // relation (1), full space
    double relation2_subspace_defect = 0.0; // relation (2), depth-matched subspace
    double relation2_full_defect = 0.0;     // relation (2), full space (diagnostic)
};

/// T_i on the depth-K cylinder space: (T_i phi)(w) = [w_1 = i] sqrt(N) E[phi | w_2..w_K].
/// Relation (1) holds exactly; relation (2) holds exactly on depth-(K-1) functions.
CuntzFamily build_t_family(const ShiftSpaceModel& model);

/// Composition-averaging projector onto functions constant on the last letter
/// (the depth-(K-1) subspace in its depth-K embedding). Requires labels to be
/// length-K words over the family's alphabet.
Matrix last_letter_averaging(const ShiftSpaceModel& model);

enum class FMode { direct, symbolic };

struct FFamilyResult {
    std::vector<MatrixOperator> f_ops;  // F_i
    CuntzFamily s_family;               // S_i = adjoint(F_i)
};

/// Geometric operator family on L^2(X, mu_K).
///   direct:   (F_i phi)(x) = (1/sqrt N) phi(atom nearest sigma_i(x))
///   symbolic: F_i = V^* T_i^* V with V the coding isometry
/// mu_k must carry word provenance labels.
FFamilyResult build_f_family(const IFSystem& ifs, const DiscreteMeasure& mu_k, FMode mode,
                             double match_tolerance = 0.0);

/// V: L^2(X, mu_K) -> L^2(Omega_K, P), (V f)(w) = f(atom of w). V^* V = id
/// exactly by weight bookkeeping; V is unitary when no atoms merged.
MatrixOperator coding_isometry(const IFSystem& ifs, const ShiftSpaceModel& model,
                               const DiscreteMeasure& mu_k, double match_tolerance = 0.0);

CuntzRelationReport cuntz_relation_report(const CuntzFamily& family,
                                          const ShiftSpaceModel& model);

/// 1-Lipschitz witness dictionary evaluated at the atoms of mu_k: distance
/// functions to seeded anchor points in the bounding box.
std::vector<std::vector<double>> lipschitz_witness_dictionary(const IFSystem& ifs,
                                                              const DiscreteMeasure& mu_k,
                                                              int count, std::uint64_t seed);

struct IntertwiningDefect {
    double operator_norm_defect = 0.0;  // ||V F_i - T_i^* V||
    double lipschitz_witness = 0.0;     // max_f ||(V F_i - T_i^* V) f|atoms||_P, f 1-Lipschitz
};

IntertwiningDefect intertwining_defect(const MatrixOperator& v, const MatrixOperator& f_i,
                                       const MatrixOperator& t_i,
                                       const std::vector<std::vector<double>>& lip_values);

/// P_k(a) = S_{a_1}...S_{a_k} (S_{a_1}...S_{a_k})^*.
MatrixOperator word_projection(const CuntzFamily& family, const Word& a);

/// p_h(i) = <S_i S_i^* h, h> = ||S_i^* h||^2 for a unit state h.
std::vector<double> measurement_probs(const CuntzFamily& family, const std::vector<cplx>& h);

}  // namespace ifskit

#endif
