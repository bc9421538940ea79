#ifndef IFSKIT_IO_HPP
#define IFSKIT_IO_HPP

#include <string>

#include "ifskit/geometry.hpp"
#include "ifskit/measures.hpp"
#include "ifskit/operators.hpp"
#include "ifskit/povm.hpp"

namespace ifskit {

/// 17-significant-digit decimal rendering; round-trips doubles exactly.
std::string format_double(double v);

/// Point clouds: one point per row, fixed column order (x[,y]).
std::string cloud_to_csv(const PointCloud& cloud);

/// Measures: atom coordinates, weight, optional word label.
std::string measure_to_csv(const DiscreteMeasure& m);
DiscreteMeasure measure_from_csv(const std::string& text);

/// Operator export: header with dims and weights, then dense rows.
std::string operator_to_text(const MatrixOperator& op);

/// POVM table: partition edges, then per-cell Hermitian matrices as
/// row-major re/im pairs (JSON).
std::string povm_to_json(const POVMTable& table);

/// Convergence report rows: iteration, res_lower, res_upper, min_eig, sum_defect.
std::string fixpoint_history_to_csv(const std::vector<FixpointStep>& history);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace ifskit

#endif
