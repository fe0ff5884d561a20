#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "carflow/densemat.hpp"
#include "carflow/fock.hpp"

// Data-parallel kernels with serial reference twins.
//
// The parallel paths are deterministic: every output slot is produced by
// exactly one task with a fixed inner summation order, and sums of operator
// terms use a fixed fan-in-two tree, so results are bit-identical for any
// thread count.  The *_reference twins are straightforward serial
// implementations kept for testing and benchmarking.
namespace carflow::kernels {

bool parallel_enabled();
int max_threads();

// c = a (compose) b, applying b first.
fock::FockOperator compose(const fock::FockOperator& a, const fock::FockOperator& b);
fock::FockOperator compose_reference(const fock::FockOperator& a, const fock::FockOperator& b);

// Second quantization by k x k determinant minors, parallel over source masks.
fock::FockOperator sq_minors(const DenseMatrix& w);
fock::FockOperator sq_minors_reference(const DenseMatrix& w);

// Sum of operator terms by a fixed fan-in-two tree (empty sum = zero operator
// of the given shape).
fock::FockOperator tree_sum(std::vector<fock::FockOperator> terms,
                            int target_modes, int source_modes);
fock::FockOperator tree_sum_reference(std::vector<fock::FockOperator> terms,
                                      int target_modes, int source_modes);

// First candidate (in the given order) satisfying pred; block-parallel scan.
std::optional<Point> first_match(const std::vector<Point>& candidates,
                                 const std::function<bool(const Point&)>& pred);
std::optional<Point> first_match_reference(const std::vector<Point>& candidates,
                                           const std::function<bool(const Point&)>& pred);

}  // namespace carflow::kernels
