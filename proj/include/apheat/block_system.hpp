#pragma once

#include <vector>

#include "apheat/sparse.hpp"

namespace apheat {

/// Coupled (u, q) system. All blocks use the full lattice numbering; q DOFs
/// flagged in `q_essential` carry the homogeneous inflow condition.
struct BlockSystem {
  SparseMatrix uu, uq, qu, qq;
  std::vector<double> rhs_u, rhs_q;
  std::vector<bool> q_essential;
};

/// Global system with u unknowns first and q unknowns second. Essential q
/// rows and columns are replaced by the identity with a zero right-hand side.
struct ComposedSystem {
  SparseMatrix matrix;
  std::vector<double> rhs;
  int n_u = 0;
  int n_q = 0;
};

ComposedSystem compose(const BlockSystem& blocks);

/// Maps lattice DOFs to the restricted q numbering (-1 for essential DOFs).
std::vector<int> restricted_numbering(const std::vector<bool>& essential);

/// Splits a global solution into u and the restricted q vector.
std::pair<DofVector, DofVector> split_solution(const ComposedSystem& system,
                                               const std::vector<bool>& q_essential,
                                               std::span<const double> solution);

}  // namespace apheat
