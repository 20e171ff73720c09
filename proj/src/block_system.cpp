#include "apheat/block_system.hpp"

namespace apheat {

namespace {

void append_block(TripletList& out, const SparseMatrix& block, int row_offset, int col_offset,
                  const std::vector<bool>* drop_rows, const std::vector<bool>* drop_cols) {
  const auto ptr = block.row_ptr();
  const auto idx = block.col_idx();
  const auto val = block.values();
  for (int r = 0; r < block.rows(); ++r) {
    if (drop_rows && (*drop_rows)[r]) continue;
    for (int k = ptr[r]; k < ptr[r + 1]; ++k) {
      if (drop_cols && (*drop_cols)[idx[k]]) continue;
      out.add(row_offset + r, col_offset + idx[k], val[k]);
    }
  }
}

}  // namespace

ComposedSystem compose(const BlockSystem& b) {
  const int nu = b.uu.rows();
  const int nq = b.qq.rows();
  const bool consistent = b.uu.cols() == nu && b.qq.cols() == nq && b.uq.rows() == nu &&
                          b.uq.cols() == nq && b.qu.rows() == nq && b.qu.cols() == nu &&
                          static_cast<int>(b.rhs_u.size()) == nu &&
                          static_cast<int>(b.rhs_q.size()) == nq &&
                          static_cast<int>(b.q_essential.size()) == nq;
  if (!consistent) throw Error("compose: block dimensions are inconsistent");

  TripletList t(nu + nq, nu + nq);
  t.reserve(b.uu.nnz() + b.uq.nnz() + b.qu.nnz() + b.qq.nnz() + nq);
  const auto* ess = &b.q_essential;
  append_block(t, b.uu, 0, 0, nullptr, nullptr);
  append_block(t, b.uq, 0, nu, nullptr, ess);
  append_block(t, b.qu, nu, 0, ess, nullptr);
  append_block(t, b.qq, nu, nu, ess, ess);
  for (int i = 0; i < nq; ++i)
    if (b.q_essential[i]) t.add(nu + i, nu + i, 1.0);

  ComposedSystem sys;
  sys.matrix = finalize(t);
  sys.n_u = nu;
  sys.n_q = nq;
  sys.rhs.resize(nu + nq);
  std::copy(b.rhs_u.begin(), b.rhs_u.end(), sys.rhs.begin());
  for (int i = 0; i < nq; ++i) sys.rhs[nu + i] = b.q_essential[i] ? 0.0 : b.rhs_q[i];
  return sys;
}

std::vector<int> restricted_numbering(const std::vector<bool>& essential) {
  std::vector<int> map(essential.size(), -1);
  int next = 0;
  for (std::size_t i = 0; i < essential.size(); ++i)
    if (!essential[i]) map[i] = next++;
  return map;
}

std::pair<DofVector, DofVector> split_solution(const ComposedSystem& system,
                                               const std::vector<bool>& q_essential,
                                               std::span<const double> solution) {
  DofVector u(solution.begin(), solution.begin() + system.n_u);
  DofVector q;
  q.reserve(system.n_q);
  for (int i = 0; i < system.n_q; ++i)
    if (!q_essential[i]) q.push_back(solution[system.n_u + i]);
  return {std::move(u), std::move(q)};
}

}  // namespace apheat
