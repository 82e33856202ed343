#pragma once

#include "netcontrol/network.hpp"
#include "netcontrol/types.hpp"

namespace netcontrol {

/// Total control of the agent per node, split into the directly bought part
/// and the part propagated through ownership paths.
struct ControlVector {
  Vector total;
  Vector direct;

  Vector indirect() const { return total - direct; }
};

/// Effective adjacency after the agent buys fraction o_j of each node j: the
/// existing owners of j are diluted uniformly, b_ij = (1 - o_j) a_ij.
/// `o` is a full-length intervention vector; entries must lie in
/// [0, o_max_j]. Guarantees o_j + sum_i b_ij <= 1 (+tol) per column.
Matrix adjust_ownership(const OwnershipNetwork& net, const Eigen::Ref<const Vector>& o);

/// Propagates direct holdings into total control: solves c = o + B^T c by a
/// dense LU factorization of (I - B). Entries for nodes unreachable from
/// supp(o) are exactly zero. Throws SingularOwnership when the solve fails
/// the residual check (a cycle without leakage).
ControlVector propagate(const OwnershipNetwork& net, const Eigen::Ref<const Matrix>& adjusted,
                        const Eigen::Ref<const Vector>& o);

/// One factorization of (I - B^T) serving both the forward control solve and
/// the adjoint solve of the gradient path.
class PropagationSolve {
 public:
  PropagationSolve(const OwnershipNetwork& net, const Eigen::Ref<const Matrix>& adjusted);

  /// c = o + B^T c with unreachable entries zeroed. Throws SingularOwnership.
  ControlVector forward(const Eigen::Ref<const Vector>& o) const;

  /// Solves (I - B) y = g on the same factorization.
  Vector adjoint(const Eigen::Ref<const Vector>& g) const;

  const Matrix& adjusted() const { return adjusted_; }

 private:
  const OwnershipNetwork* net_;
  Matrix adjusted_;
  Matrix system_;  ///< I - B^T
  Eigen::PartialPivLU<Matrix> lu_;
};

/// Truncated path-sum sum_{l=0..max_len} (B^T)^l o. Test oracle for
/// propagate: exact on DAGs once max_len reaches the node count, and
/// converging geometrically when ||B||_1 < 1.
ControlVector propagate_bruteforce(const OwnershipNetwork& net,
                                   const Eigen::Ref<const Matrix>& adjusted,
                                   const Eigen::Ref<const Vector>& o, int max_len);

/// One row of the node-to-node control matrix (I - B)^{-1}: the control of
/// `source` in every node, where B is the adjacency restricted to nodes
/// reachable from the source with the source's own incoming edges removed.
/// Includes the l=0 identity term (self-control 1).
Vector pairwise_control(const OwnershipNetwork& net, Index source);

}  // namespace netcontrol
