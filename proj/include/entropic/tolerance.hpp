#pragma once

#include <cstdint>

namespace entropic {

// Central tolerance table. Every certificate echoes these values.
namespace tol {
inline constexpr double kIdentity = 1e-9;    // identities and inequality checks
inline constexpr double kOracle = 1e-12;     // fast path vs. brute force agreement
inline constexpr double kNonneg = 1e-9;      // slack on quantities that must be >= 0
inline constexpr double kNormalization = 1e-9;
inline constexpr double kMassClamp = 1e-15;  // masses below this are treated as zero
}  // namespace tol

// Capacity caps. The dense-table cap can be moved with ENTROPIC_DOUBLING_MAX_N.
namespace caps {
inline constexpr int kMaxElementDim = 20;
inline constexpr int kDefaultDenseDim = 12;
inline constexpr int kMaxEnumerationDim = 6;
inline constexpr int kMaxJointBlocks = 4;

/// Largest n allowed for dense distributions (env override, clamped to [1, 20]).
int max_dense_dim();
/// Largest total bit-width of a dense JointDist table.
int max_joint_bits();
}  // namespace caps

}  // namespace entropic
