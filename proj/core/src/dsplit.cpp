#include "dsplit/dsplit.hpp"

namespace dsplit {

StorageReport storage_report(const SplittingScheme& scheme, std::size_t dimension, RhsContract contract) {
  if (scheme.a.empty()) throw ContractViolation("empty splitting scheme");
  if (dimension == 0) throw ContractViolation("dimension must be positive");
  return {contract == RhsContract::adapter ? 3 : 2, 2};
}

}  // namespace dsplit
