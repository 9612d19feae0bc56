#pragma once

#include <cstdint>
#include <vector>

namespace plsgeom {

// C(m,n) as a double (exact for the sizes enumerated here).
double binomial(int m, int n);

// All n-subsets of {0,...,m-1} in lexicographic order.  Throws
// EnumerationCapExceeded when C(m,n) > cap.
std::vector<std::vector<int>> subsets(int m, int n, std::int64_t cap);

// As above but drawing from an arbitrary sorted pool of indices.
std::vector<std::vector<int>> subsets_of(const std::vector<int>& pool, int n,
                                         std::int64_t cap);

}  // namespace plsgeom
