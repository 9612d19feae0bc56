#include "plsgeom/subsets.hpp"

#include "plsgeom/error.hpp"

namespace plsgeom {

double binomial(int m, int n) {
  if (n < 0 || n > m) return 0.0;
  n = std::min(n, m - n);
  double r = 1.0;
  for (int i = 1; i <= n; ++i) r = r * (m - n + i) / i;
  return r;
}

std::vector<std::vector<int>> subsets_of(const std::vector<int>& pool, int n,
                                         std::int64_t cap) {
  const int m = static_cast<int>(pool.size());
  if (n < 0 || n > m)
    fail(ErrorKind::InvalidArgument, "subset size out of range");
  double count = binomial(m, n);
  if (count > static_cast<double>(cap))
    fail(ErrorKind::EnumerationCapExceeded,
         "C(" + std::to_string(m) + "," + std::to_string(n) +
             ") exceeds the enumeration cap");
  std::vector<std::vector<int>> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<int> pick(n);
  for (int i = 0; i < n; ++i) pick[i] = i;
  while (true) {
    std::vector<int> row(n);
    for (int i = 0; i < n; ++i) row[i] = pool[pick[i]];
    out.push_back(std::move(row));
    if (n == 0) break;
    int i = n - 1;
    while (i >= 0 && pick[i] == m - n + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < n; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

std::vector<std::vector<int>> subsets(int m, int n, std::int64_t cap) {
  std::vector<int> pool(m);
  for (int i = 0; i < m; ++i) pool[i] = i;
  return subsets_of(pool, n, cap);
}

}  // namespace plsgeom
