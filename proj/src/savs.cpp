#include "covpkit/savs.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <string>

#include "covpkit/errors.hpp"

namespace covpkit {
namespace {

void check_parameters(int d, int s) {
  if (d < 2) throw InputError("need d >= 2, got " + std::to_string(d));
  if (s <= 0 || s >= d) {
    throw InputError("need 0 < s < d, got s = " + std::to_string(s) + ", d = " + std::to_string(d));
  }
}

Extents project_dims(const Extents& dims, const IndexSubset& q) {
  Extents out;
  out.reserve(q.size());
  for (int k : q) out.push_back(dims[static_cast<std::size_t>(k - 1)]);
  return out;
}

// Offset of each tensor entry within each component, precomputed once.
std::vector<std::vector<std::size_t>> component_offsets(const Extents& dims, const std::vector<IndexSubset>& qs) {
  std::vector<std::vector<std::size_t>> out(qs.size());
  std::vector<Extents> sub(qs.size());
  for (std::size_t j = 0; j < qs.size(); ++j) sub[j] = project_dims(dims, qs[j]);
  const std::size_t total = element_count(dims);
  for (auto& v : out) v.reserve(total);
  IndexTuple t(dims.size(), 1);
  for (std::size_t off = 0; off < total; ++off, next_index(t, dims)) {
    for (std::size_t j = 0; j < qs.size(); ++j) out[j].push_back(flatten_index(project(t, qs[j]), sub[j]));
  }
  return out;
}

}  // namespace

std::vector<IndexSubset> index_subsets(int d, int s) {
  std::vector<IndexSubset> out;
  if (s < 0 || s > d) return out;
  IndexSubset q(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) q[static_cast<std::size_t>(i)] = i + 1;
  while (true) {
    out.push_back(q);
    int i = s - 1;
    while (i >= 0 && q[static_cast<std::size_t>(i)] == d - s + i + 1) --i;
    if (i < 0) break;
    ++q[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < s; ++j) q[static_cast<std::size_t>(j)] = q[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

void validate_subset(const IndexSubset& q, int d) {
  if (q.empty() || static_cast<int>(q.size()) >= d) throw InputError("index subset must satisfy 0 < |Q| < d");
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] < 1 || q[i] > d) throw InputError("index subset member " + std::to_string(q[i]) + " outside 1.." + std::to_string(d));
    if (i > 0 && q[i] <= q[i - 1]) throw InputError("index subset must be strictly increasing");
  }
}

IndexTuple project(std::span<const int> t, const IndexSubset& q) {
  IndexTuple out;
  out.reserve(q.size());
  for (int k : q) out.push_back(t[static_cast<std::size_t>(k - 1)]);
  return out;
}

int Decomposition::n() const {
  if (dims.empty() || std::adjacent_find(dims.begin(), dims.end(), std::not_equal_to<>()) != dims.end()) {
    throw InputError("decomposition extents are not all equal");
  }
  return dims.front();
}

Decomposition zero_decomposition(const Extents& dims, int s) {
  const int d = static_cast<int>(dims.size());
  check_parameters(d, s);
  Decomposition D{d, s, dims, {}};
  for (auto& q : index_subsets(d, s)) {
    Extents sub = project_dims(dims, q);
    D.components.push_back({q, CostTensor(sub)});
  }
  return D;
}

void validate_decomposition(const Decomposition& D) {
  if (static_cast<int>(D.dims.size()) != D.d) throw InputError("decomposition dims do not match d");
  check_parameters(D.d, D.s);
  auto qs = index_subsets(D.d, D.s);
  if (D.components.size() != qs.size()) {
    throw InputError("decomposition needs " + std::to_string(qs.size()) + " components, got " +
                     std::to_string(D.components.size()));
  }
  for (std::size_t j = 0; j < qs.size(); ++j) {
    if (D.components[j].q != qs[j]) throw InputError("decomposition components out of order or malformed");
    if (D.components[j].values.dims() != project_dims(D.dims, qs[j])) {
      throw InputError("component shape does not match its index subset");
    }
  }
}

CostTensor reconstruct(const Decomposition& D) {
  validate_decomposition(D);
  std::vector<IndexSubset> qs;
  for (const auto& comp : D.components) qs.push_back(comp.q);
  auto offsets = component_offsets(D.dims, qs);
  CostTensor out(D.dims);
  for (std::size_t off = 0; off < out.size(); ++off) {
    for (std::size_t j = 0; j < qs.size(); ++j) out[off] += D.components[j].values[offsets[j][off]];
  }
  return out;
}

DecomposeResult decompose(const CostTensor& c, int s) {
  const int d = c.order();
  check_parameters(d, s);
  if (c.is_cubic() && c.dims().front() == 1) throw InputError("n = 1 is not a valid extent for decomposition");
  for (int e : c.dims()) {
    if (e < 1) throw InputError("extents must be positive");
  }

  Decomposition D = zero_decomposition(c.dims(), s);
  std::vector<IndexSubset> qs;
  std::vector<std::size_t> base;
  std::size_t unknowns = 0;
  for (const auto& comp : D.components) {
    qs.push_back(comp.q);
    base.push_back(unknowns);
    unknowns += comp.values.size();
  }
  auto offsets = component_offsets(c.dims(), qs);
  ExactMatrix a(c.size(), unknowns);
  for (std::size_t off = 0; off < c.size(); ++off) {
    for (std::size_t j = 0; j < qs.size(); ++j) a(off, base[j] + offsets[j][off]) = Rational(1);
  }

  LinearSolution sol = solve_linear(a, c.data(), false);
  DecomposeResult result;
  if (!sol.consistent) {
    result.certificate = std::move(sol.certificate);
    return result;
  }
  for (std::size_t j = 0; j < qs.size(); ++j) {
    auto& values = D.components[j].values;
    for (std::size_t k = 0; k < values.size(); ++k) values[k] = sol.particular[base[j] + k];
  }
  if (reconstruct(D) != c) throw InternalError("decompose: solution does not reconstruct the input");
  result.decomposition = std::move(D);
  return result;
}

bool verify_certificate(const CostTensor& c, int s, std::span<const Rational> y) {
  if (y.size() != c.size()) return false;
  Decomposition shape = zero_decomposition(c.dims(), s);
  std::vector<IndexSubset> qs;
  for (const auto& comp : shape.components) qs.push_back(comp.q);
  auto offsets = component_offsets(c.dims(), qs);
  Rational dot;
  for (std::size_t off = 0; off < c.size(); ++off) add_product(dot, y[off], c[off]);
  if (dot.is_zero()) return false;
  for (std::size_t j = 0; j < qs.size(); ++j) {
    std::vector<Rational> column_sums(shape.components[j].values.size());
    for (std::size_t off = 0; off < c.size(); ++off) column_sums[offsets[j][off]] += y[off];
    for (const auto& x : column_sums) {
      if (!x.is_zero()) return false;
    }
  }
  return true;
}

namespace {

std::optional<IndexTuple> first_mismatch(const CostTensor& c, const Decomposition& D) {
  CostTensor rebuilt = reconstruct(D);
  for (std::size_t off = 0; off < c.size(); ++off) {
    if (rebuilt[off] != c[off]) return unflatten_index(off, c.dims());
  }
  return std::nullopt;
}

int require_cube(const CostTensor& c) {
  if (c.order() < 2) throw InputError("need d >= 2");
  int n = c.extent();
  if (n < 2) throw InputError("need n >= 2");
  return n;
}

}  // namespace

ConstructiveResult decompose_axial_constructive(const CostTensor& c) {
  const int n = require_cube(c);
  const int d = c.order();
  Decomposition D = zero_decomposition(c.dims(), 1);
  IndexTuple ones(static_cast<std::size_t>(d), 1);
  const Rational shift = c.at(ones) * Rational(d - 1, d);
  for (int k = 0; k < d; ++k) {
    IndexTuple t = ones;
    auto& v = D.components[static_cast<std::size_t>(k)].values;
    for (int i = 1; i <= n; ++i) {
      t[static_cast<std::size_t>(k)] = i;
      v[static_cast<std::size_t>(i - 1)] = c.at(t) - shift;
    }
  }
  auto mismatch = first_mismatch(c, D);
  return {std::move(D), std::move(mismatch)};
}

ConstructiveResult decompose_planar_constructive(const CostTensor& c) {
  require_cube(c);
  const int d = c.order();
  Decomposition D = zero_decomposition(c.dims(), d - 1);
  std::vector<Rational> weight(static_cast<std::size_t>(d) + 1);
  for (int m = 1; m <= d; ++m) weight[static_cast<std::size_t>(m)] = Rational(m % 2 == 1 ? 1 : -1, m);

  // Component j omits coordinate k = d - j (lexicographic order of (d-1)-subsets).
  IndexTuple t(static_cast<std::size_t>(d), 1);
  IndexTuple x(static_cast<std::size_t>(d));
  do {
    for (std::uint32_t mask = 1; mask < (1U << d); ++mask) {
      for (int j = 0; j < d; ++j) x[static_cast<std::size_t>(j)] = (mask >> j) & 1U ? 1 : t[static_cast<std::size_t>(j)];
      const Rational& value = c.at(x);
      if (value.is_zero()) continue;
      const Rational term = weight[static_cast<std::size_t>(std::popcount(mask))] * value;
      for (int k = 0; k < d; ++k) {
        if (((mask >> k) & 1U) == 0) continue;
        // a_k does not depend on t_k, so only the slice t_k = 1 is evaluated.
        if (t[static_cast<std::size_t>(k)] != 1) continue;
        auto& comp = D.components[static_cast<std::size_t>(d - 1 - k)];
        comp.values.at(project(t, comp.q)) += term;
      }
    }
  } while (next_index(t, c.dims()));

  auto mismatch = first_mismatch(c, D);
  return {std::move(D), std::move(mismatch)};
}

std::uint64_t savs_dimension(int d, int s, int n) {
  check_parameters(d, s);
  if (n < 2) throw InputError("need n >= 2");
  if (d > 20) throw InputError("d too large for inclusion-exclusion");
  // Signed count of subfamilies of Q_s by the mask of their intersection.
  std::map<std::uint32_t, mpz_class> coef;
  for (const auto& q : index_subsets(d, s)) {
    std::uint32_t qmask = 0;
    for (int k : q) qmask |= 1U << (k - 1);
    std::map<std::uint32_t, mpz_class> next = coef;
    for (const auto& [mask, count] : coef) next[mask & qmask] -= count;
    next[qmask] += 1;
    coef = std::move(next);
  }
  mpz_class total = 0;
  for (const auto& [mask, count] : coef) {
    mpz_class power;
    mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(std::popcount(mask)));
    total += count * power;
  }
  if (total < 0 || !total.fits_ulong_p()) throw InternalError("savs_dimension out of range");
  return total.get_ui();
}

ExactMatrix savs_generator_matrix(int d, int s, int n) {
  check_parameters(d, s);
  if (n < 2) throw InputError("need n >= 2");
  Extents dims(static_cast<std::size_t>(d), n);
  auto qs = index_subsets(d, s);
  auto offsets = component_offsets(dims, qs);
  const std::size_t per_q = element_count(Extents(static_cast<std::size_t>(s), n));
  const std::size_t total = element_count(dims);
  ExactMatrix g(qs.size() * per_q, total);
  for (std::size_t j = 0; j < qs.size(); ++j) {
    for (std::size_t off = 0; off < total; ++off) g(j * per_q + offsets[j][off], off) = Rational(1);
  }
  return g;
}

}  // namespace covpkit
