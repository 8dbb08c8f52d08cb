#pragma once

#include <cstdint>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "mpmm/fastmm.hpp"
#include "mpmm/opcounter.hpp"

namespace mpmm {

/// Operation counts of the three-loop algorithm: one length-l inner product
/// per output entry.
inline OpCounter count_simple(std::size_t m, std::size_t l, std::size_t n) {
  if (m == 0 || l == 0 || n == 0) throw DimensionError("count_simple: dims must be >= 1");
  OpCounter c;
  c.mul = static_cast<std::uint64_t>(m) * l * n;
  c.addsub = static_cast<std::uint64_t>(m) * n * (l - 1);
  return c;
}

/// Closed-form counts for the recursive algorithms under the same padding and
/// threshold rules as fast_mul: base case at min dim <= n_min costs
/// count_simple; a split costs 7 half-size multiplies plus the per-level block
/// additions, (5,5,8) halves-sized panels for Strassen and (4,4,7) for the
/// Winograd variant. Simple and block map to count_simple.
inline OpCounter count_fast(Algorithm algo, std::size_t m, std::size_t l, std::size_t n,
                            std::size_t n_min) {
  if (n_min == 0) throw DimensionError("count_fast: n_min must be at least 1");
  if (algo == Algorithm::simple || algo == Algorithm::block) return count_simple(m, l, n);
  if (std::min({m, l, n}) <= n_min) return count_simple(m, l, n);
  const std::size_t hm = (m + m % 2) / 2, hl = (l + l % 2) / 2, hn = (n + n % 2) / 2;
  const OpCounter half = count_fast(algo, hm, hl, hn, n_min);
  const std::uint64_t ka = algo == Algorithm::strassen ? 5 : 4;
  const std::uint64_t kb = algo == Algorithm::strassen ? 5 : 4;
  const std::uint64_t kc = algo == Algorithm::strassen ? 8 : 7;
  OpCounter r;
  r.mul = 7 * half.mul;
  r.addsub = 7 * half.addsub + ka * hm * hl + kb * hl * hn + kc * hm * hn;
  return r;
}

/// Reduced nonnegative rational, kept exact; rounded only for display.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static Ratio of(std::uint64_t a, std::uint64_t b) {
    if (b == 0) throw DomainError("ratio with zero denominator");
    const std::uint64_t g = std::gcd(a, b);
    return Ratio{a / g, b / g};
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  /// Decimal string rounded half away from zero at 3 fractional digits.
  std::string fixed3() const {
    using u128 = unsigned __int128;
    const u128 q = (u128(num) * 2000 + den) / (u128(den) * 2);
    const std::uint64_t whole = static_cast<std::uint64_t>(q / 1000);
    const std::uint64_t frac = static_cast<std::uint64_t>(q % 1000);
    std::ostringstream os;
    os << whole << '.' << std::setw(3) << std::setfill('0') << frac;
    return os.str();
  }
};

struct ComplexityRow {
  Dims3 dims;
  std::size_t n_min;
  Ratio strassen_mul_ratio;
  Ratio strassen_addsub_ratio;
  Ratio winograd_mul_ratio;
  Ratio winograd_addsub_ratio;
};

inline ComplexityRow complexity_row(Dims3 d, std::size_t n_min) {
  const OpCounter s = count_simple(d.m, d.l, d.n);
  const OpCounter st = count_fast(Algorithm::strassen, d.m, d.l, d.n, n_min);
  const OpCounter wi = count_fast(Algorithm::winograd, d.m, d.l, d.n, n_min);
  auto ratio = [](std::uint64_t a, std::uint64_t b) {
    if (b == 0) {
      if (a == 0) return Ratio{1, 1};
      throw DomainError("addsub ratio undefined: simple algorithm performs no additions");
    }
    return Ratio::of(a, b);
  };
  return ComplexityRow{d,
                       n_min,
                       ratio(st.mul, s.mul),
                       ratio(st.addsub, s.addsub),
                       ratio(wi.mul, s.mul),
                       ratio(wi.addsub, s.addsub)};
}

inline std::vector<ComplexityRow> ratio_table(const std::vector<Dims3>& sizes,
                                              std::size_t n_min) {
  if (sizes.empty()) throw DimensionError("ratio_table: empty size list");
  std::vector<ComplexityRow> rows;
  rows.reserve(sizes.size());
  for (const Dims3& d : sizes) rows.push_back(complexity_row(d, n_min));
  return rows;
}

namespace detail {

inline std::string size_label(const Dims3& d) {
  std::ostringstream os;
  if (d.m == d.l && d.l == d.n)
    os << d.m << " x " << d.n;
  else
    os << d.m << " x " << d.l << " x " << d.n;
  return os.str();
}

}  // namespace detail

/// Aligned text table: one row per size, a two-column group per algorithm
/// with the addition/subtraction ratio listed first in each group.
inline std::string format_ratio_table(const std::vector<ComplexityRow>& rows) {
  std::ostringstream os;
  const int label_w = 18, cell_w = 10;
  os << std::setw(label_w) << "" << " |" << std::setw(2 * cell_w) << "Strassen" << " |"
     << std::setw(2 * cell_w) << "Winograd" << '\n';
  os << std::setw(label_w) << std::left
     << ("n_min = " + std::to_string(rows.empty() ? 0 : rows.front().n_min)) << std::right
     << " |" << std::setw(cell_w) << "Add & Sub" << std::setw(cell_w) << "Mul" << " |"
     << std::setw(cell_w) << "Add & Sub" << std::setw(cell_w) << "Mul" << '\n';
  os << std::string(label_w, '-') << "-+" << std::string(2 * cell_w, '-') << "-+"
     << std::string(2 * cell_w, '-') << '\n';
  for (const ComplexityRow& r : rows) {
    os << std::setw(label_w) << detail::size_label(r.dims) << " |" << std::setw(cell_w)
       << r.strassen_addsub_ratio.fixed3() << std::setw(cell_w) << r.strassen_mul_ratio.fixed3()
       << " |" << std::setw(cell_w) << r.winograd_addsub_ratio.fixed3() << std::setw(cell_w)
       << r.winograd_mul_ratio.fixed3() << '\n';
  }
  return os.str();
}

inline std::string format_ratio_csv(const std::vector<ComplexityRow>& rows) {
  std::ostringstream os;
  os << "m,l,n,n_min,strassen_mul_ratio,strassen_addsub_ratio,winograd_mul_ratio,"
        "winograd_addsub_ratio\n";
  for (const ComplexityRow& r : rows) {
    os << r.dims.m << ',' << r.dims.l << ',' << r.dims.n << ',' << r.n_min << ','
       << r.strassen_mul_ratio.fixed3() << ',' << r.strassen_addsub_ratio.fixed3() << ','
       << r.winograd_mul_ratio.fixed3() << ',' << r.winograd_addsub_ratio.fixed3() << '\n';
  }
  return os.str();
}

}  // namespace mpmm
