#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "mpmm/blocklu.hpp"
#include "mpmm/fastmm.hpp"
#include "mpmm/matgen.hpp"
#include "mpmm/opmodel.hpp"

namespace mpmm {

inline constexpr const char* kCsvHeader =
    "command,algorithm,m,l,n,bits,n_min,K,alpha,seed,wall_seconds,max_rel_error,min_rel_error,"
    "mul_count,addsub_count";

/// One CSV row. Every column is always emitted; fields that do not apply to a
/// run stay empty.
struct BenchRecord {
  std::string command;
  std::string algorithm;
  std::optional<std::size_t> m, l, n;
  std::optional<long> bits;
  std::optional<std::size_t> n_min, k, alpha;
  std::optional<std::uint64_t> seed;
  std::optional<double> wall_seconds;
  std::string max_rel_error;
  std::string min_rel_error;
  std::optional<std::uint64_t> mul_count, addsub_count;

  std::string to_csv_row() const {
    std::string row = command + ',' + algorithm;
    auto put = [&row](const auto& opt) {
      row += ',';
      if (opt) row += std::to_string(*opt);
    };
    put(m);
    put(l);
    put(n);
    put(bits);
    put(n_min);
    put(k);
    put(alpha);
    put(seed);
    row += ',';
    if (wall_seconds) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", *wall_seconds);
      row += buf;
    }
    row += ',' + max_rel_error + ',' + min_rel_error;
    put(mul_count);
    put(addsub_count);
    return row;
  }
};

/// Append rows to a CSV file, writing the header only when the file is new or
/// empty. Appending with identical flags later keeps the file well-formed.
inline void append_csv(const std::string& path, const std::vector<BenchRecord>& rows) {
  namespace fs = std::filesystem;
  std::error_code ec;
  const bool need_header = !fs::exists(path, ec) || fs::file_size(path, ec) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw IoError("cannot open CSV file for append: " + path);
  if (need_header) out << kCsvHeader << '\n';
  for (const BenchRecord& r : rows) out << r.to_csv_row() << '\n';
  if (!out) throw IoError("write failure on CSV file: " + path);
}

inline void print_csv(std::ostream& out, const std::vector<BenchRecord>& rows) {
  out << kCsvHeader << '\n';
  for (const BenchRecord& r : rows) out << r.to_csv_row() << '\n';
}

namespace detail {

/// Monotonic wall time of a call, rounded to millisecond resolution.
template <class F>
double time_seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  const double s = std::chrono::duration<double>(t1 - t0).count();
  return std::round(s * 1000.0) / 1000.0;
}

inline int error_digits(long bits, bool verbose) {
  if (!verbose) return 3;
  return static_cast<int>(std::ceil(static_cast<double>(bits) * 0.30102999566398120)) + 2;
}

}  // namespace detail

struct MatmulRequest {
  std::vector<Algorithm> algos{Algorithm::simple, Algorithm::block, Algorithm::strassen,
                               Algorithm::winograd};
  std::size_t m = 256, l = 256, n = 256;
  long bits = 128;
  std::size_t n_min = 32;
  long ref_bits_multiplier = 2;
  bool verbose = false;
};

/// Generate the benchmark pair, run the selected algorithms, and measure each
/// result against the closed-form reference computed at
/// bits * ref_bits_multiplier. The clock covers only the multiplication call;
/// generation and error evaluation are excluded.
inline std::vector<BenchRecord> run_matmul(const MatmulRequest& q) {
  if (q.ref_bits_multiplier < 1) throw DomainError("ref bits multiplier must be >= 1");
  PrecisionContext ctx(q.bits);
  PrecisionContext ref_ctx(
      std::min(q.bits * q.ref_bits_multiplier, PrecisionContext::max_bits));
  const BenchPair pair = gen_bench_pair(q.m, q.l, q.n, ctx);
  const Matrix ref = bench_reference(q.m, q.l, q.n, ref_ctx);
  const int digits = detail::error_digits(q.bits, q.verbose);

  std::vector<BenchRecord> rows;
  for (Algorithm algo : q.algos) {
    std::optional<Matrix> c;
    OpCounter ops;
    const double secs = detail::time_seconds([&] {
      switch (algo) {
        case Algorithm::simple:
          c.emplace(simple_mul(pair.a, pair.b, ctx));
          break;
        case Algorithm::block:
          c.emplace(block_mul(pair.a, pair.b, q.n_min, ctx));
          break;
        default: {
          FastMMResult r = fast_mul(pair.a, pair.b, FastMMConfig{algo, q.n_min}, ctx);
          ops = r.ops;
          c.emplace(std::move(r.c));
        }
      }
    });
    if (algo == Algorithm::simple || algo == Algorithm::block)
      ops = count_simple(q.m, q.l, q.n);
    const RelErrorStats err = max_rel_error(*c, ref);

    BenchRecord rec;
    rec.command = "matmul";
    rec.algorithm = algorithm_name(algo);
    rec.m = q.m;
    rec.l = q.l;
    rec.n = q.n;
    rec.bits = q.bits;
    rec.n_min = q.n_min;
    rec.wall_seconds = secs;
    rec.max_rel_error = to_decimal(err.max, digits);
    rec.min_rel_error = to_decimal(err.min, digits);
    rec.mul_count = ops.mul;
    rec.addsub_count = ops.addsub;
    rows.push_back(std::move(rec));
  }
  return rows;
}

struct LURequest {
  std::string matrix_kind = "random";
  std::size_t n = 128;
  long bits = 256;
  Algorithm kernel = Algorithm::winograd;
  std::size_t n_min = 32;
  std::size_t alpha_lo = 1, alpha_hi = 10;
  std::uint64_t seed = 1;
  bool verbose = false;
};

struct LUOutcome {
  std::vector<BenchRecord> rows;
  bool any_singular = false;
};

/// Build the known-solution system, solve once column-wise as the baseline,
/// then once per alpha with blocked elimination at K = alpha * n_min. A
/// singular pivot produces a row whose error field reads SINGULAR and the
/// sweep continues.
inline LUOutcome run_lu(const LURequest& q) {
  if (q.matrix_kind != "random" && q.matrix_kind != "lotkin")
    throw DomainError("unknown matrix kind '" + q.matrix_kind + "'");
  if (q.alpha_lo < 1 || q.alpha_hi < q.alpha_lo)
    throw DomainError("bad alpha range");
  PrecisionContext ctx(q.bits);
  const Matrix a = q.matrix_kind == "random" ? gen_random(q.n, q.n, q.seed, ctx)
                                             : gen_lotkin(q.n, ctx);
  const LinearSystem sys = gen_linear_system(a, ctx);
  const int digits = detail::error_digits(q.bits, q.verbose);

  LUOutcome out;
  auto base_record = [&](const char* algo_name) {
    BenchRecord rec;
    rec.command = "lu";
    rec.algorithm = algo_name;
    rec.m = q.n;
    rec.l = q.n;
    rec.n = q.n;
    rec.bits = q.bits;
    rec.n_min = q.n_min;
    if (q.matrix_kind == "random") rec.seed = q.seed;
    return rec;
  };

  {
    BenchRecord rec = base_record("columnwise");
    try {
      std::optional<Vector> x;
      rec.wall_seconds = detail::time_seconds([&] { x.emplace(solve_columnwise(a, sys.b)); });
      const SolutionError err = max_rel_error_solution(*x, sys.x_true);
      rec.max_rel_error = to_decimal(err.max_rel, digits);
    } catch (const SingularError&) {
      rec.max_rel_error = "SINGULAR";
      out.any_singular = true;
    }
    out.rows.push_back(std::move(rec));
  }

  for (std::size_t alpha = q.alpha_lo; alpha <= q.alpha_hi; ++alpha) {
    const BlockLUConfig cfg = BlockLUConfig::with_alpha(alpha, q.n_min, q.kernel);
    BenchRecord rec = base_record(algorithm_name(q.kernel));
    rec.k = cfg.block_size;
    rec.alpha = alpha;
    try {
      OpCounter schur;
      std::optional<Vector> x;
      rec.wall_seconds = detail::time_seconds([&] {
        LUFactors f = lu_blocked(a, cfg, ctx, &schur);
        x.emplace(lu_solve(f, sys.b, ctx));
      });
      const SolutionError err = max_rel_error_solution(*x, sys.x_true);
      rec.max_rel_error = to_decimal(err.max_rel, digits);
      rec.mul_count = schur.mul;
      rec.addsub_count = schur.addsub;
    } catch (const SingularError&) {
      rec.max_rel_error = "SINGULAR";
      out.any_singular = true;
    }
    out.rows.push_back(std::move(rec));
  }
  return out;
}

}  // namespace mpmm
