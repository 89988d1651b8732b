// Copyright 2026 The rrgivens Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli/commands.hpp"

#include <CLI11.hpp>
#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <type_traits>

#include "rrgivens/backward.hpp"
#include "rrgivens/errors.hpp"
#include "rrgivens/forward.hpp"
#include "rrgivens/oracles.hpp"
#include "rrgivens/schedule.hpp"
#include "rrgivens/unitary.hpp"

namespace rrgivens::cli {

namespace {

constexpr double kOrthTol = 1e-12;
constexpr double kDetTol = 1e-9;
constexpr double kJacobianTol = 1e-10;
constexpr double kGradTol = 1e-6;
constexpr double kGradFloor = 1e-8;
constexpr std::size_t kJacobianMaxN = 8;

std::vector<double> uniform_angles(std::size_t count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-std::numbers::pi, std::numbers::pi);
  std::vector<double> out(count);
  for (auto& v : out) v = dist(rng);
  return out;
}

Matrix gaussian_matrix(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> dist;
  Matrix m(n, n);
  for (auto& v : m.data()) v = dist(rng);
  return m;
}

ComplexMatrix gaussian_complex_matrix(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> dist;
  ComplexMatrix m(n, n);
  for (auto& v : m.data()) {
    const double re = dist(rng);
    v = {re, dist(rng)};
  }
  return m;
}

double determinant(const Matrix& u) {
  Eigen::MatrixXd e(u.rows(), u.cols());
  for (std::size_t r = 0; r < u.rows(); ++r)
    for (std::size_t c = 0; c < u.cols(); ++c) e(r, c) = u(r, c);
  return e.partialPivLu().determinant();
}

template <typename T>
double max_abs_diff(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    worst = std::max(worst, static_cast<double>(std::abs(a.data()[k] - b.data()[k])));
  return worst;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  return worst;
}

// Relative error against the reference, over components of magnitude >= kGradFloor.
double relative_error(const std::vector<double>& got, const std::vector<double>& ref) {
  double worst = 0.0;
  for (std::size_t k = 0; k < got.size(); ++k)
    if (std::abs(ref[k]) >= kGradFloor)
      worst = std::max(worst, std::abs(got[k] - ref[k]) / std::abs(ref[k]));
  return worst;
}

template <typename T>
bool same_bits(std::span<const T> a, std::span<const T> b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](T x, T y) {
           return std::memcmp(&x, &y, sizeof(T)) == 0;
         });
}

class CheckTable {
 public:
  void record(const std::string& name, double error, double tolerance) {
    CheckOutcome& c = entry(name, tolerance);
    c.max_error = std::max(c.max_error, error);
    if (!(error <= tolerance)) c.passed = false;
  }
  // Exact checks report the deviation but only bit equality passes.
  void record_exact(const std::string& name, double error, bool equal) {
    CheckOutcome& c = entry(name, 0.0);
    c.max_error = std::max(c.max_error, error);
    if (!equal) c.passed = false;
  }
  std::vector<CheckOutcome> take() { return std::move(checks_); }

 private:
  CheckOutcome& entry(const std::string& name, double tolerance) {
    for (auto& c : checks_)
      if (c.name == name) return c;
    checks_.push_back({name, 0.0, tolerance, true});
    return checks_.back();
  }

  std::vector<CheckOutcome> checks_;
};

void verify_real(const RotationSchedule& s, const VerifyOptions& opts, WorkerPool& pool,
                 CheckTable& table) {
  std::mt19937_64 rng(opts.seed);
  const std::size_t n = s.n();
  for (std::size_t t = 0; t < opts.trials; ++t) {
    const AngleSet theta{uniform_angles(s.active_count(), rng)};
    const Matrix gamma = gaussian_matrix(n, rng);
    const Matrix u = forward_parallel(s, theta);

    table.record("orthogonality", oracles::orthogonality_error(u), kOrthTol);
    table.record("determinant", std::abs(determinant(u) - 1.0), kDetTol);
    const Matrix refl = forward_parallel(s, theta, OrthogonalConfig{true, 0});
    table.record("reflection_determinant", std::abs(determinant(refl) + 1.0), kDetTol);

    const Matrix seq = oracles::forward_sequential(s, theta);
    table.record_exact("sequential_equality", max_abs_diff(u, seq), u == seq);

    const auto grad = jvp_parallel(s, theta, u, gamma);
    const Matrix u_par = forward_parallel(s, theta, {}, pool);
    const auto grad_par = jvp_parallel(s, theta, u_par, gamma, pool);
    const bool same = same_bits<double>(u.data(), u_par.data()) &&
                      same_bits<double>(grad.d_theta, grad_par.d_theta);
    table.record_exact("worker_determinism", max_abs_diff(grad.d_theta, grad_par.d_theta), same);

    if (n <= kJacobianMaxN) {
      const auto ref = oracles::jacobian_contraction(s, theta, gamma);
      table.record("jacobian_oracle", max_abs_diff(grad.d_theta, ref), kJacobianTol);
    }
    const auto fd = oracles::finite_diff_linear_gradient(s, theta, gamma, oracles::kDefaultStep, {},
                                                         oracles::FdPrecision::kExtended);
    table.record("gradient_check", relative_error(grad.d_theta, fd.d_theta), kGradTol);
  }
}

void verify_unitary(const RotationSchedule& s, const VerifyOptions& opts, WorkerPool& pool,
                    CheckTable& table) {
  std::mt19937_64 rng(opts.seed);
  const std::size_t n = s.n();
  for (std::size_t t = 0; t < opts.trials; ++t) {
    const AngleSet theta{uniform_angles(s.active_count(), rng)};
    const PhaseSet phi{uniform_angles(s.active_count(), rng)};
    const ComplexMatrix gamma = gaussian_complex_matrix(n, rng);
    const ComplexMatrix u = forward_unitary(s, theta, phi);

    table.record("unitarity", unitarity_error(u), kOrthTol);
    const ComplexMatrix seq = oracles::forward_sequential_unitary(s, theta, phi);
    table.record_exact("sequential_equality", max_abs_diff(u, seq), u == seq);

    const auto grad = jvp_unitary(s, theta, phi, u, gamma);
    const ComplexMatrix u_par = forward_unitary(s, theta, phi, pool);
    const auto grad_par = jvp_unitary(s, theta, phi, u_par, gamma, pool);
    const bool same = same_bits<std::complex<double>>(u.data(), u_par.data()) &&
                      same_bits<double>(grad.d_theta, grad_par.d_theta) &&
                      same_bits<double>(grad.d_phi, grad_par.d_phi);
    table.record_exact("worker_determinism", max_abs_diff(grad.d_theta, grad_par.d_theta), same);

    const PhaseSet zero{std::vector<double>(s.active_count(), 0.0)};
    const ComplexMatrix u0 = forward_unitary(s, theta, zero);
    const Matrix ur = forward_parallel(s, theta);
    double reduction = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) reduction = std::max(reduction, std::abs(u0(r, c) - ur(r, c)));
    table.record("real_reduction", reduction, kOrthTol);

    if (n <= kJacobianMaxN) {
      const auto ref = oracles::jacobian_contraction_unitary(s, theta, phi, gamma);
      table.record("jacobian_oracle",
                   std::max(max_abs_diff(grad.d_theta, ref.d_theta), max_abs_diff(grad.d_phi, ref.d_phi)),
                   kJacobianTol);
    }
    const auto fd = oracles::finite_diff_linear_gradient_unitary(
        s, theta, phi, gamma, oracles::kDefaultStep, oracles::FdPrecision::kExtended);
    table.record("gradient_check_theta", relative_error(grad.d_theta, fd.d_theta), kGradTol);
    table.record("gradient_check_phi", relative_error(grad.d_phi, fd.d_phi), kGradTol);
  }
}

template <typename T>
struct BenchInputs {
  BasicAngleSet<T> theta;
  DenseMatrix<T> u;
  DenseMatrix<T> gamma;
};

template <typename T>
BenchInputs<T> make_inputs(const RotationSchedule& s, std::mt19937_64& rng) {
  BenchInputs<T> in;
  for (double v : uniform_angles(s.active_count(), rng)) in.theta.values.push_back(static_cast<T>(v));
  in.u = forward_parallel(s, in.theta);
  const Matrix g = gaussian_matrix(s.n(), rng);
  in.gamma = DenseMatrix<T>(s.n(), s.n());
  for (std::size_t k = 0; k < g.data().size(); ++k) in.gamma.data()[k] = static_cast<T>(g.data()[k]);
  return in;
}

template <typename Fn>
std::pair<double, double> time_reps(std::size_t reps, Fn&& fn) {
  fn();  // warm-up
  std::vector<double> ms(reps);
  for (auto& m : ms) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    m = std::chrono::duration<double, std::milli>(t1 - t0).count();
  }
  double mean = 0.0;
  for (double m : ms) mean += m;
  mean /= static_cast<double>(reps);
  double var = 0.0;
  for (double m : ms) var += (m - mean) * (m - mean);
  var /= static_cast<double>(reps > 1 ? reps - 1 : 1);
  return {mean, std::sqrt(var)};
}

template <typename T>
void bench_size(std::size_t n, const BenchOptions& opts, std::mt19937_64& rng,
                std::vector<BenchRecord>& out) {
  const auto s = build_circle_schedule(n);
  const auto in = make_inputs<T>(s, rng);
  const std::string precision = std::is_same_v<T, float> ? "f32" : "f64";
  BackwardWorkspace<T> ws(s.n(), s.n_effective());
  for (std::size_t w : opts.workers) {
    WorkerPool pool(w);
    const std::string mode = w == 1 ? "sequential" : "parallel";
    volatile T sink{};
    auto [fm, fs] = time_reps(opts.reps, [&] { sink = forward_parallel(s, in.theta, {}, pool)(0, 0); });
    out.push_back({n, "forward_" + mode, w, precision, fm, fs, opts.reps});
    if (!opts.include_backward) continue;
    auto [bm, bs] = time_reps(opts.reps, [&] {
      sink = jvp_parallel(s, in.theta, in.u, in.gamma, pool, ws).d_theta[0];
    });
    out.push_back({n, "backward_" + mode, w, precision, bm, bs, opts.reps});
    (void)sink;
  }
}

std::string format_error(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << v;
  return os.str();
}

int usage_error(std::ostream& err, const std::string& msg) {
  err << "error: " << msg << "\n";
  return kExitUsage;
}

}  // namespace

bool VerifyReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckOutcome& c) { return c.passed; });
}

VerifyReport run_verify(const VerifyOptions& opts) {
  if (opts.trials == 0) throw ParameterError("trials must be >= 1");
  std::optional<std::size_t> m = opts.m;
  if (opts.mode == VerifyMode::kRestricted && !m) m = std::max<std::size_t>(1, opts.n / 2);
  const auto s = build_circle_schedule(opts.n, std::nullopt, m);
  const std::size_t workers =
      opts.workers == 0 ? std::max<std::size_t>(2, WorkerPool::hardware_workers()) : opts.workers;
  WorkerPool pool(workers);
  CheckTable table;
  if (opts.mode == VerifyMode::kUnitary)
    verify_unitary(s, opts, pool, table);
  else
    verify_real(s, opts, pool, table);
  return {s.n(), s.m_active(), s.active_count(), table.take()};
}

std::vector<BenchRecord> run_bench(const BenchOptions& opts) {
  if (opts.reps < 3) throw ParameterError("reps must be >= 3");
  for (std::size_t n : opts.sizes)
    if (n < 2) throw ParameterError("bench sizes must be >= 2");
  std::mt19937_64 rng(opts.seed);
  std::vector<BenchRecord> out;
  for (std::size_t n : opts.sizes) {
    if (opts.single_precision)
      bench_size<float>(n, opts, rng, out);
    else
      bench_size<double>(n, opts, rng, out);
  }
  return out;
}

void write_csv(std::ostream& os, const std::vector<BenchRecord>& records) {
  os << "n,variant,workers,precision,mean_ms,std_ms,reps\n";
  for (const auto& r : records) {
    os << r.n << ',' << r.variant << ',' << r.workers << ',' << r.precision << ',' << std::fixed
       << std::setprecision(4) << r.mean_ms << ',' << r.std_ms << ',' << r.reps << '\n';
    os.unsetf(std::ios::floatfield);
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Round-robin Givens parametrisation of orthogonal and unitary matrices"};
  app.require_subcommand(1);

  std::size_t sched_n = 0;
  std::optional<std::size_t> sched_m;
  std::optional<std::uint64_t> sched_seed;
  auto* schedule = app.add_subcommand("schedule", "Print the rotation schedule, one block per line");
  schedule->add_option("--n", sched_n, "Dimension")->required()->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  schedule->add_option("--m", sched_m, "Active leading coordinates (restricted parametrisation)");
  schedule->add_option("--seed", sched_seed, "Seed for a random initial permutation");

  VerifyOptions vopts;
  std::string mode = "real";
  auto* verify = app.add_subcommand("verify", "Run the invariant and gradient checks on random draws");
  verify->add_option("--n", vopts.n, "Dimension")->required()->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  verify->add_option("--m", vopts.m, "Active leading coordinates");
  verify->add_option("--trials", vopts.trials, "Random draws")->check(CLI::PositiveNumber);
  verify->add_option("--seed", vopts.seed, "RNG seed");
  verify->add_option("--mode", mode, "real, unitary or restricted")
      ->check(CLI::IsMember({"real", "unitary", "restricted"}));
  verify->add_option("--workers", vopts.workers, "Worker count for the determinism check");

  BenchOptions bopts;
  std::string precision = "f64";
  std::string out_path;
  auto* bench = app.add_subcommand("bench", "Time forward and backward passes, CSV output");
  bench->add_option("--n", bopts.sizes, "Dimensions, comma separated")->required()->delimiter(',');
  bench->add_option("--workers", bopts.workers, "Worker counts, comma separated")->delimiter(',');
  bench->add_option("--reps", bopts.reps, "Timed repetitions")->check(CLI::Range(std::size_t{3}, std::size_t{1} << 20));
  bench->add_option("--precision", precision, "f32 or f64")->check(CLI::IsMember({"f32", "f64"}));
  bench->add_option("--seed", bopts.seed, "RNG seed");
  bench->add_option("--out", out_path, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*schedule) {
      std::optional<std::vector<std::size_t>> perm;
      if (sched_seed) {
        std::vector<std::size_t> p(sched_n + sched_n % 2);
        for (std::size_t k = 0; k < p.size(); ++k) p[k] = k;
        std::mt19937_64 rng(*sched_seed);
        std::shuffle(p.begin(), p.end(), rng);
        perm = std::move(p);
      }
      out << format_schedule(build_circle_schedule(sched_n, perm, sched_m));
      return kExitOk;
    }

    if (*verify) {
      vopts.mode = mode == "unitary"      ? VerifyMode::kUnitary
                   : mode == "restricted" ? VerifyMode::kRestricted
                                          : VerifyMode::kReal;
      const auto report = run_verify(vopts);
      out << "verify mode=" << mode << " n=" << report.n << " m=" << report.m
          << " parameters=" << report.parameters << " trials=" << vopts.trials
          << " seed=" << vopts.seed << "\n";
      for (const auto& c : report.checks) {
        out << "  " << std::left << std::setw(24) << c.name << " max_error=" << format_error(c.max_error)
            << "  tol=" << format_error(c.tolerance) << "  " << (c.passed ? "ok" : "FAIL") << "\n";
      }
      if (!report.ok()) {
        for (const auto& c : report.checks)
          if (!c.passed) err << "verification failed: " << c.name << "\n";
        return kExitCheckFailed;
      }
      out << "all checks passed\n";
      return kExitOk;
    }

    if (*bench) {
      if (bopts.workers.empty()) bopts.workers = {1, WorkerPool::hardware_workers()};
      bopts.single_precision = precision == "f32";
      std::ofstream file;
      if (!out_path.empty()) {
        file.open(out_path);
        if (!file) return usage_error(err, "cannot open output file " + out_path);
      }
      const auto records = run_bench(bopts);
      write_csv(out_path.empty() ? out : file, records);
      if (!out_path.empty()) {
        file.close();
        if (!file) return usage_error(err, "failed writing " + out_path);
        out << "wrote " << records.size() << " rows to " << out_path << " (seed " << bopts.seed
            << ")\n";
      }
      return kExitOk;
    }
  } catch (const ParameterError& e) {
    return usage_error(err, e.what());
  }
  return kExitUsage;
}

}  // namespace rrgivens::cli
