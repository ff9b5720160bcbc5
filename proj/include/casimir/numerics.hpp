#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "casimir/errors.hpp"

namespace casimir {

/// Tolerances and budgets shared by every integrator and spectral sum.
struct QuadratureSettings {
  double rel_tol = 1e-5;
  double abs_floor = 0.0;
  int max_subdivisions = 2000;
  /// Exponential cutoff for the y = 2 a kappa0 variable. The pressure kernel
  /// behaves like y^2 e^{-y}, so 60 leaves < 1e-22 of the peak.
  double y_max = 60.0;
  long matsubara_m_max = 1'000'000;
  /// Threads used to evaluate Matsubara terms. Reduction order never depends on it.
  int workers = 1;

  /// Throws DomainError unless rel_tol in (1e-12, 1e-1] and y_max >= 30.
  void validate() const;

  QuadratureSettings with_rel_tol(double tol) const {
    QuadratureSettings s = *this;
    s.rel_tol = tol;
    return s;
  }
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

/// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

namespace detail {

// Gauss-Kronrod 15-point abscissae/weights with the embedded 7-point Gauss rule.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo, hi, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gauss_kronrod_15(F& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  double resabs = std::abs(resk);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double a = f(center - dx);
    const double b = f(center + dx);
    f1[j] = a;
    f2[j] = b;
    resk += kWgk[j] * (a + b);
    resabs += kWgk[j] * (std::abs(a) + std::abs(b));
    if (j % 2 == 1) resg += kWg[j / 2] * (a + b);
  }
  if (!std::isfinite(resk))
    throw DomainError("integrand is not finite on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  resk *= half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs(resk - resg * half);
  // QUADPACK scaling of |K15 - G7| plus a roundoff floor.
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  return {lo, hi, resk, err};
}

}  // namespace detail

/// Globally adaptive 15/7 Gauss-Kronrod quadrature over consecutive panels
/// [breaks[0], breaks[1]], ..., bisecting the panel with the largest error
/// until error <= max(rel_tol |value|, abs_floor).
template <class F>
QuadResult adaptive_quad(F&& f, std::span<const double> breaks, const QuadratureSettings& settings) {
  if (breaks.size() < 2) throw DomainError("adaptive_quad needs at least one interval");
  for (std::size_t i = 1; i < breaks.size(); ++i)
    if (!(breaks[i - 1] < breaks[i])) throw DomainError("adaptive_quad: integration limits must be ascending");

  std::priority_queue<detail::Panel> heap;
  for (std::size_t i = 1; i < breaks.size(); ++i) heap.push(detail::gauss_kronrod_15(f, breaks[i - 1], breaks[i]));

  // Sums a copy in position order so the result is independent of heap layout.
  auto totals = [&heap]() {
    std::vector<detail::Panel> panels;
    panels.reserve(heap.size());
    auto copy = heap;
    while (!copy.empty()) {
      panels.push_back(copy.top());
      copy.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
    CompensatedSum value, error;
    for (const auto& p : panels) {
      value += p.value;
      error += p.error;
    }
    return std::pair{value.value(), error.value()};
  };

  auto [value, error] = totals();
  int subdivisions = 0;
  while (error > std::max(settings.rel_tol * std::abs(value), settings.abs_floor)) {
    if (subdivisions >= settings.max_subdivisions) {
      auto [v, e] = totals();
      throw ConvergenceError("adaptive_quad: subdivision budget exhausted", v, e);
    }
    const detail::Panel worst = heap.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(worst.lo < mid && mid < worst.hi)) {
      auto [v, e] = totals();
      throw ConvergenceError("adaptive_quad: panel cannot be bisected further", v, e);
    }
    heap.pop();
    const auto left = detail::gauss_kronrod_15(f, worst.lo, mid);
    const auto right = detail::gauss_kronrod_15(f, mid, worst.hi);
    heap.push(left);
    heap.push(right);
    value += (left.value + right.value) - worst.value;
    error += (left.error + right.error) - worst.error;
    ++subdivisions;
    if (subdivisions % 64 == 0) std::tie(value, error) = totals();
  }
  auto [v, e] = totals();
  return {v, e, subdivisions};
}

template <class F>
QuadResult adaptive_quad(F&& f, double lo, double hi, const QuadratureSettings& settings) {
  const std::array<double, 2> breaks{lo, hi};
  return adaptive_quad(std::forward<F>(f), std::span<const double>(breaks), settings);
}

/// Breakpoints 0, hi*ratio^(levels-1), ..., hi*ratio, hi: panels refined
/// geometrically toward the origin.
std::vector<double> geometric_breaks(double hi, double ratio, int levels);

struct SumDiagnostics {
  long terms_used = 0;
  double last_term_fraction = 0.0;
  double truncation_estimate = 0.0;
};

struct SumControl {
  /// The stopping rule may only fire once m >= this index (e.g. past the
  /// exponential knee of the summand).
  long min_stop_index = 0;
  /// Consecutive negligible terms required before stopping.
  int quiet_terms = 3;
};

template <class R>
struct TermSequence {
  std::vector<R> terms;  // terms[m], full weight
  SumDiagnostics diagnostics;
};

/// Evaluates term(0), term(1), ... until `quiet_terms` consecutive weighted
/// contributions fall below rel_tol/10 of the running primed sum (m = 0 at
/// half weight) and the geometric tail extrapolated from the last two terms
/// is below the same fraction. `magnitude(r)` projects a term onto the scalar used by the
/// stopping rule. Terms may be evaluated concurrently in blocks; the scan
/// and the returned sequence are in ascending m regardless of scheduling.
template <class Term, class Magnitude>
auto matsubara_terms(Term&& term, Magnitude&& magnitude, const QuadratureSettings& settings,
                     const SumControl& control = {}) -> TermSequence<decltype(term(0L))> {
  using R = decltype(term(0L));
  TermSequence<R> out;
  const double threshold = settings.rel_tol / 10.0;
  const int workers = std::max(1, settings.workers);
  const long block = workers == 1 ? 1 : 8L * workers;

  CompensatedSum running;
  int quiet = 0;
  double prev_abs = 0.0;
  long m = 0;
  std::vector<std::optional<R>> buffer;
  while (true) {
    const long count = std::min(block, settings.matsubara_m_max + 1 - m);
    if (count <= 0) {
      throw ConvergenceError("matsubara_sum: m_max reached before convergence (" +
                                 std::to_string(out.terms.size()) + " terms)",
                             running.value(), out.diagnostics.truncation_estimate);
    }
    buffer.assign(static_cast<std::size_t>(count), std::nullopt);
    if (count == 1) {
      buffer[0].emplace(term(m));
    } else {
      std::exception_ptr failure;
      std::mutex failure_mutex;
      {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) {
          pool.emplace_back([&, w] {
            try {
              for (long i = w; i < count; i += workers) buffer[static_cast<std::size_t>(i)].emplace(term(m + i));
            } catch (...) {
              std::lock_guard lock(failure_mutex);
              if (!failure) failure = std::current_exception();
            }
          });
        }
      }
      if (failure) std::rethrow_exception(failure);
    }
    for (long i = 0; i < count; ++i, ++m) {
      R& r = *buffer[static_cast<std::size_t>(i)];
      const double x = magnitude(r);
      const double weighted = (m == 0 ? 0.5 : 1.0) * x;
      running += weighted;
      out.terms.push_back(std::move(r));
      const double scale = std::abs(running.value());
      const double fraction = scale > 0.0 ? std::abs(weighted) / scale : (weighted == 0.0 ? 0.0 : 1.0);
      out.diagnostics.terms_used = m + 1;
      out.diagnostics.last_term_fraction = fraction;
      const double ratio = prev_abs > 0.0 ? std::abs(x) / prev_abs : 1.0;
      out.diagnostics.truncation_estimate = ratio < 1.0 ? std::abs(x) * ratio / (1.0 - ratio) : std::abs(x);
      prev_abs = std::abs(x);
      quiet = fraction < threshold || fraction == 0.0 ? quiet + 1 : 0;
      const bool tail_small = out.diagnostics.truncation_estimate <= threshold * scale;
      if (quiet >= control.quiet_terms && m >= control.min_stop_index && tail_small) return out;
    }
  }
}

struct SumResult {
  double value = 0.0;
  SumDiagnostics diagnostics;
};

/// Primed sum  term(0)/2 + sum_{m>=1} term(m)  with the truncation rule of
/// matsubara_terms and compensated ascending-order accumulation.
template <class Term>
SumResult matsubara_sum(Term&& term, const QuadratureSettings& settings, const SumControl& control = {}) {
  auto seq = matsubara_terms(std::forward<Term>(term), [](double x) { return x; }, settings, control);
  CompensatedSum total;
  for (std::size_t m = 0; m < seq.terms.size(); ++m) total += (m == 0 ? 0.5 : 1.0) * seq.terms[m];
  return {total.value(), seq.diagnostics};
}

/// Bernoulli numbers B_2, B_4, B_6, B_8.
inline constexpr std::array<double, 4> kBernoulliEven = {1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0};

/// Weights w_j such that f^(order)(0) ~ h^-order * sum_j w_j f(j h), from the
/// truncated series of (ln(1 + Delta))^order over `points` samples.
std::vector<double> forward_derivative_weights(int order, int points);

struct EulerMaclaurinOptions {
  /// Upper end of the m integral; infinity maps [0, inf) onto [0, 1).
  double upper = std::numeric_limits<double>::infinity();
  /// Step in m for one-sided finite differences.
  double derivative_step = 0.05;
  /// Samples per one-sided stencil; 0 picks 2*k_terms + 4.
  int stencil_points = 0;
  /// Optional f'(0), f'''(0), ... supplied analytically.
  std::vector<double> odd_derivatives;
};

struct EulerMaclaurinResult {
  double value = 0.0;
  double integral = 0.0;
  double integral_error = 0.0;
  std::vector<double> corrections;  // -B_2k/(2k)! f^(2k-1)(0), k = 1..k_terms
};

/// Primed sum of f over m = 0, 1, 2, ... approximated as
/// int_0^inf f dm - sum_{k=1}^{K} B_2k/(2k)! f^(2k-1)(0).
EulerMaclaurinResult euler_maclaurin(const std::function<double(double)>& f, const QuadratureSettings& settings,
                                     int k_terms, const EulerMaclaurinOptions& options = {});

struct DerivativeResult {
  double value = 0.0;
  double error = 0.0;
};

/// Central difference at x starting from step `scale`, Richardson-extrapolated
/// over halved steps down to scale/64; returns the most self-consistent level.
DerivativeResult guarded_derivative(const std::function<double(double)>& g, double x, double scale);

}  // namespace casimir
