#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asymcomp/expression.hpp"

namespace asymcomp {

/// A growth function f(n) > 0 on [1, inf), evaluated in the log domain.
///
/// Either built from an expression in the single variable `n`, or wrapped
/// around a callable returning ln f(x) (used for piecewise fixtures the
/// expression language cannot state).
class ComplexityFn {
 public:
  explicit ComplexityFn(Expr body);
  static ComplexityFn parse(std::string_view text);
  static ComplexityFn from_log_callable(std::string label,
                                        std::function<double(double)> log_eval);

  /// ln f(x); throws EvalError when f(x) is not a finite positive value.
  double log_value(double x) const;

  /// c * f, for c > 0.
  ComplexityFn scaled(double c) const;

  const std::optional<Expr>& body() const { return body_; }
  const std::string& label() const { return label_; }

 private:
  ComplexityFn() = default;
  std::optional<Expr> body_;
  std::string label_;
  std::function<double(double)> log_eval_;
};

struct ComparatorConfig {
  int q = 2;               ///< ratio of the geometric sampling sequence
  int k = 4;               ///< convergence window length
  double eps = 1e-3;       ///< convergence tolerance on consecutive ratios
  int L = 64;              ///< maximum ratio samples per pass
  int tmax = 60;           ///< maximum doublings of xmax per bracketing attempt
  int pmax = 2;            ///< highest derivative order examined by the root sweep
  double eps_d = 1e-6;     ///< relative finite-difference step
  double tau_zero = 1e-12; ///< absolute zero tolerance for root tests
  double delta_bisect = 1e-9;
  int m_zero = 16;         ///< samples used to declare a derivative identically zero
  int skip_cap = 10000;    ///< cap on unit steps past a zero of dif
  int max_roots = 64;      ///< cap on roots located by one sweep

  /// Throws std::invalid_argument naming the first violated bound.
  void validate() const;
  /// Same comparator with L*4 samples and eps/10.
  ComparatorConfig widened() const;
};

enum class CompCode { Equivalent = 1, FirstSmaller = 2, SecondSmaller = 3, Inconclusive = 4 };

/// "EQUIVALENT", "FIRST_SMALLER", "SECOND_SMALLER" or "INCONCLUSIVE".
std::string_view code_name(CompCode code);
/// The swapped-argument counterpart: <2> <-> <3>.
CompCode mirror(CompCode code);

struct RatioSample {
  double n;
  double log_ratio;
  double ratio;  // +inf once the log ratio passes the overflow sentinel
};

struct LimitEstimate {
  enum class Kind { Bounded, Divergent, Inconclusive };
  Kind kind = Kind::Inconclusive;
  double value = 0.0;  // last sampled ratio when Bounded
  std::vector<RatioSample> samples;
};

std::string_view kind_name(LimitEstimate::Kind kind);

struct LocatedRoot {
  double x;
  int order;  // derivative order whose sign change was bracketed
};

struct SweepResult {
  double start = 1.0;
  double domain_start = 1.0;
  std::vector<LocatedRoot> roots;
  std::vector<int> zero_orders;  // derivative orders detected identically zero
  std::size_t evaluations = 0;
  std::size_t domain_steps = 0;
  std::size_t skip_steps = 0;
  std::size_t zero_probes = 0;
  bool budget_exhausted = false;
};

struct CompTrace {
  SweepResult sweep;
  std::optional<LimitEstimate> forward;   // f1 / f2
  std::optional<LimitEstimate> backward;  // f2 / f1
  std::size_t evaluations = 0;            // function-pair evaluations, all phases
  std::vector<std::string> notes;
};

struct CompResult {
  CompCode code = CompCode::Inconclusive;
  CompTrace trace;
};

/// ln f1(x) - ln f2(x), snapped to 0 within tau_zero.
double ldif(const ComplexityFn& f1, const ComplexityFn& f2, double x,
            const ComparatorConfig& cfg = {});

/// Finite-difference step used at x: the largest power of two not above
/// eps_d * max(1, |x|), so x + j*h is exact for small j.
double fd_step(double x, const ComparatorConfig& cfg = {});

/// p-fold nested forward difference of d at x with a fixed step fd_step(x).
double fd_derivative(const std::function<double(double)>& d, int p, double x,
                     const ComparatorConfig& cfg = {});

/// Bisection on [a, b]; requires opposite tau_zero-thresholded signs at the
/// endpoints, throws std::invalid_argument otherwise.
double bisect_root(const std::function<double(double)>& d, double a, double b,
                   const ComparatorConfig& cfg = {});

/// Root sweep over ldif and its derivatives up to pmax, with diagnostics.
SweepResult sweep_roots(const ComplexityFn& f1, const ComplexityFn& f2,
                        const ComparatorConfig& cfg = {});

double find_root_free_start(const ComplexityFn& f1, const ComplexityFn& f2,
                            const ComparatorConfig& cfg = {});

LimitEstimate estimate_ratio_limit(const ComplexityFn& fnum, const ComplexityFn& fden,
                                   double start, const ComparatorConfig& cfg = {});

/// Four-valued comparison. Never throws for evaluation failures: they turn
/// into Inconclusive with a note in the trace.
CompResult comp(const ComplexityFn& f1, const ComplexityFn& f2, const ComparatorConfig& cfg = {});

/// Evaluation bound implied by the counters of a finished trace.
std::size_t evaluation_budget(const ComparatorConfig& cfg, const CompTrace& trace);
/// Worst-case evaluation count of comp for any pair of functions.
std::size_t max_evaluations(const ComparatorConfig& cfg);

}  // namespace asymcomp
