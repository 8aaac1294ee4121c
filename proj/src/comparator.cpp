#include "asymcomp/comparator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace asymcomp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMachineEps = std::numeric_limits<double>::epsilon();
// Log ratios beyond this are reported as +inf.
constexpr double kRatioSentinel = 700.0;
constexpr int kBisectIterations = 200;
// Safety factor on the rounding-noise floor of a finite difference.
constexpr double kNoiseFactor = 16.0;

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// Forward difference of order p from samples at x, x+h, ..., x+p*h.
double forward_difference(const std::vector<double>& values, int p, double h) {
  double acc = 0.0;
  for (int j = 0; j <= p; ++j) {
    double term = binomial(p, j) * values[j];
    acc += ((p - j) % 2 == 0) ? term : -term;
  }
  return acc / std::pow(h, p);
}

int thresholded_sign(double v, double zero) {
  if (std::fabs(v) <= zero) return 0;
  return v > 0.0 ? 1 : -1;
}

}  // namespace

// ---------------------------------------------------------------------------
// ComplexityFn

ComplexityFn::ComplexityFn(Expr body) {
  if (!pattern_variables(body).empty()) {
    throw std::invalid_argument("complexity function must not contain pattern variables");
  }
  for (const auto& v : free_variables(body)) {
    if (v != "n") {
      throw std::invalid_argument("complexity function may only use the variable n, found '" +
                                  v + "'");
    }
  }
  label_ = format(body);
  log_eval_ = [body](double x) { return evaluate(body, {{"n", x}}, EvalMode::Log); };
  body_ = std::move(body);
}

ComplexityFn ComplexityFn::parse(std::string_view text) {
  return ComplexityFn(asymcomp::parse(text));
}

ComplexityFn ComplexityFn::from_log_callable(std::string label,
                                             std::function<double(double)> log_eval) {
  ComplexityFn f;
  f.label_ = std::move(label);
  f.log_eval_ = std::move(log_eval);
  return f;
}

double ComplexityFn::log_value(double x) const {
  double v = log_eval_(x);
  if (std::isnan(v) || v == -kInf) {
    throw EvalError(EvalError::Kind::Domain,
                    label_ + " is not positive at n = " + format_number(x));
  }
  if (v == kInf) {
    throw EvalError(EvalError::Kind::Overflow, label_ + " overflows at n = " + format_number(x));
  }
  return v;
}

ComplexityFn ComplexityFn::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("scale factor must be positive and finite");
  }
  if (body_) return ComplexityFn(Expr::number(c) * *body_);
  double lc = std::log(c);
  auto inner = log_eval_;
  return from_log_callable(format_number(c) + "*(" + label_ + ")",
                           [inner, lc](double x) { return lc + inner(x); });
}

// ---------------------------------------------------------------------------
// Config and result names

void ComparatorConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("invalid comparator config: ") + what);
  };
  require(q >= 2, "q >= 2");
  require(k >= 2, "k >= 2");
  require(eps > 0.0, "eps > 0");
  require(L >= k, "L >= k");
  require(tmax >= 1, "tmax >= 1");
  require(pmax >= 0, "pmax >= 0");
  require(eps_d > 0.0, "eps_d > 0");
  require(tau_zero > 0.0, "tau_zero > 0");
  require(delta_bisect > 0.0, "delta_bisect > 0");
  require(m_zero >= 2, "m_zero >= 2");
  require(skip_cap >= 1, "skip_cap >= 1");
  require(max_roots >= 1, "max_roots >= 1");
}

ComparatorConfig ComparatorConfig::widened() const {
  ComparatorConfig c = *this;
  c.L *= 4;
  c.eps /= 10.0;
  return c;
}

std::string_view code_name(CompCode code) {
  switch (code) {
    case CompCode::Equivalent: return "EQUIVALENT";
    case CompCode::FirstSmaller: return "FIRST_SMALLER";
    case CompCode::SecondSmaller: return "SECOND_SMALLER";
    case CompCode::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

CompCode mirror(CompCode code) {
  if (code == CompCode::FirstSmaller) return CompCode::SecondSmaller;
  if (code == CompCode::SecondSmaller) return CompCode::FirstSmaller;
  return code;
}

std::string_view kind_name(LimitEstimate::Kind kind) {
  switch (kind) {
    case LimitEstimate::Kind::Bounded: return "BOUNDED";
    case LimitEstimate::Kind::Divergent: return "DIVERGENT";
    case LimitEstimate::Kind::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

// ---------------------------------------------------------------------------
// Numeric primitives

double ldif(const ComplexityFn& f1, const ComplexityFn& f2, double x,
            const ComparatorConfig& cfg) {
  double d = f1.log_value(x) - f2.log_value(x);
  return std::fabs(d) <= cfg.tau_zero ? 0.0 : d;
}

double fd_step(double x, const ComparatorConfig& cfg) {
  double target = cfg.eps_d * std::max(1.0, std::fabs(x));
  int exp = 0;
  std::frexp(target, &exp);  // target in [2^(exp-1), 2^exp)
  return std::ldexp(1.0, exp - 1);
}

double fd_derivative(const std::function<double(double)>& d, int p, double x,
                     const ComparatorConfig& cfg) {
  if (p < 0 || p > cfg.pmax) {
    throw std::invalid_argument("derivative order must lie in [0, pmax]");
  }
  if (p == 0) return d(x);
  double h = fd_step(x, cfg);
  std::vector<double> values(p + 1);
  for (int j = 0; j <= p; ++j) values[j] = d(x + j * h);
  return forward_difference(values, p, h);
}

double bisect_root(const std::function<double(double)>& d, double a, double b,
                   const ComparatorConfig& cfg) {
  if (!(a < b)) throw std::invalid_argument("bisect_root requires a < b");
  int sa = thresholded_sign(d(a), cfg.tau_zero);
  int sb = thresholded_sign(d(b), cfg.tau_zero);
  if (sa * sb >= 0) {
    throw std::invalid_argument("bisect_root requires a sign change on [" + format_number(a) +
                                ", " + format_number(b) + "]");
  }
  for (int it = 0; it < kBisectIterations; ++it) {
    if (b - a <= cfg.delta_bisect * std::max(1.0, std::fabs(a))) break;
    double c = a + (b - a) / 2.0;
    int sc = thresholded_sign(d(c), cfg.tau_zero);
    if (sc == 0) return c;
    if (sc * sb < 0) {
      a = c;
    } else {
      b = c;
      sb = sc;
    }
  }
  return a + (b - a) / 2.0;
}

// ---------------------------------------------------------------------------
// Root sweep

namespace {

class Sweeper {
 public:
  Sweeper(const ComplexityFn& f1, const ComplexityFn& f2, const ComparatorConfig& cfg,
          SweepResult& out)
      : f1_(f1), f2_(f2), cfg_(cfg), out_(out) {}

  // Thresholded derivatives of ldif at one point, orders 0..max_order.
  struct Probe {
    std::vector<double> value;
    std::vector<int> sign;
  };

  Probe probe(double x, int max_order) {
    double h = fd_step(x, cfg_);
    std::vector<double> raw(max_order + 1);
    double scale = 0.0;
    for (int j = 0; j <= max_order; ++j) {
      ++out_.evaluations;
      double l1 = f1_.log_value(x + j * h);
      double l2 = f2_.log_value(x + j * h);
      raw[j] = l1 - l2;
      scale = std::max({scale, std::fabs(l1), std::fabs(l2)});
    }
    Probe pr;
    for (int p = 0; p <= max_order; ++p) {
      double v = forward_difference(raw, p, h);
      // Rounding in ln f1 and ln f2 is relative to their magnitude, not to
      // their difference; values within that noise count as zero.
      double floor = cfg_.tau_zero + kNoiseFactor * std::ldexp(kMachineEps, p) * scale /
                                         std::pow(h, p);
      pr.value.push_back(v);
      pr.sign.push_back(thresholded_sign(v, floor));
    }
    return pr;
  }

  double order_value(double x, int p) {
    Probe pr = probe(x, p);
    return pr.sign[p] == 0 ? 0.0 : pr.value[p];
  }

  bool identically_zero(int p, double x0) {
    for (int j = 0; j < cfg_.m_zero; ++j) {
      ++out_.zero_probes;
      double x = x0 + (std::ldexp(1.0, j) - 1.0);
      if (probe(x, p).sign[p] != 0) return false;
    }
    return true;
  }

  double domain_start() {
    double x = 1.0;
    for (int step = 0;; ++step) {
      ++out_.evaluations;
      try {
        f1_.log_value(x);
        f2_.log_value(x);
        return x;
      } catch (const EvalError&) {
        if (step >= cfg_.skip_cap) throw;
      }
      ++out_.domain_steps;
      x += 1.0;
    }
  }

  void run() {
    const int orders = cfg_.pmax + 1;
    std::vector<bool> zero(orders, false);
    double xmin = domain_start();
    out_.domain_start = xmin;

    while (true) {
      // Step past points where some non-trivial derivative vanishes.
      std::vector<bool> tested(orders, false);
      Probe at_min;
      for (int steps = 0;; ++steps) {
        at_min = probe(xmin, cfg_.pmax);
        bool any_zero = false;
        for (int p = 0; p < orders; ++p) {
          if (zero[p] || at_min.sign[p] != 0) continue;
          if (!tested[p]) {
            tested[p] = true;
            if (identically_zero(p, xmin)) {
              zero[p] = true;
              continue;
            }
          }
          any_zero = true;
        }
        if (!any_zero) break;
        if (steps >= cfg_.skip_cap) {
          for (int p = 0; p < orders; ++p) {
            if (at_min.sign[p] == 0) zero[p] = true;
          }
          break;
        }
        ++out_.skip_steps;
        xmin += 1.0;
      }
      if (std::all_of(zero.begin(), zero.end(), [](bool z) { return z; })) break;

      // Bracket by doubling xmax; the lowest order with a sign change wins.
      std::optional<LocatedRoot> root;
      double xmax = xmin + 1.0;
      for (int t = 0; t <= cfg_.tmax && !root; ++t) {
        Probe at_max = probe(xmax, cfg_.pmax);
        for (int p = 0; p < orders; ++p) {
          if (zero[p] || at_min.sign[p] * at_max.sign[p] >= 0) continue;
          double x = bisect_root([&](double y) { return order_value(y, p); }, xmin, xmax, cfg_);
          root = LocatedRoot{x, p};
          break;
        }
        xmax *= 2.0;
      }
      if (!root) break;
      out_.roots.push_back(*root);
      xmin = root->x + 1.0;
      if (out_.roots.size() >= static_cast<std::size_t>(cfg_.max_roots)) {
        out_.budget_exhausted = true;
        break;
      }
    }

    for (int p = 0; p < orders; ++p) {
      if (zero[p]) out_.zero_orders.push_back(p);
    }
    out_.start = xmin;
  }

 private:
  const ComplexityFn& f1_;
  const ComplexityFn& f2_;
  const ComparatorConfig& cfg_;
  SweepResult& out_;
};

}  // namespace

SweepResult sweep_roots(const ComplexityFn& f1, const ComplexityFn& f2,
                        const ComparatorConfig& cfg) {
  cfg.validate();
  SweepResult out;
  Sweeper(f1, f2, cfg, out).run();
  return out;
}

double find_root_free_start(const ComplexityFn& f1, const ComplexityFn& f2,
                            const ComparatorConfig& cfg) {
  return sweep_roots(f1, f2, cfg).start;
}

// ---------------------------------------------------------------------------
// Ratio limit

LimitEstimate estimate_ratio_limit(const ComplexityFn& fnum, const ComplexityFn& fden,
                                   double start, const ComparatorConfig& cfg) {
  cfg.validate();
  if (!(start >= 1.0)) throw std::invalid_argument("ratio sampling must start at n >= 1");
  LimitEstimate est;
  auto& s = est.samples;
  const auto k = static_cast<std::size_t>(cfg.k);
  double x = start;
  for (int i = 0; i < cfg.L && std::isfinite(x); ++i, x *= cfg.q) {
    double lr = fnum.log_value(x) - fden.log_value(x);
    if (lr > kRatioSentinel) {
      s.push_back({x, lr, kInf});
      est.kind = LimitEstimate::Kind::Divergent;
      return est;
    }
    s.push_back({x, lr, std::exp(lr)});
    if (s.size() >= k) {
      bool settled = true;
      for (std::size_t j = s.size() - k; j + 1 < s.size(); ++j) {
        if (std::fabs(s[j + 1].ratio - s[j].ratio) > cfg.eps) {
          settled = false;
          break;
        }
      }
      if (settled) {
        est.kind = LimitEstimate::Kind::Bounded;
        est.value = s.back().ratio;
        return est;
      }
    }
  }
  if (s.size() >= k) {
    bool increasing = true;
    for (std::size_t j = s.size() - k; j + 1 < s.size(); ++j) {
      if (!(s[j + 1].ratio > s[j].ratio)) increasing = false;
    }
    double first = s[s.size() - k].ratio;
    if (increasing && s.back().ratio >= (1.0 + cfg.eps) * first) {
      est.kind = LimitEstimate::Kind::Divergent;
    }
  }
  return est;
}

// ---------------------------------------------------------------------------
// Comp

CompResult comp(const ComplexityFn& f1, const ComplexityFn& f2, const ComparatorConfig& cfg) {
  using Kind = LimitEstimate::Kind;
  cfg.validate();
  CompResult result;
  auto& trace = result.trace;
  auto finish = [&](CompCode code) {
    result.code = code;
    trace.evaluations = trace.sweep.evaluations;
    if (trace.forward) trace.evaluations += trace.forward->samples.size();
    if (trace.backward) trace.evaluations += trace.backward->samples.size();
    return result;
  };
  try {
    Sweeper(f1, f2, cfg, trace.sweep).run();
    const double s = trace.sweep.start;
    if (trace.sweep.budget_exhausted) {
      trace.notes.push_back("root sweep stopped after " + std::to_string(cfg.max_roots) +
                            " roots");
    }
    trace.forward = estimate_ratio_limit(f1, f2, s, cfg);
    switch (trace.forward->kind) {
      case Kind::Bounded:
        trace.backward = estimate_ratio_limit(f2, f1, s, cfg);
        return finish(trace.backward->kind == Kind::Bounded ? CompCode::Equivalent
                                                            : CompCode::FirstSmaller);
      case Kind::Divergent:
        return finish(CompCode::SecondSmaller);
      case Kind::Inconclusive:
        trace.backward = estimate_ratio_limit(f2, f1, s, cfg);
        if (trace.backward->kind == Kind::Divergent) return finish(CompCode::FirstSmaller);
        if (trace.backward->kind == Kind::Bounded && trace.backward->value > cfg.eps) {
          return finish(CompCode::Equivalent);
        }
        return finish(CompCode::Inconclusive);
    }
  } catch (const std::exception& e) {
    trace.notes.push_back(std::string("evaluation failed: ") + e.what());
  }
  return finish(CompCode::Inconclusive);
}

std::size_t evaluation_budget(const ComparatorConfig& cfg, const CompTrace& trace) {
  const auto& sw = trace.sweep;
  const std::size_t probe = static_cast<std::size_t>(cfg.pmax) + 1;
  const std::size_t roots = sw.roots.size();
  const std::size_t segments = roots + 1;
  return (sw.domain_steps + 1) +
         (segments + sw.skip_steps + sw.zero_probes) * probe +
         segments * (static_cast<std::size_t>(cfg.tmax) + 1) * probe +
         roots * (kBisectIterations + 2) * probe +
         2 * static_cast<std::size_t>(cfg.L);
}

std::size_t max_evaluations(const ComparatorConfig& cfg) {
  CompTrace worst;
  worst.sweep.domain_steps = static_cast<std::size_t>(cfg.skip_cap);
  const std::size_t segments = static_cast<std::size_t>(cfg.max_roots) + 1;
  worst.sweep.roots.resize(static_cast<std::size_t>(cfg.max_roots));
  worst.sweep.skip_steps = segments * static_cast<std::size_t>(cfg.skip_cap);
  worst.sweep.zero_probes =
      segments * static_cast<std::size_t>(cfg.pmax + 1) * static_cast<std::size_t>(cfg.m_zero);
  return evaluation_budget(cfg, worst);
}

}  // namespace asymcomp
