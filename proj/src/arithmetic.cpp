#include "calabi/arithmetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "calabi/errors.hpp"

namespace calabi {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::optional<std::int64_t> checked_recurrence(std::int64_t a, std::int64_t x1, std::int64_t x2) {
  std::int64_t prod = 0, sum = 0;
  if (__builtin_mul_overflow(a, x1, &prod) || __builtin_add_overflow(prod, x2, &sum))
    return std::nullopt;
  return sum;
}

// log(exp(x) + exp(y))
double log_add(double x, double y) {
  if (x == -std::numeric_limits<double>::infinity()) return y;
  if (y == -std::numeric_limits<double>::infinity()) return x;
  const double hi = std::max(x, y), lo = std::min(x, y);
  return hi + std::log1p(std::exp(lo - hi));
}

class Builder {
 public:
  explicit Builder(ContinuedFraction& cf) : cf_(cf) {}

  // Appends a_n; `exact` is empty when a_n does not fit in 64 bits.
  void push(std::optional<std::int64_t> exact, double log_a) {
    const std::size_t n = cf_.log_q.size();
    const double lq = n == 0 ? 0.0 : log_add(log_a + cf_.log_q.back(), n >= 2 ? cf_.log_q[n - 2] : -std::numeric_limits<double>::infinity());
    cf_.log_a.push_back(log_a);
    cf_.log_q.push_back(lq);
    if (cf_.overflowed) return;
    std::optional<std::int64_t> p, q;
    if (exact) {
      p = checked_recurrence(*exact, p1_, p2_);
      q = checked_recurrence(*exact, q1_, q2_);
    }
    if (!p || !q) {
      cf_.overflowed = true;
      cf_.warnings.push_back("integer convergents truncated at n = " + std::to_string(n));
      return;
    }
    cf_.a.push_back(*exact);
    cf_.p.push_back(*p);
    cf_.q.push_back(*q);
    p2_ = p1_;
    p1_ = *p;
    q2_ = q1_;
    q1_ = *q;
  }

 private:
  ContinuedFraction& cf_;
  std::int64_t p1_ = 1, p2_ = 0, q1_ = 0, q2_ = 1;
};

}  // namespace

double ContinuedFraction::q_value(std::size_t n) const {
  if (n < q.size()) return static_cast<double>(q[n]);
  return std::exp(log_q.at(n));
}

double ContinuedFraction::convergent(std::size_t n) const {
  if (n >= a.size()) throw std::out_of_range("convergent beyond exact terms");
  return static_cast<double>(p[n]) / static_cast<double>(q[n]);
}

ContinuedFraction continued_fraction(double alpha, int depth) {
  if (depth < 1) throw ConfigError("continued fraction depth must be >= 1");
  if (!std::isfinite(alpha)) throw ConfigError("alpha must be finite");
  ContinuedFraction cf;
  Builder build(cf);
  double x = alpha;
  for (int n = 0; n < depth; ++n) {
    double a = std::floor(x);
    bool last = false;
    if (n > 0) {
      // x carries a relative error of order eps q_{n-1}^2; treat it as an
      // integer when it is that close to one.
      const double q1 = cf.q.empty() ? 1.0 : static_cast<double>(cf.q.back());
      if (std::abs(x - std::round(x)) <= 8.0 * kEps * q1 * q1 * std::abs(x)) {
        a = std::round(x);
        last = true;
      }
    }
    if (std::abs(a) > 9.0e18) {
      cf.depth_unreliable = true;
      cf.warnings.push_back("DepthUnreliable: partial quotient out of range at n = " +
                            std::to_string(n));
      break;
    }
    build.push(static_cast<std::int64_t>(a), a > 0 ? std::log(a) : -std::numeric_limits<double>::infinity());
    if (last) {
      cf.terminated = true;
      break;
    }
    const double frac = x - a;
    const double qn = static_cast<double>(cf.q.back());
    if (frac <= 8.0 * kEps * std::max(1.0, std::abs(x)) * qn * qn) {
      cf.terminated = true;
      break;
    }
    if (64.0 * kEps * qn * qn >= 1.0) {
      cf.depth_unreliable = true;
      cf.warnings.push_back("DepthUnreliable: precision horizon reached at n = " +
                            std::to_string(n));
      break;
    }
    x = 1.0 / frac;
  }
  return cf;
}

ContinuedFraction from_quotients(std::span<const std::int64_t> a) {
  if (a.empty()) throw ConfigError("quotient list is empty");
  ContinuedFraction cf;
  Builder build(cf);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i > 0 && a[i] < 1) throw ConfigError("partial quotients a_i must be >= 1 for i >= 1");
    build.push(a[i], a[i] > 0 ? std::log(static_cast<double>(a[i]))
                              : -std::numeric_limits<double>::infinity());
  }
  return cf;
}

ContinuedFraction synthetic_doubly_exponential(int depth) {
  if (depth < 1) throw ConfigError("continued fraction depth must be >= 1");
  ContinuedFraction cf;
  Builder build(cf);
  build.push(0, -std::numeric_limits<double>::infinity());
  for (int n = 1; n < depth; ++n) {
    const double qn = cf.q_value(static_cast<std::size_t>(n - 1));
    const double log_a = qn * std::log(2.0);
    if (!std::isfinite(log_a)) {
      cf.warnings.push_back("synthetic sequence left double range at n = " + std::to_string(n));
      break;
    }
    std::optional<std::int64_t> exact;
    if (qn < 62.0) exact = std::int64_t{1} << static_cast<int>(qn);
    build.push(exact, log_a);
  }
  return cf;
}

std::vector<BestApproxEntry> best_approx_check(const ContinuedFraction& cf, double alpha) {
  std::vector<BestApproxEntry> out;
  for (std::size_t n = 0; n < cf.exact_terms(); ++n) {
    BestApproxEntry e;
    e.n = n;
    if (n + 1 >= cf.exact_terms()) {
      out.push_back(e);
      continue;
    }
    const double qn = static_cast<double>(cf.q[n]);
    const double qn1 = static_cast<double>(cf.q[n + 1]);
    // q_n alpha - p_n, with a single rounding.
    const double d = (n % 2 == 0 ? 1.0 : -1.0) * std::fma(alpha, qn, -static_cast<double>(cf.p[n]));
    e.holds = d * (qn + qn1) >= 1.0 - 1e-9 && d * qn1 <= 1.0 + 1e-9;
    e.reliable = 64.0 * kEps * qn1 * qn1 < 1.0;
    out.push_back(e);
  }
  return out;
}

Classification classify(const ContinuedFraction& cf) {
  if (cf.depth() < 3) throw ConfigError("classification needs depth >= 3");
  Classification c;
  double sum = 0.0;
  for (std::size_t n = 0; n + 1 < cf.depth(); ++n) {
    const double r = cf.log_q[n + 1] / cf.q_value(n);
    c.ratios.push_back(r);
    sum += r;
    c.running_sum.push_back(sum);
  }
  const std::size_t m = c.ratios.size();
  const std::size_t tail_begin = m / 2;
  const double tail_min = *std::min_element(c.ratios.begin() + tail_begin, c.ratios.end());
  const double last = c.ratios.back();
  bool increasing = m >= 3;
  for (std::size_t n = tail_begin + 1; n < m; ++n) increasing = increasing && c.ratios[n] > c.ratios[n - 1];

  if (tail_min >= 0.1) c.labels.push_back("non-bruno-like");
  else c.labels.push_back("bruno-like");
  if (increasing && last >= 10.0) c.labels.push_back("super-liouville-like");
  c.caveat =
      "labels describe " + std::to_string(m) +
      " computed terms; convergence of the series and the limsup cannot be decided from finite data";
  return c;
}

}  // namespace calabi
