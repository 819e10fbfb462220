// Truncated Laurent series over F_p in the uniformizer t, with explicit absolute precision.
#pragma once

#include <climits>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace modrep::local {

inline constexpr int kExact = INT_MAX;

class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Relative precision used for unit inversions in the current thread.
int precision_budget();
class PrecisionScope {
 public:
  explicit PrecisionScope(int budget);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  int saved_;
};

// Runs f with increasing budgets, starting from the current one, until it stops raising
// PrecisionError.
template <class F>
auto with_precision_retry(F&& f) -> decltype(f()) {
  const int base = precision_budget();
  for (int factor : {1, 3, 10, 40}) {
    PrecisionScope scope(base * factor);
    try {
      return f();
    } catch (const PrecisionError&) {
      if (factor == 40) throw;
    }
  }
  throw PrecisionError("unreachable");
}

// Value sum_i c[i] t^{lo + i}, known modulo t^{prec}.
class Laurent {
 public:
  Laurent() = default;
  explicit Laurent(int p) : p_(p) {}
  static Laurent constant(int p, long long c);
  static Laurent monomial(int p, long long c, int exponent);
  static Laurent from_coeffs(int p, int lo, const std::vector<int>& coeffs, int prec = kExact);

  int p() const { return p_; }
  int prec() const { return prec_; }
  bool exact() const { return prec_ == kExact; }
  bool is_zero() const { return c_.empty(); }
  // Exponent of the leading term; for a value that is zero to known precision, the precision.
  int valuation() const { return c_.empty() ? prec_ : lo_; }
  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(c_.size()); }  // one past the last stored exponent
  int coeff(int exponent) const;
  bool is_monomial() const;

  Laurent operator+(const Laurent& o) const;
  Laurent operator-(const Laurent& o) const;
  Laurent operator-() const;
  Laurent operator*(const Laurent& o) const;
  Laurent scaled(long long c) const;
  Laurent shifted(int k) const;  // times t^k
  // Forget everything from t^{abs_prec} on.
  Laurent truncated(int abs_prec) const;
  // Exact polynomial of the terms with exponent < a; requires prec >= a.
  Laurent below(int a) const;
  // Terms with exponent >= a (same precision).
  Laurent from(int a) const;
  // Drops precision bookkeeping: the stored terms become an exact Laurent polynomial.
  Laurent as_exact() const;

  bool operator==(const Laurent& o) const;
  std::string to_string() const;
  void encode(std::string& out) const;

 private:
  void normalize();
  int p_ = 2;
  int lo_ = 0;
  int prec_ = kExact;
  std::vector<uint8_t> c_;
};

// Inverse of a unit u (valuation 0) modulo t^{target}; throws PrecisionError when u is
// not known to that precision.
Laurent invert_unit(const Laurent& u, int target);
// Inverse of a nonzero x to relative precision min(budget, known relative precision).
Laurent inverse(const Laurent& x);

}  // namespace modrep::local
