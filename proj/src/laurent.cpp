#include "modrep/laurent.hpp"

#include <algorithm>
#include <sstream>

#include "modrep/ff.hpp"

namespace modrep::local {

namespace {
thread_local int g_budget = 16;

int clamp_add(long long a, long long b) {
  long long s = a + b;
  if (a == kExact || b == kExact || s >= kExact) return kExact;
  return static_cast<int>(s);
}
}  // namespace

int precision_budget() { return g_budget; }
PrecisionScope::PrecisionScope(int budget) : saved_(g_budget) { g_budget = budget; }
PrecisionScope::~PrecisionScope() { g_budget = saved_; }

void Laurent::normalize() {
  if (prec_ != kExact && hi() > prec_) c_.resize(std::max(0, prec_ - lo_));
  size_t lead = 0;
  while (lead < c_.size() && c_[lead] == 0) ++lead;
  if (lead == c_.size()) {
    c_.clear();
    lo_ = 0;
    return;
  }
  if (lead) {
    c_.erase(c_.begin(), c_.begin() + static_cast<long>(lead));
    lo_ += static_cast<int>(lead);
  }
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Laurent Laurent::constant(int p, long long c) { return monomial(p, c, 0); }

Laurent Laurent::monomial(int p, long long c, int exponent) {
  Laurent x(p);
  int v = ff::reduce(c, p);
  if (v) {
    x.lo_ = exponent;
    x.c_ = {static_cast<uint8_t>(v)};
  }
  return x;
}

Laurent Laurent::from_coeffs(int p, int lo, const std::vector<int>& coeffs, int prec) {
  Laurent x(p);
  x.lo_ = lo;
  x.prec_ = prec;
  for (int c : coeffs) x.c_.push_back(static_cast<uint8_t>(ff::reduce(c, p)));
  x.normalize();
  return x;
}

int Laurent::coeff(int exponent) const {
  if (exponent >= prec_) throw PrecisionError("coefficient beyond known precision");
  if (exponent < lo_ || exponent >= hi()) return 0;
  return c_[exponent - lo_];
}

bool Laurent::is_monomial() const { return exact() && c_.size() == 1; }

Laurent Laurent::operator+(const Laurent& o) const {
  if (o.c_.empty() && o.prec_ == kExact) return *this;
  if (c_.empty() && prec_ == kExact) return o;
  Laurent r(p_);
  r.prec_ = std::min(prec_, o.prec_);
  int lo = std::min(c_.empty() ? o.lo_ : lo_, o.c_.empty() ? lo_ : o.lo_);
  int top = std::max(hi(), o.hi());
  if (r.prec_ != kExact) top = std::min(top, r.prec_);
  if (top <= lo) {
    r.normalize();
    return r;
  }
  r.lo_ = lo;
  r.c_.assign(top - lo, 0);
  for (size_t i = 0; i < c_.size(); ++i) {
    int e = lo_ + static_cast<int>(i);
    if (e < top) r.c_[e - lo] = c_[i];
  }
  for (size_t i = 0; i < o.c_.size(); ++i) {
    int e = o.lo_ + static_cast<int>(i);
    if (e < top) r.c_[e - lo] = static_cast<uint8_t>((r.c_[e - lo] + o.c_[i]) % p_);
  }
  r.normalize();
  return r;
}

Laurent Laurent::operator-() const {
  Laurent r = *this;
  for (auto& c : r.c_) c = static_cast<uint8_t>((p_ - c) % p_);
  return r;
}

Laurent Laurent::operator-(const Laurent& o) const { return *this + (-o); }

Laurent Laurent::operator*(const Laurent& o) const {
  if ((c_.empty() && exact()) || (o.c_.empty() && o.exact())) return Laurent(p_);
  Laurent r(p_);
  r.prec_ = std::min(clamp_add(prec_, o.valuation()), clamp_add(o.prec_, valuation()));
  if (c_.empty() || o.c_.empty()) {
    r.normalize();
    return r;
  }
  r.lo_ = lo_ + o.lo_;
  size_t len = c_.size() + o.c_.size() - 1;
  if (r.prec_ != kExact) len = std::min<size_t>(len, static_cast<size_t>(std::max(0, r.prec_ - r.lo_)));
  std::vector<uint32_t> acc(len, 0);
  for (size_t i = 0; i < c_.size() && i < len; ++i) {
    if (!c_[i]) continue;
    for (size_t j = 0; j < o.c_.size() && i + j < len; ++j) acc[i + j] += c_[i] * o.c_[j];
  }
  r.c_.resize(len);
  for (size_t k = 0; k < len; ++k) r.c_[k] = static_cast<uint8_t>(acc[k] % p_);
  r.normalize();
  return r;
}

Laurent Laurent::scaled(long long c) const {
  int v = ff::reduce(c, p_);
  Laurent r = *this;
  for (auto& x : r.c_) x = static_cast<uint8_t>(x * v % p_);
  r.normalize();
  return r;
}

Laurent Laurent::shifted(int k) const {
  Laurent r = *this;
  if (!r.c_.empty()) r.lo_ += k;
  if (r.prec_ != kExact) r.prec_ += k;
  return r;
}

Laurent Laurent::truncated(int abs_prec) const {
  Laurent r = *this;
  r.prec_ = std::min(r.prec_, abs_prec);
  r.normalize();
  return r;
}

Laurent Laurent::below(int a) const {
  if (prec_ < a) throw PrecisionError("value not known modulo the requested power of t");
  Laurent r = *this;
  r.prec_ = kExact;
  if (!r.c_.empty() && r.hi() > a) r.c_.resize(std::max(0, a - r.lo_));
  r.normalize();
  return r;
}

Laurent Laurent::from(int a) const {
  Laurent r = *this;
  if (r.c_.empty() || r.hi() <= a) {
    r.c_.clear();
    r.normalize();
    return r;
  }
  if (r.lo_ < a) {
    r.c_.erase(r.c_.begin(), r.c_.begin() + (a - r.lo_));
    r.lo_ = a;
  }
  r.normalize();
  return r;
}

Laurent Laurent::as_exact() const {
  Laurent r = *this;
  r.prec_ = kExact;
  return r;
}

bool Laurent::operator==(const Laurent& o) const {
  return p_ == o.p_ && prec_ == o.prec_ && c_ == o.c_ && (c_.empty() || lo_ == o.lo_);
}

std::string Laurent::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (!c_[i]) continue;
    int e = lo_ + static_cast<int>(i);
    if (!first) os << "+";
    first = false;
    if (e == 0) {
      os << int(c_[i]);
    } else {
      if (c_[i] != 1) os << int(c_[i]);
      os << "t";
      if (e != 1) os << "^" << e;
    }
  }
  if (first && exact()) os << "0";
  if (!exact()) os << (first ? "" : "+") << "O(t^" << prec_ << ")";
  return os.str();
}

void Laurent::encode(std::string& out) const {
  auto put = [&](int v) { out.append(reinterpret_cast<const char*>(&v), sizeof v); };
  put(c_.empty() ? 0 : lo_);
  put(static_cast<int>(c_.size()));
  put(prec_);
  out.append(c_.begin(), c_.end());
}

Laurent invert_unit(const Laurent& u, int target) {
  if (u.is_zero() || u.valuation() != 0) throw PrecisionError("inversion of a non-unit");
  if (target <= 0) return Laurent::from_coeffs(u.p(), 0, {}, target);
  if (u.prec() < target) throw PrecisionError("unit not known to the requested precision");
  const int p = u.p();
  int u0inv = ff::inv_mod(u.coeff(0), p);
  std::vector<int> inv(target, 0);
  inv[0] = u0inv;
  for (int k = 1; k < target; ++k) {
    long long s = 0;
    for (int j = 1; j <= k && j < u.hi(); ++j) s += static_cast<long long>(u.coeff(j)) * inv[k - j];
    inv[k] = ff::reduce(-s * u0inv, p);
  }
  if (u.is_monomial()) return Laurent::constant(p, u0inv);
  return Laurent::from_coeffs(p, 0, inv, target);
}

Laurent inverse(const Laurent& x) {
  if (x.is_zero()) throw PrecisionError("inversion of zero");
  int v = x.valuation();
  Laurent unit = x.shifted(-v);
  if (unit.is_monomial()) return Laurent::monomial(x.p(), ff::inv_mod(unit.coeff(0), x.p()), -v);
  int rel = std::min(precision_budget(), unit.prec());
  return invert_unit(unit.truncated(rel), rel).shifted(-v);
}

}  // namespace modrep::local
