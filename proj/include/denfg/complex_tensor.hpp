#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace denfg {

using cdouble = std::complex<double>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense row-major tensor of complex doubles. A rank-0 tensor (empty shape)
/// holds a single scalar.
class ComplexTensor {
 public:
  ComplexTensor() : data_(1, cdouble{0.0, 0.0}) {}

  explicit ComplexTensor(std::vector<int> shape)
      : shape_(std::move(shape)), data_(checked_size(shape_), cdouble{0.0, 0.0}) {}

  ComplexTensor(std::vector<int> shape, std::vector<cdouble> values)
      : shape_(std::move(shape)), data_(std::move(values)) {
    if (data_.size() != checked_size(shape_))
      throw Error("ComplexTensor: value count does not match shape");
  }

  static ComplexTensor zeros(std::vector<int> shape) { return ComplexTensor(std::move(shape)); }

  static ComplexTensor scalar(cdouble v) {
    ComplexTensor t;
    t.data_[0] = v;
    return t;
  }

  /// n-by-n identity matrix.
  static ComplexTensor identity(int n) {
    ComplexTensor t({n, n});
    for (int i = 0; i < n; ++i) t.data_[static_cast<size_t>(i) * n + i] = 1.0;
    return t;
  }

  const std::vector<int>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  size_t size() const { return data_.size(); }

  std::span<const cdouble> values() const { return data_; }
  std::span<cdouble> values() { return data_; }

  cdouble& operator[](size_t flat) { return data_[flat]; }
  const cdouble& operator[](size_t flat) const { return data_[flat]; }

  cdouble& at(std::span<const int> idx) { return data_[flat_index(idx)]; }
  const cdouble& at(std::span<const int> idx) const { return data_[flat_index(idx)]; }

  cdouble& at(std::initializer_list<int> idx) { return at(std::span<const int>(idx.begin(), idx.size())); }
  const cdouble& at(std::initializer_list<int> idx) const {
    return at(std::span<const int>(idx.begin(), idx.size()));
  }

  size_t flat_index(std::span<const int> idx) const {
    if (idx.size() != shape_.size()) throw Error("ComplexTensor: index rank mismatch");
    size_t flat = 0;
    for (size_t a = 0; a < shape_.size(); ++a) {
      if (idx[a] < 0 || idx[a] >= shape_[a]) throw Error("ComplexTensor: index out of range");
      flat = flat * static_cast<size_t>(shape_[a]) + static_cast<size_t>(idx[a]);
    }
    return flat;
  }

  /// Strides in elements for each axis (row-major).
  std::vector<size_t> strides() const {
    std::vector<size_t> s(shape_.size(), 1);
    for (int a = rank() - 2; a >= 0; --a)
      s[a] = s[a + 1] * static_cast<size_t>(shape_[a + 1]);
    return s;
  }

  /// Same data, new axis structure. Element count must match.
  ComplexTensor reshaped(std::vector<int> new_shape) const {
    if (checked_size(new_shape) != data_.size())
      throw Error("ComplexTensor: reshape changes element count");
    return ComplexTensor(std::move(new_shape), data_);
  }

  bool same_shape(const ComplexTensor& o) const { return shape_ == o.shape_; }

  bool is_finite() const {
    for (const auto& v : data_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  /// Sum of entry magnitudes.
  double abs_sum() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::abs(v);
    return s;
  }

  ComplexTensor& operator*=(cdouble alpha) {
    for (auto& v : data_) v *= alpha;
    return *this;
  }

  ComplexTensor& operator+=(const ComplexTensor& o) {
    if (!same_shape(o)) throw Error("ComplexTensor: shape mismatch in +=");
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }

  friend ComplexTensor operator*(cdouble alpha, ComplexTensor t) {
    t *= alpha;
    return t;
  }

  friend ComplexTensor operator+(ComplexTensor a, const ComplexTensor& b) {
    a += b;
    return a;
  }

  friend ComplexTensor operator-(const ComplexTensor& a, const ComplexTensor& b) {
    if (!a.same_shape(b)) throw Error("ComplexTensor: shape mismatch in -");
    ComplexTensor r(a.shape_);
    for (size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = a.data_[i] - b.data_[i];
    return r;
  }

  /// Max entry-wise |a - b|.
  static double max_abs_diff(const ComplexTensor& a, const ComplexTensor& b) {
    if (!a.same_shape(b)) throw Error("ComplexTensor: shape mismatch in max_abs_diff");
    double m = 0.0;
    for (size_t i = 0; i < a.data_.size(); ++i) m = std::max(m, std::abs(a.data_[i] - b.data_[i]));
    return m;
  }

  /// Sum of entry-wise |a - b| (L1 distance on the flat data).
  static double l1_diff(const ComplexTensor& a, const ComplexTensor& b) {
    if (!a.same_shape(b)) throw Error("ComplexTensor: shape mismatch in l1_diff");
    double s = 0.0;
    for (size_t i = 0; i < a.data_.size(); ++i) s += std::abs(a.data_[i] - b.data_[i]);
    return s;
  }

  static size_t checked_size(const std::vector<int>& shape) {
    size_t n = 1;
    for (int d : shape) {
      if (d < 1) throw Error("ComplexTensor: axis size must be >= 1");
      n *= static_cast<size_t>(d);
    }
    return n;
  }

 private:
  std::vector<int> shape_;
  std::vector<cdouble> data_;
};

/// Pairwise contraction: sums a*b over the given (a-axis, b-axis) pairs.
/// Result axes are the remaining a-axes (in order) followed by the remaining
/// b-axes. Contracting all axes of both operands yields a rank-0 scalar.
inline ComplexTensor contract(const ComplexTensor& a, const ComplexTensor& b,
                              const std::vector<std::pair<int, int>>& paired_axes) {
  const auto& ash = a.shape();
  const auto& bsh = b.shape();
  std::vector<bool> a_used(ash.size(), false), b_used(bsh.size(), false);
  for (auto [ia, ib] : paired_axes) {
    if (ia < 0 || ia >= a.rank() || ib < 0 || ib >= b.rank())
      throw Error("contract: axis index out of range");
    if (a_used[ia] || b_used[ib]) throw Error("contract: axis paired twice");
    if (ash[ia] != bsh[ib])
      throw Error("contract: axis size mismatch (" + std::to_string(ash[ia]) + " vs " +
                  std::to_string(bsh[ib]) + ")");
    a_used[ia] = true;
    b_used[ib] = true;
  }

  const auto astr = a.strides();
  const auto bstr = b.strides();

  std::vector<int> out_shape;
  std::vector<int> a_free, b_free;
  for (int i = 0; i < a.rank(); ++i)
    if (!a_used[i]) {
      a_free.push_back(i);
      out_shape.push_back(ash[i]);
    }
  for (int i = 0; i < b.rank(); ++i)
    if (!b_used[i]) {
      b_free.push_back(i);
      out_shape.push_back(bsh[i]);
    }

  // Offset tables: every combination of free indices / paired indices,
  // enumerated row-major.
  auto offsets = [](const std::vector<int>& axes, const std::vector<int>& shape,
                    const std::vector<size_t>& str) {
    size_t count = 1;
    for (int ax : axes) count *= static_cast<size_t>(shape[ax]);
    std::vector<size_t> off(count, 0);
    size_t rep = 1;
    for (int k = static_cast<int>(axes.size()) - 1; k >= 0; --k) {
      const int ax = axes[k];
      const size_t dim = static_cast<size_t>(shape[ax]);
      for (size_t i = 0; i < count; ++i) off[i] += ((i / rep) % dim) * str[ax];
      rep *= dim;
    }
    return off;
  };

  std::vector<int> a_pair, b_pair;
  for (auto [ia, ib] : paired_axes) {
    a_pair.push_back(ia);
    b_pair.push_back(ib);
  }

  const auto a_free_off = offsets(a_free, ash, astr);
  const auto b_free_off = offsets(b_free, bsh, bstr);
  const auto a_pair_off = offsets(a_pair, ash, astr);
  std::vector<size_t> b_pair_off(a_pair_off.size(), 0);
  {
    // Paired offsets for b must walk the pair axes in the SAME order as a's.
    size_t rep = 1;
    for (int k = static_cast<int>(a_pair.size()) - 1; k >= 0; --k) {
      const size_t dim = static_cast<size_t>(ash[a_pair[k]]);
      for (size_t i = 0; i < b_pair_off.size(); ++i)
        b_pair_off[i] += ((i / rep) % dim) * bstr[b_pair[k]];
      rep *= dim;
    }
  }

  ComplexTensor out(out_shape);
  const cdouble* ad = a.values().data();
  const cdouble* bd = b.values().data();
  cdouble* od = out.values().data();
  const size_t nb = b_free_off.size();
  for (size_t i = 0; i < a_free_off.size(); ++i) {
    for (size_t j = 0; j < nb; ++j) {
      cdouble acc{0.0, 0.0};
      for (size_t k = 0; k < a_pair_off.size(); ++k)
        acc += ad[a_free_off[i] + a_pair_off[k]] * bd[b_free_off[j] + b_pair_off[k]];
      od[i * nb + j] = acc;
    }
  }
  return out;
}

}  // namespace denfg
