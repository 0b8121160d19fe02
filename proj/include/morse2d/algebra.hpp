#ifndef MORSE2D_ALGEBRA_HPP
#define MORSE2D_ALGEBRA_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"

namespace morse2d {

// Dense exact-integer matrix with optional row/column labels (cell ids).
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return x == 0; });
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  // row[dst] += k * row[src]
  void add_row(std::size_t dst, std::size_t src, const Integer& k) {
    if (k == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += k * (*this)(src, j);
  }
  // col[dst] += k * col[src]
  void add_col(std::size_t dst, std::size_t src, const Integer& k) {
    if (k == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += k * (*this)(i, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw Error("matrix dimension mismatch in product");
    IntMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Integer& x = a(i, k);
        if (x == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += x * b(k, j);
      }
    return out;
  }

  bool operator==(const IntMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }

  std::vector<CellId> row_ids;
  std::vector<CellId> col_ids;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Integer> data_;
};

struct SNFResult {
  std::vector<Integer> diagonal;  // positive, d1 | d2 | ... | dk
  std::size_t rank = 0;
  IntMatrix left;   // U, rows x rows, unimodular
  IntMatrix right;  // V, cols x cols, unimodular
  IntMatrix normal; // S = U * A * V
};

// Smith Normal Form by repeated smallest-magnitude pivoting. The unimodular
// transforms are tracked alongside so that U * A * V = S holds exactly.
inline SNFResult smith_normal_form(const IntMatrix& a, bool with_transforms = true) {
  SNFResult r;
  IntMatrix s = a;
  const std::size_t m = a.rows(), n = a.cols();
  IntMatrix u = with_transforms ? IntMatrix::identity(m) : IntMatrix();
  IntMatrix v = with_transforms ? IntMatrix::identity(n) : IntMatrix();

  auto row_swap = [&](std::size_t i, std::size_t j) {
    s.swap_rows(i, j);
    if (with_transforms) u.swap_rows(i, j);
  };
  auto col_swap = [&](std::size_t i, std::size_t j) {
    s.swap_cols(i, j);
    if (with_transforms) v.swap_cols(i, j);
  };
  auto row_add = [&](std::size_t dst, std::size_t src, const Integer& k) {
    s.add_row(dst, src, k);
    if (with_transforms) u.add_row(dst, src, k);
  };
  auto col_add = [&](std::size_t dst, std::size_t src, const Integer& k) {
    s.add_col(dst, src, k);
    if (with_transforms) v.add_col(dst, src, k);
  };

  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    for (;;) {
      // smallest nonzero magnitude in the trailing block
      std::optional<std::pair<std::size_t, std::size_t>> best;
      Integer best_abs;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          const Integer& x = s(i, j);
          if (x == 0) continue;
          Integer ax = abs(x);
          if (!best || ax < best_abs) {
            best = {i, j};
            best_abs = std::move(ax);
          }
        }
      if (!best) goto done;
      row_swap(t, best->first);
      col_swap(t, best->second);

      bool dirty = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (s(i, t) == 0) continue;
        Integer q = s(i, t) / s(t, t);
        row_add(i, t, -q);
        if (s(i, t) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (s(t, j) == 0) continue;
        Integer q = s(t, j) / s(t, t);
        col_add(j, t, -q);
        if (s(t, j) != 0) dirty = true;
      }
      if (dirty) continue;

      // pivot must divide the rest of the block
      std::optional<std::size_t> offender;
      for (std::size_t i = t + 1; i < m && !offender; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (s(i, j) % s(t, t) != 0) {
            offender = i;
            break;
          }
      if (offender) {
        row_add(t, *offender, 1);
        continue;
      }
      break;
    }
    if (s(t, t) < 0) {
      s.negate_row(t);
      if (with_transforms) u.negate_row(t);
    }
    r.diagonal.push_back(s(t, t));
  }
done:
  r.rank = r.diagonal.size();
  r.normal = std::move(s);
  if (with_transforms) {
    r.left = std::move(u);
    r.right = std::move(v);
  }
  return r;
}

inline std::size_t integer_rank(const IntMatrix& a) { return smith_normal_form(a, false).rank; }

// Rank over Z_m read off the invariant factors: the number of d_i that do not
// vanish mod m. Exact for prime m.
inline std::size_t mod_m_rank(const IntMatrix& a, const Integer& m) {
  if (m < 2) throw Error("modulus must be at least 2");
  const auto snf = smith_normal_form(a, false);
  return static_cast<std::size_t>(
      std::count_if(snf.diagonal.begin(), snf.diagonal.end(), [&](const Integer& d) { return d % m != 0; }));
}

// ---------------------------------------------------------------------------

// Finitely generated abelian group Z^r + Z_t1 + ... + Z_tk with t1 | t2 | ...
// and every t_i > 1.
struct AbelianGroup {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;

  static AbelianGroup integers() { return {1, {}}; }
  static AbelianGroup cyclic(const Integer& m) { return canonical(0, {m}); }

  // Canonical form from arbitrary cyclic orders: zeros count as free factors,
  // units vanish, the rest becomes an invariant-factor chain.
  static AbelianGroup canonical(std::size_t free_rank, const std::vector<Integer>& orders) {
    AbelianGroup g;
    g.free_rank = free_rank;
    std::vector<Integer> finite;
    for (const auto& o : orders) {
      if (o == 0)
        ++g.free_rank;
      else if (abs(o) != 1)
        finite.push_back(abs(o));
    }
    if (!finite.empty()) {
      IntMatrix d(finite.size(), finite.size());
      for (std::size_t i = 0; i < finite.size(); ++i) d(i, i) = finite[i];
      for (auto& x : smith_normal_form(d, false).diagonal)
        if (x != 1) g.torsion.push_back(x);
    }
    return g;
  }

  bool is_canonical() const {
    for (std::size_t i = 0; i < torsion.size(); ++i) {
      if (torsion[i] <= 1) return false;
      if (i + 1 < torsion.size() && torsion[i + 1] % torsion[i] != 0) return false;
    }
    return true;
  }

  bool is_trivial() const { return free_rank == 0 && torsion.empty(); }

  bool operator==(const AbelianGroup&) const = default;

  // "Z^2 + Z_2", "Z", "0"
  std::string to_string() const {
    if (is_trivial()) return "0";
    std::string out;
    auto append = [&](const std::string& s) { out += out.empty() ? s : " + " + s; };
    if (free_rank == 1) append("Z");
    if (free_rank > 1) append("Z^" + std::to_string(free_rank));
    for (const auto& t : torsion) append("Z_" + t.str());
    return out;
  }

  // Accepts "0", "Z", "Z^r", "Z_m", "Z_m^k" joined by '+'; whitespace ignored.
  static AbelianGroup parse(const std::string& spec) {
    std::string s;
    for (char ch : spec)
      if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw Error("empty group spec");
    if (s == "0") return {};
    std::size_t free = 0;
    std::vector<Integer> orders;
    std::stringstream parts(s);
    std::string term;
    auto read_uint = [&](const std::string& text) {
      if (text.empty() || !std::all_of(text.begin(), text.end(), [](char ch) { return std::isdigit(ch); }))
        throw Error("bad number '" + text + "' in group spec '" + spec + "'");
      return Integer(text);
    };
    while (std::getline(parts, term, '+')) {
      if (term.empty() || term[0] != 'Z') throw Error("bad term '" + term + "' in group spec '" + spec + "'");
      std::string rest = term.substr(1);
      Integer order = 0;
      if (!rest.empty() && rest[0] == '_') {
        auto caret = rest.find('^');
        order = read_uint(rest.substr(1, caret == std::string::npos ? std::string::npos : caret - 1));
        if (order < 2) throw Error("cyclic order must be at least 2 in '" + term + "'");
        rest = caret == std::string::npos ? "" : rest.substr(caret);
      }
      std::size_t power = 1;
      if (!rest.empty()) {
        if (rest[0] != '^') throw Error("bad term '" + term + "'");
        power = static_cast<std::size_t>(read_uint(rest.substr(1)));
      }
      for (std::size_t k = 0; k < power; ++k) {
        if (order == 0)
          ++free;
        else
          orders.push_back(order);
      }
    }
    return canonical(free, orders);
  }
};

struct HomologyResult {
  std::array<AbelianGroup, 3> groups;
  std::array<std::size_t, 3> betti{0, 0, 0};
  AbelianGroup coefficients = AbelianGroup::integers();

  bool operator==(const HomologyResult&) const = default;

  std::int64_t euler() const {
    return static_cast<std::int64_t>(betti[0]) - static_cast<std::int64_t>(betti[1]) +
           static_cast<std::int64_t>(betti[2]);
  }
};

// Homology over Z of 0 <- C0 <-d1- C1 <-d2- C2 <- 0. d1 is c0 x c1, d2 is
// c1 x c2; empty dimensions are legal.
inline HomologyResult homology_from_chain(const IntMatrix& d1, const IntMatrix& d2) {
  if (d1.cols() != d2.rows()) throw Error("chain maps have incompatible shapes");
  if (d1.cols() > 0 && !(d1 * d2).is_zero()) throw Error("boundary maps do not compose to zero");
  const auto s1 = smith_normal_form(d1, false);
  const auto s2 = smith_normal_form(d2, false);
  const std::array<std::size_t, 3> dims{d1.rows(), d1.cols(), d2.cols()};

  HomologyResult h;
  h.groups[0] = AbelianGroup::canonical(dims[0] - s1.rank, s1.diagonal);
  h.groups[1] = AbelianGroup::canonical(dims[1] - s1.rank - s2.rank, s2.diagonal);
  h.groups[2] = AbelianGroup::canonical(dims[2] - s2.rank, {});
  for (std::size_t q = 0; q < 3; ++q) h.betti[q] = h.groups[q].free_rank;
  return h;
}

namespace detail {

inline Integer gcd(Integer a, Integer b) {
  a = abs(a);
  b = abs(b);
  while (b != 0) {
    Integer t = a % b;
    a = std::move(b);
    b = std::move(t);
  }
  return a;
}

// Cyclic factors of G as a list of orders, 0 standing for Z.
inline std::vector<Integer> factors(const AbelianGroup& g) {
  std::vector<Integer> out(g.free_rank, Integer(0));
  out.insert(out.end(), g.torsion.begin(), g.torsion.end());
  return out;
}

// Z_a (x) Z_b with 0 meaning Z.
inline Integer tensor_order(const Integer& a, const Integer& b) {
  if (a == 0) return b;
  if (b == 0) return a;
  return gcd(a, b);
}

}  // namespace detail

// Universal coefficients: H_q(A) = (H_q(Z) (x) A) + Tor(H_{q-1}(Z), A).
inline HomologyResult homology_with_coefficients(const HomologyResult& hz, const AbelianGroup& a) {
  if (!a.is_canonical()) throw Error("coefficient group is not in canonical form");
  if (!(hz.coefficients == AbelianGroup::integers())) throw Error("expected integral homology as input");
  HomologyResult out;
  out.coefficients = a;
  const auto af = detail::factors(a);
  for (std::size_t q = 0; q < 3; ++q) {
    std::vector<Integer> orders;
    for (const auto& h : detail::factors(hz.groups[q]))
      for (const auto& x : af) orders.push_back(detail::tensor_order(h, x));
    if (q > 0)
      for (const auto& h : hz.groups[q - 1].torsion)
        for (const auto& x : a.torsion) orders.push_back(detail::gcd(h, x));
    out.groups[q] = AbelianGroup::canonical(0, orders);
  }
  // Betti number over A: rank of the free part when A has one, otherwise the
  // number of summands of full exponent (the dimension when A is a prime field).
  for (std::size_t q = 0; q < 3; ++q) {
    const auto& g = out.groups[q];
    if (a.free_rank > 0) {
      out.betti[q] = g.free_rank / a.free_rank;
    } else if (!a.torsion.empty()) {
      const Integer& exponent = a.torsion.back();
      out.betti[q] = static_cast<std::size_t>(std::count(g.torsion.begin(), g.torsion.end(), exponent));
    }
  }
  return out;
}

}  // namespace morse2d

#endif  // MORSE2D_ALGEBRA_HPP
