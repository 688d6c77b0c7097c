#include "cran/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cran::lattice {

namespace {

void require_square(const Mat& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw std::invalid_argument(std::string(who) + ": matrix must be square and nonempty");
}

void require_symmetric(const Mat& m, const char* who) {
  require_square(m, who);
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (((m - m.transpose()).cwiseAbs().maxCoeff()) > 1e-12 * scale)
    throw std::invalid_argument(std::string(who) + ": matrix is not symmetric");
}

using int128 = __int128;

long long narrow(int128 v, const char* who) {
  if (v > std::numeric_limits<long long>::max() ||
      v < std::numeric_limits<long long>::min())
    throw std::overflow_error(std::string(who) + ": integer overflow");
  return static_cast<long long>(v);
}

// Fraction-free elimination; returns (rank, det). det is meaningful only for
// square full-rank input.
std::pair<int, int128> bareiss(IMat a) {
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(a.cols());
  std::vector<std::vector<int128>> w(n, std::vector<int128>(m));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) w[i][j] = a(i, j);

  int128 prev = 1;
  int sign = 1;
  int rank = 0;
  for (int col = 0; col < m && rank < n; ++col) {
    int piv = -1;
    for (int r = rank; r < n; ++r)
      if (w[r][col] != 0) { piv = r; break; }
    if (piv < 0) continue;
    if (piv != rank) { std::swap(w[piv], w[rank]); sign = -sign; }
    for (int r = rank + 1; r < n; ++r) {
      for (int c = col + 1; c < m; ++c)
        w[r][c] = (w[rank][col] * w[r][c] - w[r][col] * w[rank][c]) / prev;
      w[r][col] = 0;
    }
    prev = w[rank][col];
    ++rank;
  }
  int128 det = 0;
  if (n == m && rank == n) det = sign * prev;
  return {rank, det};
}

// Gram-Schmidt coefficients mu and squared norms b from a Gram matrix.
void gso_from_gram(const Mat& gc, Mat& mu, Vec& b) {
  const int n = static_cast<int>(gc.rows());
  mu.setZero(n, n);
  b.setZero(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      double s = gc(i, j);
      for (int k = 0; k < j; ++k) s -= mu(i, k) * mu(j, k) * b(k);
      mu(i, j) = s / b(j);
    }
    double s = gc(i, i);
    for (int k = 0; k < i; ++k) s -= mu(i, k) * mu(i, k) * b(k);
    b(i) = s;
    if (!(b(i) > 0.0))
      throw std::domain_error("lll_reduce: Gram matrix is not positive definite");
  }
}

double form_value(const Mat& g, const IVec& a) {
  const int n = static_cast<int>(g.rows());
  Vec af(n);
  for (int i = 0; i < n; ++i) af(i) = static_cast<double>(a(i));
  return af.dot(g * af);
}

// Sign normalization: first nonzero coordinate positive (a and -a describe
// the same lattice direction).
IVec normalize_sign(IVec a) {
  for (int i = 0; i < a.size(); ++i) {
    if (a(i) != 0) {
      if (a(i) < 0) a = -a;
      break;
    }
  }
  return a;
}

bool lex_less(const IVec& a, const IVec& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a(i) != b(i)) return a(i) < b(i);
  }
  return false;
}

SelectedMatrix sort_rows_by_form(IMat rows, const Mat& g) {
  const int n = static_cast<int>(rows.rows());
  std::vector<int> idx(n);
  std::vector<IVec> vecs(n);
  std::vector<double> forms(n);
  for (int i = 0; i < n; ++i) {
    idx[i] = i;
    vecs[i] = normalize_sign(rows.row(i).transpose());
    forms[i] = form_value(g, vecs[i]);
  }
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (forms[a] != forms[b]) return forms[a] < forms[b];
    return lex_less(vecs[a], vecs[b]);
  });
  SelectedMatrix out;
  out.rows.resize(n, rows.cols());
  out.forms.resize(n);
  for (int i = 0; i < n; ++i) {
    out.rows.row(i) = vecs[idx[i]].transpose();
    out.forms(i) = forms[idx[i]];
  }
  return out;
}

bool extend_pi(const IMat& a, std::vector<int>& pi, std::vector<bool>& used, int m) {
  const int n = static_cast<int>(a.rows());
  if (m == n) return true;
  for (int c = 0; c < n; ++c) {
    if (used[c]) continue;
    IMat lead(m + 1, m + 1);
    for (int r = 0; r <= m; ++r) {
      for (int k = 0; k < m; ++k) lead(r, k) = a(r, pi[k]);
      lead(r, m) = a(r, c);
    }
    if (bareiss(lead).second != 0) {
      pi.push_back(c);
      used[c] = true;
      if (extend_pi(a, pi, used, m + 1)) return true;
      pi.pop_back();
      used[c] = false;
    }
  }
  return false;
}

}  // namespace

Mat gram_factor(const Mat& m) {
  require_symmetric(m, "gram_factor");
  const int n = static_cast<int>(m.rows());
  Mat l = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double s = m(j, j);
    for (int k = 0; k < j; ++k) s -= l(j, k) * l(j, k);
    if (!(s > 0.0))
      throw std::domain_error("gram_factor: matrix not positive definite, pivot " +
                              std::to_string(j));
    l(j, j) = std::sqrt(s);
    for (int i = j + 1; i < n; ++i) {
      double t = m(i, j);
      for (int k = 0; k < j; ++k) t -= l(i, k) * l(j, k);
      l(i, j) = t / l(j, j);
    }
  }
  return l.transpose();  // upper triangular, F^T F = M
}

long long det_exact(const IMat& a) {
  require_square(Mat(a.cast<double>()), "det_exact");
  return narrow(bareiss(a).second, "det_exact");
}

int rank_exact(const IMat& a) { return bareiss(a).first; }

bool is_unimodular(const IMat& u) {
  const int128 d = bareiss(u).second;
  return d == 1 || d == -1;
}

LllResult lll_reduce(const Mat& g, double delta) {
  require_symmetric(g, "lll_reduce");
  if (!(delta > 0.25 && delta < 1.0))
    throw std::invalid_argument("lll_reduce: delta must lie in (0.25, 1)");
  const int n = static_cast<int>(g.rows());
  IMat u = IMat::Identity(n, n);
  Mat mu;
  Vec b;

  auto current_gram = [&]() {
    Mat ud = u.cast<double>();
    return Mat(ud.transpose() * g * ud);
  };

  gso_from_gram(current_gram(), mu, b);  // also validates definiteness

  const long max_steps = 100000L * n * n;
  long steps = 0;
  int k = 1;
  while (k < n) {
    if (++steps > max_steps)
      throw std::runtime_error("lll_reduce: iteration budget exhausted");
    gso_from_gram(current_gram(), mu, b);
    // size reduction of column k
    for (int j = k - 1; j >= 0; --j) {
      const long long q = std::llround(mu(k, j));
      if (q != 0) {
        u.col(k) -= q * u.col(j);
        for (int i = 0; i < j; ++i) mu(k, i) -= static_cast<double>(q) * mu(j, i);
        mu(k, j) -= static_cast<double>(q);
      }
    }
    if (b(k) >= (delta - mu(k, k - 1) * mu(k, k - 1)) * b(k - 1)) {
      ++k;
    } else {
      u.col(k).swap(u.col(k - 1));
      k = std::max(k - 1, 1);
    }
  }

  LllResult out;
  out.transform = u;
  out.reduced = current_gram();
  if (!is_unimodular(u))
    throw std::runtime_error("lll_reduce: transform lost unimodularity");
  return out;
}

IMat shortest_independent_vectors(const Mat& g, int coord_bound) {
  require_symmetric(g, "shortest_independent_vectors");
  const int n = static_cast<int>(g.rows());
  if (n > 5)
    throw std::invalid_argument(
        "shortest_independent_vectors: oracle limited to dimension 5");
  if (coord_bound < 1)
    throw std::invalid_argument("shortest_independent_vectors: bound must be >= 1");

  struct Cand { IVec a; double form; };
  std::vector<Cand> cands;
  const long long span = 2 * coord_bound + 1;
  long long total = 1;
  for (int i = 0; i < n; ++i) total *= span;
  cands.reserve(static_cast<size_t>(total / 2));
  for (long long code = 0; code < total; ++code) {
    IVec a(n);
    long long c = code;
    for (int i = 0; i < n; ++i) {
      a(i) = c % span - coord_bound;
      c /= span;
    }
    if (a.isZero()) continue;
    IVec norm = normalize_sign(a);
    if ((norm.array() != a.array()).any()) continue;  // one of {a, -a} only
    cands.push_back({a, form_value(g, a)});
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
    if (x.form != y.form) return x.form < y.form;
    return lex_less(x.a, y.a);
  });

  // Greedy by ascending form with exact independence checks yields the
  // successive minima, hence minimizes the maximum form over full-rank sets.
  IMat chosen(n, n);
  int picked = 0;
  for (const Cand& c : cands) {
    chosen.row(picked) = c.a.transpose();
    if (rank_exact(chosen.topRows(picked + 1)) == picked + 1) {
      ++picked;
      if (picked == n) break;
    }
  }
  if (picked < n)
    throw std::runtime_error("shortest_independent_vectors: bound too small for full rank");
  return chosen;
}

std::vector<int> full_rank_permutation(const IMat& a) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n)
    throw std::invalid_argument("full_rank_permutation: matrix must be square");
  if (rank_exact(a) != n)
    throw std::invalid_argument("full_rank_permutation: matrix must be full rank");
  std::vector<int> pi;
  std::vector<bool> used(n, false);
  if (!extend_pi(a, pi, used, 0))
    throw std::runtime_error("full_rank_permutation: no permutation found");
  return pi;
}

SelectedMatrix select_integer_matrix(const Mat& g, SelectMode mode, double delta,
                                     int coord_bound) {
  if (mode == SelectMode::LllThenEnumerate) {
    if (g.rows() > 5)
      throw std::invalid_argument(
          "select_integer_matrix: enumeration mode limited to dimension 5");
    return sort_rows_by_form(shortest_independent_vectors(g, coord_bound), g);
  }
  const LllResult r = lll_reduce(g, delta);
  // Columns of U are the candidate coefficient vectors.
  return sort_rows_by_form(r.transform.transpose(), g);
}

}  // namespace cran::lattice
