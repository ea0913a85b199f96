#include "troproot/exact.hpp"

#include <algorithm>
#include <thread>
#include <utility>

namespace troproot {

template <class T>
Matrix<T>::Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : init) {
        if (r.size() != cols_) throw PreconditionError("ragged matrix literal");
        for (const auto& x : r) data_.push_back(x);
    }
}

template <class T>
Matrix<T> Matrix<T>::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

template <class T>
Matrix<T> Matrix<T>::from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols) {
    if (!rows.empty()) cols = rows.front().size();
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw PreconditionError("ragged matrix rows");
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

template <class T>
std::vector<T> Matrix<T>::row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
}

template <class T>
std::vector<T> Matrix<T>::col(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

template <class T>
void Matrix<T>::append_row(const std::vector<T>& r) {
    if (rows_ == 0 && cols_ == 0) cols_ = r.size();
    if (r.size() != cols_) throw PreconditionError("row length mismatch");
    data_.insert(data_.end(), r.begin(), r.end());
    ++rows_;
}

template <class T>
Matrix<T> Matrix<T>::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

template <class T>
Matrix<T> Matrix<T>::select_cols(const std::vector<std::size_t>& idx) const {
    Matrix s(rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) s(i, j) = (*this)(i, idx[j]);
    return s;
}

template <class T>
Matrix<T> Matrix<T>::select_rows(const std::vector<std::size_t>& idx) const {
    Matrix s(idx.size(), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < cols_; ++j) s(i, j) = (*this)(idx[i], j);
    return s;
}

template class Matrix<Int>;
template class Matrix<Rat>;

RatMatrix to_rat(const IntMatrix& m) {
    RatMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
    return r;
}

RatVec to_rat(const IntVec& v) {
    RatVec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = Rat(v[i]);
    return r;
}

template <class T>
static Matrix<T> hstack_impl(const Matrix<T>& a, const Matrix<T>& b) {
    std::size_t rows = a.cols() ? a.rows() : b.rows();
    if (a.cols() && b.cols() && a.rows() != b.rows()) throw PreconditionError("hstack row mismatch");
    Matrix<T> r(rows, a.cols() + b.cols());
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) r(i, a.cols() + j) = b(i, j);
    }
    return r;
}

IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) { return hstack_impl(a, b); }
RatMatrix hstack(const RatMatrix& a, const RatMatrix& b) { return hstack_impl(a, b); }

RatMatrix vstack(const RatMatrix& a, const RatMatrix& b) {
    std::size_t cols = a.rows() ? a.cols() : b.cols();
    if (a.rows() && b.rows() && a.cols() != b.cols()) throw PreconditionError("vstack column mismatch");
    RatMatrix r(a.rows() + b.rows(), cols);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < cols; ++j) r(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < cols; ++j) r(a.rows() + i, j) = b(i, j);
    return r;
}

template <class T>
static Matrix<T> mul_impl(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.rows()) throw PreconditionError("matrix product shape mismatch");
    Matrix<T> r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (sgn(a(i, k)) == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += a(i, k) * b(k, j);
        }
    return r;
}

RatMatrix mul(const RatMatrix& a, const RatMatrix& b) { return mul_impl(a, b); }
IntMatrix mul(const IntMatrix& a, const IntMatrix& b) { return mul_impl(a, b); }

RatVec mul(const RatMatrix& a, const RatVec& x) {
    if (a.cols() != x.size()) throw PreconditionError("matrix-vector shape mismatch");
    RatVec r(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (sgn(x[j]) != 0) r[i] += a(i, j) * x[j];
    return r;
}

std::vector<std::size_t> rref(RatMatrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t c = 0; c < m.cols() && row < m.rows(); ++c) {
        std::size_t p = row;
        while (p < m.rows() && sgn(m(p, c)) == 0) ++p;
        if (p == m.rows()) continue;
        if (p != row)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
        Rat inv = 1 / m(row, c);
        for (std::size_t j = c; j < m.cols(); ++j) m(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || sgn(m(i, c)) == 0) continue;
            Rat f = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
        }
        pivots.push_back(c);
        ++row;
    }
    return pivots;
}

std::size_t rank(const RatMatrix& m) {
    RatMatrix w = m;
    return rref(w).size();
}

std::size_t rank(const IntMatrix& m) { return rank(to_rat(m)); }

Rat determinant(RatMatrix m) {
    if (m.rows() != m.cols()) throw PreconditionError("determinant of non-square matrix");
    std::size_t n = m.rows();
    Rat det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && sgn(m(p, c)) == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
            det = -det;
        }
        det *= m(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (sgn(m(i, c)) == 0) continue;
            Rat f = m(i, c) / m(c, c);
            for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
        }
    }
    return det;
}

Int determinant(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw PreconditionError("determinant of non-square matrix");
    // Bareiss
    std::size_t n = m.rows();
    if (n == 0) return 1;
    IntMatrix a = m;
    Int sign = 1;
    Int prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a(p, k) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(k, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                a(i, j) = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                mpz_divexact(a(i, j).get_mpz_t(), a(i, j).get_mpz_t(), prev.get_mpz_t());
            }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

RatMatrix kernel_basis(const RatMatrix& m) {
    RatMatrix r = m;
    auto piv = rref(r);
    std::vector<bool> is_piv(m.cols(), false);
    for (auto p : piv) is_piv[p] = true;
    std::vector<std::size_t> free;
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (!is_piv[j]) free.push_back(j);
    RatMatrix k(m.cols(), free.size());
    for (std::size_t f = 0; f < free.size(); ++f) {
        k(free[f], f) = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) k(piv[i], f) = -r(i, free[f]);
    }
    return k;
}

std::optional<RatVec> solve_affine(const RatMatrix& a, const RatVec& b) {
    if (b.size() != a.rows()) throw PreconditionError("solve_affine shape mismatch");
    RatMatrix aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
        aug(i, a.cols()) = b[i];
    }
    auto piv = rref(aug);
    if (!piv.empty() && piv.back() == a.cols()) return std::nullopt;
    RatVec x(a.cols());
    for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = aug(i, a.cols());
    return x;
}

std::optional<RatVec> solve_square(const RatMatrix& a, const RatVec& b) {
    if (a.rows() != a.cols()) throw PreconditionError("solve_square needs a square matrix");
    if (rank(a) < a.rows()) return std::nullopt;
    return solve_affine(a, b);
}

std::vector<Int> SmithForm::invariant_factors() const {
    std::vector<Int> f;
    std::size_t k = std::min(d.rows(), d.cols());
    for (std::size_t i = 0; i < k; ++i) f.push_back(d(i, i));
    return f;
}

namespace {

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

// row a -= q * row b
void add_row(IntMatrix& m, std::size_t a, std::size_t b, const Int& q) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(a, j) -= q * m(b, j);
}

void add_col(IntMatrix& m, std::size_t a, std::size_t b, const Int& q) {
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, a) -= q * m(i, b);
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& m) {
    std::size_t rows = m.rows(), cols = m.cols();
    IntMatrix d = m;
    IntMatrix u = IntMatrix::identity(rows);
    IntMatrix v = IntMatrix::identity(cols);
    std::size_t t = 0;
    while (t < rows && t < cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        bool found = false;
        std::size_t pi = t, pj = t;
        Int best;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (d(i, j) != 0 && (!found || abs(d(i, j)) < best)) {
                    best = abs(d(i, j));
                    pi = i;
                    pj = j;
                    found = true;
                }
        if (!found) break;
        swap_rows(d, t, pi);
        swap_rows(u, t, pi);
        swap_cols(d, t, pj);
        swap_cols(v, t, pj);
        bool clean = true;
        for (std::size_t i = t + 1; i < rows; ++i) {
            if (d(i, t) == 0) continue;
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), d(i, t).get_mpz_t(), d(t, t).get_mpz_t());
            add_row(d, i, t, q);
            add_row(u, i, t, q);
            if (d(i, t) != 0) clean = false;
        }
        for (std::size_t j = t + 1; j < cols; ++j) {
            if (d(t, j) == 0) continue;
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), d(t, j).get_mpz_t(), d(t, t).get_mpz_t());
            add_col(d, j, t, q);
            add_col(v, j, t, q);
            if (d(t, j) != 0) clean = false;
        }
        if (!clean) continue;
        // divisibility against the rest of the block
        bool divides = true;
        for (std::size_t i = t + 1; i < rows && divides; ++i)
            for (std::size_t j = t + 1; j < cols; ++j)
                if (d(i, j) % d(t, t) != 0) {
                    add_row(d, t, i, -1);
                    add_row(u, t, i, -1);
                    divides = false;
                    break;
                }
        if (!divides) continue;
        if (d(t, t) < 0) {
            for (std::size_t j = 0; j < cols; ++j) d(t, j) = -d(t, j);
            for (std::size_t j = 0; j < rows; ++j) u(t, j) = -u(t, j);
        }
        ++t;
    }
    return {u, d, v};
}

Int sublattice_index(const IntMatrix& gens) {
    if (rank(gens) != gens.rows())
        throw PreconditionError("sublattice_index: generators do not span a full-rank lattice");
    auto sf = smith_normal_form(gens);
    Int idx = 1;
    for (std::size_t i = 0; i < gens.rows(); ++i) idx *= sf.d(i, i);
    return idx;
}

Int monomial_map_degree(const IntMatrix& m) {
    if (rank(m) != m.rows()) throw PreconditionError("monomial_map_degree: matrix is not of full row rank");
    auto sf = smith_normal_form(m);
    Int deg = 1;
    for (const auto& f : sf.invariant_factors())
        if (f != 0) deg *= f;
    return deg;
}

IntMatrix saturate(const IntMatrix& gens) {
    // U G V = D, so the span of G equals the span of the first r columns of U^{-1}.
    std::size_t n = gens.rows();
    auto sf = smith_normal_form(gens);
    std::size_t r = 0;
    for (const auto& f : sf.invariant_factors())
        if (f != 0) ++r;
    RatMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = Rat(sf.u(i, j));
        aug(i, n + i) = 1;
    }
    rref(aug);
    IntMatrix out(n, r);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < r; ++j) out(i, j) = aug(i, n + j).get_num();
    return out;
}

Int content(const IntVec& v) {
    Int g = 0;
    for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    return g;
}

IntVec primitive(const IntVec& v) {
    Int g = content(v);
    if (g == 0 || g == 1) return v;
    IntVec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) mpz_divexact(r[i].get_mpz_t(), v[i].get_mpz_t(), g.get_mpz_t());
    return r;
}

IntVec clear_denominators(const RatVec& v) {
    Int l = 1;
    for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    IntVec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        Rat s = v[i] * l;
        r[i] = s.get_num();
    }
    return primitive(r);
}

std::string to_string(const Rat& x) {
    Rat q = x;
    q.canonicalize();
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rat parse_rat(const std::string& s) {
    std::string t;
    for (char c : s)
        if (c != ' ' && c != '\t') t.push_back(c);
    if (t.empty()) throw ParseError("empty rational literal");
    if (t.front() == '+') t.erase(t.begin());
    auto slash = t.find('/');
    auto valid_int = [](const std::string& x) {
        std::size_t i = (!x.empty() && x[0] == '-') ? 1 : 0;
        if (i == x.size()) return false;
        for (; i < x.size(); ++i)
            if (x[i] < '0' || x[i] > '9') return false;
        return true;
    };
    if (slash == std::string::npos) {
        if (!valid_int(t)) throw ParseError("malformed rational '" + s + "'");
        return Rat(Int(t));
    }
    std::string num = t.substr(0, slash), den = t.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den) || den[0] == '-') throw ParseError("malformed rational '" + s + "'");
    Int d(den);
    if (d == 0) throw ParseError("zero denominator in '" + s + "'");
    Rat q(Int(num), d);
    q.canonicalize();
    return q;
}

}  // namespace troproot

namespace troproot {

namespace {

// Phase-one simplex for {t : g_mat t <= g}, t free; Bland's rule.
std::optional<RatVec> phase_one(const RatMatrix& g_mat, const RatVec& g) {
    std::size_t q = g_mat.rows(), p = g_mat.cols();
    std::size_t n_art = 0;
    for (const auto& x : g)
        if (sgn(x) < 0) ++n_art;
    std::size_t width = 2 * p + q + n_art;
    RatMatrix tab(q, width + 1);
    std::vector<std::size_t> basis(q);
    std::size_t art = 2 * p + q;
    for (std::size_t i = 0; i < q; ++i) {
        int s = sgn(g[i]) < 0 ? -1 : 1;
        for (std::size_t j = 0; j < p; ++j) {
            tab(i, j) = s * g_mat(i, j);
            tab(i, p + j) = -s * g_mat(i, j);
        }
        tab(i, 2 * p + i) = s;
        tab(i, width) = s * g[i];
        if (s < 0) {
            tab(i, art) = 1;
            basis[i] = art++;
        } else {
            basis[i] = 2 * p + i;
        }
    }
    // reduced costs of the objective sum of artificials
    RatVec cost(width + 1);
    for (std::size_t i = 0; i < q; ++i)
        if (basis[i] >= 2 * p + q)
            for (std::size_t j = 0; j <= width; ++j) cost[j] -= tab(i, j);
    for (std::size_t j = 2 * p + q; j < width; ++j) cost[j] += 1;
    while (true) {
        std::size_t enter = width;
        for (std::size_t j = 0; j < width; ++j)
            if (sgn(cost[j]) < 0) {
                enter = j;
                break;
            }
        if (enter == width) break;
        std::size_t leave = q;
        Rat best;
        for (std::size_t i = 0; i < q; ++i) {
            if (sgn(tab(i, enter)) <= 0) continue;
            Rat ratio = tab(i, width) / tab(i, enter);
            if (leave == q || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == q) break;  // unbounded direction cannot occur in phase one
        Rat piv = tab(leave, enter);
        for (std::size_t j = 0; j <= width; ++j)
            if (sgn(tab(leave, j)) != 0) tab(leave, j) /= piv;
        for (std::size_t i = 0; i < q; ++i) {
            if (i == leave || sgn(tab(i, enter)) == 0) continue;
            Rat f = tab(i, enter);
            for (std::size_t j = 0; j <= width; ++j)
                if (sgn(tab(leave, j)) != 0) tab(i, j) -= f * tab(leave, j);
        }
        if (sgn(cost[enter]) != 0) {
            Rat f = cost[enter];
            for (std::size_t j = 0; j <= width; ++j)
                if (sgn(tab(leave, j)) != 0) cost[j] -= f * tab(leave, j);
        }
        basis[leave] = enter;
    }
    if (sgn(cost[width]) != 0) return std::nullopt;
    RatVec t(p);
    for (std::size_t i = 0; i < q; ++i) {
        if (basis[i] < p) t[basis[i]] += tab(i, width);
        else if (basis[i] < 2 * p) t[basis[i] - p] -= tab(i, width);
    }
    return t;
}

}  // namespace

std::optional<RatVec> lp_feasible_point(const RatMatrix& eq_a, const RatVec& eq_b, const RatMatrix& le_a,
                                        const RatVec& le_b) {
    std::size_t n = eq_a.rows() ? eq_a.cols() : le_a.cols();
    RatVec x0(n);
    RatMatrix k = RatMatrix::identity(n);
    if (eq_a.rows() > 0) {
        auto sol = solve_affine(eq_a, eq_b);
        if (!sol) return std::nullopt;
        x0 = *sol;
        k = kernel_basis(eq_a);
    }
    if (le_a.rows() == 0) return x0;
    RatMatrix g_mat = mul(le_a, k);
    RatVec g = le_b;
    RatVec ax0 = mul(le_a, x0);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] -= ax0[i];
    if (k.cols() == 0) {
        for (const auto& v : g)
            if (sgn(v) < 0) return std::nullopt;
        return x0;
    }
    auto t = phase_one(g_mat, g);
    if (!t) return std::nullopt;
    RatVec x = x0;
    RatVec kt = mul(k, *t);
    for (std::size_t i = 0; i < n; ++i) x[i] += kt[i];
    return x;
}

std::optional<RatVec> lp_feasible_ineq(const RatMatrix& g_mat, const RatVec& g) {
    if (g_mat.rows() == 0) return RatVec(g_mat.cols());
    if (g_mat.cols() == 0) {
        for (const auto& v : g)
            if (sgn(v) < 0) return std::nullopt;
        return RatVec();
    }
    return phase_one(g_mat, g);
}

namespace {
unsigned g_worker_threads = 0;
}

unsigned worker_threads() {
    if (g_worker_threads) return g_worker_threads;
    unsigned h = std::thread::hardware_concurrency();
    return h ? h : 1;
}

void set_worker_threads(unsigned n) { g_worker_threads = n; }

}  // namespace troproot
