#include "ripgate/sparse.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace ripgate::sparse {

CsrMatrix CsrMatrix::from_triplets(int rows, int cols, std::vector<Triplet> triplets) {
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  CsrMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.row_ptr.assign(rows + 1, 0);
  for (std::size_t k = 0; k < triplets.size();) {
    std::size_t j = k;
    cd sum = 0.0;
    while (j < triplets.size() && triplets[j].row == triplets[k].row &&
           triplets[j].col == triplets[k].col) {
      sum += triplets[j].val;
      ++j;
    }
    if (sum != cd(0.0, 0.0)) {
      m.col.push_back(triplets[k].col);
      m.val.push_back(sum);
      ++m.row_ptr[triplets[k].row + 1];
    }
    k = j;
  }
  for (int r = 0; r < rows; ++r) m.row_ptr[r + 1] += m.row_ptr[r];
  return m;
}

CsrMatrix CsrMatrix::from_dense(const Eigen::MatrixXcd& mat, double drop_tol) {
  std::vector<Triplet> t;
  for (int i = 0; i < mat.rows(); ++i) {
    for (int j = 0; j < mat.cols(); ++j) {
      if (std::abs(mat(i, j)) > drop_tol) {
        t.push_back({i, j, mat(i, j)});
      }
    }
  }
  return from_triplets(int(mat.rows()), int(mat.cols()), std::move(t));
}

Eigen::MatrixXcd CsrMatrix::dense() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int p = row_ptr[r]; p < row_ptr[r + 1]; ++p) {
      m(r, col[p]) = val[p];
    }
  }
  return m;
}

void add_left_product(CMatRM& y, cd scale, const CsrMatrix& s, const CMatRM& x) {
  assert(s.cols == x.rows() && s.rows == y.rows() && x.cols() == y.cols());
  const int n = int(x.cols());
  const cd* xd = x.data();
  cd* yd = y.data();
  for (int i = 0; i < s.rows; ++i) {
    cd* yrow = yd + std::size_t(i) * n;
    for (int p = s.row_ptr[i]; p < s.row_ptr[i + 1]; ++p) {
      const cd v = scale * s.val[p];
      const cd* xrow = xd + std::size_t(s.col[p]) * n;
      for (int c = 0; c < n; ++c) {
        yrow[c] += v * xrow[c];
      }
    }
  }
}

void add_right_product(CMatRM& y, cd scale, const CMatRM& x, const CsrMatrix& s) {
  assert(x.cols() == s.rows && y.rows() == x.rows() && y.cols() == s.cols);
  const int n = int(x.cols());
  const int m = int(x.rows());
  const cd* xd = x.data();
  cd* yd = y.data();
  for (int r = 0; r < m; ++r) {
    const cd* xrow = xd + std::size_t(r) * n;
    cd* yrow = yd + std::size_t(r) * s.cols;
    for (int i = 0; i < s.rows; ++i) {
      const cd xv = scale * xrow[i];
      if (xv == cd(0.0, 0.0)) continue;
      for (int p = s.row_ptr[i]; p < s.row_ptr[i + 1]; ++p) {
        yrow[s.col[p]] += xv * s.val[p];
      }
    }
  }
}

}  // namespace ripgate::sparse

namespace ripgate::sparse {

BandedOperator BandedOperator::from_dense(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("BandedOperator: square only");
  const int dim = int(m.rows());
  BandedOperator op;
  op.dim = dim;
  for (int off = -(dim - 1); off < dim; ++off) {
    bool any = false;
    std::vector<cd> w(dim, cd(0.0, 0.0));
    const int lo = std::max(0, -off);
    const int hi = std::min(dim, dim - off);
    for (int i = lo; i < hi; ++i) {
      w[i] = m(i, i + off);
      if (w[i] != cd(0.0, 0.0)) any = true;
    }
    if (any) op.bands.push_back({off, std::move(w), lo, hi});
  }
  return op;
}

Eigen::MatrixXcd BandedOperator::dense() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& band : bands) {
    for (int i = band.row_begin; i < band.row_end; ++i) {
      m(i, i + band.offset) = band.w[i];
    }
  }
  return m;
}

namespace {

// y_row (+)= v * x_row, manual complex arithmetic over restrict'd doubles so
// the compiler can keep the FMA pipes busy.
inline void row_axpy(double* __restrict y, const double* __restrict x, double vr, double vi,
                     int n) {
  for (int c = 0; c < n; ++c) {
    const double xr = x[2 * c];
    const double xi = x[2 * c + 1];
    y[2 * c] += vr * xr - vi * xi;
    y[2 * c + 1] += vr * xi + vi * xr;
  }
}

}  // namespace

void banded_left_product(CMatRM& y, cd scale, const BandedOperator& s, const CMatRM& x,
                         bool accumulate) {
  assert(s.dim == x.rows() && y.rows() == s.dim && y.cols() == x.cols());
  const int n = int(x.cols());
  if (!accumulate) y.setZero();
  const double* __restrict xd = reinterpret_cast<const double*>(x.data());
  double* __restrict yd = reinterpret_cast<double*>(y.data());
  for (const auto& band : s.bands) {
    for (int i = band.row_begin; i < band.row_end; ++i) {
      const cd v = scale * band.w[i];
      if (v == cd(0.0, 0.0)) continue;
      row_axpy(yd + 2 * std::size_t(i) * n, xd + 2 * std::size_t(i + band.offset) * n, v.real(),
               v.imag(), n);
    }
  }
}

void banded_right_product(CMatRM& y, cd scale, const CMatRM& x, const BandedOperator& s,
                          bool accumulate) {
  assert(s.dim == x.cols() && y.cols() == s.dim && y.rows() == x.rows());
  const int n = int(x.cols());
  const int rows = int(x.rows());
  if (!accumulate) y.setZero();
  const double* __restrict xd = reinterpret_cast<const double*>(x.data());
  double* __restrict yd = reinterpret_cast<double*>(y.data());
  for (int r = 0; r < rows; ++r) {
    const double* __restrict xrow = xd + 2 * std::size_t(r) * n;
    double* __restrict yrow = yd + 2 * std::size_t(r) * n;
    for (const auto& band : s.bands) {
      // Y(r, i + off) += X(r, i) * w(i) for i in the valid row range.
      const double* __restrict w = reinterpret_cast<const double*>(band.w.data());
      const int lo = band.row_begin;
      const int hi = band.row_end;
      double* __restrict yo = yrow + 2 * std::size_t(band.offset);
      const double sr = scale.real(), si = scale.imag();
      for (int i = lo; i < hi; ++i) {
        const double wr = sr * w[2 * i] - si * w[2 * i + 1];
        const double wi = sr * w[2 * i + 1] + si * w[2 * i];
        const double xr = xrow[2 * i];
        const double xi = xrow[2 * i + 1];
        yo[2 * i] += wr * xr - wi * xi;
        yo[2 * i + 1] += wr * xi + wi * xr;
      }
    }
  }
}

}  // namespace ripgate::sparse

namespace ripgate::sparse {

namespace {

struct RowStream {
  const double* __restrict x;
  double vr;
  double vi;
};

// acc over c: y_row = (or +=) sum_k v_k * x_k, all streams fused.
inline void fused_row(double* __restrict y, const RowStream* streams, int n_streams, int n,
                      bool accumulate) {
  if (!accumulate) {
    for (int c = 0; c < 2 * n; ++c) y[c] = 0.0;
  }
  for (int k = 0; k < n_streams; ++k) {
    row_axpy(y, streams[k].x, streams[k].vr, streams[k].vi, n);
  }
}

}  // namespace

void banded_left_combine(CMatRM& y, const std::vector<BandedTerm>& terms, const CMatRM& x,
                         bool accumulate) {
  const int dim = int(x.rows());
  const int n = int(x.cols());
  const double* __restrict xd = reinterpret_cast<const double*>(x.data());
  double* __restrict yd = reinterpret_cast<double*>(y.data());

  // Flatten (term, band) pairs once.
  struct Entry {
    const BandedOperator::Band* band;
    cd scale;
  };
  std::vector<Entry> entries;
  for (const auto& t : terms) {
    for (const auto& band : t.op->bands) entries.push_back({&band, t.scale});
  }

  std::vector<RowStream> streams(entries.size());
  for (int i = 0; i < dim; ++i) {
    int ns = 0;
    for (const auto& e : entries) {
      if (i < e.band->row_begin || i >= e.band->row_end) continue;
      const cd v = e.scale * e.band->w[i];
      if (v == cd(0.0, 0.0)) continue;
      streams[ns++] = {xd + 2 * std::size_t(i + e.band->offset) * n, v.real(), v.imag()};
    }
    fused_row(yd + 2 * std::size_t(i) * n, streams.data(), ns, n, accumulate);
  }
}

void banded_right_combine(CMatRM& y, const CMatRM& x, const std::vector<BandedTerm>& terms,
                          bool accumulate) {
  const int n = int(x.cols());
  const int rows = int(x.rows());
  if (!accumulate) y.setZero();
  const double* __restrict xd = reinterpret_cast<const double*>(x.data());
  double* __restrict yd = reinterpret_cast<double*>(y.data());
  for (int r = 0; r < rows; ++r) {
    const double* __restrict xrow = xd + 2 * std::size_t(r) * n;
    double* __restrict yrow = yd + 2 * std::size_t(r) * n;
    for (const auto& t : terms) {
      const double sr = t.scale.real(), si = t.scale.imag();
      for (const auto& band : t.op->bands) {
        const double* __restrict w = reinterpret_cast<const double*>(band.w.data());
        double* __restrict yo = yrow + 2 * std::size_t(band.offset);
        for (int i = band.row_begin; i < band.row_end; ++i) {
          const double wr = sr * w[2 * i] - si * w[2 * i + 1];
          const double wi = sr * w[2 * i + 1] + si * w[2 * i];
          const double xr = xrow[2 * i];
          const double xi = xrow[2 * i + 1];
          yo[2 * i] += wr * xr - wi * xi;
          yo[2 * i + 1] += wr * xi + wi * xr;
        }
      }
    }
  }
}

}  // namespace ripgate::sparse
