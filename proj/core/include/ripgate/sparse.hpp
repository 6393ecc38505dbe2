#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace ripgate::sparse {

using cd = std::complex<double>;
using CMatRM = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Triplet {
  int row;
  int col;
  cd val;
};

// Minimal CSR complex matrix with the two dense-block kernels the cascaded
// integrator is built on. Operators here have O(dim) nonzeros, so both
// products cost O(nnz * dim) instead of O(dim^3).
struct CsrMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_ptr;  // size rows + 1
  std::vector<int> col;
  std::vector<cd> val;

  static CsrMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets);
  static CsrMatrix from_dense(const Eigen::MatrixXcd& m, double drop_tol = 0.0);
  Eigen::MatrixXcd dense() const;
  int nnz() const { return int(val.size()); }
};

// y += scale * s * x
void add_left_product(CMatRM& y, cd scale, const CsrMatrix& s, const CMatRM& x);

// y += scale * x * s
void add_right_product(CMatRM& y, cd scale, const CMatRM& x, const CsrMatrix& s);

// Operator stored as a sum of constant-offset diagonals,
// S(i, i + offset) = w[i]. Every operator appearing in the cascaded master
// equation (number operators, ladder shifts, pump pairs, beamsplitter cross
// terms) has this form in the tensor basis, which turns both block products
// into contiguous vector arithmetic.
struct BandedOperator {
  int dim = 0;
  struct Band {
    int offset;            // column minus row
    std::vector<cd> w;     // indexed by row; size dim, zero-padded
    int row_begin, row_end;  // rows with both indices in range
  };
  std::vector<Band> bands;

  static BandedOperator from_dense(const Eigen::MatrixXcd& m);
  Eigen::MatrixXcd dense() const;
};

// y (+)= scale * s * x; overwrites y when accumulate is false.
void banded_left_product(CMatRM& y, cd scale, const BandedOperator& s, const CMatRM& x,
                         bool accumulate);

// y (+)= scale * x * s
void banded_right_product(CMatRM& y, cd scale, const CMatRM& x, const BandedOperator& s,
                          bool accumulate);

// Linear combination of banded operators applied in a single fused pass;
// the output row is touched once regardless of how many bands feed it.
struct BandedTerm {
  const BandedOperator* op;
  cd scale;
};

// y (+)= sum_j scale_j S_j x
void banded_left_combine(CMatRM& y, const std::vector<BandedTerm>& terms, const CMatRM& x,
                         bool accumulate);

// y (+)= sum_j scale_j x S_j
void banded_right_combine(CMatRM& y, const CMatRM& x, const std::vector<BandedTerm>& terms,
                          bool accumulate);

}  // namespace ripgate::sparse
