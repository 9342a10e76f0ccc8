#include "zalg/eigen_support.hpp"

namespace zalg {

int row_reduce(CMat& mat)
{
    const int rows = static_cast<int>(mat.rows());
    const int cols = static_cast<int>(mat.cols());
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (!mat(r, c).is_zero()) {
                pivot = r;
                break;
            }
        if (pivot < 0)
            continue;
        if (pivot != rank)
            mat.row(pivot).swap(mat.row(rank));
        Cyclotomic inv = mat(rank, c).inverse();
        for (int k = c; k < cols; ++k)
            mat(rank, k) *= inv;
        for (int r = 0; r < rows; ++r) {
            if (r == rank || mat(r, c).is_zero())
                continue;
            Cyclotomic f = mat(r, c);
            for (int k = c; k < cols; ++k)
                mat(r, k) -= f * mat(rank, k);
        }
        ++rank;
    }
    return rank;
}

CMat kernel_basis(const CMat& mat)
{
    CMat red = mat;
    int rank = row_reduce(red);
    const int cols = static_cast<int>(mat.cols());

    std::vector<int> pivot_col;
    std::vector<bool> is_pivot(static_cast<size_t>(cols), false);
    for (int r = 0; r < rank; ++r) {
        for (int c = 0; c < cols; ++c)
            if (!red(r, c).is_zero()) {
                pivot_col.push_back(c);
                is_pivot[static_cast<size_t>(c)] = true;
                break;
            }
    }

    CMat out(cols, cols - rank);
    int k = 0;
    for (int c = 0; c < cols; ++c) {
        if (is_pivot[static_cast<size_t>(c)])
            continue;
        for (int i = 0; i < cols; ++i)
            out(i, k) = Cyclotomic(0);
        out(c, k) = Cyclotomic(1);
        for (int r = 0; r < rank; ++r)
            out(pivot_col[static_cast<size_t>(r)], k) = -red(r, c);
        ++k;
    }
    return out;
}

} // namespace zalg
