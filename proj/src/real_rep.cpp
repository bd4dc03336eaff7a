#include "quatfact/real_rep.hpp"

namespace quatfact {

namespace {

// sign and plane for each (block row, block col) of the layout
struct Cell {
    int plane;
    double sign;
};

constexpr Cell kLayout[4][4] = {
    {{0, 1.0}, {2, 1.0}, {1, 1.0}, {3, 1.0}},
    {{2, -1.0}, {0, 1.0}, {3, 1.0}, {1, -1.0}},
    {{1, -1.0}, {3, -1.0}, {0, 1.0}, {2, 1.0}},
    {{3, -1.0}, {1, 1.0}, {2, -1.0}, {0, 1.0}},
};

}  // namespace

RealRep real_rep(const QMatrix &a) {
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();
    RealRep rep{RealMatrix(4 * m, 4 * n), m, n};
    for (int br = 0; br < 4; ++br) {
        for (int bc = 0; bc < 4; ++bc) {
            const Cell c = kLayout[br][bc];
            rep.m.block(br * m, bc * n, m, n) = c.sign * a.plane(c.plane);
        }
    }
    return rep;
}

QMatrix from_real_rep_block(const RealMatrix &m, Eigen::Index rows, Eigen::Index cols, int block) {
    if (m.rows() != 4 * rows || m.cols() < 4 * cols || block < 0 || block > 3) {
        throw dimension_error("from_real_rep_block: matrix does not hold the requested block column");
    }
    QMatrix q(rows, cols);
    for (int br = 0; br < 4; ++br) {
        const Cell c = kLayout[br][block];
        q.plane(c.plane) = c.sign * m.block(br * rows, block * cols, rows, cols);
    }
    return q;
}

}  // namespace quatfact
