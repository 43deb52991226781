// Adaptive-precision orientation predicate, ported from Jonathan Shewchuk's
// public-domain predicates.c (orient2d only). This translation unit must be
// compiled with floating-point contraction disabled; the error-free
// transformations below are incorrect under FMA fusion.

#include "nnv/geometry/predicates.hpp"

#include <algorithm>
#include <cmath>

namespace nnv::geom {
namespace {

constexpr double kEpsilon = 1.1102230246251565e-16;  // 2^-53
constexpr double kSplitter = 134217729.0;            // 2^27 + 1
constexpr double kResultErrBound = (3.0 + 8.0 * kEpsilon) * kEpsilon;
constexpr double kCcwErrBoundA = (3.0 + 16.0 * kEpsilon) * kEpsilon;
constexpr double kCcwErrBoundB = (2.0 + 12.0 * kEpsilon) * kEpsilon;
constexpr double kCcwErrBoundC = (9.0 + 64.0 * kEpsilon) * kEpsilon * kEpsilon;

inline void fast_two_sum(double a, double b, double& x, double& y) {
    x = a + b;
    double bvirt = x - a;
    y = b - bvirt;
}

inline void two_sum(double a, double b, double& x, double& y) {
    x = a + b;
    double bvirt = x - a;
    double avirt = x - bvirt;
    double bround = b - bvirt;
    double around = a - avirt;
    y = around + bround;
}

inline void two_diff(double a, double b, double& x, double& y) {
    x = a - b;
    double bvirt = a - x;
    double avirt = x + bvirt;
    double bround = bvirt - b;
    double around = a - avirt;
    y = around + bround;
}

inline void two_diff_tail(double a, double b, double x, double& y) {
    double bvirt = a - x;
    double avirt = x + bvirt;
    double bround = bvirt - b;
    double around = a - avirt;
    y = around + bround;
}

inline void split(double a, double& hi, double& lo) {
    double c = kSplitter * a;
    double abig = c - a;
    hi = c - abig;
    lo = a - hi;
}

inline void two_product(double a, double b, double& x, double& y) {
    x = a * b;
    double ahi, alo, bhi, blo;
    split(a, ahi, alo);
    split(b, bhi, blo);
    double err1 = x - (ahi * bhi);
    double err2 = err1 - (alo * bhi);
    double err3 = err2 - (ahi * blo);
    y = (alo * blo) - err3;
}

inline void two_one_diff(double a1, double a0, double b, double& x2, double& x1,
                         double& x0) {
    double i;
    two_diff(a0, b, i, x0);
    two_sum(a1, i, x2, x1);
}

inline void two_two_diff(double a1, double a0, double b1, double b0, double& x3,
                         double& x2, double& x1, double& x0) {
    double j, r0;
    two_one_diff(a1, a0, b0, j, r0, x0);
    two_one_diff(j, r0, b1, x3, x2, x1);
}

double estimate(int elen, const double* e) {
    double q = e[0];
    for (int i = 1; i < elen; ++i) q += e[i];
    return q;
}

int fast_expansion_sum_zeroelim(int elen, const double* e, int flen,
                                const double* f, double* h) {
    double q, qnew, hh;
    int eindex = 0, findex = 0, hindex = 0;
    double enow = e[0];
    double fnow = f[0];
    if ((fnow > enow) == (fnow > -enow)) {
        q = enow;
        enow = e[++eindex];
    } else {
        q = fnow;
        fnow = f[++findex];
    }
    if ((eindex < elen) && (findex < flen)) {
        if ((fnow > enow) == (fnow > -enow)) {
            fast_two_sum(enow, q, qnew, hh);
            enow = e[++eindex];
        } else {
            fast_two_sum(fnow, q, qnew, hh);
            fnow = f[++findex];
        }
        q = qnew;
        if (hh != 0.0) h[hindex++] = hh;
        while ((eindex < elen) && (findex < flen)) {
            if ((fnow > enow) == (fnow > -enow)) {
                two_sum(q, enow, qnew, hh);
                enow = e[++eindex];
            } else {
                two_sum(q, fnow, qnew, hh);
                fnow = f[++findex];
            }
            q = qnew;
            if (hh != 0.0) h[hindex++] = hh;
        }
    }
    while (eindex < elen) {
        two_sum(q, enow, qnew, hh);
        enow = e[++eindex];
        q = qnew;
        if (hh != 0.0) h[hindex++] = hh;
    }
    while (findex < flen) {
        two_sum(q, fnow, qnew, hh);
        fnow = f[++findex];
        q = qnew;
        if (hh != 0.0) h[hindex++] = hh;
    }
    if ((q != 0.0) || (hindex == 0)) h[hindex++] = q;
    return hindex;
}

double orient2d_adapt(Point2 pa, Point2 pb, Point2 pc, double detsum) {
    double acx = pa.x - pc.x;
    double bcx = pb.x - pc.x;
    double acy = pa.y - pc.y;
    double bcy = pb.y - pc.y;

    double detleft, detlefttail, detright, detrighttail;
    two_product(acx, bcy, detleft, detlefttail);
    two_product(acy, bcx, detright, detrighttail);

    double B[4], B3;
    two_two_diff(detleft, detlefttail, detright, detrighttail, B3, B[2], B[1],
                 B[0]);
    B[3] = B3;

    double det = estimate(4, B);
    double errbound = kCcwErrBoundB * detsum;
    if ((det >= errbound) || (-det >= errbound)) return det;

    double acxtail, bcxtail, acytail, bcytail;
    two_diff_tail(pa.x, pc.x, acx, acxtail);
    two_diff_tail(pb.x, pc.x, bcx, bcxtail);
    two_diff_tail(pa.y, pc.y, acy, acytail);
    two_diff_tail(pb.y, pc.y, bcy, bcytail);

    if ((acxtail == 0.0) && (acytail == 0.0) && (bcxtail == 0.0) &&
        (bcytail == 0.0)) {
        return det;
    }

    errbound = kCcwErrBoundC * detsum + kResultErrBound * std::abs(det);
    det += (acx * bcytail + bcy * acxtail) - (acy * bcxtail + bcx * acytail);
    if ((det >= errbound) || (-det >= errbound)) return det;

    double s1, s0, t1, t0, u3;
    double u[4], C1[8], C2[12], D[16];

    two_product(acxtail, bcy, s1, s0);
    two_product(acytail, bcx, t1, t0);
    two_two_diff(s1, s0, t1, t0, u3, u[2], u[1], u[0]);
    u[3] = u3;
    int c1length = fast_expansion_sum_zeroelim(4, B, 4, u, C1);

    two_product(acx, bcytail, s1, s0);
    two_product(acy, bcxtail, t1, t0);
    two_two_diff(s1, s0, t1, t0, u3, u[2], u[1], u[0]);
    u[3] = u3;
    int c2length = fast_expansion_sum_zeroelim(c1length, C1, 4, u, C2);

    two_product(acxtail, bcytail, s1, s0);
    two_product(acytail, bcxtail, t1, t0);
    two_two_diff(s1, s0, t1, t0, u3, u[2], u[1], u[0]);
    u[3] = u3;
    int dlength = fast_expansion_sum_zeroelim(c2length, C2, 4, u, D);

    return D[dlength - 1];
}

}  // namespace

double orient2d(Point2 pa, Point2 pb, Point2 pc) {
    double detleft = (pa.x - pc.x) * (pb.y - pc.y);
    double detright = (pa.y - pc.y) * (pb.x - pc.x);
    double det = detleft - detright;
    double detsum;

    if (detleft > 0.0) {
        if (detright <= 0.0) return det;
        detsum = detleft + detright;
    } else if (detleft < 0.0) {
        if (detright >= 0.0) return det;
        detsum = -detleft - detright;
    } else {
        return det;
    }

    double errbound = kCcwErrBoundA * detsum;
    if ((det >= errbound) || (-det >= errbound)) return det;

    return orient2d_adapt(pa, pb, pc, detsum);
}

int orientation(Point2 a, Point2 b, Point2 c) {
    double d = orient2d(a, b, c);
    if (d > 0.0) return 1;
    if (d < 0.0) return -1;
    return 0;
}

bool on_segment(Point2 a, Point2 b, Point2 c) {
    if (orientation(a, b, c) != 0) return false;
    return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= c.y && c.y <= std::max(a.y, b.y);
}

}  // namespace nnv::geom
