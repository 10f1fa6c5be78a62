//! Real non-symmetric eigenvalue engine: balancing, Householder reduction
//! to upper Hessenberg form, and an implicitly shifted double-shift QR
//! iteration that extracts eigenvalues only (no Schur vectors).
//!
//! The QR stage follows the classic EISPACK `hqr` structure with the
//! exceptional-shift schedule used by Jama/MATLAB. Updates are restricted
//! to the active block, which is sound because nothing above or right of
//! it is read again once a root deflates.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::float::sqrt;
use crate::mat::Matrix;

/// Diagonal similarity scaling by radix powers so row and column norms
/// are comparable; eigenvalues are unchanged.
fn balance(h: &mut Matrix) {
    const RADIX: f64 = 2.0;
    const RADIX2: f64 = 4.0;
    let n = h.rows();
    for _pass in 0..100 {
        let mut noconv = false;
        for i in 0..n {
            let mut c: f64 = (0..n).filter(|&j| j != i).map(|j| h[(j, i)].abs()).sum();
            let r: f64 = (0..n).filter(|&j| j != i).map(|j| h[(i, j)].abs()).sum();
            if c == 0.0 || r == 0.0 || !(c + r).is_finite() {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX2;
            }
            g = r * RADIX;
            while c >= g {
                f /= RADIX;
                c /= RADIX2;
            }
            if (c + r) / f < 0.95 * s {
                let g = 1.0 / f;
                for j in 0..n {
                    h[(i, j)] *= g;
                }
                for j in 0..n {
                    h[(j, i)] *= f;
                }
                noconv = true;
            }
        }
        if !noconv {
            break;
        }
    }
}

/// Householder reduction to upper Hessenberg form (in place); entries
/// below the first subdiagonal are zeroed afterwards.
fn hessenberg(h: &mut Matrix) {
    let n = h.rows();
    if n < 3 {
        return;
    }
    let high = n - 1;
    let mut ort = vec![0.0; n];
    for m in 1..high {
        let scale: f64 = (m..=high).map(|i| h[(i, m - 1)].abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut hh = 0.0;
        for i in (m..=high).rev() {
            ort[i] = h[(i, m - 1)] / scale;
            hh += ort[i] * ort[i];
        }
        let mut g = sqrt(hh);
        if ort[m] > 0.0 {
            g = -g;
        }
        hh -= ort[m] * g;
        ort[m] -= g;

        for j in m..n {
            let mut f = 0.0;
            for i in (m..=high).rev() {
                f += ort[i] * h[(i, j)];
            }
            f /= hh;
            for i in m..=high {
                h[(i, j)] -= f * ort[i];
            }
        }
        for i in 0..=high {
            let mut f = 0.0;
            for j in (m..=high).rev() {
                f += ort[j] * h[(i, j)];
            }
            f /= hh;
            for j in m..=high {
                h[(i, j)] -= f * ort[j];
            }
        }
        h[(m, m - 1)] = scale * g;
    }
    for i in 2..n {
        for j in 0..i - 1 {
            h[(i, j)] = 0.0;
        }
    }
}

/// All eigenvalues of a real square matrix, with multiplicity, or `None`
/// when the QR iteration exceeds `max_sweeps` sweeps in total.
pub(crate) fn eigenvalues(a: &Matrix, max_sweeps: usize) -> Option<Vec<Complex64>> {
    assert!(a.is_square(), "eigenvalues require a square matrix");
    let nn = a.rows();
    if nn == 0 {
        return Some(Vec::new());
    }
    if nn == 1 {
        return Some(vec![Complex64::new(a[(0, 0)], 0.0)]);
    }

    let mut h = a.clone();
    balance(&mut h);
    hessenberg(&mut h);

    let eps = f64::EPSILON;
    let mut wr = vec![0.0; nn];
    let mut wi = vec![0.0; nn];

    let mut norm = 0.0;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h[(i, j)].abs();
        }
    }
    if norm == 0.0 {
        return Some(vec![Complex64::new(0.0, 0.0); nn]);
    }

    let mut en = nn - 1;
    let mut exshift = 0.0;
    let mut iter_block = 0usize;
    let mut total_sweeps = 0usize;

    loop {
        // Look for a single small subdiagonal element.
        let mut l = en;
        while l > 0 {
            let mut s = h[(l - 1, l - 1)].abs() + h[(l, l)].abs();
            if s == 0.0 {
                s = norm;
            }
            if h[(l, l - 1)].abs() < eps * s {
                break;
            }
            l -= 1;
        }

        if l == en {
            // One real root.
            wr[en] = h[(en, en)] + exshift;
            wi[en] = 0.0;
            if en == 0 {
                break;
            }
            en -= 1;
            iter_block = 0;
            continue;
        }

        if l + 1 == en {
            // A 2x2 block deflates into two roots.
            let w = h[(en, en - 1)] * h[(en - 1, en)];
            let pp = (h[(en - 1, en - 1)] - h[(en, en)]) / 2.0;
            let qq = pp * pp + w;
            let mut zz = sqrt(qq.abs());
            let x = h[(en, en)] + exshift;
            if qq >= 0.0 {
                zz = if pp >= 0.0 { pp + zz } else { pp - zz };
                wr[en - 1] = x + zz;
                wr[en] = wr[en - 1];
                if zz != 0.0 {
                    wr[en] = x - w / zz;
                }
                wi[en - 1] = 0.0;
                wi[en] = 0.0;
            } else {
                wr[en - 1] = x + pp;
                wr[en] = x + pp;
                wi[en - 1] = zz;
                wi[en] = -zz;
            }
            if en <= 1 {
                break;
            }
            en -= 2;
            iter_block = 0;
            continue;
        }

        // Otherwise run one double-shift QR sweep on the block [l, en].
        if total_sweeps >= max_sweeps {
            return None;
        }

        let mut x = h[(en, en)];
        let mut y = h[(en - 1, en - 1)];
        let mut w = h[(en, en - 1)] * h[(en - 1, en)];

        if iter_block == 10 {
            // Exceptional shift after 10 stalled sweeps.
            exshift += x;
            for i in 0..=en {
                h[(i, i)] -= x;
            }
            let s = h[(en, en - 1)].abs() + h[(en - 1, en - 2)].abs();
            x = 0.75 * s;
            y = x;
            w = -0.4375 * s * s;
        }
        if iter_block == 30 {
            // Second exceptional shift after 30 stalled sweeps.
            let mut s = (y - x) / 2.0;
            s = s * s + w;
            if s > 0.0 {
                s = sqrt(s);
                if y < x {
                    s = -s;
                }
                s = x - w / ((y - x) / 2.0 + s);
                for i in 0..=en {
                    h[(i, i)] -= s;
                }
                exshift += s;
                x = 0.964;
                y = x;
                w = x;
            }
        }

        iter_block += 1;
        total_sweeps += 1;

        // Look for two consecutive small subdiagonal elements.
        let (m, mut p, mut q, mut r) = {
            let mut m = en - 2;
            loop {
                let zz = h[(m, m)];
                let rr = x - zz;
                let ss = y - zz;
                let mut p = (rr * ss - w) / h[(m + 1, m)] + h[(m, m + 1)];
                let mut q = h[(m + 1, m + 1)] - zz - rr - ss;
                let mut r = h[(m + 2, m + 1)];
                let scale = p.abs() + q.abs() + r.abs();
                p /= scale;
                q /= scale;
                r /= scale;
                if m == l {
                    break (m, p, q, r);
                }
                if h[(m, m - 1)].abs() * (q.abs() + r.abs())
                    < eps
                        * (p.abs()
                            * (h[(m - 1, m - 1)].abs() + zz.abs() + h[(m + 1, m + 1)].abs()))
                {
                    break (m, p, q, r);
                }
                m -= 1;
            }
        };

        for i in m + 2..=en {
            h[(i, i - 2)] = 0.0;
            if i > m + 2 {
                h[(i, i - 3)] = 0.0;
            }
        }

        // Double QR step on rows and columns m..=en.
        for k in m..en {
            let notlast = k != en - 1;
            if k != m {
                p = h[(k, k - 1)];
                q = h[(k + 1, k - 1)];
                r = if notlast { h[(k + 2, k - 1)] } else { 0.0 };
                x = p.abs() + q.abs() + r.abs();
                if x == 0.0 {
                    continue;
                }
                p /= x;
                q /= x;
                r /= x;
            }
            let mut s = sqrt(p * p + q * q + r * r);
            if p < 0.0 {
                s = -s;
            }
            if s == 0.0 {
                continue;
            }
            if k != m {
                h[(k, k - 1)] = -s * x;
            } else if l != m {
                h[(k, k - 1)] = -h[(k, k - 1)];
            }
            p += s;
            x = p / s;
            y = q / s;
            let zz = r / s;
            q /= p;
            r /= p;

            for j in k..=en {
                let mut f = h[(k, j)] + q * h[(k + 1, j)];
                if notlast {
                    f += r * h[(k + 2, j)];
                    h[(k + 2, j)] -= f * zz;
                }
                h[(k, j)] -= f * x;
                h[(k + 1, j)] -= f * y;
            }
            for i in l..=en.min(k + 3) {
                let mut f = x * h[(i, k)] + y * h[(i, k + 1)];
                if notlast {
                    f += zz * h[(i, k + 2)];
                    h[(i, k + 2)] -= f * r;
                }
                h[(i, k)] -= f;
                h[(i, k + 1)] -= f * q;
            }
        }
    }

    Some(
        wr.into_iter()
            .zip(wi)
            .map(|(re, im)| Complex64::new(re, im))
            .collect(),
    )
}
