//! Householder QR with column pivoting on equilibrated columns.

use alloc::vec;
use alloc::vec::Vec;

/// Relative threshold on the pivoted R diagonal below which the design is
/// treated as rank deficient.
pub(crate) const RANK_TOL: f64 = 1e-10;

/// A column-pivoted QR factorization `X S P = Q R` where `S` scales every
/// column of `X` to unit Euclidean norm.
#[derive(Debug, Clone)]
pub(crate) struct Qr {
    n: usize,
    p: usize,
    /// Column-major `n x p`: R on and above the diagonal, Householder
    /// vectors (with implicit unit head) below it.
    a: Vec<f64>,
    tau: Vec<f64>,
    /// `perm[k]` is the original index of the column in pivot position `k`.
    perm: Vec<usize>,
    scale: Vec<f64>,
}

/// Outcome of the rank check: the factorization, or the original index of
/// the first column found to be dependent.
pub(crate) enum Factored {
    FullRank(Qr),
    Deficient(usize),
}

impl Qr {
    pub(crate) fn factor(columns: &[&[f64]], n: usize) -> Factored {
        let p = columns.len();
        let mut a = Vec::with_capacity(n * p);
        let mut scale = Vec::with_capacity(p);
        for (j, col) in columns.iter().enumerate() {
            debug_assert_eq!(col.len(), n);
            let norm = libm::sqrt(col.iter().map(|v| v * v).sum::<f64>());
            if norm == 0.0 {
                return Factored::Deficient(j);
            }
            scale.push(1.0 / norm);
            a.extend(col.iter().map(|v| v / norm));
        }

        let mut perm: Vec<usize> = (0..p).collect();
        let mut tau = vec![0.0; p];
        // Running (downdated) and reference norms of the trailing column parts.
        let mut norms = vec![1.0; p];
        let mut ref_norms = vec![1.0; p];
        let mut first_diag = 0.0;

        for k in 0..p {
            let (piv, _) = norms[k..]
                .iter()
                .enumerate()
                .fold((k, -1.0), |best, (i, &v)| if v > best.1 { (k + i, v) } else { best });
            if piv != k {
                for i in 0..n {
                    a.swap(k * n + i, piv * n + i);
                }
                perm.swap(k, piv);
                norms.swap(k, piv);
                ref_norms.swap(k, piv);
                scale.swap(k, piv);
            }

            let col = &mut a[k * n..(k + 1) * n];
            let xnorm = libm::sqrt(col[k..].iter().map(|v| v * v).sum::<f64>());
            if k == 0 {
                first_diag = xnorm;
            }
            if !(xnorm > RANK_TOL * first_diag) {
                return Factored::Deficient(perm[k]);
            }
            let alpha = if col[k] > 0.0 { -xnorm } else { xnorm };
            let v0 = col[k] - alpha;
            for v in &mut col[k + 1..] {
                *v /= v0;
            }
            tau[k] = -v0 / alpha;
            col[k] = alpha;

            let (head, tail) = a.split_at_mut((k + 1) * n);
            let v = &head[k * n..(k + 1) * n];
            for j in 0..(p - k - 1) {
                let cj = &mut tail[j * n..(j + 1) * n];
                let mut s = cj[k];
                for i in k + 1..n {
                    s += v[i] * cj[i];
                }
                s *= tau[k];
                cj[k] -= s;
                for i in k + 1..n {
                    cj[i] -= s * v[i];
                }
                let jj = k + 1 + j;
                if norms[jj] > 0.0 {
                    let t = cj[k] / norms[jj];
                    let shrink = (1.0 - t * t).max(0.0);
                    let downdated = norms[jj] * libm::sqrt(shrink);
                    if downdated <= 1e-4 * ref_norms[jj] {
                        let exact = libm::sqrt(cj[k + 1..].iter().map(|v| v * v).sum::<f64>());
                        norms[jj] = exact;
                        ref_norms[jj] = exact;
                    } else {
                        norms[jj] = downdated;
                    }
                }
            }
        }
        Factored::FullRank(Qr { n, p, a, tau, perm, scale })
    }

    fn apply_qt(&self, y: &mut [f64]) {
        let n = self.n;
        for k in 0..self.p {
            let v = &self.a[k * n..(k + 1) * n];
            let mut s = y[k];
            for i in k + 1..n {
                s += v[i] * y[i];
            }
            s *= self.tau[k];
            y[k] -= s;
            for i in k + 1..n {
                y[i] -= s * v[i];
            }
        }
    }

    fn apply_q(&self, y: &mut [f64]) {
        let n = self.n;
        for k in (0..self.p).rev() {
            let v = &self.a[k * n..(k + 1) * n];
            let mut s = y[k];
            for i in k + 1..n {
                s += v[i] * y[i];
            }
            s *= self.tau[k];
            y[k] -= s;
            for i in k + 1..n {
                y[i] -= s * v[i];
            }
        }
    }

    #[inline]
    fn r(&self, i: usize, j: usize) -> f64 {
        self.a[j * self.n + i]
    }

    /// Least-squares coefficients (original column order and scale) and
    /// residuals `y - X b`, the latter computed as `Q [0; (Q'y)_{p..}]` so
    /// they are orthogonal to the column space to rounding.
    pub(crate) fn solve(&self, y: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let (n, p) = (self.n, self.p);
        let mut qty = y.to_vec();
        self.apply_qt(&mut qty);

        let mut z = vec![0.0; p];
        for i in (0..p).rev() {
            let mut s = qty[i];
            for j in i + 1..p {
                s -= self.r(i, j) * z[j];
            }
            z[i] = s / self.r(i, i);
        }
        let mut coef = vec![0.0; p];
        for k in 0..p {
            coef[self.perm[k]] = z[k] * self.scale[k];
        }

        let mut resid = qty;
        resid[..p].iter_mut().for_each(|v| *v = 0.0);
        self.apply_q(&mut resid);
        debug_assert_eq!(resid.len(), n);
        (coef, resid)
    }

    /// Diagonal of `(X'X)^{-1}` in original column order.
    pub(crate) fn xtx_inv_diag(&self) -> Vec<f64> {
        let p = self.p;
        // Row norms of R^{-1}: solve R W = I one column at a time.
        let mut rinv = vec![0.0; p * p];
        for c in 0..p {
            let col = &mut rinv[c * p..(c + 1) * p];
            for i in (0..=c).rev() {
                let mut s = if i == c { 1.0 } else { 0.0 };
                for j in i + 1..=c {
                    s -= self.r(i, j) * col[j];
                }
                col[i] = s / self.r(i, i);
            }
        }
        let mut out = vec![0.0; p];
        for k in 0..p {
            let mut s = 0.0;
            for c in k..p {
                let w = rinv[c * p + k];
                s += w * w;
            }
            out[self.perm[k]] = s * self.scale[k] * self.scale[k];
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full(f: Factored) -> Qr {
        match f {
            Factored::FullRank(q) => q,
            Factored::Deficient(j) => panic!("unexpected rank deficiency at {j}"),
        }
    }

    #[test]
    fn solves_exact_system() {
        // y = 1 + 2 x exactly.
        let ones = [1.0; 4];
        let x = [0.0, 1.0, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|v| 1.0 + 2.0 * v).collect();
        let qr = full(Qr::factor(&[&ones, &x], 4));
        let (b, r) = qr.solve(&y);
        assert!((b[0] - 1.0).abs() < 1e-12 && (b[1] - 2.0).abs() < 1e-12);
        assert!(r.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn inverse_diagonal_matches_two_by_two() {
        let ones = [1.0; 3];
        let x = [1.0, 2.0, 4.0];
        // X'X = [[3, 7], [7, 21]], det = 14.
        let d = full(Qr::factor(&[&ones, &x], 3)).xtx_inv_diag();
        assert!((d[0] - 21.0 / 14.0).abs() < 1e-12);
        assert!((d[1] - 3.0 / 14.0).abs() < 1e-12);
    }

    #[test]
    fn detects_collinearity() {
        let a = [1.0, 2.0, 3.0, 5.0];
        let b = [2.0, 4.0, 6.0, 10.0];
        assert!(matches!(Qr::factor(&[&a, &b], 4), Factored::Deficient(_)));
        let zero = [0.0; 4];
        assert!(matches!(Qr::factor(&[&a, &zero], 4), Factored::Deficient(1)));
    }
}
