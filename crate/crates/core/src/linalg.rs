//! Small dense helpers for the two-dimensional subspace spanned by the user
//! and eavesdropper effective channels.

use crate::model::{CMatrix, CVector, C64};

/// Orthonormal basis of `span{a, b}`, padded with canonical directions when
/// the span is degenerate, of dimension `min(2, n)`.
#[derive(Debug, Clone)]
pub(crate) struct PairBasis {
    columns: Vec<CVector>,
}

impl PairBasis {
    pub(crate) fn new(a: &CVector, b: &CVector) -> Self {
        let n = a.len();
        let dim = n.min(2);
        let mut columns: Vec<CVector> = Vec::with_capacity(dim);
        let canonical = (0..n).map(|k| {
            let mut e = CVector::zeros(n);
            e[k] = C64::new(1.0, 0.0);
            e
        });
        for cand in [a.clone(), b.clone()].into_iter().chain(canonical) {
            if columns.len() == dim {
                break;
            }
            let reference = cand.norm();
            if reference == 0.0 {
                continue;
            }
            let mut v = cand;
            // two Gram-Schmidt passes
            for _ in 0..2 {
                for q in &columns {
                    let proj = q.dotc(&v);
                    v -= q * proj;
                }
            }
            let norm = v.norm();
            if norm > 1e-10 * reference {
                columns.push(v / C64::from(norm));
            }
        }
        PairBasis { columns }
    }

    pub(crate) fn dim(&self) -> usize {
        self.columns.len()
    }

    /// Coordinates `E^H v`.
    pub(crate) fn project(&self, v: &CVector) -> Vec<C64> {
        self.columns.iter().map(|q| q.dotc(v)).collect()
    }

    /// `E c` for reduced coordinates `c`.
    pub(crate) fn lift(&self, coords: &[C64]) -> CVector {
        let n = self.columns[0].len();
        let mut out = CVector::zeros(n);
        for (q, &c) in self.columns.iter().zip(coords) {
            out += q * c;
        }
        out
    }
}

/// Hermitian 2x2 matrix `[[p, r], [conj r, q]]`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Herm2 {
    pub p: f64,
    pub q: f64,
    pub r: C64,
}

impl Herm2 {
    /// `x x^H` scaled by `s`.
    pub(crate) fn outer(x: [C64; 2], s: f64) -> Self {
        Herm2 {
            p: s * x[0].norm_sqr(),
            q: s * x[1].norm_sqr(),
            r: x[0] * x[1].conj() * s,
        }
    }

    pub(crate) fn identity() -> Self {
        Herm2 { p: 1.0, q: 1.0, r: C64::new(0.0, 0.0) }
    }

    pub(crate) fn add(self, o: Herm2) -> Self {
        Herm2 { p: self.p + o.p, q: self.q + o.q, r: self.r + o.r }
    }

    pub(crate) fn scale(self, s: f64) -> Self {
        Herm2 { p: self.p * s, q: self.q * s, r: self.r * s }
    }

    pub(crate) fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        [self.r * v[1] + v[0] * self.p, self.r.conj() * v[0] + v[1] * self.q]
    }

    /// Largest eigenvalue and a unit eigenvector for it.
    pub(crate) fn top_eigen(&self) -> (f64, [C64; 2]) {
        let mean = 0.5 * (self.p + self.q);
        let half_gap = 0.5 * (self.p - self.q);
        let radius = half_gap.hypot(self.r.norm());
        let lambda = mean + radius;
        if self.r.norm() == 0.0 {
            let v = if self.p >= self.q {
                [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
            } else {
                [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]
            };
            return (lambda, v);
        }
        // two algebraically equivalent eigenvector forms; keep the better
        // conditioned one
        let v1 = [self.r, C64::from(lambda - self.p)];
        let v2 = [C64::from(lambda - self.q), self.r.conj()];
        let n1 = (v1[0].norm_sqr() + v1[1].norm_sqr()).sqrt();
        let n2 = (v2[0].norm_sqr() + v2[1].norm_sqr()).sqrt();
        let (v, n) = if n1 >= n2 { (v1, n1) } else { (v2, n2) };
        (lambda, [v[0] / n, v[1] / n])
    }
}

/// `v v^H` as a dense matrix scaled by `s`.
pub(crate) fn scaled_outer(v: &CVector, s: f64) -> CMatrix {
    v * v.adjoint() * C64::from(s)
}
