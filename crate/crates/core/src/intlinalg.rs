//! Exact integer lattices: column Hermite normal form and membership.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix in row-major order.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|i| (0..self.cols).map(|j| self[(i, j)].to_string()).collect()).collect();
        write!(f, "IntMatrix{rows:?}")
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: row.len() });
            }
            entries.extend(row.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix { rows: rows.len(), cols, entries })
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch { expected: rows, got: c.len() });
            }
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let p = a * &other[(k, j)];
                    out[(i, j)] += p;
                }
            }
        }
        Ok(out)
    }

    /// Fraction-free (Bareiss) determinant of a square matrix.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        for j in 0..n {
                            a.entries.swap(k * n + j, i * n + j);
                        }
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * &a[(n - 1, n - 1)])
    }

    /// `col[dst] -= q * col[src]`
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let d = &self[(i, src)] * q;
            self[(i, dst)] -= d;
        }
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn col_negate(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

/// Column Hermite normal form: returns `(hnf, transform)` with
/// `hnf = m * transform` and `transform` unimodular.
///
/// The nonzero columns of `hnf` come first; column `j` has its first nonzero
/// entry (the pivot) in row `p_j` with `p_0 < p_1 < ...`, the pivot is positive
/// and the entries left of it in row `p_j` lie in `[0, pivot)`.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut t = IntMatrix::identity(m.cols);
    let mut k = 0;
    for i in 0..m.rows {
        if k == m.cols {
            break;
        }
        loop {
            let best = (k..h.cols)
                .filter(|&j| !h[(i, j)].is_zero())
                .min_by(|&a, &b| h[(i, a)].abs().cmp(&h[(i, b)].abs()).then(a.cmp(&b)));
            let Some(best) = best else { break };
            h.col_swap(k, best);
            t.col_swap(k, best);
            let mut done = true;
            for j in k + 1..h.cols {
                if h[(i, j)].is_zero() {
                    continue;
                }
                let q = h[(i, j)].div_floor(&h[(i, k)]);
                h.col_axpy(j, k, &q);
                t.col_axpy(j, k, &q);
                if !h[(i, j)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(i, k)].is_zero() {
            continue;
        }
        if h[(i, k)].is_negative() {
            h.col_negate(k);
            t.col_negate(k);
        }
        for j in 0..k {
            let q = h[(i, j)].div_floor(&h[(i, k)]);
            h.col_axpy(j, k, &q);
            t.col_axpy(j, k, &q);
        }
        k += 1;
    }
    (h, t)
}

/// Integer lattice in `Z^n` together with per-coordinate moduli: a coordinate
/// with modulus `m > 0` is read in `Z/m`, encoded by the relation vector
/// `m * e_i` joined to the generators before normalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    dim: usize,
    moduli: Vec<u64>,
    /// Generators as supplied, followed by the modulus relation vectors.
    generators: Vec<Vec<BigInt>>,
    hnf: IntMatrix,
    transform: IntMatrix,
    pivots: Vec<usize>,
}

impl LatticeBasis {
    pub fn new(generators: &[Vec<BigInt>], moduli: &[u64]) -> Result<Self> {
        let dim = moduli.len();
        let mut gens: Vec<Vec<BigInt>> = Vec::with_capacity(generators.len() + dim);
        for g in generators {
            if g.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: g.len() });
            }
            gens.push(g.clone());
        }
        for (i, &m) in moduli.iter().enumerate() {
            if m > 0 {
                let mut e = vec![BigInt::zero(); dim];
                e[i] = BigInt::from(m);
                gens.push(e);
            }
        }
        let mat = IntMatrix::from_columns(dim, &gens)?;
        let (hnf, transform) = hermite_normal_form(&mat);
        let mut pivots = Vec::new();
        for j in 0..hnf.cols {
            match (0..dim).find(|&i| !hnf[(i, j)].is_zero()) {
                Some(p) => pivots.push(p),
                None => break,
            }
        }
        Ok(LatticeBasis { dim, moduli: moduli.to_vec(), generators: gens, hnf, transform, pivots })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    /// The supplied generators followed by the modulus relation vectors.
    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    /// The Hermite basis vectors.
    pub fn basis(&self) -> Vec<Vec<BigInt>> {
        (0..self.rank()).map(|j| self.hnf.column(j)).collect()
    }

    /// Coefficients `q` over the Hermite basis and the residual left after
    /// back-substitution.
    fn back_substitute(&self, x: &[BigInt], floor: bool) -> (Vec<BigInt>, Vec<BigInt>) {
        let mut r = x.to_vec();
        let mut q = Vec::with_capacity(self.rank());
        for (j, &p) in self.pivots.iter().enumerate() {
            let piv = &self.hnf[(p, j)];
            let c = if floor { r[p].div_floor(piv) } else { r[p].clone() / piv };
            if !c.is_zero() {
                for (i, ri) in r.iter_mut().enumerate() {
                    *ri -= &c * &self.hnf[(i, j)];
                }
            }
            q.push(c);
        }
        (q, r)
    }

    fn check_dim(&self, x: &[BigInt]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        Ok(())
    }

    pub fn contains(&self, x: &[BigInt]) -> Result<bool> {
        Ok(self.certificate(x)?.is_some())
    }

    /// Coefficients over [`generators`](Self::generators) reproducing `x`, if
    /// `x` lies in the lattice.
    pub fn certificate(&self, x: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        self.check_dim(x)?;
        let (q, r) = self.back_substitute(x, false);
        if r.iter().any(|v| !v.is_zero()) {
            return Ok(None);
        }
        let n = self.generators.len();
        let mut coeffs = vec![BigInt::zero(); n];
        for (j, qj) in q.iter().enumerate() {
            if qj.is_zero() {
                continue;
            }
            for (i, c) in coeffs.iter_mut().enumerate() {
                *c += &self.transform[(i, j)] * qj;
            }
        }
        Ok(Some(coeffs))
    }

    /// Canonical coset representative of `x`: every pivot coordinate reduced
    /// into `[0, pivot)`. Two vectors are congruent modulo the lattice iff
    /// their reductions agree.
    pub fn reduce(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        self.check_dim(x)?;
        Ok(self.back_substitute(x, true).1)
    }
}

/// Membership of `x` in the lattice spanned by `basis` and its modulus relations.
pub fn lattice_membership(x: &[BigInt], basis: &LatticeBasis) -> Result<bool> {
    basis.contains(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn mat(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn trivial_matrices() {
        let id = IntMatrix::identity(3);
        assert_eq!(hermite_normal_form(&id).0, id);
        let z = IntMatrix::zeros(2, 3);
        assert_eq!(hermite_normal_form(&z).0, z);
    }

    #[test]
    fn two_by_two_example() {
        let m = mat(&[vec![2, 4], vec![6, 8]]);
        let (h, t) = hermite_normal_form(&m);
        assert_eq!(h, mat(&[vec![2, 0], vec![2, 4]]));
        assert_eq!(m.mul(&t).unwrap(), h);
        assert_eq!(t.determinant().unwrap().abs(), BigInt::one());
    }

    #[test]
    fn membership_examples() {
        let l = LatticeBasis::new(&[v(&[2])], &[0]).unwrap();
        assert!(l.contains(&v(&[4])).unwrap());
        assert!(!l.contains(&v(&[1])).unwrap());
        let l = LatticeBasis::new(&[v(&[3])], &[2]).unwrap();
        assert!(l.contains(&v(&[1])).unwrap());
        let cert = l.certificate(&v(&[1])).unwrap().unwrap();
        let rebuilt = &cert[0] * 3 + &cert[1] * 2;
        assert_eq!(rebuilt, BigInt::one());
        assert_eq!(l.contains(&v(&[1, 2])).unwrap_err(), Error::DimensionMismatch { expected: 1, got: 2 });
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(mat(&[vec![2, 4], vec![6, 8]]).determinant().unwrap(), BigInt::from(-8));
        assert_eq!(mat(&[vec![0, 1], vec![1, 0]]).determinant().unwrap(), BigInt::from(-1));
        assert_eq!(mat(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]).determinant().unwrap(), BigInt::from(-3));
    }

    #[test]
    fn coset_reduction_is_canonical() {
        let l = LatticeBasis::new(&[v(&[2, 1]), v(&[0, 3])], &[0, 0]).unwrap();
        let a = l.reduce(&v(&[5, 7])).unwrap();
        let b = l.reduce(&v(&[5 + 2 * 3, 7 + 3 - 6])).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn hnf_invariants(entries in prop::collection::vec(-6i64..=6, 12)) {
            let rows: Vec<Vec<i64>> = entries.chunks(4).map(|c| c.to_vec()).collect();
            let m = mat(&rows);
            let (h, t) = hermite_normal_form(&m);
            prop_assert_eq!(m.mul(&t).unwrap(), h.clone());
            prop_assert_eq!(t.determinant().unwrap().abs(), BigInt::one());
            let (h2, _) = hermite_normal_form(&h);
            prop_assert_eq!(h2, h);
        }
    }
}
