//! Dense matrices of polynomials.

use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{same_ring, Polynomial, Ring};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix {
            ring: ring.clone(),
            rows,
            cols,
            data: vec![Polynomial::zero(ring); rows * cols],
        }
    }

    pub fn identity(ring: &Ring, n: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, Polynomial::one(ring));
        }
        m
    }

    pub fn scalar_identity(ring: &Ring, n: usize, p: &Polynomial) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, p.clone());
        }
        m
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<Polynomial>>) -> Result<PolyMatrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Shape("ragged rows".into()));
            }
            for p in row {
                if !same_ring(p.ring(), ring) {
                    return Err(Error::RingMismatch(p.ring().describe(), ring.describe()));
                }
                data.push(p);
            }
        }
        Ok(PolyMatrix {
            ring: ring.clone(),
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn parse(ring: &Ring, rows: &[Vec<String>]) -> Result<PolyMatrix> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| Polynomial::parse(ring, s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if parsed.is_empty() {
            return Ok(PolyMatrix::zeros(ring, 0, 0));
        }
        PolyMatrix::from_rows(ring, parsed)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        self.data[i * self.cols + j] = p;
    }
    pub fn entries(&self) -> &[Polynomial] {
        &self.data
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|p| p.is_zero())
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> PolyMatrix {
        let data: Vec<Polynomial> = self.data.iter().map(f).collect();
        let ring = data.first().map_or(self.ring.clone(), |p| p.ring().clone());
        PolyMatrix {
            ring,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn try_map(&self, target: &Ring, f: impl Fn(&Polynomial) -> Result<Polynomial>) -> Result<PolyMatrix> {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix {
            ring: target.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn embed(&self, target: &Ring) -> Result<PolyMatrix> {
        self.try_map(target, |p| p.embed(target))
    }

    pub fn try_mul(&self, o: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != o.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        if !same_ring(&self.ring, &o.ring) {
            return Err(Error::RingMismatch(self.ring.describe(), o.ring.describe()));
        }
        let mut out = PolyMatrix::zeros(&self.ring, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, o: &PolyMatrix) -> Result<PolyMatrix> {
        self.same_shape(o)?;
        Ok(PolyMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, o: &PolyMatrix) -> Result<PolyMatrix> {
        self.same_shape(o)?;
        Ok(PolyMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        })
    }

    fn same_shape(&self, o: &PolyMatrix) -> Result<()> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        if !same_ring(&self.ring, &o.ring) {
            return Err(Error::RingMismatch(self.ring.describe(), o.ring.describe()));
        }
        Ok(())
    }

    pub fn neg(&self) -> PolyMatrix {
        self.map(|p| p.neg())
    }

    pub fn scale(&self, c: &Scalar) -> PolyMatrix {
        self.map(|p| p.scale(c))
    }

    pub fn mul_poly(&self, q: &Polynomial) -> PolyMatrix {
        self.map(|p| p * q)
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(&self.ring, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> PolyMatrix {
        let rows: Vec<usize> = (r0..r0 + nr).collect();
        let cols: Vec<usize> = (c0..c0 + nc).collect();
        self.submatrix(&rows, &cols)
    }

    pub fn put(&mut self, r0: usize, c0: usize, m: &PolyMatrix) {
        for i in 0..m.rows {
            for j in 0..m.cols {
                self.set(r0 + i, c0 + j, m.get(i, j).clone());
            }
        }
    }

    /// `[[a, b], [c, d]]` from four blocks.
    pub fn from_blocks(a: &PolyMatrix, b: &PolyMatrix, c: &PolyMatrix, d: &PolyMatrix) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(&a.ring, a.rows + c.rows, a.cols + b.cols);
        out.put(0, 0, a);
        out.put(0, a.cols, b);
        out.put(a.rows, 0, c);
        out.put(a.rows, a.cols, d);
        out
    }

    pub fn block_diag(blocks: &[&PolyMatrix], ring: &Ring) -> PolyMatrix {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = PolyMatrix::zeros(ring, r, c);
        let (mut i, mut j) = (0, 0);
        for b in blocks {
            out.put(i, j, b);
            i += b.rows;
            j += b.cols;
        }
        out
    }

    /// Kronecker product; row index `i*o.rows + k`.
    pub fn kron(&self, o: &PolyMatrix) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(&self.ring, self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        let b = o.get(k, l);
                        if !b.is_zero() {
                            out.set(i * o.rows + k, j * o.cols + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Polynomial {
        let mut t = Polynomial::zero(&self.ring);
        for i in 0..self.rows.min(self.cols) {
            t = &t + self.get(i, i);
        }
        t
    }

    /// Matrix of constant terms.
    pub fn constant_part(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).constant_term()).collect())
            .collect()
    }

    /// Determinant by cofactor expansion along rows with memoized minors.
    pub fn det(&self) -> Result<Polynomial> {
        if self.rows != self.cols {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Polynomial::one(&self.ring));
        }
        // dynamic programming over column subsets: minors of the last k rows
        let mut prev: std::collections::HashMap<u64, Polynomial> = std::collections::HashMap::new();
        prev.insert(0, Polynomial::one(&self.ring));
        for k in 1..=n {
            let row = n - k;
            let mut cur = std::collections::HashMap::new();
            for (&mask, minor) in &prev {
                if minor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    if mask & (1 << j) != 0 {
                        continue;
                    }
                    let a = self.get(row, j);
                    if a.is_zero() {
                        continue;
                    }
                    // sign: number of chosen columns left of j
                    let left = (mask & ((1u64 << j) - 1)).count_ones();
                    let term = a * minor;
                    let term = if left % 2 == 1 { term.neg() } else { term };
                    let nm = mask | (1 << j);
                    let e = cur.entry(nm).or_insert_with(|| Polynomial::zero(&self.ring));
                    *e = &*e + &term;
                }
            }
            prev = cur;
        }
        Ok(prev
            .remove(&((1u64 << n) - 1))
            .unwrap_or_else(|| Polynomial::zero(&self.ring)))
    }

    /// Inverse of a matrix whose constant part is invertible and whose Neumann series
    /// terminates (the graded situation). `max_terms` bounds the series.
    pub fn inverse_local(&self, max_terms: usize) -> Result<PolyMatrix> {
        if self.rows != self.cols {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let c = self.constant_part();
        let cinv = scalar_inverse(&c).ok_or_else(|| Error::Invalid("constant part is singular".into()))?;
        let cinv_m = PolyMatrix::from_scalars(&self.ring, &cinv);
        // A = C (1 + C^{-1} N), inverse = sum (-C^{-1}N)^k C^{-1}
        let nilp = cinv_m.try_mul(self)?.try_sub(&PolyMatrix::identity(&self.ring, n))?;
        let mut term = cinv_m.clone();
        let mut acc = cinv_m.clone();
        let neg_n = nilp.neg();
        for _ in 0..max_terms {
            term = neg_n.try_mul(&term)?;
            if term.is_zero() {
                let check = self.try_mul(&acc)?;
                if check != PolyMatrix::identity(&self.ring, n) {
                    return Err(Error::Internal("local inverse check failed".into()));
                }
                return Ok(acc);
            }
            acc = acc.try_add(&term)?;
        }
        Err(Error::Invalid("matrix is not invertible over the polynomial ring".into()))
    }

    pub fn from_scalars(ring: &Ring, m: &[Vec<Scalar>]) -> PolyMatrix {
        let rows = m.len();
        let cols = m.first().map_or(0, |r| r.len());
        let mut out = PolyMatrix::zeros(ring, rows, cols);
        for (i, r) in m.iter().enumerate() {
            for (j, s) in r.iter().enumerate() {
                out.set(i, j, Polynomial::constant(ring, s.clone()));
            }
        }
        out
    }

    /// Smallest m-adic order among nonzero entries.
    pub fn order(&self) -> Option<u32> {
        self.data.iter().filter_map(|p| p.order()).min()
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Gauss-Jordan inverse over the field.
pub fn scalar_inverse(m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    if n == 0 {
        return Some(vec![]);
    }
    let f = m[0][0].field();
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut inv: Vec<Vec<Scalar>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Scalar::one(f) } else { Scalar::zero(f) }).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let pinv = a[col][col].invert().ok()?;
        for j in 0..n {
            a[col][j] = &a[col][j] * &pinv;
            inv[col][j] = &inv[col][j] * &pinv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for j in 0..n {
                    let t = &factor * &a[col][j];
                    a[r][j] = &a[r][j] - &t;
                    let t = &factor * &inv[col][j];
                    inv[r][j] = &inv[r][j] - &t;
                }
            }
        }
    }
    Some(inv)
}

/// Row echelon rank of a scalar matrix; also returns pivot columns.
pub fn scalar_rank(m: &[Vec<Scalar>]) -> (usize, Vec<usize>) {
    if m.is_empty() {
        return (0, vec![]);
    }
    let mut a = m.to_vec();
    let rows = a.len();
    let cols = a[0].len();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pinv = a[r][c].invert().unwrap();
        for j in c..cols {
            a[r][j] = &a[r][j] * &pinv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let factor = a[i][c].clone();
                for j in c..cols {
                    let t = &factor * &a[r][j];
                    a[i][j] = &a[i][j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    (r, pivots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::RingSpec;
    use crate::scalar::FieldSpec;

    #[test]
    fn det_small() {
        let r = RingSpec::new(FieldSpec::Rationals, &["x", "y"]).unwrap();
        let m = PolyMatrix::parse(
            &r,
            &[vec!["2x".into(), "-y".into()], vec!["2y".into(), "3x".into()]],
        )
        .unwrap();
        assert_eq!(m.det().unwrap(), Polynomial::parse(&r, "6x^2 + 2y^2").unwrap());
        let i3 = PolyMatrix::identity(&r, 3);
        assert!(i3.det().unwrap().is_one());
    }

    #[test]
    fn local_inverse() {
        let r = RingSpec::new(FieldSpec::Rationals, &["x"]).unwrap();
        let m = PolyMatrix::parse(&r, &[vec!["1".into(), "x".into()], vec!["0".into(), "2".into()]]).unwrap();
        let inv = m.inverse_local(10).unwrap();
        assert_eq!(m.try_mul(&inv).unwrap(), PolyMatrix::identity(&r, 2));
        let bad = PolyMatrix::parse(&r, &[vec!["1 + x".into()]]).unwrap();
        assert!(bad.inverse_local(10).is_err());
    }
}
