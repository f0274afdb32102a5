//! Hom complexes between matrix factorisations, their cohomology, null-homotopies,
//! homotopy inverses, minimal models and splitting of idempotents.

use crate::error::{Error, Result};
use crate::groebner::{solve_linear_over_ring, MVec, ModuleBasis};
use crate::matrix::{scalar_inverse, scalar_rank, PolyMatrix};
use crate::mf::{MatrixFactorisation, Morphism, Parity};
use crate::poly::{same_ring, Mono, Polynomial, Ring};
use crate::scalar::Scalar;

/// Cohomology beyond this many dimensions is treated as infinite.
pub const MAX_COHOMOLOGY_DIM: usize = 4000;

/// Morphism coordinates of one parity with the differential `δφ = d_Y φ - (-1)^{|φ|} φ d_X`.
#[derive(Clone, Debug)]
pub struct HomComplex {
    pub source: MatrixFactorisation,
    pub target: MatrixFactorisation,
    pub even_coords: Vec<(usize, usize)>,
    pub odd_coords: Vec<(usize, usize)>,
    /// `δ` on even morphisms, rows indexed by odd coordinates.
    pub even_differential: PolyMatrix,
    /// `δ` on odd morphisms, rows indexed by even coordinates.
    pub odd_differential: PolyMatrix,
}

fn coords(x: &MatrixFactorisation, y: &MatrixFactorisation, parity: Parity) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..y.rank() {
        for j in 0..x.rank() {
            let same = (i >= y.r0()) == (j >= x.r0());
            if same == (parity == Parity::Even) {
                out.push((i, j));
            }
        }
    }
    out
}

impl HomComplex {
    pub fn new(x: &MatrixFactorisation, y: &MatrixFactorisation) -> Result<HomComplex> {
        if !same_ring(&x.ring, &y.ring) {
            return Err(Error::RingMismatch(x.ring.describe(), y.ring.describe()));
        }
        // same variables, possibly different gradings
        let y = &if x.ring == y.ring { y.clone() } else { y.embed(&x.ring)? };
        let ring = x.ring.clone();
        let ec = coords(x, y, Parity::Even);
        let oc = coords(x, y, Parity::Odd);
        let dx = x.differential();
        let dy = y.differential();
        let build = |from: &[(usize, usize)], to: &[(usize, usize)], s: i64| -> PolyMatrix {
            let index: std::collections::HashMap<(usize, usize), usize> =
                to.iter().enumerate().map(|(k, c)| (*c, k)).collect();
            let mut m = PolyMatrix::zeros(&ring, to.len(), from.len());
            for (col, &(a, b)) in from.iter().enumerate() {
                for i in 0..y.rank() {
                    let e = dy.get(i, a);
                    if !e.is_zero() {
                        let r = index[&(i, b)];
                        m.set(r, col, m.get(r, col) + e);
                    }
                }
                for k in 0..x.rank() {
                    let e = dx.get(b, k);
                    if !e.is_zero() {
                        let r = index[&(a, k)];
                        let v = if s == 1 { m.get(r, col) - e } else { m.get(r, col) + e };
                        m.set(r, col, v);
                    }
                }
            }
            m
        };
        let de = build(&ec, &oc, 1);
        let dod = build(&oc, &ec, -1);
        Ok(HomComplex {
            source: x.clone(),
            target: y.clone(),
            even_coords: ec,
            odd_coords: oc,
            even_differential: de,
            odd_differential: dod,
        })
    }

    pub fn coords(&self, p: Parity) -> &[(usize, usize)] {
        match p {
            Parity::Even => &self.even_coords,
            Parity::Odd => &self.odd_coords,
        }
    }

    /// `δ` on morphisms of parity `p`.
    pub fn differential(&self, p: Parity) -> &PolyMatrix {
        match p {
            Parity::Even => &self.even_differential,
            Parity::Odd => &self.odd_differential,
        }
    }

    pub fn flatten(&self, m: &PolyMatrix, p: Parity) -> Vec<Polynomial> {
        self.coords(p).iter().map(|&(i, j)| m.get(i, j).clone()).collect()
    }

    pub fn unflatten(&self, v: &[Polynomial], p: Parity) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(&self.source.ring, self.target.rank(), self.source.rank());
        for (k, &(i, j)) in self.coords(p).iter().enumerate() {
            m.set(i, j, v[k].clone());
        }
        m
    }
}

fn syzygies(a: &PolyMatrix) -> Vec<MVec> {
    // Gröbner basis of the graph {(A e_j, e_j)}; elements with vanishing A-part give the kernel.
    let ring = a.ring();
    let (r, c) = (a.rows(), a.cols());
    let gens: Vec<MVec> = (0..c)
        .map(|j| {
            let mut col: Vec<Polynomial> = (0..r).map(|i| a.get(i, j).clone()).collect();
            for k in 0..c {
                col.push(if k == j { Polynomial::one(ring) } else { Polynomial::zero(ring) });
            }
            MVec::from_column(&col)
        })
        .collect();
    let mb = ModuleBasis::new(ring, r + c, gens, false);
    mb.groebner
        .into_iter()
        .filter(|v| v.lead().is_some_and(|t| t.0 >= r))
        .map(|v| MVec {
            terms: v.terms.into_iter().map(|(p, m, s)| (p - r, m, s)).collect(),
        })
        .collect()
}

/// Reduced row echelon rows of k-linear combinations of module vectors.
#[derive(Clone, Debug, Default)]
struct Echelon {
    rows: Vec<MVec>,
}

impl Echelon {
    /// Coefficients of `v` against the rows and the unreduced remainder.
    fn reduce(&self, v: &MVec) -> (Vec<Scalar>, MVec) {
        let mut v = v.clone();
        let mut c = Vec::with_capacity(self.rows.len());
        for r in &self.rows {
            let (p, m, _) = r.lead().unwrap();
            match v.coeff(*p, m).cloned() {
                Some(a) => {
                    v = v.combine(r, &a, &Mono::one(m.0.len()));
                    c.push(a);
                }
                None => c.push(Scalar::zero(r.terms[0].2.field())),
            }
        }
        (c, v)
    }

    fn insert(&mut self, v: &MVec) -> bool {
        let (_, v) = self.reduce(v);
        if v.is_zero() {
            return false;
        }
        let lc = v.lead().unwrap().2.invert().unwrap();
        let v = v.scale(&lc);
        let (p, m, _) = v.lead().unwrap().clone();
        for r in self.rows.iter_mut() {
            if let Some(a) = r.coeff(p, &m).cloned() {
                *r = r.combine(&v, &a, &Mono::one(m.0.len()));
            }
        }
        self.rows.push(v);
        true
    }
}

/// k-basis of a cohomology group `H^p(X, Y)`.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub complex: HomComplex,
    pub parity: Parity,
    image: ModuleBasis,
    echelon: Echelon,
}

fn mul_var(v: &MVec, n: usize, i: usize) -> MVec {
    let x = Mono::var(n, i, 1);
    MVec {
        terms: v.terms.iter().map(|(p, m, c)| (*p, m.mul(&x), c.clone())).collect(),
    }
}

impl Cohomology {
    pub fn compute(x: &MatrixFactorisation, y: &MatrixFactorisation, parity: Parity) -> Result<Cohomology> {
        let hc = HomComplex::new(x, y)?;
        if hc.source.potential != hc.target.potential {
            return Err(Error::InvalidMf("cohomology needs equal potentials".into()));
        }
        Cohomology::of_complex(hc, parity)
    }

    pub fn of_complex(hc: HomComplex, parity: Parity) -> Result<Cohomology> {
        let ring = hc.source.ring.clone();
        let other = match parity {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        };
        let image = ModuleBasis::from_columns(hc.differential(other), false);
        let kernel = syzygies(hc.differential(parity));
        let n = ring.nvars();
        let mut ech = Echelon::default();
        let mut queue: Vec<MVec> = kernel;
        while let Some(v) = queue.pop() {
            let (r, _) = image.reduce(&v);
            if r.is_zero() || !ech.insert(&r) {
                continue;
            }
            if ech.rows.len() > MAX_COHOMOLOGY_DIM {
                return Err(Error::NonIsolated("morphism space is infinite-dimensional".into()));
            }
            for i in 0..n {
                queue.push(mul_var(&r, n, i));
            }
        }
        // final rows are normal forms already; keep a canonical order
        ech.rows.sort_by(|a, b| {
            let (pa, ma, _) = a.lead().unwrap();
            let (pb, mb, _) = b.lead().unwrap();
            pa.cmp(pb).then_with(|| mb.cmp(ma))
        });
        Ok(Cohomology {
            complex: hc,
            parity,
            image,
            echelon: ech,
        })
    }

    pub fn dim(&self) -> usize {
        self.echelon.rows.len()
    }

    pub fn ring(&self) -> &Ring {
        &self.complex.source.ring
    }

    /// Cocycle representatives of the basis.
    pub fn basis(&self) -> Vec<Morphism> {
        let len = self.complex.coords(self.parity).len();
        self.echelon
            .rows
            .iter()
            .map(|r| {
                let v = r.to_column(self.ring(), len);
                Morphism {
                    source: self.complex.source.clone(),
                    target: self.complex.target.clone(),
                    parity: self.parity,
                    matrix: self.complex.unflatten(&v, self.parity),
                }
            })
            .collect()
    }

    /// Coordinates of the class of a cocycle in the basis.
    pub fn coordinates(&self, m: &PolyMatrix) -> Result<Vec<Scalar>> {
        let v = MVec::from_column(&self.complex.flatten(m, self.parity));
        let (r, _) = self.image.reduce(&v);
        let (c, rest) = self.echelon.reduce(&r);
        if !rest.is_zero() {
            return Err(Error::InvalidMf("morphism is not closed".into()));
        }
        Ok(c)
    }
}

/// `(dim H^0, dim H^1)` of `Hom(X, Y)`.
pub fn hom_dimensions(x: &MatrixFactorisation, y: &MatrixFactorisation) -> Result<(usize, usize)> {
    let e = Cohomology::compute(x, y, Parity::Even)?;
    let o = Cohomology::of_complex(e.complex.clone(), Parity::Odd)?;
    Ok((e.dim(), o.dim()))
}

/// How often `s` occurs as a direct summand of `x`, for `s` minimal with local `End(s)`.
/// `tr((g f)(0))` kills the radical and null-homotopic maps, so the rank of the pairing
/// `H^0(s, x) × H^0(x, s) -> k` counts the copies.
pub fn summand_multiplicity(s: &MatrixFactorisation, x: &MatrixFactorisation) -> Result<usize> {
    let ds = s.differential().constant_part();
    if ds.iter().flatten().any(|c| !c.is_zero()) {
        return Err(Error::Invalid("summand must be minimal".into()));
    }
    let into = Cohomology::compute(s, x, Parity::Even)?.basis();
    let back = Cohomology::compute(x, s, Parity::Even)?.basis();
    let mut rows = Vec::with_capacity(into.len());
    for f in &into {
        let mut row = Vec::with_capacity(back.len());
        for g in &back {
            let c = g.compose(f)?.matrix.constant_part();
            let mut t = Scalar::zero(s.ring.field());
            for (i, r) in c.iter().enumerate() {
                t = &t + &r[i];
            }
            row.push(t);
        }
        rows.push(row);
    }
    if rows.is_empty() || back.is_empty() {
        return Ok(0);
    }
    Ok(scalar_rank(&rows).0)
}

/// A homotopy `λ` with `d_Y λ - (-1)^{|λ|} λ d_X = φ`, if one exists.
pub fn is_null_homotopic(phi: &Morphism) -> Result<Option<Morphism>> {
    let hc = HomComplex::new(&phi.source, &phi.target)?;
    let lp = match phi.parity {
        Parity::Even => Parity::Odd,
        Parity::Odd => Parity::Even,
    };
    let b = hc.flatten(&phi.matrix, phi.parity);
    match solve_linear_over_ring(hc.differential(lp), &b)? {
        Some(sol) => Ok(Some(Morphism {
            source: phi.source.clone(),
            target: phi.target.clone(),
            parity: lp,
            matrix: hc.unflatten(&sol, lp),
        })),
        None => Ok(None),
    }
}

/// An even `ψ: Y -> X` with `φψ ≃ 1` and `ψφ ≃ 1`, found by solving one linear system over
/// the ring for `ψ` together with both homotopies.
pub fn homotopy_inverse(phi: &Morphism) -> Result<Option<Morphism>> {
    if phi.parity != Parity::Even {
        return Err(Error::Invalid("homotopy inverse of an odd morphism".into()));
    }
    let x = &phi.source;
    let y = &phi.target;
    let ring = x.ring.clone();
    let hyx = HomComplex::new(y, x)?;
    let hyy = HomComplex::new(y, y)?;
    let hxx = HomComplex::new(x, x)?;
    let ne = hyx.even_coords.len();
    let n1 = hyy.odd_coords.len();
    let n2 = hxx.odd_coords.len();
    // equations: δψ = 0; φψ - δλ1 = 1_Y; ψφ - δλ2 = 1_X
    let r0 = hyx.odd_coords.len();
    let r1 = hyy.even_coords.len();
    let r2 = hxx.even_coords.len();
    let mut a = PolyMatrix::zeros(&ring, r0 + r1 + r2, ne + n1 + n2);
    a.put(0, 0, &hyx.even_differential);
    for (col, &(i, j)) in hyx.even_coords.iter().enumerate() {
        // ψ = E_ij (X_i <- Y_j); φψ = φ[:, i] in column j; ψφ = φ[j, :] in row i
        for (r, &(p, q)) in hyy.even_coords.iter().enumerate() {
            if q == j {
                let e = phi.matrix.get(p, i);
                if !e.is_zero() {
                    a.set(r0 + r, col, a.get(r0 + r, col) + e);
                }
            }
        }
        for (r, &(p, q)) in hxx.even_coords.iter().enumerate() {
            if p == i {
                let e = phi.matrix.get(j, q);
                if !e.is_zero() {
                    a.set(r0 + r1 + r, col, a.get(r0 + r1 + r, col) + e);
                }
            }
        }
    }
    a.put(r0, ne, &hyy.odd_differential.neg());
    a.put(r0 + r1, ne + n1, &hxx.odd_differential.neg());
    let mut b = vec![Polynomial::zero(&ring); r0];
    b.extend(hyy.flatten(&PolyMatrix::identity(&ring, y.rank()), Parity::Even));
    b.extend(hxx.flatten(&PolyMatrix::identity(&ring, x.rank()), Parity::Even));
    Ok(solve_linear_over_ring(&a, &b)?.map(|sol| Morphism {
        source: y.clone(),
        target: x.clone(),
        parity: Parity::Even,
        matrix: hyx.unflatten(&sol[..ne], Parity::Even),
    }))
}

/// Result of stripping contractible summands: chain maps `σ: X -> M`, `τ: M -> X` with
/// `στ = 1` exactly and `τσ ≃ 1`.
#[derive(Clone, Debug)]
pub struct MinimalModel {
    pub mf: MatrixFactorisation,
    pub sigma: PolyMatrix,
    pub tau: PolyMatrix,
    /// False if some entry still has a nonzero constant term without being constant.
    pub fully_reduced: bool,
}

fn constant_pivot(m: &PolyMatrix) -> Option<(usize, usize)> {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let e = m.get(i, j);
            if e.is_constant() && !e.is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

fn without(n: usize, k: usize) -> Vec<usize> {
    (0..n).filter(|&i| i != k).collect()
}

/// One elimination step on a pivot `d0[i][j] = c`. Returns the reduced blocks and the
/// even/odd components of σ and τ.
fn eliminate(d0: &PolyMatrix, d1: &PolyMatrix, i: usize, j: usize) -> (PolyMatrix, PolyMatrix, [PolyMatrix; 4]) {
    let ring = d0.ring().clone();
    let (r1, r0) = (d0.rows(), d0.cols());
    let c = d0.get(i, j).constant_term();
    let cinv = c.invert().unwrap();
    let rows = without(r1, i);
    let cols = without(r0, j);
    let a = d0.submatrix(&rows, &[j]);
    let b = d0.submatrix(&[i], &cols);
    let ab = a.try_mul(&b).unwrap().scale(&cinv);
    let nd0 = d0.submatrix(&rows, &cols).try_sub(&ab).unwrap();
    let nd1 = d1.submatrix(&cols, &rows);
    // σ0 = rows X0' of identity; σ1 = [-a/c | I] in the original column order
    let mut s0 = PolyMatrix::zeros(&ring, r0 - 1, r0);
    for (k, &cidx) in cols.iter().enumerate() {
        s0.set(k, cidx, Polynomial::one(&ring));
    }
    let mut s1 = PolyMatrix::zeros(&ring, r1 - 1, r1);
    for (k, &ridx) in rows.iter().enumerate() {
        s1.set(k, ridx, Polynomial::one(&ring));
        s1.set(k, i, a.get(k, 0).scale(&cinv).neg());
    }
    // τ0 = [-b/c ; I], τ1 = [0 ; I]
    let mut t0 = PolyMatrix::zeros(&ring, r0, r0 - 1);
    for (k, &cidx) in cols.iter().enumerate() {
        t0.set(cidx, k, Polynomial::one(&ring));
        t0.set(j, k, b.get(0, k).scale(&cinv).neg());
    }
    let mut t1 = PolyMatrix::zeros(&ring, r1, r1 - 1);
    for (k, &ridx) in rows.iter().enumerate() {
        t1.set(ridx, k, Polynomial::one(&ring));
    }
    (nd0, nd1, [s0, s1, t0, t1])
}

/// Splits off contractible rank (1|1) summands at constant entries of the differential.
pub fn minimal_model(x: &MatrixFactorisation) -> Result<MinimalModel> {
    let ring = x.ring.clone();
    let mut d0 = x.d0.clone();
    let mut d1 = x.d1.clone();
    let mut sigma = PolyMatrix::identity(&ring, x.rank());
    let mut tau = PolyMatrix::identity(&ring, x.rank());
    let mut grading = x.grading.clone();
    loop {
        let r0 = d0.cols();
        let (s0, s1, t0, t1);
        let (drop_even, drop_odd);
        if let Some((i, j)) = constant_pivot(&d0) {
            let (nd0, nd1, [a, b, c, d]) = eliminate(&d0, &d1, i, j);
            d0 = nd0;
            d1 = nd1;
            (s0, s1, t0, t1) = (a, b, c, d);
            drop_even = j;
            drop_odd = i;
        } else if let Some((i, j)) = constant_pivot(&d1) {
            // same step on the shifted factorisation, then shift back
            let (nd0, nd1, [a, b, c, d]) = eliminate(&d1.neg(), &d0.neg(), i, j);
            d0 = nd1.neg();
            d1 = nd0.neg();
            (s0, s1, t0, t1) = (b, a, d, c);
            drop_even = i;
            drop_odd = j;
        } else {
            break;
        }
        let s = PolyMatrix::block_diag(&[&s0, &s1], &ring);
        let t = PolyMatrix::block_diag(&[&t0, &t1], &ring);
        sigma = s.try_mul(&sigma)?;
        tau = tau.try_mul(&t)?;
        if let Some(q) = grading.as_mut() {
            q.remove(r0 + drop_odd);
            q.remove(drop_even);
        }
    }
    let fully_reduced = d0
        .entries()
        .iter()
        .chain(d1.entries())
        .all(|e| e.constant_term().is_zero());
    let mut mf = MatrixFactorisation::new(x.potential.clone(), d0, d1)?;
    mf.split = x.split.clone();
    if let Some(q) = grading {
        mf = mf.with_grading(q)?;
    }
    Ok(MinimalModel {
        mf,
        sigma,
        tau,
        fully_reduced,
    })
}

/// Image of an idempotent with embedding `ξ` and projection `ϑ`, `ϑξ = 1`, `ξϑ ≃ e`.
#[derive(Clone, Debug)]
pub struct SplitIdempotent {
    pub mf: MatrixFactorisation,
    pub xi: PolyMatrix,
    pub theta: PolyMatrix,
}

/// m-adic order of a matrix (`None` for zero).
fn matrix_order(m: &PolyMatrix) -> Option<u32> {
    m.entries().iter().filter_map(|e| e.order()).min()
}

/// Newton iteration `e ↦ 3e² - 2e³` until `e² = e` exactly or the order bound is passed.
pub fn strictify(e: &PolyMatrix, max_order: u32) -> Result<PolyMatrix> {
    let mut e = e.clone();
    loop {
        let e2 = e.try_mul(&e)?;
        let defect = e2.try_sub(&e)?;
        match matrix_order(&defect) {
            None => return Ok(e),
            Some(0) => return Err(Error::Strictify("e² - e has a nonzero constant term".into())),
            Some(k) if k > max_order => {
                return Err(Error::Strictify(format!(
                    "e² - e still nonzero beyond m-adic order {max_order}"
                )))
            }
            _ => {}
        }
        let e3 = e2.try_mul(&e)?;
        e = e2.scale(&Scalar::from_int(e.ring().field(), 3)).try_sub(&e3.scale(&Scalar::from_int(e.ring().field(), 2)))?;
    }
}

/// Inverse of a square polynomial matrix whose determinant is a nonzero constant.
pub fn exact_inverse(m: &PolyMatrix) -> Result<PolyMatrix> {
    let n = m.rows();
    let ring = m.ring().clone();
    let det = m.det()?;
    if !det.is_constant() || det.is_zero() {
        return Err(Error::Strictify("matrix is not invertible over the polynomial ring".into()));
    }
    let dinv = det.constant_term().invert()?;
    let mut inv = PolyMatrix::zeros(&ring, n, n);
    for i in 0..n {
        for j in 0..n {
            let minor = m.submatrix(&without(n, j), &without(n, i)).det()?;
            let v = if (i + j) % 2 == 0 { minor } else { minor.neg() };
            inv.set(i, j, v.scale(&dinv));
        }
    }
    Ok(inv)
}

/// The `k`-subsets of `lo..hi` in lexicographic order, at most `cap` of them.
fn subsets(lo: usize, hi: usize, k: usize, cap: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (lo..lo + k).collect();
    if lo + k > hi {
        return out;
    }
    loop {
        out.push(cur.clone());
        if out.len() >= cap {
            return out;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < hi - (k - i) {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Splits an even strict idempotent chain map `e` of `x` (entries of `d` in the maximal ideal).
pub fn split_strict(x: &MatrixFactorisation, e: &PolyMatrix) -> Result<SplitIdempotent> {
    let (r0, r) = (x.r0(), x.rank());
    let cp = e.constant_part();
    // columns J from e(0); rows I with e(0)[I, J] invertible, preferring a minor whose
    // determinant is a constant (a local unit need not be invertible over the ring)
    let block = |lo: usize, hi: usize| -> Result<(Vec<usize>, Vec<usize>)> {
        let sub: Vec<Vec<Scalar>> = (lo..hi).map(|i| (lo..hi).map(|j| cp[i][j].clone()).collect()).collect();
        let (k, cols) = scalar_rank(&sub);
        let cols: Vec<usize> = cols.into_iter().map(|c| c + lo).collect();
        let tr: Vec<Vec<Scalar>> = (0..sub.len()).map(|j| sub.iter().map(|row| row[j].clone()).collect()).collect();
        let first: Vec<usize> = scalar_rank(&tr).1.into_iter().map(|c| c + lo).collect();
        for rows in subsets(lo, hi, k, 4096) {
            let minor: Vec<Vec<Scalar>> = rows.iter().map(|&i| cols.iter().map(|&j| cp[i][j].clone()).collect()).collect();
            if scalar_rank(&minor).0 == k && e.submatrix(&rows, &cols).det()?.is_constant() {
                return Ok((rows, cols));
            }
        }
        Ok((first, cols))
    };
    let (i0, j0) = block(0, r0)?;
    let (i1, j1) = block(r0, r)?;
    let rows_i: Vec<usize> = i0.iter().chain(&i1).copied().collect();
    let cols_j: Vec<usize> = j0.iter().chain(&j1).copied().collect();
    let all: Vec<usize> = (0..r).collect();
    let xi = e.submatrix(&all, &cols_j);
    let square = e.submatrix(&rows_i, &cols_j);
    let inv = exact_inverse(&square)?;
    let theta = inv.try_mul(&e.submatrix(&rows_i, &all))?;
    let d = x.differential();
    let dn = theta.try_mul(&d)?.try_mul(&xi)?;
    let k0 = j0.len();
    let d1 = dn.block(0, k0, k0, j1.len());
    let d0 = dn.block(k0, 0, j1.len(), k0);
    let mut mf = MatrixFactorisation::new(x.potential.clone(), d0, d1)?;
    mf.split = x.split.clone();
    if let Some(q) = &x.grading {
        let nq: Vec<_> = cols_j.iter().map(|&k| q[k].clone()).collect();
        mf = mf.with_grading(nq)?;
    }
    Ok(SplitIdempotent { mf, xi, theta })
}

/// Image of an idempotent-up-to-homotopy `e`: minimal model, Newton strictification, split.
pub fn split_idempotent(x: &MatrixFactorisation, e: &Morphism, max_order: u32) -> Result<SplitIdempotent> {
    if e.parity != Parity::Even {
        return Err(Error::Invalid("idempotent must be even".into()));
    }
    let mm = minimal_model(x)?;
    let em = mm.sigma.try_mul(&e.matrix)?.try_mul(&mm.tau)?;
    let es = strictify(&em, max_order)?;
    let sp = split_strict(&mm.mf, &es)?;
    Ok(SplitIdempotent {
        mf: sp.mf,
        xi: mm.tau.try_mul(&sp.xi)?,
        theta: sp.theta.try_mul(&mm.sigma)?,
    })
}

/// Null-homotopy check of `a - b` for two parallel morphisms.
pub fn homotopic(a: &Morphism, b: &Morphism) -> Result<bool> {
    let diff = Morphism {
        source: a.source.clone(),
        target: a.target.clone(),
        parity: a.parity,
        matrix: a.matrix.try_sub(&b.matrix)?,
    };
    Ok(is_null_homotopic(&diff)?.is_some())
}

/// Default m-adic bound for strictification: twice the sum of the exponents `N_i`
/// with `x_i^{N_i}` in the Jacobian ideal of `w`.
pub fn default_strictify_order(w: &Polynomial) -> Result<u32> {
    let ring = w.ring();
    if ring.nvars() == 0 {
        return Ok(2);
    }
    let jac: Vec<Polynomial> = (0..ring.nvars()).map(|i| w.partial_derivative(i)).collect();
    let ib = crate::groebner::buchberger(&jac)?;
    let (n, _) = ib.lift_monomial_powers()?;
    Ok(2 * n.iter().sum::<u32>().max(1))
}

pub fn scalar_matrix_inverse(m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    scalar_inverse(m)
}
