//! Matrix factorisations, morphisms between them and the basic constructors.
//!
//! A factorisation of rank (r0|r1) is stored as the blocks `d0: X0 -> X1` (r1 x r0) and
//! `d1: X1 -> X0` (r0 x r1); the full differential is `[[0, d1], [d0, 0]]` with the even
//! basis first.

use std::collections::HashMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::poly::{divided_difference, fmt_rational, parse_rational, same_ring, to_primed, Polynomial, Ring, RingSpec};
use crate::scalar::{FieldSpec, Scalar};

/// Source/target variables of a defect X: (R, W) -> (S, V), a factorisation of V - W.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarSplit {
    pub target: Vec<String>,
    pub source: Vec<String>,
}

impl VarSplit {
    pub fn swapped(&self) -> VarSplit {
        VarSplit {
            target: self.source.clone(),
            source: self.target.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFactorisation {
    pub ring: Ring,
    pub potential: Polynomial,
    pub d0: PolyMatrix,
    pub d1: PolyMatrix,
    /// One degree per basis element, even basis first.
    pub grading: Option<Vec<BigRational>>,
    pub split: Option<VarSplit>,
}

impl MatrixFactorisation {
    /// Validating constructor: `d1 d0 = W` and `d0 d1 = W`.
    pub fn new(potential: Polynomial, d0: PolyMatrix, d1: PolyMatrix) -> Result<MatrixFactorisation> {
        let ring = potential.ring().clone();
        if !same_ring(d0.ring(), &ring) || !same_ring(d1.ring(), &ring) {
            return Err(Error::RingMismatch(d0.ring().describe(), ring.describe()));
        }
        let (r1, r0) = (d0.rows(), d0.cols());
        if d1.rows() != r0 || d1.cols() != r1 {
            return Err(Error::Shape(format!(
                "d0 is {}x{}, d1 is {}x{}",
                r1,
                r0,
                d1.rows(),
                d1.cols()
            )));
        }
        let x = MatrixFactorisation {
            ring,
            potential,
            d0,
            d1,
            grading: None,
            split: None,
        };
        x.validate()?;
        Ok(x)
    }

    pub fn validate(&self) -> Result<()> {
        let w0 = PolyMatrix::scalar_identity(&self.ring, self.r0(), &self.potential);
        let w1 = PolyMatrix::scalar_identity(&self.ring, self.r1(), &self.potential);
        if self.d1.try_mul(&self.d0)? != w0 || self.d0.try_mul(&self.d1)? != w1 {
            return Err(Error::InvalidMf("d^2 differs from W times the identity".into()));
        }
        Ok(())
    }

    pub fn with_split(mut self, split: VarSplit) -> Result<Self> {
        for v in split.target.iter().chain(&split.source) {
            if self.ring.index_of(v).is_none() {
                return Err(Error::Invalid(format!("split names unknown variable {v}")));
            }
        }
        self.split = Some(split);
        Ok(self)
    }

    /// Attaches a grading and checks that `d` is homogeneous of degree 1.
    pub fn with_grading(mut self, q: Vec<BigRational>) -> Result<Self> {
        if q.len() != self.rank() {
            return Err(Error::Shape("grading length differs from rank".into()));
        }
        self.grading = Some(q);
        self.check_grading()?;
        Ok(self)
    }

    pub fn check_grading(&self) -> Result<()> {
        let q = match &self.grading {
            Some(q) => q,
            None => return Ok(()),
        };
        self.ring.degrees().ok_or(Error::Ungraded)?;
        let two = BigRational::from_integer(2.into());
        match self.potential.homogeneity()? {
            Some(d) if d == two => {}
            None if self.potential.is_zero() => {}
            _ => return Err(Error::InvalidMf("potential is not homogeneous of degree 2".into())),
        }
        let d = self.differential();
        let one = BigRational::from_integer(1.into());
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let e = d.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let want = &q[j] - &q[i] + &one;
                match e.homogeneity()? {
                    Some(h) if h == want => {}
                    _ => {
                        return Err(Error::InvalidMf(format!(
                            "entry ({i},{j}) = {e} is not of degree {}",
                            fmt_rational(&want)
                        )))
                    }
                }
            }
        }
        Ok(())
    }

    pub fn r0(&self) -> usize {
        self.d0.cols()
    }
    pub fn r1(&self) -> usize {
        self.d0.rows()
    }
    pub fn rank(&self) -> usize {
        self.r0() + self.r1()
    }

    /// `[[0, d1], [d0, 0]]`.
    pub fn differential(&self) -> PolyMatrix {
        let (r0, r1) = (self.r0(), self.r1());
        let mut d = PolyMatrix::zeros(&self.ring, r0 + r1, r0 + r1);
        d.put(0, r0, &self.d1);
        d.put(r0, 0, &self.d0);
        d
    }

    /// The grading operator `diag(1, .., 1, -1, .., -1)`.
    pub fn gamma(&self) -> PolyMatrix {
        let mut g = PolyMatrix::identity(&self.ring, self.rank());
        for i in self.r0()..self.rank() {
            g.set(i, i, Polynomial::from_int(&self.ring, -1));
        }
        g
    }

    /// `∂_{x_i} d` for the variable with index `i` in the ring.
    pub fn partial_differential(&self, i: usize) -> PolyMatrix {
        self.differential().map(|p| p.partial_derivative(i))
    }

    pub fn is_graded(&self) -> bool {
        self.grading.is_some()
    }

    /// Re-expresses the factorisation over a larger ring (or a field extension).
    pub fn embed(&self, target: &Ring) -> Result<MatrixFactorisation> {
        Ok(MatrixFactorisation {
            ring: target.clone(),
            potential: self.potential.embed(target)?,
            d0: self.d0.embed(target)?,
            d1: self.d1.embed(target)?,
            grading: if target.degrees().is_some() { self.grading.clone() } else { None },
            split: self.split.clone(),
        })
    }

    pub fn to_descriptor(&self) -> MfDescriptor {
        MfDescriptor {
            field: self.ring.field().to_string(),
            vars: self.ring.vars().to_vec(),
            degrees: self.ring.degrees().map(|d| d.iter().map(fmt_rational).collect()),
            potential: self.potential.to_string(),
            ranks: [self.r0(), self.r1()],
            d0: self.d0.to_strings(),
            d1: self.d1.to_strings(),
            grading: self.grading.as_ref().map(|q| q.iter().map(fmt_rational).collect()),
            split: self.split.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_descriptor()).expect("descriptor serialises")
    }

    pub fn from_json(s: &str) -> Result<MatrixFactorisation> {
        let d: MfDescriptor = serde_json::from_str(s).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        d.build()
    }
}

/// Text form of a matrix factorisation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MfDescriptor {
    pub field: String,
    pub vars: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<String>>,
    pub potential: String,
    pub ranks: [usize; 2],
    pub d0: Vec<Vec<String>>,
    pub d1: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<VarSplit>,
}

fn parse_block(ring: &Ring, rows: &[Vec<String>], nr: usize, nc: usize) -> Result<PolyMatrix> {
    if nr == 0 || nc == 0 {
        if rows.iter().any(|r| !r.is_empty()) || (nr == 0 && !rows.is_empty()) {
            return Err(Error::Shape("block entries do not match ranks".into()));
        }
        return Ok(PolyMatrix::zeros(ring, nr, nc));
    }
    let m = PolyMatrix::parse(ring, rows)?;
    if m.rows() != nr || m.cols() != nc {
        return Err(Error::Shape(format!(
            "block is {}x{}, ranks require {}x{}",
            m.rows(),
            m.cols(),
            nr,
            nc
        )));
    }
    Ok(m)
}

impl MfDescriptor {
    pub fn build(&self) -> Result<MatrixFactorisation> {
        let field = FieldSpec::parse(&self.field)?;
        let degrees = match &self.degrees {
            Some(d) => Some(d.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?),
            None => None,
        };
        let ring = RingSpec::build(field, self.vars.clone(), degrees)?;
        let w = Polynomial::parse(&ring, &self.potential)?;
        let [r0, r1] = self.ranks;
        let d0 = parse_block(&ring, &self.d0, r1, r0)?;
        let d1 = parse_block(&ring, &self.d1, r0, r1)?;
        let mut x = MatrixFactorisation::new(w, d0, d1)?;
        if let Some(s) = &self.split {
            x = x.with_split(s.clone())?;
        }
        if let Some(q) = &self.grading {
            let q = q.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
            x = x.with_grading(q)?;
        }
        Ok(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> i64 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }
    pub fn add(self, o: Parity) -> Parity {
        if self == o {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// A map `X -> Y`, stored as a full (rank Y) x (rank X) matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub source: MatrixFactorisation,
    pub target: MatrixFactorisation,
    pub parity: Parity,
    pub matrix: PolyMatrix,
}

impl Morphism {
    /// Checks block shape and the chain-map condition.
    pub fn new(
        source: &MatrixFactorisation,
        target: &MatrixFactorisation,
        parity: Parity,
        matrix: PolyMatrix,
    ) -> Result<Morphism> {
        let m = Morphism::unchecked(source, target, parity, matrix)?;
        if !m.is_chain_map()? {
            return Err(Error::InvalidMf("morphism does not (anti)commute with the differentials".into()));
        }
        Ok(m)
    }

    /// Only the shape and parity pattern are checked.
    pub fn unchecked(
        source: &MatrixFactorisation,
        target: &MatrixFactorisation,
        parity: Parity,
        matrix: PolyMatrix,
    ) -> Result<Morphism> {
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::Shape(format!(
                "morphism matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.rank(),
                source.rank()
            )));
        }
        for i in 0..matrix.rows() {
            for j in 0..matrix.cols() {
                let pi = i >= target.r0();
                let pj = j >= source.r0();
                let even_entry = pi == pj;
                if (even_entry != (parity == Parity::Even)) && !matrix.get(i, j).is_zero() {
                    return Err(Error::Shape(format!("entry ({i},{j}) violates the parity pattern")));
                }
            }
        }
        Ok(Morphism {
            source: source.clone(),
            target: target.clone(),
            parity,
            matrix,
        })
    }

    pub fn is_chain_map(&self) -> Result<bool> {
        let dy = self.target.differential();
        let dx = self.source.differential();
        let a = dy.try_mul(&self.matrix)?;
        let b = self.matrix.try_mul(&dx)?;
        Ok(match self.parity {
            Parity::Even => a == b,
            Parity::Odd => a.try_add(&b)?.is_zero(),
        })
    }

    pub fn identity(x: &MatrixFactorisation) -> Morphism {
        Morphism {
            source: x.clone(),
            target: x.clone(),
            parity: Parity::Even,
            matrix: PolyMatrix::identity(&x.ring, x.rank()),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Morphism) -> Result<Morphism> {
        Ok(Morphism {
            source: other.source.clone(),
            target: self.target.clone(),
            parity: self.parity.add(other.parity),
            matrix: self.matrix.try_mul(&other.matrix)?,
        })
    }
}

/// `str(φ) = tr(φ00) - tr(φ11)` for a square supermatrix with the even block first.
pub fn supertrace(m: &PolyMatrix, r0: usize, r1: usize) -> Result<Polynomial> {
    if m.rows() != r0 + r1 || m.cols() != r0 + r1 {
        return Err(Error::Shape(format!(
            "supertrace of a {}x{} matrix with ranks ({r0}|{r1})",
            m.rows(),
            m.cols()
        )));
    }
    let mut s = Polynomial::zero(m.ring());
    for i in 0..r0 {
        s = &s + m.get(i, i);
    }
    for i in r0..r0 + r1 {
        s = &s - m.get(i, i);
    }
    Ok(s)
}

fn popcount_below(s: u64, i: usize) -> u32 {
    (s & ((1u64 << i) - 1)).count_ones()
}

/// Subsets of `0..n` ordered by size, then lexicographically.
pub fn theta_basis(n: usize) -> Vec<u64> {
    let mut all: Vec<u64> = (0..(1u64 << n)).collect();
    let key = |s: &u64| {
        let idx: Vec<usize> = (0..n).filter(|i| s >> i & 1 == 1).collect();
        (idx.len(), idx)
    };
    all.sort_by_key(key);
    all
}

/// Tensor product of the rank (1|1) factorisations with `d1 = a_i`, `d0 = b_i`, realised on
/// the exterior algebra as `Σ a_i θ_i^* + b_i θ_i ∧`.
pub fn koszul(ring: &Ring, pairs: &[(Polynomial, Polynomial)]) -> Result<MatrixFactorisation> {
    let n = pairs.len();
    if n > 20 {
        return Err(Error::Invalid("too many Koszul pairs".into()));
    }
    for (a, b) in pairs {
        if !same_ring(a.ring(), ring) || !same_ring(b.ring(), ring) {
            return Err(Error::RingMismatch(a.ring().describe(), ring.describe()));
        }
    }
    let mut w = Polynomial::zero(ring);
    for (a, b) in pairs {
        w = &w + &(a * b);
    }
    let basis = theta_basis(n);
    let even: Vec<u64> = basis.iter().copied().filter(|s| s.count_ones() % 2 == 0).collect();
    let odd: Vec<u64> = basis.iter().copied().filter(|s| s.count_ones() % 2 == 1).collect();
    let pos = |list: &[u64]| -> HashMap<u64, usize> { list.iter().enumerate().map(|(k, s)| (*s, k)).collect() };
    let (pe, po) = (pos(&even), pos(&odd));
    // d applied to θ_S, as a list of (target subset, coefficient)
    let apply = |s: u64| -> Vec<(u64, Polynomial)> {
        let mut out = Vec::new();
        for (i, (a, b)) in pairs.iter().enumerate() {
            let sign = if popcount_below(s, i).is_multiple_of(2) { 1 } else { -1 };
            if s >> i & 1 == 1 {
                out.push((s & !(1 << i), a.scale(&Scalar::from_int(ring.field(), sign))));
            } else {
                out.push((s | (1 << i), b.scale(&Scalar::from_int(ring.field(), sign))));
            }
        }
        out
    };
    let mut d0 = PolyMatrix::zeros(ring, odd.len(), even.len());
    let mut d1 = PolyMatrix::zeros(ring, even.len(), odd.len());
    for (j, s) in even.iter().enumerate() {
        for (t, c) in apply(*s) {
            let i = po[&t];
            d0.set(i, j, d0.get(i, j) + &c);
        }
    }
    for (j, s) in odd.iter().enumerate() {
        for (t, c) in apply(*s) {
            let i = pe[&t];
            d1.set(i, j, d1.get(i, j) + &c);
        }
    }
    let mut x = MatrixFactorisation::new(w, d0, d1)?;
    if ring.degrees().is_some() {
        let one = BigRational::from_integer(1.into());
        let shifts: Option<Vec<BigRational>> = pairs
            .iter()
            .map(|(a, _)| a.homogeneity().ok().flatten().map(|h| h - &one))
            .collect();
        if let Some(sh) = shifts {
            let q: Vec<BigRational> = even
                .iter()
                .chain(odd.iter())
                .map(|s| {
                    (0..n)
                        .filter(|i| s >> i & 1 == 1)
                        .fold(BigRational::from_integer(0.into()), |acc, i| acc + &sh[i])
                })
                .collect();
            if let Ok(y) = x.clone().with_grading(q) {
                x = y;
            }
        }
    }
    Ok(x)
}

/// The identity defect `I_W` over `k[x, x']`, a factorisation of `W(x) - W(x')`.
/// Target variables are the unprimed ones.
pub fn identity_defect(w: &Polynomial) -> Result<MatrixFactorisation> {
    let ring = w.ring();
    let n = ring.nvars();
    let re = ring.doubled()?;
    let mut pairs = Vec::with_capacity(n);
    for i in 0..n {
        let a = &Polynomial::var(&re, i) - &Polynomial::var(&re, n + i);
        pairs.push((a, divided_difference(w, i)?));
    }
    let mut x = koszul(&re, &pairs)?;
    if n == 0 {
        // zero variables: the unit factorisation of W - W = 0
        x.potential = Polynomial::zero(&re);
    }
    let expected = &w.embed(&re)? - &to_primed(w, &re)?;
    if x.potential != expected {
        return Err(Error::Internal("identity defect potential mismatch".into()));
    }
    x.split = Some(VarSplit {
        target: ring.vars().to_vec(),
        source: re.vars()[n..].to_vec(),
    });
    Ok(x)
}

/// `X^∨`: blocks `d0' = -d1^T`, `d1' = d0^T`, potential negated, split reversed.
pub fn dual(x: &MatrixFactorisation) -> MatrixFactorisation {
    MatrixFactorisation {
        ring: x.ring.clone(),
        potential: x.potential.neg(),
        d0: x.d1.transpose().neg(),
        d1: x.d0.transpose(),
        grading: x.grading.as_ref().map(|q| q.iter().map(|v| -v).collect()),
        split: x.split.as_ref().map(|s| s.swapped()),
    }
}

/// `X[1]`: parity swapped and differential negated.
pub fn shift(x: &MatrixFactorisation) -> MatrixFactorisation {
    let grading = x.grading.as_ref().map(|q| {
        let mut v = q[x.r0()..].to_vec();
        v.extend(q[..x.r0()].iter().cloned());
        v
    });
    MatrixFactorisation {
        ring: x.ring.clone(),
        potential: x.potential.clone(),
        d0: x.d1.neg(),
        d1: x.d0.neg(),
        grading,
        split: x.split.clone(),
    }
}

pub fn shift_by(x: &MatrixFactorisation, k: usize) -> MatrixFactorisation {
    if k.is_multiple_of(2) {
        x.clone()
    } else {
        shift(x)
    }
}

/// `X ⊕ Y` over a common ring, even parts first.
pub fn direct_sum(x: &MatrixFactorisation, y: &MatrixFactorisation) -> Result<MatrixFactorisation> {
    if !same_ring(&x.ring, &y.ring) {
        return Err(Error::Invalid("direct sum over different rings".into()));
    }
    if x.potential != y.potential {
        return Err(Error::InvalidMf("direct sum of factorisations of different potentials".into()));
    }
    let grading = match (&x.grading, &y.grading) {
        (Some(a), Some(b)) => {
            let mut q = a[..x.r0()].to_vec();
            q.extend(b[..y.r0()].iter().cloned());
            q.extend(a[x.r0()..].iter().cloned());
            q.extend(b[y.r0()..].iter().cloned());
            Some(q)
        }
        _ => None,
    };
    Ok(MatrixFactorisation {
        ring: x.ring.clone(),
        potential: x.potential.clone(),
        d0: PolyMatrix::block_diag(&[&x.d0, &y.d0], &x.ring),
        d1: PolyMatrix::block_diag(&[&x.d1, &y.d1], &x.ring),
        grading,
        split: x.split.clone(),
    })
}

/// Renames variables (absent names are kept); grading and split follow.
pub fn rename_vars(x: &MatrixFactorisation, names: &HashMap<String, String>) -> Result<MatrixFactorisation> {
    let rn = |v: &String| names.get(v).cloned().unwrap_or_else(|| v.clone());
    let new: Vec<String> = x.ring.vars().iter().map(rn).collect();
    let r = RingSpec::build(x.ring.field(), new, x.ring.degrees().map(|d| d.to_vec()))?;
    let f = |p: &Polynomial| p.rename(names, &r);
    let mut y = MatrixFactorisation::new(f(&x.potential)?, x.d0.try_map(&r, f)?, x.d1.try_map(&r, f)?)?;
    y.grading = x.grading.clone();
    y.split = x.split.as_ref().map(|s| VarSplit {
        target: s.target.iter().map(rn).collect(),
        source: s.source.iter().map(rn).collect(),
    });
    Ok(y)
}

/// `(†X, X†)` with `X† = X^∨[n]` (n source variables) and `†X = X^∨[m]` (m target variables).
pub fn adjoints(x: &MatrixFactorisation) -> Result<(MatrixFactorisation, MatrixFactorisation)> {
    let split = x.split.as_ref().ok_or(Error::MissingSplit)?;
    let dv = dual(x);
    Ok((shift_by(&dv, split.target.len()), shift_by(&dv, split.source.len())))
}

pub fn right_adjoint(x: &MatrixFactorisation) -> Result<MatrixFactorisation> {
    Ok(adjoints(x)?.1)
}

pub fn left_adjoint(x: &MatrixFactorisation) -> Result<MatrixFactorisation> {
    Ok(adjoints(x)?.0)
}

/// Finite group acting linearly on named variables. Element `g` substitutes
/// `v_i ↦ Σ_j M_g[i][j] v_j`; the product `g·h` is the automorphism `g ∘ h`, whose
/// substitution matrix is `M_h M_g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    pub field: FieldSpec,
    pub vars: Vec<String>,
    pub elements: Vec<Vec<Vec<Scalar>>>,
    /// `table[g][h]` is the index of `g·h`.
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
}

fn mat_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>], f: FieldSpec) -> Vec<Vec<Scalar>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(Scalar::zero(f), |acc, k| &acc + &(&a[i][k] * &b[k][j])))
                .collect()
        })
        .collect()
}

impl GroupAction {
    /// Closure of the given substitution matrices under composition.
    pub fn generated(field: FieldSpec, vars: &[String], gens: &[Vec<Vec<Scalar>>]) -> Result<GroupAction> {
        let n = vars.len();
        let id: Vec<Vec<Scalar>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Scalar::one(field) } else { Scalar::zero(field) }).collect())
            .collect();
        for g in gens {
            if g.len() != n || g.iter().any(|r| r.len() != n) {
                return Err(Error::Shape("generator matrix has wrong size".into()));
            }
        }
        let mut elements = vec![id.clone()];
        let mut k = 0;
        while k < elements.len() {
            for g in gens {
                let p = mat_mul(&elements[k], g, field);
                if !elements.contains(&p) {
                    if elements.len() >= 10_000 {
                        return Err(Error::Invalid("group is too large or infinite".into()));
                    }
                    elements.push(p);
                }
            }
            k += 1;
        }
        let idx = |m: &Vec<Vec<Scalar>>| elements.iter().position(|e| e == m);
        let mut table = vec![vec![0; elements.len()]; elements.len()];
        for (g, mg) in elements.iter().enumerate() {
            for (h, mh) in elements.iter().enumerate() {
                table[g][h] = idx(&mat_mul(mh, mg, field))
                    .ok_or_else(|| Error::Internal("group not closed".into()))?;
            }
        }
        Ok(GroupAction {
            field,
            vars: vars.to_vec(),
            elements,
            table,
            identity: 0,
        })
    }

    /// The cyclic group generated by `v_i ↦ ζ_n^{k_i} v_i`.
    pub fn diagonal_cyclic(field: FieldSpec, vars: &[String], n: u32, weights: &[i64]) -> Result<GroupAction> {
        let zeta = if n <= 2 {
            Scalar::from_int(field, if n == 2 { -1 } else { 1 })
        } else {
            match field {
                FieldSpec::Cyclotomic(m) if m % n == 0 => Scalar::zeta(field).pow((m / n) as i64)?,
                _ => return Err(Error::Invalid(format!("field {field} lacks a primitive {n}-th root of unity"))),
            }
        };
        let k = vars.len();
        let g: Vec<Vec<Scalar>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| if i == j { zeta.pow(weights[i]).unwrap() } else { Scalar::zero(field) })
                    .collect()
            })
            .collect();
        GroupAction::generated(field, vars, &[g])
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn inverse(&self, g: usize) -> usize {
        (0..self.order()).find(|&h| self.table[g][h] == self.identity).unwrap()
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    /// Substitution images for the acted-on variables of `ring` (others fixed).
    fn images(&self, g: usize, ring: &Ring) -> Result<Vec<Option<Polynomial>>> {
        let m = &self.elements[g];
        let idx: Vec<usize> = self
            .vars
            .iter()
            .map(|v| ring.index_of(v).ok_or_else(|| Error::Invalid(format!("ring lacks acted-on variable {v}"))))
            .collect::<Result<_>>()?;
        let mut ims: Vec<Option<Polynomial>> = (0..ring.nvars()).map(|j| Some(Polynomial::var(ring, j))).collect();
        for (a, &i) in idx.iter().enumerate() {
            let mut p = Polynomial::zero(ring);
            for (b, &j) in idx.iter().enumerate() {
                if !m[a][b].is_zero() {
                    p = &p + &Polynomial::var(ring, j).scale(&m[a][b]);
                }
            }
            ims[i] = Some(p);
        }
        Ok(ims)
    }

    /// `g(f)`: the polynomial with the substitution of `g` applied.
    pub fn act(&self, g: usize, f: &Polynomial) -> Result<Polynomial> {
        f.substitute(&self.images(g, f.ring())?, f.ring())
    }

    pub fn act_matrix(&self, g: usize, m: &PolyMatrix) -> Result<PolyMatrix> {
        let ims = self.images(g, m.ring())?;
        m.try_map(m.ring(), |p| p.substitute(&ims, m.ring()))
    }

    pub fn check_invariant(&self, w: &Polynomial) -> Result<()> {
        for g in 0..self.order() {
            if self.act(g, w)? != *w {
                return Err(Error::NotInvariant(format!("element {g} moves {w}")));
            }
        }
        Ok(())
    }
}

/// Text form of a group action: substitution matrices of generators, entries as scalar text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupActionDescriptor {
    pub field: String,
    pub vars: Vec<String>,
    pub generators: Vec<Vec<Vec<String>>>,
}

impl GroupActionDescriptor {
    pub fn build(&self) -> Result<GroupAction> {
        let field = FieldSpec::parse(&self.field)?;
        let gens = self
            .generators
            .iter()
            .map(|g| {
                g.iter()
                    .map(|row| row.iter().map(|e| Scalar::parse(field, e)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        GroupAction::generated(field, &self.vars, &gens)
    }
}

impl GroupAction {
    /// Every non-identity element is listed as a generator.
    pub fn to_descriptor(&self) -> GroupActionDescriptor {
        GroupActionDescriptor {
            field: self.field.to_string(),
            vars: self.vars.clone(),
            generators: (0..self.order())
                .filter(|&g| g != self.identity)
                .map(|g| self.elements[g].iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect())
                .collect(),
        }
    }

    pub fn from_json(s: &str) -> Result<GroupAction> {
        let d: GroupActionDescriptor = serde_json::from_str(s).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        d.build()
    }

    /// Index of the element with substitution matrix `m`.
    pub fn find(&self, m: &[Vec<Scalar>]) -> Option<usize> {
        self.elements.iter().position(|e| e.as_slice() == m)
    }
}

/// `_g X`: the twisted factorisation, matrix entries with `g` substituted on the acted-on
/// variables (by name). The potential becomes `g(W_X)`.
pub fn twist(action: &GroupAction, g: usize, x: &MatrixFactorisation) -> Result<MatrixFactorisation> {
    if g >= action.order() {
        return Err(Error::Invalid(format!("group element {g} out of range (order {})", action.order())));
    }
    Ok(MatrixFactorisation {
        ring: x.ring.clone(),
        potential: action.act(g, &x.potential)?,
        d0: action.act_matrix(g, &x.d0)?,
        d1: action.act_matrix(g, &x.d1)?,
        grading: x.grading.clone(),
        split: x.split.clone(),
    })
}
