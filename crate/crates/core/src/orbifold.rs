//! Orbifold layer: twisted identity defects, the algebra `A_G`, axiom checks,
//! equivariant factorisations as `A_G`-modules, projectors and the A–D algebra.
//!
//! Maps between tensor products of defects are not linear over a single ring (the unit
//! action `λ` identifies intermediate variables with outer ones), so they are stored as
//! [`TwistedMap`]s: sums of `v ↦ Q φ(v)` with `φ` a substitution of the source
//! variables. Distinct substitutions are linearly independent, so two twisted maps agree
//! exactly when their normalised term lists agree.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::tensor;
use crate::homalg::{is_null_homotopic, Cohomology};
use crate::matrix::{scalar_rank, PolyMatrix};
use crate::mf::{identity_defect, koszul, theta_basis, twist, GroupAction, MatrixFactorisation, Morphism, Parity, VarSplit};
use crate::poly::{primed, Polynomial, Ring, RingSpec};
use crate::residue::{kapustin_li, quantum_dim, Side};
use crate::scalar::Scalar;

/// Name of base variable `v` in group `j` of a chain with `k` factors: the outer groups
/// are `v` and `v'`, inner ones `v''`, `v'''`, ...
fn group_name(v: &str, j: usize, k: usize) -> String {
    if j == 0 {
        v.to_string()
    } else if j == k {
        primed(v)
    } else {
        format!("{v}{}", "'".repeat(j + 1))
    }
}

fn chain_ring(base: &Ring, k: usize, boundary_end: bool) -> Result<Ring> {
    let groups = if boundary_end { k } else { k + 1 };
    let mut vars = Vec::new();
    let mut degs = Vec::new();
    for j in 0..groups {
        for (i, v) in base.vars().iter().enumerate() {
            vars.push(group_name(v, j, k));
            if let Some(d) = base.degrees() {
                degs.push(d[i].clone());
            }
        }
    }
    RingSpec::build(base.field(), vars, base.degrees().map(|_| degs))
}

fn is_boundary(base: &Ring, f: &MatrixFactorisation) -> Result<bool> {
    if f.ring.vars() == base.vars() {
        Ok(true)
    } else if f.ring.nvars() == 2 * base.nvars() && f.ring.vars()[..base.nvars()] == *base.vars() {
        Ok(false)
    } else {
        Err(Error::Invalid(format!("factor over {} is not a defect of the base ring", f.ring.describe())))
    }
}

fn parity_of(f: &MatrixFactorisation, i: usize) -> usize {
    usize::from(i >= f.r0())
}

/// Tensor product `F_1 ⊗ ... ⊗ F_k` of defects of one base potential, factor `j` placed on
/// variable groups `j` (target) and `j + 1` (source). Only the last factor may be a
/// boundary condition (no source variables).
#[derive(Clone, Debug)]
pub struct Chain {
    pub base: Ring,
    pub factors: Vec<MatrixFactorisation>,
    pub mf: MatrixFactorisation,
    /// Basis position `p` is the tensor of factor basis elements `tuples[p]`.
    pub tuples: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl Chain {
    pub fn new(base: &Ring, factors: Vec<MatrixFactorisation>) -> Result<Chain> {
        let k = factors.len();
        if k == 0 {
            return Err(Error::Invalid("empty tensor chain".into()));
        }
        let mut boundary_end = false;
        for (j, f) in factors.iter().enumerate() {
            if is_boundary(base, f)? {
                if j + 1 != k {
                    return Err(Error::Invalid("only the last factor may be a boundary condition".into()));
                }
                boundary_end = true;
            }
        }
        let ring = chain_ring(base, k, boundary_end)?;
        let mut placed = Vec::with_capacity(k);
        for (j, f) in factors.iter().enumerate() {
            placed.push(place(base, f, j, k, &ring)?);
        }
        let mut mf = placed[0].clone();
        let mut tuples: Vec<Vec<usize>> = (0..mf.rank()).map(|a| vec![a]).collect();
        for p in &placed[1..] {
            let t = tensor(&mf, p)?;
            tuples = t.pairs.iter().map(|&(a, b)| {
                let mut v = tuples[a].clone();
                v.push(b);
                v
            }).collect();
            mf = t.mf;
        }
        mf.split = Some(VarSplit {
            target: base.vars().iter().map(|v| group_name(v, 0, k)).collect(),
            source: if boundary_end { vec![] } else { base.vars().iter().map(|v| group_name(v, k, k)).collect() },
        });
        let index = tuples.iter().enumerate().map(|(p, t)| (t.clone(), p)).collect();
        Ok(Chain {
            base: base.clone(),
            factors,
            mf,
            tuples,
            index,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.mf.ring
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.mf.rank()
    }

    pub fn position(&self, tuple: &[usize]) -> Option<usize> {
        self.index.get(tuple).copied()
    }

    /// Name of base variable `i` in group `j`.
    pub fn var(&self, i: usize, j: usize) -> Result<Polynomial> {
        Polynomial::var_named(self.ring(), &group_name(&self.base.vars()[i], j, self.len()))
    }

    /// `γ ⊗ ... ⊗ γ ⊗ m ⊗ 1 ⊗ ... ⊗ 1` with `m` (over the ring of factor `t`) in slot `t`.
    pub fn lift_factor_op(&self, t: usize, m: &PolyMatrix, odd: bool) -> Result<PolyMatrix> {
        let k = self.len();
        let names = placement_names(&self.base, &self.factors[t], t, k)?;
        let mut out = PolyMatrix::zeros(self.ring(), self.rank(), self.rank());
        for (c, tc) in self.tuples.iter().enumerate() {
            let sign = odd && tc[..t].iter().enumerate().map(|(s, &i)| parity_of(&self.factors[s], i)).sum::<usize>() % 2 == 1;
            for r_t in 0..m.rows() {
                let e = m.get(r_t, tc[t]);
                if e.is_zero() {
                    continue;
                }
                let mut tr = tc.clone();
                tr[t] = r_t;
                let r = self.index[&tr];
                let v = e.rename(&names, self.ring())?;
                out.set(r, c, if sign { v.neg() } else { v });
            }
        }
        Ok(out)
    }
}

fn placement_names(base: &Ring, f: &MatrixFactorisation, j: usize, k: usize) -> Result<HashMap<String, String>> {
    let mut names = HashMap::new();
    for v in base.vars() {
        names.insert(v.clone(), group_name(v, j, k));
        if !is_boundary(base, f)? {
            names.insert(primed(v), group_name(v, j + 1, k));
        }
    }
    Ok(names)
}

fn place(base: &Ring, f: &MatrixFactorisation, j: usize, k: usize, ring: &Ring) -> Result<MatrixFactorisation> {
    let names = placement_names(base, f, j, k)?;
    let ren = |m: &PolyMatrix| m.try_map(ring, |p| p.rename(&names, ring));
    Ok(MatrixFactorisation {
        ring: ring.clone(),
        potential: f.potential.rename(&names, ring)?,
        d0: ren(&f.d0)?,
        d1: ren(&f.d1)?,
        grading: f.grading.clone(),
        split: None,
    })
}

/// `v ↦ Σ_t Q_t φ_t(v)` from a free module over `source` to one over `target`; `φ_t` sends
/// source variable `i` to `images[i]`.
#[derive(Clone, Debug)]
pub struct TwistedMap {
    pub source: Ring,
    pub target: Ring,
    pub rows: usize,
    pub cols: usize,
    pub terms: Vec<(Vec<Polynomial>, PolyMatrix)>,
}

impl TwistedMap {
    pub fn zero(source: &Ring, target: &Ring, rows: usize, cols: usize) -> TwistedMap {
        TwistedMap {
            source: source.clone(),
            target: target.clone(),
            rows,
            cols,
            terms: vec![],
        }
    }

    /// Single term with the substitution given by images.
    pub fn substitution(source: &Ring, images: Vec<Polynomial>, m: PolyMatrix) -> TwistedMap {
        let target = m.ring().clone();
        TwistedMap {
            source: source.clone(),
            target,
            rows: m.rows(),
            cols: m.cols(),
            terms: vec![(images, m)],
        }
    }

    /// Source variables sent to the equally named variables of the target ring.
    pub fn inclusion_images(source: &Ring, target: &Ring) -> Result<Vec<Polynomial>> {
        source.vars().iter().map(|v| Polynomial::var_named(target, v)).collect()
    }

    /// An ordinary matrix, linear over the source ring included by name.
    pub fn linear(source: &Ring, m: PolyMatrix) -> Result<TwistedMap> {
        let ims = Self::inclusion_images(source, m.ring())?;
        Ok(Self::substitution(source, ims, m))
    }

    fn apply_images(images: &[Polynomial], p: &Polynomial, target: &Ring) -> Result<Polynomial> {
        let ims: Vec<Option<Polynomial>> = images.iter().cloned().map(Some).collect();
        p.substitute(&ims, target)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &TwistedMap) -> Result<TwistedMap> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!("composing {}x{} after {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = TwistedMap::zero(&other.source, &self.target, self.rows, other.cols);
        for (phi, q) in &self.terms {
            for (psi, p) in &other.terms {
                let mapped = p.try_map(&self.target, |e| Self::apply_images(phi, e, &self.target))?;
                let m = q.try_mul(&mapped)?;
                let ims = psi
                    .iter()
                    .map(|e| Self::apply_images(phi, e, &self.target))
                    .collect::<Result<Vec<_>>>()?;
                out.terms.push((ims, m));
            }
        }
        out.normalise()
    }

    pub fn add(&self, other: &TwistedMap) -> Result<TwistedMap> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape("adding twisted maps of different shapes".into()));
        }
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        out.normalise()
    }

    pub fn scale(&self, c: &Scalar) -> TwistedMap {
        let mut out = self.clone();
        for (_, m) in out.terms.iter_mut() {
            *m = m.scale(c);
        }
        out
    }

    pub fn sub(&self, other: &TwistedMap) -> Result<TwistedMap> {
        self.add(&other.scale(&Scalar::from_int(self.target.field(), -1)))
    }

    /// Merges terms with equal substitutions and drops zero terms.
    pub fn normalise(mut self) -> Result<TwistedMap> {
        let mut merged: Vec<(Vec<Polynomial>, PolyMatrix)> = Vec::new();
        for (ims, m) in self.terms.drain(..) {
            if let Some(slot) = merged.iter_mut().find(|(i, _)| *i == ims) {
                slot.1 = slot.1.try_add(&m)?;
            } else {
                merged.push((ims, m));
            }
        }
        merged.retain(|(_, m)| !m.is_zero());
        self.terms = merged;
        Ok(self)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(_, m)| m.is_zero())
    }

    /// First location where `self` and `other` differ, if any.
    pub fn difference(&self, other: &TwistedMap) -> Result<Option<String>> {
        let d = self.sub(other)?;
        for (ims, m) in &d.terms {
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    if !m.get(i, j).is_zero() {
                        let subst: Vec<String> = ims.iter().map(|p| p.to_string()).collect();
                        return Ok(Some(format!(
                            "entry ({i},{j}) differs by {} in the term substituting [{}]",
                            m.get(i, j),
                            subst.join(", ")
                        )));
                    }
                }
            }
        }
        Ok(None)
    }

    /// The matrix of a map that is linear over a ring with the source variable names.
    pub fn to_matrix(&self) -> Result<PolyMatrix> {
        let id = Self::inclusion_images(&self.source, &self.target)?;
        let mut out = PolyMatrix::zeros(&self.target, self.rows, self.cols);
        for (ims, m) in &self.terms {
            if *ims != id {
                return Err(Error::Internal("twisted map is not linear over its source ring".into()));
            }
            out = out.try_add(m)?;
        }
        Ok(out)
    }
}

/// `1 ⊗ ... ⊗ f ⊗ ... ⊗ 1` with `f: Chain(src[a..a+p]) -> Chain(g)` applied to the factors
/// `a..a+p` of `src`; returns the map and its target chain. `odd` gives the Koszul sign
/// for odd `f`.
pub fn on_factors(
    f: &TwistedMap,
    odd: bool,
    src: &Chain,
    a: usize,
    f_src: &Chain,
    f_tgt: &Chain,
) -> Result<(TwistedMap, Chain)> {
    let p = f_src.len();
    let q = f_tgt.len();
    let k = src.len();
    if a + p > k || src.factors[a..a + p] != f_src.factors[..] {
        return Err(Error::Invalid("map does not act on the given factors".into()));
    }
    let mut factors = src.factors[..a].to_vec();
    factors.extend(f_tgt.factors.iter().cloned());
    factors.extend(src.factors[a + p..].iter().cloned());
    let tgt = Chain::new(&src.base, factors)?;
    let kt = tgt.len();
    let base_vars = src.base.vars();
    // names of f's target chain inside the big target chain
    let mut ren: HashMap<String, String> = HashMap::new();
    for j in 0..=q {
        for v in base_vars {
            ren.insert(group_name(v, j, q), group_name(v, a + j, kt));
        }
    }
    let mut out = TwistedMap::zero(src.ring(), tgt.ring(), tgt.rank(), src.rank());
    for (phi, m) in &f.terms {
        let mut images = Vec::with_capacity(src.ring().nvars());
        for name in src.ring().vars() {
            let (i, j) = locate(name, base_vars, k)?;
            let img = if j < a {
                Polynomial::var_named(tgt.ring(), &group_name(&base_vars[i], j, kt))?
            } else if j > a + p {
                Polynomial::var_named(tgt.ring(), &group_name(&base_vars[i], j + q - p, kt))?
            } else {
                let fname = group_name(&base_vars[i], j - a, p);
                let fi = f_src
                    .ring()
                    .index_of(&fname)
                    .ok_or_else(|| Error::Internal(format!("missing variable {fname}")))?;
                phi[fi].rename(&ren, tgt.ring())?
            };
            images.push(img);
        }
        let mut mat = PolyMatrix::zeros(tgt.ring(), tgt.rank(), src.rank());
        for (c, tc) in src.tuples.iter().enumerate() {
            let mid = f_src.position(&tc[a..a + p]).ok_or_else(|| Error::Internal("tuple lookup".into()))?;
            let sign = odd
                && tc[..a].iter().enumerate().map(|(s, &i)| parity_of(&src.factors[s], i)).sum::<usize>() % 2 == 1;
            for r_mid in 0..m.rows() {
                let e = m.get(r_mid, mid);
                if e.is_zero() {
                    continue;
                }
                let mut tr = tc[..a].to_vec();
                tr.extend(f_tgt.tuples[r_mid].iter().copied());
                tr.extend(tc[a + p..].iter().copied());
                let r = tgt.position(&tr).ok_or_else(|| Error::Internal("tuple lookup".into()))?;
                let v = e.rename(&ren, tgt.ring())?;
                mat.set(r, c, if sign { v.neg() } else { v });
            }
        }
        out.terms.push((images, mat));
    }
    let out = out.normalise()?;
    Ok((out, tgt))
}

/// `(base index, group)` of a chain variable name.
fn locate(name: &str, base_vars: &[String], k: usize) -> Result<(usize, usize)> {
    for j in 0..=k {
        for (i, v) in base_vars.iter().enumerate() {
            if group_name(v, j, k) == name {
                return Ok((i, j));
            }
        }
    }
    Err(Error::Internal(format!("variable {name} is not a chain variable")))
}

/// Subsets `θ_S` in the basis order of the Koszul factorisations (even, then odd).
fn theta_layout(n: usize) -> Vec<u64> {
    let basis = theta_basis(n);
    let mut out: Vec<u64> = basis.iter().copied().filter(|s| s.count_ones() % 2 == 0).collect();
    out.extend(basis.iter().copied().filter(|s| s.count_ones() % 2 == 1));
    out
}

/// Substitution images sending chain groups to chain groups by a group map.
fn group_images(src: &Chain, tgt: &Chain, map: impl Fn(usize) -> usize) -> Result<Vec<Polynomial>> {
    let k = src.len();
    src.ring()
        .vars()
        .iter()
        .map(|name| {
            let (i, j) = locate(name, src.base.vars(), k)?;
            tgt.var(i, map(j))
        })
        .collect()
}

/// Unit actions `λ_Y: I ⊗ Y -> Y` (`left`) and `ρ_Y: Y ⊗ I -> Y`: project `I` to its
/// θ-degree zero part and identify the intermediate variables with the outer ones.
pub fn unitor(w: &Polynomial, y: &MatrixFactorisation, left: bool) -> Result<(TwistedMap, Chain, Chain)> {
    let base = w.ring().clone();
    let unit = identity_defect(w)?;
    let factors = if left { vec![unit, y.clone()] } else { vec![y.clone(), unit] };
    let src = Chain::new(&base, factors)?;
    let tgt = Chain::new(&base, vec![y.clone()])?;
    let mut m = PolyMatrix::zeros(tgt.ring(), tgt.rank(), src.rank());
    for b in 0..y.rank() {
        let t = if left { vec![0, b] } else { vec![b, 0] };
        m.set(b, src.position(&t).unwrap(), Polynomial::one(tgt.ring()));
    }
    let ims = group_images(&src, &tgt, |j| if j == 0 { 0 } else { j - 1 })?;
    Ok((TwistedMap::substitution(src.ring(), ims, m), src, tgt))
}

/// Section `s` of the unit action with `λ s = 1` (resp. `ρ s = 1`), a homotopy inverse.
/// Built by the perturbation lemma from the Koszul contraction in the intermediate
/// variables: `s = Σ_k (-hδ)^k ι`, where `δ` is the differential minus its Koszul part.
pub fn unitor_section(w: &Polynomial, y: &MatrixFactorisation, left: bool) -> Result<(TwistedMap, Chain)> {
    let base = w.ring().clone();
    let n = base.nvars();
    let unit = identity_defect(w)?;
    let factors = if left { vec![unit, y.clone()] } else { vec![y.clone(), unit] };
    let chain = Chain::new(&base, factors)?;
    let ring = chain.ring().clone();
    let t = if left { 0 } else { 1 };
    let re = unit_ring(&base)?;
    let pairs: Vec<(Polynomial, Polynomial)> = (0..n)
        .map(|i| (&Polynomial::var(&re, i) - &Polynomial::var(&re, n + i), Polynomial::zero(&re)))
        .collect();
    let koszul_part = koszul(&re, &pairs)?.differential();
    let delta = chain
        .mf
        .differential()
        .try_sub(&chain.lift_factor_op(t, &koszul_part, true)?)?;
    let layout = theta_layout(n);
    let slot: HashMap<u64, usize> = layout.iter().enumerate().map(|(k, s)| (*s, k)).collect();
    // intermediate variables u (group 1) and the outer ones w they are identified with
    let u: Vec<Polynomial> = (0..n).map(|i| chain.var(i, 1)).collect::<Result<_>>()?;
    let wv: Vec<Polynomial> = (0..n).map(|i| chain.var(i, if left { 0 } else { 2 })).collect::<Result<_>>()?;
    let a: Vec<Polynomial> = (0..n).map(|i| if left { &wv[i] - &u[i] } else { &u[i] - &wv[i] }).collect();
    let u_idx: Vec<usize> = u.iter().map(|p| p.leading().unwrap().0 .0.iter().position(|&e| e == 1).unwrap()).collect();
    let contract = |v: &[Polynomial]| -> Result<Vec<Polynomial>> {
        let mut out = vec![Polynomial::zero(&ring); v.len()];
        for (c, f) in v.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let tc = &chain.tuples[c];
            let s = layout[tc[t]];
            let before: usize = tc[..t].iter().enumerate().map(|(q, &i)| parity_of(&chain.factors[q], i)).sum();
            let mut prev = f.clone();
            for i in 0..n {
                if s >> i & 1 == 1 || (s != 0 && i > s.trailing_zeros() as usize) {
                    break;
                }
                let mut ims: Vec<Option<Polynomial>> = (0..ring.nvars()).map(|j| Some(Polynomial::var(&ring, j))).collect();
                ims[u_idx[i]] = Some(wv[i].clone());
                let next = prev.substitute(&ims, &ring)?;
                let q = (&prev - &next).exact_divide(&a[i])?;
                if !q.is_zero() {
                    let mut tr = tc.clone();
                    tr[t] = slot[&(s | 1 << i)];
                    let r = chain.position(&tr).unwrap();
                    out[r] = if before % 2 == 1 { &out[r] - &q } else { &out[r] + &q };
                }
                prev = next;
            }
        }
        Ok(out)
    };
    let mut m = PolyMatrix::zeros(&ring, chain.rank(), y.rank());
    for b in 0..y.rank() {
        let tb = if left { vec![0, b] } else { vec![b, 0] };
        let mut v = vec![Polynomial::zero(&ring); chain.rank()];
        v[chain.position(&tb).unwrap()] = Polynomial::one(&ring);
        let mut acc = v.clone();
        for _ in 0..n {
            let dv = mat_vec(&delta, &v)?;
            v = contract(&dv)?.into_iter().map(|p| p.neg()).collect();
            if v.iter().all(|p| p.is_zero()) {
                break;
            }
            for (x, y) in acc.iter_mut().zip(&v) {
                *x = &*x + y;
            }
        }
        for (r, p) in acc.into_iter().enumerate() {
            m.set(r, b, p);
        }
    }
    Ok((TwistedMap::linear(&y.ring, m)?, chain))
}

fn unit_ring(base: &Ring) -> Result<Ring> {
    base.doubled()
}

fn mat_vec(m: &PolyMatrix, v: &[Polynomial]) -> Result<Vec<Polynomial>> {
    let mut out = vec![Polynomial::zero(m.ring()); m.rows()];
    for (j, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (i, o) in out.iter_mut().enumerate() {
            let e = m.get(i, j);
            if !e.is_zero() {
                *o = &*o + &(e * x);
            }
        }
    }
    Ok(out)
}


/// Direct sum of factorisations over one ring, even parts first.
#[derive(Clone, Debug)]
pub struct BlockSum {
    pub summands: Vec<MatrixFactorisation>,
    pub mf: MatrixFactorisation,
    even_off: Vec<usize>,
    odd_off: Vec<usize>,
}

impl BlockSum {
    pub fn new(summands: Vec<MatrixFactorisation>) -> Result<BlockSum> {
        let first = summands.first().ok_or_else(|| Error::Invalid("empty direct sum".into()))?;
        let ring = first.ring.clone();
        let (mut e, mut o) = (0, 0);
        let mut even_off = Vec::new();
        let mut odd_off = Vec::new();
        for s in &summands {
            if s.ring != ring || s.potential != first.potential {
                return Err(Error::InvalidMf("direct summands differ in ring or potential".into()));
            }
            even_off.push(e);
            odd_off.push(o);
            e += s.r0();
            o += s.r1();
        }
        let d0s: Vec<&PolyMatrix> = summands.iter().map(|s| &s.d0).collect();
        let d1s: Vec<&PolyMatrix> = summands.iter().map(|s| &s.d1).collect();
        let mut mf = MatrixFactorisation::new(
            first.potential.clone(),
            PolyMatrix::block_diag(&d0s, &ring),
            PolyMatrix::block_diag(&d1s, &ring),
        )?;
        if summands.iter().all(|s| s.grading.is_some()) {
            let mut q = Vec::new();
            for s in &summands {
                q.extend(s.grading.as_ref().unwrap()[..s.r0()].iter().cloned());
            }
            for s in &summands {
                q.extend(s.grading.as_ref().unwrap()[s.r0()..].iter().cloned());
            }
            mf = mf.with_grading(q)?;
        }
        mf.split = first.split.clone();
        Ok(BlockSum {
            summands,
            mf,
            even_off,
            odd_off,
        })
    }

    /// Position of basis element `b` of summand `s`.
    pub fn pos(&self, s: usize, b: usize) -> usize {
        let x = &self.summands[s];
        if b < x.r0() {
            self.even_off[s] + b
        } else {
            self.mf.r0() + self.odd_off[s] + b - x.r0()
        }
    }

    /// Positions of summand `s` in basis order.
    pub fn positions(&self, s: usize) -> Vec<usize> {
        (0..self.summands[s].rank()).map(|b| self.pos(s, b)).collect()
    }

    /// Inclusion of summand `s` (a matrix over the common ring).
    pub fn inclusion(&self, s: usize) -> PolyMatrix {
        let ring = &self.mf.ring;
        let mut m = PolyMatrix::zeros(ring, self.mf.rank(), self.summands[s].rank());
        for b in 0..self.summands[s].rank() {
            m.set(self.pos(s, b), b, Polynomial::one(ring));
        }
        m
    }
}

/// Even map `Chain(A, A) -> Chain(A, A)` (or similar) is null-homotopic, tested blockwise
/// on a finite model `B` of the source and target: `Λ D S`, with `Λ S = 1`, `S Λ ≃ 1`.
#[derive(Clone, Debug)]
pub struct PairModel {
    pub model: BlockSum,
    /// `Λ: A ⊗ A -> B`.
    pub collapse: TwistedMap,
    /// `S: B -> A ⊗ A` with `Λ S = 1`.
    pub section: TwistedMap,
}

/// Algebra and coalgebra structure on a defect `A: W -> W`. `μ` and `Δ` act on the
/// tensor chain `A ⊗ A`; `η`, `ε` are ordinary maps to and from `I_W`.
#[derive(Clone, Debug)]
pub struct FrobeniusDatum {
    pub w: Polynomial,
    pub carrier: MatrixFactorisation,
    pub mu: TwistedMap,
    pub eta: PolyMatrix,
    pub delta: TwistedMap,
    pub eps: PolyMatrix,
    pub pair_model: PairModel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomVerdict {
    pub axiom: String,
    pub holds: bool,
    /// Holds as an equality of matrices (not only up to homotopy).
    pub strict: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub verdicts: Vec<AxiomVerdict>,
}

impl AxiomReport {
    pub fn all_hold(&self) -> bool {
        self.verdicts.iter().all(|v| v.holds)
    }

    pub fn get(&self, axiom: &str) -> Option<&AxiomVerdict> {
        self.verdicts.iter().find(|v| v.axiom == axiom)
    }
}

impl FrobeniusDatum {
    /// `I_W` with its unit structure: `μ = λ_I`, `Δ` the section of `λ_I`, `η = ε = 1`.
    pub fn unit(w: &Polynomial) -> Result<FrobeniusDatum> {
        let i = identity_defect(w)?;
        let (mu, _, _) = unitor(w, &i, true)?;
        let (delta, _) = unitor_section(w, &i, true)?;
        let id = PolyMatrix::identity(&i.ring, i.rank());
        let model = BlockSum::new(vec![i.clone()])?;
        Ok(FrobeniusDatum {
            w: w.clone(),
            carrier: i,
            mu: mu.clone(),
            eta: id.clone(),
            delta: delta.clone(),
            eps: id,
            pair_model: PairModel {
                model,
                collapse: mu,
                section: delta,
            },
        })
    }

    fn base(&self) -> Ring {
        self.w.ring().clone()
    }

    fn chain(&self, k: usize) -> Result<Chain> {
        Chain::new(&self.base(), vec![self.carrier.clone(); k])
    }
}

fn null_homotopic_blocks(d: &PolyMatrix, src: &BlockSum, tgt: &BlockSum) -> Result<Option<String>> {
    for (i, yi) in tgt.summands.iter().enumerate() {
        let rows = tgt.positions(i);
        for (j, xj) in src.summands.iter().enumerate() {
            let blk = d.submatrix(&rows, &src.positions(j));
            if blk.is_zero() {
                continue;
            }
            let m = Morphism::unchecked(xj, yi, Parity::Even, blk)?;
            if !m.is_chain_map()? {
                return Ok(Some(format!("block ({i},{j}) is not a chain map")));
            }
            if is_null_homotopic(&m)?.is_none() {
                return Ok(Some(format!("block ({i},{j}) is not null-homotopic")));
            }
        }
    }
    Ok(None)
}

fn strict_or_homotopic(
    axiom: &str,
    lhs: &TwistedMap,
    rhs: &TwistedMap,
    homotopy: impl FnOnce(&TwistedMap) -> Result<Option<String>>,
) -> Result<AxiomVerdict> {
    let diff = lhs.difference(rhs)?;
    Ok(match diff {
        None => AxiomVerdict {
            axiom: axiom.into(),
            holds: true,
            strict: true,
            detail: "equal as matrices".into(),
        },
        Some(loc) => {
            let d = lhs.sub(rhs)?;
            match homotopy(&d)? {
                None => AxiomVerdict {
                    axiom: axiom.into(),
                    holds: true,
                    strict: false,
                    detail: format!("holds up to homotopy (not strictly: {loc})"),
                },
                Some(why) => AxiomVerdict {
                    axiom: axiom.into(),
                    holds: false,
                    strict: false,
                    detail: format!("{loc}; {why}"),
                },
            }
        }
    })
}

fn strict_only(axiom: &str, lhs: &TwistedMap, rhs: &TwistedMap) -> Result<AxiomVerdict> {
    let diff = lhs.difference(rhs)?;
    Ok(AxiomVerdict {
        axiom: axiom.into(),
        holds: diff.is_none(),
        strict: diff.is_none(),
        detail: diff.unwrap_or_else(|| "equal as matrices".into()),
    })
}

/// Associativity and left unit are checked as matrix identities; the right unit,
/// separability and both Frobenius relations hold strictly or up to homotopy.
pub fn check_frobenius_axioms(a: &FrobeniusDatum) -> Result<AxiomReport> {
    let base = a.base();
    let unit = identity_defect(&a.w)?;
    let c1 = a.chain(1)?;
    let c2 = a.chain(2)?;
    let c3 = a.chain(3)?;
    let ci = Chain::new(&base, vec![unit.clone()])?;
    let mut verdicts = Vec::new();

    let (m_l, _) = on_factors(&a.mu, false, &c3, 0, &c2, &c1)?;
    let (m_r, _) = on_factors(&a.mu, false, &c3, 1, &c2, &c1)?;
    verdicts.push(strict_only("associativity", &a.mu.compose(&m_l)?, &a.mu.compose(&m_r)?)?);

    let eta = TwistedMap::linear(&unit.ring, a.eta.clone())?;
    let c_ia = Chain::new(&base, vec![unit.clone(), a.carrier.clone()])?;
    let (e_l, _) = on_factors(&eta, false, &c_ia, 0, &ci, &c1)?;
    let (lam, _, _) = unitor(&a.w, &a.carrier, true)?;
    verdicts.push(strict_only("left unit", &a.mu.compose(&e_l)?, &lam)?);

    let c_ai = Chain::new(&base, vec![a.carrier.clone(), unit.clone()])?;
    let (e_r, _) = on_factors(&eta, false, &c_ai, 1, &ci, &c1)?;
    let (rho, _, _) = unitor(&a.w, &a.carrier, false)?;
    let (s_rho, _) = unitor_section(&a.w, &a.carrier, false)?;
    let carrier_sum = BlockSum::new(vec![a.carrier.clone()])?;
    verdicts.push(strict_or_homotopic("right unit", &a.mu.compose(&e_r)?, &rho, |d| {
        let m = d.compose(&s_rho)?.to_matrix()?;
        null_homotopic_blocks(&m, &carrier_sum, &carrier_sum)
    })?);

    let id = TwistedMap::linear(&a.carrier.ring, PolyMatrix::identity(&a.carrier.ring, a.carrier.rank()))?;
    verdicts.push(strict_or_homotopic("separability", &a.mu.compose(&a.delta)?, &id, |d| {
        null_homotopic_blocks(&d.to_matrix()?, &carrier_sum, &carrier_sum)
    })?);

    let pm = &a.pair_model;
    let dm = a.delta.compose(&a.mu)?;
    let (d_l, _) = on_factors(&a.delta, false, &c2, 0, &c1, &c2)?;
    let (d_r, _) = on_factors(&a.delta, false, &c2, 1, &c1, &c2)?;
    let (m_mid_r, _) = on_factors(&a.mu, false, &c3, 1, &c2, &c1)?;
    let (m_mid_l, _) = on_factors(&a.mu, false, &c3, 0, &c2, &c1)?;
    let frob = |d: &TwistedMap| -> Result<Option<String>> {
        let m = pm.collapse.compose(d)?.compose(&pm.section)?.to_matrix()?;
        null_homotopic_blocks(&m, &pm.model, &pm.model)
    };
    verdicts.push(strict_or_homotopic("frobenius (1⊗μ)(Δ⊗1) = Δμ", &m_mid_r.compose(&d_l)?, &dm, frob)?);
    verdicts.push(strict_or_homotopic("frobenius (μ⊗1)(1⊗Δ) = Δμ", &m_mid_l.compose(&d_r)?, &dm, frob)?);
    Ok(AxiomReport { verdicts })
}

/// `x ↦ M_g x` images for base variable `i`, written in group `j` of `chain`.
fn acted_var(action: &GroupAction, g: usize, chain: &Chain, i: usize, j: usize) -> Result<Polynomial> {
    let vars = chain.base.vars();
    match action.vars.iter().position(|v| *v == vars[i]) {
        None => chain.var(i, j),
        Some(a) => {
            let mut out = Polynomial::zero(chain.ring());
            for (b, name) in action.vars.iter().enumerate() {
                let c = &action.elements[g][a][b];
                if c.is_zero() {
                    continue;
                }
                let k = vars
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| Error::Invalid(format!("group acts on unknown variable {name}")))?;
                out = &out + &chain.var(k, j)?.scale(c);
            }
            Ok(out)
        }
    }
}

/// `A_G = ⊕_g _gI` with its structure maps.
#[derive(Clone, Debug)]
pub struct OrbifoldAlgebra {
    pub action: GroupAction,
    pub sectors: BlockSum,
    pub datum: FrobeniusDatum,
}

/// Images for `μ_{g,·}`: the intermediate group goes to `M_g x`.
fn mu_images(action: &GroupAction, g: usize, src: &Chain, tgt: &Chain) -> Result<Vec<Polynomial>> {
    let k = src.len();
    src.ring()
        .vars()
        .iter()
        .map(|name| {
            let (i, j) = locate(name, src.base.vars(), k)?;
            match j {
                0 => tgt.var(i, 0),
                1 => acted_var(action, g, tgt, i, 0),
                _ => tgt.var(i, j - 1),
            }
        })
        .collect()
}

/// Builds `A_G` for a potential invariant under `action`.
pub fn build_ag(w: &Polynomial, action: &GroupAction) -> Result<OrbifoldAlgebra> {
    action.check_invariant(w)?;
    let base = w.ring().clone();
    if base.field() != action.field {
        return Err(Error::FieldMismatch(base.field().to_string(), action.field.to_string()));
    }
    let unit = identity_defect(w)?;
    let order = action.order();
    let sectors: Vec<MatrixFactorisation> = (0..order).map(|g| twist(action, g, &unit)).collect::<Result<_>>()?;
    let sum = BlockSum::new(sectors.clone())?;
    let a = sum.mf.clone();
    let c1 = Chain::new(&base, vec![a.clone()])?;
    let c2 = Chain::new(&base, vec![a.clone(), a.clone()])?;
    let ring = a.ring.clone();
    let field = base.field();
    let rk = unit.rank();

    let pairs: Vec<(usize, usize)> = (0..order).flat_map(|g| (0..order).map(move |h| (g, h))).collect();
    let model = BlockSum::new(pairs.iter().map(|&(g, h)| sectors[action.mul(g, h)].clone()).collect())?;

    let mut mu = TwistedMap::zero(c2.ring(), &ring, a.rank(), c2.rank());
    let mut collapse = TwistedMap::zero(c2.ring(), &ring, model.mf.rank(), c2.rank());
    for g in 0..order {
        let mut m = PolyMatrix::zeros(&ring, a.rank(), c2.rank());
        let mut cm = PolyMatrix::zeros(&ring, model.mf.rank(), c2.rank());
        for h in 0..order {
            let gh = action.mul(g, h);
            for b in 0..rk {
                let col = c2.position(&[sum.pos(g, 0), sum.pos(h, b)]).unwrap();
                m.set(sum.pos(gh, b), col, Polynomial::one(&ring));
                cm.set(model.pos(g * order + h, b), col, Polynomial::one(&ring));
            }
        }
        let ims = mu_images(action, g, &c2, &c1)?;
        mu.terms.push((ims.clone(), m));
        collapse.terms.push((ims, cm));
    }
    let mu = mu.normalise()?;
    let collapse = collapse.normalise()?;

    let inv_order = Scalar::from_ratio(field, 1, order as i64);
    let mut delta = PolyMatrix::zeros(c2.ring(), c2.rank(), a.rank());
    let mut section = PolyMatrix::zeros(c2.ring(), c2.rank(), model.mf.rank());
    for h in 0..order {
        let (s, chain) = unitor_section(w, &sectors[h], true)?;
        let sm = &s.terms[0].1;
        for g in 0..order {
            let gh = action.mul(g, h);
            let tw = action.act_matrix(g, sm)?;
            for (r, tup) in chain.tuples.iter().enumerate() {
                let row = c2.position(&[sum.pos(g, tup[0]), sum.pos(h, tup[1])]).unwrap();
                for b in 0..rk {
                    let e = tw.get(r, b);
                    if e.is_zero() {
                        continue;
                    }
                    let e = e.embed(c2.ring())?;
                    let col = sum.pos(gh, b);
                    delta.set(row, col, delta.get(row, col) + &e.scale(&inv_order));
                    section.set(row, model.pos(g * order + h, b), e);
                }
            }
        }
    }
    let delta = TwistedMap::linear(&ring, delta)?;
    let section = TwistedMap::linear(&ring, section)?;
    let e = action.identity;
    let eta = sum.inclusion(e);
    let eps = eta.transpose().scale(&Scalar::from_int(field, order as i64));
    Ok(OrbifoldAlgebra {
        action: action.clone(),
        sectors: sum,
        datum: FrobeniusDatum {
            w: w.clone(),
            carrier: a,
            mu,
            eta,
            delta,
            eps,
            pair_model: PairModel {
                model,
                collapse,
                section,
            },
        },
    })
}

fn scalar_det(m: &[Vec<Scalar>], field: crate::scalar::FieldSpec) -> Result<Scalar> {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut det = Scalar::one(field);
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Ok(Scalar::zero(field));
        };
        if piv != c {
            a.swap(piv, c);
            det = det.neg();
        }
        det = &det * &a[c][c];
        let inv = a[c][c].invert()?;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] * &inv;
            for k in c..n {
                let t = &a[c][k] * &f;
                a[r][k] = &a[r][k] - &t;
            }
        }
    }
    Ok(det)
}

/// Whether `A_G` is symmetric: `det(g) = 1` for all `g`, cross-checked against
/// `dim_r(_gI) = 1` computed by residues. Disagreement is an internal error.
pub fn ag_is_symmetric(w: &Polynomial, action: &GroupAction) -> Result<bool> {
    action.check_invariant(w)?;
    let unit = identity_defect(w)?;
    let mut by_det = true;
    let mut by_residue = true;
    for g in 0..action.order() {
        let det = scalar_det(&action.elements[g], action.field)?;
        let tw = twist(action, g, &unit)?;
        let d = quantum_dim(&tw, Side::Right, None)?;
        by_det &= det.is_one();
        by_residue &= d.value.is_one();
        if d.value.is_constant() && d.value.constant_term() != det {
            return Err(Error::Internal(format!(
                "dim_r of the twisted identity for element {g} is {} but det is {det}",
                d.value
            )));
        }
    }
    if by_det != by_residue {
        return Err(Error::Internal("determinant and residue routes disagree on symmetry".into()));
    }
    Ok(by_det)
}

/// `{φ_g: _gX -> X}` for a boundary condition `X` of `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantStructure {
    pub action: GroupAction,
    pub base: MatrixFactorisation,
    pub phis: Vec<PolyMatrix>,
}

impl EquivariantStructure {
    pub fn new(action: &GroupAction, base: &MatrixFactorisation, phis: Vec<PolyMatrix>) -> Result<EquivariantStructure> {
        let e = EquivariantStructure {
            action: action.clone(),
            base: base.clone(),
            phis,
        };
        e.validate()?;
        Ok(e)
    }

    /// Structure on a cyclic group from the map for a generator.
    pub fn cyclic(action: &GroupAction, base: &MatrixFactorisation, g: usize, phi_g: PolyMatrix) -> Result<EquivariantStructure> {
        EquivariantStructure::generated(action, base, &[(g, phi_g)])
    }

    /// Structure from the maps for a generating set; the rest is forced by the cocycle
    /// condition `φ_{g·h} = φ_g ∘ _g(φ_h)`, which must be consistent.
    pub fn generated(action: &GroupAction, base: &MatrixFactorisation, gens: &[(usize, PolyMatrix)]) -> Result<EquivariantStructure> {
        let order = action.order();
        let mut phis: Vec<Option<PolyMatrix>> = vec![None; order];
        phis[action.identity] = Some(PolyMatrix::identity(&base.ring, base.rank()));
        let mut queue = vec![action.identity];
        while let Some(h) = queue.pop() {
            let ph = phis[h].clone().unwrap();
            for (g, pg) in gens {
                if *g >= order {
                    return Err(Error::Invalid(format!("group element {g} out of range (order {order})")));
                }
                let gh = action.mul(*g, h);
                let m = pg.try_mul(&action.act_matrix(*g, &ph)?)?;
                match &phis[gh] {
                    Some(prev) if *prev != m => {
                        return Err(Error::Cocycle(format!("generator maps are inconsistent at element {gh}")));
                    }
                    Some(_) => {}
                    None => {
                        phis[gh] = Some(m);
                        queue.push(gh);
                    }
                }
            }
        }
        let phis = phis
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Invalid("elements do not generate the group".into()))?;
        EquivariantStructure::new(action, base, phis)
    }

    pub fn validate(&self) -> Result<()> {
        let x = &self.base;
        let order = self.action.order();
        if self.phis.len() != order {
            return Err(Error::Shape(format!("{} maps for a group of order {order}", self.phis.len())));
        }
        if self.phis[self.action.identity] != PolyMatrix::identity(&x.ring, x.rank()) {
            return Err(Error::Cocycle("φ_e is not the identity".into()));
        }
        for g in 0..order {
            Morphism::new(&twist(&self.action, g, x)?, x, Parity::Even, self.phis[g].clone())?;
        }
        for g in 0..order {
            for h in 0..order {
                let rhs = self.phis[g].try_mul(&self.action.act_matrix(g, &self.phis[h])?)?;
                if self.phis[self.action.mul(g, h)] != rhs {
                    return Err(Error::Cocycle(format!("φ_(gh) ≠ φ_g ∘ _g(φ_h) for g = {g}, h = {h}")));
                }
            }
        }
        Ok(())
    }
}

/// Text form of an equivariant structure: for each generator, its substitution matrix and
/// the map `φ_g` as polynomial strings over the factorisation's ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivariantDescriptor {
    pub generators: Vec<GeneratorMap>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorMap {
    pub element: Vec<Vec<String>>,
    pub phi: Vec<Vec<String>>,
}

impl EquivariantDescriptor {
    pub fn build(&self, action: &GroupAction, base: &MatrixFactorisation) -> Result<EquivariantStructure> {
        let mut gens = Vec::with_capacity(self.generators.len());
        for gm in &self.generators {
            let m = gm
                .element
                .iter()
                .map(|r| r.iter().map(|e| Scalar::parse(action.field, e)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let g = action
                .find(&m)
                .ok_or_else(|| Error::Invalid("generator matrix is not an element of the group".into()))?;
            gens.push((g, PolyMatrix::parse(&base.ring, &gm.phi)?));
        }
        EquivariantStructure::generated(action, base, &gens)
    }

    pub fn from_json(s: &str) -> Result<EquivariantDescriptor> {
        serde_json::from_str(s).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }
}

/// Left action `ρ: A ⊗ X -> X`.
#[derive(Clone, Debug)]
pub struct ModuleAction {
    pub carrier: MatrixFactorisation,
    pub rho: TwistedMap,
}

/// Left and right actions on a defect `M: W -> W`.
#[derive(Clone, Debug)]
pub struct BimoduleAction {
    pub carrier: MatrixFactorisation,
    pub left: TwistedMap,
    pub right: TwistedMap,
}

impl BimoduleAction {
    /// `A` acting on itself by multiplication.
    pub fn regular(a: &FrobeniusDatum) -> BimoduleAction {
        BimoduleAction {
            carrier: a.carrier.clone(),
            left: a.mu.clone(),
            right: a.mu.clone(),
        }
    }
}

/// `ρ(μ ⊗ 1) = ρ(1 ⊗ ρ)` and `ρ(η ⊗ 1) = λ_X`, both as matrix identities.
pub fn check_module_axioms(a: &FrobeniusDatum, m: &ModuleAction) -> Result<()> {
    let base = a.w.ring().clone();
    let x = &m.carrier;
    let unit = identity_defect(&a.w)?;
    let c_ax = Chain::new(&base, vec![a.carrier.clone(), x.clone()])?;
    let c_aax = Chain::new(&base, vec![a.carrier.clone(), a.carrier.clone(), x.clone()])?;
    let c_aa = Chain::new(&base, vec![a.carrier.clone(), a.carrier.clone()])?;
    let c_a = Chain::new(&base, vec![a.carrier.clone()])?;
    let c_x = Chain::new(&base, vec![x.clone()])?;
    let (mu1, _) = on_factors(&a.mu, false, &c_aax, 0, &c_aa, &c_a)?;
    let (rho1, _) = on_factors(&m.rho, false, &c_aax, 1, &c_ax, &c_x)?;
    if let Some(loc) = m.rho.compose(&mu1)?.difference(&m.rho.compose(&rho1)?)? {
        return Err(Error::ModuleAxiom(format!("action is not compatible with multiplication: {loc}")));
    }
    let c_ix = Chain::new(&base, vec![unit.clone(), x.clone()])?;
    let c_i = Chain::new(&base, vec![unit.clone()])?;
    let eta = TwistedMap::linear(&unit.ring, a.eta.clone())?;
    let (e1, _) = on_factors(&eta, false, &c_ix, 0, &c_i, &c_a)?;
    let (lam, _, _) = unitor(&a.w, x, true)?;
    if let Some(loc) = m.rho.compose(&e1)?.difference(&lam)? {
        return Err(Error::ModuleAxiom(format!("unit does not act as λ: {loc}")));
    }
    Ok(())
}

/// `ρ_g = φ_g ∘ _g(λ_X)` on the summand `_gI ⊗ X`.
pub fn equivariant_to_module(e: &EquivariantStructure, ag: &OrbifoldAlgebra) -> Result<ModuleAction> {
    e.validate()?;
    if e.action != ag.action {
        return Err(Error::Invalid("equivariant structure and algebra use different groups".into()));
    }
    let a = &ag.datum;
    let x = &e.base;
    let base = a.w.ring().clone();
    let c_ax = Chain::new(&base, vec![a.carrier.clone(), x.clone()])?;
    let c_x = Chain::new(&base, vec![x.clone()])?;
    let mut rho = TwistedMap::zero(c_ax.ring(), c_x.ring(), x.rank(), c_ax.rank());
    for g in 0..ag.action.order() {
        let mut m = PolyMatrix::zeros(c_x.ring(), x.rank(), c_ax.rank());
        for b in 0..x.rank() {
            let col = c_ax.position(&[ag.sectors.pos(g, 0), b]).unwrap();
            for r in 0..x.rank() {
                m.set(r, col, e.phis[g].get(r, b).embed(c_x.ring())?);
            }
        }
        rho.terms.push((mu_images(&ag.action, g, &c_ax, &c_x)?, m));
    }
    let out = ModuleAction {
        carrier: x.clone(),
        rho: rho.normalise()?,
    };
    check_module_axioms(a, &out)?;
    Ok(out)
}

/// `φ_g = ρ ∘ (ι_g ⊗ 1) ∘ _g(λ_X^{-1})`.
pub fn module_to_equivariant(m: &ModuleAction, ag: &OrbifoldAlgebra) -> Result<EquivariantStructure> {
    let a = &ag.datum;
    check_module_axioms(a, m)?;
    let x = &m.carrier;
    let base = a.w.ring().clone();
    let (s, _) = unitor_section(&a.w, x, true)?;
    let c_a = Chain::new(&base, vec![a.carrier.clone()])?;
    let mut phis = Vec::new();
    for g in 0..ag.action.order() {
        let sector = &ag.sectors.summands[g];
        let tw = TwistedMap::linear(&x.ring, ag.action.act_matrix(g, &s.terms[0].1)?)?;
        let c_gx = Chain::new(&base, vec![sector.clone(), x.clone()])?;
        let c_g = Chain::new(&base, vec![sector.clone()])?;
        let inc = TwistedMap::linear(&sector.ring, ag.sectors.inclusion(g))?;
        let (inc1, _) = on_factors(&inc, false, &c_gx, 0, &c_g, &c_a)?;
        let phi = m.rho.compose(&inc1)?.compose(&tw)?.to_matrix()?;
        phis.push(phi.try_map(&x.ring, |p| p.embed(&x.ring))?);
    }
    EquivariantStructure::new(&ag.action, x, phis)
}

fn morphism_map(f: &PolyMatrix, source: &Ring) -> Result<TwistedMap> {
    TwistedMap::linear(source, f.clone())
}

/// `(Δη) ⊗ 1` followed by the action, precomposed with `λ_X^{-1}`: `X -> A ⊗ X`.
fn left_averaging(a: &FrobeniusDatum, x: &MatrixFactorisation, rho_x: &TwistedMap) -> Result<TwistedMap> {
    let base = a.w.ring().clone();
    let unit = identity_defect(&a.w)?;
    let (s, c_ix) = unitor_section(&a.w, x, true)?;
    let eta = TwistedMap::linear(&unit.ring, a.eta.clone())?;
    let de = a.delta.compose(&eta)?;
    let c_i = Chain::new(&base, vec![unit])?;
    let c_aa = Chain::new(&base, vec![a.carrier.clone(), a.carrier.clone()])?;
    let (de1, c_aax) = on_factors(&de, false, &c_ix, 0, &c_i, &c_aa)?;
    let c_ax = Chain::new(&base, vec![a.carrier.clone(), x.clone()])?;
    let c_x = Chain::new(&base, vec![x.clone()])?;
    let (r1, _) = on_factors(rho_x, false, &c_aax, 1, &c_ax, &c_x)?;
    r1.compose(&de1)?.compose(&s)
}

fn right_averaging(a: &FrobeniusDatum, x: &MatrixFactorisation, rho_x: &TwistedMap) -> Result<TwistedMap> {
    let base = a.w.ring().clone();
    let unit = identity_defect(&a.w)?;
    let (s, c_xi) = unitor_section(&a.w, x, false)?;
    let eta = TwistedMap::linear(&unit.ring, a.eta.clone())?;
    let de = a.delta.compose(&eta)?;
    let c_i = Chain::new(&base, vec![unit])?;
    let c_aa = Chain::new(&base, vec![a.carrier.clone(), a.carrier.clone()])?;
    let (de1, c_xaa) = on_factors(&de, false, &c_xi, 1, &c_i, &c_aa)?;
    let c_xa = Chain::new(&base, vec![x.clone(), a.carrier.clone()])?;
    let c_x = Chain::new(&base, vec![x.clone()])?;
    let (r1, _) = on_factors(rho_x, false, &c_xaa, 0, &c_xa, &c_x)?;
    r1.compose(&de1)?.compose(&s)
}

/// `π_A(f) = ρ_Y ∘ (1 ⊗ f) ∘ (1 ⊗ ρ_X) ∘ (Δη ⊗ 1) ∘ λ_X^{-1}` on maps between left modules.
pub struct LeftProjector {
    base: Ring,
    a: MatrixFactorisation,
    x: MatrixFactorisation,
    y: MatrixFactorisation,
    pre: TwistedMap,
    rho_y: TwistedMap,
}

impl LeftProjector {
    pub fn new(a: &FrobeniusDatum, x: &MatrixFactorisation, rho_x: &TwistedMap, y: &MatrixFactorisation, rho_y: &TwistedMap) -> Result<LeftProjector> {
        Ok(LeftProjector {
            base: a.w.ring().clone(),
            a: a.carrier.clone(),
            x: x.clone(),
            y: y.clone(),
            pre: left_averaging(a, x, rho_x)?,
            rho_y: rho_y.clone(),
        })
    }

    pub fn apply(&self, f: &Morphism) -> Result<PolyMatrix> {
        let c_ax = Chain::new(&self.base, vec![self.a.clone(), self.x.clone()])?;
        let c_x = Chain::new(&self.base, vec![self.x.clone()])?;
        let c_y = Chain::new(&self.base, vec![self.y.clone()])?;
        let fm = morphism_map(&f.matrix, &self.x.ring)?;
        let (f1, _) = on_factors(&fm, f.parity == Parity::Odd, &c_ax, 1, &c_x, &c_y)?;
        let out = self.rho_y.compose(&f1)?.compose(&self.pre)?.to_matrix()?;
        out.try_map(&self.y.ring, |p| p.embed(&self.y.ring))
    }
}

/// Mirror image of [`LeftProjector`] for right actions.
pub struct RightProjector {
    base: Ring,
    a: MatrixFactorisation,
    x: MatrixFactorisation,
    y: MatrixFactorisation,
    pre: TwistedMap,
    rho_y: TwistedMap,
}

impl RightProjector {
    pub fn new(a: &FrobeniusDatum, x: &MatrixFactorisation, rho_x: &TwistedMap, y: &MatrixFactorisation, rho_y: &TwistedMap) -> Result<RightProjector> {
        Ok(RightProjector {
            base: a.w.ring().clone(),
            a: a.carrier.clone(),
            x: x.clone(),
            y: y.clone(),
            pre: right_averaging(a, x, rho_x)?,
            rho_y: rho_y.clone(),
        })
    }

    pub fn apply(&self, f: &Morphism) -> Result<PolyMatrix> {
        let c_xa = Chain::new(&self.base, vec![self.x.clone(), self.a.clone()])?;
        let c_x = Chain::new(&self.base, vec![self.x.clone()])?;
        let c_y = Chain::new(&self.base, vec![self.y.clone()])?;
        let fm = morphism_map(&f.matrix, &self.x.ring)?;
        let (f1, _) = on_factors(&fm, f.parity == Parity::Odd, &c_xa, 0, &c_x, &c_y)?;
        let out = self.rho_y.compose(&f1)?.compose(&self.pre)?.to_matrix()?;
        out.try_map(&self.y.ring, |p| p.embed(&self.y.ring))
    }
}

/// Image of a projector on `H^p(X, Y)`: its rank and representatives of a basis.
fn projector_image(
    x: &MatrixFactorisation,
    y: &MatrixFactorisation,
    parity: Parity,
    proj: impl Fn(&Morphism) -> Result<PolyMatrix>,
) -> Result<Vec<Morphism>> {
    let coh = Cohomology::compute(x, y, parity)?;
    let basis = coh.basis();
    let mut images = Vec::new();
    let mut coords = Vec::new();
    for b in &basis {
        let m = proj(b)?;
        coords.push(coh.coordinates(&m)?);
        images.push(m);
    }
    if coords.is_empty() {
        return Ok(vec![]);
    }
    // columns are the images, so pivot columns pick independent ones
    let cols: Vec<Vec<Scalar>> = (0..coords[0].len()).map(|r| coords.iter().map(|c| c[r].clone()).collect()).collect();
    if cols.is_empty() {
        return Ok(vec![]);
    }
    let (_, pivots) = scalar_rank(&cols);
    Ok(pivots
        .into_iter()
        .map(|i| Morphism {
            source: x.clone(),
            target: y.clone(),
            parity,
            matrix: images[i].clone(),
        })
        .collect())
}

/// `(dim, dim)` of the even and odd module maps `X -> Y`, as images of `π_A`.
pub fn orbifold_hom(a: &FrobeniusDatum, x: &ModuleAction, y: &ModuleAction) -> Result<(usize, usize)> {
    let pi = LeftProjector::new(a, &x.carrier, &x.rho, &y.carrier, &y.rho)?;
    let e = projector_image(&x.carrier, &y.carrier, Parity::Even, |f| pi.apply(f))?;
    let o = projector_image(&x.carrier, &y.carrier, Parity::Odd, |f| pi.apply(f))?;
    Ok((e.len(), o.len()))
}

/// Representatives of the bimodule maps `X -> Y` of the given parity (image of `π_{AA}`).
pub fn bimodule_hom_basis(a: &FrobeniusDatum, x: &BimoduleAction, y: &BimoduleAction, parity: Parity) -> Result<Vec<Morphism>> {
    let pl = LeftProjector::new(a, &x.carrier, &x.left, &y.carrier, &y.left)?;
    let pr = RightProjector::new(a, &x.carrier, &x.right, &y.carrier, &y.right)?;
    projector_image(&x.carrier, &y.carrier, parity, |f| {
        let r = pr.apply(f)?;
        pl.apply(&Morphism {
            source: f.source.clone(),
            target: f.target.clone(),
            parity: f.parity,
            matrix: r,
        })
    })
}

pub fn bimodule_hom(a: &FrobeniusDatum, x: &BimoduleAction, y: &BimoduleAction) -> Result<(usize, usize)> {
    Ok((
        bimodule_hom_basis(a, x, y, Parity::Even)?.len(),
        bimodule_hom_basis(a, x, y, Parity::Odd)?.len(),
    ))
}

/// Kapustin–Li pairing of `φ1 ∘ φ2` on the carrier of `A`, a factorisation of
/// `W(x) - W(x')` over the doubled ring.
pub fn orbifold_pairing(a: &FrobeniusDatum, phi1: &PolyMatrix, phi2: &PolyMatrix) -> Result<Scalar> {
    kapustin_li(phi1, phi2, &a.carrier)
}

/// Gram matrix of the orbifold pairing on the bulk space `End_{AA}(A)` in one parity
/// (paired with the same parity, since the doubled variable count is even).
pub fn orbifold_bulk_gram(a: &FrobeniusDatum, parity: Parity) -> Result<Vec<Vec<Scalar>>> {
    let reg = BimoduleAction::regular(a);
    let basis = bimodule_hom_basis(a, &reg, &reg, parity)?;
    let mut g = Vec::new();
    for u in &basis {
        let mut row = Vec::new();
        for v in &basis {
            row.push(orbifold_pairing(a, &u.matrix, &v.matrix)?);
        }
        g.push(row);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldSpec;

    fn ring(v: &[&str]) -> Ring {
        RingSpec::new(FieldSpec::Rationals, v).unwrap()
    }
    fn p(r: &Ring, s: &str) -> Polynomial {
        Polynomial::parse(r, s).unwrap()
    }

    fn check_section(w: &Polynomial, y: &MatrixFactorisation, left: bool) {
        let (s, chain) = unitor_section(w, y, left).unwrap();
        let sm = &s.terms[0].1;
        let dy = y.differential().try_map(chain.ring(), |q| q.embed(chain.ring())).unwrap();
        let lhs = chain.mf.differential().try_mul(sm).unwrap();
        let rhs = sm.try_mul(&dy).unwrap();
        assert_eq!(lhs, rhs, "section is not a chain map");
        let (l, _, _) = unitor(w, y, left).unwrap();
        let ls = l.compose(&s).unwrap().to_matrix().unwrap();
        assert_eq!(ls, PolyMatrix::identity(ls.ring(), y.rank()));
    }

    #[test]
    fn unit_sections_one_variable() {
        let r = ring(&["x"]);
        let w = p(&r, "x^3");
        let i = identity_defect(&w).unwrap();
        check_section(&w, &i, true);
        check_section(&w, &i, false);
        let x = koszul(&r, &[(p(&r, "x"), p(&r, "x^2"))]).unwrap();
        check_section(&w, &x, true);
    }

    #[test]
    fn unit_sections_two_variables() {
        let r = ring(&["x", "y"]);
        let w = p(&r, "x^4 - y^2 + x y");
        let i = identity_defect(&w).unwrap();
        check_section(&w, &i, true);
        check_section(&w, &i, false);
        let x = koszul(&r, &[(p(&r, "x"), p(&r, "x^3 + y")), (p(&r, "y"), p(&r, "-y"))]).unwrap();
        check_section(&w, &x, true);
    }

    #[test]
    fn unit_algebra_axioms() {
        let r = ring(&["x"]);
        let a = FrobeniusDatum::unit(&p(&r, "x^3")).unwrap();
        let rep = check_frobenius_axioms(&a).unwrap();
        for v in &rep.verdicts {
            eprintln!("{v:?}");
        }
        assert!(rep.all_hold());
        assert!(rep.get("associativity").unwrap().strict);
    }

    fn cyc(w: &str, vars: &[&str], n: u32, weights: &[i64]) -> (Polynomial, GroupAction) {
        let f = if n > 2 { FieldSpec::Cyclotomic(n) } else { FieldSpec::Rationals };
        let r = RingSpec::new(f, vars).unwrap();
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        (p(&r, w), GroupAction::diagonal_cyclic(f, &names, n, weights).unwrap())
    }

    #[test]
    fn ag_axioms_x2() {
        let (w, g) = cyc("x^2", &["x"], 2, &[1]);
        let ag = build_ag(&w, &g).unwrap();
        assert_eq!((ag.datum.carrier.r0(), ag.datum.carrier.r1()), (2, 2));
        let rep = check_frobenius_axioms(&ag.datum).unwrap();
        for v in &rep.verdicts {
            eprintln!("{v:?}");
        }
        assert!(rep.all_hold());
    }

    #[test]
    fn ag_axioms_cubic_z3() {
        let (w, g) = cyc("x^3", &["x"], 3, &[1]);
        let ag = build_ag(&w, &g).unwrap();
        assert!(check_frobenius_axioms(&ag.datum).unwrap().all_hold());
    }

    #[test]
    fn ag_axioms_two_variables() {
        let (w, g) = cyc("x^4 - y^2", &["x", "y"], 2, &[1, 1]);
        let ag = build_ag(&w, &g).unwrap();
        let rep = check_frobenius_axioms(&ag.datum).unwrap();
        assert!(rep.all_hold(), "{rep:?}");
        assert!(rep.get("associativity").unwrap().strict);
        assert!(rep.get("left unit").unwrap().strict);
    }

    #[test]
    fn corrupted_multiplication_is_located() {
        let (w, g) = cyc("x^3", &["x"], 3, &[1]);
        let mut ag = build_ag(&w, &g).unwrap();
        let (_, m) = &mut ag.datum.mu.terms[1];
        let (i, j) = (0..m.rows())
            .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
            .find(|&(i, j)| !m.get(i, j).is_zero())
            .unwrap();
        let two = m.get(i, j).scale(&Scalar::from_int(FieldSpec::Cyclotomic(3), 2));
        m.set(i, j, two);
        let rep = check_frobenius_axioms(&ag.datum).unwrap();
        let v = rep.get("associativity").unwrap();
        assert!(!v.holds);
        assert!(v.detail.contains("entry"), "{}", v.detail);
    }

    #[test]
    fn scaled_comultiplication_breaks_separability() {
        let r = ring(&["x"]);
        let mut a = FrobeniusDatum::unit(&p(&r, "x^3")).unwrap();
        a.delta = a.delta.scale(&Scalar::from_int(FieldSpec::Rationals, 2));
        let rep = check_frobenius_axioms(&a).unwrap();
        assert!(!rep.get("separability").unwrap().holds);
    }

    fn monomial_x(d: i64, n: i64) -> (Polynomial, GroupAction, MatrixFactorisation, EquivariantStructure) {
        let f = FieldSpec::Cyclotomic(d as u32);
        let r = RingSpec::new(f, &["x"]).unwrap();
        let w = p(&r, &format!("x^{d}"));
        let g = GroupAction::diagonal_cyclic(f, &["x".to_string()], d as u32, &[1]).unwrap();
        let x = koszul(&r, &[(p(&r, &format!("x^{n}")), p(&r, &format!("x^{}", d - n)))]).unwrap();
        let eta = Scalar::zeta(f);
        let phi = PolyMatrix::from_scalars(&r, &[
            vec![Scalar::one(f), Scalar::zero(f)],
            vec![Scalar::zero(f), eta.pow(n).unwrap()],
        ]);
        let gen = (0..g.order()).find(|&k| g.elements[k][0][0] == eta).unwrap();
        let e = EquivariantStructure::cyclic(&g, &x, gen, phi).unwrap();
        (w, g, x, e)
    }

    #[test]
    fn equivariant_round_trip() {
        for (d, n) in [(3, 1), (4, 1), (4, 2), (5, 2)] {
            let (w, g, _, e) = monomial_x(d, n);
            let ag = build_ag(&w, &g).unwrap();
            let m = equivariant_to_module(&e, &ag).unwrap();
            let back = module_to_equivariant(&m, &ag).unwrap();
            assert_eq!(back, e);
            let m2 = equivariant_to_module(&back, &ag).unwrap();
            assert!(m2.rho.difference(&m.rho).unwrap().is_none());
        }
    }

    #[test]
    fn non_root_of_unity_scaling_breaks_cocycle() {
        let (_, g, x, e) = monomial_x(3, 1);
        let gen = (0..g.order()).find(|&k| k != g.identity && g.mul(k, k) != g.identity && e.phis[k].get(1, 1) == &Polynomial::constant(&x.ring, Scalar::zeta(g.field))).unwrap();
        let bad = e.phis[gen].scale(&Scalar::from_int(g.field, 2));
        assert!(matches!(EquivariantStructure::cyclic(&g, &x, gen, bad), Err(Error::Cocycle(_))));
    }

    #[test]
    fn equivariant_end_is_one_dimensional() {
        let (w, g, x, e) = monomial_x(5, 2);
        let ag = build_ag(&w, &g).unwrap();
        let m = equivariant_to_module(&e, &ag).unwrap();
        assert_eq!(crate::homalg::hom_dimensions(&x, &x).unwrap().0, 2);
        assert_eq!(orbifold_hom(&ag.datum, &m, &m).unwrap().0, 1);
        let one = PolyMatrix::identity(&x.ring, 2);
        assert!(kapustin_li(&one, &one, &x).unwrap().is_zero());
    }

    #[test]
    fn symmetry_predicate() {
        let (w, g) = cyc("x^3", &["x"], 3, &[1]);
        assert!(!ag_is_symmetric(&w, &g).unwrap());
        let (w, g) = cyc("x^4 - y^2", &["x", "y"], 2, &[1, 1]);
        assert!(ag_is_symmetric(&w, &g).unwrap());
        let (w, g) = cyc("x^3", &["x"], 1, &[1]);
        assert!(ag_is_symmetric(&w, &g).unwrap());
    }

    #[test]
    fn regular_module_maps_match_unit_sector_count() {
        let (w, g) = cyc("x^3", &["x"], 3, &[1]);
        let ag = build_ag(&w, &g).unwrap();
        let a = &ag.datum;
        let reg = ModuleAction {
            carrier: a.carrier.clone(),
            rho: a.mu.clone(),
        };
        let unit = identity_defect(&w).unwrap();
        let expect = crate::homalg::hom_dimensions(&unit, &a.carrier).unwrap();
        assert_eq!(orbifold_hom(a, &reg, &reg).unwrap(), expect);
    }

    #[test]
    fn bulk_space_of_x2_orbifold() {
        let (w, g) = cyc("x^2", &["x"], 2, &[1]);
        let ag = build_ag(&w, &g).unwrap();
        let reg = BimoduleAction::regular(&ag.datum);
        let (e, o) = bimodule_hom(&ag.datum, &reg, &reg).unwrap();
        // g acts on the odd twisted class of Hom(I, _gI) by det g = −1
        assert_eq!((e, o), (1, 0));
        assert_eq!((e, o), (bulk_oracle(&ag.datum, Parity::Even), bulk_oracle(&ag.datum, Parity::Odd)));
        assert_eq!(crate::homalg::hom_dimensions(&ag.datum.carrier, &ag.datum.carrier).unwrap(), (2, 2));
    }

    fn gram_rank(g: &[Vec<Scalar>]) -> usize {
        if g.is_empty() { 0 } else { scalar_rank(g).0 }
    }

    #[test]
    fn symmetric_orbifold_bulk_pairing_is_nondegenerate() {
        // Jac(x⁴−y²)^ℤ₂ = span{1, x²} plus one invariant twisted state (det g = 1)
        let (w, g) = cyc("x^4-y^2", &["x", "y"], 2, &[1, 1]);
        assert!(ag_is_symmetric(&w, &g).unwrap());
        let ag = build_ag(&w, &g).unwrap();
        let reg = BimoduleAction::regular(&ag.datum);
        assert_eq!(bimodule_hom(&ag.datum, &reg, &reg).unwrap(), (3, 0));
        let gram = orbifold_bulk_gram(&ag.datum, Parity::Even).unwrap();
        assert_eq!(gram_rank(&gram), 3);
    }

    #[test]
    fn non_symmetric_orbifold_bulk_pairing_degenerates() {
        // only 1 survives; twisted states carry det g = ζ^k ≠ 1, and ⟨1,1⟩ = Res[1/3x²] = 0
        let (w, g) = cyc("x^3", &["x"], 3, &[1]);
        assert!(!ag_is_symmetric(&w, &g).unwrap());
        let ag = build_ag(&w, &g).unwrap();
        let reg = BimoduleAction::regular(&ag.datum);
        assert_eq!(bimodule_hom(&ag.datum, &reg, &reg).unwrap(), (1, 0));
        let gram = orbifold_bulk_gram(&ag.datum, Parity::Even).unwrap();
        assert_eq!(gram_rank(&gram), 0);
    }

    /// Classes `f` in `H^p(End A)` with `fμ ≃ μ(1⊗f)` and `fμ ≃ μ(f⊗1)`, tested on the
    /// finite pair model; independent of the projector construction.
    fn bulk_oracle(a: &FrobeniusDatum, parity: Parity) -> usize {
        let base = a.w.ring().clone();
        let c1 = Chain::new(&base, vec![a.carrier.clone()]).unwrap();
        let c2 = Chain::new(&base, vec![a.carrier.clone(), a.carrier.clone()]).unwrap();
        let coh = Cohomology::compute(&a.carrier, &a.carrier, parity).unwrap();
        let model = &a.pair_model.model.mf;
        let target = Cohomology::compute(model, &a.carrier, parity).unwrap();
        let odd = parity == Parity::Odd;
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for b in coh.basis() {
            let f = TwistedMap::linear(&a.carrier.ring, b.matrix.clone()).unwrap();
            let (f1, _) = on_factors(&f, odd, &c2, 1, &c1, &c1).unwrap();
            let (f0, _) = on_factors(&f, odd, &c2, 0, &c1, &c1).unwrap();
            let fm = f.compose(&a.mu).unwrap();
            let mut row = Vec::new();
            for g in [f1, f0] {
                let d = fm.sub(&a.mu.compose(&g).unwrap()).unwrap();
                let m = d.compose(&a.pair_model.section).unwrap().to_matrix().unwrap();
                row.extend(target.coordinates(&m).unwrap());
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return 0;
        }
        let cols: Vec<Vec<Scalar>> = (0..rows[0].len()).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect();
        let rank = if cols.is_empty() { 0 } else { scalar_rank(&cols).0 };
        rows.len() - rank
    }
}
