//! Tensor products of matrix factorisations and fusion over intermediate variables.
//!
//! Fusion eliminates the intermediate variables one at a time. For a variable `t` with
//! `t^N = Σ_j C_j ∂_j V`, multiplication by `t^N` on `F = Y ⊗ X` is null-homotopic via
//! `h = Σ_j C_j γ_Y ⊗ ∂_j d_X`. The finite-rank quotient `M = F / t^N F` is homotopy
//! equivalent to `F ⊕ F[1]`, and `e = 1 - q h ρ` (with `ρ = (d rep - rep d) / t^N`)
//! is an idempotent up to homotopy on `M` whose image is `F`. Its image is split off
//! after a minimal model and Newton strictification.

use std::collections::HashMap;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::groebner::buchberger;
use crate::homalg::{minimal_model, split_strict, strictify, default_strictify_order};
use crate::matrix::PolyMatrix;
use crate::mf::{MatrixFactorisation, VarSplit};
use crate::poly::{Mono, Polynomial, Ring, RingSpec};
use crate::residue::jacobian;

/// `Y ⊗ X` over a common ring: even part `(Y0⊗X0) ⊕ (Y1⊗X1)`, odd part
/// `(Y0⊗X1) ⊕ (Y1⊗X0)`, differential `d_Y ⊗ 1 + γ_Y ⊗ d_X`.
pub struct Tensor {
    pub mf: MatrixFactorisation,
    /// Position `k` of the tensor basis is the pair `pairs[k] = (a, b)`.
    pub pairs: Vec<(usize, usize)>,
}

impl Tensor {
    /// Matrix of `A ⊗ B` (Kronecker product) in the tensor basis.
    pub fn lift(&self, a: &PolyMatrix, b: &PolyMatrix) -> Result<PolyMatrix> {
        let ring = &self.mf.ring;
        let n = self.pairs.len();
        let mut out = PolyMatrix::zeros(ring, n, n);
        for (i, &(a1, b1)) in self.pairs.iter().enumerate() {
            for (j, &(a2, b2)) in self.pairs.iter().enumerate() {
                let x = a.get(a1, a2);
                let y = b.get(b1, b2);
                if !x.is_zero() && !y.is_zero() {
                    out.set(i, j, x * y);
                }
            }
        }
        Ok(out)
    }
}

pub fn tensor(y: &MatrixFactorisation, x: &MatrixFactorisation) -> Result<Tensor> {
    if y.ring != x.ring {
        return Err(Error::RingMismatch(y.ring.describe(), x.ring.describe()));
    }
    let ring = y.ring.clone();
    let py = |a: usize| a >= y.r0();
    let px = |b: usize| b >= x.r0();
    let mut pairs = Vec::new();
    for (want_a, want_b) in [(false, false), (true, true), (false, true), (true, false)] {
        for a in 0..y.rank() {
            for b in 0..x.rank() {
                if py(a) == want_a && px(b) == want_b {
                    pairs.push((a, b));
                }
            }
        }
    }
    let r0 = y.r0() * x.r0() + y.r1() * x.r1();
    let t = Tensor {
        mf: MatrixFactorisation {
            ring: ring.clone(),
            potential: &y.potential + &x.potential,
            d0: PolyMatrix::zeros(&ring, 0, 0),
            d1: PolyMatrix::zeros(&ring, 0, 0),
            grading: None,
            split: None,
        },
        pairs,
    };
    let d = t
        .lift(&y.differential(), &PolyMatrix::identity(&ring, x.rank()))?
        .try_add(&t.lift(&y.gamma(), &x.differential())?)?;
    let n = t.pairs.len();
    let d1 = d.block(0, r0, r0, n - r0);
    let d0 = d.block(r0, 0, n - r0, r0);
    let mut mf = MatrixFactorisation::new(t.mf.potential.clone(), d0, d1)?;
    if let (Some(qy), Some(qx)) = (&y.grading, &x.grading) {
        let q = t.pairs.iter().map(|&(a, b)| &qy[a] + &qx[b]).collect();
        mf = mf.with_grading(q)?;
    }
    Ok(Tensor { mf, pairs: t.pairs })
}

/// `X ⊗_k Y` for factorisations in disjoint variables.
///
/// Quantum dimensions multiply: reordering `Λ_{X⊗Y}` into `Λ_X Λ_Y` and combining the
/// residue signs gives `D(X ⊗ Y) = (-1)^{n_Y (m_X + n_X)} D(X) D(Y)` (m target, n source
/// variable counts). The sign is `+1` whenever `m_X ≡ n_X mod 2`; otherwise `D(X)` is
/// already `0` with `parity_mismatch` set.
pub fn external_product(x: &MatrixFactorisation, y: &MatrixFactorisation) -> Result<MatrixFactorisation> {
    for v in y.ring.vars() {
        if x.ring.index_of(v).is_some() {
            return Err(Error::VariableCollision(v.clone()));
        }
    }
    let ring = x.ring.union(&y.ring)?;
    let t = tensor(&x.embed(&ring)?, &y.embed(&ring)?)?;
    let mut mf = t.mf;
    let join = |a: &[String], b: &[String]| -> Vec<String> { a.iter().chain(b).cloned().collect() };
    let split_of = |m: &MatrixFactorisation| {
        m.split.clone().unwrap_or(VarSplit {
            target: m.ring.vars().to_vec(),
            source: vec![],
        })
    };
    if x.split.is_some() || y.split.is_some() {
        let (sx, sy) = (split_of(x), split_of(y));
        mf.split = Some(VarSplit {
            target: join(&sx.target, &sy.target),
            source: join(&sx.source, &sy.source),
        });
    }
    Ok(mf)
}

#[derive(Clone, Copy, Debug)]
pub struct FuseOptions {
    /// Multiplier for the certified exponents `N_i`.
    pub safety: u32,
    /// m-adic bound for strictifying idempotents; derived from the Jacobian if absent.
    pub max_order: Option<u32>,
}

impl Default for FuseOptions {
    fn default() -> Self {
        FuseOptions {
            safety: 2,
            max_order: None,
        }
    }
}

/// Coefficients of the powers of variable `t` (index in `p`'s ring), placed in `target`.
fn t_coeffs(p: &Polynomial, t: usize, target: &Ring) -> Vec<Polynomial> {
    let mut buckets: Vec<Vec<(Mono, crate::scalar::Scalar)>> = Vec::new();
    for (m, c) in p.terms() {
        let k = m.0[t] as usize;
        if buckets.len() <= k {
            buckets.resize(k + 1, Vec::new());
        }
        let mut e = m.0.clone();
        e.remove(t);
        buckets[k].push((Mono(e), c.clone()));
    }
    buckets.into_iter().map(|b| Polynomial::from_terms(target, b)).collect()
}

/// One elimination stage; see the module docs.
struct Stage {
    f: MatrixFactorisation,
    /// Homotopies for the variables still to be eliminated, keyed by name.
    homotopies: Vec<(String, u32, PolyMatrix)>,
}

fn eliminate_one(stage: Stage, max_order: u32) -> Result<Stage> {
    let mut homs = stage.homotopies;
    let (tname, n, h) = homs.remove(0);
    let f = stage.f;
    let rcur = f.ring.clone();
    let t = rcur.index_of(&tname).unwrap();
    let keep: Vec<String> = rcur.vars().iter().filter(|v| **v != tname).cloned().collect();
    let rnew = rcur.subring(&keep)?;
    let n = n as usize;
    let (r0, r) = (f.r0(), f.rank());
    // basis of M: even (k, i) for i < r0, then odd (k, i) for i >= r0
    let mut basis: Vec<(usize, usize)> = Vec::with_capacity(n * r);
    for k in 0..n {
        for i in 0..r0 {
            basis.push((k, i));
        }
    }
    for k in 0..n {
        for i in r0..r {
            basis.push((k, i));
        }
    }
    let index: HashMap<(usize, usize), usize> = basis.iter().enumerate().map(|(k, b)| (*b, k)).collect();
    let rm = basis.len();
    let coeff_table = |a: &PolyMatrix| -> Vec<Vec<Vec<Polynomial>>> {
        (0..a.rows())
            .map(|i| (0..a.cols()).map(|j| t_coeffs(a.get(i, j), t, &rnew)).collect())
            .collect()
    };
    // F -> F map descended to M
    let truncate = |a: &PolyMatrix| -> PolyMatrix {
        let c = coeff_table(a);
        let mut m = PolyMatrix::zeros(&rnew, rm, rm);
        for (col, &(k, j)) in basis.iter().enumerate() {
            for (i, row) in c.iter().enumerate() {
                for (l, coef) in row[j].iter().enumerate() {
                    if k + l < n && !coef.is_zero() {
                        m.set(index[&(k + l, i)], col, coef.clone());
                    }
                }
            }
        }
        m
    };
    let d = f.differential();
    let dm = truncate(&d);
    // ρ: M -> F, the part of d pushed past t^N, divided by t^N
    let dc = coeff_table(&d);
    let tvar = Polynomial::var(&rcur, t);
    let mut rho = PolyMatrix::zeros(&rcur, r, rm);
    for (col, &(k, j)) in basis.iter().enumerate() {
        for (i, row) in dc.iter().enumerate() {
            let mut acc = Polynomial::zero(&rcur);
            for (l, coef) in row[j].iter().enumerate() {
                if k + l >= n && !coef.is_zero() {
                    acc = &acc + &(&coef.embed(&rcur)? * &tvar.pow((k + l - n) as u32));
                }
            }
            rho.set(i, col, acc);
        }
    }
    let hr = h.try_mul(&rho)?;
    let hc = coeff_table(&hr);
    let mut e = PolyMatrix::identity(&rnew, rm);
    for col in 0..rm {
        for (i, row) in hc.iter().enumerate() {
            for (k2, coef) in row[col].iter().enumerate() {
                if k2 < n && !coef.is_zero() {
                    let rr = index[&(k2, i)];
                    e.set(rr, col, e.get(rr, col) - coef);
                }
            }
        }
    }
    let m0 = n * r0;
    let mut mmf = MatrixFactorisation::new(
        f.potential.embed(&rnew)?,
        dm.block(m0, 0, rm - m0, m0),
        dm.block(0, m0, m0, rm - m0),
    )?;
    if let (Some(q), Some(degs)) = (&f.grading, rcur.degrees()) {
        let dt = &degs[t];
        let nq: Vec<BigRational> = basis
            .iter()
            .map(|&(k, i)| &q[i] + dt * BigRational::from_integer((k as i64).into()))
            .collect();
        mmf = mmf.with_grading(nq)?;
    }
    let mm = minimal_model(&mmf)?;
    let em = mm.sigma.try_mul(&e)?.try_mul(&mm.tau)?;
    let es = strictify(&em, max_order)?;
    let sp = split_strict(&mm.mf, &es)?;
    let xi = mm.tau.try_mul(&sp.xi)?;
    let theta = sp.theta.try_mul(&mm.sigma)?;
    let mut rest = Vec::with_capacity(homs.len());
    for (name, nn, hh) in homs {
        let hm = truncate(&hh);
        rest.push((name, nn, theta.try_mul(&hm)?.try_mul(&xi)?));
    }
    Ok(Stage {
        f: sp.mf,
        homotopies: rest,
    })
}

/// Finite-rank representative of `Y ⊗ X` with the listed intermediate variables
/// integrated out.
pub fn fuse(y: &MatrixFactorisation, x: &MatrixFactorisation, intermediate: &[String], opts: FuseOptions) -> Result<MatrixFactorisation> {
    let ring = y.ring.union(&x.ring)?;
    let yy = y.embed(&ring)?;
    let xx = x.embed(&ring)?;
    for v in intermediate {
        if ring.index_of(v).is_none() {
            return Err(Error::Invalid(format!("unknown intermediate variable {v}")));
        }
    }
    let total = &yy.potential + &xx.potential;
    let iidx: Vec<usize> = intermediate.iter().map(|v| ring.index_of(v).unwrap()).collect();
    if iidx.iter().any(|&i| total.uses_var(i)) {
        return Err(Error::InvalidMf("potentials do not cancel in the intermediate variables".into()));
    }
    let t = tensor(&yy, &xx)?;
    let mut f = t.mf.clone();
    let outer: Vec<String> = ring.vars().iter().filter(|v| !intermediate.contains(v)).cloned().collect();
    let mut homotopies = Vec::new();
    let mut max_order = opts.max_order.unwrap_or(2);
    if !intermediate.is_empty() {
        let sub = ring.subring(intermediate)?;
        // V: the intermediate part of X's potential
        let ims: Vec<Option<Polynomial>> = ring
            .vars()
            .iter()
            .map(|v| Some(sub.index_of(v).map_or(Polynomial::zero(&sub), |j| Polynomial::var(&sub, j))))
            .collect();
        let v = xx.potential.substitute(&ims, &sub)?;
        let back = v.embed(&ring)?;
        let rest = &xx.potential - &back;
        if iidx.iter().any(|&i| rest.uses_var(i)) {
            return Err(Error::InvalidMf("intermediate potential mixes with outer variables".into()));
        }
        let jac = jacobian(&v);
        let ib = buchberger(&jac)?;
        let (ns, cs) = ib.lift_monomial_powers()?;
        if opts.max_order.is_none() {
            max_order = default_strictify_order(&v)?.max(2) * opts.safety.max(1);
        }
        let dxs: Vec<PolyMatrix> = iidx.iter().map(|&i| xx.partial_differential(i)).collect();
        let hj: Vec<PolyMatrix> = dxs
            .iter()
            .map(|dx| t.lift(&yy.gamma(), dx))
            .collect::<Result<_>>()?;
        let s = opts.safety.max(1);
        for (k, name) in intermediate.iter().enumerate() {
            let extra = Polynomial::var(&ring, iidx[k]).pow(ns[k] * (s - 1));
            let mut h = PolyMatrix::zeros(&ring, f.rank(), f.rank());
            for (j, c) in cs[k].iter().enumerate() {
                let c = &c.embed(&ring)? * &extra;
                h = h.try_add(&hj[j].mul_poly(&c))?;
            }
            homotopies.push((name.clone(), ns[k] * s, h));
        }
    }
    let mut stage = Stage { f: f.clone(), homotopies };
    while !stage.homotopies.is_empty() {
        stage = eliminate_one(stage, max_order)?;
    }
    f = stage.f;
    let target = RingSpec::build(ring.field(), outer.clone(), ring.degrees().map(|d| {
        ring.vars()
            .iter()
            .zip(d)
            .filter(|(v, _)| outer.contains(v))
            .map(|(_, q)| q.clone())
            .collect()
    }))?;
    let mut out = minimal_model(&f)?.mf;
    if !crate::poly::same_ring(&out.ring, &target) {
        out = out.embed(&target)?;
    }
    if let (Some(sy), Some(sx)) = (&y.split, &x.split) {
        out.split = Some(VarSplit {
            target: sy.target.clone(),
            source: sx.source.clone(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::hom_dimensions;
    use crate::mf::{dual, identity_defect, koszul};
    use crate::scalar::FieldSpec;

    fn p(r: &Ring, s: &str) -> Polynomial {
        Polynomial::parse(r, s).unwrap()
    }

    #[test]
    fn unit_fusion_cubic() {
        let r = RingSpec::new(FieldSpec::Rationals, &["x'"]).unwrap();
        let x = koszul(&r, &[(p(&r, "x'"), p(&r, "x'^2"))]).unwrap();
        let w = RingSpec::new(FieldSpec::Rationals, &["x"]).unwrap();
        let i = identity_defect(&p(&w, "x^3")).unwrap();
        let f = fuse(&i, &x, &["x'".to_string()], FuseOptions::default()).unwrap();
        assert_eq!((f.r0(), f.r1()), (1, 1));
        let xr = RingSpec::new(FieldSpec::Rationals, &["x"]).unwrap();
        let x2 = koszul(&xr, &[(p(&xr, "x"), p(&xr, "x^2"))]).unwrap();
        assert_eq!(hom_dimensions(&f, &x2).unwrap(), hom_dimensions(&x2, &x2).unwrap());
    }

    #[test]
    fn knoerrer_self_fusion() {
        let r = RingSpec::new(FieldSpec::Rationals, &["u", "v"]).unwrap();
        let k = koszul(&r, &[(p(&r, "u-v"), p(&r, "u+v"))]).unwrap();
        let f = fuse(&dual(&k), &k, &["u".to_string(), "v".to_string()], FuseOptions::default()).unwrap();
        assert_eq!((f.r0(), f.r1()), (1, 0));
    }
}
