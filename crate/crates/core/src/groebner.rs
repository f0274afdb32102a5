//! Buchberger's algorithm for submodules of free modules R^k (ideals are the case k = 1),
//! with the sugar selection strategy and optional cofactor tracking.
//!
//! Module terms are ordered position-over-term: a smaller position index is larger, ties
//! broken by grevlex.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::poly::{same_ring, Mono, Polynomial, Ring};
use crate::scalar::Scalar;

pub type Term = (usize, Mono, Scalar);

fn cmp_term(a: (usize, &Mono), b: (usize, &Mono)) -> Ordering {
    match b.0.cmp(&a.0) {
        Ordering::Equal => a.1.cmp(b.1),
        o => o,
    }
}

/// Element of R^k as a sorted term list (largest first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MVec {
    pub terms: Vec<Term>,
}

impl MVec {
    pub fn zero() -> MVec {
        MVec { terms: Vec::new() }
    }

    pub fn from_column(col: &[Polynomial]) -> MVec {
        let mut terms = Vec::new();
        for (pos, p) in col.iter().enumerate() {
            for (m, c) in p.terms() {
                terms.push((pos, m.clone(), c.clone()));
            }
        }
        // positions ascending and each polynomial already sorted descending
        MVec { terms }
    }

    pub fn to_column(&self, ring: &Ring, rank: usize) -> Vec<Polynomial> {
        let mut buckets: Vec<Vec<(Mono, Scalar)>> = vec![Vec::new(); rank];
        for (p, m, c) in &self.terms {
            buckets[*p].push((m.clone(), c.clone()));
        }
        buckets.into_iter().map(|t| Polynomial::from_terms(ring, t)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.1.degree()).max().unwrap_or(0)
    }

    /// Coefficient of the term at `(pos, m)`.
    pub fn coeff(&self, pos: usize, m: &Mono) -> Option<&Scalar> {
        self.terms
            .binary_search_by(|t| cmp_term((pos, m), (t.0, &t.1)))
            .ok()
            .map(|k| &self.terms[k].2)
    }

    /// `self - coef * shift * o`.
    pub fn combine(&self, o: &MVec, coef: &Scalar, shift: &Mono) -> MVec {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let mut i = 0;
        let mut j = 0;
        let shifted: Vec<(usize, Mono, Scalar)> = o
            .terms
            .iter()
            .map(|(p, m, c)| (*p, m.mul(shift), c * coef))
            .collect();
        while i < self.terms.len() || j < shifted.len() {
            let ord = if i == self.terms.len() {
                Ordering::Less
            } else if j == shifted.len() {
                Ordering::Greater
            } else {
                cmp_term(
                    (self.terms[i].0, &self.terms[i].1),
                    (shifted[j].0, &shifted[j].1),
                )
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (p, m, c) = &shifted[j];
                    out.push((*p, m.clone(), -c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].2 - &shifted[j].2;
                    if !c.is_zero() {
                        out.push((self.terms[i].0, self.terms[i].1.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        MVec { terms: out }
    }

    pub fn scale(&self, c: &Scalar) -> MVec {
        MVec {
            terms: self.terms.iter().map(|(p, m, d)| (*p, m.clone(), d * c)).collect(),
        }
    }
}

#[derive(Clone, Debug)]
struct GElem {
    v: MVec,
    cof: Option<Vec<Polynomial>>,
    sugar: u32,
}

fn cof_axpy(acc: &mut [Polynomial], m: &Mono, c: &Scalar, other: &[Polynomial]) {
    // acc -= c*m*other
    for (a, o) in acc.iter_mut().zip(other) {
        if !o.is_zero() {
            *a = &*a - &o.mul_term(m, c);
        }
    }
}

/// Reduces every term of `p` by the basis. Keeps `p - cof·gens` invariant.
fn reduce_full(
    mut p: MVec,
    mut cof: Option<Vec<Polynomial>>,
    mut sugar: u32,
    basis: &[GElem],
    skip: Option<usize>,
) -> (MVec, Option<Vec<Polynomial>>, u32) {
    let mut rem: Vec<Term> = Vec::new();
    while !p.terms.is_empty() {
        let (pos, m, c) = p.terms[0].clone();
        let mut best: Option<usize> = None;
        for (k, g) in basis.iter().enumerate() {
            if Some(k) == skip {
                continue;
            }
            let (gp, gm, _) = g.v.lead().unwrap();
            if *gp == pos && gm.divides(&m) {
                match best {
                    Some(b) if basis[b].v.terms.len() <= g.v.terms.len() => {}
                    _ => best = Some(k),
                }
            }
        }
        match best {
            Some(k) => {
                let g = &basis[k];
                let (_, gm, gc) = g.v.lead().unwrap();
                let q = gm.quotient(&m);
                let qc = &c * &gc.invert().unwrap();
                p = p.combine(&g.v, &qc, &q);
                if let (Some(cf), Some(gcof)) = (cof.as_mut(), g.cof.as_ref()) {
                    cof_axpy(cf, &q, &qc, gcof);
                }
                sugar = sugar.max(g.sugar + q.degree());
            }
            None => {
                rem.push(p.terms.remove(0));
            }
        }
    }
    (MVec { terms: rem }, cof, sugar)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
    sugar: u32,
}

/// Reduced Gröbner basis of the submodule generated by `gens`.
/// Returns basis vectors and, if `track`, cofactor rows over `gens`.
pub fn module_groebner(
    ring: &Ring,
    gens: &[MVec],
    track: bool,
    ideal_case: bool,
) -> (Vec<MVec>, Option<Vec<Vec<Polynomial>>>) {
    let ng = gens.len();
    let mut basis: Vec<GElem> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let unit = |i: usize| -> Vec<Polynomial> {
        (0..ng)
            .map(|k| if k == i { Polynomial::one(ring) } else { Polynomial::zero(ring) })
            .collect()
    };

    let insert = |h: GElem, basis: &mut Vec<GElem>, active: &mut Vec<bool>, pairs: &mut Vec<Pair>| {
        let t = basis.len();
        let (hp, hm, _) = h.v.lead().unwrap().clone();
        // drop old pairs made redundant by h (Gebauer-Moeller B criterion)
        pairs.retain(|pr| {
            let (pi, _, _) = basis[pr.i].v.lead().unwrap();
            if *pi != hp || !hm.divides(&pr.lcm) {
                return true;
            }
            let li = basis[pr.i].v.lead().unwrap().1.lcm(&hm);
            let lj = basis[pr.j].v.lead().unwrap().1.lcm(&hm);
            li == pr.lcm || lj == pr.lcm
        });
        let mut new: Vec<(usize, Mono, bool)> = Vec::new();
        for (i, g) in basis.iter().enumerate() {
            if !active[i] {
                continue;
            }
            let (gp, gm, _) = g.v.lead().unwrap();
            if *gp != hp {
                continue;
            }
            let coprime = ideal_case && gm.coprime(&hm);
            new.push((i, gm.lcm(&hm), coprime));
        }
        // M criterion: drop pairs whose lcm is a proper multiple of another new lcm
        let keep: Vec<bool> = new
            .iter()
            .map(|(_, l, _)| !new.iter().any(|(_, l2, _)| l2 != l && l2.divides(l)))
            .collect();
        let mut by_lcm: HashMap<Mono, (usize, bool)> = HashMap::new();
        for (k, (i, l, cp)) in new.iter().enumerate() {
            if !keep[k] {
                continue;
            }
            let e = by_lcm.entry(l.clone()).or_insert((*i, false));
            if *cp {
                e.1 = true;
            }
        }
        let mut chosen: Vec<(usize, Mono)> = by_lcm
            .into_iter()
            .filter(|(_, (_, cp))| !cp)
            .map(|(l, (i, _))| (i, l))
            .collect();
        chosen.sort_by_key(|a| a.0);
        for (i, l) in chosen {
            let gi = &basis[i];
            let si = gi.sugar + gi.v.lead().unwrap().1.quotient(&l).degree();
            let sh = h.sugar + hm.quotient(&l).degree();
            pairs.push(Pair {
                i,
                j: t,
                lcm: l,
                sugar: si.max(sh),
            });
        }
        // elements whose leading term is divisible by h's become inactive for new pairs
        for (i, g) in basis.iter().enumerate() {
            let (gp, gm, _) = g.v.lead().unwrap();
            if *gp == hp && hm.divides(gm) {
                active[i] = false;
            }
        }
        basis.push(h);
        active.push(true);
    };

    for (i, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let cof = if track { Some(unit(i)) } else { None };
        let sugar = g.max_degree();
        let (r, cof, sugar) = reduce_full(g.clone(), cof, sugar, &basis, None);
        if r.is_zero() {
            continue;
        }
        let h = make_monic(r, cof, sugar);
        insert(h, &mut basis, &mut active, &mut pairs);
    }

    while !pairs.is_empty() {
        let k = (0..pairs.len())
            .min_by(|&a, &b| {
                pairs[a]
                    .sugar
                    .cmp(&pairs[b].sugar)
                    .then_with(|| pairs[a].lcm.cmp(&pairs[b].lcm))
            })
            .unwrap();
        let pr = pairs.swap_remove(k);
        let gi = &basis[pr.i];
        let gj = &basis[pr.j];
        let (_, mi, ci) = gi.v.lead().unwrap();
        let (_, mj, cj) = gj.v.lead().unwrap();
        let ti = mi.quotient(&pr.lcm);
        let tj = mj.quotient(&pr.lcm);
        let ci_inv = ci.invert().unwrap();
        let cj_inv = cj.invert().unwrap();
        // s = ti/ci * gi - tj/cj * gj
        let s = MVec::zero()
            .combine(&gi.v, &(-&ci_inv), &ti)
            .combine(&gj.v, &cj_inv, &tj);
        let cof = if track {
            let mut c: Vec<Polynomial> = vec![Polynomial::zero(ring); ng];
            cof_axpy(&mut c, &ti, &(-&ci_inv), gi.cof.as_ref().unwrap());
            cof_axpy(&mut c, &tj, &cj_inv, gj.cof.as_ref().unwrap());
            Some(c)
        } else {
            None
        };
        let (r, cof, sugar) = reduce_full(s, cof, pr.sugar, &basis, None);
        if r.is_zero() {
            continue;
        }
        let h = make_monic(r, cof, sugar);
        insert(h, &mut basis, &mut active, &mut pairs);
    }

    // minimalize
    let mut keep: Vec<GElem> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let (gp, gm, _) = g.v.lead().unwrap();
        let redundant = basis.iter().enumerate().any(|(j, o)| {
            if i == j {
                return false;
            }
            let (op, om, _) = o.v.lead().unwrap();
            op == gp && om.divides(gm) && (om != gm || j < i)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    // interreduce tails
    for i in 0..keep.len() {
        let g = keep[i].clone();
        let lead = g.v.terms[0].clone();
        let tail = MVec {
            terms: g.v.terms[1..].to_vec(),
        };
        let (r, cof, sugar) = reduce_full(tail, g.cof.clone(), g.sugar, &keep, Some(i));
        let mut terms = vec![lead];
        terms.extend(r.terms);
        keep[i] = GElem {
            v: MVec { terms },
            cof,
            sugar,
        };
    }
    keep.sort_by(|a, b| {
        let la = a.v.lead().unwrap();
        let lb = b.v.lead().unwrap();
        cmp_term((lb.0, &lb.1), (la.0, &la.1))
    });
    let cofs = if track {
        Some(keep.iter().map(|g| g.cof.clone().unwrap()).collect())
    } else {
        None
    };
    (keep.into_iter().map(|g| g.v).collect(), cofs)
}

fn make_monic(r: MVec, cof: Option<Vec<Polynomial>>, sugar: u32) -> GElem {
    let inv = r.lead().unwrap().2.invert().unwrap();
    let v = r.scale(&inv);
    let cof = cof.map(|c| c.iter().map(|p| p.scale(&inv)).collect());
    GElem { v, cof, sugar }
}

/// A Gröbner basis of a submodule of R^rank, kept together with its generators.
#[derive(Clone, Debug)]
pub struct ModuleBasis {
    pub ring: Ring,
    pub rank: usize,
    pub generators: Vec<MVec>,
    pub groebner: Vec<MVec>,
    /// Rows expressing each basis vector in the generators (if tracked).
    pub transform: Option<Vec<Vec<Polynomial>>>,
}

impl ModuleBasis {
    pub fn new(ring: &Ring, rank: usize, gens: Vec<MVec>, track: bool) -> ModuleBasis {
        let (gb, tr) = module_groebner(ring, &gens, track, rank == 1);
        ModuleBasis {
            ring: ring.clone(),
            rank,
            generators: gens,
            groebner: gb,
            transform: tr,
        }
    }

    /// From the columns of a matrix.
    pub fn from_columns(m: &PolyMatrix, track: bool) -> ModuleBasis {
        let gens = (0..m.cols())
            .map(|j| {
                let col: Vec<Polynomial> = (0..m.rows()).map(|i| m.get(i, j).clone()).collect();
                MVec::from_column(&col)
            })
            .collect();
        ModuleBasis::new(m.ring(), m.rows(), gens, track)
    }

    fn elems(&self) -> Vec<GElem> {
        self.groebner
            .iter()
            .enumerate()
            .map(|(k, v)| GElem {
                v: v.clone(),
                cof: self.transform.as_ref().map(|t| t[k].clone()),
                sugar: 0,
            })
            .collect()
    }

    /// Remainder and (if tracked) cofactors with `v = Σ cof_j gen_j + remainder`.
    pub fn reduce(&self, v: &MVec) -> (MVec, Option<Vec<Polynomial>>) {
        let ng = self.generators.len();
        let cof = self
            .transform
            .as_ref()
            .map(|_| vec![Polynomial::zero(&self.ring); ng]);
        let (r, cof, _) = reduce_full(v.clone(), cof, 0, &self.elems(), None);
        (r, cof.map(|c| c.iter().map(|p| p.neg()).collect()))
    }

    pub fn contains(&self, v: &MVec) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Leading terms of the basis grouped by position.
    fn leads_by_pos(&self) -> Vec<Vec<Mono>> {
        let mut out = vec![Vec::new(); self.rank];
        for g in &self.groebner {
            let (p, m, _) = g.lead().unwrap();
            out[*p].push(m.clone());
        }
        out
    }

    /// Standard terms (position, monomial) of the quotient R^rank / M; error if infinite.
    pub fn standard_terms(&self) -> Result<Vec<(usize, Mono)>> {
        let n = self.ring.nvars();
        let leads = self.leads_by_pos();
        let mut out = Vec::new();
        for (pos, ls) in leads.iter().enumerate() {
            if ls.iter().any(|m| m.is_one()) {
                continue;
            }
            // need a pure power of every variable
            let mut bounds = vec![0u32; n];
            for i in 0..n {
                let b = ls
                    .iter()
                    .filter(|m| m.0.iter().enumerate().all(|(k, &e)| k == i || e == 0))
                    .map(|m| m.0[i])
                    .min();
                match b {
                    Some(b) => bounds[i] = b,
                    None => {
                        return Err(Error::NonIsolated(format!(
                            "quotient is infinite-dimensional (no pure power of {} among leading terms)",
                            self.ring.vars()[i]
                        )))
                    }
                }
            }
            // enumerate monomials inside the box not divisible by any lead
            let mut e = vec![0u32; n];
            loop {
                let m = Mono(e.clone());
                if !ls.iter().any(|l| l.divides(&m)) {
                    out.push((pos, m));
                }
                // odometer
                let mut k = 0;
                while k < n {
                    e[k] += 1;
                    if e[k] < bounds[k] {
                        break;
                    }
                    e[k] = 0;
                    k += 1;
                }
                if k == n {
                    break;
                }
            }
        }
        Ok(out)
    }
}

/// Reduced Gröbner basis of an ideal with its transform matrix.
#[derive(Clone, Debug)]
pub struct IdealBasis {
    pub ring: Ring,
    pub generators: Vec<Polynomial>,
    pub groebner: Vec<Polynomial>,
    /// Row k expresses `groebner[k]` in `generators`.
    pub transform: Vec<Vec<Polynomial>>,
    module: ModuleBasis,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFormResult {
    pub remainder: Polynomial,
    pub cofactors: Vec<Polynomial>,
}

fn cache() -> &'static RwLock<HashMap<String, Arc<IdealBasis>>> {
    static C: OnceLock<RwLock<HashMap<String, Arc<IdealBasis>>>> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Gröbner basis of the ideal generated by `gens`, memoized per (ring with grading, generators).
pub fn buchberger(gens: &[Polynomial]) -> Result<Arc<IdealBasis>> {
    let ring = gens
        .first()
        .ok_or_else(|| Error::Invalid("empty generator list".into()))?
        .ring()
        .clone();
    for g in gens {
        if !same_ring(g.ring(), &ring) {
            return Err(Error::RingMismatch(g.ring().describe(), ring.describe()));
        }
    }
    let key = format!(
        "{}|{:?}|{}",
        ring.describe(),
        ring.degrees(),
        gens.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(";")
    );
    if let Some(b) = cache().read().unwrap().get(&key) {
        return Ok(b.clone());
    }
    let mvecs: Vec<MVec> = gens.iter().map(|g| MVec::from_column(std::slice::from_ref(g))).collect();
    let module = ModuleBasis::new(&ring, 1, mvecs, true);
    let groebner: Vec<Polynomial> = module
        .groebner
        .iter()
        .map(|v| v.to_column(&ring, 1).remove(0))
        .collect();
    let transform = module.transform.clone().unwrap();
    let basis = Arc::new(IdealBasis {
        ring: ring.clone(),
        generators: gens.to_vec(),
        groebner,
        transform,
        module,
    });
    cache().write().unwrap().insert(key, basis.clone());
    Ok(basis)
}

impl IdealBasis {
    pub fn normal_form(&self, f: &Polynomial) -> Result<NormalFormResult> {
        if !same_ring(f.ring(), &self.ring) {
            return Err(Error::RingMismatch(f.ring().describe(), self.ring.describe()));
        }
        let (r, cof) = self.module.reduce(&MVec::from_column(std::slice::from_ref(f)));
        Ok(NormalFormResult {
            remainder: r.to_column(&self.ring, 1).remove(0),
            cofactors: cof.unwrap(),
        })
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.remainder.is_zero())
    }

    /// Standard monomials of R/I.
    pub fn quotient_basis(&self) -> Result<Vec<Mono>> {
        let mut v: Vec<Mono> = self.module.standard_terms()?.into_iter().map(|(_, m)| m).collect();
        v.sort();
        Ok(v)
    }

    /// Minimal `N_i` with `x_i^{N_i} ∈ I` and rows of `C` with `x_i^{N_i} = Σ_j C_ij g_j`.
    pub fn lift_monomial_powers(&self) -> Result<(Vec<u32>, Vec<Vec<Polynomial>>)> {
        let n = self.ring.nvars();
        // nilpotency index of x_i in R/I is at most dim R/I
        let bound = self.quotient_basis()?.len() as u32;
        let mut ns = Vec::with_capacity(n);
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut found = None;
            for k in 1..=bound.max(1) {
                let p = Polynomial::monomial(&self.ring, Mono::var(n, i, k), Scalar::one(self.ring.field()));
                let nf = self.normal_form(&p)?;
                if nf.remainder.is_zero() {
                    found = Some((k, nf.cofactors));
                    break;
                }
            }
            let (k, c) = found.ok_or_else(|| {
                Error::NonIsolated(format!(
                    "no power of {} lies in the ideal (zero set not only the origin)",
                    self.ring.vars()[i]
                ))
            })?;
            ns.push(k);
            rows.push(c);
        }
        Ok((ns, rows))
    }
}

/// A particular solution `x` of `A x = b`, or `None` if `b` is not in the column module.
pub fn solve_linear_over_ring(a: &PolyMatrix, b: &[Polynomial]) -> Result<Option<Vec<Polynomial>>> {
    if b.len() != a.rows() {
        return Err(Error::Shape(format!("rhs has length {}, matrix has {} rows", b.len(), a.rows())));
    }
    let mb = ModuleBasis::from_columns(a, true);
    let (r, cof) = mb.reduce(&MVec::from_column(b));
    if !r.is_zero() {
        return Ok(None);
    }
    Ok(Some(cof.unwrap()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::RingSpec;
    use crate::scalar::FieldSpec;

    fn ring(v: &[&str]) -> Ring {
        RingSpec::new(FieldSpec::Rationals, v).unwrap()
    }
    fn p(r: &Ring, s: &str) -> Polynomial {
        Polynomial::parse(r, s).unwrap()
    }

    #[test]
    fn principal_ideal() {
        let r = ring(&["x"]);
        let b = buchberger(&[p(&r, "3x^2")]).unwrap();
        assert_eq!(b.groebner, vec![p(&r, "x^2")]);
        let nf = b.normal_form(&p(&r, "x^2")).unwrap();
        assert!(nf.remainder.is_zero());
        assert_eq!(nf.cofactors, vec![p(&r, "1/3")]);
        assert_eq!(b.normal_form(&p(&r, "x")).unwrap().remainder, p(&r, "x"));
        let (n, c) = b.lift_monomial_powers().unwrap();
        assert_eq!(n, vec![2]);
        assert_eq!(c, vec![vec![p(&r, "1/3")]]);
    }

    #[test]
    fn monomial_generators() {
        let r = ring(&["u", "v"]);
        let b = buchberger(&[p(&r, "4u^3"), p(&r, "-2v")]).unwrap();
        assert_eq!(b.groebner.len(), 2);
        let nf = b.normal_form(&p(&r, "u^4")).unwrap();
        assert!(nf.remainder.is_zero());
        assert_eq!(nf.cofactors[0], p(&r, "1/4 u"));
        let (n, _) = b.lift_monomial_powers().unwrap();
        assert_eq!(n, vec![3, 1]);
    }

    #[test]
    fn milnor_numbers() {
        let r = ring(&["x", "y"]);
        let d4 = buchberger(&[p(&r, "3x^2 - y^2"), p(&r, "-2x*y")]).unwrap();
        assert_eq!(d4.quotient_basis().unwrap().len(), 4);
        let e6 = buchberger(&[p(&r, "3x^2"), p(&r, "4y^3")]).unwrap();
        assert_eq!(e6.quotient_basis().unwrap().len(), 6);
        let a1 = buchberger(&[p(&r, "y"), p(&r, "x")]).unwrap();
        assert_eq!(a1.quotient_basis().unwrap(), vec![Mono(vec![0, 0])]);
        let bad = buchberger(&[p(&r, "x")]).unwrap();
        assert!(matches!(bad.quotient_basis(), Err(Error::NonIsolated(_))));
    }

    #[test]
    fn transform_rows_reproduce_basis() {
        let r = ring(&["x", "y"]);
        let gens = vec![p(&r, "4x^3 + y^3"), p(&r, "3x*y^2")];
        let b = buchberger(&gens).unwrap();
        for (g, row) in b.groebner.iter().zip(&b.transform) {
            let mut s = Polynomial::zero(&r);
            for (c, f) in row.iter().zip(&gens) {
                s = &s + &(c * f);
            }
            assert_eq!(&s, g);
        }
    }

    #[test]
    fn linear_systems() {
        let r = ring(&["x", "y"]);
        let a = PolyMatrix::parse(&r, &[vec!["x".into()]]).unwrap();
        assert_eq!(solve_linear_over_ring(&a, &[p(&r, "x^2")]).unwrap(), Some(vec![p(&r, "x")]));
        let a = PolyMatrix::parse(&r, &[vec!["x".into(), "y".into()]]).unwrap();
        assert_eq!(solve_linear_over_ring(&a, &[p(&r, "1")]).unwrap(), None);
    }

    #[test]
    fn cache_distinguishes_gradings() {
        let plain = RingSpec::new(FieldSpec::Rationals, &["x", "y"]).unwrap();
        let graded = RingSpec::graded(FieldSpec::Rationals, &["x", "y"], &[crate::poly::rat(1, 3), crate::poly::rat(2, 3)]).unwrap();
        let a = buchberger(&[Polynomial::parse(&plain, "x^3 - y").unwrap()]).unwrap();
        let b = buchberger(&[Polynomial::parse(&graded, "x^3 - y").unwrap()]).unwrap();
        assert!(a.ring.degrees().is_none());
        assert!(b.ring.degrees().is_some());
    }
}
