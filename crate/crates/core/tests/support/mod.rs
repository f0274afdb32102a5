//! Generators and property checks shared by the proptest suites and the acceptance run.
#![allow(dead_code)]

use std::collections::HashMap;

use num_rational::BigRational;
use proptest::prelude::*;

use lgdefect::fusion::{external_product, fuse, FuseOptions};
use lgdefect::homalg::{hom_dimensions, minimal_model};
use lgdefect::mf::{rename_vars, 
    adjoints, dual, identity_defect, koszul, shift, twist, GroupAction, MatrixFactorisation, VarSplit,
};
use lgdefect::models::{ad_defect, knoerrer_defect};
use lgdefect::poly::rat;
use lgdefect::residue::{central_charge, grothendieck_residue, quantum_dim, ResidueQuery, Side};
use lgdefect::{FieldSpec, PolyMatrix, Polynomial, Ring, RingSpec, Scalar};

pub type Check = Result<(), String>;

pub fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

pub fn q() -> FieldSpec {
    FieldSpec::Rationals
}

pub fn ring(vars: &[&str]) -> Ring {
    RingSpec::new(q(), vars).unwrap()
}

/// Sparse polynomial data: exponent vectors with small integer coefficients.
pub type Terms = Vec<(Vec<u32>, i64)>;

pub fn terms(nvars: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Terms> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, nvars), -3i64..=3), 0..=max_terms)
}

pub fn poly(r: &Ring, t: &Terms) -> Polynomial {
    let f = r.field();
    Polynomial::from_terms(
        r,
        t.iter()
            .map(|(e, c)| (lgdefect::Mono(e.clone()), Scalar::from_int(f, *c)))
            .collect(),
    )
}

// ---- d² = W·1 over a randomized constructor corpus ----

#[derive(Clone, Debug)]
pub enum Op {
    Dual,
    Shift,
    LeftAdjoint,
    RightAdjoint,
    External(Vec<(Terms, Terms)>),
    Twist(Vec<i64>),
    Minimal,
    Conjugate(Terms),
}

#[derive(Clone, Debug)]
pub enum Base {
    Koszul(Vec<(Terms, Terms)>),
    Identity(Terms),
}

#[derive(Clone, Debug)]
pub struct Recipe {
    pub base: Base,
    pub ops: Vec<Op>,
}

fn pairs(nvars: usize, max: usize) -> impl Strategy<Value = Vec<(Terms, Terms)>> {
    prop::collection::vec((terms(nvars, 2, 3), terms(nvars, 2, 3)), 1..=max)
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        Just(Op::Dual),
        Just(Op::Shift),
        Just(Op::LeftAdjoint),
        Just(Op::RightAdjoint),
        pairs(2, 1).prop_map(Op::External),
        prop::collection::vec(0i64..2, 0..=8).prop_map(Op::Twist),
        Just(Op::Minimal),
        terms(3, 1, 2).prop_map(Op::Conjugate),
    ]
}

pub fn recipe() -> impl Strategy<Value = Recipe> {
    let base = prop_oneof![
        pairs(3, 2).prop_map(Base::Koszul),
        terms(2, 4, 4).prop_map(Base::Identity),
    ];
    (base, prop::collection::vec(op(), 0..=3)).prop_map(|(base, ops)| Recipe { base, ops })
}

/// Explicit `d·d - W·1`, independent of any validation done by the constructors.
pub fn square_defect(x: &MatrixFactorisation) -> Check {
    let d = x.differential();
    let dd = d.try_mul(&d).map_err(err)?;
    let w = PolyMatrix::scalar_identity(&x.ring, x.rank(), &x.potential);
    if dd == w {
        Ok(())
    } else {
        Err(format!("d² ≠ W·1 for W = {}", x.potential))
    }
}

/// Builds every intermediate of the recipe and checks each one.
pub fn check_recipe(rc: &Recipe) -> Check {
    let r = ring(&["x", "y", "z"]);
    let mut x = match &rc.base {
        Base::Koszul(ps) => {
            let ps: Vec<_> = ps.iter().map(|(a, b)| (poly(&r, a), poly(&r, b))).collect();
            koszul(&r, &ps).map_err(err)?
        }
        Base::Identity(t) => {
            let w = poly(&ring(&["x", "y"]), t);
            identity_defect(&w).map_err(err)?
        }
    };
    if x.split.is_none() {
        let vars = x.ring.vars().to_vec();
        x = x
            .with_split(VarSplit {
                target: vars[..1].to_vec(),
                source: vars[1..].to_vec(),
            })
            .map_err(err)?;
    }
    square_defect(&x)?;
    for (k, o) in rc.ops.iter().enumerate() {
        x = match o {
            Op::Dual => dual(&x),
            Op::Shift => shift(&x),
            Op::LeftAdjoint => adjoints(&x).map_err(err)?.0,
            Op::RightAdjoint => adjoints(&x).map_err(err)?.1,
            Op::External(ps) => {
                let (a, b) = (format!("p{k}"), format!("q{k}"));
                let r2 = ring(&[a.as_str(), b.as_str()]);
                let ps: Vec<_> = ps.iter().map(|(s, t)| (poly(&r2, s), poly(&r2, t))).collect();
                let y = koszul(&r2, &ps).map_err(err)?;
                external_product(&x, &y).map_err(err)?
            }
            Op::Twist(w) => {
                let n = x.ring.nvars();
                let weights: Vec<i64> = (0..n).map(|i| w.get(i).copied().unwrap_or(1)).collect();
                let g = GroupAction::diagonal_cyclic(q(), x.ring.vars(), 2, &weights).map_err(err)?;
                twist(&g, g.order() - 1, &x).map_err(err)?
            }
            Op::Minimal => minimal_model(&x).map_err(err)?.mf,
            Op::Conjugate(t) => conjugate(&x, t)?,
        };
        square_defect(&x).map_err(|e| format!("after {o:?}: {e}"))?;
    }
    Ok(())
}

/// `A d B⁻¹` with unitriangular `A`, `B` whose single off-diagonal entry is `t` (in the
/// first three variables of the ring).
pub fn conjugate(x: &MatrixFactorisation, t: &Terms) -> Result<MatrixFactorisation, String> {
    let r = &x.ring;
    let t: Terms = t
        .iter()
        .map(|(e, c)| {
            let mut v = vec![0; r.nvars()];
            for (i, k) in e.iter().enumerate().take(r.nvars()) {
                v[i] = *k;
            }
            (v, *c)
        })
        .collect();
    let p = poly(r, &t);
    let unitri = |n: usize, sign: bool| {
        let mut m = PolyMatrix::identity(r, n);
        if n > 1 {
            m.set(0, n - 1, if sign { p.neg() } else { p.clone() });
        }
        m
    };
    let (a, ai) = (unitri(x.r0(), false), unitri(x.r0(), true));
    let (b, bi) = (unitri(x.r1(), false), unitri(x.r1(), true));
    // d1: X¹ → X⁰, d0: X⁰ → X¹
    let d1 = a.try_mul(&x.d1).and_then(|m| m.try_mul(&bi)).map_err(err)?;
    let d0 = b.try_mul(&x.d0).and_then(|m| m.try_mul(&ai)).map_err(err)?;
    let mut y = MatrixFactorisation::new(x.potential.clone(), d0, d1).map_err(err)?;
    y.split = x.split.clone();
    Ok(y)
}

// ---- residue transformation law ----

/// Denominators `(x^a + q1(y, z), y^b + q2(z), z^c)`, supported at the origin only; the
/// second system is `C f` for a unitriangular `C`, constant scalings and a permutation.
#[derive(Clone, Debug)]
pub struct ResidueCase {
    pub exps: Vec<u32>,
    pub tails: Vec<Terms>,
    pub numerator: Terms,
    pub lower: Vec<Terms>,
    pub scales: Vec<i64>,
    pub perm: Vec<usize>,
}

pub fn residue_case() -> impl Strategy<Value = ResidueCase> {
    (
        prop::collection::vec(1u32..=3, 3),
        prop::collection::vec(terms(3, 3, 2), 3),
        terms(3, 4, 4),
        prop::collection::vec(terms(3, 2, 2), 3),
        prop::collection::vec(prop_oneof![-3i64..=-1, 1i64..=3], 3),
        Just(vec![0usize, 1, 2]).prop_shuffle(),
    )
        .prop_map(|(exps, tails, numerator, lower, scales, perm)| ResidueCase {
            exps,
            tails,
            numerator,
            lower,
            scales,
            perm,
        })
}

fn perm_sign(p: &[usize]) -> i64 {
    let mut s = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

/// `Res[φ/f] = Res[φ det C / C f]`, computed by two independent Gröbner runs.
pub fn check_residue_law(c: &ResidueCase) -> Check {
    let r = ring(&["x", "y", "z"]);
    let vars: Vec<String> = r.vars().to_vec();
    let mut f = Vec::new();
    for i in 0..3 {
        // tail i only involves variables after i
        let tail: Terms = c.tails[i]
            .iter()
            .filter(|(e, _)| e[..=i].iter().all(|&k| k == 0) && e.iter().any(|&k| k > 0))
            .cloned()
            .collect();
        let lead = Polynomial::var(&r, i).pow(c.exps[i]);
        f.push(&lead + &poly(&r, &tail));
    }
    let phi = poly(&r, &c.numerator);
    let base = grothendieck_residue(&ResidueQuery {
        numerator: phi.clone(),
        denominators: f.clone(),
        variables: vars.clone(),
    })
    .map_err(err)?;
    // g = P·D·L·f with L unitriangular
    let mut lf = f.clone();
    for i in 1..3 {
        lf[i] = &lf[i] + &(&poly(&r, &c.lower[i]) * &f[i - 1]);
    }
    let mut det = Scalar::from_int(q(), perm_sign(&c.perm));
    for i in 0..3 {
        let s = Scalar::from_int(q(), c.scales[i]);
        lf[i] = lf[i].scale(&s);
        det = &det * &s;
    }
    let g: Vec<Polynomial> = c.perm.iter().map(|&k| lf[k].clone()).collect();
    let other = grothendieck_residue(&ResidueQuery {
        numerator: phi.scale(&det),
        denominators: g,
        variables: vars,
    })
    .map_err(err)?;
    if base == other {
        Ok(())
    } else {
        Err(format!("Res[φ/f] = {base} but Res[φ det C / Cf] = {other}"))
    }
}

// ---- defects for quantum-dimension laws ----

#[derive(Clone, Debug)]
pub enum Piece {
    /// `(t - s^k, (t^a - s^{ka})/(t - s^k))`, optionally shifted.
    Perm { a: u32, k: u32, shifted: bool },
    /// The Knörrer defect out of the trivial model.
    Knoerrer,
    Identity { a: u32 },
}

pub fn piece() -> impl Strategy<Value = Piece> {
    prop_oneof![
        (2u32..=4, 1u32..=2, any::<bool>()).prop_map(|(a, k, shifted)| Piece::Perm { a, k, shifted }),
        Just(Piece::Knoerrer),
        (2u32..=4).prop_map(|a| Piece::Identity { a }),
    ]
}

/// Builds a graded piece with variables suffixed by `tag`.
pub fn build_piece(pc: &Piece, tag: &str) -> Result<MatrixFactorisation, String> {
    match pc {
        Piece::Perm { a, k, shifted } => {
            let (t, s) = (format!("t{tag}"), format!("s{tag}"));
            let (a, k) = (*a, *k);
            let r = RingSpec::graded(q(), &[&t, &s], &[rat(2, a as i64), rat(2, (a * k) as i64)]).map_err(err)?;
            let x = Polynomial::var(&r, 0);
            let u = Polynomial::var(&r, 1).pow(k);
            let mut qt = Polynomial::zero(&r);
            for i in 0..a {
                qt = &qt + &(&x.pow(i) * &u.pow(a - 1 - i));
            }
            let m = koszul(&r, &[(&x - &u, qt)]).map_err(err)?;
            let m = if *shifted { shift(&m) } else { m };
            m.with_split(VarSplit {
                target: vec![t],
                source: vec![s],
            })
            .map_err(err)
        }
        Piece::Knoerrer => {
            let k = knoerrer_defect(q()).map_err(err)?;
            let names: HashMap<String, String> =
                [("u", format!("u{tag}")), ("v", format!("v{tag}"))].into_iter().map(|(a, b)| (a.to_string(), b)).collect();
            rename(&k, &names)
        }
        Piece::Identity { a } => {
            let t = format!("i{tag}");
            let r = RingSpec::graded(q(), &[&t], &[rat(2, *a as i64)]).map_err(err)?;
            identity_defect(&Polynomial::var(&r, 0).pow(*a)).map_err(err)
        }
    }
}

/// Same factorisation with variables renamed (order kept).
pub fn rename(x: &MatrixFactorisation, names: &HashMap<String, String>) -> Result<MatrixFactorisation, String> {
    rename_vars(x, names).map_err(err)
}

pub fn split_counts(x: &MatrixFactorisation) -> (usize, usize) {
    let s = x.split.as_ref().unwrap();
    (s.target.len(), s.source.len())
}

fn qd(x: &MatrixFactorisation, side: Side) -> Result<Polynomial, String> {
    Ok(quantum_dim(x, side, None).map_err(err)?.value)
}

/// Quantum dimensions of `X ⊠ Y` are products (the reordering sign `(-1)^{n_Y (m_X + n_X)}`
/// is trivial because every piece has `m ≡ n mod 2`).
pub fn check_multiplicative(a: &Piece, b: &Piece) -> Check {
    let x = build_piece(a, "1")?;
    let y = build_piece(b, "2")?;
    let xy = external_product(&x, &y).map_err(err)?;
    for side in [Side::Left, Side::Right] {
        let p = qd(&xy, side)?;
        let prod = {
            let (u, v) = (qd(&x, side)?, qd(&y, side)?);
            let r = p.ring().clone();
            &u.embed(&r).map_err(err)? * &v.embed(&r).map_err(err)?
        };
        if p != prod {
            return Err(format!("{side:?}: D(X⊠Y) = {p}, D(X)·D(Y) = {prod}"));
        }
    }
    Ok(())
}

/// Defects with even numbers of source and target variables, randomized by a unitriangular
/// change of basis.
pub fn check_duality(a: &Piece, b: &Piece, t: &Terms) -> Check {
    let x = build_piece(a, "1")?;
    let y = build_piece(b, "2")?;
    let mut xy = external_product(&x, &y).map_err(err)?;
    let (m, n) = split_counts(&xy);
    if m % 2 == 1 || n % 2 == 1 {
        xy = external_product(&xy, &build_piece(&Piece::Perm { a: 3, k: 1, shifted: false }, "3")?).map_err(err)?;
    }
    let xy = conjugate(&xy, t)?;
    let v = dual(&xy);
    for (s1, s2) in [(Side::Left, Side::Right), (Side::Right, Side::Left)] {
        let (p, pv) = (qd(&xy, s1)?, qd(&v, s2)?);
        if p.to_string() != pv.to_string() || p.ring().vars() != pv.ring().vars() {
            return Err(format!("D_{s1:?}(X) = {p}, D_{s2:?}(X^v) = {pv}"));
        }
    }
    Ok(())
}

pub fn weighted_homogeneous(p: &Polynomial, deg: &BigRational) -> bool {
    let w = p.ring().degrees().unwrap();
    p.terms().iter().all(|(m, _)| &m.weighted_degree(w) == deg)
}

/// Graded quantum dimensions are homogeneous of degree `|ĉ_V - ĉ_W|`.
pub fn check_degree_law(x: &MatrixFactorisation) -> Check {
    let split = x.split.as_ref().unwrap();
    let tr = x.ring.subring(&split.target).map_err(err)?;
    let sr = x.ring.subring(&split.source).map_err(err)?;
    let cv = central_charge(&tr).map_err(err)?;
    let cw = central_charge(&sr).map_err(err)?;
    let gap = if cv > cw { &cv - &cw } else { &cw - &cv };
    for side in [Side::Left, Side::Right] {
        let p = qd(x, side)?;
        if !weighted_homogeneous(&p, &gap) {
            return Err(format!("{side:?} dimension {p} is not homogeneous of degree {gap}"));
        }
    }
    Ok(())
}

pub fn graded_corpus() -> Result<Vec<MatrixFactorisation>, String> {
    let mut v = Vec::new();
    for (a, k) in [(2, 1), (2, 2), (3, 1), (3, 2), (4, 2)] {
        v.push(build_piece(&Piece::Perm { a, k, shifted: false }, "")?);
    }
    v.push(build_piece(&Piece::Knoerrer, "")?);
    v.push(build_piece(&Piece::Identity { a: 5 }, "")?);
    for d in 2..=4 {
        v.push(ad_defect(d, q()).map_err(err)?);
    }
    let a = build_piece(&Piece::Perm { a: 3, k: 2, shifted: true }, "1")?;
    let b = build_piece(&Piece::Perm { a: 2, k: 2, shifted: false }, "2")?;
    v.push(external_product(&a, &b).map_err(err)?);
    Ok(v)
}

// ---- unit laws of fusion ----

/// Koszul defects `X: (k[s], W) → (k[t], V)` given as pairs of strings in `t`, `s`.
pub fn unit_law_corpus() -> Vec<(&'static str, &'static str, &'static str, &'static str)> {
    // (V, W, a, b) with a·b = V(t) - W(s)
    vec![
        ("t^3", "s^3", "t - s", "t^2 + t s + s^2"),
        ("t^3", "s^6", "t - s^2", "t^2 + t s^2 + s^4"),
        ("t^4", "s^4", "t^2 - s^2", "t^2 + s^2"),
        ("t^4", "s^4", "t - s", "t^3 + t^2 s + t s^2 + s^3"),
        ("t^4", "s^8", "t - s^2", "t^3 + t^2 s^2 + t s^4 + s^6"),
        ("t^2", "s^2", "t - s", "t + s"),
        ("t^2", "s^4", "t + s^2", "t - s^2"),
        ("t^3", "s^3", "t^2 + t s + s^2", "t - s"),
        ("t^5", "s^5", "t - s", "t^4 + t^3 s + t^2 s^2 + t s^3 + s^4"),
        ("t^6", "s^6", "t^3 - s^3", "t^3 + s^3"),
        ("t^6", "s^6", "t^2 - s^2", "t^4 + t^2 s^2 + s^4"),
    ]
}

pub fn koszul_defect(t: &str, s: &str, case: (&str, &str, &str, &str)) -> Result<MatrixFactorisation, String> {
    let r0 = ring(&["t", "s"]);
    let x = koszul(
        &r0,
        &[(
            Polynomial::parse(&r0, case.2).map_err(err)?,
            Polynomial::parse(&r0, case.3).map_err(err)?,
        )],
    )
    .map_err(err)?
    .with_split(VarSplit {
        target: vec!["t".into()],
        source: vec!["s".into()],
    })
    .map_err(err)?;
    let names: HashMap<String, String> = [("t".to_string(), t.to_string()), ("s".to_string(), s.to_string())].into();
    rename(&x, &names)
}

fn ranks(x: &MatrixFactorisation) -> Result<(usize, usize), String> {
    let m = minimal_model(x).map_err(err)?.mf;
    Ok((m.r0(), m.r1()))
}

/// `I_V ⊗ X ≅ X ≅ X ⊗ I_W`, compared by minimal ranks and hom dimensions against probes
/// (the defect itself and its shift).
pub fn check_unit_law(case: (&str, &str, &str, &str)) -> Check {
    let x = koszul_defect("t", "s", case)?;
    let want = ranks(&x)?;
    let probes = [x.clone(), shift(&x)];
    let profile = |f: &MatrixFactorisation| -> Result<Vec<(usize, usize)>, String> {
        probes.iter().map(|p| hom_dimensions(f, p).map_err(err)).collect()
    };
    let expected = profile(&x)?;

    let v = Polynomial::parse(&ring(&["t"]), case.0).map_err(err)?;
    let left = fuse(&identity_defect(&v).map_err(err)?, &koszul_defect("t'", "s", case)?, &["t'".into()], FuseOptions::default())
        .map_err(err)?;
    let left = left.embed(&x.ring).map_err(err)?;

    let w = Polynomial::parse(&ring(&["s"]), case.1).map_err(err)?;
    let iw = identity_defect(&w).map_err(err)?;
    let right = fuse(&koszul_defect("t", "s", case)?, &iw, &["s".into()], FuseOptions::default()).map_err(err)?;
    let back: HashMap<String, String> = [("s'".to_string(), "s".to_string())].into();
    let right = rename(&right, &back)?.embed(&x.ring).map_err(err)?;

    for (side, f) in [("left", &left), ("right", &right)] {
        square_defect(f)?;
        let got = ranks(f)?;
        if got != want {
            return Err(format!("{side} unit: minimal rank {got:?}, expected {want:?}"));
        }
        let prof = profile(f)?;
        if prof != expected {
            return Err(format!("{side} unit: hom dimensions {prof:?}, expected {expected:?}"));
        }
    }
    Ok(())
}

/// Runs `check` on `cases` cases drawn from `strategy`, returning the number run.
pub fn run_property<S: Strategy>(cases: u32, strategy: S, check: impl Fn(&S::Value) -> Check) -> Result<u32, String>
where
    S::Value: std::fmt::Debug,
{
    use proptest::test_runner::{Config, TestRunner};
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&strategy, |v| check(&v).map_err(TestCaseError::fail))
        .map_err(|e| e.to_string())?;
    Ok(cases)
}
