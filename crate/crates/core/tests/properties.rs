mod support;

use proptest::prelude::*;

use lgdefect::groebner::buchberger;
use lgdefect::fusion::{external_product, fuse, FuseOptions};
use lgdefect::homalg::{default_strictify_order, hom_dimensions, is_null_homotopic, minimal_model, split_idempotent};
use lgdefect::matrix::scalar_rank;
use lgdefect::mf::{adjoints, dual, identity_defect, koszul, shift, shift_by, supertrace, twist, GroupAction, MatrixFactorisation, Morphism, Parity};
use lgdefect::residue::{quantum_dim, Side};
use lgdefect::poly::{divided_difference, rat, to_primed};
use lgdefect::{FieldSpec, Mono, PolyMatrix, Polynomial, RingSpec, Scalar};
use support::*;

fn scalar_in(f: FieldSpec) -> impl Strategy<Value = Scalar> {
    let deg = f.degree();
    prop::collection::vec((-6i64..=6, 1i64..=4), deg).prop_map(move |cs| {
        Scalar::from_power_coeffs(f, cs.into_iter().map(|(p, q)| rat(p, q)).collect())
    })
}

fn fields() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::Rationals),
        Just(FieldSpec::Cyclotomic(3)),
        Just(FieldSpec::Cyclotomic(5)),
        Just(FieldSpec::Cyclotomic(8)),
    ]
}

fn triple() -> impl Strategy<Value = (Scalar, Scalar, Scalar)> {
    fields().prop_flat_map(|f| (scalar_in(f), scalar_in(f), scalar_in(f)))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn scalar_field_axioms((a, b, c) in triple()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            prop_assert!((&a * &a.invert().unwrap()).is_one());
        } else {
            prop_assert!(a.invert().is_err());
        }
    }

    #[test]
    fn scalar_canonical_form((a, _, _) in triple()) {
        let again = Scalar::from_power_coeffs(a.field(), a.coefficients().to_vec());
        prop_assert_eq!(&again, &a);
        prop_assert_eq!(Scalar::parse(a.field(), &a.to_string()).unwrap(), a);
    }

    #[test]
    fn telescoping_identity(t in terms(3, 4, 5)) {
        let r = ring(&["x", "y", "z"]);
        let w = poly(&r, &t);
        let re = r.doubled().unwrap();
        let mut sum = Polynomial::zero(&re);
        for i in 0..3 {
            let diff = &Polynomial::var(&re, i) - &Polynomial::var(&re, 3 + i);
            sum = &sum + &(&diff * &divided_difference(&w, i).unwrap());
        }
        let expect = &w.embed(&re).unwrap() - &to_primed(&w, &re).unwrap();
        prop_assert_eq!(sum, expect);
    }

    #[test]
    fn substitution_is_multiplicative(f in terms(2, 3, 4), g in terms(2, 3, 4), im in prop::collection::vec(terms(2, 2, 3), 2)) {
        let r = ring(&["x", "y"]);
        let ims: Vec<Option<Polynomial>> = im.iter().map(|t| Some(poly(&r, t))).collect();
        let (f, g) = (poly(&r, &f), poly(&r, &g));
        let lhs = (&f * &g).substitute(&ims, &r).unwrap();
        let rhs = &f.substitute(&ims, &r).unwrap() * &g.substitute(&ims, &r).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn weighted_degree_is_additive(a in prop::collection::vec(0u32..5, 2), b in prop::collection::vec(0u32..5, 2), c1 in 1i64..4, c2 in 1i64..4) {
        let w = vec![rat(2, 3), rat(1, 3)];
        let r = RingSpec::graded(FieldSpec::Rationals, &["x", "y"], &w).unwrap();
        let f = poly(&r, &vec![(a.clone(), c1)]);
        let g = poly(&r, &vec![(b.clone(), c2)]);
        let fg = &f * &g;
        let deg = |p: &Polynomial| p.terms()[0].0.weighted_degree(&w);
        prop_assert_eq!(deg(&fg), deg(&f) + deg(&g));
    }

    #[test]
    fn normal_form_certificates(gens in prop::collection::vec(terms(2, 3, 3), 1..=3), f in terms(2, 4, 5)) {
        let r = ring(&["x", "y"]);
        let gens: Vec<Polynomial> = gens.iter().map(|t| poly(&r, t)).filter(|p| !p.is_zero()).collect();
        prop_assume!(!gens.is_empty());
        let ib = buchberger(&gens).unwrap();
        let f = poly(&r, &f);
        let nf = ib.normal_form(&f).unwrap();
        let mut back = nf.remainder.clone();
        for (c, g) in nf.cofactors.iter().zip(&gens) {
            back = &back + &(c * g);
        }
        prop_assert_eq!(&back, &f);
        for (m, _) in nf.remainder.terms() {
            prop_assert!(ib.groebner.iter().all(|g| !g.leading().unwrap().0.divides(m)));
        }
        prop_assert_eq!(&ib.normal_form(&nf.remainder).unwrap().remainder, &nf.remainder);
        for (row, g) in ib.transform.iter().zip(&ib.groebner) {
            let mut s = Polynomial::zero(&r);
            for (c, h) in row.iter().zip(&gens) {
                s = &s + &(c * h);
            }
            prop_assert_eq!(&s, g);
        }
    }

    #[test]
    fn supertrace_cyclicity(
        pa in any::<bool>(), pb in any::<bool>(),
        ea in prop::collection::vec(terms(2, 2, 2), 16),
        eb in prop::collection::vec(terms(2, 2, 2), 16),
    ) {
        let r = ring(&["x", "y"]);
        let (r0, r1) = (2, 2);
        let build = |odd: bool, e: &Vec<Terms>| {
            let mut m = PolyMatrix::zeros(&r, 4, 4);
            for i in 0..4 {
                for j in 0..4 {
                    if ((i >= r0) != (j >= r0)) == odd {
                        m.set(i, j, poly(&r, &e[4 * i + j]));
                    }
                }
            }
            m
        };
        let (a, b) = (build(pa, &ea), build(pb, &eb));
        let ab = supertrace(&a.try_mul(&b).unwrap(), r0, r1).unwrap();
        let ba = supertrace(&b.try_mul(&a).unwrap(), r0, r1).unwrap();
        let sign = if pa && pb { ba.neg() } else { ba };
        prop_assert_eq!(ab, sign);
    }

    #[test]
    fn twist_is_functorial(ps in prop::collection::vec((terms(2, 2, 3), terms(2, 2, 3)), 1..=2), g in 0usize..4, h in 0usize..4) {
        let f = FieldSpec::Cyclotomic(4);
        let r = RingSpec::new(f, &["x", "y"]).unwrap();
        let ps: Vec<_> = ps.iter().map(|(a, b)| (poly(&r, a), poly(&r, b))).collect();
        let x = koszul(&r, &ps).unwrap();
        let act = GroupAction::diagonal_cyclic(f, r.vars(), 4, &[1, 3]).unwrap();
        let gh = act.mul(g, h);
        let lhs = twist(&act, g, &twist(&act, h, &x).unwrap()).unwrap();
        prop_assert_eq!(lhs, twist(&act, gh, &x).unwrap());
        let tx = twist(&act, g, &x).unwrap();
        prop_assert_eq!((tx.r0(), tx.r1()), (x.r0(), x.r1()));
        prop_assert!(square_defect(&tx).is_ok());
    }

    #[test]
    fn null_homotopy_witness(case in 0usize..4, odd in any::<bool>(), e in prop::collection::vec(terms(1, 2, 2), 4)) {
        let r = ring(&["x"]);
        let p = |s: &str| Polynomial::parse(&r, s).unwrap();
        let pairs = [("x", "x^3", "x^2", "x^2"), ("x^2", "x", "x", "x^2"), ("x", "x^3", "x^3", "x"), ("x^2", "x^2", "x^2", "x^2")];
        let (a, b, c, d) = pairs[case];
        let x = koszul(&r, &[(p(a), p(b))]).unwrap();
        let y = koszul(&r, &[(p(c), p(d))]).unwrap();
        // λ of parity |φ| + 1 and φ = d_Y λ - (-1)^{|λ|} λ d_X
        let lodd = !odd;
        let mut lam = PolyMatrix::zeros(&r, 2, 2);
        for i in 0..2 {
            for j in 0..2 {
                if (i != j) == lodd {
                    lam.set(i, j, poly(&r, &e[2 * i + j]));
                }
            }
        }
        let dl = y.differential().try_mul(&lam).unwrap();
        let ld = lam.try_mul(&x.differential()).unwrap();
        let phi = if lodd { dl.try_add(&ld).unwrap() } else { dl.try_sub(&ld).unwrap() };
        let parity = if odd { Parity::Odd } else { Parity::Even };
        let m = Morphism::new(&x, &y, parity, phi.clone()).unwrap();
        let w = is_null_homotopic(&m).unwrap().expect("null-homotopic by construction");
        let dl = y.differential().try_mul(&w.matrix).unwrap();
        let ld = w.matrix.try_mul(&x.differential()).unwrap();
        let back = if w.parity == Parity::Odd { dl.try_add(&ld).unwrap() } else { dl.try_sub(&ld).unwrap() };
        prop_assert_eq!(back, phi);
    }

    #[test]
    fn residue_transformation_law(c in residue_case()) {
        prop_assert!(check_residue_law(&c).is_ok(), "{:?}", check_residue_law(&c));
    }

    #[test]
    fn quotient_basis_matches_linear_algebra(a in 1u32..=4, b in 1u32..=4, tail in terms(2, 3, 2)) {
        let r = ring(&["x", "y"]);
        let tail: Terms = tail.into_iter().filter(|(e, _)| e[0] == 0 && e[1] > 0).collect();
        let f1 = &Polynomial::var(&r, 0).pow(a) + &poly(&r, &tail);
        let f2 = Polynomial::var(&r, 1).pow(b);
        let gens = [f1, f2];
        let ib = buchberger(&gens).unwrap();
        let (ns, rows) = ib.lift_monomial_powers().unwrap();
        for (i, row) in rows.iter().enumerate() {
            let mut s = Polynomial::zero(&r);
            for (c, g) in row.iter().zip(&gens) {
                s = &s + &(c * g);
            }
            prop_assert_eq!(s, Polynomial::var(&r, i).pow(ns[i]));
        }
        let n: u32 = ns.iter().sum();
        let basis = ib.quotient_basis().unwrap();
        prop_assume!(basis.len() <= 30);
        prop_assert_eq!(basis.len(), colength_oracle(&gens, n));
    }

    #[test]
    fn hom_dimensions_are_invariant(case in 0usize..6, twice in any::<bool>()) {
        let r = ring(&["x", "y"]);
        let p = |s: &str| Polynomial::parse(&r, s).unwrap();
        // pairs of factorisations of x^3 + y^3 (Koszul with two pairs, or a single pair)
        let cases = [
            (("x", "x^2", "y", "y^2"), ("x^2", "x", "y", "y^2")),
            (("x", "x^2", "y", "y^2"), ("x", "x^2", "y^2", "y")),
            (("x + y", "x^2 - x y + y^2", "1", "0"), ("x", "x^2", "y", "y^2")),
            (("1", "x^3 + y^3", "x", "0"), ("x + y", "x^2 - x y + y^2", "1", "0")),
            (("x^2", "x", "y^2", "y"), ("x + y", "x^2 - x y + y^2", "y", "0")),
            (("x", "x^2", "y", "y^2"), ("x", "x^2", "y", "y^2")),
        ];
        let ((a, b, c, d), (e, f, g, h)) = cases[case];
        let x = koszul(&r, &[(p(a), p(b)), (p(c), p(d))]).unwrap();
        let y = koszul(&r, &[(p(e), p(f)), (p(g), p(h))]).unwrap();
        prop_assert_eq!(&x.potential, &y.potential);
        let base = hom_dimensions(&x, &y).unwrap();
        let mm = minimal_model(&x).unwrap().mf;
        prop_assert_eq!(hom_dimensions(&mm, &y).unwrap(), base);
        prop_assert_eq!(hom_dimensions(&x, &shift_by(&y, 2)).unwrap(), base);
        let g = GroupAction::diagonal_cyclic(FieldSpec::Rationals, r.vars(), 2, &[1, 1]).unwrap();
        let e = (0..g.order()).find(|&k| g.mul(k, k) == k).unwrap();
        prop_assert_eq!(hom_dimensions(&twist(&g, e, &x).unwrap(), &y).unwrap(), base);
        let again = minimal_model(&mm).unwrap().mf;
        prop_assert_eq!((again.r0(), again.r1()), (mm.r0(), mm.r1()));
        if twice {
            prop_assert_eq!(hom_dimensions(&shift(&shift(&x)), &y).unwrap(), base);
        }
    }
}

/// `dim k[x,y]/(I + m^N)` by linear algebra on monomials of degree `< N`.
fn colength_oracle(gens: &[Polynomial], n: u32) -> usize {
    let r = gens[0].ring().clone();
    let mut monos = Vec::new();
    for d in 0..n {
        for i in 0..=d {
            monos.push(Mono(vec![i, d - i]));
        }
    }
    let mut rows = Vec::new();
    for g in gens {
        for m in &monos {
            let h = g.mul_term(m, &Scalar::one(r.field()));
            let row: Vec<Scalar> = monos
                .iter()
                .map(|k| {
                    h.terms()
                        .iter()
                        .find(|(t, _)| t == k)
                        .map(|(_, c)| c.clone())
                        .unwrap_or_else(|| Scalar::zero(r.field()))
                })
                .collect();
            rows.push(row);
        }
    }
    monos.len() - scalar_rank(&rows).0
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn constructors_square_to_potential(rc in recipe()) {
        let res = check_recipe(&rc);
        prop_assert!(res.is_ok(), "{:?}", res);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn quantum_dimensions_are_multiplicative(a in piece(), b in piece()) {
        let res = check_multiplicative(&a, &b);
        prop_assert!(res.is_ok(), "{:?}", res);
    }

    #[test]
    fn duality_of_quantum_dimensions(a in piece(), b in piece(), t in terms(3, 1, 2)) {
        let res = check_duality(&a, &b, &t);
        prop_assert!(res.is_ok(), "{:?}", res);
    }
}

#[test]
fn identity_defect_squares() {
    let r = ring(&["x", "y"]);
    for w in ["x^3 + y^4", "x^3 + x y^3", "x^4 - y^2"] {
        let i = identity_defect(&Polynomial::parse(&r, w).unwrap()).unwrap();
        square_defect(&i).unwrap();
    }
}

#[test]
fn graded_degree_law() {
    let corpus = graded_corpus().unwrap();
    assert!(corpus.len() >= 5);
    for x in &corpus {
        check_degree_law(x).unwrap();
    }
}

#[test]
fn fusion_unit_laws() {
    let corpus = unit_law_corpus();
    assert!(corpus.len() >= 10);
    for case in corpus {
        check_unit_law(case).unwrap_or_else(|e| panic!("{case:?}: {e}"));
    }
}


proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn split_idempotent_ranks_add_up(case in 0usize..3, t in terms(1, 2, 2)) {
        let r = ring(&["x"]);
        let p = |s: &str| Polynomial::parse(&r, s).unwrap();
        let parts = [("x", "x^3"), ("x^2", "x^2"), ("x^3", "x")];
        let a = koszul(&r, &[(p(parts[case].0), p(parts[case].1))]).unwrap();
        let b = koszul(&r, &[(p(parts[(case + 1) % 3].0), p(parts[(case + 1) % 3].1))]).unwrap();
        // a ⊕ b with even rows (a0, b0) and odd rows (a1, b1)
        let sum = {
            let z = PolyMatrix::zeros(&r, 1, 1);
            let d0 = PolyMatrix::from_blocks(&a.d0, &z, &z, &b.d0);
            let d1 = PolyMatrix::from_blocks(&a.d1, &z, &z, &b.d1);
            MatrixFactorisation::new(a.potential.clone(), d0, d1).unwrap()
        };
        let x = conjugate(&sum, &t).unwrap();
        let mut e = PolyMatrix::zeros(&r, 4, 4);
        e.set(0, 0, Polynomial::one(&r));
        e.set(2, 2, Polynomial::one(&r));
        // the projection onto a, transported along the conjugation
        let back = conjugate(&sum, &t).unwrap();
        let tp = poly(&r, &t);
        let mut u = PolyMatrix::identity(&r, 4);
        u.set(0, 1, tp.clone());
        u.set(2, 3, tp.clone());
        let mut ui = PolyMatrix::identity(&r, 4);
        ui.set(0, 1, tp.neg());
        ui.set(2, 3, tp.neg());
        let e = u.try_mul(&e).unwrap().try_mul(&ui).unwrap();
        let f = PolyMatrix::identity(&r, 4).try_sub(&e).unwrap();
        prop_assert_eq!(&back, &x);
        let order = default_strictify_order(&x.potential).unwrap();
        let em = Morphism::new(&x, &x, Parity::Even, e).unwrap();
        let fm = Morphism::new(&x, &x, Parity::Even, f).unwrap();
        let se = split_idempotent(&x, &em, order).unwrap().mf;
        let sf = split_idempotent(&x, &fm, order).unwrap().mf;
        let mm = minimal_model(&x).unwrap().mf;
        prop_assert_eq!((se.r0() + sf.r0(), se.r1() + sf.r1()), (mm.r0(), mm.r1()));
        prop_assert_eq!(hom_dimensions(&se, &se).unwrap(), hom_dimensions(&a, &a).unwrap());
    }

    #[test]
    fn graded_constructors_keep_degrees(a in piece(), b in piece()) {
        let x = build_piece(&a, "1").unwrap();
        let y = build_piece(&b, "2").unwrap();
        let xy = external_product(&x, &y).unwrap();
        let (l, rr) = adjoints(&xy).unwrap();
        for m in [&x, &xy, &dual(&xy), &shift(&xy), &l, &rr, &minimal_model(&xy).unwrap().mf] {
            prop_assert!(m.is_graded());
            prop_assert!(m.check_grading().is_ok(), "{:?}", m.check_grading());
        }
    }
}

#[test]
fn fusion_is_stable_under_safety_factor() {
    for case in unit_law_corpus().into_iter().take(6) {
        let x = koszul_defect("t", "s", case).unwrap();
        let w = Polynomial::parse(&ring(&["s"]), case.1).unwrap();
        let iw = identity_defect(&w).unwrap();
        let probe = |safety: u32| {
            let f = fuse(&x, &iw, &["s".into()], FuseOptions { safety, max_order: None }).unwrap();
            let m = minimal_model(&f).unwrap().mf;
            ((m.r0(), m.r1()), hom_dimensions(&f, &f).unwrap())
        };
        assert_eq!(probe(1), probe(2), "{case:?}");
        assert_eq!(probe(2), probe(4), "{case:?}");
    }
}

/// `D_l(Y ⊗ X) = D_l(X)·D_l(Y)` when the factors have constant dimensions.
#[test]
fn composition_of_quantum_dimensions() {
    let k = build_piece(&Piece::Knoerrer, "").unwrap();
    let kv = dual(&k);
    let vars = ["u".to_string(), "v".to_string()];
    let both = fuse(&kv, &k, &vars, FuseOptions::default()).unwrap();
    let d = |x: &MatrixFactorisation, s: Side| quantum_dim(x, s, None).unwrap().value.constant_term();
    assert_eq!(d(&both, Side::Left), &d(&k, Side::Left) * &d(&kv, Side::Left));
    assert_eq!(d(&both, Side::Right), &d(&k, Side::Right) * &d(&kv, Side::Right));

    // t^3 <- s^3 <- r^3 along permutation-type defects
    for (c1, c2) in [(0usize, 0usize), (0, 7), (7, 7)] {
        let cases = unit_law_corpus();
        let x = koszul_defect("s", "r", cases[c1]).unwrap();
        let y = koszul_defect("t", "s", cases[c2]).unwrap();
        let f = fuse(&y, &x, &["s".into()], FuseOptions::default()).unwrap();
        for side in [Side::Left, Side::Right] {
            assert_eq!(d(&f, side), &d(&x, side) * &d(&y, side), "{c1} {c2} {side:?}");
        }
    }
}
