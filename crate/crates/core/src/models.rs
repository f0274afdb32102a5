//! Named factorisations that recur in examples: the Knörrer defect and the A–D defect.

use std::collections::HashMap;

use crate::error::Result;
use crate::fusion::{fuse, FuseOptions};
use crate::error::Error;
use crate::matrix::PolyMatrix;
use crate::mf::{koszul, rename_vars, right_adjoint, shift, GroupAction, MatrixFactorisation, VarSplit};
use crate::orbifold::EquivariantStructure;
use crate::poly::{rat, Polynomial, RingSpec};
use crate::scalar::{FieldSpec, Scalar};

/// `K` over `k[u, v]` with `d_K = (0, u - v; u + v, 0)`, a defect from the trivial model.
pub fn knoerrer_defect(field: FieldSpec) -> Result<MatrixFactorisation> {
    let r = RingSpec::graded(field, &["u", "v"], &[rat(1, 1), rat(1, 1)])?;
    let u = Polynomial::var(&r, 0);
    let v = Polynomial::var(&r, 1);
    koszul(&r, &[(&u - &v, &u + &v)])?.with_split(VarSplit {
        target: vec!["u".into(), "v".into()],
        source: vec![],
    })
}

/// The defect from `u^{2d} - v²` (source, variables u, v) to `x^d - x y²` (target, x, y):
/// Koszul pairs `(x - u², (x^d - u^{2d})/(x - u²) - y²)` and `(v - u y, v + u y)`.
pub fn ad_defect(d: u32, field: FieldSpec) -> Result<MatrixFactorisation> {
    let dd = d as i64;
    let r = RingSpec::graded(
        field,
        &["x", "y", "u", "v"],
        &[rat(2, dd), rat(dd - 1, dd), rat(1, dd), rat(1, 1)],
    )?;
    let x = Polynomial::var(&r, 0);
    let y = Polynomial::var(&r, 1);
    let u = Polynomial::var(&r, 2);
    let v = Polynomial::var(&r, 3);
    let u2 = u.pow(2);
    let mut quot = Polynomial::zero(&r);
    for i in 0..d {
        quot = &quot + &(&x.pow(i) * &u2.pow(d - 1 - i));
    }
    let uy = &u * &y;
    koszul(&r, &[(&x - &u2, &quot - &y.pow(2)), (&v - &uy, &v + &uy)])?.with_split(VarSplit {
        target: vec!["x".into(), "y".into()],
        source: vec!["u".into(), "v".into()],
    })
}

/// `A_d = X† ⊗ X` for `X = ad_defect(d)`, an endo-defect of `u^{2d} - v²` over `k[u, v, u', v']`
/// with the unprimed variables as target, like the identity defect.
pub fn ad_algebra(d: u32, field: FieldSpec, opts: FuseOptions) -> Result<MatrixFactorisation> {
    let x = ad_defect(d, field)?;
    let xd = right_adjoint(&x)?;
    let names: HashMap<String, String> = [("u", "u'"), ("v", "v'")]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    let xp = rename_vars(&x, &names)?;
    fuse(&xd, &xp, &["x".into(), "y".into()], opts)
}

/// Candidate complement `J_d` of the identity in `A_d`: the Koszul pairs
/// `(u + u', (u^{2d} - u'^{2d})/(u + u'))` and `(v - v', -(v + v'))`, shifted.
pub fn ad_complement(d: u32, field: FieldSpec) -> Result<MatrixFactorisation> {
    let dd = d as i64;
    let r = RingSpec::graded(
        field,
        &["u", "v", "u'", "v'"],
        &[rat(1, dd), rat(1, 1), rat(1, dd), rat(1, 1)],
    )?;
    let u = Polynomial::var(&r, 0);
    let v = Polynomial::var(&r, 1);
    let up = Polynomial::var(&r, 2);
    let vp = Polynomial::var(&r, 3);
    let mut quot = Polynomial::zero(&r);
    for i in 0..2 * d {
        let t = &u.pow(i) * &up.pow(2 * d - 1 - i);
        quot = if i % 2 == 1 { &quot + &t } else { &quot - &t };
    }
    let k = koszul(&r, &[(&u + &up, quot), (&v - &vp, (&v + &vp).neg())])?.with_split(VarSplit {
        target: vec!["u".into(), "v".into()],
        source: vec!["u'".into(), "v'".into()],
    })?;
    Ok(shift(&k))
}

/// `J_d ⊗ J_d`, fused over a middle copy `(a, b)` of `(u, v)`.
pub fn ad_complement_square(d: u32, field: FieldSpec, opts: FuseOptions) -> Result<MatrixFactorisation> {
    let j = ad_complement(d, field)?;
    let ren = |m: &[(&str, &str)]| -> HashMap<String, String> {
        m.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    };
    let left = rename_vars(&j, &ren(&[("u'", "a"), ("v'", "b")]))?;
    let right = rename_vars(&j, &ren(&[("u", "a"), ("v", "b")]))?;
    fuse(&left, &right, &["a".into(), "b".into()], opts)
}

/// `W = x^d` over `ℚ(ζ_d)` with `ℤ_d` acting by `x ↦ ηx`, and `X = (0, x^n; x^{d-n}, 0)`
/// with the generator acting by `diag(1, η^n)`.
pub fn monomial_equivariant(d: u32, n: u32) -> Result<(Polynomial, GroupAction, EquivariantStructure)> {
    if n == 0 || n >= d {
        return Err(Error::Invalid(format!("need 0 < n < d, got n = {n}, d = {d}")));
    }
    let f = FieldSpec::Cyclotomic(d);
    let r = RingSpec::new(f, &["x"])?;
    let x = Polynomial::var(&r, 0);
    let g = GroupAction::diagonal_cyclic(f, &["x".to_string()], d, &[1])?;
    let m = koszul(&r, &[(x.pow(n), x.pow(d - n))])?;
    let eta = Scalar::zeta(f);
    let phi = PolyMatrix::from_scalars(&r, &[vec![Scalar::one(f), Scalar::zero(f)], vec![Scalar::zero(f), eta.pow(n as i64)?]]);
    let gen = g
        .find(&[vec![eta]])
        .ok_or_else(|| Error::Internal("no generator with eigenvalue η".into()))?;
    let e = EquivariantStructure::cyclic(&g, &m, gen, phi)?;
    Ok((x.pow(d), g, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::{hom_dimensions, summand_multiplicity};
    use crate::mf::identity_defect;

    fn identity(d: u32) -> MatrixFactorisation {
        let r = RingSpec::graded(FieldSpec::Rationals, &["u", "v"], &[rat(1, d as i64), rat(1, 1)]).unwrap();
        identity_defect(&Polynomial::parse(&r, &format!("u^{} - v^2", 2 * d)).unwrap()).unwrap()
    }

    fn is_minimal(x: &MatrixFactorisation) -> bool {
        x.differential().constant_part().iter().flatten().all(|c| c.is_zero())
    }

    #[test]
    fn ad_algebra_splits_as_identity_plus_complement() {
        let d = 2;
        let a = ad_algebra(d, FieldSpec::Rationals, FuseOptions::default()).unwrap();
        let i = identity(d);
        let j = ad_complement(d, FieldSpec::Rationals).unwrap();
        assert!(is_minimal(&a));
        assert_eq!((a.r0(), a.r1()), (4, 4));
        assert_eq!(a.potential, i.potential);
        assert_eq!(summand_multiplicity(&i, &a).unwrap(), 1);
        assert_eq!(summand_multiplicity(&j, &a).unwrap(), 1);
        assert_eq!(summand_multiplicity(&j, &i).unwrap(), 0);
    }

    #[test]
    fn quantum_dimensions_add_up() {
        use crate::residue::{quantum_dim, Side};
        let d = 2;
        let a = ad_algebra(d, FieldSpec::Rationals, FuseOptions::default()).unwrap();
        let i = identity(d);
        let j = ad_complement(d, FieldSpec::Rationals).unwrap();
        // I ⊂ A plus one extra map into the J summand
        assert_eq!(hom_dimensions(&i, &a).unwrap(), (2 * d as usize, 0));
        for side in [Side::Left, Side::Right] {
            let q = |x: &MatrixFactorisation| quantum_dim(x, side, None).unwrap().value;
            assert_eq!(q(&a), &q(&i) + &q(&j));
            assert_eq!(q(&j).to_string(), "1");
        }
    }

    #[test]
    fn complement_squares_to_identity() {
        let d = 2;
        let jj = ad_complement_square(d, FieldSpec::Rationals, FuseOptions::default()).unwrap();
        let i = identity(d);
        assert!(is_minimal(&jj));
        assert_eq!(jj.rank(), i.rank());
        assert_eq!(summand_multiplicity(&i, &jj).unwrap(), 1);
        assert_eq!(hom_dimensions(&jj, &jj).unwrap(), (3, 0));
    }
}
