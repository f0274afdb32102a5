//! Grothendieck residues via the transformation law, and the pairings, bulk/boundary maps
//! and quantum dimensions built from them.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::groebner::buchberger;
use crate::homalg::Cohomology;
use crate::matrix::PolyMatrix;
use crate::mf::{supertrace, MatrixFactorisation, Parity};
use crate::poly::{Mono, Polynomial, Ring};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct ResidueQuery {
    pub numerator: Polynomial,
    pub denominators: Vec<Polynomial>,
    /// Names of the integration variables; all other variables are spectators.
    pub variables: Vec<String>,
}

/// `Res[φ dx / f_1..f_n]`: with `x_i^{N_i} = Σ C_ij f_j` this is the coefficient of
/// `x^{N-1}` in `det(C) φ`, spectators treated as constants.
pub fn grothendieck_residue(q: &ResidueQuery) -> Result<Polynomial> {
    let ring = q.numerator.ring().clone();
    if q.variables.len() != q.denominators.len() {
        return Err(Error::Shape(format!(
            "{} denominators for {} integration variables",
            q.denominators.len(),
            q.variables.len()
        )));
    }
    if q.variables.is_empty() {
        return Ok(q.numerator.clone());
    }
    let idx: Vec<usize> = q
        .variables
        .iter()
        .map(|v| ring.index_of(v).ok_or_else(|| Error::Invalid(format!("unknown variable {v}"))))
        .collect::<Result<_>>()?;
    let sub = ring.subring(&q.variables)?;
    let dens: Vec<Polynomial> = q
        .denominators
        .iter()
        .map(|f| {
            f.embed(&sub)
                .map_err(|_| Error::Invalid(format!("denominator {f} involves spectator variables")))
        })
        .collect::<Result<_>>()?;
    let ib = buchberger(&dens)?;
    let (ns, rows) = ib.lift_monomial_powers()?;
    let c = PolyMatrix::from_rows(&sub, rows)?.embed(&ring)?;
    let det = c.det()?;
    let prod = &det * &q.numerator;
    let e: Vec<u32> = ns.iter().map(|k| k - 1).collect();
    Ok(prod.coefficient_in(&idx, &e))
}

pub fn jacobian(w: &Polynomial) -> Vec<Polynomial> {
    (0..w.ring().nvars()).map(|i| w.partial_derivative(i)).collect()
}

/// Standard monomial basis of `Jac(W)`.
pub fn jacobi_ring(w: &Polynomial) -> Result<Vec<Mono>> {
    if w.ring().nvars() == 0 {
        return Ok(vec![Mono::one(0)]);
    }
    buchberger(&jacobian(w))?.quotient_basis()
}

/// Normal form of `f` modulo the Jacobian ideal of `w` (same ring).
pub fn jacobi_normal_form(f: &Polynomial, w: &Polynomial) -> Result<Polynomial> {
    if w.ring().nvars() == 0 {
        return Ok(f.clone());
    }
    Ok(buchberger(&jacobian(w))?.normal_form(f)?.remainder)
}

fn as_scalar(p: &Polynomial) -> Result<Scalar> {
    if p.is_constant() {
        Ok(p.constant_term())
    } else {
        Err(Error::Internal(format!("expected a constant, got {p}")))
    }
}

fn full_residue(num: &Polynomial, w: &Polynomial) -> Result<Scalar> {
    let q = ResidueQuery {
        numerator: num.clone(),
        denominators: jacobian(w),
        variables: w.ring().vars().to_vec(),
    };
    as_scalar(&grothendieck_residue(&q)?)
}

/// `⟨φ1, φ2⟩_W = Res[φ1 φ2 dx / ∂W]`.
pub fn bulk_pairing(phi1: &Polynomial, phi2: &Polynomial, w: &Polynomial) -> Result<Scalar> {
    full_residue(&(phi1 * phi2), w)
}

/// Gram matrix of the bulk pairing on the monomial basis of `Jac(W)`.
pub fn bulk_gram(w: &Polynomial) -> Result<(Vec<Mono>, Vec<Vec<Scalar>>)> {
    let basis = jacobi_ring(w)?;
    let one = Scalar::one(w.ring().field());
    let polys: Vec<Polynomial> = basis.iter().map(|m| Polynomial::monomial(w.ring(), m.clone(), one.clone())).collect();
    let mut g = Vec::with_capacity(polys.len());
    for a in &polys {
        let mut row = Vec::with_capacity(polys.len());
        for b in &polys {
            row.push(bulk_pairing(a, b, w)?);
        }
        g.push(row);
    }
    Ok((basis, g))
}

fn sign_binom(n: usize) -> i64 {
    // (-1)^{n+1 choose 2}
    if ((n + 1) * n / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `∂_{x_1} d_X ... ∂_{x_n} d_X` over the listed variable indices.
pub fn lambda(x: &MatrixFactorisation, vars: &[usize]) -> Result<PolyMatrix> {
    let mut l = PolyMatrix::identity(&x.ring, x.rank());
    for &i in vars {
        l = l.try_mul(&x.partial_differential(i))?;
    }
    Ok(l)
}

/// `⟨Ψ1, Ψ2⟩_X = Res[str(Ψ1 Ψ2 Λ_X) dx / ∂W]` for a boundary factorisation.
pub fn kapustin_li(psi1: &PolyMatrix, psi2: &PolyMatrix, x: &MatrixFactorisation) -> Result<Scalar> {
    let n = x.ring.nvars();
    let l = lambda(x, &(0..n).collect::<Vec<_>>())?;
    let s = supertrace(&psi1.try_mul(psi2)?.try_mul(&l)?, x.r0(), x.r1())?;
    full_residue(&s, &x.potential)
}

/// Gram matrix of the boundary pairing between `H^p(X,X)` and `H^{p+n}(X,X)`.
pub fn kapustin_li_gram(x: &MatrixFactorisation, p: Parity) -> Result<Vec<Vec<Scalar>>> {
    let n = x.ring.nvars();
    let q = if n.is_multiple_of(2) { p } else { p.add(Parity::Odd) };
    let a = Cohomology::compute(x, x, p)?.basis();
    let b = Cohomology::compute(x, x, q)?.basis();
    let mut g = Vec::with_capacity(a.len());
    for u in &a {
        let mut row = Vec::with_capacity(b.len());
        for v in &b {
            row.push(kapustin_li(&u.matrix, &v.matrix, x)?);
        }
        g.push(row);
    }
    Ok(g)
}

/// `β^X(Ψ) = (-1)^{n+1 choose 2} str(Ψ Λ_X)` in `Jac(W)`.
pub fn boundary_bulk(psi: &PolyMatrix, x: &MatrixFactorisation) -> Result<Polynomial> {
    let n = x.ring.nvars();
    let l = lambda(x, &(0..n).collect::<Vec<_>>())?;
    let s = supertrace(&psi.try_mul(&l)?, x.r0(), x.r1())?;
    let s = s.scale(&Scalar::from_int(x.ring.field(), sign_binom(n)));
    jacobi_normal_form(&s, &x.potential)
}

/// `β_X(φ) = φ · 1_X`.
pub fn bulk_boundary(phi: &Polynomial, x: &MatrixFactorisation) -> PolyMatrix {
    PolyMatrix::scalar_identity(&x.ring, x.rank(), phi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumDim {
    /// Element of the Jacobi ring of the non-integrated side.
    pub value: Polynomial,
    /// Set when source and target variable counts differ in parity; the value is then 0.
    pub parity_mismatch: bool,
}

impl QuantumDim {
    pub fn is_invertible(&self) -> bool {
        self.value.is_constant() && !self.value.is_zero()
    }
}

/// Target and source potentials `(V, W)` of a defect factorising `V(z) - W(x)`.
pub fn split_potential(x: &MatrixFactorisation) -> Result<(Polynomial, Polynomial, Ring, Ring)> {
    let split = x.split.as_ref().ok_or(Error::MissingSplit)?;
    let ring = &x.ring;
    for v in ring.vars() {
        if !split.target.contains(v) && !split.source.contains(v) {
            return Err(Error::Invalid(format!("variable {v} is in neither side of the split")));
        }
    }
    let tr = ring.subring(&split.target)?;
    let sr = ring.subring(&split.source)?;
    let zero_out = |keep: &Ring| -> Result<Polynomial> {
        let ims: Vec<Option<Polynomial>> = ring
            .vars()
            .iter()
            .map(|v| match keep.index_of(v) {
                Some(j) => Some(Polynomial::var(keep, j)),
                None => Some(Polynomial::zero(keep)),
            })
            .collect();
        x.potential.substitute(&ims, keep)
    };
    let v = zero_out(&tr)?;
    let mut w = zero_out(&sr)?.neg();
    let c = w.constant_term();
    if !c.is_zero() {
        w = &w - &Polynomial::constant(&sr, c);
    }
    let back = &v.embed(ring)? - &w.embed(ring)?;
    if back != x.potential {
        return Err(Error::InvalidMf("potential mixes source and target variables".into()));
    }
    Ok((v, w, tr, sr))
}

/// Left or right quantum dimension of a defect `X: (R, W) -> (S, V)`, decorated by `Φ`
/// (identity by default), normal-formed in the Jacobi ring of the other side.
pub fn quantum_dim(x: &MatrixFactorisation, side: Side, phi: Option<&PolyMatrix>) -> Result<QuantumDim> {
    let split = x.split.as_ref().ok_or(Error::MissingSplit)?;
    let (v, w, tr, sr) = split_potential(x)?;
    let (m, n) = (split.target.len(), split.source.len());
    let out_ring = match side {
        Side::Left => sr.clone(),
        Side::Right => tr.clone(),
    };
    if m % 2 != n % 2 {
        return Ok(QuantumDim {
            value: Polynomial::zero(&out_ring),
            parity_mismatch: true,
        });
    }
    let ring = &x.ring;
    let xs: Vec<usize> = split.source.iter().map(|s| ring.index_of(s).unwrap()).collect();
    let zs: Vec<usize> = split.target.iter().map(|s| ring.index_of(s).unwrap()).collect();
    let mut order = xs.clone();
    order.extend(&zs);
    let l = lambda(x, &order)?;
    let id = PolyMatrix::identity(ring, x.rank());
    let f = phi.unwrap_or(&id);
    let s = supertrace(&f.try_mul(&l)?, x.r0(), x.r1())?;
    let (pot, vars, sign) = match side {
        Side::Left => (&v, &split.target, sign_binom(n)),
        Side::Right => (&w, &split.source, sign_binom(m)),
    };
    let dens: Vec<Polynomial> = jacobian(pot).iter().map(|d| d.embed(ring)).collect::<Result<_>>()?;
    let r = grothendieck_residue(&ResidueQuery {
        numerator: s,
        denominators: dens,
        variables: vars.clone(),
    })?;
    let r = r.scale(&Scalar::from_int(ring.field(), sign)).embed(&out_ring)?;
    let other = match side {
        Side::Left => w.clone(),
        Side::Right => v.clone(),
    };
    Ok(QuantumDim {
        value: jacobi_normal_form(&r, &other)?,
        parity_mismatch: false,
    })
}

/// `ĉ = Σ (1 - |x_i|)`.
pub fn central_charge(ring: &Ring) -> Result<BigRational> {
    let degs = ring.degrees().ok_or(Error::Ungraded)?;
    let one = BigRational::from_integer(1.into());
    Ok(degs.iter().fold(BigRational::from_integer(0.into()), |acc, d| acc + (&one - d)))
}
