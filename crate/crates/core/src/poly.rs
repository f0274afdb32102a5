//! Sparse multivariate polynomials with grevlex term order.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{FieldSpec, Scalar};
use crate::text::{self, Evaluable};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingSpec {
    field: FieldSpec,
    vars: Vec<String>,
    degrees: Option<Vec<BigRational>>,
}

pub type Ring = Arc<RingSpec>;

fn valid_name(s: &str) -> bool {
    let mut ch = s.chars();
    matches!(ch.next(), Some(c) if c.is_alphabetic())
        && ch.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

impl RingSpec {
    pub fn new(field: FieldSpec, vars: &[&str]) -> Result<Ring> {
        Self::build(field, vars.iter().map(|s| s.to_string()).collect(), None)
    }

    pub fn graded(field: FieldSpec, vars: &[&str], degrees: &[BigRational]) -> Result<Ring> {
        Self::build(
            field,
            vars.iter().map(|s| s.to_string()).collect(),
            Some(degrees.to_vec()),
        )
    }

    pub fn build(field: FieldSpec, vars: Vec<String>, degrees: Option<Vec<BigRational>>) -> Result<Ring> {
        for (i, v) in vars.iter().enumerate() {
            if !valid_name(v) {
                return Err(Error::Invalid(format!("bad variable name {v:?}")));
            }
            if vars[..i].contains(v) {
                return Err(Error::VariableCollision(v.clone()));
            }
            if field.is_cyclotomic() && v == "z" {
                return Err(Error::Invalid(
                    "the name z is reserved for the root of unity over cyclotomic fields".into(),
                ));
            }
        }
        if let Some(d) = &degrees {
            if d.len() != vars.len() {
                return Err(Error::Invalid("degree list length differs from variable count".into()));
            }
            if d.iter().any(|x| !x.is_positive()) {
                return Err(Error::Invalid("degrees must be positive".into()));
            }
        }
        Ok(Arc::new(RingSpec { field, vars, degrees }))
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }
    pub fn vars(&self) -> &[String] {
        &self.vars
    }
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }
    pub fn degrees(&self) -> Option<&[BigRational]> {
        self.degrees.as_deref()
    }
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Same variables over another field.
    pub fn with_field(&self, field: FieldSpec) -> Result<Ring> {
        Self::build(field, self.vars.clone(), self.degrees.clone())
    }

    pub fn without_degrees(&self) -> Ring {
        Arc::new(RingSpec {
            field: self.field,
            vars: self.vars.clone(),
            degrees: None,
        })
    }

    /// Subring on the listed variables (keeps their degrees).
    pub fn subring(&self, names: &[String]) -> Result<Ring> {
        let mut degs = self.degrees.as_ref().map(|_| Vec::new());
        for n in names {
            let i = self
                .index_of(n)
                .ok_or_else(|| Error::Invalid(format!("unknown variable {n}")))?;
            if let (Some(d), Some(all)) = (degs.as_mut(), self.degrees.as_ref()) {
                d.push(all[i].clone());
            }
        }
        Self::build(self.field, names.to_vec(), degs)
    }

    /// Union of variables (self first), degrees kept only if both graded and consistent.
    pub fn union(&self, other: &RingSpec) -> Result<Ring> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        let mut vars = self.vars.clone();
        let mut degs = match (&self.degrees, &other.degrees) {
            (Some(a), Some(_)) => Some(a.clone()),
            _ => None,
        };
        for (j, v) in other.vars.iter().enumerate() {
            match self.index_of(v) {
                Some(i) => {
                    if let (Some(a), Some(b)) = (&self.degrees, &other.degrees) {
                        if a[i] != b[j] {
                            degs = None;
                        }
                    }
                }
                None => {
                    vars.push(v.clone());
                    if let (Some(d), Some(b)) = (degs.as_mut(), &other.degrees) {
                        d.push(b[j].clone());
                    }
                }
            }
        }
        Self::build(self.field, vars, degs)
    }

    /// The doubled ring k[x, x'] with primed copies appended.
    pub fn doubled(&self) -> Result<Ring> {
        let mut vars = self.vars.clone();
        vars.extend(self.vars.iter().map(|v| primed(v)));
        let degs = self.degrees.as_ref().map(|d| {
            let mut e = d.clone();
            e.extend(d.iter().cloned());
            e
        });
        Self::build(self.field, vars, degs)
    }

    pub fn describe(&self) -> String {
        format!("{}[{}]", self.field, self.vars.join(","))
    }
}

pub fn primed(v: &str) -> String {
    format!("{v}'")
}

/// Exponent vector. `Ord` is graded reverse lexicographic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn one(n: usize) -> Mono {
        Mono(vec![0; n])
    }
    pub fn var(n: usize, i: usize, k: u32) -> Mono {
        let mut m = vec![0; n];
        m[i] = k;
        Mono(m)
    }
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
    pub fn mul(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
    pub fn divides(&self, o: &Mono) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }
    /// o / self, assuming divisibility.
    pub fn quotient(&self, o: &Mono) -> Mono {
        Mono(o.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }
    pub fn lcm(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(&o.0).map(|(a, b)| *a.max(b)).collect())
    }
    pub fn coprime(&self, o: &Mono) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| *a == 0 || *b == 0)
    }
    pub fn weighted_degree(&self, w: &[BigRational]) -> BigRational {
        let mut s = BigRational::zero();
        for (e, d) in self.0.iter().zip(w) {
            if *e > 0 {
                s += d * BigRational::from_integer(BigInt::from(*e));
            }
        }
        s
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Mono) -> Ordering {
        match self.degree().cmp(&o.degree()) {
            Ordering::Equal => {}
            c => return c,
        }
        for (a, b) in self.0.iter().zip(&o.0).rev() {
            if a != b {
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Mono) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: Ring,
    /// Sorted by decreasing monomial, nonzero coefficients only.
    terms: Vec<(Mono, Scalar)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, o: &Polynomial) -> bool {
        same_ring(&self.ring, &o.ring) && self.terms == o.terms
    }
}
impl Eq for Polynomial {}

pub fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || (a.field == b.field && a.vars == b.vars)
}

impl Polynomial {
    pub fn zero(ring: &Ring) -> Polynomial {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Ring, c: Scalar) -> Polynomial {
        let mut p = Polynomial::zero(ring);
        if !c.is_zero() {
            p.terms.push((Mono::one(ring.nvars()), c));
        }
        p
    }

    pub fn one(ring: &Ring) -> Polynomial {
        Polynomial::constant(ring, Scalar::one(ring.field()))
    }

    pub fn from_int(ring: &Ring, v: i64) -> Polynomial {
        Polynomial::constant(ring, Scalar::from_int(ring.field(), v))
    }

    pub fn var(ring: &Ring, i: usize) -> Polynomial {
        Polynomial::monomial(ring, Mono::var(ring.nvars(), i, 1), Scalar::one(ring.field()))
    }

    pub fn var_named(ring: &Ring, name: &str) -> Result<Polynomial> {
        let i = ring
            .index_of(name)
            .ok_or_else(|| Error::Invalid(format!("unknown variable {name}")))?;
        Ok(Polynomial::var(ring, i))
    }

    pub fn monomial(ring: &Ring, m: Mono, c: Scalar) -> Polynomial {
        let mut p = Polynomial::zero(ring);
        if !c.is_zero() {
            p.terms.push((m, c));
        }
        p
    }

    /// Builds from unsorted terms, combining duplicates.
    pub fn from_terms(ring: &Ring, terms: Vec<(Mono, Scalar)>) -> Polynomial {
        let mut map: HashMap<Mono, Scalar> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            match map.get_mut(&m) {
                Some(e) => *e = &*e + &c,
                None => {
                    map.insert(m, c);
                }
            }
        }
        let mut terms: Vec<(Mono, Scalar)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }
    pub fn terms(&self) -> &[(Mono, Scalar)] {
        &self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn nterms(&self) -> usize {
        self.terms.len()
    }
    pub fn leading(&self) -> Option<&(Mono, Scalar)> {
        self.terms.first()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn constant_term(&self) -> Scalar {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => Scalar::zero(self.ring.field()),
        }
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// Smallest total degree of a term (the m-adic order); `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).min()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    fn check(&self, o: &Polynomial) -> Result<()> {
        if !same_ring(&self.ring, &o.ring) {
            return Err(Error::RingMismatch(self.ring.describe(), o.ring.describe()));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Polynomial) -> Result<Polynomial> {
        self.check(o)?;
        Ok(self.merge(o, false))
    }
    pub fn try_sub(&self, o: &Polynomial) -> Result<Polynomial> {
        self.check(o)?;
        Ok(self.merge(o, true))
    }
    pub fn try_mul(&self, o: &Polynomial) -> Result<Polynomial> {
        self.check(o)?;
        Ok(self.mul_unchecked(o))
    }

    fn merge(&self, o: &Polynomial, negate: bool) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < o.terms.len() {
            let ord = if i == self.terms.len() {
                Ordering::Less
            } else if j == o.terms.len() {
                Ordering::Greater
            } else {
                self.terms[i].0.cmp(&o.terms[j].0)
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (m, c) = &o.terms[j];
                    out.push((m.clone(), if negate { -c } else { c.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        &self.terms[i].1 - &o.terms[j].1
                    } else {
                        &self.terms[i].1 + &o.terms[j].1
                    };
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    fn mul_unchecked(&self, o: &Polynomial) -> Polynomial {
        if self.is_zero() || o.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        if o.terms.len() == 1 {
            return self.mul_term(&o.terms[0].0, &o.terms[0].1);
        }
        if self.terms.len() == 1 {
            return o.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut map: HashMap<Mono, Scalar> = HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m = m1.mul(m2);
                let c = c1 * c2;
                match map.get_mut(&m) {
                    Some(e) => *e = &*e + &c,
                    None => {
                        map.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<(Mono, Scalar)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }

    /// Multiplication by a single term; order is preserved.
    pub fn mul_term(&self, m: &Mono, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(a, b)| (a.mul(m), b * c)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(a, b)| (a.clone(), b * c)).collect(),
        }
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(a, b)| (a.clone(), -b)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn partial_derivative(&self, i: usize) -> Polynomial {
        let f = self.ring.field();
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[i] > 0)
            .map(|(m, c)| {
                let mut e = m.clone();
                let k = e.0[i];
                e.0[i] -= 1;
                (e, c * &Scalar::from_int(f, k as i64))
            })
            .collect();
        // the map m -> m/x_i is injective on terms containing x_i, so no merging needed,
        // but the order can change.
        let mut p = Polynomial {
            ring: self.ring.clone(),
            terms,
        };
        p.terms.sort_by(|a, b| b.0.cmp(&a.0));
        p
    }

    /// Ring homomorphism sending variable `i` to `images[i]` (all in one target ring).
    /// A `None` image is an error only if the variable occurs.
    pub fn substitute(&self, images: &[Option<Polynomial>], target: &Ring) -> Result<Polynomial> {
        if images.len() != self.ring.nvars() {
            return Err(Error::Shape("substitution length differs from variable count".into()));
        }
        for im in images.iter().flatten() {
            if !same_ring(im.ring(), target) {
                return Err(Error::RingMismatch(im.ring().describe(), target.describe()));
            }
        }
        let mut powers: Vec<Vec<Polynomial>> = vec![Vec::new(); images.len()];
        let mut out = Polynomial::zero(target);
        let mut acc_terms: Vec<Polynomial> = Vec::new();
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let im = images[i]
                    .as_ref()
                    .ok_or_else(|| Error::MissingImage(self.ring.vars[i].clone()))?;
                let pw = &mut powers[i];
                if pw.is_empty() {
                    pw.push(Polynomial::one(target));
                }
                while pw.len() <= e as usize {
                    let next = &pw[pw.len() - 1] * im;
                    pw.push(next);
                }
                t = &t * &pw[e as usize];
            }
            acc_terms.push(t);
        }
        for t in acc_terms {
            out = &out + &t;
        }
        Ok(out)
    }

    /// Substitution given by variable names; unnamed variables map to themselves when
    /// present in the target ring.
    pub fn substitute_named(&self, images: &HashMap<String, Polynomial>, target: &Ring) -> Result<Polynomial> {
        let ims: Vec<Option<Polynomial>> = self
            .ring
            .vars
            .iter()
            .map(|v| match images.get(v) {
                Some(p) => Some(p.clone()),
                None => target.index_of(v).map(|j| Polynomial::var(target, j)),
            })
            .collect();
        self.substitute(&ims, target)
    }

    /// Re-expresses the polynomial in a ring containing all of its occurring variables.
    pub fn embed(&self, target: &Ring) -> Result<Polynomial> {
        if same_ring(&self.ring, target) {
            return Ok(Polynomial {
                ring: target.clone(),
                terms: self.terms.clone(),
            });
        }
        if self.ring.field != target.field {
            return Err(Error::FieldMismatch(self.ring.field.to_string(), target.field.to_string()));
        }
        let map: Vec<Option<usize>> = self.ring.vars.iter().map(|v| target.index_of(v)).collect();
        let n = target.nvars();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut e = vec![0u32; n];
            for (i, &k) in m.0.iter().enumerate() {
                if k > 0 {
                    let j = map[i].ok_or_else(|| Error::MissingImage(self.ring.vars[i].clone()))?;
                    e[j] += k;
                }
            }
            terms.push((Mono(e), c.clone()));
        }
        Ok(Polynomial::from_terms(target, terms))
    }

    /// Renames variables (by name) and places the result into `target`.
    pub fn rename(&self, names: &HashMap<String, String>, target: &Ring) -> Result<Polynomial> {
        let ims: Vec<Option<Polynomial>> = self
            .ring
            .vars
            .iter()
            .map(|v| {
                let nv = names.get(v).unwrap_or(v);
                target.index_of(nv).map(|j| Polynomial::var(target, j))
            })
            .collect();
        self.substitute(&ims, target)
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.0[i] > 0)
    }

    /// Exact quotient; errors with the remainder if `g` does not divide.
    pub fn exact_divide(&self, g: &Polynomial) -> Result<Polynomial> {
        self.check(g)?;
        let (q, r) = self.divide_single(g)?;
        if !r.is_zero() {
            return Err(Error::NotExact(r.to_string()));
        }
        Ok(q)
    }

    /// Division by one polynomial (its singleton set is a Gröbner basis, so the remainder is canonical).
    pub fn divide_single(&self, g: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        let (lm, lc) = g.leading().cloned().ok_or(Error::DivisionByZero)?;
        let lci = lc.invert()?;
        let mut p = self.clone();
        let mut qterms = Vec::new();
        let mut rterms = Vec::new();
        while let Some((m, c)) = p.terms.first().cloned() {
            if lm.divides(&m) {
                let qm = lm.quotient(&m);
                let qc = &c * &lci;
                p = &p - &g.mul_term(&qm, &qc);
                qterms.push((qm, qc));
            } else {
                rterms.push((m, c));
                p.terms.remove(0);
            }
        }
        Ok((
            Polynomial::from_terms(&self.ring, qterms),
            Polynomial::from_terms(&self.ring, rterms),
        ))
    }

    /// Weighted degree of every term if they agree, `None` if inhomogeneous (zero counts as
    /// homogeneous of every degree and returns `None`).
    pub fn homogeneity(&self) -> Result<Option<BigRational>> {
        let w = self.ring.degrees().ok_or(Error::Ungraded)?;
        let mut deg: Option<BigRational> = None;
        for (m, _) in &self.terms {
            let d = m.weighted_degree(w);
            match &deg {
                None => deg = Some(d),
                Some(e) if *e != d => return Ok(None),
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Coefficient of `x^e` in the listed variables, as a polynomial in the remaining ones
    /// (same ring).
    pub fn coefficient_in(&self, vars: &[usize], e: &[u32]) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| vars.iter().zip(e).all(|(&i, &k)| m.0[i] == k))
            .map(|(m, c)| {
                let mut mm = m.clone();
                for &i in vars {
                    mm.0[i] = 0;
                }
                (mm, c.clone())
            })
            .collect();
        Polynomial::from_terms(&self.ring, terms)
    }

    /// Parses the text grammar over the given ring.
    pub fn parse(ring: &Ring, s: &str) -> Result<Polynomial> {
        let e = text::parse_expr(s)?;
        let r = ring.clone();
        let ctx = move |name: &str, l: usize, c: usize| -> Result<Polynomial> {
            if let Some(i) = r.index_of(name) {
                Ok(Polynomial::var(&r, i))
            } else if name == "z" && r.field().is_cyclotomic() {
                Ok(Polynomial::constant(&r, Scalar::zeta(r.field())))
            } else {
                Err(Error::Parse {
                    line: l,
                    column: c,
                    message: format!("unknown variable {name}"),
                })
            }
        };
        let r2 = ring.clone();
        let fi = move |n: &BigInt| {
            Polynomial::constant(&r2, Scalar::from_rational(r2.field(), BigRational::from_integer(n.clone())))
        };
        text::eval(&e, &ctx, &fi)
    }

    fn fmt_mono(&self, m: &Mono) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.ring.vars[i].clone()),
                _ => parts.push(format!("{}^{}", self.ring.vars[i], e)),
            }
        }
        parts.join("*")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let (neg, body) = if c.is_compound() {
                let cs = format!("({c})");
                (false, if m.is_one() { cs } else { format!("{cs}*{}", self.fmt_mono(m)) })
            } else {
                let text = c.to_string();
                let (neg, abs) = match text.strip_prefix('-') {
                    Some(rest) => (true, rest.to_string()),
                    None => (false, text),
                };
                let body = if m.is_one() {
                    abs
                } else if abs == "1" {
                    self.fmt_mono(m)
                } else {
                    format!("{abs}*{}", self.fmt_mono(m))
                };
                (neg, body)
            };
            if k == 0 {
                write!(f, "{}{}", if neg { "-" } else { "" }, body)?;
            } else {
                write!(f, " {} {}", if neg { "-" } else { "+" }, body)?;
            }
        }
        Ok(())
    }
}

impl Evaluable for Polynomial {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        Polynomial::neg(self)
    }
    fn pow(&self, k: u32) -> Self {
        Polynomial::pow(self, k)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        if o.is_constant() && !o.is_zero() {
            Some(self.scale(&o.constant_term().invert().ok()?))
        } else {
            None
        }
    }
}

macro_rules! pbinop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl std::ops::$tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $m(self, o: &Polynomial) -> Polynomial {
                assert!(
                    same_ring(&self.ring, &o.ring),
                    "ring mismatch: {} vs {}",
                    self.ring.describe(),
                    o.ring.describe()
                );
                $body(self, o)
            }
        }
    };
}
pbinop!(Add, add, |a: &Polynomial, b: &Polynomial| a.merge(b, false));
pbinop!(Sub, sub, |a: &Polynomial, b: &Polynomial| a.merge(b, true));
pbinop!(Mul, mul, |a: &Polynomial, b: &Polynomial| a.mul_unchecked(b));

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

/// `∂_[i] W` over the doubled ring: the first `i` variables primed (0-based `i`) quotient.
pub fn divided_difference(w: &Polynomial, i: usize) -> Result<Polynomial> {
    let ring = w.ring();
    let n = ring.nvars();
    if i >= n {
        return Err(Error::Invalid(format!("variable index {i} out of range")));
    }
    let re = ring.doubled()?;
    let unprimed = |j: usize| Polynomial::var(&re, j);
    let prim = |j: usize| Polynomial::var(&re, n + j);
    let a_im: Vec<Option<Polynomial>> = (0..n)
        .map(|j| Some(if j < i { prim(j) } else { unprimed(j) }))
        .collect();
    let b_im: Vec<Option<Polynomial>> = (0..n)
        .map(|j| Some(if j <= i { prim(j) } else { unprimed(j) }))
        .collect();
    let a = w.substitute(&a_im, &re)?;
    let b = w.substitute(&b_im, &re)?;
    (&a - &b).exact_divide(&(&unprimed(i) - &prim(i)))
}

/// `W` with all variables replaced by their primed copies in the doubled ring.
pub fn to_primed(w: &Polynomial, re: &Ring) -> Result<Polynomial> {
    let n = w.ring().nvars();
    let ims: Vec<Option<Polynomial>> = (0..n).map(|j| Some(Polynomial::var(re, n + j))).collect();
    w.substitute(&ims, re)
}

/// Rational number from text such as `2/3`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}


#[cfg(test)]
mod tests {
    use super::*;

    fn ring(vars: &[&str]) -> Ring {
        RingSpec::new(FieldSpec::Rationals, vars).unwrap()
    }
    fn p(r: &Ring, s: &str) -> Polynomial {
        Polynomial::parse(r, s).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = ring(&["x", "y"]);
        assert_eq!(&p(&r, "x+y") * &p(&r, "x-y"), p(&r, "x^2-y^2"));
        assert_eq!(&p(&r, "x^3") + &Polynomial::zero(&r), p(&r, "x^3"));
    }

    #[test]
    fn derivatives() {
        let r = ring(&["x", "y"]);
        assert_eq!(p(&r, "x^3+y^4").partial_derivative(0), p(&r, "3x^2"));
        assert_eq!(p(&r, "x^4 - x*y^2").partial_derivative(1), p(&r, "-2x*y"));
        let a = ring(&["u", "v"]);
        assert_eq!(p(&a, "u^6 - v^2").partial_derivative(0), p(&a, "6u^5"));
    }

    #[test]
    fn divided_differences() {
        let r = ring(&["x"]);
        let re = r.doubled().unwrap();
        assert_eq!(divided_difference(&p(&r, "x^3"), 0).unwrap(), p(&re, "x^2 + x*x' + x'^2"));
        let r2 = ring(&["x", "y"]);
        let re2 = r2.doubled().unwrap();
        assert_eq!(divided_difference(&p(&r2, "x^2+y^2"), 1).unwrap(), p(&re2, "y + y'"));
        let d1 = divided_difference(&p(&r2, "x^3 - x*y^2"), 0).unwrap();
        assert_eq!(d1, p(&re2, "x^2 + x*x' + x'^2 - y^2"));
    }

    #[test]
    fn exact_division() {
        let r = ring(&["x", "u"]);
        let q = p(&r, "x^4 - u^8").exact_divide(&p(&r, "x - u^2")).unwrap();
        assert_eq!(q, p(&r, "x^3 + x^2*u^2 + x*u^4 + u^6"));
        assert_eq!(p(&r, "x^3").exact_divide(&p(&r, "x")).unwrap(), p(&r, "x^2"));
        let e = p(&r, "x^2+1").exact_divide(&p(&r, "x+1")).unwrap_err();
        assert_eq!(e, Error::NotExact("2".into()));
    }

    #[test]
    fn substitution() {
        let f = FieldSpec::Cyclotomic(3);
        let r = RingSpec::new(f, &["x"]).unwrap();
        let eta_x = Polynomial::var(&r, 0).scale(&Scalar::zeta(f));
        assert_eq!(p(&r, "x^3").substitute(&[Some(eta_x)], &r).unwrap(), p(&r, "x^3"));
        let r2 = ring(&["x", "y"]);
        let sw = [Some(Polynomial::var(&r2, 1)), Some(Polynomial::var(&r2, 0))];
        assert_eq!(p(&r2, "x^2-y^2").substitute(&sw, &r2).unwrap(), p(&r2, "y^2-x^2"));
        let miss = p(&r2, "x*y").substitute(&[Some(Polynomial::var(&r2, 0)), None], &r2);
        assert_eq!(miss.unwrap_err(), Error::MissingImage("y".into()));
    }

    #[test]
    fn weighted_degrees() {
        let r = RingSpec::graded(FieldSpec::Rationals, &["x"], &[rat(2, 3)]).unwrap();
        assert_eq!(p(&r, "x^3").homogeneity().unwrap(), Some(rat(2, 1)));
        assert_eq!(p(&r, "x^3+x").homogeneity().unwrap(), None);
        let a = RingSpec::graded(FieldSpec::Rationals, &["u", "v"], &[rat(1, 3), rat(1, 1)]).unwrap();
        assert_eq!(p(&a, "u^6-v^2").homogeneity().unwrap(), Some(rat(2, 1)));
        assert_eq!(p(&ring(&["x"]), "x").homogeneity(), Err(Error::Ungraded));
    }

    #[test]
    fn format_round_trip() {
        let f = FieldSpec::Cyclotomic(5);
        let r = RingSpec::new(f, &["x", "y'"]).unwrap();
        for s in ["(z^2 + 1)*x^2 - 1/2*x*y' + z", "-x^3 + 7", "-z*x - 1", "0"] {
            let a = p(&r, s);
            assert_eq!(p(&r, &a.to_string()), a, "{s} -> {a}");
        }
        let q = ring(&["x", "y"]);
        assert_eq!(p(&q, "y^2 + x^2 + 2 x y").to_string(), "x^2 + 2*x*y + y^2");
    }

    #[test]
    fn grevlex_order() {
        // x^2 > xy > y^2 > x > y > 1 and x*z > y^2 in grevlex on (x,y,z)
        let a = Mono(vec![1, 0, 1]);
        let b = Mono(vec![0, 2, 0]);
        assert!(b > a);
        assert!(Mono(vec![2, 0, 0]) > Mono(vec![1, 1, 0]));
    }
}
