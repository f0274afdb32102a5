//! Exact coefficients in ℚ or a cyclotomic field ℚ(ζ_n).

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "order", rename_all = "lowercase")]
pub enum FieldSpec {
    Rationals,
    Cyclotomic(u32),
}

impl FieldSpec {
    /// Dimension over ℚ.
    pub fn degree(&self) -> usize {
        match self {
            FieldSpec::Rationals => 1,
            FieldSpec::Cyclotomic(n) => cyclo(*n).phi.len() - 1,
        }
    }

    pub fn is_cyclotomic(&self) -> bool {
        matches!(self, FieldSpec::Cyclotomic(_))
    }

    /// Accepts `QQ`, `Q`, `rationals`, `QQ(zeta_n)`, `cyclotomic:n`, `cyclotomic(n)`.
    pub fn parse(s: &str) -> Result<FieldSpec> {
        let t = s.trim();
        let lower = t.to_ascii_lowercase();
        if matches!(lower.as_str(), "q" | "qq" | "rationals" | "rational") {
            return Ok(FieldSpec::Rationals);
        }
        let digits: String = lower.chars().filter(|c| c.is_ascii_digit()).collect();
        let known = lower.starts_with("qq(zeta")
            || lower.starts_with("q(zeta")
            || lower.starts_with("cyclotomic")
            || lower.starts_with("zeta");
        if known && !digits.is_empty() {
            let n: u32 = digits
                .parse()
                .map_err(|_| Error::Invalid(format!("bad field order in {t}")))?;
            if n == 0 {
                return Err(Error::Invalid("cyclotomic order must be positive".into()));
            }
            return Ok(FieldSpec::Cyclotomic(n));
        }
        Err(Error::Invalid(format!("unknown field {t}")))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "QQ"),
            FieldSpec::Cyclotomic(n) => write!(f, "QQ(zeta_{n})"),
        }
    }
}

struct Cyclo {
    /// Φ_n, low degree first, monic.
    phi: Vec<BigRational>,
}

fn cyclo_int(n: u32, memo: &mut HashMap<u32, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    // t^n - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let den = cyclo_int(d, memo);
            num = div_monic_int(&num, &den);
        }
    }
    memo.insert(n, num.clone());
    num
}

fn div_monic_int(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let qd = num.len() - 1 - dd;
    let mut q = vec![BigInt::zero(); qd + 1];
    for k in (0..=qd).rev() {
        let c = r[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            r[k + j] -= &c * dj;
        }
        q[k] = c;
    }
    q
}

fn cyclo(n: u32) -> Arc<Cyclo> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Cyclo>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(c) = cache.read().unwrap().get(&n) {
        return c.clone();
    }
    let mut memo = HashMap::new();
    let phi = cyclo_int(n, &mut memo)
        .into_iter()
        .map(BigRational::from_integer)
        .collect();
    let c = Arc::new(Cyclo { phi });
    cache.write().unwrap().insert(n, c.clone());
    c
}

/// Coefficients of the n-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    cyclo(n).phi.iter().map(|c| c.to_integer()).collect()
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Scalar {
    field: FieldSpec,
    c: Vec<BigRational>,
}

pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl Scalar {
    pub fn zero(field: FieldSpec) -> Scalar {
        Scalar {
            field,
            c: vec![BigRational::zero(); field.degree()],
        }
    }

    pub fn one(field: FieldSpec) -> Scalar {
        Scalar::from_rational(field, BigRational::one())
    }

    pub fn from_int(field: FieldSpec, v: i64) -> Scalar {
        Scalar::from_rational(field, BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(field: FieldSpec, p: i64, q: i64) -> Scalar {
        Scalar::from_rational(field, BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_rational(field: FieldSpec, v: BigRational) -> Scalar {
        let mut s = Scalar::zero(field);
        s.c[0] = v;
        s
    }

    /// The primitive root ζ_n (for ℚ this is 1).
    pub fn zeta(field: FieldSpec) -> Scalar {
        match field {
            FieldSpec::Rationals => Scalar::one(field),
            FieldSpec::Cyclotomic(n) => {
                let mut raw = vec![BigRational::zero(); 2];
                raw[1] = BigRational::one();
                Scalar::reduce(field, raw, n)
            }
        }
    }

    /// Builds an element from power-basis coefficients of any length, reducing modulo Φ_n.
    pub fn from_power_coeffs(field: FieldSpec, coeffs: Vec<BigRational>) -> Scalar {
        match field {
            FieldSpec::Rationals => {
                let mut s = Scalar::zero(field);
                s.c[0] = coeffs.into_iter().fold(BigRational::zero(), |a, b| a + b);
                s
            }
            FieldSpec::Cyclotomic(n) => Scalar::reduce(field, coeffs, n),
        }
    }

    fn reduce(field: FieldSpec, mut raw: Vec<BigRational>, n: u32) -> Scalar {
        let cy = cyclo(n);
        let deg = cy.phi.len() - 1;
        if raw.len() > deg {
            for k in (deg..raw.len()).rev() {
                if raw[k].is_zero() {
                    continue;
                }
                let c = std::mem::replace(&mut raw[k], BigRational::zero());
                for j in 0..deg {
                    if !cy.phi[j].is_zero() {
                        let t = &c * &cy.phi[j];
                        raw[k - deg + j] -= t;
                    }
                }
            }
        }
        raw.resize(deg, BigRational::zero());
        Scalar { field, c: raw }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(|x| x.is_zero())
    }

    /// The rational value if the element lies in ℚ.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.c[1..].iter().all(|x| x.is_zero()) {
            Some(&self.c[0])
        } else {
            None
        }
    }

    fn check(&self, other: &Scalar) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        Ok(())
    }

    pub fn arith(&self, other: &Scalar, op: ArithOp) -> Result<Scalar> {
        self.check(other)?;
        Ok(match op {
            ArithOp::Add => self.add_unchecked(other),
            ArithOp::Sub => self.sub_unchecked(other),
            ArithOp::Mul => self.mul_unchecked(other),
        })
    }

    fn add_unchecked(&self, o: &Scalar) -> Scalar {
        Scalar {
            field: self.field,
            c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(),
        }
    }

    fn sub_unchecked(&self, o: &Scalar) -> Scalar {
        Scalar {
            field: self.field,
            c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect(),
        }
    }

    fn mul_unchecked(&self, o: &Scalar) -> Scalar {
        match self.field {
            FieldSpec::Rationals => Scalar {
                field: self.field,
                c: vec![&self.c[0] * &o.c[0]],
            },
            FieldSpec::Cyclotomic(n) => {
                let d = self.c.len();
                let mut raw = vec![BigRational::zero(); 2 * d - 1];
                for (i, a) in self.c.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (j, b) in o.c.iter().enumerate() {
                        if !b.is_zero() {
                            raw[i + j] += a * b;
                        }
                    }
                }
                Scalar::reduce(self.field, raw, n)
            }
        }
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            field: self.field,
            c: self.c.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, r: &BigRational) -> Scalar {
        Scalar {
            field: self.field,
            c: self.c.iter().map(|a| a * r).collect(),
        }
    }

    pub fn invert(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self.field {
            FieldSpec::Rationals => Ok(Scalar {
                field: self.field,
                c: vec![self.c[0].recip()],
            }),
            FieldSpec::Cyclotomic(n) => {
                let phi = cyclo(n).phi.clone();
                let inv = upoly_inverse_mod(&self.c, &phi)
                    .ok_or(Error::DivisionByZero)?;
                Ok(Scalar::reduce(self.field, inv, n))
            }
        }
    }

    pub fn pow(&self, e: i64) -> Result<Scalar> {
        let mut base = if e < 0 { self.invert()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Scalar::one(self.field);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Parses the textual form produced by `Display`.
    pub fn parse(field: FieldSpec, s: &str) -> Result<Scalar> {
        let e = crate::text::parse_expr(s)?;
        crate::text::eval_scalar(&e, field)
    }

    /// True if the printed form needs parentheses when used as a coefficient.
    pub fn is_compound(&self) -> bool {
        self.c.iter().filter(|x| !x.is_zero()).count() > 1
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(bool, String)> = Vec::new();
        for k in (0..self.c.len()).rev() {
            let a = &self.c[k];
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let abs = a.abs();
            let body = match k {
                0 => fmt_rational(&abs),
                _ => {
                    let zp = if k == 1 { "z".to_string() } else { format!("z^{k}") };
                    if abs.is_one() {
                        zp
                    } else {
                        format!("{}*{}", fmt_rational(&abs), zp)
                    }
                }
            };
            parts.push((neg, body));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        for (i, (neg, body)) in parts.iter().enumerate() {
            if i == 0 {
                write!(f, "{}{}", if *neg { "-" } else { "" }, body)?;
            } else {
                write!(f, " {} {}", if *neg { "-" } else { "+" }, body)?;
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $inner:ident) => {
        impl std::ops::$tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                assert_eq!(self.field, o.field, "scalar field mismatch");
                self.$inner(o)
            }
        }
    };
}
binop!(Add, add, add_unchecked);
binop!(Sub, sub, sub_unchecked);
binop!(Mul, mul, mul_unchecked);

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

// ---- univariate helpers over ℚ, coefficient vectors low degree first ----

fn trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn udivrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    let db = b.len() - 1;
    let lead_inv = b[db].recip();
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = &r[r.len() - 1] * &lead_inv;
        for (j, bj) in b.iter().enumerate() {
            let t = &c * bj;
            r[k + j] -= t;
        }
        q[k] = c;
        trim(&mut r);
        if r.len() <= db {
            break;
        }
    }
    (q, r)
}

fn umul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn usub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
fn upoly_inverse_mod(a: &[BigRational], m: &[BigRational]) -> Option<Vec<BigRational>> {
    let mut r0 = m.to_vec();
    trim(&mut r0);
    let mut r1 = a.to_vec();
    trim(&mut r1);
    let mut s0: Vec<BigRational> = vec![];
    let mut s1: Vec<BigRational> = vec![BigRational::one()];
    while !r1.is_empty() {
        let (q, r) = udivrem(&r0, &r1);
        let s2 = usub(&s0, &umul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if r0.len() != 1 {
        return None;
    }
    let inv = r0[0].recip();
    Some(s0.iter().map(|c| c * &inv).collect())
}
