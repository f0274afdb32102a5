//! Regenerates the worked examples: Knörrer defect, A-D defect, twisted identities and the
//! degenerate boundary pairing on an equivariant factorisation.

use serde_json::{json, Value};

use lgdefect::fusion::{fuse, FuseOptions};
use lgdefect::homalg::hom_dimensions;
use lgdefect::mf::{dual, identity_defect, supertrace, twist, GroupAction};
use lgdefect::models::{ad_defect, knoerrer_defect, monomial_equivariant};
use lgdefect::residue::{kapustin_li, lambda, quantum_dim, Side};
use lgdefect::{FieldSpec, PolyMatrix, Polynomial, RingSpec, Scalar};

use crate::input::CliResult;

pub struct Claim {
    pub claim: String,
    pub computed: String,
    pub expected: String,
}

impl Claim {
    fn new(claim: impl Into<String>, computed: impl ToString, expected: impl ToString) -> Claim {
        Claim {
            claim: claim.into(),
            computed: computed.to_string(),
            expected: expected.to_string(),
        }
    }

    pub fn matches(&self) -> bool {
        self.computed == self.expected
    }
}

pub fn claims(d_min: u32, d_max: u32, safety: u32) -> CliResult<Vec<Claim>> {
    let q = FieldSpec::Rationals;
    let mut out = Vec::new();

    let k = knoerrer_defect(q)?;
    out.push(Claim::new("dim_l(K)", quantum_dim(&k, Side::Left, None)?.value, "-1/2"));
    out.push(Claim::new("dim_r(K)", quantum_dim(&k, Side::Right, None)?.value, "-2"));
    let f = fuse(&dual(&k), &k, &["u".into(), "v".into()], FuseOptions { safety, max_order: None })?;
    let (e, o) = hom_dimensions(&f, &f)?;
    out.push(Claim::new("End(K^∨ ⊗ K) = End(I_0)", format!("({e}, {o})"), "(1, 0)"));

    for d in d_min.max(2)..=d_max {
        let x = ad_defect(d, q)?;
        let s = supertrace(&lambda(&x, &[2, 3, 0, 1])?, x.r0(), x.r1())?;
        let mut expected = "4y^2".to_string();
        for i in 0..=(d as i64 - 2) {
            expected.push_str(&format!(" + {} u^{} x^{}", 4 * d, 2 * i + 2, d as i64 - 2 - i));
        }
        let expected = Polynomial::parse(&x.ring, &expected)?;
        out.push(Claim::new(format!("str(Λ) for the A-D defect, d = {d}"), s, expected));
        out.push(Claim::new(format!("dim_l(X), d = {d}"), quantum_dim(&x, Side::Left, None)?.value, "2"));
        out.push(Claim::new(format!("dim_r(X), d = {d}"), quantum_dim(&x, Side::Right, None)?.value, "1"));
    }

    for d in d_min.max(3)..=d_max {
        let f = FieldSpec::Cyclotomic(d);
        let r = RingSpec::new(f, &["x"])?;
        let w = Polynomial::parse(&r, &format!("x^{d}"))?;
        let g = GroupAction::diagonal_cyclic(f, &["x".to_string()], d, &[1])?;
        let eta = Scalar::zeta(f);
        let g0 = g.find(&[vec![eta.clone()]]).expect("generator present");
        let gi = twist(&g, g0, &identity_defect(&w)?)?;
        out.push(Claim::new(
            format!("dim_r(_g I), W = x^{d}"),
            quantum_dim(&gi, Side::Right, None)?.value,
            Polynomial::constant(&gi.ring, eta.clone()),
        ));
        out.push(Claim::new(
            format!("dim_l(_g I), W = x^{d}"),
            quantum_dim(&gi, Side::Left, None)?.value,
            Polynomial::constant(&gi.ring, eta.invert()?),
        ));
    }

    for (d, n) in [(3, 1), (5, 2)] {
        let (_, _, e) = monomial_equivariant(d, n)?;
        let x = &e.base;
        let one = PolyMatrix::identity(&x.ring, x.rank());
        out.push(Claim::new(
            format!("<1_X, 1_X>_X, W = x^{d}, X = (x^{n}, x^{})", d - n),
            kapustin_li(&one, &one, x)?,
            "0",
        ));
    }
    Ok(out)
}

pub fn render(claims: &[Claim]) -> String {
    let w0 = claims.iter().map(|c| c.claim.chars().count()).max().unwrap_or(5).max(5);
    let w1 = claims.iter().map(|c| c.computed.chars().count()).max().unwrap_or(8).max(8);
    let w2 = claims.iter().map(|c| c.expected.chars().count()).max().unwrap_or(5).max(5);
    let pad = |s: &str, w: usize| format!("{s}{}", " ".repeat(w - s.chars().count()));
    let mut lines = vec![format!("{} | {} | {} | match", pad("claim", w0), pad("computed", w1), pad("expected", w2))];
    for c in claims {
        lines.push(format!(
            "{} | {} | {} | {}",
            pad(&c.claim, w0),
            pad(&c.computed, w1),
            pad(&c.expected, w2),
            if c.matches() { "yes" } else { "NO" }
        ));
    }
    lines.join("\n")
}

pub fn to_json(claims: &[Claim]) -> Value {
    json!(claims
        .iter()
        .map(|c| json!({ "claim": c.claim, "computed": c.computed, "expected": c.expected, "match": c.matches() }))
        .collect::<Vec<_>>())
}
