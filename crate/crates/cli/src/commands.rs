use serde_json::{json, Value};

use lgdefect::fusion::{fuse, FuseOptions};
use lgdefect::groebner::buchberger;
use lgdefect::homalg::{hom_dimensions, is_null_homotopic};
use lgdefect::matrix::scalar_rank;
use lgdefect::mf::{MatrixFactorisation, Morphism, Parity};
use lgdefect::models::ad_algebra;
use lgdefect::orbifold::{
    ag_is_symmetric, build_ag, check_frobenius_axioms, check_module_axioms, equivariant_to_module,
    module_to_equivariant, orbifold_hom,
};
use lgdefect::residue::{
    bulk_gram, bulk_pairing, central_charge, jacobi_ring, jacobian, kapustin_li, kapustin_li_gram, quantum_dim, Side,
};
use lgdefect::poly::fmt_rational;
use lgdefect::{Error, FieldSpec, Mono, Polynomial, Ring, Scalar};

use crate::input::{at, load_action, load_matrix, load_structure, load_mf, poly, ring_for, text_arg, CliResult};

/// Human text and JSON with the same content.
pub struct Out {
    pub text: String,
    pub json: Value,
}

impl Out {
    /// A factorisation prints as its descriptor in both modes, so output can be fed back in.
    pub fn mf(x: &MatrixFactorisation) -> Out {
        Out {
            text: x.to_json(),
            json: serde_json::to_value(x.to_descriptor()).expect("descriptor serialises"),
        }
    }
}

pub struct RingArgs<'a> {
    pub field: FieldSpec,
    pub vars: &'a [String],
    pub degrees: &'a [String],
}

fn mono_text(ring: &Ring, m: &Mono) -> String {
    Polynomial::monomial(ring, m.clone(), Scalar::one(ring.field())).to_string()
}

fn matrix_text(m: &[Vec<Scalar>]) -> String {
    m.iter()
        .map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("  "))
        .collect::<Vec<_>>()
        .join("\n")
}

fn matrix_json(m: &[Vec<Scalar>]) -> Value {
    json!(m.iter().map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn rank_of(m: &[Vec<Scalar>]) -> usize {
    if m.is_empty() || m[0].is_empty() {
        0
    } else {
        scalar_rank(m).0
    }
}

pub fn parity(s: &str) -> CliResult<Parity> {
    match s {
        "even" | "0" => Ok(Parity::Even),
        "odd" | "1" => Ok(Parity::Odd),
        _ => Err(Error::Invalid(format!("parity must be even or odd, got {s}")).into()),
    }
}

pub fn jacobi(r: &RingArgs, w: &str) -> CliResult<Out> {
    let wt = text_arg(w)?;
    let ring = ring_for(r.field, r.vars, r.degrees, std::slice::from_ref(&wt))?;
    let w = poly(&ring, &wt)?;
    let basis: Vec<String> = jacobi_ring(&w)?.iter().map(|m| mono_text(&ring, m)).collect();
    Ok(Out {
        text: format!("basis: {}\ndim: {}", basis.join(", "), basis.len()),
        json: json!({ "basis": basis, "dim": basis.len() }),
    })
}

/// Certificates `x_i^{N_i} = Σ_j C_ij g_j` for the ideal of `gens` (or of `∂W`).
pub fn lift(r: &RingArgs, gens: &[String], jac: bool) -> CliResult<Out> {
    let texts = gens.iter().map(|g| text_arg(g)).collect::<CliResult<Vec<_>>>()?;
    let ring = ring_for(r.field, r.vars, r.degrees, &texts)?;
    let mut ps = texts.iter().map(|t| poly(&ring, t)).collect::<CliResult<Vec<_>>>()?;
    if jac {
        if ps.len() != 1 {
            return Err(Error::Invalid("--jacobian takes exactly one potential".into()).into());
        }
        ps = jacobian(&ps[0]);
    }
    let ib = buchberger(&ps)?;
    let (ns, c) = ib.lift_monomial_powers()?;
    let vars = ring.vars();
    let mut lines = vec![format!("generators: {}", ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "))];
    let mut rows = Vec::new();
    for (i, row) in c.iter().enumerate() {
        let cs: Vec<String> = row.iter().map(|p| p.to_string()).collect();
        lines.push(format!("{}^{} = [{}]", vars[i], ns[i], cs.join(", ")));
        rows.push(json!({ "variable": vars[i], "exponent": ns[i], "coefficients": cs }));
    }
    Ok(Out {
        text: lines.join("\n"),
        json: json!({ "generators": ps.iter().map(|p| p.to_string()).collect::<Vec<_>>(), "lifts": rows }),
    })
}

pub fn homdim(x: &str, y: &str) -> CliResult<Out> {
    let (a, b) = (load_mf(x)?, load_mf(y)?);
    let (e, o) = hom_dimensions(&a, &b)?;
    Ok(Out {
        text: format!("even: {e}\nodd: {o}"),
        json: json!({ "even": e, "odd": o }),
    })
}

pub fn nullhtpy(x: &str, y: &str, matrix: &str, p: &str) -> CliResult<Out> {
    let (a, b) = (load_mf(x)?, load_mf(y)?);
    let m = load_matrix(matrix, &a.ring)?;
    let phi = at(matrix, Morphism::new(&a, &b, parity(p)?, m))?;
    Ok(match is_null_homotopic(&phi)? {
        Some(h) => Out {
            text: format!("null-homotopic: true\nwitness:\n{}", h.matrix),
            json: json!({ "null_homotopic": true, "witness": h.matrix.to_strings() }),
        },
        None => Out {
            text: "null-homotopic: false".into(),
            json: json!({ "null_homotopic": false }),
        },
    })
}

pub fn side(s: &str) -> CliResult<Side> {
    match s {
        "left" | "l" => Ok(Side::Left),
        "right" | "r" => Ok(Side::Right),
        _ => Err(Error::Invalid(format!("side must be left or right, got {s}")).into()),
    }
}

pub fn qdim(x: &str, s: &str, phi: Option<&str>) -> CliResult<Out> {
    let a = load_mf(x)?;
    let m = phi.map(|p| load_matrix(p, &a.ring)).transpose()?;
    let q = quantum_dim(&a, side(s)?, m.as_ref())?;
    let v = q.value.to_string();
    let mut text = v.clone();
    if q.parity_mismatch {
        text.push_str("\nwarning: source and target variable counts differ in parity");
    }
    Ok(Out {
        text,
        json: json!({ "value": v, "invertible": q.is_invertible(), "parity_mismatch": q.parity_mismatch }),
    })
}

pub fn pairing_bulk(r: &RingArgs, w: &str, a: &str, b: &str) -> CliResult<Out> {
    let texts = [text_arg(w)?, text_arg(a)?, text_arg(b)?];
    let ring = ring_for(r.field, r.vars, r.degrees, &texts)?;
    let ps = texts.iter().map(|t| poly(&ring, t)).collect::<CliResult<Vec<_>>>()?;
    let v = bulk_pairing(&ps[1], &ps[2], &ps[0])?.to_string();
    Ok(Out {
        text: v.clone(),
        json: json!({ "value": v }),
    })
}

pub fn pairing_boundary(x: &str, a: &str, b: &str) -> CliResult<Out> {
    let m = load_mf(x)?;
    let (p1, p2) = (load_matrix(a, &m.ring)?, load_matrix(b, &m.ring)?);
    let v = kapustin_li(&p1, &p2, &m)?.to_string();
    Ok(Out {
        text: v.clone(),
        json: json!({ "value": v }),
    })
}

pub fn gram_bulk(r: &RingArgs, w: &str) -> CliResult<Out> {
    let wt = text_arg(w)?;
    let ring = ring_for(r.field, r.vars, r.degrees, std::slice::from_ref(&wt))?;
    let w = poly(&ring, &wt)?;
    let (basis, g) = bulk_gram(&w)?;
    let names: Vec<String> = basis.iter().map(|m| mono_text(&ring, m)).collect();
    let rank = rank_of(&g);
    Ok(Out {
        text: format!("basis: {}\n{}\nrank: {rank}", names.join(", "), matrix_text(&g)),
        json: json!({ "basis": names, "gram": matrix_json(&g), "rank": rank }),
    })
}

pub fn gram_boundary(x: &str, p: &str) -> CliResult<Out> {
    let m = load_mf(x)?;
    let g = kapustin_li_gram(&m, parity(p)?)?;
    let rank = rank_of(&g);
    Ok(Out {
        text: format!("{}\nrank: {rank}", matrix_text(&g)),
        json: json!({ "gram": matrix_json(&g), "rank": rank }),
    })
}

/// `ĉ` from the degrees; a given potential must have degree 2.
pub fn ccharge(r: &RingArgs, w: Option<&str>) -> CliResult<Out> {
    if r.degrees.is_empty() {
        return Err(Error::Ungraded.into());
    }
    let texts = w.map(text_arg).transpose()?.into_iter().collect::<Vec<_>>();
    let ring = ring_for(r.field, r.vars, r.degrees, &texts)?;
    if let Some(t) = texts.first() {
        let p = poly(&ring, t)?;
        match p.homogeneity()? {
            Some(d) if d == lgdefect::poly::rat(2, 1) => {}
            other => {
                let got = other.map(|d| fmt_rational(&d)).unwrap_or_else(|| "inhomogeneous".into());
                return Err(Error::Invalid(format!("potential must have degree 2, got {got}")).into());
            }
        }
    }
    let c = fmt_rational(&central_charge(&ring)?);
    Ok(Out {
        text: c.clone(),
        json: json!({ "central_charge": c }),
    })
}

pub fn fuse_cmd(y: &str, x: &str, over: &[String], safety: u32) -> CliResult<Out> {
    let (a, b) = (load_mf(y)?, load_mf(x)?);
    let f = fuse(&a, &b, over, FuseOptions { safety, max_order: None })?;
    Ok(Out::mf(&f))
}

fn potential_and_action(r: &RingArgs, w: &str, action: &str) -> CliResult<(Polynomial, lgdefect::mf::GroupAction)> {
    let g = load_action(action)?;
    let wt = text_arg(w)?;
    let vars = if r.vars.is_empty() { g.vars.clone() } else { r.vars.to_vec() };
    let ring = ring_for(g.field, &vars, r.degrees, std::slice::from_ref(&wt))?;
    Ok((poly(&ring, &wt)?, g))
}

pub fn ag_build(r: &RingArgs, w: &str, action: &str) -> CliResult<Out> {
    let (w, g) = potential_and_action(r, w, action)?;
    let ag = build_ag(&w, &g)?;
    let c = &ag.datum.carrier;
    let sectors: Vec<[usize; 2]> = ag.sectors.summands.iter().map(|s| [s.r0(), s.r1()]).collect();
    let text = format!(
        "group order: {}\nsectors: {}\ncarrier rank: ({}|{})\n{}",
        g.order(),
        sectors.iter().map(|[a, b]| format!("({a}|{b})")).collect::<Vec<_>>().join(" "),
        c.r0(),
        c.r1(),
        c.to_json()
    );
    Ok(Out {
        text,
        json: json!({
            "order": g.order(),
            "sectors": sectors,
            "carrier": serde_json::to_value(c.to_descriptor()).expect("descriptor serialises"),
        }),
    })
}

pub fn ag_check(r: &RingArgs, w: &str, action: &str) -> CliResult<(Out, bool)> {
    let (w, g) = potential_and_action(r, w, action)?;
    let ag = build_ag(&w, &g)?;
    let rep = check_frobenius_axioms(&ag.datum)?;
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    for v in &rep.verdicts {
        let kind = match (v.holds, v.strict) {
            (true, true) => "strict",
            (true, false) => "up to homotopy",
            _ => "FAILS",
        };
        if v.detail.is_empty() {
            lines.push(format!("{}: {kind}", v.axiom));
        } else {
            lines.push(format!("{}: {}", v.axiom, v.detail));
        }
        rows.push(json!({ "axiom": v.axiom, "holds": v.holds, "strict": v.strict, "detail": v.detail }));
    }
    let ok = rep.all_hold();
    Ok((
        Out {
            text: lines.join("\n"),
            json: json!({ "all_hold": ok, "axioms": rows }),
        },
        ok,
    ))
}

pub fn ag_symmetric(r: &RingArgs, w: &str, action: &str) -> CliResult<Out> {
    let (w, g) = potential_and_action(r, w, action)?;
    let s = ag_is_symmetric(&w, &g)?;
    Ok(Out {
        text: format!("symmetric: {s}"),
        json: json!({ "symmetric": s }),
    })
}

/// Validates an equivariant structure and pushes it through the module dictionary and back.
pub fn equiv_check(x: &str, action: &str, structure: &str) -> CliResult<Out> {
    let base = load_mf(x)?;
    let g = load_action(action)?;
    let e = load_structure(structure, &g, &base)?;
    let ag = build_ag(&base.potential, &g)?;
    let m = equivariant_to_module(&e, &ag)?;
    check_module_axioms(&ag.datum, &m)?;
    let back = module_to_equivariant(&m, &ag)?;
    let round_trip = back == e;
    let (even, odd) = orbifold_hom(&ag.datum, &m, &m)?;
    Ok(Out {
        text: format!("cocycle: ok\nmodule axioms: ok\nround trip: {round_trip}\nequivariant End: even {even}, odd {odd}"),
        json: json!({ "cocycle": true, "module_axioms": true, "round_trip": round_trip, "end": { "even": even, "odd": odd } }),
    })
}

pub fn ad_build(d: u32, safety: u32) -> CliResult<Out> {
    if d < 2 {
        return Err(Error::Invalid(format!("d must be at least 2, got {d}")).into());
    }
    let a = ad_algebra(d, FieldSpec::Rationals, FuseOptions { safety, max_order: None })?;
    Ok(Out::mf(&a))
}
