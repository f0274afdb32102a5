use std::fs;

use lgdefect::mf::{GroupAction, GroupActionDescriptor, MatrixFactorisation, MfDescriptor};
use lgdefect::orbifold::{EquivariantDescriptor, EquivariantStructure};
use lgdefect::poly::parse_rational;
use lgdefect::text::{parse_expr, Expr};
use lgdefect::{Error, FieldSpec, PolyMatrix, Polynomial, Ring, RingSpec, Scalar};

/// Error tagged with the file (or argument) it came from.
#[derive(Debug)]
pub struct CliError {
    pub origin: Option<String>,
    pub error: Error,
}

impl From<Error> for CliError {
    fn from(error: Error) -> Self {
        CliError { origin: None, error }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn at<T>(origin: &str, r: lgdefect::Result<T>) -> CliResult<T> {
    r.map_err(|error| CliError {
        origin: Some(origin.to_string()),
        error,
    })
}

pub fn read(path: &str) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError {
        origin: Some(path.to_string()),
        error: Error::Invalid(format!("cannot read file: {e}")),
    })
}

/// Literal text, or the contents of a file for `@path`.
pub fn text_arg(s: &str) -> CliResult<(String, String)> {
    match s.strip_prefix('@') {
        Some(path) => Ok((read(path)?, path.to_string())),
        None => Ok((s.to_string(), "argument".to_string())),
    }
}

/// Position in `src` of `(line, column)` inside the JSON string literal `literal`.
fn file_position(src: &str, literal: &str, line: usize, column: usize) -> Option<(usize, usize)> {
    let enc = serde_json::to_string(literal).ok()?;
    let off = src.find(&enc)?;
    let before = &src[..off];
    let l0 = before.matches('\n').count() + 1;
    let quote_col = before.rsplit('\n').next().unwrap_or("").chars().count() + 1;
    if line == 1 {
        Some((l0, quote_col + column))
    } else {
        Some((l0 + line - 1, column))
    }
}

/// Rewrites a parse error raised inside one of the string values of a JSON file so that it
/// points into the file.
fn relocate(src: &str, strings: &[&str], check: impl Fn(&str) -> lgdefect::Result<()>, e: Error) -> Error {
    if !matches!(e, Error::Parse { .. }) {
        return e;
    }
    for s in strings {
        if let Err(Error::Parse { line, column, message }) = check(s) {
            if let Some((line, column)) = file_position(src, s, line, column) {
                return Error::Parse { line, column, message };
            }
        }
    }
    e
}

pub fn load_mf(path: &str) -> CliResult<MatrixFactorisation> {
    let s = read(path)?;
    match MatrixFactorisation::from_json(&s) {
        Ok(x) => Ok(x),
        Err(e) => {
            let Ok(d) = serde_json::from_str::<MfDescriptor>(&s) else {
                return at(path, Err(e));
            };
            let mut strings: Vec<&str> = vec![d.potential.as_str()];
            strings.extend(d.d0.iter().chain(&d.d1).flatten().map(|x| x.as_str()));
            let ring = FieldSpec::parse(&d.field).and_then(|f| RingSpec::build(f, d.vars.clone(), None));
            let check = |t: &str| -> lgdefect::Result<()> {
                parse_expr(t)?;
                if let Ok(r) = &ring {
                    Polynomial::parse(r, t)?;
                }
                Ok(())
            };
            at(path, Err(relocate(&s, &strings, check, e)))
        }
    }
}

pub fn load_action(path: &str) -> CliResult<GroupAction> {
    let s = read(path)?;
    GroupAction::from_json(&s).map_err(|e| {
        let e = match serde_json::from_str::<GroupActionDescriptor>(&s) {
            Ok(d) => {
                let strings: Vec<&str> = d.generators.iter().flatten().flatten().map(|x| x.as_str()).collect();
                let field = FieldSpec::parse(&d.field);
                relocate(&s, &strings, |t| field.clone().and_then(|f| Scalar::parse(f, t)).map(|_| ()), e)
            }
            Err(_) => e,
        };
        CliError {
            origin: Some(path.to_string()),
            error: e,
        }
    })
}

/// Equivariant structure on `base` from a descriptor file.
pub fn load_structure(path: &str, action: &GroupAction, base: &MatrixFactorisation) -> CliResult<EquivariantStructure> {
    let s = read(path)?;
    let d = at(path, EquivariantDescriptor::from_json(&s))?;
    d.build(action, base).map_err(|e| {
        let mut strings: Vec<&str> = Vec::new();
        for g in &d.generators {
            strings.extend(g.element.iter().flatten().map(|x| x.as_str()));
            strings.extend(g.phi.iter().flatten().map(|x| x.as_str()));
        }
        let check = |t: &str| -> lgdefect::Result<()> {
            Scalar::parse(action.field, t).map(|_| ()).or_else(|_| Polynomial::parse(&base.ring, t).map(|_| ()))
        };
        CliError {
            origin: Some(path.to_string()),
            error: relocate(&s, &strings, check, e),
        }
    })
}

/// A matrix file: a JSON array of rows of polynomial strings.
pub fn load_matrix(path: &str, ring: &Ring) -> CliResult<PolyMatrix> {
    let s = read(path)?;
    let rows: Vec<Vec<String>> = serde_json::from_str(&s).map_err(|e| CliError {
        origin: Some(path.to_string()),
        error: Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        },
    })?;
    PolyMatrix::parse(ring, &rows).map_err(|e| {
        let strings: Vec<&str> = rows.iter().flatten().map(|x| x.as_str()).collect();
        let e = relocate(&s, &strings, |t| Polynomial::parse(ring, t).map(|_| ()), e);
        CliError {
            origin: Some(path.to_string()),
            error: e,
        }
    })
}

fn collect_vars(e: &Expr, out: &mut Vec<String>) {
    match e {
        Expr::Num(_) => {}
        Expr::Var(n, _, _) => {
            if !out.contains(n) {
                out.push(n.clone());
            }
        }
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b, _, _) => {
            collect_vars(a, out);
            collect_vars(b, out);
        }
        Expr::Neg(a) | Expr::Pow(a, _) => collect_vars(a, out),
    }
}

/// Ring for polynomial arguments: explicit `--vars`, or the names used in `texts` in order
/// of appearance (`z` is the root of unity over cyclotomic fields).
pub fn ring_for(field: FieldSpec, vars: &[String], degrees: &[String], texts: &[(String, String)]) -> CliResult<Ring> {
    let names = if vars.is_empty() {
        let mut v = Vec::new();
        for (t, origin) in texts {
            collect_vars(&at(origin, parse_expr(t))?, &mut v);
        }
        if field.is_cyclotomic() {
            v.retain(|n| n != "z");
        }
        v
    } else {
        vars.to_vec()
    };
    let degs = if degrees.is_empty() {
        None
    } else {
        Some(degrees.iter().map(|d| parse_rational(d)).collect::<lgdefect::Result<Vec<_>>>()?)
    };
    Ok(RingSpec::build(field, names, degs)?)
}

pub fn poly(ring: &Ring, (text, origin): &(String, String)) -> CliResult<Polynomial> {
    at(origin, Polynomial::parse(ring, text))
}
