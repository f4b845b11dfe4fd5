//! JSON encoding of matrices and solution documents.
//!
//! A matrix is `{"field": F, "nrows": n, "ncols": m, "entries": [[e, ...], ...]}`
//! where `F` is `{"kind": "Q"}` or `{"kind": "NF", "min_poly": [...]}` for the
//! exact fields, and `{"kind": "R"}` or `{"kind": "C"}` for doubles. Rationals
//! are strings `"p/q"`, number-field elements arrays of rational strings (low
//! degree first), reals numbers and complex numbers `[re, im]` pairs.

use std::sync::Arc;

use num_complex::Complex64;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::classify::{CaseTag, Params};
use crate::construct::{Provenance, SolutionQuad, SolutionTriple, USolution};
use crate::exactnum::{format_rat, parse_rat, MinPoly, NfElem, Rat};
use crate::matrix::Mat;
use crate::scalar::Scalar;
use crate::verify::{Context, Report, Status};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Malformed(String),
    #[error("field mismatch: {0}")]
    Field(String),
}

fn malformed(msg: impl Into<String>) -> JsonError {
    JsonError::Malformed(msg.into())
}

/// The scalar field a matrix is written over.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Q,
    Nf(Arc<MinPoly>),
    R,
    C,
}

impl Field {
    pub fn to_json(&self) -> Value {
        match self {
            Field::Q => json!({"kind": "Q"}),
            Field::Nf(m) => json!({"kind": "NF", "min_poly": m.coeffs().iter().map(format_rat).collect::<Vec<_>>()}),
            Field::R => json!({"kind": "R"}),
            Field::C => json!({"kind": "C"}),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self, JsonError> {
        match v.get("kind").and_then(Value::as_str) {
            Some("Q") => Ok(Field::Q),
            Some("R") => Ok(Field::R),
            Some("C") => Ok(Field::C),
            Some("NF") => {
                let coeffs = v
                    .get("min_poly")
                    .and_then(Value::as_array)
                    .ok_or_else(|| malformed("NF field without min_poly"))?
                    .iter()
                    .map(rat_from_json)
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Field::Nf(MinPoly::new(coeffs).map_err(|e| malformed(e.to_string()))?))
            }
            _ => Err(malformed("unknown field kind")),
        }
    }

    /// The smallest field containing both, if any.
    fn join(&self, other: &Field) -> Result<Field, JsonError> {
        use Field::*;
        Ok(match (self, other) {
            (Nf(a), Nf(b)) if a != b => return Err(JsonError::Field("two different number fields".into())),
            (Nf(_), R | C) | (R | C, Nf(_)) => return Err(JsonError::Field("number field mixed with doubles".into())),
            (Nf(a), _) | (_, Nf(a)) => Nf(a.clone()),
            (C, _) | (_, C) => C,
            (R, _) | (_, R) => R,
            (Q, Q) => Q,
        })
    }
}

fn rat_from_json(v: &Value) -> Result<Rat, JsonError> {
    match v {
        Value::String(s) => parse_rat(s).map_err(|e| malformed(e.to_string())),
        Value::Number(n) if n.is_i64() => Ok(Rat::from_integer(n.as_i64().unwrap_or_default().into())),
        _ => Err(malformed(format!("expected a rational string, got {v}"))),
    }
}

fn f64_from_json(v: &Value) -> Result<f64, JsonError> {
    v.as_f64().ok_or_else(|| malformed(format!("expected a number, got {v}")))
}

/// Scalars with a JSON encoding.
pub trait JsonScalar: Scalar {
    /// The field of a collection of entries.
    fn field_of(entries: &[Self]) -> Field;
    fn to_json(&self, field: &Field) -> Value;
    fn from_json(v: &Value, field: &Field) -> Result<Self, JsonError>;
}

impl JsonScalar for Rat {
    fn field_of(_: &[Self]) -> Field {
        Field::Q
    }

    fn to_json(&self, _: &Field) -> Value {
        Value::String(format_rat(self))
    }

    fn from_json(v: &Value, field: &Field) -> Result<Self, JsonError> {
        match field {
            Field::Q => rat_from_json(v),
            other => Err(JsonError::Field(format!("expected Q, found {:?}", other.to_json()))),
        }
    }
}

impl JsonScalar for NfElem {
    fn field_of(entries: &[Self]) -> Field {
        entries.iter().find_map(NfElem::field).map_or(Field::Q, |m| Field::Nf(m.clone()))
    }

    fn to_json(&self, field: &Field) -> Value {
        match field {
            Field::Nf(m) => {
                Value::Array(self.coeffs_padded(m.degree()).iter().map(|r| Value::String(format_rat(r))).collect())
            }
            _ => Value::String(format_rat(&self.coeffs()[0])),
        }
    }

    fn from_json(v: &Value, field: &Field) -> Result<Self, JsonError> {
        match field {
            Field::Q => Ok(NfElem::rational(rat_from_json(v)?)),
            Field::Nf(m) => {
                let coeffs = v
                    .as_array()
                    .ok_or_else(|| malformed(format!("expected a coefficient array, got {v}")))?
                    .iter()
                    .map(rat_from_json)
                    .collect::<Result<Vec<_>, _>>()?;
                if coeffs.len() != m.degree() {
                    return Err(malformed(format!("expected {} coefficients, got {}", m.degree(), coeffs.len())));
                }
                Ok(NfElem::new(m, coeffs))
            }
            other => Err(JsonError::Field(format!("expected Q or NF, found {:?}", other.to_json()))),
        }
    }
}

impl JsonScalar for f64 {
    fn field_of(_: &[Self]) -> Field {
        Field::R
    }

    fn to_json(&self, _: &Field) -> Value {
        json!(self)
    }

    fn from_json(v: &Value, field: &Field) -> Result<Self, JsonError> {
        match field {
            Field::R => f64_from_json(v),
            Field::Q => Ok(<f64 as Scalar>::from_rat(&rat_from_json(v)?)),
            other => Err(JsonError::Field(format!("expected R or Q, found {:?}", other.to_json()))),
        }
    }
}

impl JsonScalar for Complex64 {
    fn field_of(_: &[Self]) -> Field {
        Field::C
    }

    fn to_json(&self, _: &Field) -> Value {
        json!([self.re, self.im])
    }

    fn from_json(v: &Value, field: &Field) -> Result<Self, JsonError> {
        match field {
            Field::C => match v.as_array().map(Vec::as_slice) {
                Some([re, im]) => Ok(Complex64::new(f64_from_json(re)?, f64_from_json(im)?)),
                _ => Err(malformed(format!("expected [re, im], got {v}"))),
            },
            Field::R => Ok(Complex64::new(f64_from_json(v)?, 0.0)),
            Field::Q => Ok(Complex64::from_rat(&rat_from_json(v)?)),
            other => Err(JsonError::Field(format!("expected C, R or Q, found {:?}", other.to_json()))),
        }
    }
}

pub fn mat_to_json<F: JsonScalar>(m: &Mat<F>) -> Value {
    let field = F::field_of(m.entries());
    mat_to_json_in(m, &field)
}

fn mat_to_json_in<F: JsonScalar>(m: &Mat<F>, field: &Field) -> Value {
    let entries: Vec<Value> =
        m.rows().iter().map(|row| Value::Array(row.iter().map(|x| x.to_json(field)).collect())).collect();
    json!({"field": field.to_json(), "nrows": m.nrows(), "ncols": m.ncols(), "entries": entries})
}

fn usize_field(v: &Value, key: &str) -> Result<usize, JsonError> {
    v.get(key)
        .and_then(Value::as_u64)
        .map(|n| n as usize)
        .ok_or_else(|| malformed(format!("missing or invalid {key:?}")))
}

fn matrix_field(v: &Value) -> Result<Field, JsonError> {
    Field::from_json(v.get("field").ok_or_else(|| malformed("matrix without field"))?)
}

pub fn mat_from_json<F: JsonScalar>(v: &Value) -> Result<Mat<F>, JsonError> {
    let field = matrix_field(v)?;
    let (nrows, ncols) = (usize_field(v, "nrows")?, usize_field(v, "ncols")?);
    let rows = v.get("entries").and_then(Value::as_array).ok_or_else(|| malformed("matrix without entries"))?;
    if rows.len() != nrows {
        return Err(malformed(format!("expected {nrows} rows, got {}", rows.len())));
    }
    let mut data = Vec::with_capacity(nrows * ncols);
    for row in rows {
        let row = row.as_array().ok_or_else(|| malformed("row is not an array"))?;
        if row.len() != ncols {
            return Err(malformed(format!("expected {ncols} columns, got {}", row.len())));
        }
        for x in row {
            data.push(F::from_json(x, &field)?);
        }
    }
    Mat::new(nrows, ncols, data).map_err(|e| malformed(e.to_string()))
}

/// A solution file: a triple, a quadruple, or a pair for the two-matrix system.
#[derive(Debug, Clone, PartialEq)]
pub enum Document<F> {
    Triple(SolutionTriple<F>),
    Quad(SolutionQuad<F>),
    Pair(Mat<F>, Mat<F>),
}

/// A document together with the field it was read in.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyDocument {
    Q(Document<Rat>),
    Nf(Document<NfElem>, Arc<MinPoly>),
    R(Document<f64>),
    C(Document<Complex64>),
    /// Real 2×2 solution whose right-hand sides lie in `U`.
    U(USolution),
}

fn provenance_to_json(p: &Provenance) -> Value {
    json!({"tag": p.tag.map(CaseTag::name), "constructor": p.constructor})
}

fn provenance_from_json(v: Option<&Value>) -> Provenance {
    let tag = v.and_then(|p| p.get("tag")).and_then(Value::as_str).and_then(|s| {
        [CaseTag::Generic, CaseTag::MultipleRoot, CaseTag::HalfSum, CaseTag::Nilpotent]
            .into_iter()
            .find(|t| t.name() == s)
    });
    let constructor = v.and_then(|p| p.get("constructor")).and_then(Value::as_str).unwrap_or("file");
    Provenance { tag, constructor: constructor.to_string() }
}

fn document_field<F: JsonScalar>(d: &Document<F>) -> Field {
    let all: Vec<F> = match d {
        Document::Triple(t) => t
            .matrices()
            .iter()
            .flat_map(|m| m.entries().to_vec())
            .chain([t.params.alpha.clone(), t.params.beta.clone(), t.params.gamma.clone()])
            .collect(),
        Document::Quad(q) => {
            q.matrices().iter().flat_map(|m| m.entries().to_vec()).chain(q.alphas.iter().cloned()).collect()
        }
        Document::Pair(a, b) => a.entries().iter().chain(b.entries()).cloned().collect(),
    };
    F::field_of(&all)
}

pub fn document_to_json<F: JsonScalar>(d: &Document<F>) -> Value {
    let field = document_field(d);
    let m = |x: &Mat<F>| mat_to_json_in(x, &field);
    match d {
        Document::Triple(t) => json!({
            "kind": "triple",
            "params": {"alpha": t.params.alpha.to_json(&field), "beta": t.params.beta.to_json(&field), "gamma": t.params.gamma.to_json(&field)},
            "matrices": {"a": m(&t.a), "b": m(&t.b), "c": m(&t.c)},
            "provenance": provenance_to_json(&t.provenance),
        }),
        Document::Quad(q) => json!({
            "kind": "quad",
            "alphas": q.alphas.iter().map(|x| x.to_json(&field)).collect::<Vec<_>>(),
            "matrices": {"a": m(&q.a), "b": m(&q.b), "c": m(&q.c), "d": m(&q.d)},
            "provenance": provenance_to_json(&q.provenance),
        }),
        Document::Pair(a, b) => json!({"kind": "pair", "matrices": {"a": m(a), "b": m(b)}}),
    }
}

fn named_matrices<'a>(v: &'a Value, names: &[&str]) -> Result<Vec<&'a Value>, JsonError> {
    let ms = v.get("matrices").and_then(Value::as_object).ok_or_else(|| malformed("missing matrices"))?;
    names.iter().map(|n| ms.get(*n).ok_or_else(|| malformed(format!("missing matrix {n:?}")))).collect()
}

fn kind_and_names(v: &Value) -> Result<(&str, &'static [&'static str]), JsonError> {
    match v.get("kind").and_then(Value::as_str) {
        Some(k @ "triple") => Ok((k, &["a", "b", "c"])),
        Some(k @ "quad") => Ok((k, &["a", "b", "c", "d"])),
        Some(k @ "pair") => Ok((k, &["a", "b"])),
        Some(k @ "u-triple") => Ok((k, &["a", "b", "c"])),
        _ => Err(malformed("kind must be triple, quad, pair or u-triple")),
    }
}

fn scalars<F: JsonScalar>(v: &Value, key: &str, field: &Field) -> Result<Vec<F>, JsonError> {
    v.as_array()
        .ok_or_else(|| malformed(format!("{key} must be an array")))?
        .iter()
        .map(|x| F::from_json(x, field))
        .collect()
}

/// Reads a document whose scalars lie in `field`.
pub fn document_from_json<F: JsonScalar>(v: &Value, field: &Field) -> Result<Document<F>, JsonError> {
    let (kind, names) = kind_and_names(v)?;
    let ms = named_matrices(v, names)?
        .into_iter()
        .map(|m| {
            let own = matrix_field(m)?;
            if own.join(field)? != *field {
                return Err(JsonError::Field("matrix field is larger than the document field".into()));
            }
            mat_from_json::<F>(m)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let n = ms[0].nrows();
    if ms.iter().any(|m| m.shape() != (n, n)) {
        return Err(malformed("matrices must be square of equal size"));
    }
    let mut ms = ms.into_iter();
    let mut next = || ms.next().expect("count checked");
    let provenance = provenance_from_json(v.get("provenance"));
    Ok(match kind {
        "triple" => {
            let p = v.get("params").ok_or_else(|| malformed("missing params"))?;
            let get = |k: &str| F::from_json(p.get(k).ok_or_else(|| malformed(format!("missing params.{k}")))?, field);
            let params = Params::new(get("alpha")?, get("beta")?, get("gamma")?);
            Document::Triple(SolutionTriple { a: next(), b: next(), c: next(), params, provenance })
        }
        "quad" => {
            let alphas: Vec<F> = scalars(v.get("alphas").ok_or_else(|| malformed("missing alphas"))?, "alphas", field)?;
            let alphas: [F; 4] = alphas.try_into().map_err(|_| malformed("alphas must have 4 entries"))?;
            Document::Quad(SolutionQuad { a: next(), b: next(), c: next(), d: next(), alphas, provenance })
        }
        _ => Document::Pair(next(), next()),
    })
}

pub fn u_solution_to_json(s: &USolution) -> Value {
    let m = |x: &Mat<f64>| mat_to_json_in(x, &Field::R);
    json!({
        "kind": "u-triple",
        "rhs": {"alpha": m(&s.rhs[0]), "beta": m(&s.rhs[1]), "gamma": m(&s.rhs[2])},
        "matrices": {"a": m(&s.a), "b": m(&s.b), "c": m(&s.c)},
    })
}

fn u_solution_from_json(v: &Value) -> Result<USolution, JsonError> {
    let ms =
        named_matrices(v, &["a", "b", "c"])?.into_iter().map(mat_from_json::<f64>).collect::<Result<Vec<_>, _>>()?;
    let rhs = v.get("rhs").ok_or_else(|| malformed("missing rhs"))?;
    let rhs = ["alpha", "beta", "gamma"]
        .iter()
        .map(|k| mat_from_json::<f64>(rhs.get(*k).ok_or_else(|| malformed(format!("missing rhs.{k}")))?))
        .collect::<Result<Vec<_>, _>>()?;
    if ms.iter().chain(&rhs).any(|m| m.shape() != (2, 2)) {
        return Err(malformed("u-triple matrices must be 2 x 2"));
    }
    let root = |m: &Mat<f64>| Complex64::new(*m.get(0, 0), *m.get(0, 1));
    let [a, b, c]: [Mat<f64>; 3] = ms.try_into().map_err(|_| malformed("three matrices expected"))?;
    let roots = [root(&a), root(&b), root(&c)];
    let rhs: [Mat<f64>; 3] = rhs.try_into().map_err(|_| malformed("three right-hand sides expected"))?;
    Ok(USolution { a, b, c, rhs, roots })
}

/// Reads a document in the smallest field containing all of its matrices.
pub fn any_document_from_json(v: &Value) -> Result<AnyDocument, JsonError> {
    let (kind, names) = kind_and_names(v)?;
    if kind == "u-triple" {
        return u_solution_from_json(v).map(AnyDocument::U);
    }
    let mut field = Field::Q;
    for m in named_matrices(v, names)? {
        field = field.join(&matrix_field(m)?)?;
    }
    Ok(match &field {
        Field::Q => AnyDocument::Q(document_from_json(v, &field)?),
        Field::Nf(m) => AnyDocument::Nf(document_from_json(v, &field)?, m.clone()),
        Field::R => AnyDocument::R(document_from_json(v, &field)?),
        Field::C => AnyDocument::C(document_from_json(v, &field)?),
    })
}

/// Reads a verification context: optional matrices `u`, `v`, `u_squared`,
/// `v_cubed`, a boolean `first_case` and a scalar `unity`. Explicit
/// `u_squared`/`v_cubed` take precedence over the powers of `u`/`v`.
pub fn context_from_json<F: JsonScalar>(v: &Value, field: &Field) -> Result<Context<F>, JsonError> {
    let obj: &Map<String, Value> = v.as_object().ok_or_else(|| malformed("context must be an object"))?;
    let mat = |k: &str| obj.get(k).map(mat_from_json::<F>).transpose();
    let u = mat("u")?;
    let vm = mat("v")?;
    let mut ctx = Context::from_uv(u, vm).map_err(|e| malformed(e.to_string()))?;
    if let Some(m) = mat("u_squared")? {
        ctx.u_squared = Some(m);
    }
    if let Some(m) = mat("v_cubed")? {
        ctx.v_cubed = Some(m);
    }
    ctx.first_case = match obj.get("first_case") {
        None => false,
        Some(b) => b.as_bool().ok_or_else(|| malformed("first_case must be a boolean"))?,
    };
    ctx.unity = obj.get("unity").map(|x| F::from_json(x, field)).transpose()?;
    Ok(ctx)
}

/// `{"passed": bool, "checks": [{"name", "passed", "residual"?, "norm"?}]}`;
/// exact failures carry the residual matrix, floating checks their norm.
pub fn report_to_json<F: JsonScalar>(r: &Report<F>) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| {
            let mut o = json!({"name": c.name, "passed": c.passed()});
            match &c.status {
                Status::ExactZero => {}
                Status::Residual(m) => o["residual"] = mat_to_json(m),
                Status::Numeric(x) => o["norm"] = json!(x),
            }
            o
        })
        .collect();
    json!({"passed": r.passed(), "checks": checks})
}
