use std::error::Error;
use std::fmt::{Display, Write as _};
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use matsys::classify::{analyze, cubic_roots, Params};
use matsys::construct::*;
use matsys::exactnum::{format_rat, int, parse_rat, poly_roots, sort_roots, MinPoly, NfElem, Rat, UPoly};
use matsys::json::*;
use matsys::matrix::Mat;
use matsys::ncpoly::systems::{preset, PRESET_NAMES};
use matsys::ncpoly::truncated_buchberger;
use matsys::ncpoly::{Alphabet, NcPoly};
use matsys::nilflag::*;
use matsys::quat::{find_noncommuting_with, region_verdict, FoundSolution, QuatTriple, RegionVerdict, SearchOptions};
use matsys::verify::*;
use matsys::Scalar;
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::{Case, ClassifyArgs, Command, ConstructArgs, FlagArgs, NcgbArgs, QuatArgs, RootsArgs, VerifyArgs};

type Res<T> = Result<T, Box<dyn Error>>;

/// Exit status of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl From<Outcome> for ExitCode {
    fn from(o: Outcome) -> ExitCode {
        match o {
            Outcome::Pass => ExitCode::SUCCESS,
            Outcome::Fail => ExitCode::from(1),
        }
    }
}

fn outcome(pass: bool) -> Outcome {
    if pass {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

pub fn run(cmd: Command) -> Res<Outcome> {
    match cmd {
        Command::Classify(a) => classify(&a),
        Command::Construct(a) => construct(&a),
        Command::Verify(a) => verify(&a),
        Command::Flag(a) => flag(&a),
        Command::Ncgb(a) => ncgb(&a),
        Command::Quat(a) => quat(&a),
        Command::Roots(a) => roots(&a),
    }
}

fn emit(json: bool, value: &Value, text: &str) -> Res<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(value)?);
    } else {
        print!("{text}");
    }
    Ok(())
}

fn read_json(path: &Path) -> Res<Value> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?)
}

fn complex_json(z: &Complex64) -> Value {
    json!([z.re, z.im])
}

fn complex_text(z: &Complex64) -> String {
    format!("{} {:+}i", z.re, z.im)
}

fn rat_arg(s: &str) -> Res<Rat> {
    Ok(parse_rat(s)?)
}

fn opt_rat(s: &Option<String>, default: i64) -> Res<Rat> {
    s.as_deref().map_or(Ok(int(default)), rat_arg)
}

fn opt_f64(s: &Option<String>, default: f64) -> Res<f64> {
    s.as_deref().map_or(Ok(default), |t| Ok(t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"))?))
}

/// `"re,im"` or `"re"`.
fn opt_complex(s: &Option<String>, default: f64) -> Res<Complex64> {
    let Some(t) = s.as_deref() else { return Ok(Complex64::new(default, 0.0)) };
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok(match t.split_once(',') {
        Some((re, im)) => Complex64::new(num(re)?, num(im)?),
        None => Complex64::new(num(t)?, 0.0),
    })
}

fn classify(a: &ClassifyArgs) -> Res<Outcome> {
    let params = Params::new(rat_arg(&a.alpha)?, rat_arg(&a.beta)?, rat_arg(&a.gamma)?);
    let an = analyze(&params);
    let roots = cubic_roots(&an.cubic);
    let exact: Vec<String> = roots.exact.iter().map(format_rat).collect();
    let value = json!({
        "alpha": format_rat(&params.alpha),
        "beta": format_rat(&params.beta),
        "gamma": format_rat(&params.gamma),
        "cubic": an.cubic.coeffs().iter().map(format_rat).collect::<Vec<_>>(),
        "delta": format_rat(&an.delta),
        "dis": format_rat(&an.dis),
        "sigma": format_rat(&an.normalized.sigma),
        "tau": format_rat(&an.normalized.tau),
        "tag": an.tag.name(),
        "roots": {"exact": exact, "numeric": roots.numeric.iter().map(complex_json).collect::<Vec<_>>()},
    });
    let mut text = String::new();
    writeln!(text, "r(x) = {}", an.cubic.poly().display_with("x", format_rat))?;
    writeln!(text, "delta = {}", format_rat(&an.delta))?;
    writeln!(text, "dis = {}", format_rat(&an.dis))?;
    writeln!(text, "sigma = {}", format_rat(&an.normalized.sigma))?;
    writeln!(text, "tau = {}", format_rat(&an.normalized.tau))?;
    writeln!(text, "tag = {}", an.tag)?;
    if roots.fully_exact() {
        writeln!(text, "roots = {}", exact.join(", "))?;
    } else {
        let num: Vec<String> = roots.numeric.iter().map(complex_text).collect();
        writeln!(text, "roots = {}", num.join(", "))?;
        if !exact.is_empty() {
            writeln!(text, "rational roots = {}", exact.join(", "))?;
        }
    }
    emit(a.json, &value, &text)?;
    Ok(Outcome::Pass)
}

fn conjugate_if<F: Scalar>(t: SolutionTriple<F>, a: &ConstructArgs) -> Res<SolutionTriple<F>> {
    if a.conjugate {
        let p = random_conjugator::<F>(t.n(), a.seed);
        Ok(t.conjugated(&p)?)
    } else {
        Ok(t)
    }
}

fn triple_doc<F: JsonScalar>(t: SolutionTriple<F>, a: &ConstructArgs) -> Res<Value> {
    Ok(document_to_json(&Document::Triple(conjugate_if(t, a)?)))
}

const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [0, 2, 1], [2, 1, 0], [1, 0, 2]];

fn square_zero_block(k: usize, on: bool) -> Mat<Rat> {
    if on && k >= 2 {
        Mat::unit(k, k, 0, k - 1)
    } else {
        Mat::zeros(k, k)
    }
}

fn build(a: &ConstructArgs) -> Res<Value> {
    let doc = match a.case {
        Case::Generic => {
            let params = Params::new(opt_rat(&a.alpha, 7)?, opt_rat(&a.beta, 21)?, opt_rat(&a.gamma, 73)?);
            let roots = rational_generic_roots(&params)?;
            let n = a.n.unwrap_or(3);
            let assign: Vec<[usize; 3]> = (0..n).map(|i| PERMUTATIONS[i % 3]).collect();
            triple_doc(construct_generic(&roots, &assign, None)?, a)?
        }
        Case::T2 => {
            let (phi, psi, theta) = (a.phi.unwrap_or(1), a.psi.unwrap_or(1), a.theta.unwrap_or(1));
            let z = a.square_zero;
            let shape = Theorem2Shape {
                alpha_n: square_zero_block(psi, z),
                beta_n: square_zero_block(theta, z),
                gamma_n: square_zero_block(phi, z),
            };
            triple_doc(construct_theorem2(&shape)?, a)?
        }
        Case::T3 => {
            let sigma = opt_rat(&a.sigma, 3)?;
            let radicals = Theorem3Radicals::exact(&sigma)?;
            let f_assign = (0..a.diag.unwrap_or(0)).map(|i| PERMUTATIONS[i % 6]).collect();
            let shape = Theorem3Shape { m: a.m.unwrap_or(2), f_assign, radicals, conjugator: None };
            triple_doc(construct_theorem3(&shape)?, a)?
        }
        Case::NilN2 => triple_doc(construct_nilpotent(&NilpotentFamily::N2(opt_rat(&a.x, 1)?, opt_rat(&a.y, 1)?))?, a)?,
        Case::NilN3 => triple_doc(construct_nilpotent(&NilpotentFamily::N3(opt_rat(&a.x, 1)?, opt_rat(&a.y, 0)?))?, a)?,
        Case::NilN9 => triple_doc(construct_nilpotent::<Rat>(&NilpotentFamily::N9)?, a)?,
        Case::RealEven => {
            let params = Params::new(opt_f64(&a.alpha, 0.0)?, opt_f64(&a.beta, -2.0)?, opt_f64(&a.gamma, 0.0)?);
            triple_doc(construct_real_even_from_params(&params, a.m.unwrap_or(1))?, a)?
        }
        Case::SolveU => {
            let zs = [opt_complex(&a.alpha, 0.0)?, opt_complex(&a.beta, -2.0)?, opt_complex(&a.gamma, 0.0)?];
            let ms = zs.map(u_matrix);
            u_solution_to_json(&solve_in_u([&ms[0], &ms[1], &ms[2]])?)
        }
        Case::Sigma71 => {
            let roots = sigma_roots(&opt_rat(&a.u, -3)?, &opt_rat(&a.v, 2)?, &opt_rat(&a.w, 2)?)?;
            let p = random_conjugator::<Rat>(2, a.seed);
            document_to_json(&Document::Quad(construct_sigma_generic(roots, &p)?))
        }
        Case::Sigma72 => document_to_json(&Document::Quad(construct_sigma_pattern2())),
        Case::SigmaNonnil => document_to_json(&Document::Quad(construct_sigma_nonnilpotent())),
        Case::Tsys => {
            let m = a.m.unwrap_or(2);
            let (z, q) = if m >= 2 {
                (Mat::<Rat>::unit(m, m, 0, 0), Mat::unit(m, m, m - 1, m - 1))
            } else {
                (Mat::zeros(m, m), Mat::zeros(m, m))
            };
            let (x, y) = construct_tsys(&z, &q)?;
            document_to_json(&Document::Pair(x, y))
        }
    };
    Ok(doc)
}

fn construct(a: &ConstructArgs) -> Res<Outcome> {
    let doc = build(a)?;
    let pretty = serde_json::to_string_pretty(&doc)?;
    match &a.out {
        None => println!("{pretty}"),
        Some(path) => {
            fs::write(path, pretty + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
            let kind = doc["kind"].as_str().unwrap_or_default();
            let n = doc["matrices"]["a"]["nrows"].as_u64().unwrap_or_default();
            let summary = json!({"written": path.display().to_string(), "kind": kind, "n": n});
            emit(a.json, &summary, &format!("wrote {kind} of size {n} to {}\n", path.display()))?;
        }
    }
    Ok(Outcome::Pass)
}

fn relation_set(code: &Option<String>) -> Res<Option<RelationSet>> {
    code.as_deref()
        .map(|c| RelationSet::from_code(c).ok_or_else(|| format!("unknown relation set {c:?}").into()))
        .transpose()
}

fn check_document<F: JsonScalar>(doc: &Document<F>, rs: Option<RelationSet>, ctx: &Context<F>) -> Res<Report<F>> {
    Ok(match doc {
        Document::Triple(t) => match rs.unwrap_or(RelationSet::System) {
            RelationSet::System => check_system(t)?,
            rs => check_relations(t, rs, ctx)?,
        },
        Document::Quad(q) => check_quad(q, rs.unwrap_or(RelationSet::FourMatrix), ctx)?,
        Document::Pair(x, y) => match rs.unwrap_or(RelationSet::TwoMatrix) {
            RelationSet::TwoMatrix => check_tsys(x, y)?,
            other => return Err(VerifyError::WrongKind { set: other.code(), kind: "pair" }.into()),
        },
    })
}

fn verify_in<F: JsonScalar + Display>(
    doc: &Document<F>,
    field: &Field,
    a: &VerifyArgs,
    default_unity: Option<F>,
) -> Res<Outcome> {
    let rs = relation_set(&a.relations)?;
    let mut ctx = match &a.context {
        Some(path) => context_from_json(&read_json(path)?, field)?,
        None => Context::empty(),
    };
    if ctx.unity.is_none() {
        ctx.unity = default_unity;
    }
    let report = check_document(doc, rs, &ctx)?;
    emit(a.json, &report_to_json(&report), &format!("{report}\n"))?;
    Ok(outcome(report.passed()))
}

fn verify(a: &VerifyArgs) -> Res<Outcome> {
    let value = read_json(&a.input)?;
    match any_document_from_json(&value)? {
        AnyDocument::Q(d) => verify_in(&d, &Field::Q, a, None),
        AnyDocument::Nf(d, m) => {
            // in Q(j) the generator is the natural cube root of unity
            let unity = (m == MinPoly::cyclotomic3()).then(|| NfElem::generator(&m));
            verify_in(&d, &Field::Nf(m), a, unity)
        }
        AnyDocument::R(d) => verify_in(&d, &Field::R, a, None),
        AnyDocument::C(d) => verify_in(&d, &Field::C, a, None),
        AnyDocument::U(s) => {
            if let Some(rs) = relation_set(&a.relations)?.filter(|r| *r != RelationSet::System) {
                return Err(VerifyError::WrongKind { set: rs.code(), kind: "u-triple" }.into());
            }
            let report = check_u_system(&s)?;
            emit(a.json, &report_to_json(&report), &format!("{report}\n"))?;
            Ok(outcome(report.passed()))
        }
    }
}

fn basis_text<F: Scalar + Display>(m: &Mat<F>) -> String {
    if m.ncols() == 0 {
        return "0".to_string();
    }
    let cols: Vec<Vec<F>> = (0..m.ncols()).map(|j| m.column(j)).collect();
    match standard_indices(&cols) {
        Some(ix) => ix.iter().map(|i| format!("e{}", i + 1)).collect::<Vec<_>>().join(", "),
        None => cols
            .iter()
            .map(|c| format!("({})", c.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
            .collect::<Vec<_>>()
            .join(", "),
    }
}

fn flag_in<F: JsonScalar + Display>(t: &SolutionTriple<F>, a: &FlagArgs) -> Res<Outcome> {
    let f = semigroup_flag(t)?;
    let p = triangularizing_basis(t)?;
    let ab = algebra_basis(t)?;
    let center = center_basis(t, &ab)?;
    let varpi = match varpi(t) {
        Ok(x) => Some(x),
        Err(FlagError::NotCanonical) => None,
        Err(e) => return Err(e.into()),
    };
    let mut text = String::new();
    writeln!(text, "dimensions: {:?}", f.dims())?;
    writeln!(text, "signature: {:?}", f.signature())?;
    for (k, v) in f.subspaces.iter().enumerate() {
        writeln!(text, "V{k}: {}", basis_text(v))?;
    }
    writeln!(text, "triangularizing basis: {}", basis_text(&p))?;
    writeln!(text, "algebra dimension {}: {}", ab.dimension(), ab.labels().join(", "))?;
    writeln!(text, "center dimension {}: {}", center.dimension(), center.labels().join(", "))?;
    match &varpi {
        Some(x) => writeln!(text, "varpi = {x}")?,
        None => writeln!(text, "varpi: not applicable, a is not diag(J5, J3, 0)")?,
    }
    let value = json!({
        "dimensions": f.dims(),
        "signature": f.signature(),
        "subspaces": f.subspaces.iter().map(mat_to_json).collect::<Vec<_>>(),
        "triangularizing_basis": mat_to_json(&p),
        "algebra": {"dimension": ab.dimension(), "labels": ab.labels()},
        "center": {"dimension": center.dimension(), "labels": center.labels()},
        "varpi": varpi.map(|x| x.to_json(&F::field_of(t.a.entries()))),
    });
    emit(a.json, &value, &text)?;
    Ok(Outcome::Pass)
}

fn flag(a: &FlagArgs) -> Res<Outcome> {
    match any_document_from_json(&read_json(&a.input)?)? {
        AnyDocument::Q(Document::Triple(t)) => flag_in(&t, a),
        AnyDocument::Nf(Document::Triple(t), _) => flag_in(&t, a),
        _ => Err("flag needs a triple over Q or a number field".into()),
    }
}

fn read_polys(alpha: &Alphabet, path: &Path) -> Res<Vec<NcPoly<Rat>>> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| alpha.parse(l).map_err(|e| format!("{}: {e}", path.display()).into()))
        .collect()
}

fn ncgb(a: &NcgbArgs) -> Res<Outcome> {
    let alpha = Alphabet::standard();
    let gens = match (&a.system, &a.gens) {
        (Some(name), _) => preset(name)
            .ok_or_else(|| format!("unknown system {name:?}; expected one of {}", PRESET_NAMES.join(", ")))?,
        (None, Some(path)) => read_polys(&alpha, path)?,
        (None, None) => return Err("one of --system or --gens is required".into()),
    };
    let targets = a.reduce.as_deref().map(|p| read_polys(&alpha, p)).transpose()?.unwrap_or_default();
    let gb = truncated_buchberger(&alpha, &gens, a.maxdeg)?;
    let mut text = String::new();
    writeln!(text, "basis: {} elements up to degree {}", gb.len(), gb.degree_bound)?;
    let counts: Vec<String> = gb.element_count_by_degree.iter().map(|(d, c)| format!("{d}: {c}")).collect();
    writeln!(text, "by degree: {}", counts.join(", "))?;
    if a.print_basis {
        for g in &gb.basis {
            writeln!(text, "  {}", alpha.format_rat(g))?;
        }
    }
    let mut all_zero = true;
    let mut reductions = Vec::new();
    for t in &targets {
        let r = gb.reduce(&alpha, t);
        let shown = if r.is_zero() { "0".to_string() } else { alpha.format_rat(&r) };
        all_zero &= r.is_zero();
        writeln!(text, "{} reduces to {shown}", alpha.format_rat(t))?;
        reductions.push(json!({"target": alpha.format_rat(t), "normal_form": shown, "zero": r.is_zero()}));
    }
    let value = json!({
        "degree_bound": gb.degree_bound,
        "size": gb.len(),
        "complete_below_bound": gb.complete_below_bound,
        "count_by_degree": gb.element_count_by_degree,
        "basis": if a.print_basis { Some(gb.basis.iter().map(|g| alpha.format_rat(g)).collect::<Vec<_>>()) } else { None },
        "reductions": reductions,
    });
    emit(a.json, &value, &text)?;
    Ok(outcome(all_zero))
}

fn quat_triple_json(t: &QuatTriple) -> Value {
    json!({"a": t.a.to_array(), "b": t.b.to_array(), "c": t.c.to_array()})
}

fn verdict_json(v: &RegionVerdict) -> Value {
    json!({
        "delta": v.delta_value,
        "separator": v.separator_value,
        "exists_noncommuting": v.exists_noncommuting,
        "on_boundary": v.on_boundary,
    })
}

fn solution_json(s: &FoundSolution) -> Value {
    json!({
        "triple": quat_triple_json(&s.triple),
        "residual": s.residual,
        "orbit": s.orbit.iter().map(quat_triple_json).collect::<Vec<_>>(),
    })
}

fn quat(a: &QuatArgs) -> Res<Outcome> {
    let verdict = region_verdict(a.v1, a.v2)?;
    let mut text = String::new();
    writeln!(text, "v = {} {:+}i", a.v1, a.v2)?;
    writeln!(text, "Delta = {}", verdict.delta_value)?;
    writeln!(text, "separator = {}", verdict.separator_value)?;
    let word = match (verdict.on_boundary, verdict.exists_noncommuting) {
        (true, _) => "on a boundary, undecided",
        (false, true) => "noncommuting solutions exist",
        (false, false) => "no noncommuting solutions",
    };
    writeln!(text, "verdict: {word}")?;
    let mut value = json!({"v1": a.v1, "v2": a.v2, "verdict": verdict_json(&verdict)});
    let mut pass = true;
    if a.solve {
        let opts = SearchOptions { attempts: a.attempts, seed: a.seed, ..SearchOptions::default() };
        let report = find_noncommuting_with(a.v1, a.v2, &opts)?;
        writeln!(text, "found {} solution classes up to rotation about i", report.solutions.len())?;
        for (k, s) in report.solutions.iter().enumerate() {
            writeln!(text, "{}. residual {:.3e}", k + 1, s.residual)?;
            for (name, q) in [("a", s.triple.a), ("b", s.triple.b), ("c", s.triple.c)] {
                writeln!(text, "   {name} = {q}")?;
            }
        }
        let found = !report.solutions.is_empty();
        let agrees = verdict.on_boundary || found == verdict.exists_noncommuting;
        if !agrees {
            writeln!(text, "search disagrees with the region test")?;
        }
        pass = agrees;
        value["solutions"] = Value::Array(report.solutions.iter().map(solution_json).collect());
        value["agrees"] = json!(agrees);
    }
    emit(a.json, &value, &text)?;
    Ok(outcome(pass))
}

fn roots(a: &RootsArgs) -> Res<Outcome> {
    let coeffs = a.coeffs.iter().map(|s| rat_arg(s)).collect::<Res<Vec<_>>>()?;
    let p = UPoly::new(coeffs);
    if p.degree().unwrap_or(0) == 0 {
        return Err("polynomial must have positive degree".into());
    }
    let exact = p.rational_roots();
    let mut numeric = poly_roots(&p.coeffs().iter().map(Complex64::from_rat).collect::<Vec<_>>());
    sort_roots(&mut numeric);
    let exact_s: Vec<String> = exact.iter().map(format_rat).collect();
    let mut text = String::new();
    writeln!(text, "p(x) = {}", p.display_with("x", format_rat))?;
    writeln!(text, "rational roots: {}", if exact_s.is_empty() { "none".to_string() } else { exact_s.join(", ") })?;
    writeln!(text, "roots: {}", numeric.iter().map(complex_text).collect::<Vec<_>>().join(", "))?;
    let value = json!({"exact": exact_s, "numeric": numeric.iter().map(complex_json).collect::<Vec<_>>()});
    emit(a.json, &value, &text)?;
    Ok(Outcome::Pass)
}
