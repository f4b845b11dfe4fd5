use std::fmt::Debug;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use matsys::classify::{analyze, cubic_roots, dis_normalized, dis_sextic, has_half_sum_root, CaseTag, Params};
use matsys::construct::*;
use matsys::exactnum::{int, rat, MinPoly, NfElem, Rat};
use matsys::matrix::Mat;
use matsys::ncpoly::{all_words, membership_report, systems, truncated_buchberger, Alphabet, GbResult, NcPoly};
use matsys::nilflag::{algebra_basis, center_basis, semigroup_flag, standard_indices, triangularizing_basis, varpi};
use matsys::quat::{find_noncommuting, l_threshold, region_verdict, QuatTriple, Quaternion, RESIDUAL_TOL};
use matsys::verify::{
    check_projector_squares, check_quad, check_relations, check_system, check_thm4_monomials, check_tsys,
};
use matsys::verify::{commutator_nilpotency, Context, RelationSet};
use matsys::Scalar;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

// Criteria that cannot hold as stated; each must still fail, so a fix is noticed.
const KNOWN_UNMET: &[usize] = &[3];

const RUNS: usize = 500;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("{e:?}"))
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let spent = start.elapsed();
    ensure(spent < limit, || format!("{what} took {spent:.2?}, limit {limit:?}"))
}

fn al() -> Alphabet {
    Alphabet::standard()
}

fn p(s: &str) -> NcPoly<Rat> {
    al().parse(s).unwrap()
}

fn q(rows: &[&[i64]]) -> Mat<Rat> {
    Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
}

fn classification() -> Outcome {
    let start = Instant::now();
    let an = analyze(&Params::from_ints(1, 1, 1));
    ensure(an.delta == int(2) && an.dis.is_zero() && an.tag == CaseTag::MultipleRoot, || {
        format!("(1,1,1): delta {} dis {} tag {:?}", an.delta, an.dis, an.tag)
    })?;
    let an = analyze(&Params::from_ints(0, 0, 0));
    ensure(an.tag == CaseTag::Nilpotent, || format!("(0,0,0): tag {:?}", an.tag))?;
    let an = analyze(&Params::from_ints(0, 2, 0));
    ensure(an.tag == CaseTag::HalfSum, || format!("(0,2,0): tag {:?}", an.tag))?;
    ensure(an.cubic.coeffs() == [int(0), int(-6), int(0), int(6)], || "(0,2,0): r is not 6x(x^2-1)".into())?;
    within(start, Duration::from_secs(1), "classification")?;
    Ok(format!("three cases exact in {:.2?}", start.elapsed()))
}

fn s4_basis() -> GbResult<Rat> {
    truncated_buchberger(&al(), &systems::s4(), 6).unwrap()
}

fn zero_power_sum_basis() -> Outcome {
    let start = Instant::now();
    let a = al();
    let gb = s4_basis();
    ensure(gb.complete_below_bound, || "basis incomplete below 6".into())?;
    let mut targets: Vec<NcPoly<Rat>> = [
        "a + b + c",
        "a.b + b.a + 2*a.a + 2*b.b",
        "a.a.b - b.a.a",
        "2*a.a.a - a.a.b - b.a.b",
        "a.a.b.a + 1/2*a.a.a.a",
        "a.a.a.b + 1/2*a.a.a.a",
        "a.a.a.a.a",
    ]
    .iter()
    .map(|s| p(s))
    .collect();
    let a4 = a.parse_word("a.a.a.a").unwrap();
    for w in all_words(&a, 2, 4) {
        let extra = match a.format_word(&w).as_str() {
            "a.a.a.a" => continue,
            "b.b.b.b" => NcPoly::monomial(a4.clone(), int(-1)),
            "a.b.a.b" | "b.a.b.a" => NcPoly::monomial(a4.clone(), rat(-5, 2)),
            _ => NcPoly::monomial(a4.clone(), rat(1, 2)),
        };
        targets.push(NcPoly::monomial(w, int(1)).add(&extra));
    }
    let fives = all_words(&a, 2, 5);
    ensure(fives.len() == 32, || format!("{} degree-5 words", fives.len()))?;
    targets.extend(fives.into_iter().map(|w| NcPoly::monomial(w, int(1))));
    for t in &targets {
        let r = gb.reduce(&a, t);
        ensure(r.is_zero(), || format!("{} leaves {}", a.format_rat(t), a.format_rat(&r)))?;
    }
    ensure(!gb.reduce(&a, &p("a.a")).is_zero(), || "a^2 reduced to 0".into())?;
    within(start, Duration::from_secs(60), "S4 basis")?;
    Ok(format!("{} targets reduce to 0, a^2 survives, {:.2?}", targets.len(), start.elapsed()))
}

fn u_system_membership() -> Outcome {
    let start = Instant::now();
    let a = al();
    let targets: Vec<NcPoly<Rat>> =
        ["a.a.b - b.a.a", "-b.a.b - a.a.b + 2*a.a.a - u.u.a", "6*a.a.a.a.a - 5*u.u.a.a.a + u.u.u.u.a"]
            .iter()
            .map(|s| p(s))
            .collect();
    let (_, rep) = ok(membership_report(&a, &targets, &systems::s2(), 6))?;
    for m in &rep {
        ensure(m.reduces_to_zero, || format!("S2: {} leaves {}", a.format_rat(&m.target), a.format_rat(&m.residual)))?;
    }
    let (_, rep) = ok(membership_report(&a, &[p("a.b - b.a"), p("a.b.u.u - b.a.u.u")], &systems::s3(), 6))?;
    within(start, Duration::from_secs(120), "S2/S3 membership")?;
    ensure(rep[0].reduces_to_zero, || {
        format!(
            "S3: ab - ba leaves {}; (ab - ba)u^2 reduces to 0: {}",
            a.format_rat(&rep[0].residual),
            rep[1].reduces_to_zero
        )
    })?;
    Ok(format!("S2 relations and S3 commutator reduce to 0, {:.2?}", start.elapsed()))
}

fn homogenized_growth() -> Outcome {
    let a = al();
    let mut tops = Vec::new();
    for bound in 4..=7u32 {
        let gb = ok(truncated_buchberger(&a, &systems::remark121(), bound))?;
        let top = gb.element_count_by_degree.get(&bound).copied().unwrap_or(0);
        ensure(top > 0, || format!("no new element at degree {bound}"))?;
        tops.push(format!("{bound}:{top}"));
    }
    Ok(format!("new elements at top degree {}", tops.join(" ")))
}

// square-zero nilpotent blocks of size k: zero, J2 + 0, and E13 for k = 3
fn square_zero_blocks(k: usize) -> Vec<Mat<Rat>> {
    let mut out = vec![Mat::zeros(k, k)];
    if k >= 2 {
        out.push(Mat::unit(k, k, 0, 1));
    }
    if k == 3 {
        out.push(Mat::unit(3, 3, 0, 2));
    }
    out
}

fn idempotent_nilpotent_shapes() -> Outcome {
    let mut count = 0;
    for phi in 0..=3 {
        for psi in 0..=3 {
            for theta in 0..=3 {
                if phi + psi + theta == 0 {
                    continue;
                }
                for gn in square_zero_blocks(phi) {
                    for an in square_zero_blocks(psi) {
                        for bn in square_zero_blocks(theta) {
                            let shape = Theorem2Shape { alpha_n: an.clone(), beta_n: bn.clone(), gamma_n: gn.clone() };
                            let t = ok(construct_theorem2(&shape))?;
                            let label = || format!("shape ({phi},{psi},{theta})");
                            ensure(ok(check_system(&t))?.passed(), || format!("{} fails the system", label()))?;
                            for (x, y) in [(&t.a, &t.b), (&t.b, &t.c), (&t.a, &t.c)] {
                                ensure(ok(x.commutator(y))?.is_zero(), || format!("{} does not commute", label()))?;
                            }
                            ensure(ok(check_projector_squares(&t))?.passed(), || format!("{} squares", label()))?;
                            count += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{count} shapes pass exactly"))
}

fn half_sum_blocks() -> Outcome {
    let radicals = ok(Theorem3Radicals::exact(&int(3)))?;
    let t = ok(construct_theorem3(&Theorem3Shape { m: 2, f_assign: vec![], radicals, conjugator: None }))?;
    let k = ok(t.a.commutator(&t.b))?;
    ensure(ok(k.try_mul(&k))? == Mat::scalar(2, NfElem::rational(int(-3))), || "[a,b]^2 != -3I".into())?;
    ensure(!ok(commutator_nilpotency(&t))?.is_nilpotent, || "commutator nilpotent".into())?;
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut count = 0;
    for sigma in [2, 3] {
        for m in [0, 2, 4, 6] {
            for len in 0..=6 - m {
                if m + len == 0 {
                    continue;
                }
                for offset in 0..6 {
                    let f_assign: Vec<[usize; 3]> =
                        (0..len).map(|i| perms[(offset + i * (sigma as usize)) % 6]).collect();
                    let radicals = ok(Theorem3Radicals::exact(&int(sigma)))?;
                    let t = ok(construct_theorem3(&Theorem3Shape { m, f_assign, radicals, conjugator: None }))?;
                    ensure(ok(check_system(&t))?.passed(), || {
                        format!("sigma {sigma}, m {m}, {len} diagonal coordinates")
                    })?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("[a,b]^2 = -3I, {count} mixed outputs with n <= 6 pass exactly"))
}

fn coords(ks: &[usize]) -> Option<Vec<usize>> {
    Some(ks.iter().map(|k| k - 1).collect())
}

fn nine_by_nine() -> Outcome {
    let t = ok(construct_nilpotent::<Rat>(&NilpotentFamily::N9))?;
    let sys = ok(check_system(&t))?;
    ensure(sys.passed(), || format!("system:\n{sys}"))?;
    let r51 = ok(check_relations(&t, RelationSet::ZeroSumRelations, &Context::empty()))?;
    ensure(r51.passed(), || format!("zero-sum relations:\n{r51}"))?;
    let mono = ok(check_thm4_monomials(&t))?;
    ensure(mono.passed(), || format!("monomials:\n{mono}"))?;
    ensure(!ok(t.a.pow(4))?.is_zero(), || "a^4 = 0".into())?;
    let f = ok(semigroup_flag(&t))?;
    let expect =
        [coords(&[]), coords(&[1]), coords(&[1, 2, 6]), coords(&[1, 2, 3, 6, 7, 9]), coords(&[1, 2, 3, 4, 6, 7, 8, 9])];
    let idx = f.standard_indices();
    ensure(idx[..5] == expect, || format!("flag {idx:?}"))?;
    ensure(f.signature() == vec![1, 2, 3, 2, 1], || format!("signature {:?}", f.signature()))?;
    let ab = ok(algebra_basis(&t))?;
    ensure(ab.dimension() == 8, || format!("algebra dimension {}", ab.dimension()))?;
    let z = ok(center_basis(&t, &ab))?;
    ensure(z.dimension() == 5, || format!("center dimension {}", z.dimension()))?;
    // varpi checks both identities before returning
    let w = ok(varpi(&t))?;
    ensure(w.is_zero(), || format!("varpi = {w}"))?;
    let pm = ok(triangularizing_basis(&t))?;
    let cols: Vec<Vec<Rat>> = (0..9).map(|j| pm.column(j)).collect();
    ensure(standard_indices(&cols) == coords(&[1, 2, 6, 3, 7, 9, 4, 8, 5]), || "triangularizing order".into())?;
    let pinv = ok(pm.inverse())?;
    for m in t.matrices() {
        ensure(ok(ok(pinv.try_mul(m))?.try_mul(&pm))?.is_strictly_upper(), || "not strictly upper".into())?;
    }
    Ok("system, zero-sum relations, monomials, flag (1,2,3,2,1), dims 8/5, varpi 0, triangular".into())
}

fn triple_distance(x: &QuatTriple, y: &QuatTriple) -> f64 {
    x.as_array()
        .iter()
        .zip(y.as_array())
        .flat_map(|(p, q)| p.to_array().into_iter().zip(q.to_array()).map(|(s, t)| (s - t).abs()))
        .fold(0.0, f64::max)
}

fn quaternions() -> Outcome {
    let start = Instant::now();
    let l = ok(l_threshold(-4.0))?;
    ensure((2.28..=2.31).contains(&l), || format!("l(-4) = {l}"))?;
    ensure(ok(region_verdict(-4.0, 4.0))?.exists_noncommuting, || "region test says none at (-4,4)".into())?;
    let rep = ok(find_noncommuting(-4.0, 4.0, 400))?;
    ensure(!rep.solutions.is_empty(), || "no solution at (-4,4)".into())?;
    let v = Quaternion::new(-4.0, 4.0, 0.0, 0.0);
    for s in &rep.solutions {
        ensure(s.residual <= RESIDUAL_TOL, || format!("residual {}", s.residual))?;
        for i in 0..4 {
            for j in 0..i {
                let d = triple_distance(&s.orbit[i], &s.orbit[j]);
                ensure(d > 1e-6, || format!("variants {j} and {i} coincide"))?;
            }
        }
        let comm = s.triple.a.commutator(v).norm();
        ensure(comm > 1e-6, || format!("|av - va| = {comm}"))?;
    }
    let empty = ok(find_noncommuting(-4.0, 2.0, 400))?;
    ensure(empty.solutions.is_empty(), || format!("{} solutions at (-4,2)", empty.solutions.len()))?;
    within(start, Duration::from_secs(60), "quaternion search")?;
    Ok(format!("l(-4) = {l:.4}, {} classes at (-4,4), none at (-4,2), {:.2?}", rep.solutions.len(), start.elapsed()))
}

fn power_sum<F: Scalar>(ms: &[&Mat<F>], k: u32) -> Mat<F> {
    let n = ms[0].nrows();
    ms.iter().fold(Mat::zeros(n, n), |acc, m| acc.try_add(&m.pow(k).unwrap()).unwrap())
}

fn four_and_two_matrix_systems() -> Outcome {
    let s = construct_sigma_pattern2();
    let j = NfElem::generator(&MinPoly::cyclotomic3());
    let ctx = Context { unity: Some(j), ..Context::empty() };
    let rep = ok(check_quad(&s, RelationSet::UnityPattern, &ctx))?;
    ensure(rep.passed(), || format!("unity pattern:\n{rep}"))?;
    let s = construct_sigma_nonnilpotent();
    for k in 1..=4 {
        ensure(power_sum(&s.matrices(), k).is_zero(), || format!("power sum {k} nonzero"))?;
    }
    ensure(s.matrices().iter().all(|m| !m.is_nilpotent()), || "a nilpotent slot".into())?;
    let cases = [
        (q(&[&[0, 1], &[0, 0]]), Mat::zeros(2, 2)),
        (q(&[&[1, 0], &[0, 0]]), q(&[&[0, 0], &[0, 5]])),
        (Mat::zeros(3, 3), Mat::unit(3, 3, 0, 2)),
    ];
    for (seed, (z, qm)) in cases.iter().enumerate() {
        let (a, b) = ok(construct_tsys(z, qm))?;
        let n = a.nrows();
        let pm = random_conjugator::<Rat>(n, seed as u64 + 1);
        let a = ok(Mat::conjugate(&pm, &a))?;
        let b = ok(Mat::conjugate(&pm, &b))?;
        ensure(ok(check_tsys(&a, &b))?.passed(), || "conjugated pair fails".into())?;
        let ab = ok(a.try_mul(&b))?;
        ensure(ab.is_projector() && ok(ab.trace())? == int(n as i64 / 2), || {
            "ab is not a projector of trace n/2".into()
        })?;
        let can = ok(canonicalize_tsys(&a, &b))?;
        let (a2, b2) = ok(construct_tsys(&can.z, &can.q))?;
        let back = |m: &Mat<Rat>| ok(Mat::conjugate(&can.change_of_basis, m));
        ensure(back(&a2)? == a && back(&b2)? == b, || "round trip does not recover the pair".into())?;
    }
    Ok("unity pattern exact, non-nilpotent power sums zero, pair round trips".into())
}

fn rand_rat(rng: &mut ChaCha8Rng) -> Rat {
    rat(rng.gen_range(-20..=20), rng.gen_range(1..=6))
}

fn random_triple(rng: &mut ChaCha8Rng) -> SolutionTriple<Rat> {
    match rng.gen_range(0..4) {
        0 => {
            let mut roots = [0i64; 3];
            while roots[0] == roots[1] || roots[1] == roots[2] || roots[0] == roots[2] {
                roots = std::array::from_fn(|_| rng.gen_range(-6..=6));
            }
            let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
            let n = rng.gen_range(1..=4);
            let assign: Vec<[usize; 3]> = (0..n).map(|_| perms[rng.gen_range(0..6)]).collect();
            construct_generic(&roots.map(int), &assign, None).unwrap()
        }
        1 => {
            let (phi, psi, theta) = (rng.gen_range(1..=3), rng.gen_range(0..=3), rng.gen_range(0..=3));
            let mut pick = |k: usize| {
                let blocks = square_zero_blocks(k);
                let b = &blocks[rng.gen_range(0..blocks.len())];
                b.scale(&int(rng.gen_range(-3..=3)))
            };
            let shape = Theorem2Shape { gamma_n: pick(phi), alpha_n: pick(psi), beta_n: pick(theta) };
            construct_theorem2(&shape).unwrap()
        }
        2 => {
            let mut x = rand_rat(rng);
            if x == rat(-1, 2) {
                x = int(1);
            }
            construct_nilpotent(&NilpotentFamily::N3(x, rand_rat(rng))).unwrap()
        }
        _ => construct_nilpotent(&NilpotentFamily::N2(rand_rat(rng), rand_rat(rng))).unwrap(),
    }
}

fn normal_form_sample(rng: &mut ChaCha8Rng, a: &Alphabet, letters: u8) -> NcPoly<Rat> {
    let deg = rng.gen_range(1..=5);
    let mut poly = NcPoly::zero();
    for _ in 0..rng.gen_range(1..=4) {
        let w: Vec<u8> = (0..deg).map(|_| rng.gen_range(0..letters)).collect();
        poly.add_term(a.word(&w), int(rng.gen_range(-3..=3)));
    }
    poly
}

// discriminant of c3 x^3 + c2 x^2 + c1 x + c0 by the textbook formula
fn textbook_discriminant(c: &[Rat; 4]) -> Rat {
    let (d, cc, b, a) = (&c[0], &c[1], &c[2], &c[3]);
    b * b * cc * cc - int(4) * a * cc * cc * cc - int(4) * b * b * b * d - int(27) * a * a * d * d
        + int(18) * a * b * cc * d
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);

    // a radical-bearing triple joins the pool once, since it is slow to build
    let radicals = Theorem3Radicals::exact(&int(3)).unwrap();
    let t3 =
        construct_theorem3(&Theorem3Shape { m: 2, f_assign: vec![[1, 2, 0]], radicals, conjugator: None }).unwrap();
    let pm = random_conjugator::<NfElem>(3, 7);
    ensure(ok(check_system(&ok(t3.conjugated(&pm))?))?.passed(), || "conjugated half-sum triple fails".into())?;

    for run in 0..RUNS {
        let t = random_triple(&mut rng);
        let pm = random_conjugator::<Rat>(t.n(), run as u64);
        let c = ok(t.conjugated(&pm))?;
        ensure(ok(check_system(&c))?.passed(), || format!("run {run}: {} output fails", t.provenance.constructor))?;
        for (x, y) in t.matrices().into_iter().zip(c.matrices()) {
            ensure(ok(x.trace())? == ok(y.trace())? && x.rank() == y.rank(), || {
                format!("run {run}: trace or rank moved")
            })?;
            if x.is_nilpotent() {
                ensure(ok(x.nilpotent_jordan_type())? == ok(y.nilpotent_jordan_type())?, || {
                    format!("run {run}: Jordan type moved")
                })?;
            }
        }
    }

    let a = al();
    let bases = [s4_basis(), truncated_buchberger(&a, &systems::s2(), 6).unwrap()];
    for run in 0..RUNS {
        let (gb, letters) = if run % 2 == 0 { (&bases[0], 3) } else { (&bases[1], 4) };
        let f = normal_form_sample(&mut rng, &a, letters);
        let once = gb.reduce(&a, &f);
        ensure(gb.reduce(&a, &once) == once, || {
            format!("run {run}: normal form of {} not idempotent", a.format_rat(&f))
        })?;
    }

    for run in 0..RUNS {
        let params = Params::new(rand_rat(&mut rng), rand_rat(&mut rng), rand_rat(&mut rng));
        let an = analyze(&params);
        ensure(dis_sextic(&params) == dis_normalized(&an.normalized), || format!("run {run}: dis forms disagree"))?;
        ensure(textbook_discriminant(&an.cubic.coeffs()) == int(216) * an.dis.clone(), || {
            format!("run {run}: discriminant")
        })?;
    }

    for run in 0..RUNS {
        let alpha = int(rng.gen_range(-5..=5));
        let beta = int(rng.gen_range(-5..=5));
        let gamma = if rng.gen_bool(0.5) {
            (int(9) * &alpha * &beta - int(2) * &alpha * &alpha * &alpha) / int(9)
        } else {
            int(rng.gen_range(-5..=5))
        };
        let an = analyze(&Params::new(alpha, beta, gamma));
        let roots = cubic_roots(&an.cubic).numeric;
        ensure(an.delta.is_zero() == has_half_sum_root(&roots, 1e-8), || {
            format!("run {run}: delta {} vs roots {roots:?}", an.delta)
        })?;
    }
    Ok(format!("{RUNS} runs each of construct/verify, conjugation invariance, normal forms, dis, delta"))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        ("classification", classification),
        ("zero power sum basis", zero_power_sum_basis),
        ("u-system membership", u_system_membership),
        ("homogenized growth", homogenized_growth),
        ("idempotent plus nilpotent shapes", idempotent_nilpotent_shapes),
        ("half-sum blocks", half_sum_blocks),
        ("nine by nine nilpotent triple", nine_by_nine),
        ("quaternions", quaternions),
        ("four and two matrix systems", four_and_two_matrix_systems),
        ("property suites", property_suites),
    ];
    let mut failed = Vec::new();
    // written past the test harness capture so the lines always show
    let mut err = std::io::stderr().lock();
    for (k, (name, check)) in criteria.iter().enumerate() {
        let k = k + 1;
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let line = match &outcome {
            Ok(detail) => format!("criterion {k:>2} PASS  {name}: {detail}"),
            Err(detail) => {
                failed.push(k);
                let note = if KNOWN_UNMET.contains(&k) { " (known, documented)" } else { "" };
                format!("criterion {k:>2} FAIL  {name}{note}: {detail}")
            }
        };
        writeln!(err, "{line}").unwrap();
    }
    assert_eq!(failed, KNOWN_UNMET, "failing criteria differ from the documented set");
}
