//! Explicit solutions of the power-sum systems for every case that admits a
//! closed form, plus the four-matrix and two-matrix variants.

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::classify::{analyze, cardano, CaseTag, ClassifyError, Params};
use crate::exactnum::{int, rat, squarefree_decomposition, ArithError, MinPoly, NfElem, Rat, UPoly};
use crate::matrix::{Mat, MatError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructError {
    #[error("roots must be pairwise distinct")]
    RepeatedRoots,
    #[error("conjugating matrix is singular")]
    Singular,
    #[error("block {0} does not square to zero")]
    NotSquareZero(&'static str),
    #[error("dimension must be even, got {0}")]
    OddDimension(usize),
    #[error("radical not available: {0}")]
    MissingRadical(String),
    #[error("parameter constraint violated: {0}")]
    Constraint(String),
    #[error("right-hand side is not of the form (y z; -z y)")]
    NotInU,
    #[error("the cubic has three real roots")]
    ThreeRealRoots,
    #[error("inputs do not satisfy the two-matrix system: {0}")]
    NotASolution(String),
    #[error(transparent)]
    Matrix(#[from] MatError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

/// Which constructor produced a solution, and for which case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub tag: Option<CaseTag>,
    pub constructor: String,
}

impl Provenance {
    fn new(tag: Option<CaseTag>, constructor: &str) -> Self {
        Provenance { tag, constructor: constructor.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionTriple<F> {
    pub a: Mat<F>,
    pub b: Mat<F>,
    pub c: Mat<F>,
    pub params: Params<F>,
    pub provenance: Provenance,
}

impl<F: Scalar> SolutionTriple<F> {
    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn matrices(&self) -> [&Mat<F>; 3] {
        [&self.a, &self.b, &self.c]
    }

    /// `p x p⁻¹` applied to all three matrices.
    pub fn conjugated(&self, p: &Mat<F>) -> Result<Self, ConstructError> {
        let pinv = p.inverse().map_err(|_| ConstructError::Singular)?;
        let conj = |m: &Mat<F>| p.try_mul(m).and_then(|x| x.try_mul(&pinv));
        Ok(SolutionTriple {
            a: conj(&self.a)?,
            b: conj(&self.b)?,
            c: conj(&self.c)?,
            params: self.params.clone(),
            provenance: self.provenance.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionQuad<F> {
    pub a: Mat<F>,
    pub b: Mat<F>,
    pub c: Mat<F>,
    pub d: Mat<F>,
    /// Right-hand sides of the power sums `k = 1..4`.
    pub alphas: [F; 4],
    pub provenance: Provenance,
}

impl<F: Scalar> SolutionQuad<F> {
    pub fn matrices(&self) -> [&Mat<F>; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}

fn power_sum<F: Scalar>(xs: &[F], k: u32) -> F {
    xs.iter().fold(F::zero(), |acc, x| acc + (0..k).fold(F::one(), |p, _| p * x.clone()))
}

fn params_of_roots<F: Scalar>(xs: &[F; 3]) -> Params<F> {
    Params::new(power_sum(xs, 1), power_sum(xs, 2), power_sum(xs, 3))
}

fn conjugate_opt<F: Scalar>(p: Option<&Mat<F>>, m: Mat<F>) -> Result<Mat<F>, ConstructError> {
    match p {
        None => Ok(m),
        Some(p) => {
            let pinv = p.inverse().map_err(|_| ConstructError::Singular)?;
            Ok(p.try_mul(&m)?.try_mul(&pinv)?)
        }
    }
}

/// Integer matrix `LU` with unit-diagonal triangular factors whose
/// off-diagonal entries are drawn from `-2..=2`; determinant 1.
pub fn random_conjugator<F: Scalar>(n: usize, seed: u64) -> Mat<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tri = |upper: bool| -> Mat<F> {
        let mut m = Mat::identity(n);
        for i in 0..n {
            for j in 0..n {
                if i != j && (i < j) == upper {
                    m.set(i, j, F::from_i64(rng.gen_range(-2..=2)));
                }
            }
        }
        m
    };
    let (l, u) = (tri(false), tri(true));
    l.try_mul(&u).expect("square factors")
}

/// Simultaneously diagonal solution: coordinate `i` carries the roots permuted
/// by `assign[i]`, then everything is conjugated by `p`.
pub fn construct_generic<F: Scalar>(
    roots: &[F; 3],
    assign: &[[usize; 3]],
    p: Option<&Mat<F>>,
) -> Result<SolutionTriple<F>, ConstructError> {
    if (0..3).any(|i| (roots[i].clone() - roots[(i + 1) % 3].clone()).is_negligible()) {
        return Err(ConstructError::RepeatedRoots);
    }
    for perm in assign {
        let mut seen = [false; 3];
        for &k in perm {
            if k > 2 || std::mem::replace(&mut seen[k], true) {
                return Err(ConstructError::Constraint(format!("{perm:?} is not a permutation")));
            }
        }
    }
    let slot = |s: usize| Mat::diag(&assign.iter().map(|perm| roots[perm[s]].clone()).collect::<Vec<_>>());
    let params = params_of_roots(roots);
    let tag = analyze(&params).tag;
    Ok(SolutionTriple {
        a: conjugate_opt(p, slot(0))?,
        b: conjugate_opt(p, slot(1))?,
        c: conjugate_opt(p, slot(2))?,
        params,
        provenance: Provenance::new(Some(tag), "generic"),
    })
}

/// Exact roots of `r` when it splits over Q into distinct linear factors.
pub fn rational_generic_roots(params: &Params<Rat>) -> Result<[Rat; 3], ConstructError> {
    let an = analyze(params);
    let roots = an.cubic.poly().rational_roots();
    if roots.len() != 3 {
        return Err(ConstructError::Constraint("r does not split over Q".into()));
    }
    Ok([roots[0].clone(), roots[1].clone(), roots[2].clone()])
}

/// Complex roots of `r` by Cardano, for numeric constructions.
pub fn numeric_roots(params: &Params<Rat>) -> [Complex64; 3] {
    let cs = analyze(params).cubic.coeffs().map(|c| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0));
    cardano(cs)
}

/// Nilpotent blocks of the idempotent-plus-nilpotent normal form for `α = β = γ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem2Shape<F> {
    /// `ψ × ψ`, sits in `a` and `-c`
    pub alpha_n: Mat<F>,
    /// `θ × θ`, sits in `a` and `-b`
    pub beta_n: Mat<F>,
    /// `φ × φ`, sits in `b` and `-c`
    pub gamma_n: Mat<F>,
}

impl<F: Scalar> Theorem2Shape<F> {
    /// All nilpotent parts zero.
    pub fn zero_blocks(phi: usize, psi: usize, theta: usize) -> Self {
        Theorem2Shape { alpha_n: Mat::zeros(psi, psi), beta_n: Mat::zeros(theta, theta), gamma_n: Mat::zeros(phi, phi) }
    }

    pub fn sizes(&self) -> (usize, usize, usize) {
        (self.gamma_n.nrows(), self.alpha_n.nrows(), self.beta_n.nrows())
    }
}

/// `a = diag(I_φ, α, β)`, `b = diag(γ, I_ψ, −β)`, `c = diag(−γ, −α, I_θ)`.
pub fn construct_theorem2<F: Scalar>(shape: &Theorem2Shape<F>) -> Result<SolutionTriple<F>, ConstructError> {
    for (name, m) in [("alpha", &shape.alpha_n), ("beta", &shape.beta_n), ("gamma", &shape.gamma_n)] {
        if !m.is_square() {
            return Err(ConstructError::Matrix(MatError::NotSquare(m.nrows(), m.ncols())));
        }
        if !m.try_mul(m)?.is_zero() {
            return Err(ConstructError::NotSquareZero(name));
        }
    }
    let (phi, psi, theta) = shape.sizes();
    let (al, be, ga) = (&shape.alpha_n, &shape.beta_n, &shape.gamma_n);
    let id = Mat::identity;
    let a = Mat::block_diag(&[&id(phi), al, be]);
    let b = Mat::block_diag(&[ga, &id(psi), &be.scale(&-F::one())]);
    let c = Mat::block_diag(&[&ga.scale(&-F::one()), &al.scale(&-F::one()), &id(theta)]);
    Ok(SolutionTriple {
        a,
        b,
        c,
        params: Params::new(F::one(), F::one(), F::one()),
        provenance: Provenance::new(Some(CaseTag::MultipleRoot), "theorem2"),
    })
}

/// Moves a solution of the `α = β = γ = 1` system to `target` (which must have
/// a double root of `r`) by `x ↦ (α/3)I + λ(x − I/3)`.
pub fn from_model<F: Scalar>(
    model: &SolutionTriple<F>,
    target: &Params<F>,
) -> Result<SolutionTriple<F>, ConstructError> {
    let lambda = crate::classify::model_scaling(target)?;
    let n = model.n();
    let third = F::from_rat(&rat(1, 3));
    let shift = Mat::scalar(n, target.alpha.clone() * third.clone());
    let mv = |m: &Mat<F>| -> Result<Mat<F>, MatError> {
        shift.try_add(&m.try_sub(&Mat::scalar(n, third.clone()))?.scale(&lambda))
    };
    Ok(SolutionTriple {
        a: mv(&model.a)?,
        b: mv(&model.b)?,
        c: mv(&model.c)?,
        params: target.clone(),
        provenance: Provenance::new(Some(CaseTag::MultipleRoot), "model-rescaled"),
    })
}

/// Square roots needed by the half-sum construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem3Radicals<F> {
    pub sigma: F,
    /// `√(σ/3)`
    pub root_sigma_third: F,
    /// `√3`
    pub root3: F,
    /// `√(σ/2)`
    pub s: F,
}

impl<F: Scalar> Theorem3Radicals<F> {
    pub fn check(&self) -> Result<(), ConstructError> {
        let k = F::from_i64;
        let sq = |x: &F| x.clone() * x.clone();
        if !(sq(&self.root_sigma_third) * k(3) - self.sigma.clone()).is_negligible() {
            return Err(ConstructError::MissingRadical("sqrt(sigma/3)".into()));
        }
        if !(sq(&self.root3) - k(3)).is_negligible() {
            return Err(ConstructError::MissingRadical("sqrt(3)".into()));
        }
        if !(sq(&self.s) * k(2) - self.sigma.clone()).is_negligible() {
            return Err(ConstructError::MissingRadical("sqrt(sigma/2)".into()));
        }
        Ok(())
    }
}

impl Theorem3Radicals<NfElem> {
    /// Radicals inside `Q(√2, √3)`, available when `σ` is a rational square
    /// times 1, 2, 3 or 6.
    pub fn exact(sigma: &Rat) -> Result<Self, ConstructError> {
        let field = MinPoly::biquadratic_2_3();
        let th = NfElem::generator(&field);
        let half = NfElem::rational(rat(1, 2));
        let r2 = (th.pow(3) - th.clone() * NfElem::rational(int(9))) * half.clone();
        let r3 = (th.clone() * NfElem::rational(int(11)) - th.pow(3)) * half;
        let root_of = |k: i64| -> Option<NfElem> {
            match k {
                1 => Some(NfElem::rational(int(1))),
                2 => Some(r2.clone()),
                3 => Some(r3.clone()),
                6 => Some(r2.clone() * r3.clone()),
                _ => None,
            }
        };
        let root = |q: Rat, label: &str| -> Result<NfElem, ConstructError> {
            let (s, k) = squarefree_decomposition(&q, 1_000_000)
                .ok_or_else(|| ConstructError::MissingRadical(format!("cannot factor {label}")))?;
            let r = root_of(k).ok_or_else(|| ConstructError::MissingRadical(format!("{label} needs sqrt({k})")))?;
            Ok(NfElem::rational(s) * r)
        };
        let rad = Theorem3Radicals {
            sigma: NfElem::rational(sigma.clone()),
            root_sigma_third: root(sigma / int(3), "sigma/3")?,
            root3: r3.clone(),
            s: root(sigma / int(2), "sigma/2")?,
        };
        Ok(rad)
    }
}

impl Theorem3Radicals<f64> {
    pub fn numeric(sigma: f64) -> Self {
        Theorem3Radicals { sigma, root_sigma_third: (sigma / 3.0).sqrt(), root3: 3f64.sqrt(), s: (sigma / 2.0).sqrt() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem3Shape<F> {
    /// Dimension of the noncommuting part; must be even.
    pub m: usize,
    /// Per-coordinate permutation of `(0, s, −s)` for the diagonal part.
    pub f_assign: Vec<[usize; 3]>,
    pub radicals: Theorem3Radicals<F>,
    pub conjugator: Option<Mat<F>>,
}

/// Half-sum case `α = γ = 0`, `β = σ`: a noncommuting `m`-dimensional block
/// plus a diagonal block.
///
/// The third block matrix is `C = −A − B`; its off-diagonal signs are forced by
/// `A + B + C = 0`.
pub fn construct_theorem3<F: Scalar>(shape: &Theorem3Shape<F>) -> Result<SolutionTriple<F>, ConstructError> {
    if shape.m % 2 == 1 {
        return Err(ConstructError::OddDimension(shape.m));
    }
    let rad = &shape.radicals;
    rad.check()?;
    let half = F::from_rat(&rat(1, 2));
    let h = shape.m / 2;
    let e_block = |m2: Mat<F>| m2.scale(&rad.root_sigma_third).kron(&Mat::identity(h));
    let big_a = e_block(Mat::diag(&[F::one(), -F::one()]));
    let r3h = rad.root3.clone() * half.clone();
    let big_b = e_block(Mat::from_rows(vec![vec![-half.clone(), r3h.clone()], vec![r3h, half]])?);
    let big_c = big_a.try_add(&big_b)?.scale(&-F::one());
    let eig = [F::zero(), rad.s.clone(), -rad.s.clone()];
    for perm in &shape.f_assign {
        let mut sorted = *perm;
        sorted.sort();
        if sorted != [0, 1, 2] {
            return Err(ConstructError::Constraint(format!("{perm:?} is not a permutation")));
        }
    }
    let f_slot = |s: usize| Mat::diag(&shape.f_assign.iter().map(|p| eig[p[s]].clone()).collect::<Vec<_>>());
    let p = shape.conjugator.as_ref();
    let a = conjugate_opt(p, Mat::block_diag(&[&big_a, &f_slot(0)]))?;
    let b = conjugate_opt(p, Mat::block_diag(&[&big_b, &f_slot(1)]))?;
    let c = conjugate_opt(p, Mat::block_diag(&[&big_c, &f_slot(2)]))?;
    Ok(SolutionTriple {
        a,
        b,
        c,
        params: Params::new(F::zero(), rad.sigma.clone(), F::zero()),
        provenance: Provenance::new(Some(CaseTag::HalfSum), "theorem3"),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum NilpotentFamily<F> {
    /// `a = αJ₂`, `b = βJ₂`
    N2(F, F),
    /// `a = J₃`, `b` strictly upper with `b₁₂ = x`, `b₁₃ = y`
    N3(F, F),
    /// The 9×9 rational instance with `a = diag(J₅, J₃, 0)`
    N9,
}

/// The 9×9 `b` paired with `a = diag(J₅, J₃, 0)`.
pub fn n9_b() -> Mat<Rat> {
    let h = rat(-1, 2);
    let mut b = Mat::zeros(9, 9);
    let entries: [(usize, usize, Rat); 14] = [
        (0, 1, h.clone()),
        (0, 5, rat(3, 4)),
        (1, 2, h.clone()),
        (1, 6, rat(-9, 4)),
        (1, 8, int(1)),
        (2, 3, h.clone()),
        (2, 7, rat(3, 4)),
        (3, 4, h.clone()),
        (5, 2, int(-1)),
        (5, 6, h.clone()),
        (6, 3, int(3)),
        (6, 7, h),
        (7, 4, int(-1)),
        (8, 3, int(6)),
    ];
    for (i, j, v) in entries {
        b.set(i, j, v);
    }
    b
}

pub fn n9_a() -> Mat<Rat> {
    Mat::block_diag(&[&Mat::jordan_block(5), &Mat::jordan_block(3), &Mat::zeros(1, 1)])
}

/// Solutions with all right-hand sides zero.
pub fn construct_nilpotent<F: Scalar>(family: &NilpotentFamily<F>) -> Result<SolutionTriple<F>, ConstructError> {
    let (a, b, name) = match family {
        NilpotentFamily::N2(x, y) => {
            let j = Mat::<F>::jordan_block(2);
            (j.scale(x), j.scale(y), "nil-n2")
        }
        NilpotentFamily::N3(x, y) => {
            let k = F::from_i64;
            let denom = k(2) * x.clone() + F::one();
            if denom.is_negligible() {
                return Err(ConstructError::Constraint("x = -1/2".into()));
            }
            if (x.clone() * x.clone() + x.clone() + F::one()).is_negligible() {
                return Err(ConstructError::Constraint("x^2 + x + 1 = 0".into()));
            }
            let b23 = (-k(2) - x.clone()).try_div(&denom)?;
            let mut b = Mat::zeros(3, 3);
            b.set(0, 1, x.clone());
            b.set(0, 2, y.clone());
            b.set(1, 2, b23);
            (Mat::jordan_block(3), b, "nil-n3")
        }
        NilpotentFamily::N9 => (n9_a().map(F::from_rat), n9_b().map(F::from_rat), "nil-n9"),
    };
    let c = a.try_add(&b)?.scale(&-F::one());
    Ok(SolutionTriple {
        a,
        b,
        c,
        params: Params::new(F::zero(), F::zero(), F::zero()),
        provenance: Provenance::new(Some(CaseTag::Nilpotent), name),
    })
}

/// `a = uI₂`, `b = (v w; −w v)`, `c = (v −w; w v)`, each tensored with `I_m`.
pub fn construct_real_even<F: Scalar>(u: &F, v: &F, w: &F, m: usize) -> Result<SolutionTriple<F>, ConstructError> {
    if w.is_negligible() {
        return Err(ConstructError::Constraint("w must be nonzero".into()));
    }
    if m == 0 {
        return Err(ConstructError::Constraint("m must be positive".into()));
    }
    let id = Mat::identity(m);
    let a = Mat::scalar(2, u.clone()).kron(&id);
    let b = Mat::from_rows(vec![vec![v.clone(), w.clone()], vec![-w.clone(), v.clone()]])?.kron(&id);
    let c = Mat::from_rows(vec![vec![v.clone(), -w.clone()], vec![w.clone(), v.clone()]])?.kron(&id);
    let k = F::from_i64;
    let (v2, w2) = (v.clone() * v.clone(), w.clone() * w.clone());
    let params = Params::new(
        u.clone() + k(2) * v.clone(),
        u.clone() * u.clone() + k(2) * (v2.clone() - w2.clone()),
        u.clone() * u.clone() * u.clone() + k(2) * v.clone() * (v2 - k(3) * w2),
    );
    Ok(SolutionTriple { a, b, c, params, provenance: Provenance::new(None, "real-even") })
}

/// Real solution of size `2m` from real parameters whose cubic has exactly one real root.
pub fn construct_real_even_from_params(params: &Params<f64>, m: usize) -> Result<SolutionTriple<f64>, ConstructError> {
    let cs = crate::classify::Cubic::from_params(params).coeffs().map(|c| Complex64::new(c, 0.0));
    let roots = cardano(cs);
    let Some(real) = roots.iter().find(|z| z.im == 0.0) else {
        return Err(ConstructError::Constraint("no real root found".into()));
    };
    let Some(cx) = roots.iter().find(|z| z.im != 0.0) else {
        return Err(ConstructError::ThreeRealRoots);
    };
    let mut sol = construct_real_even(&real.re, &cx.re, &cx.im.abs(), m)?;
    sol.params = params.clone();
    Ok(sol)
}

fn to_u<F: Scalar>(m: &Mat<F>) -> Result<(F, F), ConstructError> {
    if m.shape() != (2, 2) {
        return Err(ConstructError::NotInU);
    }
    let (y, z) = (m.get(0, 0).clone(), m.get(0, 1).clone());
    if !(m.get(1, 1).clone() - y.clone()).is_negligible() || !(m.get(1, 0).clone() + z.clone()).is_negligible() {
        return Err(ConstructError::NotInU);
    }
    Ok((y, z))
}

fn from_u(z: Complex64) -> Mat<f64> {
    Mat::from_rows(vec![vec![z.re, z.im], vec![-z.im, z.re]]).expect("2x2")
}

/// Solution inside `U = {(y z; −z y)} ≅ C`, where the right-hand sides are
/// elements of `U` rather than scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct USolution {
    pub a: Mat<f64>,
    pub b: Mat<f64>,
    pub c: Mat<f64>,
    pub rhs: [Mat<f64>; 3],
    /// The complex numbers corresponding to `a`, `b`, `c`, sorted.
    pub roots: [Complex64; 3],
}

/// Solves the system in `U` for right-hand sides in `U`; the solution is
/// unique up to order and is returned sorted.
pub fn solve_in_u(rhs: [&Mat<f64>; 3]) -> Result<USolution, ConstructError> {
    let mut ps = [Complex64::zero(); 3];
    for (k, m) in rhs.iter().enumerate() {
        let (y, z) = to_u(m)?;
        ps[k] = Complex64::new(y, z);
    }
    let monic: UPoly<Complex64> = crate::classify::power_sums_to_cubic(&ps[0], &ps[1], &ps[2]);
    let roots = cardano([monic.coeff(0), monic.coeff(1), monic.coeff(2), monic.coeff(3)]);
    Ok(USolution {
        a: from_u(roots[0]),
        b: from_u(roots[1]),
        c: from_u(roots[2]),
        rhs: [rhs[0].clone(), rhs[1].clone(), rhs[2].clone()],
        roots,
    })
}

/// Embeds `y + iz` as `(y z; −z y)`.
pub fn u_matrix(z: Complex64) -> Mat<f64> {
    from_u(z)
}

fn quad_power_sums<F: Scalar>(ms: [&Mat<F>; 4]) -> Result<[F; 4], ConstructError> {
    let mut out = [F::zero(), F::zero(), F::zero(), F::zero()];
    let n = ms[0].nrows();
    for (k, slot) in out.iter_mut().enumerate() {
        let mut sum = Mat::zeros(n, n);
        for m in ms {
            sum = sum.try_add(&m.pow(k as u32 + 1)?)?;
        }
        if sum != Mat::scalar(n, sum.get(0, 0).clone()) && F::EXACT {
            return Err(ConstructError::Constraint(format!("power sum {} is not scalar", k + 1)));
        }
        *slot = sum.get(0, 0).clone();
    }
    Ok(out)
}

/// `a = diag(r₁, r₂)`, `c = diag(r₂, r₁)`, `b = p⁻¹diag(r₃, r₄)p`, `d = p⁻¹diag(r₄, r₃)p`
/// with `r₁, r₂` the roots of `x² + ux + v` and `r₃, r₄` those of `x² − ux + w`.
pub fn construct_sigma_generic<F: Scalar>(roots: [F; 4], p: &Mat<F>) -> Result<SolutionQuad<F>, ConstructError> {
    let pinv = p.inverse().map_err(|_| ConstructError::Singular)?;
    let [r1, r2, r3, r4] = roots;
    let sim = |m: Mat<F>| -> Result<Mat<F>, MatError> { pinv.try_mul(&m)?.try_mul(p) };
    let a = Mat::diag(&[r1.clone(), r2.clone()]);
    let c = Mat::diag(&[r2, r1]);
    let b = sim(Mat::diag(&[r3.clone(), r4.clone()]))?;
    let d = sim(Mat::diag(&[r4, r3]))?;
    let alphas = quad_power_sums([&a, &b, &c, &d])?;
    Ok(SolutionQuad { a, b, c, d, alphas, provenance: Provenance::new(None, "sigma-generic") })
}

/// Rational roots of the two quadratics `x² + ux + v` and `x² − ux + w`.
pub fn sigma_roots(u: &Rat, v: &Rat, w: &Rat) -> Result<[Rat; 4], ConstructError> {
    let one = int(1);
    let q1 = UPoly::new(vec![v.clone(), u.clone(), one.clone()]).rational_roots();
    let q2 = UPoly::new(vec![w.clone(), -u.clone(), one]).rational_roots();
    if q1.len() != 2 || q2.len() != 2 {
        return Err(ConstructError::Constraint("quadratic factors do not split over Q".into()));
    }
    Ok([q1[1].clone(), q1[0].clone(), q2[1].clone(), q2[0].clone()])
}

/// The 2×2 solution over `Q(j)` with `a² = I`, `b² = jI`, `c² = j²I`, `d² = 0`.
pub fn construct_sigma_pattern2() -> SolutionQuad<NfElem> {
    let field = MinPoly::cyclotomic3();
    let j = NfElem::generator(&field);
    let j2 = j.pow(2);
    let q = |x: Rat| NfElem::rational(x);
    let half = q(rat(1, 2));
    let one = q(int(1));
    let a = Mat::diag(&[one.clone(), -one.clone()]);
    let b = Mat::from_rows(vec![
        vec![-(j2.clone() * half.clone()), (j.clone() - one.clone()) * half.clone()],
        vec![(one - j.clone()) * half.clone(), j2.clone() * half],
    ])
    .expect("2x2");
    let c = b.map(|x| x.substitute(&j2));
    let t = q(rat(3, 2));
    let d = Mat::from_rows(vec![vec![-t.clone(), t.clone()], vec![-t.clone(), t]]).expect("2x2");
    SolutionQuad {
        a,
        b,
        c,
        d,
        alphas: std::array::from_fn(|_| NfElem::zero()),
        provenance: Provenance::new(None, "sigma-pattern2"),
    }
}

/// Four-slot solution with no nilpotent slot: the 2×2 pattern summed with its
/// cyclic shift `(a, b, c, d) → (b, c, d, a)`.
pub fn construct_sigma_nonnilpotent() -> SolutionQuad<NfElem> {
    let p = construct_sigma_pattern2();
    let ms = [&p.a, &p.b, &p.c, &p.d];
    let slot = |k: usize| Mat::block_diag(&[ms[k], ms[(k + 1) % 4]]);
    SolutionQuad {
        a: slot(0),
        b: slot(1),
        c: slot(2),
        d: slot(3),
        alphas: std::array::from_fn(|_| NfElem::zero()),
        provenance: Provenance::new(None, "sigma-nonnilpotent"),
    }
}

/// `a = (0 I; z 0)`, `b = (0 q; I 0)` with `zq = qz = 0`.
pub fn construct_tsys<F: Scalar>(z: &Mat<F>, q: &Mat<F>) -> Result<(Mat<F>, Mat<F>), ConstructError> {
    let m = z.nrows();
    if !z.is_square() || q.shape() != (m, m) {
        return Err(ConstructError::Matrix(MatError::Shape("z and q must be m x m".into())));
    }
    if !z.try_mul(q)?.is_zero() || !q.try_mul(z)?.is_zero() {
        return Err(ConstructError::Constraint("zq and qz must vanish".into()));
    }
    let (zero, id) = (Mat::zeros(m, m), Mat::identity(m));
    let a = Mat::from_blocks(&[vec![&zero, &id], vec![z, &zero]])?;
    let b = Mat::from_blocks(&[vec![&zero, q], vec![&id, &zero]])?;
    Ok((a, b))
}

/// Result of bringing a two-matrix solution to block normal form:
/// `a = P (0 I; z 0) P⁻¹`, `b = P (0 q; I 0) P⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct TsysCanonical<F> {
    pub m: usize,
    pub z: Mat<F>,
    pub q: Mat<F>,
    pub change_of_basis: Mat<F>,
}

/// Residuals `ab + ba − I` and `ba²b`.
pub fn tsys_residuals<F: Scalar>(a: &Mat<F>, b: &Mat<F>) -> Result<(Mat<F>, Mat<F>), MatError> {
    let n = a.nrows();
    let ab = a.try_mul(b)?;
    let ba = b.try_mul(a)?;
    let r1 = ab.try_add(&ba)?.try_sub(&Mat::identity(n))?;
    let r2 = ba.try_mul(&ab)?;
    Ok((r1, r2))
}

pub fn canonicalize_tsys<F: Scalar>(a: &Mat<F>, b: &Mat<F>) -> Result<TsysCanonical<F>, ConstructError> {
    let n = a.nrows();
    let (r1, r2) = tsys_residuals(a, b)?;
    if !r1.is_zero() || !r2.is_zero() {
        return Err(ConstructError::NotASolution("ab + ba = I and ba^2b = 0 must hold".into()));
    }
    if n % 2 == 1 {
        return Err(ConstructError::OddDimension(n));
    }
    let m = n / 2;
    let ab = a.try_mul(b)?;
    let ba = b.try_mul(a)?;
    let image = |p: &Mat<F>| -> Vec<Vec<F>> {
        let (_, pivots) = p.rref().expect("rref");
        pivots.iter().map(|&j| p.column(j)).collect()
    };
    let mut cols = image(&ab);
    let rank_ab = cols.len();
    cols.extend(image(&ba));
    if rank_ab != m || cols.len() != n {
        return Err(ConstructError::NotASolution(format!("ab has rank {rank_ab}, expected {m}")));
    }
    let s = Mat::from_columns(&cols)?;
    let sinv = s.inverse().map_err(|_| ConstructError::Singular)?;
    let a1 = sinv.try_mul(a)?.try_mul(&s)?;
    let b1 = sinv.try_mul(b)?.try_mul(&s)?;
    let blk = |x: &Mat<F>, i: usize, j: usize| x.submatrix(i * m..(i + 1) * m, j * m..(j + 1) * m);
    for (x, name) in [(&a1, "a"), (&b1, "b")] {
        if !blk(x, 0, 0).is_zero() || !blk(x, 1, 1).is_zero() {
            return Err(ConstructError::NotASolution(format!("{name} has nonzero diagonal blocks")));
        }
    }
    let y = blk(&a1, 0, 1);
    let yinv = y.inverse().map_err(|_| ConstructError::Singular)?;
    let z = blk(&a1, 1, 0).try_mul(&y)?;
    let q = yinv.try_mul(&blk(&b1, 0, 1))?;
    let d = Mat::block_diag(&[&y, &Mat::identity(m)]);
    Ok(TsysCanonical { m, z, q, change_of_basis: s.try_mul(&d)? })
}
