//! The acceptance suite, shared by `qpair selftest` and the test target.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::check::check_signature;
use crate::classify::{
    canonical_filtration, classify, classify_with, Classification, Factor, FactorKind, FactorSignature, FiltrationDims,
};
use crate::error::Result;
use crate::exact::{GaussianRational as G, Matrix, MatrixG, Quaternion, Rational};
use crate::pairs::{
    gen_u, gen_v, gen_w, random_automorphism, sphere_point_from_zeta, ComplexPair, Pair, Rotation, SpherePoint, Zeta,
};
use crate::pencil::{CP1Point, Convention, Pencil};
use crate::sheaf::{SheafSignature, TorsionOrbit};

pub const CRITERION_1_LIMIT: Duration = Duration::from_secs(10);
pub const CRITERION_2_LIMIT: Duration = Duration::from_secs(30);
pub const CRITERION_6_LIMIT: Duration = Duration::from_secs(300);
pub const RANDOM_PAIRS: usize = 100;
pub const ROTATION_PAIRS: usize = 20;
pub const COMPLEX_PAIRS: usize = 50;
pub const SMALL_SAMPLES: usize = 20;
pub const SEED: u64 = 20_26;

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} [{}] {} ({:.2}s){}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.elapsed.as_secs_f64(),
            if self.detail.is_empty() { String::new() } else { format!(": {}", self.detail) }
        )
    }
}

pub const NAMES: [&str; 12] = [
    "model sheaves of U(k)",
    "model sheaves of V(k)",
    "torsion of W(k,q)",
    "dual model sheaves",
    "dimension function of W(k,q)",
    "uniqueness under random automorphisms",
    "independence of the product rotation",
    "canonical filtration",
    "signature identities",
    "complex warm-up decomposition",
    "small-case law in H",
    "negative controls",
];

/// Every classification made during a run, for the identity audit.
#[derive(Default)]
pub struct Recorder {
    seen: Vec<(usize, usize, SheafSignature)>,
}

impl Recorder {
    pub fn classify(&mut self, p: &Pair) -> Result<Classification> {
        let c = classify(p)?;
        self.seen.push((p.k(), p.dim(), c.sheaf.clone()));
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.seen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seen.is_empty()
    }
}

type Outcome = std::result::Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: crate::Error) -> String {
    e.to_string()
}

/// Rational sphere points used for `W` supports.
pub fn support_points() -> Vec<SpherePoint> {
    let f = |a, b, c, d| Zeta::Finite(G::new(Rational::new(a, b), Rational::new(c, d)));
    [Zeta::int(0), Zeta::int(1), Zeta::Finite(G::unit_i()), f(1, 2, 1, 2), Zeta::int(2), f(-1, 3, 1, 2)]
        .iter()
        .map(sphere_point_from_zeta)
        .collect()
}

fn half_half() -> SpherePoint {
    sphere_point_from_zeta(&Zeta::Finite(G::new(Rational::new(1, 2), Rational::new(1, 2))))
}

/// A model factor together with its pair.
pub fn model_factor(kind: FactorKind, k: usize, q: Option<&SpherePoint>) -> (Pair, Factor) {
    match kind {
        FactorKind::U => (gen_u(k, None).expect("valid"), Factor::new(kind, k)),
        FactorKind::Ustar => (gen_u(k, None).expect("valid").dual(), Factor::new(kind, k)),
        FactorKind::V => (gen_v(k), Factor::new(kind, k)),
        FactorKind::Vstar => (gen_v(k).dual(), Factor::new(kind, k)),
        FactorKind::W => {
            let q = q.expect("W needs a support point");
            (gen_w(k, q).expect("valid"), Factor::w_at(k, q))
        }
    }
}

/// A random identity-rotation product of model pairs with `k ≤ max_k`.
pub fn random_model(rng: &mut ChaCha8Rng, max_k: usize, torsion_free: bool) -> (Pair, FactorSignature) {
    let points = support_points();
    let mut parts = Vec::new();
    let mut factors = Vec::new();
    let mut used = 0;
    loop {
        let budget = max_k - used;
        let mut options: Vec<(FactorKind, usize)> = Vec::new();
        for k in 0..=2 {
            if k < budget {
                options.push((FactorKind::U, k));
                options.push((FactorKind::Ustar, k));
            }
        }
        for k in 0..=1 {
            if 2 * k < budget {
                options.push((FactorKind::V, k));
                options.push((FactorKind::Vstar, k));
            }
        }
        if !torsion_free {
            for k in 1..=3 {
                if k <= budget {
                    options.push((FactorKind::W, k));
                }
            }
        }
        if options.is_empty() {
            break;
        }
        let (kind, k) = options[rng.gen_range(0..options.len())];
        let q = &points[rng.gen_range(0..points.len())];
        let (p, f) = model_factor(kind, k, Some(q));
        used += p.k();
        parts.push(p);
        factors.push(f);
        if rng.gen_ratio(1, 3) {
            break;
        }
    }
    (Pair::product_many(&parts), FactorSignature::new(factors))
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

fn random_quaternion(rng: &mut ChaCha8Rng) -> Quaternion {
    Quaternion::new(random_rational(rng), random_rational(rng), random_rational(rng), random_rational(rng))
}

/// A random `dim`-dimensional subspace of `ℍ`.
pub fn random_subspace_of_h(rng: &mut ChaCha8Rng, dim: usize) -> Pair {
    loop {
        let basis = (0..dim).map(|_| vec![random_quaternion(rng)]).collect();
        if let Ok(p) = Pair::new(1, basis) {
            return p;
        }
    }
}

fn random_gaussian(rng: &mut ChaCha8Rng) -> G {
    G::new(random_rational(rng), random_rational(rng))
}

/// A random complex pair of known type `ℂ^m × ℝ^l × 0^z`, moved by a random
/// element of `GL_n(ℚ(i))`.
pub fn random_complex_pair(rng: &mut ChaCha8Rng, n: usize) -> (ComplexPair, (usize, usize, usize)) {
    let m = rng.gen_range(0..=n);
    let l = rng.gen_range(0..=n - m);
    let g = loop {
        let rows: Vec<Vec<G>> = (0..n).map(|_| (0..n).map(|_| random_gaussian(rng)).collect()).collect();
        let g: MatrixG = Matrix::from_rows(rows, n);
        if g.rank() == n {
            break g;
        }
    };
    let unit = |i: usize, c: G| {
        let mut v = vec![G::zero(); n];
        v[i] = c;
        v
    };
    let mut basis = Vec::new();
    for i in 0..m {
        basis.push(g.mul_vec(&unit(i, G::one())));
        basis.push(g.mul_vec(&unit(i, G::unit_i())));
    }
    for i in m..m + l {
        basis.push(g.mul_vec(&unit(i, G::one())));
    }
    (ComplexPair::new(n, basis).expect("independent"), (m, l, n - m - l))
}

/// `(m, l, z)` from the complex rank of the basis, independently of the
/// real intersection used by [`ComplexPair::complex_decompose`].
pub fn complex_decompose_oracle(p: &ComplexPair) -> (usize, usize, usize) {
    let n = p.n();
    let rows: Vec<Vec<G>> =
        p.real_basis().iter().map(|v| v.chunks(2).map(|c| G::new(c[0].clone(), c[1].clone())).collect()).collect();
    let complex_rank = if rows.is_empty() { 0 } else { Matrix::from_rows(rows, n).rank() };
    let m = p.dim() - complex_rank;
    let l = p.dim() - 2 * m;
    (m, l, n - m - l)
}

fn single(kind: FactorKind, k: usize) -> FactorSignature {
    FactorSignature::new(vec![Factor::new(kind, k)])
}

fn criterion_1(rec: &mut Recorder) -> Outcome {
    for k in 0..=4 {
        let start = Instant::now();
        let c = rec.classify(&gen_u(k, None).map_err(err)?).map_err(err)?;
        let elapsed = start.elapsed();
        ensure(c.factors == single(FactorKind::U, k), || format!("gen_U({k}) classified as {}", c.factors))?;
        let sheaf = SheafSignature::new(vec![], vec![2 * k as i64 + 2], vec![]);
        ensure(c.sheaf == sheaf, || format!("gen_U({k}) has sheaf {:?}", c.sheaf))?;
        ensure(elapsed < CRITERION_1_LIMIT, || format!("gen_U({k}) took {elapsed:?}"))?;
    }
    Ok(())
}

fn criterion_2(rec: &mut Recorder) -> Outcome {
    for k in 0..=3 {
        let start = Instant::now();
        let c = rec.classify(&gen_v(k)).map_err(err)?;
        let elapsed = start.elapsed();
        ensure(c.factors == single(FactorKind::V, k), || format!("gen_V({k}) classified as {}", c.factors))?;
        let d = 2 * k as i64 + 1;
        ensure(c.sheaf == SheafSignature::new(vec![], vec![d, d], vec![]), || {
            format!("gen_V({k}) has sheaf {:?}", c.sheaf)
        })?;
        ensure(elapsed < CRITERION_2_LIMIT, || format!("gen_V({k}) took {elapsed:?}"))?;
    }
    Ok(())
}

fn criterion_3_points() -> Vec<SpherePoint> {
    vec![SpherePoint::i(), SpherePoint::j(), SpherePoint::k(), half_half()]
}

fn criterion_3(rec: &mut Recorder) -> Outcome {
    for k in 1..=4 {
        for q in criterion_3_points() {
            let c = rec.classify(&gen_w(k, &q).map_err(err)?).map_err(err)?;
            let expected = SheafSignature::new(
                vec![],
                vec![],
                vec![TorsionOrbit::new(crate::classify::support_form_at(&q), vec![k])],
            );
            ensure(c.sheaf == expected, || format!("gen_W({k}, {q}) has sheaf {:?}", c.sheaf))?;
            ensure(c.sheaf.torsion_length() == 2 * k, || {
                format!("gen_W({k}, {q}) has torsion length {}", c.sheaf.torsion_length())
            })?;
            ensure(c.factors == FactorSignature::new(vec![Factor::w_at(k, &q)]), || {
                format!("gen_W({k}, {q}) gives {}", c.factors)
            })?;
        }
    }
    Ok(())
}

fn criterion_4(rec: &mut Recorder) -> Outcome {
    for k in 0..=3 {
        let c = rec.classify(&gen_u(k, None).map_err(err)?.dual()).map_err(err)?;
        ensure(c.factors == single(FactorKind::Ustar, k), || format!("dual gen_U({k}) gives {}", c.factors))?;
        ensure(c.sheaf == SheafSignature::new(vec![-2 * k as i64 - 2], vec![], vec![]), || {
            format!("dual gen_U({k}): {:?}", c.sheaf)
        })?;
        let c = rec.classify(&gen_v(k).dual()).map_err(err)?;
        let d = -2 * k as i64 - 1;
        ensure(c.factors == single(FactorKind::Vstar, k), || format!("dual gen_V({k}) gives {}", c.factors))?;
        ensure(c.sheaf == SheafSignature::new(vec![d, d], vec![], vec![]), || {
            format!("dual gen_V({k}): {:?}", c.sheaf)
        })?;
    }
    Ok(())
}

fn criterion_5(_: &mut Recorder) -> Outcome {
    let others: Vec<SpherePoint> = [
        Zeta::int(3),
        Zeta::int(-2),
        Zeta::Finite(G::from_ints(1, 2)),
        Zeta::Finite(G::from_ints(0, -3)),
        Zeta::Finite(G::new(Rational::new(2, 3), Rational::new(-1, 5))),
    ]
    .iter()
    .map(sphere_point_from_zeta)
    .collect();
    for k in 1..=4 {
        for q in criterion_3_points() {
            let p = gen_w(k, &q).map_err(err)?;
            let pencil = Pencil::build(&p);
            ensure(p.intersection_dim(&q) == 2, || format!("dim(W ∩ qW) ≠ 2 for k = {k}, q = {q}"))?;
            for x in others.iter().chain([&q, &q.antipode()]) {
                let expected = if *x == q || *x == q.antipode() { 2 } else { 0 };
                let dim = p.intersection_dim(x);
                ensure(dim == expected, || format!("dim(W ∩ xW) = {dim} at x = {x} for k = {k}, q = {q}"))?;
                let fiber = pencil.fiber_kernel_dim(&CP1Point::from_zeta(&x.zeta()));
                ensure(2 * fiber == dim, || format!("pencil oracle gives {fiber} at x = {x} for k = {k}, q = {q}"))?;
            }
        }
    }
    Ok(())
}

fn criterion_6(rec: &mut Recorder) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let start = Instant::now();
    for n in 0..RANDOM_PAIRS {
        let (p, expected) = random_model(&mut rng, 6, false);
        let phi = random_automorphism(p.k(), SEED + n as u64);
        let moved = p.act(&phi).map_err(err)?;
        ensure(moved.k() <= 6 && moved.dim() <= 24, || "random pair too large".into())?;
        let c = rec.classify(&moved).map_err(err)?;
        let expected = expected.rotated(phi.scalar());
        ensure(c.factors == expected, || format!("sample {n}: expected {expected}, got {}", c.factors))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < CRITERION_6_LIMIT, || format!("batch took {elapsed:?}"))
}

pub fn criterion_7_rotations() -> Vec<Rotation> {
    let q = |r, i, j, k, d| {
        Quaternion::new(Rational::new(r, d), Rational::new(i, d), Rational::new(j, d), Rational::new(k, d))
    };
    [q(1, 1, 1, 1, 2), q(3, 0, 4, 0, 5), q(2, 1, 2, 4, 5)]
        .into_iter()
        .map(|g| Rotation::new(g).expect("unit"))
        .collect()
}

fn criterion_7(rec: &mut Recorder) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    for n in 0..ROTATION_PAIRS {
        let (p, _) = random_model(&mut rng, 3, true);
        let (q, _) = random_model(&mut rng, 3, false);
        let base = rec.classify(&p.product(&q, &Rotation::identity())).map_err(err)?;
        for t in criterion_7_rotations() {
            let c = rec.classify(&p.product(&q, &t)).map_err(err)?;
            let back = c.factors.rotated(t.quaternion());
            ensure(back == base.factors, || {
                format!("sample {n}: rotation {} gives {} vs {}", t.quaternion(), back, base.factors)
            })?;
            ensure(
                c.sheaf.kernel_degrees == base.sheaf.kernel_degrees
                    && c.sheaf.cokernel_degrees == base.sheaf.cokernel_degrees,
                || format!("sample {n}: free parts differ under rotation {}", t.quaternion()),
            )?;
        }
    }
    Ok(())
}

fn criterion_8(rec: &mut Recorder) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    let mut pairs: Vec<Pair> = vec![
        gen_u(2, None).map_err(err)?,
        Pair::full(1),
        Pair::product_many(&[gen_u(1, None).map_err(err)?.dual(), gen_w(1, &SpherePoint::j()).map_err(err)?, gen_v(1)]),
    ];
    pairs.extend((0..15).map(|_| random_model(&mut rng, 5, false).0));
    for p in pairs {
        let c = rec.classify(&p).map_err(err)?;
        let f = canonical_filtration(&c).map_err(err)?;
        ensure(f.saturation_checked, || format!("torsion of {p} was not rational"))?;
        ensure(f.dims() == FiltrationDims::predicted(&c.factors), || format!("dims {:?} for {}", f.dims(), c.factors))?;
    }
    Ok(())
}

fn criterion_9(rec: &mut Recorder) -> Outcome {
    if rec.is_empty() {
        for k in 0..=2 {
            rec.classify(&gen_u(k, None).map_err(err)?).map_err(err)?;
            rec.classify(&gen_v(k).dual()).map_err(err)?;
            rec.classify(&gen_w(k + 1, &SpherePoint::k()).map_err(err)?).map_err(err)?;
        }
    }
    for (k, dim, sig) in &rec.seen {
        sig.verify(*k, *dim).map_err(err)?;
        let doc = serde_json::json!({
            "kernel_degrees": sig.kernel_degrees,
            "cokernel_degrees": sig.cokernel_degrees,
            "torsion": sig.torsion,
            "quaternionic_dimension": k,
            "subspace_dimension": dim,
        });
        check_signature(&doc).map_err(err)?;
    }
    Ok(())
}

fn criterion_10(_: &mut Recorder) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 10);
    for n in 0..COMPLEX_PAIRS {
        let size = rng.gen_range(1..=6);
        let (p, known) = random_complex_pair(&mut rng, size);
        let got = p.complex_decompose();
        let oracle = complex_decompose_oracle(&p);
        ensure(got == oracle && got == known, || {
            format!("sample {n}: got {got:?}, oracle {oracle:?}, constructed {known:?}")
        })?;
    }
    Ok(())
}

fn criterion_11(rec: &mut Recorder) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 11);
    for n in 0..SMALL_SAMPLES {
        let c = rec.classify(&random_subspace_of_h(&mut rng, 2)).map_err(err)?;
        let f = c.factors.factors();
        ensure(f.len() == 1 && f[0].kind == FactorKind::W && f[0].k == 1, || {
            format!("2-plane {n} gives {}", c.factors)
        })?;
        let c = rec.classify(&random_subspace_of_h(&mut rng, 3)).map_err(err)?;
        ensure(c.factors == single(FactorKind::Ustar, 0), || format!("3-space {n} gives {}", c.factors))?;
    }
    Ok(())
}

fn criterion_12(_: &mut Recorder) -> Outcome {
    let p = gen_u(0, None).map_err(err)?;
    match classify_with(&p, Convention::SignFlipped) {
        Err(e) if e.is_internal() => {}
        Err(e) => return Err(format!("sign-flipped eigensections gave a non-internal error: {e}")),
        Ok(_) => return Err("sign-flipped eigensections were accepted".into()),
    }
    let corrupted = serde_json::json!({"kernel_degrees": [], "cokernel_degrees": [3], "torsion": []});
    match check_signature(&corrupted) {
        Err(e) if e.is_internal() => Ok(()),
        other => Err(format!("corrupted signature was not rejected as an invariant failure: {other:?}")),
    }
}

pub fn run_criterion(id: usize, rec: &mut Recorder) -> CriterionResult {
    let start = Instant::now();
    let outcome = match id {
        1 => criterion_1(rec),
        2 => criterion_2(rec),
        3 => criterion_3(rec),
        4 => criterion_4(rec),
        5 => criterion_5(rec),
        6 => criterion_6(rec),
        7 => criterion_7(rec),
        8 => criterion_8(rec),
        9 => criterion_9(rec),
        10 => criterion_10(rec),
        11 => criterion_11(rec),
        12 => criterion_12(rec),
        _ => Err(format!("no criterion {id}")),
    };
    CriterionResult {
        id,
        name: NAMES.get(id.wrapping_sub(1)).copied().unwrap_or("unknown"),
        passed: outcome.is_ok(),
        detail: outcome.err().unwrap_or_default(),
        elapsed: start.elapsed(),
    }
}

/// Runs all criteria in order; the identity audit (9) runs last so that it
/// covers every classification made by the others.
pub fn run_all() -> Vec<CriterionResult> {
    let mut rec = Recorder::default();
    let order = [1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12, 9];
    let mut out: Vec<CriterionResult> = order.iter().map(|&id| run_criterion(id, &mut rec)).collect();
    out.sort_by_key(|r| r.id);
    out
}
