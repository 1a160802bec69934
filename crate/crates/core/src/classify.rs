use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{subspace, BinaryForm, GaussianRational as G, Quaternion, Rational};
use crate::pairs::{
    block_left_mult, from_real, gen_u, gen_v, gen_w, sphere_point_from_zeta, Pair, Rotation, SpherePoint, Zeta,
};
use crate::pencil::{eigensections, startup_check, CP1Point, Convention, Pencil};
use crate::sheaf::{generic_rank, sheaf_signature, split_rational_roots, SheafSignature, TorsionOrbit};

pub const FORMAT_VERSION: u32 = 1;
pub const ORIENTATION_ANCHOR: &str = "O(2) for (R,H)";

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum FactorKind {
    #[serde(rename = "U")]
    U,
    #[serde(rename = "U*")]
    Ustar,
    #[serde(rename = "V")]
    V,
    #[serde(rename = "V*")]
    Vstar,
    #[serde(rename = "W")]
    W,
}

impl FactorKind {
    pub fn name(self) -> &'static str {
        match self {
            FactorKind::U => "U",
            FactorKind::Ustar => "U*",
            FactorKind::V => "V",
            FactorKind::Vstar => "V*",
            FactorKind::W => "W",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "U" => Ok(FactorKind::U),
            "U*" | "Ustar" => Ok(FactorKind::Ustar),
            "V" => Ok(FactorKind::V),
            "V*" | "Vstar" => Ok(FactorKind::Vstar),
            "W" => Ok(FactorKind::W),
            _ => Err(Error::invalid(format!("unknown factor type {s:?}"))),
        }
    }

    pub fn dual(self) -> Self {
        match self {
            FactorKind::U => FactorKind::Ustar,
            FactorKind::Ustar => FactorKind::U,
            FactorKind::V => FactorKind::Vstar,
            FactorKind::Vstar => FactorKind::V,
            FactorKind::W => FactorKind::W,
        }
    }
}

/// One indecomposable factor. `support` is set exactly for `W` and is the
/// normalized form vanishing on the antipodal point pairs it lives over.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Factor {
    pub kind: FactorKind,
    pub k: usize,
    pub support: Option<BinaryForm>,
}

impl Factor {
    pub fn new(kind: FactorKind, k: usize) -> Self {
        Factor { kind, k, support: None }
    }

    pub fn w(k: usize, support: BinaryForm) -> Self {
        Factor { kind: FactorKind::W, k, support: Some(support.normalized()) }
    }

    /// `W(k, q)` supported at `±q`.
    pub fn w_at(k: usize, q: &SpherePoint) -> Self {
        Self::w(k, support_form_at(q))
    }

    /// `(dim_ℍ E, dim_ℝ U)` of the model pair.
    pub fn dims(&self) -> (usize, usize) {
        let k = self.k;
        match self.kind {
            FactorKind::U => (k + 1, 2 * k + 1),
            FactorKind::Ustar => (k + 1, 2 * k + 3),
            FactorKind::V => (2 * k + 1, 4 * k),
            FactorKind::Vstar => (2 * k + 1, 4 * k + 4),
            FactorKind::W => (k, 2 * k),
        }
    }

    fn rotated(&self, a: &Quaternion) -> Self {
        Factor {
            kind: self.kind,
            k: self.k,
            support: self.support.as_ref().map(|f| f.substitute(&a.conj().su2()).normalized()),
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.support {
            None => write!(f, "{}({})", self.kind.name(), self.k),
            Some(s) => write!(f, "W({}, {})", self.k, s),
        }
    }
}

/// The normalized degree-2 form vanishing at `q` and `−q`.
pub fn support_form_at(q: &SpherePoint) -> BinaryForm {
    let vanishing = |z: Zeta| match z {
        Zeta::Infinity => BinaryForm::z0(),
        Zeta::Finite(z) => BinaryForm::linear(-&z, G::one()),
    };
    vanishing(q.zeta()).mul(&vanishing(q.antipode().zeta())).normalized()
}

/// Rational points of a support form, or `None` if some root is not in
/// `ℚ(i) ∪ {∞}`.
pub fn rational_support_points(f: &BinaryForm) -> Result<Option<Vec<SpherePoint>>> {
    let mut out = Vec::new();
    for lin in split_rational_roots(f)? {
        if lin.degree() != 1 {
            return Ok(None);
        }
        let c = lin.coeffs();
        let zeta =
            if c[1].is_zero() { Zeta::Infinity } else { Zeta::Finite(-&(&c[0] * &c[1].inv().expect("nonzero"))) };
        out.push(sphere_point_from_zeta(&zeta));
    }
    Ok(Some(out))
}

/// Sorted multiset of factors.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct FactorSignature {
    factors: Vec<Factor>,
}

impl FactorSignature {
    pub fn new(mut factors: Vec<Factor>) -> Self {
        factors.sort();
        FactorSignature { factors }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn union(&self, other: &FactorSignature) -> FactorSignature {
        Self::new(self.factors.iter().chain(&other.factors).cloned().collect())
    }

    /// `(k, dim_ℝ U)` reconstructed from the dimension table.
    pub fn dims(&self) -> (usize, usize) {
        self.factors.iter().map(Factor::dims).fold((0, 0), |(a, b), (c, d)| (a + c, b + d))
    }

    /// Signature of `aUA` when `self` is that of `U`.
    pub fn rotated(&self, a: &Quaternion) -> Self {
        Self::new(self.factors.iter().map(|f| f.rotated(a)).collect())
    }

    pub fn count(&self, kind: FactorKind, k: usize) -> usize {
        self.factors.iter().filter(|f| f.kind == kind && f.k == k).count()
    }

    /// `(factor, multiplicity)` in canonical order.
    pub fn grouped(&self) -> Vec<(Factor, usize)> {
        let mut out: Vec<(Factor, usize)> = Vec::new();
        for f in &self.factors {
            match out.last_mut() {
                Some((g, n)) if g == f => *n += 1,
                _ => out.push((f.clone(), 1)),
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        self.grouped()
            .into_iter()
            .map(|(f, mult)| {
                let mut v = json!({ "type": f.kind.name(), "k": f.k, "mult": mult });
                if let Some(s) = &f.support {
                    v["support"] = json!(s);
                }
                v
            })
            .collect()
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let entries = v.as_array().ok_or_else(|| Error::Parse("factors must be an array".into()))?;
        let mut factors = Vec::new();
        for e in entries {
            let kind =
                FactorKind::parse(e["type"].as_str().ok_or_else(|| Error::Parse("factor without type".into()))?)?;
            let k = e["k"].as_u64().ok_or_else(|| Error::Parse("factor without k".into()))? as usize;
            let mult = e.get("mult").map_or(Some(1), Value::as_u64).ok_or_else(|| Error::Parse("bad mult".into()))?;
            let support = match e.get("support") {
                None | Some(Value::Null) => None,
                Some(s) => Some(
                    serde_json::from_value::<BinaryForm>(s.clone())
                        .map_err(|err| Error::Parse(format!("bad support form: {err}")))?
                        .normalized(),
                ),
            };
            if (kind == FactorKind::W) != support.is_some() {
                return Err(Error::Parse("support is required for W factors and only for them".into()));
            }
            for _ in 0..mult {
                factors.push(Factor { kind, k, support: support.clone() });
            }
        }
        Ok(Self::new(factors))
    }
}

impl fmt::Display for FactorSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.grouped().into_iter().map(|(x, n)| if n == 1 { x.to_string() } else { format!("{n}·{x}") }).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn count_values(values: &[i64]) -> BTreeMap<i64, usize> {
    let mut m = BTreeMap::new();
    for &v in values {
        *m.entry(v).or_insert(0) += 1;
    }
    m
}

pub fn factor_signature(s: &SheafSignature) -> Result<FactorSignature> {
    let mut factors = Vec::new();
    for (&d, &n) in &count_values(&s.cokernel_degrees) {
        match d {
            d if d >= 2 && d % 2 == 0 => {
                factors.extend(std::iter::repeat_n(Factor::new(FactorKind::U, (d as usize - 2) / 2), n))
            }
            d if d >= 1 && n % 2 == 0 => {
                factors.extend(std::iter::repeat_n(Factor::new(FactorKind::V, (d as usize - 1) / 2), n / 2))
            }
            _ => return Err(Error::internal(format!("cokernel degree {d} with multiplicity {n} has no model"))),
        }
    }
    for (&d, &n) in &count_values(&s.kernel_degrees) {
        let a = (-d) as usize;
        match a {
            a if a >= 2 && a % 2 == 0 => {
                factors.extend(std::iter::repeat_n(Factor::new(FactorKind::Ustar, (a - 2) / 2), n))
            }
            a if a >= 1 && d < 0 && n % 2 == 0 => {
                factors.extend(std::iter::repeat_n(Factor::new(FactorKind::Vstar, (a - 1) / 2), n / 2))
            }
            _ => return Err(Error::internal(format!("kernel degree {d} with multiplicity {n} has no model"))),
        }
    }
    for t in &s.torsion {
        for &k in &t.partition {
            factors.extend(std::iter::repeat_n(Factor::w(k, t.support_form.clone()), t.pairs()));
        }
    }
    Ok(FactorSignature::new(factors))
}

pub fn dual_signature(f: &FactorSignature) -> FactorSignature {
    FactorSignature::new(
        f.factors.iter().map(|x| Factor { kind: x.kind.dual(), k: x.k, support: x.support.clone() }).collect(),
    )
}

pub fn is_augmented(f: &FactorSignature) -> bool {
    f.count(FactorKind::Vstar, 0) == 0
}

pub fn is_strengthened(f: &FactorSignature) -> bool {
    f.count(FactorKind::V, 0) == 0
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub pair: Pair,
    pub sheaf: SheafSignature,
    pub factors: FactorSignature,
}

/// Runs the convention checks, builds the pencil and reads off the
/// decomposition.
pub fn classify(p: &Pair) -> Result<Classification> {
    classify_with(p, Convention::Standard)
}

pub fn classify_with(p: &Pair, convention: Convention) -> Result<Classification> {
    startup_check(convention)?;
    let pencil = Pencil::build_with(p, Default::default(), convention);
    pencil.reality_check()?;
    let sheaf = sheaf_signature(&pencil)?;
    let factors = factor_signature(&sheaf)?;
    if factors.dims() != (p.k(), p.dim()) {
        return Err(Error::internal(format!(
            "factors {factors} reconstruct {:?}, expected {:?}",
            factors.dims(),
            (p.k(), p.dim())
        )));
    }
    Ok(Classification { pair: p.clone(), sheaf, factors })
}

/// Identity-rotation product of model pairs realizing `f`.
pub fn model_from_signature(f: &FactorSignature) -> Result<Pair> {
    let mut parts = Vec::new();
    for x in f.factors() {
        let p = match x.kind {
            FactorKind::U => gen_u(x.k, None)?,
            FactorKind::Ustar => gen_u(x.k, None)?.dual(),
            FactorKind::V => gen_v(x.k),
            FactorKind::Vstar => gen_v(x.k).dual(),
            FactorKind::W => {
                let support = x.support.as_ref().expect("W factor carries a support");
                let points = rational_support_points(support)?.filter(|pts| pts.len() == 2).ok_or_else(|| {
                    Error::invalid(format!("support {support} is not a single rational antipodal pair"))
                })?;
                gen_w(x.k, &points[0].canonical_pair_representative())?
            }
        };
        parts.push(p);
    }
    Ok(Pair::product_many(&parts))
}

/// `(dim_ℍ, dim_ℝ)` pairs for `(E₋, U₋)` and `(E_mid, U_mid)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FiltrationDims {
    pub e_minus: usize,
    pub u_minus: usize,
    pub e_mid: usize,
    pub u_mid: usize,
}

impl FiltrationDims {
    pub fn predicted(f: &FactorSignature) -> Self {
        let mut d = FiltrationDims { e_minus: 0, u_minus: 0, e_mid: 0, u_mid: 0 };
        for x in f.factors() {
            let (e, u) = x.dims();
            match x.kind {
                FactorKind::Ustar | FactorKind::Vstar => {
                    d.e_minus += e;
                    d.u_minus += u;
                    d.e_mid += e;
                    d.u_mid += u;
                }
                FactorKind::W => {
                    d.e_mid += e;
                    d.u_mid += u;
                }
                _ => {}
            }
        }
        d
    }
}

/// `0 ⊆ (U₋, E₋) ⊆ (U_mid, E_mid) ⊆ (U, E)`: the CR part and the CR part
/// extended by the torsion part. Bases are real coordinate vectors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Filtration {
    pub k: usize,
    pub e_minus: Vec<Vec<Rational>>,
    pub u_minus: Vec<Vec<Rational>>,
    pub e_mid: Vec<Vec<Rational>>,
    pub u_mid: Vec<Vec<Rational>>,
    /// Whether the torsion step was also obtained by direct saturation at
    /// rational support points (and agreed with the dual construction).
    pub saturation_checked: bool,
}

impl Filtration {
    pub fn dims(&self) -> FiltrationDims {
        FiltrationDims {
            e_minus: self.e_minus.len() / 4,
            u_minus: self.u_minus.len(),
            e_mid: self.e_mid.len() / 4,
            u_mid: self.u_mid.len(),
        }
    }

    /// Containments and quaternionic closure.
    pub fn verify(&self, p: &Pair) -> Result<()> {
        let n = 4 * self.k;
        let u = p.real_basis();
        let checks = [
            (subspace::is_subspace(&self.u_minus, &self.u_mid, n), "U₋ ⊆ U_mid"),
            (subspace::is_subspace(&self.u_mid, u, n), "U_mid ⊆ U"),
            (subspace::is_subspace(&self.u_minus, &self.e_minus, n), "U₋ ⊆ E₋"),
            (subspace::is_subspace(&self.u_mid, &self.e_mid, n), "U_mid ⊆ E_mid"),
            (subspace::is_subspace(&self.e_minus, &self.e_mid, n), "E₋ ⊆ E_mid"),
            (is_quaternionic(&self.e_minus, self.k), "E₋ quaternionic"),
            (is_quaternionic(&self.e_mid, self.k), "E_mid quaternionic"),
        ];
        for (ok, what) in checks {
            if !ok {
                return Err(Error::internal(format!("filtration invariant fails: {what}")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self, with_bases: bool) -> Value {
        let mut v = json!({ "dims": self.dims() });
        if with_bases {
            let q = |b: &[Vec<Rational>]| -> Vec<Vec<Quaternion>> { b.iter().map(|x| from_real(x)).collect() };
            v["bases"] = json!({
                "E_minus": q(&self.e_minus),
                "U_minus": q(&self.u_minus),
                "E_mid": q(&self.e_mid),
                "U_mid": q(&self.u_mid),
            });
        }
        v
    }
}

fn units() -> [Quaternion; 3] {
    [Quaternion::unit_i(), Quaternion::unit_j(), Quaternion::unit_k()]
}

/// Smallest quaternionic subspace containing the vectors.
pub fn quaternionic_span(vectors: &[Vec<Rational>], k: usize) -> Vec<Vec<Rational>> {
    let mut all = vectors.to_vec();
    for u in units() {
        let m = block_left_mult(k, &u);
        all.extend(vectors.iter().map(|v| m.mul_vec(v)));
    }
    subspace::span(&all, 4 * k)
}

pub fn is_quaternionic(basis: &[Vec<Rational>], k: usize) -> bool {
    quaternionic_span(basis, k).len() == subspace::span(basis, 4 * k).len()
}

/// Sample points `0, 1, −1, 2, −2, …` followed by their antipodes.
fn sample_zetas() -> impl Iterator<Item = Zeta> {
    (0..).flat_map(|n: i64| {
        let base = if n == 0 { vec![Zeta::int(0)] } else { vec![Zeta::int(n), Zeta::int(-n)] };
        let anti: Vec<Zeta> = base.iter().map(Zeta::antipode).collect();
        base.into_iter().chain(anti)
    })
}

/// `E₋`: the quaternionic span of the real and imaginary parts of the fiber
/// kernels at points of generic rank, grown until three consecutive points
/// add nothing and at least `2k + 1` points were used.
pub fn cr_part(p: &Pair, expected_dim: usize) -> Result<Vec<Vec<Rational>>> {
    let k = p.k();
    if expected_dim == 0 {
        return Ok(Vec::new());
    }
    let pencil = Pencil::build(p);
    let r = generic_rank(&pencil);
    let (v, w) = eigensections(k, Convention::Standard);
    let mut span: Vec<Vec<Rational>> = Vec::new();
    let (mut used, mut stale) = (0, 0);
    for zeta in sample_zetas().take(8 * k + 40) {
        let x = CP1Point::from_zeta(&zeta);
        if pencil.rank_at(&x) != r {
            continue;
        }
        let sigma = v.scale(x.z0()).add(&w.scale(x.z1()));
        let kernel = if pencil.m() == 0 {
            (0..2 * k).map(|i| subspace::unit(2 * k, i)).collect()
        } else {
            pencil.evaluate(&x).kernel_basis()
        };
        let mut new: Vec<Vec<Rational>> = span.clone();
        for c in &kernel {
            let s = sigma.mul_vec(c);
            new.push(s.iter().map(|z| z.re.clone()).collect());
            new.push(s.iter().map(|z| z.im.clone()).collect());
        }
        let grown = quaternionic_span(&new, k);
        used += 1;
        if grown.len() > span.len() {
            span = grown;
            stale = 0;
        } else {
            stale += 1;
        }
        if stale >= 3 && used > 2 * k {
            break;
        }
    }
    if span.len() != 4 * expected_dim {
        return Err(Error::internal(format!(
            "fiber kernels span a quaternionic subspace of dimension {}, expected {expected_dim}",
            span.len() / 4
        )));
    }
    Ok(span)
}

/// `E_mid` by saturation: starting from `E₋`, repeatedly adjoin the
/// quaternionic span of `(U+G) ∩ q·(U+G)` for each support point `q`.
fn saturate(p: &Pair, e_minus: &[Vec<Rational>], points: &[SpherePoint]) -> Result<Vec<Vec<Rational>>> {
    let k = p.k();
    let n = 4 * k;
    let mut g = e_minus.to_vec();
    for _ in 0..=4 * k {
        let mut next = g.clone();
        for q in points {
            let sum = subspace::sum(p.real_basis(), &next, n);
            let moved = subspace::image(&block_left_mult(k, q.quaternion()), &sum);
            let cap = subspace::intersection(&sum, &moved, n);
            next = quaternionic_span(&subspace::sum(&next, &cap, n), k);
        }
        if next.len() == g.len() {
            return Ok(g);
        }
        g = next;
    }
    Err(Error::internal(format!("torsion saturation did not stabilize within {} steps", 4 * k)))
}

/// The canonical filtration. `E_mid` is computed as the annihilator of the
/// dual pair's `E₋`; when every torsion support point is rational it is also
/// computed by saturation and the two must agree.
pub fn canonical_filtration(c: &Classification) -> Result<Filtration> {
    let p = &c.pair;
    let k = p.k();
    let n = 4 * k;
    let predicted = FiltrationDims::predicted(&c.factors);
    let e_minus = cr_part(p, predicted.e_minus)?;
    let dual_predicted = FiltrationDims::predicted(&dual_signature(&c.factors));
    let dual_cr = cr_part(&p.dual(), k - predicted.e_mid)?;
    debug_assert_eq!(dual_predicted.e_minus, k - predicted.e_mid);
    let e_mid = if dual_cr.is_empty() {
        (0..n).map(|i| subspace::unit(n, i)).collect()
    } else {
        subspace::annihilator(&dual_cr, n)
    };

    let mut points = Vec::new();
    let mut rational = true;
    for t in &c.sheaf.torsion {
        match rational_support_points(&t.support_form)? {
            Some(pts) => points.extend(pts),
            None => rational = false,
        }
    }
    let saturation_checked = rational;
    if rational {
        let sat = saturate(p, &e_minus, &points)?;
        if sat != e_mid {
            return Err(Error::internal(format!(
                "torsion saturation gives dimension {} but the dual construction gives {}",
                sat.len() / 4,
                e_mid.len() / 4
            )));
        }
    }
    let f = Filtration {
        k,
        u_minus: subspace::intersection(p.real_basis(), &e_minus, n),
        u_mid: subspace::intersection(p.real_basis(), &e_mid, n),
        e_minus,
        e_mid,
        saturation_checked,
    };
    f.verify(p)?;
    if f.dims() != predicted {
        return Err(Error::internal(format!("filtration dims {:?} differ from prediction {:?}", f.dims(), predicted)));
    }
    Ok(f)
}

/// Full classification report.
pub fn report(c: &Classification, filtration: Option<&Filtration>, with_bases: bool) -> Value {
    let mut v = json!({
        "format_version": FORMAT_VERSION,
        "input": c.pair,
        "sheaf": c.sheaf,
        "factors": c.factors.to_json(),
        "augmented": is_augmented(&c.factors),
        "strengthened": is_strengthened(&c.factors),
        "orientation_anchor": ORIENTATION_ANCHOR,
    });
    if let Some(f) = filtration {
        v["filtration"] = f.to_json(with_bases);
    }
    v
}

impl TorsionOrbit {
    /// The orbit as `W` factors, one list entry per copy.
    pub fn factors(&self) -> Vec<Factor> {
        self.partition
            .iter()
            .flat_map(|&k| std::iter::repeat_n(Factor::w(k, self.support_form.clone()), self.pairs()))
            .collect()
    }
}

/// Rotation data applied to a pair by an automorphism with scalar `a`.
pub fn transport(f: &FactorSignature, rotation: &Rotation) -> FactorSignature {
    f.rotated(rotation.quaternion())
}
