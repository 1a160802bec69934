use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::smith_form;
use crate::exact::{
    coprime_basis, subspace, BinaryForm, GaussianRational as G, Matrix, MatrixG, PolyMatrix, Quaternion, Rational,
};
use crate::pairs::{sphere_point_from_zeta, Rotation, Zeta};
use crate::pencil::{CP1Point, Pencil};

/// A σ-orbit of torsion: the support form vanishes on the orbit's
/// antipodal point pairs, and `partition` lists the local lengths.
#[derive(Clone, Serialize, Deserialize)]
pub struct TorsionOrbit {
    pub support_form: BinaryForm,
    pub partition: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numeric_support: Option<Vec<[f64; 3]>>,
}

impl TorsionOrbit {
    pub fn new(support_form: BinaryForm, partition: Vec<usize>) -> Self {
        TorsionOrbit { support_form: support_form.normalized(), partition, numeric_support: None }
    }

    pub fn length(&self) -> usize {
        self.support_form.degree() * self.partition.iter().sum::<usize>()
    }

    /// Number of antipodal point pairs in the support.
    pub fn pairs(&self) -> usize {
        self.support_form.degree() / 2
    }

    pub fn with_numeric_support(mut self) -> Result<Self> {
        let roots = self.support_form.numeric_roots()?;
        self.numeric_support = Some(roots.into_iter().map(zeta_to_sphere_f64).collect());
        Ok(self)
    }

    /// The orbit of `aUA` when `self` belongs to `U`.
    pub fn rotated(&self, a: &Quaternion) -> Self {
        TorsionOrbit::new(self.support_form.substitute(&a.conj().su2()), self.partition.clone())
    }
}

impl PartialEq for TorsionOrbit {
    fn eq(&self, other: &Self) -> bool {
        self.support_form == other.support_form && self.partition == other.partition
    }
}

impl Eq for TorsionOrbit {}

impl fmt::Debug for TorsionOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Torsion({:?}, {:?})", self.support_form, self.partition)
    }
}

pub fn zeta_to_sphere_f64(z: Option<Complex64>) -> [f64; 3] {
    match z {
        None => [-1.0, 0.0, 0.0],
        Some(z) => {
            let n = z.norm_sqr();
            let d = 1.0 + n;
            [(1.0 - n) / d, 2.0 * z.re / d, 2.0 * z.im / d]
        }
    }
}

/// Splitting data of the kernel and cokernel sheaves.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SheafSignature {
    pub kernel_degrees: Vec<i64>,
    pub cokernel_degrees: Vec<i64>,
    pub torsion: Vec<TorsionOrbit>,
}

impl SheafSignature {
    pub fn new(mut kernel_degrees: Vec<i64>, mut cokernel_degrees: Vec<i64>, mut torsion: Vec<TorsionOrbit>) -> Self {
        kernel_degrees.sort_unstable();
        cokernel_degrees.sort_unstable();
        torsion.sort_by(|a, b| a.support_form.cmp(&b.support_form).then_with(|| a.partition.cmp(&b.partition)));
        SheafSignature { kernel_degrees, cokernel_degrees, torsion }
    }

    pub fn torsion_length(&self) -> usize {
        self.torsion.iter().map(TorsionOrbit::length).sum()
    }

    /// `2k` from the degree identity.
    pub fn total_degree(&self) -> i64 {
        self.cokernel_degrees.iter().sum::<i64>() + self.torsion_length() as i64
            - self.kernel_degrees.iter().sum::<i64>()
    }

    pub fn rotated(&self, a: &Quaternion) -> Self {
        Self::new(
            self.kernel_degrees.clone(),
            self.cokernel_degrees.clone(),
            self.torsion.iter().map(|t| t.rotated(a)).collect(),
        )
    }

    /// Checks the structural identities for a pair with the given `k` and
    /// `dim_ℝ U`.
    pub fn verify(&self, k: usize, dim_u: usize) -> Result<()> {
        let fail = |msg: String| Err(Error::internal(msg));
        let rank = self.cokernel_degrees.len() as i64 - self.kernel_degrees.len() as i64;
        if rank != 2 * k as i64 - dim_u as i64 {
            return fail(format!("rank identity fails: {rank} ≠ 2·{k} − {dim_u}"));
        }
        if self.total_degree() != 2 * k as i64 {
            return fail(format!("degree identity fails: total {} ≠ {}", self.total_degree(), 2 * k));
        }
        if self.kernel_degrees.iter().any(|&d| d >= 0) || self.cokernel_degrees.iter().any(|&d| d <= 0) {
            return fail("trivial or wrongly signed summand".into());
        }
        for degrees in [&self.kernel_degrees, &self.cokernel_degrees] {
            for &d in degrees.iter() {
                if d % 2 != 0 && degrees.iter().filter(|&&e| e == d).count() % 2 != 0 {
                    return fail(format!("odd degree {d} has odd multiplicity"));
                }
            }
        }
        for t in &self.torsion {
            let f = &t.support_form;
            if f.degree() == 0 || f.degree() % 2 != 0 {
                return fail(format!("torsion support {f} has odd degree"));
            }
            if f.sigma_twist().normalized() != f.normalized() {
                return fail(format!("torsion support {f} is not antipodally symmetric"));
            }
            if t.partition.is_empty() || t.partition.contains(&0) || t.partition.windows(2).any(|w| w[0] < w[1]) {
                return fail(format!("bad torsion partition {:?}", t.partition));
            }
        }
        Ok(())
    }
}

/// `dim H⁰` of the kernel sheaf twisted by `O(d)`: the nullity of
/// multiplication by `z0·A + z1·B` from degree-`(d−1)` vectors in `ℂ^{2k}`
/// to degree-`d` vectors in `ℂ^m`.
pub fn graded_nullity(p: &Pencil, d: usize) -> usize {
    toeplitz_nullity(p.a(), p.b(), d)
}

fn toeplitz_nullity(a: &MatrixG, b: &MatrixG, d: usize) -> usize {
    let (m, n) = (a.rows(), a.cols());
    if d == 0 {
        return 0;
    }
    if m == 0 {
        return n * d;
    }
    let mut t = Matrix::zeros(m * (d + 1), n * d);
    for s in 0..d {
        for r in 0..m {
            for c in 0..n {
                t[(s * m + r, s * n + c)] = a[(r, c)].clone();
                t[((s + 1) * m + r, s * n + c)] = b[(r, c)].clone();
            }
        }
    }
    n * d - t.rank()
}

fn kernel(m: &MatrixG) -> Vec<Vec<G>> {
    if m.rows() == 0 {
        return (0..m.cols()).map(|i| subspace::unit(m.cols(), i)).collect();
    }
    m.kernel_basis()
}

/// The exponents `a_i` of the kernel sheaf `⊕ O(−a_i)` of `A + tB` viewed
/// on `O(−1)^n`, via the Wong sequence `X₀ = ker A`, `X_t = A⁻¹(B·X_{t−1})`:
/// `#{a_i ≤ d} = dim(X_{d−1} ∩ ker B)`.
fn kernel_exponents(a: &MatrixG, b: &MatrixG, rank: usize) -> Result<Vec<usize>> {
    let n = a.cols();
    let target = n - rank;
    if target == 0 {
        return Ok(Vec::new());
    }
    if a.rows() == 0 {
        return Ok(vec![1; n]);
    }
    let ker_b = kernel(b);
    let mut x = kernel(a);
    let mut out = Vec::new();
    let mut prev = 0;
    for d in 1..=n + 1 {
        let delta = subspace::intersection(&x, &ker_b, n).len();
        if delta < prev {
            return Err(Error::internal("kernel nullity profile decreased"));
        }
        out.extend(std::iter::repeat_n(d, delta - prev));
        prev = delta;
        if delta == target {
            return Ok(out);
        }
        x = subspace::preimage(a, &subspace::image(b, &x));
    }
    Err(Error::internal(format!("kernel profile did not reach rank {target} by degree {}", n + 1)))
}

fn generic_rank_of(a: &MatrixG, b: &MatrixG) -> usize {
    if a.rows() == 0 || a.cols() == 0 {
        return 0;
    }
    // drops happen on the zeros of a form of degree ≤ min(rows, cols), and
    // 0, 1, …, N are pairwise distinct and non-antipodal
    let bound = a.rows().min(a.cols());
    let mut best = 0;
    for z in 0..=bound as i64 {
        best = best.max(a.add(&b.scale(&G::from_int(z))).rank());
        if best == bound {
            break;
        }
    }
    best
}

pub fn generic_rank(p: &Pencil) -> usize {
    generic_rank_of(p.a(), p.b())
}

/// The kernel sheaf degrees `{−a_i}`.
pub fn kernel_splitting(p: &Pencil) -> Result<Vec<i64>> {
    kernel_splitting_at_rank(p, generic_rank(p))
}

fn kernel_splitting_at_rank(p: &Pencil, r: usize) -> Result<Vec<i64>> {
    let exps = kernel_exponents(p.a(), p.b(), r)?;
    if exps.iter().sum::<usize>() > 2 * p.k() {
        return Err(Error::internal("kernel degrees exceed the degree bound"));
    }
    Ok(exps.into_iter().map(|a| -(a as i64)).collect())
}

/// Degrees of the free part of the cokernel, from the transposed pencil.
pub fn cokernel_free_splitting(p: &Pencil) -> Result<Vec<i64>> {
    cokernel_splitting_at_rank(p, generic_rank(p))
}

fn cokernel_splitting_at_rank(p: &Pencil, r: usize) -> Result<Vec<i64>> {
    if p.m() == 0 {
        return Ok(Vec::new());
    }
    let (at, bt) = p.transpose();
    let exps = kernel_exponents(&at, &bt, r)?;
    if exps.contains(&1) {
        return Err(Error::internal("cokernel has a trivial summand"));
    }
    Ok(exps.into_iter().map(|b| b as i64 - 1).collect())
}

/// Rotates until `[0:1]` is a point of generic rank.
pub fn rotate_generic(p: &Pencil) -> Result<(Pencil, Rotation)> {
    rotate_generic_at_rank(p, generic_rank(p))
}

fn rotate_generic_at_rank(p: &Pencil, r: usize) -> Result<(Pencil, Rotation)> {
    let inf = CP1Point::from_zeta(&Zeta::Infinity);
    for n in 0..=(2 * p.k() as u32 + 1) {
        let g = Rotation::attempt(n);
        let rotated = p.rotate(g.quaternion());
        if rotated.rank_at(&inf) == r {
            return Ok((rotated, g));
        }
    }
    Err(Error::internal("no rotation in the attempt list makes infinity generic"))
}

/// Invariant factors of the pencil as forms, nonconstant ones only, in the
/// original coordinates and divisibility order.
pub fn invariant_factor_forms(p: &Pencil) -> Result<Vec<BinaryForm>> {
    invariant_factors_at_rank(p, generic_rank(p))
}

fn invariant_factors_at_rank(p: &Pencil, r: usize) -> Result<Vec<BinaryForm>> {
    if r == 0 {
        return Ok(Vec::new());
    }
    let (rotated, g) = rotate_generic_at_rank(p, r)?;
    let (a, b) = regular_part(rotated.a(), rotated.b())?;
    if a.rows() == 0 {
        return Ok(Vec::new());
    }
    let binv = b.inverse().ok_or_else(|| Error::internal("regular part has a singular leading matrix"))?;
    let n = a.rows();
    let factors = smith_form(&PolyMatrix::linear(&binv.mul(&a), &Matrix::identity(n)));
    let back = g.quaternion().su2();
    Ok(factors
        .iter()
        .filter(|f| !f.is_constant())
        .map(|f| BinaryForm::homogenize(f, 0).substitute(&back).normalized())
        .collect())
}

fn remove(m: &MatrixG, row: Option<usize>, col: Option<usize>) -> MatrixG {
    let rows: Vec<usize> = (0..m.rows()).filter(|&r| Some(r) != row).collect();
    let cols: Vec<usize> = (0..m.cols()).filter(|&c| Some(c) != col).collect();
    m.submatrix(&rows, &cols)
}

/// One deflation step on rows: brings `B` to echelon form by constant row
/// operations, then removes a row whose `B` part vanished, using it as a
/// unit pivot if it is nonzero. Returns `None` if no such row exists.
fn deflate_rows(a: &MatrixG, b: &MatrixG) -> Option<(MatrixG, MatrixG)> {
    let (m, n) = (a.rows(), a.cols());
    let (reduced, pivots) = b.hstack(&Matrix::identity(m)).rref();
    if pivots.iter().filter(|&&c| c < n).count() == m {
        return None;
    }
    let s = reduced.submatrix(&(0..m).collect::<Vec<_>>(), &(n..n + m).collect::<Vec<_>>());
    let (a, b) = (s.mul(a), s.mul(b));
    let p = (0..m).find(|&r| (0..n).all(|c| b[(r, c)].is_zero())).expect("B has a zero row");
    let Some(c) = (0..n).find(|&c| !a[(p, c)].is_zero()) else {
        return Some((remove(&a, Some(p), None), remove(&b, Some(p), None)));
    };
    // clear column c with the constant row p, then drop row p and column c
    let inv = a[(p, c)].inv().expect("nonzero");
    let (mut a2, mut b2) = (a.clone(), b.clone());
    for r in (0..m).filter(|&r| r != p) {
        let (alpha, beta) = (&a[(r, c)] * &inv, &b[(r, c)] * &inv);
        for j in 0..n {
            let x = &a[(p, j)];
            if x.is_zero() {
                continue;
            }
            a2[(r, j)] = &a2[(r, j)] - &(&alpha * x);
            b2[(r, j)] = &b2[(r, j)] - &(&beta * x);
        }
    }
    Some((remove(&a2, Some(p), Some(c)), remove(&b2, Some(p), Some(c))))
}

/// Strips `A + tB` down to a square pencil with the same nonconstant
/// invariant factors by unimodular operations with constant pivots. When
/// `B` has full generic rank the result has invertible `B`.
pub fn regular_part(a: &MatrixG, b: &MatrixG) -> Result<(MatrixG, MatrixG)> {
    let (mut a, mut b) = (a.clone(), b.clone());
    loop {
        if a.rows() == 0 || a.cols() == 0 {
            return Ok((Matrix::zeros(0, 0), Matrix::zeros(0, 0)));
        }
        if let Some((a2, b2)) = deflate_rows(&a, &b) {
            (a, b) = (a2, b2);
            continue;
        }
        if let Some((a2, b2)) = deflate_rows(&a.transpose(), &b.transpose()) {
            (a, b) = (a2.transpose(), b2.transpose());
            continue;
        }
        break;
    }
    if a.rows() != a.cols() {
        return Err(Error::internal("deflated pencil is not square"));
    }
    Ok((a, b))
}

/// Splits off every linear factor with a root in `ℚ(i) ∪ {∞}`.
pub fn split_rational_roots(f: &BinaryForm) -> Result<Vec<BinaryForm>> {
    let mut rest = f.normalized();
    let mut out = Vec::new();
    if rest.coeffs().last().is_some_and(G::is_zero) {
        out.push(BinaryForm::z0());
        rest = rest.div_exact(&BinaryForm::z0()).expect("z0 divides").normalized();
    }
    if rest.degree() > 0 {
        for root in rest.numeric_roots()?.into_iter().flatten() {
            let cands = [1_000, 1_000_000].into_iter().filter_map(|den| {
                Some(G::new(Rational::approximate(root.re, den)?, Rational::approximate(root.im, den)?))
            });
            for z in cands {
                let lin = BinaryForm::linear(-&z, G::one());
                if rest.degree() > 0 && rest.eval(&G::one(), &z).is_zero() {
                    out.push(lin.normalized());
                    rest = rest.div_exact(&lin).expect("root divides").normalized();
                    break;
                }
            }
        }
    }
    if rest.degree() == 2 {
        // c0 + c1 t + c2 t² with exact roots when the discriminant is a square
        let c = rest.coeffs();
        let disc = &(&c[1] * &c[1]) - &(&G::from_int(4) * &(&c[0] * &c[2]));
        if let Some(s) = disc.sqrt_exact() {
            let inv = (&G::from_int(2) * &c[2]).inv().expect("degree 2");
            for sign in [G::one(), -G::one()] {
                let z = &(&(-&c[1]) + &(&sign * &s)) * &inv;
                out.push(BinaryForm::linear(-&z, G::one()).normalized());
            }
            rest = BinaryForm::one();
        }
    }
    if rest.degree() > 0 {
        out.push(rest);
    }
    Ok(out)
}

/// Torsion σ-orbits with their partitions.
pub fn torsion_invariants(p: &Pencil) -> Result<Vec<TorsionOrbit>> {
    torsion_at_rank(p, generic_rank(p))
}

fn torsion_at_rank(p: &Pencil, r: usize) -> Result<Vec<TorsionOrbit>> {
    let factors = invariant_factors_at_rank(p, r)?;
    if factors.is_empty() {
        return Ok(Vec::new());
    }
    let mut pieces = Vec::new();
    for b in coprime_basis(&factors) {
        pieces.extend(split_rational_roots(&b)?);
    }
    let basis = coprime_basis(&pieces);
    let partition_of = |b: &BinaryForm| -> Vec<usize> {
        factors.iter().rev().map(|f| b.multiplicity_in(f)).filter(|&e| e > 0).collect()
    };
    let mut used = vec![false; basis.len()];
    let mut orbits = Vec::new();
    for i in 0..basis.len() {
        if used[i] {
            continue;
        }
        let b = &basis[i];
        let partner = b.sigma_twist().normalized();
        let j = basis
            .iter()
            .position(|c| *c == partner)
            .ok_or_else(|| Error::internal(format!("torsion support {b} has no antipodal partner")))?;
        let partition = partition_of(b);
        if partition_of(&basis[j]) != partition {
            return Err(Error::internal(format!("torsion at {b} and its antipode have different lengths")));
        }
        used[i] = true;
        used[j] = true;
        let support = if i == j { b.clone() } else { b.mul(&basis[j]) };
        orbits.push(TorsionOrbit::new(support, partition).with_numeric_support()?);
    }
    Ok(orbits)
}

pub fn sheaf_signature(p: &Pencil) -> Result<SheafSignature> {
    let r = generic_rank(p);
    let sig =
        SheafSignature::new(kernel_splitting_at_rank(p, r)?, cokernel_splitting_at_rank(p, r)?, torsion_at_rank(p, r)?);
    sig.verify(p.k(), 4 * p.k() - p.m())?;
    Ok(sig)
}

/// Rank drop points among the given sample points; used by oracles.
pub fn drop_points(p: &Pencil, samples: &[Zeta]) -> Vec<Zeta> {
    let r = generic_rank(p);
    samples.iter().filter(|z| p.rank_at(&CP1Point::from_zeta(z)) < r).cloned().collect()
}

/// Sphere point of a rational root `ζ`, for reporting.
pub fn support_point(z: &Zeta) -> [f64; 3] {
    sphere_point_from_zeta(z).to_f64()
}
