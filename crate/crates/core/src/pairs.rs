use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{subspace, GaussianRational as G, Matrix, MatrixQ, Quaternion, Rational};

/// A point of `ℂP¹ = ℂ ∪ {∞}` in the affine coordinate `ζ = z₁/z₀`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Zeta {
    Finite(G),
    Infinity,
}

impl Zeta {
    pub fn int(n: i64) -> Self {
        Zeta::Finite(G::from_int(n))
    }

    /// `ζ ↦ −1/ζ̄`.
    pub fn antipode(&self) -> Zeta {
        match self {
            Zeta::Infinity => Zeta::Finite(G::zero()),
            Zeta::Finite(z) if z.is_zero() => Zeta::Infinity,
            Zeta::Finite(z) => Zeta::Finite(-(z.conj().inv().expect("nonzero"))),
        }
    }
}

impl fmt::Display for Zeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Zeta::Finite(z) => write!(f, "{z}"),
            Zeta::Infinity => write!(f, "inf"),
        }
    }
}

/// A unit imaginary quaternion, i.e. an admissible complex structure `L_u`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Quaternion", into = "Quaternion")]
pub struct SpherePoint {
    u: Quaternion,
}

impl SpherePoint {
    pub fn new(u: Quaternion) -> Result<Self> {
        if !u.r.is_zero() || !u.norm().is_one() {
            return Err(Error::invalid(format!("{u} is not a unit imaginary quaternion")));
        }
        Ok(SpherePoint { u })
    }

    pub fn i() -> Self {
        SpherePoint { u: Quaternion::unit_i() }
    }

    pub fn j() -> Self {
        SpherePoint { u: Quaternion::unit_j() }
    }

    pub fn k() -> Self {
        SpherePoint { u: Quaternion::unit_k() }
    }

    pub fn quaternion(&self) -> &Quaternion {
        &self.u
    }

    pub fn antipode(&self) -> Self {
        SpherePoint { u: -&self.u }
    }

    /// Inverse stereographic coordinate; see [`sphere_point_from_zeta`].
    pub fn zeta(&self) -> Zeta {
        let denom = &Rational::one() + &self.u.i;
        if denom.is_zero() {
            return Zeta::Infinity;
        }
        Zeta::Finite(G::new(&self.u.j / &denom, &self.u.k / &denom))
    }

    pub fn rotate(&self, g: &Quaternion) -> Self {
        SpherePoint { u: self.u.conjugate_by(g).expect("nonzero rotation quaternion") }
    }

    /// The representative of `{u, −u}` whose first nonzero imaginary
    /// coordinate is positive.
    pub fn canonical_pair_representative(&self) -> Self {
        let first = [&self.u.i, &self.u.j, &self.u.k].into_iter().find(|c| !c.is_zero()).expect("unit");
        if first.is_negative() {
            self.antipode()
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [self.u.i.to_f64(), self.u.j.to_f64(), self.u.k.to_f64()]
    }
}

impl TryFrom<Quaternion> for SpherePoint {
    type Error = Error;
    fn try_from(u: Quaternion) -> Result<Self> {
        SpherePoint::new(u)
    }
}

impl From<SpherePoint> for Quaternion {
    fn from(p: SpherePoint) -> Quaternion {
        p.u
    }
}

impl fmt::Debug for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.u)
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.u)
    }
}

/// `ζ = x + Iy ↦ ((1−x²−y²)·i + 2x·j + 2y·k)/(1+x²+y²)`, and `∞ ↦ −i`.
pub fn sphere_point_from_zeta(zeta: &Zeta) -> SpherePoint {
    match zeta {
        Zeta::Infinity => SpherePoint { u: -&Quaternion::unit_i() },
        Zeta::Finite(z) => {
            let n = z.norm_sqr();
            let denom = &Rational::one() + &n;
            let two = Rational::from_int(2);
            let u = Quaternion::new(
                Rational::zero(),
                &(&Rational::one() - &n) / &denom,
                &(&two * &z.re) / &denom,
                &(&two * &z.im) / &denom,
            );
            SpherePoint { u }
        }
    }
}

/// A rotation `u ↦ g·u·g⁻¹` of the sphere, `g` a unit quaternion.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "Quaternion", into = "Quaternion")]
pub struct Rotation {
    g: Quaternion,
}

impl Rotation {
    pub fn new(g: Quaternion) -> Result<Self> {
        if !g.norm().is_one() {
            return Err(Error::invalid(format!("rotation quaternion {g} does not have norm 1")));
        }
        Ok(Rotation { g })
    }

    pub fn identity() -> Self {
        Rotation { g: Quaternion::one() }
    }

    pub fn quaternion(&self) -> &Quaternion {
        &self.g
    }

    pub fn inverse(&self) -> Self {
        Rotation { g: self.g.conj() }
    }

    pub fn is_identity(&self) -> bool {
        self.g == Quaternion::one() || self.g == -&Quaternion::one()
    }

    /// The `n`-th entry of the fixed attempt list used to move rank drops
    /// away from `ζ = ∞`: the identity, then `((n²−1) + 2n·j)/(n²+1)`,
    /// which sends `∞` to `ζ = −I(n²−1)/(2n)`.
    pub fn attempt(n: u32) -> Self {
        if n == 0 {
            return Self::identity();
        }
        let n = i64::from(n);
        let d = n * n + 1;
        Rotation {
            g: Quaternion::new(
                Rational::new(n * n - 1, d),
                Rational::zero(),
                Rational::new(2 * n, d),
                Rational::zero(),
            ),
        }
    }
}

impl TryFrom<Quaternion> for Rotation {
    type Error = Error;
    fn try_from(g: Quaternion) -> Result<Self> {
        Rotation::new(g)
    }
}

impl From<Rotation> for Quaternion {
    fn from(r: Rotation) -> Quaternion {
        r.g
    }
}

/// `(a, A)` acting by `U ↦ {a·u·A}`; `a` a unit quaternion and `A` an
/// invertible `k×k` quaternion matrix acting on row vectors from the right.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Automorphism {
    a: Quaternion,
    matrix: Vec<Vec<Quaternion>>,
}

impl Automorphism {
    pub fn new(a: Quaternion, matrix: Vec<Vec<Quaternion>>) -> Result<Self> {
        if !a.norm().is_one() {
            return Err(Error::invalid(format!("automorphism scalar {a} does not have norm 1")));
        }
        let k = matrix.len();
        if matrix.iter().any(|row| row.len() != k) {
            return Err(Error::invalid("automorphism matrix must be square"));
        }
        let aut = Automorphism { a, matrix };
        if aut.real_matrix().rank() != 4 * k {
            return Err(Error::NotInvertible);
        }
        Ok(aut)
    }

    pub fn identity(k: usize) -> Self {
        Self::rotation(k, Quaternion::one()).expect("identity is valid")
    }

    /// `(a, identity)`.
    pub fn rotation(k: usize, a: Quaternion) -> Result<Self> {
        let matrix = (0..k)
            .map(|r| (0..k).map(|c| if r == c { Quaternion::one() } else { Quaternion::zero() }).collect())
            .collect();
        Self::new(a, matrix)
    }

    pub fn k(&self) -> usize {
        self.matrix.len()
    }

    pub fn scalar(&self) -> &Quaternion {
        &self.a
    }

    pub fn matrix(&self) -> &[Vec<Quaternion>] {
        &self.matrix
    }

    pub fn apply(&self, v: &[Quaternion]) -> Vec<Quaternion> {
        let k = self.k();
        (0..k)
            .map(|c| {
                let mut acc = Quaternion::zero();
                for (r, x) in v.iter().enumerate() {
                    acc = &acc + &(x * &self.matrix[r][c]);
                }
                &self.a * &acc
            })
            .collect()
    }

    /// Real `4k×4k` matrix of `v ↦ a·v·A` on coordinate columns.
    pub fn real_matrix(&self) -> MatrixQ {
        let k = self.k();
        let mut cols = Vec::with_capacity(4 * k);
        for s in 0..k {
            for unit in [Quaternion::one(), Quaternion::unit_i(), Quaternion::unit_j(), Quaternion::unit_k()] {
                let mut v = vec![Quaternion::zero(); k];
                v[s] = unit;
                cols.push(to_real(&self.apply(&v)));
            }
        }
        Matrix::from_cols(&cols, 4 * k)
    }
}

/// Scalars used by [`random_automorphism`].
pub fn automorphism_scalars() -> Vec<Quaternion> {
    let q = |r, i, j, k, d| {
        Quaternion::new(Rational::new(r, d), Rational::new(i, d), Rational::new(j, d), Rational::new(k, d))
    };
    vec![q(1, 0, 0, 0, 1), q(1, 1, 1, 1, 2), q(3, 4, 0, 0, 5), q(0, 0, 3, 4, 5), q(1, -1, 1, -1, 2), q(2, 1, 2, 4, 5)]
}

/// Deterministic automorphism from a seed. The scalar `a` is drawn uniformly
/// from [`automorphism_scalars`]; `A = I + N` where each entry of `N` is,
/// independently with probability 1/3, a quaternion with integer
/// components in `[−2, 2]` divided by 1 or 2. Draws are repeated until `A`
/// is invertible.
pub fn random_automorphism(k: usize, seed: u64) -> Automorphism {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scalars = automorphism_scalars();
    let a = scalars[rng.gen_range(0..scalars.len())].clone();
    loop {
        let mut matrix = vec![vec![Quaternion::zero(); k]; k];
        for (r, row) in matrix.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                let mut x = if r == c { Quaternion::one() } else { Quaternion::zero() };
                if rng.gen_ratio(1, 3) {
                    let den = rng.gen_range(1..=2);
                    let mut comp = || Rational::new(rng.gen_range(-2..=2), den);
                    let p = Quaternion::new(comp(), comp(), comp(), comp());
                    x = &x + &p;
                }
                *entry = x;
            }
        }
        if let Ok(aut) = Automorphism::new(a.clone(), matrix) {
            return aut;
        }
    }
}

/// Real coordinates of a quaternion vector, slot by slot in `(1, i, j, k)`.
pub fn to_real(v: &[Quaternion]) -> Vec<Rational> {
    v.iter().flat_map(|q| q.coords()).collect()
}

pub fn from_real(v: &[Rational]) -> Vec<Quaternion> {
    v.chunks(4).map(Quaternion::from_coords).collect()
}

/// The real `4k×4k` matrix of componentwise left multiplication by `u`.
pub fn block_left_mult(k: usize, u: &Quaternion) -> MatrixQ {
    let block = u.left_mult_matrix();
    Matrix::block_diag(&vec![block; k])
}

/// A real subspace `U` of `ℍᵏ`, stored by a reduced-echelon basis of its
/// real coordinate vectors.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "PairRepr", into = "PairRepr")]
pub struct Pair {
    k: usize,
    basis: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
struct PairRepr {
    quaternionic_dimension: usize,
    subspace_basis: Vec<Vec<Quaternion>>,
}

impl TryFrom<PairRepr> for Pair {
    type Error = Error;
    fn try_from(r: PairRepr) -> Result<Self> {
        Pair::new(r.quaternionic_dimension, r.subspace_basis)
    }
}

impl From<Pair> for PairRepr {
    fn from(p: Pair) -> PairRepr {
        PairRepr { quaternionic_dimension: p.k, subspace_basis: p.quaternion_basis() }
    }
}

impl Pair {
    /// Checks that the vectors are ℝ-independent elements of `ℍᵏ` and
    /// normalizes the basis.
    pub fn new(k: usize, basis: Vec<Vec<Quaternion>>) -> Result<Self> {
        if basis.len() > 4 * k {
            return Err(Error::DimensionOverflow(format!(
                "{} vectors in a space of real dimension {}",
                basis.len(),
                4 * k
            )));
        }
        if let Some(v) = basis.iter().find(|v| v.len() != k) {
            return Err(Error::DimensionOverflow(format!("vector of length {} in ℍ^{k}", v.len())));
        }
        let real: Vec<Vec<Rational>> = basis.iter().map(|v| to_real(v)).collect();
        let reduced = subspace::span(&real, 4 * k);
        if reduced.len() != real.len() {
            return Err(Error::DependentBasis);
        }
        Ok(Pair { k, basis: reduced })
    }

    /// The pair spanned by arbitrary (possibly dependent) real vectors.
    pub fn from_real_span(k: usize, vectors: &[Vec<Rational>]) -> Self {
        Pair { k, basis: subspace::span(vectors, 4 * k) }
    }

    pub fn zero(k: usize) -> Self {
        Pair { k, basis: Vec::new() }
    }

    pub fn full(k: usize) -> Self {
        Pair { k, basis: (0..4 * k).map(|i| subspace::unit(4 * k, i)).collect() }
    }

    /// Re-normalizes; idempotent.
    pub fn validate(&self) -> Result<Pair> {
        Pair::new(self.k, self.quaternion_basis())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn real_basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn quaternion_basis(&self) -> Vec<Vec<Quaternion>> {
        self.basis.iter().map(|v| from_real(v)).collect()
    }

    /// The `dim U × 4k` matrix whose rows are the basis.
    pub fn real_matrix(&self) -> MatrixQ {
        Matrix::from_rows(self.basis.clone(), 4 * self.k)
    }

    /// `(U^⊥, ℍᵏ)` for the standard inner product on `ℝ^{4k}`, which
    /// realizes `(Ann U, E*)`.
    pub fn dual(&self) -> Pair {
        Pair { k: self.k, basis: subspace::annihilator(&self.basis, 4 * self.k) }
    }

    /// `U × g⁻¹·U′` inside `ℍ^{k+k′}`.
    pub fn product(&self, other: &Pair, rotation: &Rotation) -> Pair {
        let k = self.k + other.k;
        let ginv = rotation.quaternion().conj();
        let mut vectors = Vec::with_capacity(self.dim() + other.dim());
        for v in &self.basis {
            let mut w = v.clone();
            w.extend(std::iter::repeat_n(Rational::zero(), 4 * other.k));
            vectors.push(w);
        }
        for v in other.quaternion_basis() {
            let mut w = vec![Quaternion::zero(); self.k];
            w.extend(v.iter().map(|x| &ginv * x));
            vectors.push(to_real(&w));
        }
        Pair::from_real_span(k, &vectors)
    }

    pub fn product_many(pairs: &[Pair]) -> Pair {
        pairs.iter().fold(Pair::zero(0), |acc, p| acc.product(p, &Rotation::identity()))
    }

    pub fn act(&self, phi: &Automorphism) -> Result<Pair> {
        if phi.k() != self.k {
            return Err(Error::invalid(format!("automorphism of ℍ^{} applied to a pair in ℍ^{}", phi.k(), self.k)));
        }
        let vectors: Vec<Vec<Rational>> = self.quaternion_basis().iter().map(|v| to_real(&phi.apply(v))).collect();
        let out = Pair::from_real_span(self.k, &vectors);
        if out.dim() != self.dim() {
            return Err(Error::NotInvertible);
        }
        Ok(out)
    }

    /// Left multiplication of every component by `g`.
    pub fn left_multiply(&self, g: &Quaternion) -> Pair {
        let m = block_left_mult(self.k, g);
        Pair { k: self.k, basis: subspace::image(&m, &self.basis) }
    }

    /// `dim_ℝ (U ∩ J·U)`.
    pub fn intersection_dim(&self, j: &SpherePoint) -> usize {
        let ju = subspace::image(&block_left_mult(self.k, j.quaternion()), &self.basis);
        subspace::intersection(&self.basis, &ju, 4 * self.k).len()
    }

    pub fn contains_subspace(&self, other: &[Vec<Rational>]) -> bool {
        subspace::is_subspace(other, &self.basis, 4 * self.k)
    }

    /// `U` as a real subspace of `(ℍᵏ, J) ≅ ℂ^{2k}`, using per slot the
    /// complex basis `{1, w}` with `w` orthogonal to `1` and `u`.
    pub fn as_complex_pair(&self, j: &SpherePoint) -> ComplexPair {
        let u = j.quaternion();
        let w = [Quaternion::unit_i(), Quaternion::unit_j(), Quaternion::unit_k()]
            .into_iter()
            .map(|e| &e - &u.scale(&e.dot(u)))
            .find(|w| !w.is_zero())
            .expect("some axis is not parallel to u");
        let uw = u * &w;
        let wn = w.norm().recip().expect("nonzero");
        let basis = self
            .quaternion_basis()
            .iter()
            .map(|v| {
                v.iter()
                    .flat_map(|x| {
                        let alpha = G::new(x.dot(&Quaternion::one()), x.dot(u));
                        let beta = G::new(&x.dot(&w) * &wn, &x.dot(&uw) * &wn);
                        [alpha, beta]
                    })
                    .collect()
            })
            .collect();
        ComplexPair::new(2 * self.k, basis).expect("coordinate change is invertible")
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .quaternion_basis()
            .iter()
            .map(|v| format!("({})", v.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "U ⊆ ℍ^{} of dim {}: [{}]", self.k, self.dim(), rows.join(", "))
    }
}

/// `(U_k, ℍ^{k+1})`: `U_k = ℝ^{k+1} + ℝe₁ + … + ℝe_k` with
/// `e_j = (0,…,q_j,q_{j+1},…,0)`. Defaults to `ζ_j = j − 1`.
pub fn gen_u(k: usize, zetas: Option<&[Zeta]>) -> Result<Pair> {
    let default: Vec<Zeta> = (0..=k as i64).map(Zeta::int).collect();
    let zetas = zetas.unwrap_or(&default);
    if zetas.len() != k + 1 {
        return Err(Error::invalid(format!("gen_U({k}) needs {} parameters, got {}", k + 1, zetas.len())));
    }
    let points: Vec<SpherePoint> = zetas.iter().map(sphere_point_from_zeta).collect();
    for a in 0..points.len() {
        for b in a + 1..points.len() {
            if points[a] == points[b] || points[a] == points[b].antipode() {
                return Err(Error::invalid(format!(
                    "parameters {} and {} give equal or antipodal sphere points",
                    zetas[a], zetas[b]
                )));
            }
        }
    }
    let n = k + 1;
    let mut basis = Vec::with_capacity(2 * k + 1);
    for s in 0..n {
        let mut v = vec![Quaternion::zero(); n];
        v[s] = Quaternion::one();
        basis.push(v);
    }
    for j in 0..k {
        let mut v = vec![Quaternion::zero(); n];
        v[j] = points[j].quaternion().clone();
        v[j + 1] = points[j + 1].quaternion().clone();
        basis.push(v);
    }
    Pair::new(n, basis)
}

/// `(V_k, ℍ^{2k+1})`, the image of
/// `(z₁, z̄₁+z₂j, z₃−z̄₂j, …, z̄_{2k−1}+z_{2k}j, −z̄_{2k}j)`.
pub fn gen_v(k: usize) -> Pair {
    let n = 2 * k + 1;
    // complex z = x + y·i as a quaternion, and the products needed below
    let cplx = |x: i64, y: i64| Quaternion::from_ints(x, y, 0, 0);
    let mut basis = Vec::with_capacity(4 * k);
    for idx in 1..=2 * k {
        for (x, y) in [(1, 0), (0, 1)] {
            let z = cplx(x, y);
            let zbar = z.conj();
            let mut v = vec![Quaternion::zero(); n];
            if idx % 2 == 1 {
                // z_{2s+1} sits in slot 2s+1 and, conjugated, in slot 2s+2
                let slot = idx - 1;
                v[slot] = &v[slot] + &z;
                v[slot + 1] = &v[slot + 1] + &zbar;
            } else {
                // z_{2s}·j in slot 2s and −z̄_{2s}·j in slot 2s+1
                let slot = idx - 1;
                v[slot] = &v[slot] + &(&z * &Quaternion::unit_j());
                v[slot + 1] = &v[slot + 1] - &(&zbar * &Quaternion::unit_j());
            }
            basis.push(v);
        }
    }
    Pair::new(n, basis).expect("V_k basis is independent")
}

/// `(W_{k,q}, ℍᵏ)`, the image of
/// `(a₁+b₁q+b₂i, …, a_{k−1}+b_{k−1}q+b_k i, a_k+b_k q)`, with `i` replaced
/// by `j` when `q = ±i`.
pub fn gen_w(k: usize, q: &SpherePoint) -> Result<Pair> {
    if k == 0 {
        return Err(Error::invalid("W_{k,q} needs k ≥ 1"));
    }
    let i = Quaternion::unit_i();
    let aux = if *q.quaternion() == i || *q.quaternion() == -&i { Quaternion::unit_j() } else { i };
    let mut basis = Vec::with_capacity(2 * k);
    for s in 0..k {
        let mut a = vec![Quaternion::zero(); k];
        a[s] = Quaternion::one();
        basis.push(a);
        let mut b = vec![Quaternion::zero(); k];
        b[s] = q.quaternion().clone();
        if s > 0 {
            b[s - 1] = aux.clone();
        }
        basis.push(b);
    }
    Pair::new(k, basis)
}

/// A real subspace of `ℂⁿ`, stored by a reduced basis of real coordinates
/// `(re₁, im₁, …, reₙ, imₙ)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "ComplexPairRepr", into = "ComplexPairRepr")]
pub struct ComplexPair {
    n: usize,
    basis: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
struct ComplexPairRepr {
    complex_dimension: usize,
    subspace_basis: Vec<Vec<G>>,
}

impl TryFrom<ComplexPairRepr> for ComplexPair {
    type Error = Error;
    fn try_from(r: ComplexPairRepr) -> Result<Self> {
        ComplexPair::new(r.complex_dimension, r.subspace_basis)
    }
}

impl From<ComplexPair> for ComplexPairRepr {
    fn from(p: ComplexPair) -> Self {
        let basis = p.basis.iter().map(|v| v.chunks(2).map(|c| G::new(c[0].clone(), c[1].clone())).collect()).collect();
        ComplexPairRepr { complex_dimension: p.n, subspace_basis: basis }
    }
}

impl ComplexPair {
    pub fn new(n: usize, basis: Vec<Vec<G>>) -> Result<Self> {
        if basis.len() > 2 * n {
            return Err(Error::DimensionOverflow(format!("{} vectors in ℂ^{n}", basis.len())));
        }
        if basis.iter().any(|v| v.len() != n) {
            return Err(Error::DimensionOverflow(format!("vector length differs from {n}")));
        }
        let real: Vec<Vec<Rational>> =
            basis.iter().map(|v| v.iter().flat_map(|z| [z.re.clone(), z.im.clone()]).collect()).collect();
        let reduced = subspace::span(&real, 2 * n);
        if reduced.len() != real.len() {
            return Err(Error::DependentBasis);
        }
        Ok(ComplexPair { n, basis: reduced })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn real_basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    /// `(m, l, z)` with `U ≅ ℂ^m × ℝ^l × 0^z` inside `ℂⁿ`.
    pub fn complex_decompose(&self) -> (usize, usize, usize) {
        let dim = 2 * self.n;
        let iu: Vec<Vec<Rational>> =
            self.basis.iter().map(|v| v.chunks(2).flat_map(|c| [-&c[1], c[0].clone()]).collect()).collect();
        let cap = subspace::intersection(&self.basis, &iu, dim).len();
        let m = cap / 2;
        let l = self.dim() - 2 * m;
        (m, l, self.n - m - l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(r: i64, i: i64, j: i64, k: i64) -> Quaternion {
        Quaternion::from_ints(r, i, j, k)
    }

    #[test]
    fn validate_examples() {
        assert_eq!(Pair::new(1, vec![vec![q(1, 0, 0, 0)]]).unwrap().dim(), 1);
        assert!(matches!(Pair::new(1, vec![vec![q(1, 0, 0, 0)], vec![q(2, 0, 0, 0)]]), Err(Error::DependentBasis)));
        let p = Pair::new(2, vec![vec![q(1, 0, 0, 0), q(0, 0, 0, 0)], vec![q(0, 0, 0, 0), q(0, 0, 1, 0)]]).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.validate().unwrap(), p);
        assert!(matches!(Pair::new(1, vec![vec![q(1, 0, 0, 0), q(1, 0, 0, 0)]]), Err(Error::DimensionOverflow(_))));
    }

    #[test]
    fn zeta_parametrization() {
        assert_eq!(sphere_point_from_zeta(&Zeta::int(0)), SpherePoint::i());
        assert_eq!(sphere_point_from_zeta(&Zeta::Infinity), SpherePoint::i().antipode());
        assert_eq!(sphere_point_from_zeta(&Zeta::int(1)), SpherePoint::j());
        assert_eq!(sphere_point_from_zeta(&Zeta::Finite(G::unit_i())), SpherePoint::k());
        let z = Zeta::Finite(G::new(Rational::new(1, 2), Rational::new(1, 2)));
        let p = sphere_point_from_zeta(&z);
        assert_eq!(
            p.quaternion(),
            &Quaternion::new(Rational::zero(), Rational::new(1, 3), Rational::new(2, 3), Rational::new(2, 3))
        );
        assert_eq!(p.zeta(), z);
        assert_eq!(sphere_point_from_zeta(&z.antipode()), p.antipode());
    }

    #[test]
    fn dual_examples() {
        let r = gen_u(0, None).unwrap();
        let d = r.dual();
        let expected = Pair::new(1, vec![vec![q(0, 1, 0, 0)], vec![q(0, 0, 1, 0)], vec![q(0, 0, 0, 1)]]).unwrap();
        assert_eq!(d, expected);
        assert_eq!(Pair::zero(3).dual(), Pair::full(3));
        let u1 = gen_u(1, None).unwrap();
        assert_eq!(u1.dual().dual(), u1);
    }

    #[test]
    fn product_examples() {
        let r = gen_u(0, None).unwrap();
        let p = r.product(&Pair::zero(1), &Rotation::identity());
        assert_eq!(p, Pair::new(2, vec![vec![q(1, 0, 0, 0), q(0, 0, 0, 0)]]).unwrap());
        let w = gen_w(1, &SpherePoint::j()).unwrap();
        assert_eq!(gen_u(1, None).unwrap().product(&w, &Rotation::identity()).dim(), 5);
        let g = Quaternion::new(Rational::new(1, 2), Rational::new(1, 2), Rational::new(1, 2), Rational::new(1, 2));
        let p = r.product(&r, &Rotation::new(g.clone()).unwrap());
        let expected = Pair::new(2, vec![vec![q(1, 0, 0, 0), q(0, 0, 0, 0)], vec![q(0, 0, 0, 0), g.conj()]]).unwrap();
        assert_eq!(p, expected);
    }

    #[test]
    fn act_examples() {
        let r = gen_u(0, None).unwrap();
        assert_eq!(r.act(&Automorphism::identity(1)).unwrap(), r);
        let ri = r.act(&Automorphism::rotation(1, Quaternion::unit_i()).unwrap()).unwrap();
        assert_eq!(ri, Pair::new(1, vec![vec![q(0, 1, 0, 0)]]).unwrap());
        let v = gen_v(1);
        assert_eq!(v.act(&random_automorphism(3, 5)).unwrap().dim(), 4);
    }

    #[test]
    fn generators() {
        assert_eq!(gen_u(0, None).unwrap(), Pair::new(1, vec![vec![q(1, 0, 0, 0)]]).unwrap());
        let u1 = gen_u(1, None).unwrap();
        let expected = Pair::new(
            2,
            vec![
                vec![q(1, 0, 0, 0), Quaternion::zero()],
                vec![Quaternion::zero(), q(1, 0, 0, 0)],
                vec![q(0, 1, 0, 0), q(0, 0, 1, 0)],
            ],
        )
        .unwrap();
        assert_eq!(u1, expected);
        assert_eq!(gen_u(2, None).unwrap().dim(), 5);
        assert!(gen_u(1, Some(&[Zeta::int(0), Zeta::Infinity])).is_err());
        assert!(gen_u(1, Some(&[Zeta::int(1), Zeta::int(1)])).is_err());

        assert_eq!(gen_v(0), Pair::zero(1));
        let v1 = gen_v(1);
        assert_eq!(v1.dim(), 4);
        assert!(v1.contains_subspace(&[to_real(&[q(1, 0, 0, 0), q(1, 0, 0, 0), q(0, 0, 0, 0)])]));
        assert!(v1.contains_subspace(&[to_real(&[q(0, 0, 0, 0), q(0, 0, 1, 0), q(0, 0, -1, 0)])]));
        for k in 0..4 {
            assert_eq!(gen_v(k).dim(), 4 * k);
        }

        let w = gen_w(1, &SpherePoint::j()).unwrap();
        assert_eq!(w, Pair::new(1, vec![vec![q(1, 0, 0, 0)], vec![q(0, 0, 1, 0)]]).unwrap());
        let wi = gen_w(1, &SpherePoint::i()).unwrap();
        assert_eq!(wi, Pair::new(1, vec![vec![q(1, 0, 0, 0)], vec![q(0, 1, 0, 0)]]).unwrap());
        let w2 = gen_w(2, &SpherePoint::j()).unwrap();
        let z = Quaternion::zero;
        let expected = Pair::new(
            2,
            vec![
                vec![q(1, 0, 0, 0), z()],
                vec![q(0, 0, 1, 0), z()],
                vec![z(), q(1, 0, 0, 0)],
                vec![q(0, 1, 0, 0), q(0, 0, 1, 0)],
            ],
        )
        .unwrap();
        assert_eq!(w2, expected);
    }

    #[test]
    fn intersection_dims() {
        let w = gen_w(1, &SpherePoint::j()).unwrap();
        assert_eq!(w.intersection_dim(&SpherePoint::j()), 2);
        assert_eq!(w.intersection_dim(&SpherePoint::i()), 0);
        assert_eq!(Pair::full(1).intersection_dim(&SpherePoint::k()), 4);
    }

    #[test]
    fn complex_decompose_examples() {
        let g = |re, im| G::from_ints(re, im);
        assert_eq!(ComplexPair::new(1, vec![vec![g(1, 0)], vec![g(0, 1)]]).unwrap().complex_decompose(), (1, 0, 0));
        assert_eq!(ComplexPair::new(1, vec![vec![g(1, 0)]]).unwrap().complex_decompose(), (0, 1, 0));
        let cp =
            ComplexPair::new(2, vec![vec![g(1, 0), g(0, 0)], vec![g(0, 1), g(0, 0)], vec![g(0, 0), g(1, 0)]]).unwrap();
        assert_eq!(cp.complex_decompose(), (1, 1, 0));
    }

    #[test]
    fn random_automorphism_golden() {
        let a = random_automorphism(1, 0);
        assert_eq!(
            a.scalar(),
            &Quaternion::new(Rational::new(1, 2), Rational::new(-1, 2), Rational::new(1, 2), Rational::new(-1, 2))
        );
        assert_eq!(a.matrix(), &[vec![Quaternion::one()]]);
    }

    #[test]
    fn random_automorphism_is_deterministic() {
        let a = random_automorphism(3, 11);
        assert_eq!(a, random_automorphism(3, 11));
        assert_eq!(a.real_matrix().rank(), 12);
    }

    #[test]
    fn rotation_attempts_move_infinity_to_distinct_points() {
        let mut seen = Vec::new();
        for n in 0..8 {
            let g = Rotation::attempt(n);
            assert!(g.quaternion().norm().is_one());
            let p = sphere_point_from_zeta(&Zeta::Infinity).rotate(&g.quaternion().conj());
            assert!(!seen.contains(&p));
            seen.push(p);
        }
    }
}
