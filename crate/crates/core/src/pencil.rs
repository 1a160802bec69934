use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{GaussianRational as G, Matrix, MatrixG, MatrixQ, Quaternion, Rational};
use crate::pairs::{block_left_mult, sphere_point_from_zeta, Pair, SpherePoint, Zeta};

/// A point `[z0 : z1]` of `ℂP¹`.
#[derive(Clone, Debug)]
pub struct CP1Point {
    z0: G,
    z1: G,
}

impl CP1Point {
    pub fn new(z0: G, z1: G) -> Result<Self> {
        if z0.is_zero() && z1.is_zero() {
            return Err(Error::invalid("[0:0] is not a point of CP1"));
        }
        Ok(CP1Point { z0, z1 })
    }

    pub fn from_zeta(zeta: &Zeta) -> Self {
        match zeta {
            Zeta::Infinity => CP1Point { z0: G::zero(), z1: G::one() },
            Zeta::Finite(z) => CP1Point { z0: G::one(), z1: z.clone() },
        }
    }

    pub fn int(n: i64) -> Self {
        Self::from_zeta(&Zeta::int(n))
    }

    pub fn z0(&self) -> &G {
        &self.z0
    }

    pub fn z1(&self) -> &G {
        &self.z1
    }

    pub fn zeta(&self) -> Zeta {
        match self.z0.inv() {
            None => Zeta::Infinity,
            Some(inv) => Zeta::Finite(&self.z1 * &inv),
        }
    }

    pub fn antipode(&self) -> Self {
        CP1Point { z0: -&self.z1.conj(), z1: self.z0.conj() }
    }

    pub fn sphere_point(&self) -> SpherePoint {
        sphere_point_from_zeta(&self.zeta())
    }

    /// `M·(z0, z1)ᵀ`.
    pub fn transform(&self, m: &[[G; 2]; 2]) -> Self {
        CP1Point {
            z0: &(&m[0][0] * &self.z0) + &(&m[0][1] * &self.z1),
            z1: &(&m[1][0] * &self.z0) + &(&m[1][1] * &self.z1),
        }
    }
}

impl PartialEq for CP1Point {
    fn eq(&self, other: &Self) -> bool {
        &self.z0 * &other.z1 == &self.z1 * &other.z0
    }
}

impl Eq for CP1Point {}

impl fmt::Display for CP1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} : {}]", self.z0, self.z1)
    }
}

/// Which hand-derived eigensection basis to use. Only `Standard` is correct;
/// `SignFlipped` exists so that the startup check can be seen to fire.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Convention {
    #[default]
    Standard,
    SignFlipped,
}

/// `(V, W)` with `Σ(z0, z1) = z0·V + z1·W`, both `4k × 2k`. Columns `2s`,
/// `2s+1` are `σ₁`, `σ₂` of slot `s`; rows `4s..4s+4` are its `(1,i,j,k)`
/// coordinates.
pub fn eigensections(k: usize, convention: Convention) -> (MatrixG, MatrixG) {
    let g = |re: i64, im: i64| G::from_ints(re, im);
    let v1 = match convention {
        Convention::Standard => [g(1, 0), g(0, 1), g(0, 0), g(0, 0)],
        Convention::SignFlipped => [g(1, 0), g(0, -1), g(0, 0), g(0, 0)],
    };
    let w1 = [g(0, 0), g(0, 0), g(0, 1), g(1, 0)];
    let v2 = [g(0, 0), g(0, 0), g(1, 0), g(0, 1)];
    let w2 = [g(0, -1), g(-1, 0), g(0, 0), g(0, 0)];
    let mut v = Matrix::zeros(4 * k, 2 * k);
    let mut w = Matrix::zeros(4 * k, 2 * k);
    for s in 0..k {
        for t in 0..4 {
            v[(4 * s + t, 2 * s)] = v1[t].clone();
            w[(4 * s + t, 2 * s)] = w1[t].clone();
            v[(4 * s + t, 2 * s + 1)] = v2[t].clone();
            w[(4 * s + t, 2 * s + 1)] = w2[t].clone();
        }
    }
    (v, w)
}

fn combine(z0: &G, a: &MatrixG, z1: &G, b: &MatrixG) -> MatrixG {
    a.scale(z0).add(&b.scale(z1))
}

/// Verifies `(L_u ⊗ ℂ + I)·Σ(x) = 0` and `rank Σ(x) = 2k` at `x = ζ`.
pub fn eigensection_check(k: usize, zeta: &Zeta, convention: Convention) -> Result<()> {
    let (v, w) = eigensections(k, convention);
    let x = CP1Point::from_zeta(zeta);
    let sigma = combine(&x.z0, &v, &x.z1, &w);
    let u = sphere_point_from_zeta(zeta);
    let lu = MatrixG::from_real(&block_left_mult(k, u.quaternion()));
    let residual = lu.mul(&sigma).add(&sigma.scale(&G::unit_i()));
    if !residual.is_zero() {
        return Err(Error::internal(format!(
            "eigensections at ζ = {zeta} are not in the −I eigenspace of L_{u}; the sign convention is inconsistent"
        )));
    }
    if sigma.rank() != 2 * k {
        return Err(Error::internal(format!("eigensections at ζ = {zeta} are dependent")));
    }
    Ok(())
}

/// Sample points used for the startup self-check.
pub fn check_points() -> Vec<Zeta> {
    let f = |a: i64, b: i64, c: i64, d: i64| Zeta::Finite(G::new(Rational::new(a, b), Rational::new(c, d)));
    vec![
        Zeta::int(0),
        Zeta::int(1),
        Zeta::int(-1),
        Zeta::Infinity,
        Zeta::Finite(G::unit_i()),
        f(1, 2, 1, 2),
        f(-3, 1, 2, 1),
        f(0, 1, -5, 7),
        f(7, 3, 0, 1),
        f(1, 5, -1, 3),
        Zeta::int(4),
        f(-2, 9, 11, 4),
    ]
}

pub fn startup_check(convention: Convention) -> Result<()> {
    for zeta in check_points() {
        eigensection_check(1, &zeta, convention)?;
    }
    Ok(())
}

/// The block-diagonal twist `C` with `conj(A) = −B·C` and `conj(B) = A·C`.
pub fn twist(k: usize) -> MatrixG {
    let mut c = Matrix::zeros(2 * k, 2 * k);
    for s in 0..k {
        c[(2 * s, 2 * s + 1)] = G::unit_i();
        c[(2 * s + 1, 2 * s)] = -G::unit_i();
    }
    c
}

/// How the quotient `ℝ^{4k} → ℝ^{4k}/U` is realized.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Complement {
    /// Coordinates complementary to the pivot columns of the echelon basis.
    #[default]
    Echelon,
    /// The same construction after reversing coordinate order.
    Reversed,
}

/// `P(z0, z1) = z0·A + z1·B : ℂ^{2k} → ℂ^m`.
#[derive(Clone, PartialEq, Debug)]
pub struct Pencil {
    k: usize,
    a: MatrixG,
    b: MatrixG,
}

/// `Q` with `ker Q = U`, one row per non-pivot column of the echelon form.
fn quotient_map(p: &Pair, complement: Complement) -> MatrixQ {
    let n = 4 * p.k();
    let perm: Vec<usize> = match complement {
        Complement::Echelon => (0..n).collect(),
        Complement::Reversed => (0..n).rev().collect(),
    };
    let rows: Vec<Vec<Rational>> =
        p.real_basis().iter().map(|v| perm.iter().map(|&i| v[i].clone()).collect()).collect();
    let (r, pivots) = Matrix::from_rows(rows, n).rref();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut q = Matrix::zeros(free.len(), n);
    for (row, &c) in free.iter().enumerate() {
        q[(row, perm[c])] = Rational::one();
        for (pr, &pc) in pivots.iter().enumerate() {
            q[(row, perm[pc])] = -&r[(pr, c)];
        }
    }
    q
}

impl Pencil {
    pub fn new(k: usize, a: MatrixG, b: MatrixG) -> Result<Self> {
        if a.cols() != 2 * k || b.cols() != 2 * k || a.rows() != b.rows() {
            return Err(Error::internal("pencil matrices have inconsistent shapes"));
        }
        Ok(Pencil { k, a, b })
    }

    pub fn build(p: &Pair) -> Pencil {
        Self::build_with(p, Complement::Echelon, Convention::Standard)
    }

    pub fn build_with(p: &Pair, complement: Complement, convention: Convention) -> Pencil {
        let k = p.k();
        let q = MatrixG::from_real(&quotient_map(p, complement));
        let (v, w) = eigensections(k, convention);
        if q.rows() == 0 {
            return Pencil { k, a: Matrix::zeros(0, 2 * k), b: Matrix::zeros(0, 2 * k) };
        }
        Pencil { k, a: q.mul(&v), b: q.mul(&w) }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn a(&self) -> &MatrixG {
        &self.a
    }

    pub fn b(&self) -> &MatrixG {
        &self.b
    }

    pub fn evaluate(&self, x: &CP1Point) -> MatrixG {
        combine(&x.z0, &self.a, &x.z1, &self.b)
    }

    pub fn rank_at(&self, x: &CP1Point) -> usize {
        if self.m() == 0 {
            0
        } else {
            self.evaluate(x).rank()
        }
    }

    /// `dim_ℂ (U^ℂ ∩ E^J)` at `J = J(x)`.
    pub fn fiber_kernel_dim(&self, x: &CP1Point) -> usize {
        2 * self.k - self.rank_at(x)
    }

    /// Checks `conj(B) = A·C`, `−conj(A) = B·C` and `C·conj(C) = −1`, which
    /// together say `conj(P(antipode(x))) = P(x)·C`.
    pub fn reality_check(&self) -> Result<()> {
        let c = twist(self.k);
        let minus_one = Matrix::identity(2 * self.k).scale(&-G::one());
        if c.mul(&c.conj()) != minus_one {
            return Err(Error::internal("twist is not of quaternionic type"));
        }
        if self.m() == 0 {
            return Ok(());
        }
        let ok = self.b.conj() == self.a.mul(&c) && self.a.conj().scale(&-G::one()) == self.b.mul(&c);
        if !ok {
            return Err(Error::internal("pencil does not commute with the real structure"));
        }
        Ok(())
    }

    /// The pencil `P′(w) = P(ρ(ḡ)·w)`, whose behaviour at `w` is that of `P`
    /// at the sphere point `ḡ·u(w)·g`.
    pub fn rotate(&self, g: &Quaternion) -> Pencil {
        let [[alpha, beta], [gamma, delta]] = g.conj().su2();
        Pencil { k: self.k, a: combine(&alpha, &self.a, &gamma, &self.b), b: combine(&beta, &self.a, &delta, &self.b) }
    }

    /// Transposed pencil `Aᵀ + t·Bᵀ`; not itself a pencil of a pair.
    pub fn transpose(&self) -> (MatrixG, MatrixG) {
        (self.a.transpose(), self.b.transpose())
    }

    pub fn debug_json(&self) -> Value {
        let dump = |m: &MatrixG| -> Value {
            (0..m.rows()).map(|r| (0..m.cols()).map(|c| json!(m[(r, c)])).collect::<Vec<_>>()).collect()
        };
        json!({ "k": self.k, "m": self.m(), "A": dump(&self.a), "B": dump(&self.b) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::subspace;
    use crate::pairs::{gen_u, gen_w};

    #[test]
    fn eigensections_at_sample_points() {
        for k in 1..=3 {
            for zeta in check_points() {
                eigensection_check(k, &zeta, Convention::Standard).unwrap();
            }
        }
        assert!(startup_check(Convention::SignFlipped).unwrap_err().is_internal());
    }

    #[test]
    fn eigenspace_at_i() {
        let (v, _) = eigensections(1, Convention::Standard);
        let g = |re: i64, im: i64| G::from_ints(re, im);
        let expected = vec![vec![g(1, 0), g(0, 1), g(0, 0), g(0, 0)], vec![g(0, 0), g(0, 0), g(1, 0), g(0, 1)]];
        let cols: Vec<Vec<G>> = (0..2).map(|c| v.col(c)).collect();
        assert_eq!(subspace::span(&cols, 4), subspace::span(&expected, 4));
    }

    #[test]
    fn eigenspace_at_j() {
        let (v, w) = eigensections(1, Convention::Standard);
        let sigma = combine(&G::one(), &v, &G::one(), &w);
        let g = |re: i64, im: i64| G::from_ints(re, im);
        // 1 + I·j and k + I·i
        let target = vec![vec![g(1, 0), g(0, 0), g(0, 1), g(0, 0)], vec![g(0, 0), g(0, 1), g(0, 0), g(1, 0)]];
        let cols: Vec<Vec<G>> = (0..2).map(|c| sigma.col(c)).collect();
        assert!(subspace::is_subspace(&cols, &target, 4));
    }

    #[test]
    fn pencil_shapes() {
        let p = Pencil::build(&Pair::zero(1));
        assert_eq!(p.m(), 4);
        assert_eq!(p.a(), &eigensections(1, Convention::Standard).0);
        assert_eq!(Pencil::build(&Pair::full(1)).m(), 0);
        let r = Pencil::build(&gen_u(0, None).unwrap());
        assert_eq!(r.m(), 3);
        assert_eq!(r.rank_at(&CP1Point::int(0)), 2);
        assert_eq!(r.fiber_kernel_dim(&CP1Point::int(0)), 0);
    }

    #[test]
    fn evaluate_is_projective() {
        let p = Pencil::build(&gen_w(1, &SpherePoint::j()).unwrap());
        let x = CP1Point::new(G::from_ints(2, 1), G::from_ints(0, 3)).unwrap();
        let y = CP1Point::new(
            G::from_ints(2, 1).scale(&Rational::new(-7, 2)),
            G::from_ints(0, 3).scale(&Rational::new(-7, 2)),
        )
        .unwrap();
        assert_eq!(x, y);
        assert_eq!(p.rank_at(&x), p.rank_at(&y));
        assert_eq!(&p.evaluate(&CP1Point::int(0)), p.a());
        assert_eq!(&p.evaluate(&CP1Point::from_zeta(&Zeta::Infinity)), p.b());
        assert!(CP1Point::new(G::zero(), G::zero()).is_err());
    }

    #[test]
    fn reality() {
        for p in [Pair::zero(1), gen_u(0, None).unwrap(), gen_u(2, None).unwrap(), gen_w(2, &SpherePoint::k()).unwrap()]
        {
            Pencil::build(&p).reality_check().unwrap();
        }
        for k in 1..=3 {
            let c = twist(k);
            assert_eq!(c.mul(&c.conj()), Matrix::identity(2 * k).scale(&-G::one()));
        }
    }

    #[test]
    fn fiber_kernels() {
        let w = Pencil::build(&gen_w(1, &SpherePoint::j()).unwrap());
        assert_eq!(w.fiber_kernel_dim(&CP1Point::int(1)), 1);
        assert_eq!(w.fiber_kernel_dim(&CP1Point::int(0)), 0);
        assert_eq!(Pencil::build(&Pair::full(1)).fiber_kernel_dim(&CP1Point::int(3)), 2);
    }

    #[test]
    fn complements_agree_on_ranks() {
        let p = gen_u(1, None).unwrap();
        let a = Pencil::build_with(&p, Complement::Echelon, Convention::Standard);
        let b = Pencil::build_with(&p, Complement::Reversed, Convention::Standard);
        assert_ne!(a, b);
        for zeta in check_points() {
            let x = CP1Point::from_zeta(&zeta);
            assert_eq!(a.rank_at(&x), b.rank_at(&x));
        }
    }

    #[test]
    fn rotation_moves_points() {
        let p = Pencil::build(&gen_w(1, &SpherePoint::j()).unwrap());
        let g = Quaternion::new(Rational::new(3, 5), Rational::new(4, 5), Rational::zero(), Rational::zero());
        let rotated = p.rotate(&g);
        rotated.reality_check().unwrap();
        for zeta in check_points() {
            let w = CP1Point::from_zeta(&zeta);
            let moved = w.sphere_point().rotate(&g.conj());
            let x = CP1Point::from_zeta(&moved.zeta());
            assert_eq!(rotated.rank_at(&w), p.rank_at(&x));
        }
    }
}
