use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gaussian::GaussianRational as G;
use super::poly::Poly;
use crate::error::{Error, Result};

/// Homogeneous binary form of degree `δ` in `(z₀, z₁)` over ℚ(i).
/// `coeffs[t]` multiplies `z₀^{δ−t} z₁^t`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BinaryForm {
    coeffs: Vec<G>,
}

impl BinaryForm {
    pub fn new(coeffs: Vec<G>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form needs at least one coefficient");
        BinaryForm { coeffs }
    }

    pub fn constant(c: G) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(G::one())
    }

    pub fn z0() -> Self {
        Self::new(vec![G::one(), G::zero()])
    }

    pub fn z1() -> Self {
        Self::new(vec![G::zero(), G::one()])
    }

    /// `a·z₀ + b·z₁`.
    pub fn linear(a: G, b: G) -> Self {
        Self::new(vec![a, b])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[G] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(G::is_zero)
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    /// Splits a nonzero form as `z₀^e · p(z₁/z₀)·z₀^{deg p}`; returns `(p, e)`.
    pub fn dehomogenize(&self) -> (Poly<G>, usize) {
        let p = Poly::new(self.coeffs.clone());
        let e = self.degree() - p.degree().unwrap_or(0);
        (p, e)
    }

    /// Inverse of [`dehomogenize`](Self::dehomogenize).
    pub fn homogenize(p: &Poly<G>, e_inf: usize) -> Self {
        let d = p.degree().unwrap_or(0);
        let mut coeffs: Vec<G> = (0..=d).map(|i| p.coeff(i)).collect();
        coeffs.extend(std::iter::repeat_n(G::zero(), e_inf));
        Self::new(coeffs)
    }

    /// Scales so that the first nonzero coefficient (lowest power of `z₁`)
    /// is 1.
    pub fn normalized(&self) -> Self {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            None => self.clone(),
            Some(lead) => {
                let inv = lead.inv().expect("nonzero");
                Self::new(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn scale(&self, s: &G) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = vec![G::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Self::new(out)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.degree(), rhs.degree(), "sum of forms of different degree");
        Self::new(self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn pow(&self, n: usize) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Exact quotient when `d` divides `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::new(vec![G::zero(); self.degree().checked_sub(d.degree())? + 1]));
        }
        let (p, ep) = self.dehomogenize();
        let (q, eq) = d.dehomogenize();
        if eq > ep {
            return None;
        }
        let (quot, rem) = p.div_rem(&q);
        if !rem.is_zero() {
            return None;
        }
        Some(Self::homogenize(&quot, ep - eq))
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.div_exact(self).is_some()
    }

    /// Largest `e` with `self^e | f`, for nonconstant `self` and nonzero `f`.
    pub fn multiplicity_in(&self, f: &Self) -> usize {
        assert!(!self.is_constant() && !f.is_zero());
        let mut e = 0;
        let mut cur = f.clone();
        while let Some(q) = cur.div_exact(self) {
            cur = q;
            e += 1;
        }
        e
    }

    /// The pull-back by the antipodal map: `f ↦ conj(f)(−z₁, z₀)`.
    /// Applying it twice multiplies a form of degree `δ` by `(−1)^δ`.
    pub fn sigma_twist(&self) -> Self {
        let d = self.degree();
        Self::new(
            (0..=d)
                .map(|s| {
                    let c = self.coeffs[d - s].conj();
                    if s % 2 == 1 {
                        -c
                    } else {
                        c
                    }
                })
                .collect(),
        )
    }

    /// `f(m₀₀z₀ + m₀₁z₁, m₁₀z₀ + m₁₁z₁)`.
    pub fn substitute(&self, m: &[[G; 2]; 2]) -> Self {
        let x = Self::linear(m[0][0].clone(), m[0][1].clone());
        let y = Self::linear(m[1][0].clone(), m[1][1].clone());
        let d = self.degree();
        let mut acc = Self::new(vec![G::zero(); d + 1]);
        for (t, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = x.pow(d - t).mul(&y.pow(t)).scale(c);
            acc = acc.add(&term);
        }
        acc
    }

    pub fn eval(&self, z0: &G, z1: &G) -> G {
        let d = self.degree();
        let mut acc = G::zero();
        for (t, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut term = c.clone();
            for _ in 0..d - t {
                term = &term * z0;
            }
            for _ in 0..t {
                term = &term * z1;
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Partial derivatives `(∂/∂z₀, ∂/∂z₁)`.
    fn partials(&self) -> (Self, Self) {
        let d = self.degree();
        if d == 0 {
            return (Self::constant(G::zero()), Self::constant(G::zero()));
        }
        let d0 = (0..d).map(|t| self.coeffs[t].scale(&crate::exact::Rational::from_int((d - t) as i64))).collect();
        let d1 = (0..d).map(|t| self.coeffs[t + 1].scale(&crate::exact::Rational::from_int((t + 1) as i64))).collect();
        (Self::new(d0), Self::new(d1))
    }

    /// Square-free decomposition `self = c·Π sᵢ^i`, returning the
    /// nonconstant normalized `sᵢ` with exponents.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        let (p, e_inf) = self.dehomogenize();
        let mut out: Vec<(Self, usize)> =
            p.squarefree_decomposition().into_iter().map(|(s, i)| (Self::homogenize(&s, 0).normalized(), i)).collect();
        if e_inf > 0 {
            out.push((Self::z0(), e_inf));
        }
        out
    }

    /// Product of the distinct irreducible factors.
    pub fn radical(&self) -> Self {
        let g = gcd_many(&[self.clone(), self.partials().0, self.partials().1]);
        self.div_exact(&g).expect("gcd divides").normalized()
    }

    /// Numeric roots as points of ℂ ∪ {∞} (`None` is `[0:1]`, i.e. `ζ = ∞`).
    /// Roots are polished with Newton steps; a relative residual above
    /// `1e-10` is reported as an error.
    pub fn numeric_roots(&self) -> Result<Vec<Option<Complex64>>> {
        let (p, e_inf) = self.dehomogenize();
        let mut roots: Vec<Option<Complex64>> = vec![None; e_inf];
        let coeffs: Vec<Complex64> = p.coeffs().iter().map(G::to_complex).collect();
        for z in polynomial_roots(&coeffs)? {
            roots.push(Some(z));
        }
        Ok(roots)
    }
}

fn gcd_many(fs: &[BinaryForm]) -> BinaryForm {
    let mut it = fs.iter().filter(|f| !f.is_zero());
    let Some(first) = it.next() else {
        return BinaryForm::one();
    };
    it.fold(first.normalized(), |acc, f| gcd_forms(&acc, f).unwrap_or_else(|_| acc.clone()))
}

/// Durand–Kerner iteration followed by Newton polishing, for a polynomial
/// with coefficients from degree 0 upward.
fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let eval = |z: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
    let deriv = |z: Complex64| {
        monic.iter().enumerate().skip(1).rev().fold(Complex64::new(0.0, 0.0), |acc, (i, c)| acc * z + c * i as f64)
    };
    let radius = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|i| seed.powu(i as u32) * radius.min(2.0)).collect();
    for _ in 0..500 {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(1e-12, 0.0);
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..5 {
            let d = deriv(*r);
            if d.norm() == 0.0 {
                break;
            }
            *r -= eval(*r) / d;
        }
        let scale: f64 = monic.iter().enumerate().map(|(i, c)| c.norm() * r.norm().powi(i as i32)).sum();
        if eval(*r).norm() > 1e-10 * scale.max(1.0) {
            return Err(Error::Internal(format!("root isolation failed to converge near {r}")));
        }
    }
    Ok(z)
}

/// Normalized greatest common divisor of two forms, not both zero.
pub fn gcd_forms(f: &BinaryForm, g: &BinaryForm) -> Result<BinaryForm> {
    match (f.is_zero(), g.is_zero()) {
        (true, true) => Err(Error::InvalidInput("gcd of two zero forms".into())),
        (true, false) => Ok(g.normalized()),
        (false, true) => Ok(f.normalized()),
        (false, false) => {
            let (p, ep) = f.dehomogenize();
            let (q, eq) = g.dehomogenize();
            Ok(BinaryForm::homogenize(&p.gcd(&q), ep.min(eq)).normalized())
        }
    }
}

/// Pairwise coprime, normalized, square-free forms such that every input is
/// a constant times a product of powers of them. The result is the coarsest
/// such basis, sorted by degree and then coefficients.
pub fn coprime_basis(fs: &[BinaryForm]) -> Vec<BinaryForm> {
    let mut parts: Vec<BinaryForm> = Vec::new();
    for f in fs {
        assert!(!f.is_zero(), "coprime_basis requires nonzero forms");
        parts.extend(f.squarefree_decomposition().into_iter().map(|(s, _)| s));
    }
    let mut basis: Vec<BinaryForm> = Vec::new();
    for p in parts {
        push_refined(&mut basis, p);
    }
    basis.sort();
    basis.dedup();
    basis
}

fn push_refined(basis: &mut Vec<BinaryForm>, f: BinaryForm) {
    let mut pending = vec![f.normalized()];
    while let Some(cur) = pending.pop() {
        if cur.is_constant() {
            continue;
        }
        let hit = basis.iter().position(|b| !gcd_forms(b, &cur).expect("nonzero").is_constant());
        match hit {
            None => basis.push(cur),
            Some(idx) => {
                let b = basis.swap_remove(idx);
                let g = gcd_forms(&b, &cur).expect("nonzero");
                let b_rest = b.div_exact(&g).expect("gcd divides").normalized();
                let c_rest = cur.div_exact(&g).expect("gcd divides").normalized();
                pending.push(g);
                pending.push(b_rest);
                pending.push(c_rest);
            }
        }
    }
}

impl Ord for BinaryForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for BinaryForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut terms = Vec::new();
        for (t, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut mono = Vec::new();
            match d - t {
                0 => {}
                1 => mono.push("z0".to_string()),
                e => mono.push(format!("z0^{e}")),
            }
            match t {
                0 => {}
                1 => mono.push("z1".to_string()),
                e => mono.push(format!("z1^{e}")),
            }
            let coef = if c.is_real() { c.to_string() } else { format!("({c})") };
            terms.push(match (mono.is_empty(), *c == G::one()) {
                (true, _) => coef,
                (false, true) => mono.join("*"),
                (false, false) => format!("{coef}*{}", mono.join("*")),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
