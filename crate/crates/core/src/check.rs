//! Full invariant audit of a single pair, signature or report.

use serde_json::{json, Value};

use crate::classify::{
    canonical_filtration, classify, dual_signature, factor_signature, Classification, FactorSignature,
};
use crate::error::{Error, Result};
use crate::pairs::Pair;
use crate::pencil::{check_points, startup_check, CP1Point, Complement, Convention, Pencil};
use crate::sheaf::{graded_nullity, kernel_splitting, sheaf_signature, SheafSignature};

fn violated(msg: impl Into<String>) -> Error {
    Error::Invariant(msg.into())
}

/// Runs every available cross-check on `p`.
pub fn check_pair(p: &Pair) -> Result<Value> {
    let mut passed = Vec::new();
    startup_check(Convention::Standard)?;
    passed.push("eigensections");
    let c = classify(p)?;
    passed.push("classification identities");

    let pencil = Pencil::build(p);
    for zeta in check_points() {
        let x = CP1Point::from_zeta(&zeta);
        let j = x.sphere_point();
        let fiber = pencil.fiber_kernel_dim(&x);
        if 2 * fiber != p.intersection_dim(&j) {
            return Err(violated(format!("fiber kernel at ζ = {zeta} disagrees with dim(U ∩ JU)")));
        }
        if p.as_complex_pair(&j).complex_decompose().0 != fiber {
            return Err(violated(format!("complex decomposition at ζ = {zeta} disagrees with the fiber kernel")));
        }
        if pencil.rank_at(&x) != pencil.rank_at(&x.antipode()) {
            return Err(violated(format!("rank at ζ = {zeta} differs from its antipode")));
        }
    }
    passed.push("fiber oracle");

    let kernel = kernel_splitting(&pencil)?;
    for d in 0..=2 * p.k() + 1 {
        let expected: i64 = kernel.iter().map(|&a| (d as i64 + a + 1).max(0)).sum();
        if graded_nullity(&pencil, d) as i64 != expected {
            return Err(violated(format!("graded nullity at d = {d} disagrees with the kernel splitting")));
        }
    }
    passed.push("graded nullity");

    let alt = sheaf_signature(&Pencil::build_with(p, Complement::Reversed, Convention::Standard))?;
    if alt != c.sheaf {
        return Err(violated("the signature depends on the choice of complement"));
    }
    passed.push("complement independence");

    if classify(&p.dual())?.factors != dual_signature(&c.factors) {
        return Err(violated("classification of the dual is not the dual signature"));
    }
    passed.push("duality");

    let filtration = canonical_filtration(&c)?;
    passed.push("filtration");

    Ok(json!({
        "ok": true,
        "kind": "pair",
        "k": p.k(),
        "dim": p.dim(),
        "torsion_length": c.sheaf.torsion_length(),
        "factors": c.factors.to_json(),
        "filtration_dims": filtration.dims(),
        "checks": passed,
    }))
}

/// Checks a bare signature. `k` and `dim U` are taken from the document if
/// present and otherwise derived from the two identities.
pub fn check_signature(v: &Value) -> Result<Value> {
    let sig: SheafSignature =
        serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("bad signature: {e}")))?;
    let total = sig.total_degree();
    if total < 0 || total % 2 != 0 {
        return Err(violated(format!("total degree {total} is not 2k for any k")));
    }
    let k = match v.get("quaternionic_dimension") {
        Some(x) => x.as_u64().ok_or_else(|| Error::Parse("bad quaternionic_dimension".into()))? as usize,
        None => (total / 2) as usize,
    };
    let rank = sig.cokernel_degrees.len() as i64 - sig.kernel_degrees.len() as i64;
    let dim_u = match v.get("subspace_dimension") {
        Some(x) => x.as_u64().ok_or_else(|| Error::Parse("bad subspace_dimension".into()))? as i64,
        None => 2 * k as i64 - rank,
    };
    if dim_u < 0 || dim_u > 4 * k as i64 {
        return Err(violated(format!("signature implies dim U = {dim_u} in ℍ^{k}")));
    }
    sig.verify(k, dim_u as usize).map_err(|e| violated(e.to_string()))?;
    let factors = factor_signature(&sig).map_err(|e| violated(e.to_string()))?;
    Ok(json!({ "ok": true, "kind": "signature", "k": k, "dim": dim_u, "factors": factors.to_json() }))
}

/// Recomputes a classification report and compares it field by field.
pub fn check_report(v: &Value) -> Result<Value> {
    let pair: Pair =
        serde_json::from_value(v["input"].clone()).map_err(|e| Error::Parse(format!("bad input pair: {e}")))?;
    let reported: SheafSignature =
        serde_json::from_value(v["sheaf"].clone()).map_err(|e| Error::Parse(format!("bad sheaf: {e}")))?;
    let reported_factors = FactorSignature::from_json(&v["factors"])?;
    let Classification { sheaf, factors, .. } = classify(&pair)?;
    if reported != sheaf {
        return Err(violated("reported sheaf signature differs from the recomputed one"));
    }
    if reported_factors != factors {
        return Err(violated(format!("reported factors differ from the recomputed {factors}")));
    }
    Ok(json!({ "ok": true, "kind": "report", "k": pair.k(), "dim": pair.dim(), "factors": factors.to_json() }))
}

/// Dispatches on the shape of the document.
pub fn check_document(v: &Value) -> Result<Value> {
    if v.get("subspace_basis").is_some() {
        let p: Pair = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        check_pair(&p)
    } else if v.get("sheaf").is_some() && v.get("input").is_some() {
        check_report(v)
    } else if v.get("kernel_degrees").is_some() || v.get("cokernel_degrees").is_some() {
        check_signature(v)
    } else {
        Err(Error::Parse("expected a pair, a signature or a classification report".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::report;
    use crate::pairs::{gen_u, gen_w, SpherePoint};

    #[test]
    fn pair_check() {
        let out = check_pair(&gen_w(3, &SpherePoint::i()).unwrap()).unwrap();
        assert_eq!(out["torsion_length"], 6);
    }

    #[test]
    fn signature_check() {
        assert!(check_signature(&json!({"kernel_degrees": [], "cokernel_degrees": [4], "torsion": []})).is_ok());
        let odd = check_signature(&json!({"kernel_degrees": [], "cokernel_degrees": [3], "torsion": []}));
        assert!(odd.unwrap_err().is_internal());
        let trivial = check_signature(&json!({"kernel_degrees": [], "cokernel_degrees": [0, 4], "torsion": []}));
        assert!(trivial.unwrap_err().is_internal());
    }

    #[test]
    fn report_check() {
        let c = classify(&gen_u(1, None).unwrap()).unwrap();
        let mut r = report(&c, None, false);
        assert!(check_document(&r).is_ok());
        r["sheaf"]["cokernel_degrees"] = json!([2, 2]);
        assert!(check_document(&r).unwrap_err().is_internal());
    }
}
