use crate::brauer::{blocks_of_extension, dade_map, harris_knorr};
use crate::catalog::{Instance, Witness};
use crate::error::{Error, Result};
use crate::report::Check;
use crate::triples::{
    brauer_compatibility_check, verify_geq_b, verify_geq_c, wreath_triple_suite, TripleCertificate, WreathScope,
};

use super::check;

/// The Harris–Knörr pairing for an instance is a defect-preserving
/// bijection and agrees with the Dade isomorphism `C̄ ≅ C̄′` on block
/// idempotents.
pub fn harris_knorr_suite(inst: &Instance) -> Result<Vec<Check>> {
    let (ext, ext2) = (&inst.ext, &inst.ext2);
    let pairs = harris_knorr(ext, ext2, &inst.incl, &inst.defect);
    let mut out = vec![check("Harris–Knörr pairing is a defect-preserving bijection", || {
        let pairs = pairs.clone()?;
        Ok(pairs.iter().find(|p| !p.defect_preserved).map(|p| {
            format!("block {} and its correspondent {} have different defect groups", p.block, p.correspondent)
        }))
    })];
    let Ok(pairs) = pairs else { return Ok(out) };
    out.push(check("pairing agrees with the Dade isomorphism", || {
        let cbar = ext.cbar()?;
        let cbar2 = ext2.cbar()?;
        let d = dade_map(ext, &cbar, ext2, &cbar2, &inst.incl, &inst.defect)?;
        if !d.is_invertible() {
            return Ok(Some("Dade map C̄ -> C̄′ is not bijective".into()));
        }
        let blocks = blocks_of_extension(ext)?;
        let blocks2 = blocks_of_extension(ext2)?;
        for p in &pairs {
            let x =
                ext.from_ambient(&blocks[p.block]).ok_or_else(|| Error::CheckFailed("block outside b·kG".into()))?;
            let y = ext2
                .from_ambient(&blocks2[p.correspondent])
                .ok_or_else(|| Error::CheckFailed("block outside b′·kG′".into()))?;
            if d.apply(&cbar.class_of(&x)?) != cbar2.class_of(&y)? {
                return Ok(Some(format!("Dade image of block {} is not block {}", p.block, p.correspondent)));
            }
        }
        Ok(None)
    }));
    Ok(out)
}

fn geq_c_check(cert: &TripleCertificate) -> Check {
    check("≥c", || {
        let r = verify_geq_c(cert)?;
        Ok((!r.ok()).then(|| r.witness.unwrap_or_else(|| "≥c fails".into())))
    })
}

pub fn geq_c_suite(cert: &TripleCertificate) -> Vec<Check> {
    vec![geq_c_check(cert)]
}

/// Brauer compatibility of each witness, then `≥b` for the certificate.
pub fn geq_b_suite(inst: &Instance, witnesses: &[Witness], cert: &TripleCertificate) -> Result<Vec<Check>> {
    if cert.defect.is_none() {
        return Err(Error::SchemaError("≥b needs a defect group".into()));
    }
    let mut out = Vec::new();
    for &w in witnesses {
        let x = inst.witness(w)?;
        out.push(check(format!("{w:?}: Brauer compatibility"), || {
            let r = brauer_compatibility_check(&x, &inst.ext, &inst.ext2, &inst.incl, &inst.defect, None, None)?;
            Ok((!r.ok).then(|| "φ_X differs from the Dade map on C̄".to_string()))
        }));
    }
    out.push(check("≥b", || {
        let r = verify_geq_b(cert)?;
        Ok((!r.ok()).then(|| r.witness.unwrap_or_else(|| "≥b fails".into())))
    }));
    Ok(out)
}

/// The wreath triple stages for one witness.
pub fn wreath_relation_suite(inst: &Instance, w: Witness, n: usize, scope: WreathScope) -> Result<Vec<Check>> {
    let x = inst.witness(w)?;
    wreath_triple_suite(inst, &x, n, scope)
}
