//! JSON form of `≥c` and `≥b` certificates over the bundled instances.
//!
//! A file names the instance and the prime `ℓ`; both triples are rebuilt
//! from those, so only the isomorphism `E(V) -> E(V′)` and the defect group
//! travel in the file.

use serde::{Deserialize, Serialize};

use crate::catalog::{instance, Instance, SCHEMA};
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::linalg::Mat;
use crate::triples::TripleCertificate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertKind {
    #[serde(rename = "geq-c")]
    GeqC,
    #[serde(rename = "geq-b")]
    GeqB,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub schema: String,
    pub kind: CertKind,
    pub instance: String,
    pub ell: u32,
    /// Rows of the matrix of `E(V) -> E(V′)`.
    pub iso: Vec<Vec<Elem>>,
    /// Elements of `Q` as indices into `G`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defect_group: Option<Vec<u32>>,
}

impl CertificateJson {
    /// The restriction certificate of a named instance.
    pub fn generate(name: &str, ell: Option<u32>, kind: CertKind) -> Result<CertificateJson> {
        let inst = instance(name, ell)?;
        let cert = inst.certificate()?;
        let iso = (0..cert.iso.rows()).map(|r| cert.iso.row(r).to_vec()).collect();
        Ok(CertificateJson {
            schema: SCHEMA.to_string(),
            kind,
            instance: name.to_string(),
            ell: inst.red.ell.p(),
            iso,
            defect_group: (kind == CertKind::GeqB).then(|| inst.defect.elements().to_vec()),
        })
    }

    pub fn parse(text: &str) -> Result<CertificateJson> {
        let c: CertificateJson = serde_json::from_str(text).map_err(|e| Error::SchemaError(e.to_string()))?;
        if c.schema != SCHEMA {
            return Err(Error::SchemaError(format!("unsupported schema {:?}", c.schema)));
        }
        if c.kind == CertKind::GeqB && c.defect_group.is_none() {
            return Err(Error::SchemaError("a geq-b certificate needs defect_group".into()));
        }
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    /// Rebuilds the instance and the certificate it describes.
    pub fn resolve(&self) -> Result<(Instance, TripleCertificate)> {
        let inst = instance(&self.instance, Some(self.ell))?;
        let (t, t2) = inst.triples()?;
        let f = t.ell().clone();
        let cols = self.iso.first().map_or(0, |r| r.len());
        if self.iso.iter().any(|r| r.len() != cols) {
            return Err(Error::SchemaError("iso rows have different lengths".into()));
        }
        if self.iso.iter().flatten().any(|&x| x >= f.q()) {
            return Err(Error::SchemaError(format!("iso entry outside GF({})", f.q())));
        }
        let iso = Mat::from_rows(&f, cols, &self.iso);
        let defect = match &self.defect_group {
            Some(q) => Some(inst.ext.group.subgroup(q).map_err(|e| Error::SchemaError(format!("defect_group: {e}")))?),
            None => None,
        };
        let cert = TripleCertificate::new(t, t2, inst.incl.clone(), iso, defect)
            .map_err(|e| Error::SchemaError(e.to_string()))?;
        Ok((inst, cert))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triples::{verify_geq_b, verify_geq_c};

    #[test]
    fn generated_certificates_round_trip() {
        for kind in [CertKind::GeqC, CertKind::GeqB] {
            let c = CertificateJson::generate("s3-a3-p3", None, kind).unwrap();
            let back = CertificateJson::parse(&c.to_json()).unwrap();
            assert_eq!(back, c);
            let (_, cert) = back.resolve().unwrap();
            assert!(verify_geq_c(&cert).unwrap().ok());
            if kind == CertKind::GeqB {
                assert!(verify_geq_b(&cert).unwrap().ok());
            }
        }
    }

    #[test]
    fn geq_b_without_defect_group_is_rejected() {
        let mut c = CertificateJson::generate("v4-c2-p2", None, CertKind::GeqC).unwrap();
        c.kind = CertKind::GeqB;
        assert!(matches!(CertificateJson::parse(&c.to_json()), Err(Error::SchemaError(_))));
    }

    #[test]
    fn wrong_shape_is_a_schema_error() {
        let mut c = CertificateJson::generate("v4-c2-p2", None, CertKind::GeqC).unwrap();
        c.iso.push(vec![0]);
        assert!(matches!(c.resolve(), Err(Error::SchemaError(_))));
        assert!(matches!(CertificateJson::parse("{\"schema\":\"other\"}"), Err(Error::SchemaError(_))));
    }
}
