use serde::{Deserialize, Serialize};

use crate::catalog::{instance, named_group, CatalogFile, Instance, Witness};
use crate::certificate::{CertKind, CertificateJson};
use crate::error::{Error, Result};
use crate::field::Fq;
use crate::groups::{FiniteGroup, Subgroup};
use crate::report::{Check, Report};
use crate::triples::WreathScope;

use super::{
    brauer_diagram_suite, centralizer_tensor_suite, geq_b_suite, geq_c_suite, harris_knorr_suite, instance_witnesses,
    normal_subgroup_named, parse_group_pairs, radical_tensor_suite, wreath_crossed_suite, wreath_derived_suite,
    wreath_morita_suite, wreath_relation_suite, Named, SUITES,
};

/// Parameters of one suite run. Unused fields are ignored by suites that
/// do not need them.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteSpec {
    pub suite: String,
    /// Characteristic of `k`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    /// Degree of `k` over its prime field.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<String>,
    /// `G:N,…` pairs, or `G:Q` for the Brauer square.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub groups: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
    /// Certificate file contents.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cert: Option<String>,
    /// Also check `X≀C₃` at `p = 2` on this instance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_instance: Option<String>,
}

impl SuiteSpec {
    fn field(&self) -> Result<Fq> {
        let p = self.p.ok_or_else(|| Error::BadParams(format!("{} needs --p", self.suite)))?;
        Fq::new(p, self.m.unwrap_or(1))
    }

    fn n_or(&self, default: usize) -> usize {
        self.n.unwrap_or(default)
    }

    fn instance(&self) -> Result<Instance> {
        let name =
            self.instance.as_deref().ok_or_else(|| Error::BadParams(format!("{} needs --instance", self.suite)))?;
        instance(name, self.ell)
    }

    fn groups(&self) -> Result<&str> {
        self.groups.as_deref().ok_or_else(|| Error::BadParams(format!("{} needs --groups", self.suite)))
    }

    fn witness_list(&self, default: &[Witness]) -> Result<Vec<Witness>> {
        if self.witnesses.is_empty() {
            return Ok(default.to_vec());
        }
        self.witnesses.iter().map(|w| Witness::parse(w)).collect()
    }

    fn single_witness(&self) -> Result<Witness> {
        match self.witness_list(&[Witness::Regular])?.as_slice() {
            [w] => Ok(*w),
            _ => Err(Error::BadParams(format!("{} takes a single witness", self.suite))),
        }
    }

    fn algebras(&self, extra: Option<&CatalogFile>) -> Result<Vec<Named>> {
        if self.groups.is_none() {
            let inst = self.instance()?;
            return Ok(vec![Named { name: inst.name.to_string(), alg: inst.ext.algebra.clone() }]);
        }
        parse_group_pairs(self.groups()?, &self.field()?, extra)
    }

    /// The certificate from `cert`, or the restriction certificate of the
    /// instance.
    fn certificate(&self, kind: CertKind) -> Result<CertificateJson> {
        match &self.cert {
            Some(text) => CertificateJson::parse(text),
            None => CertificateJson::generate(
                self.instance
                    .as_deref()
                    .ok_or_else(|| Error::BadParams(format!("{} needs --cert or --instance", self.suite)))?,
                self.ell,
                kind,
            ),
        }
    }
}

/// `Q` given either as a catalog id (a normal subgroup is preferred) or as
/// `;`-separated permutation generators like `[1,0,3,2]`.
pub fn subgroup_spec(g: &FiniteGroup, spec: &str, extra: Option<&CatalogFile>) -> Result<Subgroup> {
    let spec = spec.trim();
    if spec.starts_with('[') {
        let gens = spec
            .split(';')
            .map(|p| {
                let images = p
                    .trim()
                    .trim_start_matches('[')
                    .trim_end_matches(']')
                    .split(',')
                    .map(|x| x.trim().parse::<u32>().map_err(|e| Error::BadParams(format!("{p:?}: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                g.find_perm(&images).ok_or_else(|| Error::BadParams(format!("{p} is not an element of G")))
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(g.generated(&gens));
    }
    if let Ok(s) = normal_subgroup_named(g, spec, extra) {
        return Ok(s);
    }
    let h = named_group(spec, extra)?;
    g.all_subgroups()
        .into_iter()
        .filter(|s| s.order() == h.order())
        .find(|s| crate::brauer::Inclusion::of_subgroup(g, s).map(|(sg, _)| sg.is_isomorphic(&h)).unwrap_or(false))
        .ok_or_else(|| Error::BadParams(format!("no subgroup isomorphic to {spec}")))
}

fn scope_of(suite: &str) -> WreathScope {
    match suite {
        "geq-c-wreath" => WreathScope::GeqC,
        "block-wreath" => WreathScope::Block,
        _ => WreathScope::Full,
    }
}

/// Runs the named suite; `seed` drives sampled checks.
pub fn run_checks(spec: &SuiteSpec, seed: u64, extra: Option<&CatalogFile>) -> Result<Vec<Check>> {
    match spec.suite.as_str() {
        "radical-tensor" => radical_tensor_suite(&spec.algebras(extra)?, spec.n_or(2)),
        "centralizer-tensor" => centralizer_tensor_suite(&spec.algebras(extra)?),
        "brauer-diagram" => {
            let f = spec.field()?;
            let (gid, qid) = spec
                .groups()?
                .split_once(':')
                .ok_or_else(|| Error::BadParams("brauer-diagram expects --groups G:Q".into()))?;
            let g = named_group(gid.trim(), extra)?;
            let q = subgroup_spec(&g, qid, extra)?;
            brauer_diagram_suite(&g, &q, &f, spec.n_or(2))
        }
        "wreath-crossed" => {
            let n = spec.n_or(2);
            let mut out = Vec::new();
            for a in spec.algebras(extra)? {
                out.extend(wreath_crossed_suite(&a, n, seed)?);
            }
            Ok(out)
        }
        "wreath-morita" => {
            let inst = spec.instance()?;
            wreath_morita_suite(&inst, &spec.witness_list(&[Witness::Regular, Witness::Morita])?, spec.n_or(2))
        }
        "wreath-derived" => {
            let inst = spec.instance()?;
            let xs =
                instance_witnesses(&inst, &spec.witness_list(&[Witness::Regular, Witness::Shift, Witness::TwoTerm])?)?;
            let sigma = spec.sigma_instance.as_deref().map(|s| instance(s, None)).transpose()?;
            wreath_derived_suite(&inst.ext.algebra, &inst.ext2.algebra, &xs, spec.n_or(2), sigma.as_ref())
        }
        "harris-knorr" => harris_knorr_suite(&spec.instance()?),
        "geq-c" => {
            let (_, cert) = spec.certificate(CertKind::GeqC)?.resolve()?;
            Ok(geq_c_suite(&cert))
        }
        "geq-b" => {
            let c = spec.certificate(CertKind::GeqB)?;
            if c.kind != CertKind::GeqB {
                return Err(Error::SchemaError("geq-b needs a geq-b certificate".into()));
            }
            let (inst, cert) = c.resolve()?;
            geq_b_suite(&inst, &spec.witness_list(&[Witness::Regular])?, &cert)
        }
        "geq-c-wreath" | "block-wreath" | "geq-b-wreath" => {
            let inst = spec.instance()?;
            wreath_relation_suite(&inst, spec.single_witness()?, spec.n_or(2), scope_of(&spec.suite))
        }
        other => Err(Error::BadParams(format!("unknown suite {other:?}; known: {}", SUITES.join(", ")))),
    }
}

/// Runs a suite and wraps the checks in a report. `seed` is recorded for
/// reproducibility of sampled checks.
pub fn run_suite(spec: &SuiteSpec, seed: u64, extra: Option<&CatalogFile>) -> Result<Report> {
    let checks = run_checks(spec, seed, extra)?;
    let mut params = serde_json::to_value(spec).expect("suite specs serialize");
    if let Some(obj) = params.as_object_mut() {
        obj.remove("suite");
        obj.remove("cert");
    }
    Ok(Report::new(spec.suite.clone(), params, seed, checks))
}

/// Verifies a certificate file according to its kind.
pub fn certify(text: &str, seed: u64) -> Result<Report> {
    let c = CertificateJson::parse(text)?;
    let suite = match c.kind {
        CertKind::GeqC => "geq-c",
        CertKind::GeqB => "geq-b",
    };
    let spec = SuiteSpec { suite: suite.into(), cert: Some(text.to_string()), ..Default::default() };
    let checks = run_checks(&spec, seed, None)?;
    let params = serde_json::json!({ "instance": c.instance, "ell": c.ell, "kind": suite });
    Ok(Report::new("certify", params, seed, checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(suite: &str) -> SuiteSpec {
        SuiteSpec { suite: suite.into(), ..Default::default() }
    }

    #[test]
    fn radical_tensor_from_flags() {
        let s = SuiteSpec { p: Some(3), groups: Some("S3:A3,C2:1".into()), n: Some(2), ..spec("radical-tensor") };
        let r = run_suite(&s, 0, None).unwrap();
        assert!(r.ok, "{}", r.to_json());
        assert_eq!(r.to_json(), run_suite(&s, 0, None).unwrap().to_json());
        assert!(!r.to_json().contains("\"cert\""));
    }

    #[test]
    fn brauer_square_with_permutation_generators() {
        let s = SuiteSpec { p: Some(2), groups: Some("S4:[1,0,3,2]".into()), ..spec("brauer-diagram") };
        assert!(run_suite(&s, 0, None).unwrap().ok);
        let s = SuiteSpec { p: Some(2), groups: Some("S4:[1,0,3]".into()), ..spec("brauer-diagram") };
        assert!(matches!(run_suite(&s, 0, None), Err(Error::BadParams(_))));
    }

    #[test]
    fn missing_parameters_are_bad_params() {
        for name in ["radical-tensor", "wreath-morita", "harris-knorr", "geq-c", "block-wreath", "no-such-suite"] {
            assert!(matches!(run_checks(&spec(name), 0, None), Err(Error::BadParams(_))), "{name}");
        }
        let s = SuiteSpec {
            instance: Some("v4-c2-p2".into()),
            witnesses: vec!["regular".into(), "shift".into()],
            ..spec("geq-b-wreath")
        };
        assert!(matches!(run_checks(&s, 0, None), Err(Error::BadParams(_))));
    }

    #[test]
    fn certify_round_trip_and_corruption() {
        let c = CertificateJson::generate("s3-a3-p3", None, CertKind::GeqB).unwrap();
        assert!(certify(&c.to_json(), 0).unwrap().ok);
        let mut bad = CertificateJson::generate("s3-a3-p3", None, CertKind::GeqC).unwrap();
        let f = bad.iso[0][0];
        bad.iso[0][0] = if f == 0 { 1 } else { 0 };
        let r = certify(&bad.to_json(), 0).unwrap();
        assert!(!r.ok);
        assert!(r.checks.iter().any(|c| c.witness.is_some()));
    }
}
