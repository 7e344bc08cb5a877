//! The verification report document.
//!
//! Field order follows declaration order and every number that could exceed
//! 64 bits is a decimal string, so equal inputs serialize to equal bytes.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use sha2::{Digest, Sha256};

use deltahull::theory::{FaceCheck, VerificationReport, VertexCheck};

pub const SCHEMA_VERSION: u32 = 1;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn int(x: &BigInt) -> String {
    x.to_string()
}

pub fn rat(x: &BigRational) -> String {
    x.to_string()
}

pub fn point(v: &[BigInt]) -> Vec<String> {
    v.iter().map(int).collect()
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Source {
    File { path: String },
    Suite { specs: Vec<String> },
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub source: Source,
    pub instances: Vec<InstanceReport>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceEcho {
    pub id: String,
    pub m: usize,
    pub n: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DeltaEcho {
    pub delta_1: String,
    pub delta: String,
    pub delta_ext: String,
    pub delta_used: String,
    pub overridden: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Counts {
    pub lattice_points: usize,
    pub hull_vertices: usize,
    pub faces_per_dim: Vec<usize>,
    pub beta: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FaceEntry {
    pub face: usize,
    pub dim: usize,
    pub improper: bool,
    pub near_tight_rows: Vec<usize>,
    pub rank: usize,
    pub required_rank: usize,
    pub rank_ok: bool,
    pub max_supp: usize,
    pub supp_limit: usize,
    pub supp_ok: bool,
    pub pointwise_ok: bool,
}

impl From<&FaceCheck> for FaceEntry {
    fn from(f: &FaceCheck) -> Self {
        FaceEntry {
            face: f.face,
            dim: f.dim,
            improper: f.improper,
            near_tight_rows: f.near_tight_rows.clone(),
            rank: f.rank,
            required_rank: f.required_rank,
            rank_ok: f.rank_ok,
            max_supp: f.max_supp,
            supp_limit: f.supp_limit,
            supp_ok: f.supp_ok,
            pointwise_ok: f.pointwise_ok,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Theorem1Section {
    pub ok: bool,
    pub faces_checked: usize,
    pub violations: usize,
    pub faces: Vec<FaceEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BaseEntry {
    pub vertex: Vec<String>,
    pub base: Option<Vec<usize>>,
    pub det_abs: Option<String>,
    pub base_slack: Option<String>,
    pub ok: bool,
}

impl From<&VertexCheck> for BaseEntry {
    fn from(v: &VertexCheck) -> Self {
        BaseEntry {
            vertex: point(&v.vertex),
            base: v.base.as_ref().map(|b| b.rows.clone()),
            det_abs: v.base.as_ref().map(|b| int(&b.det_abs)),
            base_slack: v.base_slack.as_ref().map(int),
            ok: v.prop1_ok,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Prop1Section {
    pub ok: bool,
    pub vertices: Vec<BaseEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SupportForm {
    pub threshold: String,
    pub ok: bool,
    /// `|supp|` per hull vertex, in vertex order.
    pub sizes: Vec<usize>,
    /// Indices of vertices exceeding the limit.
    pub failures: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Prop2Section {
    pub limit: usize,
    pub literal: SupportForm,
    pub derived: SupportForm,
}

#[derive(Debug, Clone, Serialize)]
pub struct Prop3Section {
    pub vertex_count: usize,
    pub bound: String,
    pub ratio: String,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Corollary1Section {
    pub prop1: Prop1Section,
    pub prop2: Prop2Section,
    pub prop3: Prop3Section,
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma1Section {
    pub beta: usize,
    pub gamma: String,
    pub gamma_source: &'static str,
    pub bound: String,
    pub vertex_count: usize,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsSection {
    pub main_bound: String,
    pub xi: String,
    pub brass: String,
    pub erdos_furedi: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceReport {
    pub instance: InstanceEcho,
    pub delta: DeltaEcho,
    pub counts: Counts,
    pub vacuous: bool,
    pub vertices: Vec<Vec<String>>,
    pub theorem1: Theorem1Section,
    pub corollary1: Corollary1Section,
    pub lemma1: Lemma1Section,
    pub bounds: BoundsSection,
    pub ok: bool,
}

fn support_form(threshold: &BigInt, sizes: Vec<usize>, flags: impl Iterator<Item = bool>) -> SupportForm {
    let failures: Vec<usize> = flags.enumerate().filter(|(_, ok)| !ok).map(|(i, _)| i).collect();
    SupportForm {
        threshold: int(threshold),
        ok: failures.is_empty(),
        sizes,
        failures,
    }
}

impl InstanceReport {
    pub fn new(r: &VerificationReport, sha256: String) -> Self {
        let c = &r.corollary1;
        let literal = &r.delta - 1;
        InstanceReport {
            instance: InstanceEcho {
                id: r.id.clone(),
                m: r.m,
                n: r.n,
                sha256,
            },
            delta: DeltaEcho {
                delta_1: int(&r.profile.delta_1),
                delta: int(&r.profile.delta_rank),
                delta_ext: int(&r.profile.delta_ext),
                delta_used: int(&r.delta),
                overridden: r.delta_overridden,
            },
            counts: Counts {
                lattice_points: r.lattice_points,
                hull_vertices: r.vertices.len(),
                faces_per_dim: r.faces_per_dim.clone(),
                beta: r.lemma1.beta,
            },
            vacuous: r.vacuous,
            vertices: r.vertices.iter().map(|v| point(v)).collect(),
            theorem1: Theorem1Section {
                ok: r.theorem1_ok(),
                faces_checked: r.theorem1.len(),
                violations: r.theorem1_violations(),
                faces: r.theorem1.iter().map(FaceEntry::from).collect(),
            },
            corollary1: Corollary1Section {
                prop1: Prop1Section {
                    ok: c.prop1_ok,
                    vertices: c.vertices.iter().map(BaseEntry::from).collect(),
                },
                prop2: Prop2Section {
                    limit: c.supp_limit,
                    literal: support_form(
                        &literal,
                        c.vertices.iter().map(|v| v.supp_literal).collect(),
                        c.vertices.iter().map(|v| v.prop2_literal_ok),
                    ),
                    derived: support_form(
                        &r.delta,
                        c.vertices.iter().map(|v| v.supp_derived).collect(),
                        c.vertices.iter().map(|v| v.prop2_derived_ok),
                    ),
                },
                prop3: Prop3Section {
                    vertex_count: c.vertex_count,
                    bound: int(&c.main_bound),
                    ratio: rat(&c.ratio),
                    ok: c.prop3_ok,
                },
            },
            lemma1: Lemma1Section {
                beta: r.lemma1.beta,
                gamma: int(&r.lemma1.gamma),
                gamma_source: r.lemma1.gamma_source.as_str(),
                bound: int(&r.lemma1.bound),
                vertex_count: r.lemma1.vertex_count,
                ok: r.lemma1.ok,
            },
            bounds: BoundsSection {
                main_bound: int(&r.bounds.main_bound),
                xi: int(&r.bounds.xi),
                brass: int(&r.bounds.brass),
                erdos_furedi: rat(&r.bounds.erdos_furedi),
            },
            ok: r.ok(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub instances: usize,
    pub vacuous: usize,
    pub faces_checked: usize,
    pub theorem1_violations: usize,
    pub lemma1_failures: usize,
    pub prop1_failures: usize,
    pub prop2_literal_failures: usize,
    pub prop2_derived_failures: usize,
    pub prop3_failures: usize,
    pub max_ratio: String,
    pub ok: bool,
}

impl Summary {
    pub fn new(reports: &[VerificationReport]) -> Self {
        let count = |f: &dyn Fn(&VerificationReport) -> bool| reports.iter().filter(|r| f(r)).count();
        let max_ratio = reports
            .iter()
            .map(|r| r.corollary1.ratio.clone())
            .max()
            .unwrap_or_else(BigRational::zero);
        Summary {
            instances: reports.len(),
            vacuous: count(&|r| r.vacuous),
            faces_checked: reports.iter().map(|r| r.theorem1.len()).sum(),
            theorem1_violations: reports.iter().map(|r| r.theorem1_violations()).sum(),
            lemma1_failures: count(&|r| !r.lemma1.ok),
            prop1_failures: count(&|r| !r.corollary1.prop1_ok),
            prop2_literal_failures: count(&|r| !r.corollary1.prop2_literal_ok),
            prop2_derived_failures: count(&|r| !r.corollary1.prop2_derived_ok),
            prop3_failures: count(&|r| !r.corollary1.prop3_ok),
            max_ratio: rat(&max_ratio),
            ok: reports.iter().all(|r| r.ok()),
        }
    }
}

impl ReportDocument {
    pub fn new(source: Source, reports: &[VerificationReport], hashes: Vec<String>) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            source,
            instances: reports
                .iter()
                .zip(hashes)
                .map(|(r, h)| InstanceReport::new(r, h))
                .collect(),
            summary: Summary::new(reports),
            timing: None,
        }
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for r in &self.instances {
            let _ = writeln!(
                out,
                "{}  m={} n={} Δ={} lattice={} vertices={} β={} faces={} violations={} lemma1={} prop1={} prop2(Δ-1)={} prop2(Δ)={} bound={} ratio={} {}",
                r.instance.id,
                r.instance.m,
                r.instance.n,
                r.delta.delta_used,
                r.counts.lattice_points,
                r.counts.hull_vertices,
                r.counts.beta,
                r.theorem1.faces_checked,
                r.theorem1.violations,
                flag(r.lemma1.ok),
                flag(r.corollary1.prop1.ok),
                flag(r.corollary1.prop2.literal.ok),
                flag(r.corollary1.prop2.derived.ok),
                r.corollary1.prop3.bound,
                r.corollary1.prop3.ratio,
                if r.ok { "OK" } else { "FAIL" },
            );
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "summary: {} instances ({} vacuous), {} faces, {} theorem violations, lemma1 failures {}, prop1 failures {}, prop2 literal failures {}, prop2 derived failures {}, prop3 failures {}, max ratio {}: {}",
            s.instances,
            s.vacuous,
            s.faces_checked,
            s.theorem1_violations,
            s.lemma1_failures,
            s.prop1_failures,
            s.prop2_literal_failures,
            s.prop2_derived_failures,
            s.prop3_failures,
            s.max_ratio,
            if s.ok { "OK" } else { "FAIL" },
        );
        if let Some(t) = &self.timing {
            let _ = writeln!(out, "elapsed: {} ms", t.elapsed_ms);
        }
        out
    }

    pub fn csv(&self) -> String {
        let mut out = String::from(
            "id,m,n,sha256,delta,lattice_points,hull_vertices,beta,gamma,gamma_source,faces,theorem1_violations,lemma1_ok,prop1_ok,prop2_literal_ok,prop2_derived_ok,main_bound,ratio,prop3_ok,ok\n",
        );
        for r in &self.instances {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                csv_field(&r.instance.id),
                r.instance.m,
                r.instance.n,
                r.instance.sha256,
                r.delta.delta_used,
                r.counts.lattice_points,
                r.counts.hull_vertices,
                r.counts.beta,
                r.lemma1.gamma,
                r.lemma1.gamma_source,
                r.theorem1.faces_checked,
                r.theorem1.violations,
                r.lemma1.ok,
                r.corollary1.prop1.ok,
                r.corollary1.prop2.literal.ok,
                r.corollary1.prop2.derived.ok,
                r.corollary1.prop3.bound,
                r.corollary1.prop3.ratio,
                r.corollary1.prop3.ok,
                r.ok,
            );
        }
        out
    }
}

fn flag(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "fail"
    }
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
