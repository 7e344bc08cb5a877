use std::fmt::Write as _;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use deltahull::budget::Budgets;
use deltahull::deep::enumerate_deep_bases;
use deltahull::generators::{generate_suite, GeneratedInstance, SuiteSpec};
use deltahull::hull::IntegerHull;
use deltahull::instance::write_instance;
use deltahull::polyhedron::Polyhedron;
use deltahull::subdet::{delta, delta_k, profile};
use deltahull::theory::{bound_formulas, gamma_bruteforce, verify_instance, VerificationReport};
use deltahull::Error;

use crate::report::{int, point, rat, sha256_hex, ReportDocument, Source};

/// A command's result in all output formats.
pub struct Rendered {
    pub text: String,
    pub csv: String,
    pub json: String,
}

impl Rendered {
    fn new<T: Serialize>(value: &T, text: String, csv: String) -> Self {
        let mut json = serde_json::to_string_pretty(value).expect("serializable");
        json.push('\n');
        Rendered { text, csv, json }
    }
}

/// A parsed instance file with the hash of its bytes.
pub struct Loaded {
    pub path: String,
    pub sha256: String,
    pub polyhedron: Polyhedron,
}

#[derive(Serialize)]
struct Echo {
    m: usize,
    n: usize,
    sha256: String,
}

fn echo(l: &Loaded) -> Echo {
    Echo {
        m: l.polyhedron.num_constraints(),
        n: l.polyhedron.dim(),
        sha256: l.sha256.clone(),
    }
}

fn fmt_point(p: &[String]) -> String {
    format!("({})", p.join(", "))
}

#[derive(Serialize)]
struct KEntry {
    k: usize,
    delta: String,
}

#[derive(Serialize)]
struct DeltaOut {
    instance: Echo,
    delta_1: String,
    delta: String,
    delta_ext: String,
    per_k: Vec<KEntry>,
}

pub fn delta_cmd(l: &Loaded, ks: &[usize], table: bool, budgets: &Budgets) -> Result<Rendered, Error> {
    let p = &l.polyhedron;
    let prof = profile(p.a(), p.b(), false, budgets)?;
    let mut wanted: Vec<usize> = ks.to_vec();
    if table {
        wanted.extend(1..=p.dim().min(p.num_constraints()));
    }
    wanted.sort_unstable();
    wanted.dedup();
    let per_k = wanted
        .iter()
        .map(|&k| {
            Ok(KEntry {
                k,
                delta: int(&delta_k(p.a(), k, budgets)?),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let out = DeltaOut {
        instance: echo(l),
        delta_1: int(&prof.delta_1),
        delta: int(&prof.delta_rank),
        delta_ext: int(&prof.delta_ext),
        per_k,
    };
    let mut text = format!(
        "Δ_1 = {}\nΔ = {}\nΔ_ext = {}\n",
        out.delta_1, out.delta, out.delta_ext
    );
    let mut csv = String::from("quantity,value\n");
    let _ = writeln!(csv, "delta_1,{}\ndelta,{}\ndelta_ext,{}", out.delta_1, out.delta, out.delta_ext);
    for e in &out.per_k {
        let _ = writeln!(text, "Δ_{} = {}", e.k, e.delta);
        let _ = writeln!(csv, "delta_{},{}", e.k, e.delta);
    }
    Ok(Rendered::new(&out, text, csv))
}

fn vertex_csv(n: usize, vertices: &[Vec<String>]) -> String {
    let header: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let mut csv = header.join(",") + "\n";
    for v in vertices {
        let _ = writeln!(csv, "{}", v.join(","));
    }
    csv
}

#[derive(Serialize)]
struct HullOut {
    instance: Echo,
    lattice_points: usize,
    dim: Option<usize>,
    faces_per_dim: Vec<usize>,
    vertices: Vec<Vec<String>>,
}

pub fn hull_cmd(l: &Loaded, budgets: &Budgets) -> Result<Rendered, Error> {
    let h = IntegerHull::compute(&l.polyhedron, budgets)?;
    let out = HullOut {
        instance: echo(l),
        lattice_points: h.lattice.len(),
        dim: h.dim(),
        faces_per_dim: h.faces_per_dim(),
        vertices: h.vertices.iter().map(|v| point(v)).collect(),
    };
    let mut text = format!("lattice points: {}\n", out.lattice_points);
    match out.dim {
        Some(d) => {
            let _ = writeln!(text, "dimension: {d}");
            let _ = writeln!(text, "faces per dimension: {:?}", out.faces_per_dim);
        }
        None => text.push_str("integer hull is empty\n"),
    }
    let _ = writeln!(text, "vertices: {}", out.vertices.len());
    for v in &out.vertices {
        let _ = writeln!(text, "  {}", fmt_point(v));
    }
    let csv = vertex_csv(l.polyhedron.dim(), &out.vertices);
    Ok(Rendered::new(&out, text, csv))
}

#[derive(Serialize)]
struct RealVertexOut {
    point: Vec<String>,
    tight_rows: Vec<usize>,
    integral: bool,
}

#[derive(Serialize)]
struct VerticesOut {
    instance: Echo,
    integer_hull: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    real: Option<Vec<RealVertexOut>>,
}

pub fn vertices_cmd(l: &Loaded, real: bool, budgets: &Budgets) -> Result<Rendered, Error> {
    let p = &l.polyhedron;
    let h = IntegerHull::compute(p, budgets)?;
    let real = if real {
        Some(
            p.real_vertices(budgets)?
                .into_iter()
                .map(|v| RealVertexOut {
                    integral: v.is_integral(),
                    point: v.point.iter().map(rat).collect(),
                    tight_rows: v.tight_rows,
                })
                .collect(),
        )
    } else {
        None
    };
    let out = VerticesOut {
        instance: echo(l),
        integer_hull: h.vertices.iter().map(|v| point(v)).collect(),
        real,
    };
    let mut text = format!("integer hull vertices: {}\n", out.integer_hull.len());
    for v in &out.integer_hull {
        let _ = writeln!(text, "  {}", fmt_point(v));
    }
    let mut csv = String::from("kind,point,tight_rows\n");
    for v in &out.integer_hull {
        let _ = writeln!(csv, "hull,{},", v.join(" "));
    }
    if let Some(rv) = &out.real {
        let _ = writeln!(text, "real vertices: {}", rv.len());
        for v in rv {
            let _ = writeln!(
                text,
                "  {}  tight {:?}{}",
                fmt_point(&v.point),
                v.tight_rows,
                if v.integral { "" } else { "  fractional" }
            );
            let tight: Vec<String> = v.tight_rows.iter().map(|i| i.to_string()).collect();
            let _ = writeln!(csv, "real,{},{}", v.point.join(" "), tight.join(" "));
        }
    }
    Ok(Rendered::new(&out, text, csv))
}

#[derive(Serialize)]
struct CertificateOut {
    normal: Vec<String>,
    offset: String,
    margin: String,
}

#[derive(Serialize)]
struct FaceOut {
    face: usize,
    dim: usize,
    improper: bool,
    vertex_indices: Vec<usize>,
    lattice_members: usize,
    certificate: CertificateOut,
}

#[derive(Serialize)]
struct FacesOut {
    instance: Echo,
    vertices: Vec<Vec<String>>,
    faces: Vec<FaceOut>,
}

pub fn faces_cmd(l: &Loaded, budgets: &Budgets) -> Result<Rendered, Error> {
    let h = IntegerHull::compute(&l.polyhedron, budgets)?;
    let out = FacesOut {
        instance: echo(l),
        vertices: h.vertices.iter().map(|v| point(v)).collect(),
        faces: h
            .faces
            .iter()
            .enumerate()
            .map(|(i, f)| FaceOut {
                face: i,
                dim: f.dim,
                improper: f.improper,
                vertex_indices: f.vertex_indices.clone(),
                lattice_members: f.lattice_members.len(),
                certificate: CertificateOut {
                    normal: f.certificate.normal.iter().map(rat).collect(),
                    offset: rat(&f.certificate.offset),
                    margin: rat(&f.certificate.margin),
                },
            })
            .collect(),
    };
    let mut text = String::new();
    for (i, v) in out.vertices.iter().enumerate() {
        let _ = writeln!(text, "v{i} = {}", fmt_point(v));
    }
    let mut csv = String::from("face,dim,improper,vertices,lattice_members,normal,offset,margin\n");
    for f in &out.faces {
        let names: Vec<String> = f.vertex_indices.iter().map(|i| format!("v{i}")).collect();
        let _ = writeln!(
            text,
            "face {} dim {}{}: {{{}}}  {} lattice points  normal ({}) offset {} margin {}",
            f.face,
            f.dim,
            if f.improper { " (improper)" } else { "" },
            names.join(", "),
            f.lattice_members,
            f.certificate.normal.join(", "),
            f.certificate.offset,
            f.certificate.margin,
        );
        let idx: Vec<String> = f.vertex_indices.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{}",
            f.face,
            f.dim,
            f.improper,
            idx.join(" "),
            f.lattice_members,
            f.certificate.normal.join(" "),
            f.certificate.offset,
            f.certificate.margin,
        );
    }
    Ok(Rendered::new(&out, text, csv))
}

#[derive(Serialize)]
struct DeepBaseOut {
    rows: Vec<usize>,
    det_abs: String,
    witness: Vec<String>,
}

#[derive(Serialize)]
struct DeepBasesOut {
    instance: Echo,
    delta: String,
    beta: usize,
    bases: Vec<DeepBaseOut>,
}

pub fn deep_bases_cmd(l: &Loaded, d: Option<BigInt>, budgets: &Budgets) -> Result<Rendered, Error> {
    let p = &l.polyhedron;
    let d = match d {
        Some(d) => d,
        None => delta(p.a(), budgets)?,
    };
    let bases = enumerate_deep_bases(p, &d, budgets)?;
    let out = DeepBasesOut {
        instance: echo(l),
        delta: int(&d),
        beta: bases.len(),
        bases: bases
            .iter()
            .map(|b| DeepBaseOut {
                rows: b.rows.clone(),
                det_abs: int(&b.det_abs),
                witness: b.witness.iter().map(rat).collect(),
            })
            .collect(),
    };
    let mut text = format!("Δ = {}\nβ = {}\n", out.delta, out.beta);
    let mut csv = String::from("rows,det_abs,witness\n");
    for b in &out.bases {
        let _ = writeln!(text, "  {:?}  |det| = {}  witness {}", b.rows, b.det_abs, fmt_point(&b.witness));
        let rows: Vec<String> = b.rows.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(csv, "{},{},{}", rows.join(" "), b.det_abs, b.witness.join(" "));
    }
    Ok(Rendered::new(&out, text, csv))
}

#[derive(Serialize)]
struct GammaOut {
    n: usize,
    delta: u64,
    gamma: usize,
    witness: Vec<Vec<String>>,
    erdos_furedi: String,
    brass: String,
}

pub fn gamma_cmd(n: usize, d: u64, budgets: &Budgets) -> Result<Rendered, Error> {
    let g = gamma_bruteforce(n, d, budgets)?;
    let db = BigInt::from(d);
    let out = GammaOut {
        n,
        delta: d,
        gamma: g.value,
        witness: g.witness.iter().map(|v| point(v)).collect(),
        erdos_furedi: rat(&deltahull::theory::bounds::erdos_furedi(n, &db)),
        brass: int(&deltahull::theory::bounds::brass(n, &db)),
    };
    let mut text = format!(
        "γ({n}, {d}) = {}\nbounds: {} <= γ <= {}\nwitness:\n",
        out.gamma, out.erdos_furedi, out.brass
    );
    for v in &out.witness {
        let _ = writeln!(text, "  {}", fmt_point(v));
    }
    let csv = vertex_csv(n, &out.witness);
    Ok(Rendered::new(&out, text, csv))
}

#[derive(Serialize)]
struct BoundsOut {
    n: usize,
    m: usize,
    delta: String,
    main_bound: String,
    xi: String,
    brass: String,
    erdos_furedi: String,
}

pub fn bounds_cmd(n: usize, m: usize, d: &BigInt) -> Result<Rendered, Error> {
    let b = bound_formulas(n, m, d)?;
    let out = BoundsOut {
        n,
        m,
        delta: int(d),
        main_bound: int(&b.main_bound),
        xi: int(&b.xi),
        brass: int(&b.brass),
        erdos_furedi: rat(&b.erdos_furedi),
    };
    let text = format!(
        "main bound 2·C(m,n)·Δ^(n-1) = {}\nξ(n,m) = {}\nBrass 2·Δ^(n-1) = {}\nErdős–Füredi (4/n)·Δ^(n-2) = {}\n",
        out.main_bound, out.xi, out.brass, out.erdos_furedi
    );
    let csv = format!(
        "n,m,delta,main_bound,xi,brass,erdos_furedi\n{},{},{},{},{},{},{}\n",
        n, m, out.delta, out.main_bound, out.xi, out.brass, out.erdos_furedi
    );
    Ok(Rendered::new(&out, text, csv))
}

#[derive(Serialize)]
struct GenOut {
    id: String,
    m: usize,
    n: usize,
    sha256: String,
    a: Vec<Vec<String>>,
    b: Vec<String>,
}

/// Canonical instance text of a generated instance, headed by its id.
pub fn instance_text(g: &GeneratedInstance) -> String {
    write_instance(&g.polyhedron, Some(&g.id))
}

pub fn gen_cmd(suite: &SuiteSpec, budgets: &Budgets) -> Result<(Vec<GeneratedInstance>, Rendered), Error> {
    let instances = generate_suite(suite, budgets)?;
    let outs: Vec<GenOut> = instances
        .iter()
        .map(|g| {
            let p = &g.polyhedron;
            GenOut {
                id: g.id.clone(),
                m: p.num_constraints(),
                n: p.dim(),
                sha256: sha256_hex(instance_text(g).as_bytes()),
                a: p.a().row_iter().map(point).collect(),
                b: point(p.b()),
            }
        })
        .collect();
    let text: String = instances.iter().map(instance_text).collect::<Vec<_>>().join("\n");
    let mut csv = String::from("id,row,coefficients,rhs\n");
    for o in &outs {
        for (i, (row, b)) in o.a.iter().zip(&o.b).enumerate() {
            let _ = writeln!(csv, "{},{},{},{}", crate::report::csv_field(&o.id), i, row.join(" "), b);
        }
    }
    let rendered = if outs.len() == 1 {
        Rendered::new(&outs[0], text, csv)
    } else {
        Rendered::new(&outs, text, csv)
    };
    Ok((instances, rendered))
}

pub fn verify_file(l: &Loaded, d: Option<BigInt>, budgets: &Budgets) -> Result<ReportDocument, Error> {
    let r = verify_instance(&l.path, &l.polyhedron, d, budgets)?;
    Ok(ReportDocument::new(
        Source::File { path: l.path.clone() },
        &[r],
        vec![l.sha256.clone()],
    ))
}

pub fn verify_suites(
    suites: &[SuiteSpec],
    d: Option<BigInt>,
    budgets: &Budgets,
) -> Result<ReportDocument, Error> {
    let mut instances = Vec::new();
    for s in suites {
        instances.extend(generate_suite(s, budgets)?);
    }
    let reports: Vec<VerificationReport> = instances
        .par_iter()
        .map(|g| verify_instance(&g.id, &g.polyhedron, d.clone(), budgets))
        .collect::<Result<_, Error>>()?;
    let hashes = instances
        .iter()
        .map(|g| sha256_hex(instance_text(g).as_bytes()))
        .collect();
    let specs = suites
        .iter()
        .map(|s| format!("{},count={}", s.spec.id(), s.count))
        .collect();
    Ok(ReportDocument::new(Source::Suite { specs }, &reports, hashes))
}
