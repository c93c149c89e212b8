//! The subcommands. Each produces a [`Report`]: a JSON document, a flat
//! table for CSV output and the list of failed checks.

use std::time::Instant;

use dunkl_core::bi_poly::{bi_coefficients, gram_matrix, racah_spec, recurrence_coeffs, weights_and_norms};
use dunkl_core::bi_rep::{cyclic_transform, module_matrices, verify_module, ModuleReport};
use dunkl_core::harmonics::checks::verify_harmonics;
use dunkl_core::harmonics::overlap::{closed_form_deviation, family, racah_matrix};
use dunkl_core::harmonics::{admissible_indices, dunkl_harmonic, overlap_matrix, Family, SphereFunction};
use dunkl_core::identity::{spectral_checks, verify_all, IdentityReport, SpectrumEntry};
use dunkl_core::operator::OperatorSet;
use dunkl_core::rational::fmt_rational;
use dunkl_core::{Params, Rational, Result};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::config::{Command, RunConfig};

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Table {
        Table { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

pub struct Report {
    pub json: Value,
    pub table: Table,
    pub failures: Vec<String>,
}

pub fn run(config: &RunConfig) -> Result<Report> {
    let start = Instant::now();
    let mut report = match &config.command {
        Command::Verify => verify(config)?,
        Command::Spectrum => spectrum(config)?,
        Command::BiPoly => bi_poly(config)?,
        Command::Repmat => repmat(config)?,
        Command::Harmonics => harmonics(config)?,
        Command::Overlap { check_closed_form } => overlap(config, *check_closed_form)?,
    };
    if let Value::Object(map) = &mut report.json {
        map.insert("all_hold".into(), Value::Bool(report.failures.is_empty()));
        if config.timings {
            map.insert("wall_time_ms".into(), json!(start.elapsed().as_secs_f64() * 1e3));
        }
    }
    Ok(report)
}

fn header(name: &str, params: &Params) -> serde_json::Map<String, Value> {
    let mut map = serde_json::Map::new();
    map.insert("command".into(), json!(name));
    map.insert("params".into(), json!(params));
    map
}

fn q(r: &Rational) -> String {
    fmt_rational(r)
}

fn identity_failure(r: &IdentityReport) -> String {
    match &r.counterexample {
        Some(cx) => format!("{} fails at {}: lhs = {}, rhs = {}", r.name, cx.monomial, cx.lhs, cx.rhs),
        None => format!("{} fails", r.name),
    }
}

/// Spectral entries for degrees 0..=top; mismatches become failures.
fn spectrum_entries(top: u32, params: &Params, failures: &mut Vec<String>) -> Result<Vec<SpectrumEntry>> {
    let mut out = Vec::new();
    for n in 0..=top {
        match spectral_checks(n, params) {
            Ok(e) => out.push(e),
            Err(e @ dunkl_core::Error::SpectralMismatch { .. }) => failures.push(format!("spectrum at degree {n}: {e}")),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn spectrum_row(e: &SpectrumEntry) -> Vec<String> {
    vec![
        e.n.to_string(),
        q(&e.omega_n),
        q(&e.delta_n),
        e.multiplicity.to_string(),
        e.lowest_weight_multiplicity.to_string(),
        q(&e.paired_eigenvalue),
        e.paired_multiplicity.to_string(),
    ]
}

const SPECTRUM_HEADER: [&str; 7] = [
    "N",
    "omega_n",
    "delta_n",
    "multiplicity",
    "lowest_weight_multiplicity",
    "paired_eigenvalue",
    "paired_multiplicity",
];

fn verify(config: &RunConfig) -> Result<Report> {
    let mut identities = verify_all(&config.params, config.dmax)?;
    if !config.timings {
        identities.iter_mut().for_each(|r| r.wall_time_ms = None);
    }
    let mut failures: Vec<String> = identities.iter().filter(|r| !r.holds()).map(identity_failure).collect();
    let spectrum = spectrum_entries(config.dmax, &config.params, &mut failures)?;

    let mut cols = vec!["name", "max_degree", "status", "monomials_checked"];
    if config.timings {
        cols.push("wall_time_ms");
    }
    let mut table = Table::new(&cols);
    for r in &identities {
        let mut row = vec![
            r.name.clone(),
            r.max_degree.to_string(),
            if r.holds() { "holds" } else { "fails" }.to_string(),
            r.monomials_checked.to_string(),
        ];
        if config.timings {
            row.push(r.wall_time_ms.map(|t| t.to_string()).unwrap_or_default());
        }
        table.push(row);
    }

    let mut map = header("verify", &config.params);
    map.insert("dmax".into(), json!(config.dmax));
    map.insert("identities".into(), json!(identities));
    map.insert("spectrum".into(), json!(spectrum));
    Ok(Report { json: Value::Object(map), table, failures })
}

fn spectrum(config: &RunConfig) -> Result<Report> {
    let mut failures = Vec::new();
    let entries = spectrum_entries(config.n, &config.params, &mut failures)?;
    let mut table = Table::new(&SPECTRUM_HEADER);
    entries.iter().for_each(|e| table.push(spectrum_row(e)));
    let mut map = header("spectrum", &config.params);
    map.insert("N".into(), json!(config.n));
    map.insert("entries".into(), json!(entries));
    Ok(Report { json: Value::Object(map), table, failures })
}

fn bi_poly(config: &RunConfig) -> Result<Report> {
    let n = config.n as usize;
    let spec = racah_spec(&config.params, n);
    let data = weights_and_norms(&spec)?;
    let gram = gram_matrix(&spec)?;
    let mut failures = Vec::new();
    for (a, row) in gram.iter().enumerate() {
        for (b, g) in row.iter().enumerate() {
            let want = if a == b { data.norm(a) } else { Rational::zero() };
            if *g != want {
                failures.push(format!("Racah Gram entry ({a},{b}) = {}, expected {}", q(g), q(&want)));
            }
        }
    }

    let mut table = Table::new(&["n", "A_n", "C_n", "u_n", "norm", "x_n", "weight_n", "coefficients"]);
    let mut polys = Vec::new();
    for k in 0..=n {
        let (a, c) = recurrence_coeffs(k, &spec.bi)?;
        let coeffs: Vec<String> = bi_coefficients(k, &spec.bi)?.iter().map(q).collect();
        let u = if k == 0 { String::new() } else { q(&data.u[k - 1]) };
        table.push(vec![
            k.to_string(),
            q(&a),
            q(&c),
            u.clone(),
            q(&data.norm(k)),
            q(&data.grid[k]),
            q(&data.weights[k]),
            coeffs.join(" "),
        ]);
        polys.push(json!({ "n": k, "A": q(&a), "C": q(&c), "norm": q(&data.norm(k)), "coefficients": coeffs }));
    }

    let mut map = header("bi-poly", &config.params);
    map.insert("racah".into(), json!(spec));
    map.insert("grid".into(), json!(data));
    map.insert("polynomials".into(), json!(polys));
    map.insert("gram_diagonal".into(), json!(failures.is_empty()));
    Ok(Report { json: Value::Object(map), table, failures })
}

fn module_failures(label: &str, r: &ModuleReport, failures: &mut Vec<String>) {
    if !r.pass {
        failures.push(format!(
            "{label}: residuals {:?} and K^2 residual {:e} exceed tol {:e}",
            r.anticommutator_residuals, r.casimir_residual, r.tol
        ));
    }
}

fn repmat(config: &RunConfig) -> Result<Report> {
    let m = module_matrices(config.n as usize, &config.params)?;
    let report = verify_module(&m, config.tol);
    let mut failures = Vec::new();
    module_failures("BI module", &report, &mut failures);
    let cyclic: Vec<ModuleReport> = (1..=2)
        .map(|p| {
            let r = verify_module(&cyclic_transform(&m, p), config.tol);
            module_failures(&format!("BI module after {p} cyclic shift(s)"), &r, &mut failures);
            r
        })
        .collect();

    let mut table = Table::new(&["matrix", "row", "col", "value"]);
    for (name, k) in [("K1", &m.k1), ("K2", &m.k2), ("K3", &m.k3)] {
        for i in 0..k.nrows() {
            for j in 0..k.ncols() {
                table.push(vec![name.to_string(), i.to_string(), j.to_string(), k[(i, j)].to_string()]);
            }
        }
    }

    let mut map = header("repmat", &config.params);
    map.insert("module".into(), json!(m));
    map.insert("report".into(), json!(report));
    map.insert("cyclic".into(), json!(cyclic));
    Ok(Report { json: Value::Object(map), table, failures })
}

fn function_row(family: &str, f: &SphereFunction) -> Vec<String> {
    vec![family.to_string(), f.label.clone(), f.normalization.to_string(), f.cartesian.to_string()]
}

fn harmonics(config: &RunConfig) -> Result<Report> {
    let n = config.n;
    let params = &config.params;
    let indices = admissible_indices(n);
    let ys: Vec<SphereFunction> = indices.iter().map(|i| dunkl_harmonic(*i, params)).collect::<Result<_>>()?;
    let k3_basis = family(n, params, Family::Y)?;
    let k1_basis = family(n, params, Family::Z)?;
    let report = verify_harmonics(n, params, &OperatorSet::new(params))?;
    let mut failures = report.failures.clone();
    if report.max_orthonormality_residual() > config.tol {
        failures.push(format!(
            "orthonormality residual {:e} exceeds tol {:e}",
            report.max_orthonormality_residual(),
            config.tol
        ));
    }

    let mut table = Table::new(&["family", "label", "normalization", "cartesian"]);
    ys.iter().for_each(|f| table.push(function_row("harmonic", f)));
    k3_basis.iter().for_each(|f| table.push(function_row("k3_basis", f)));
    k1_basis.iter().for_each(|f| table.push(function_row("k1_basis", f)));

    let harmonics: Vec<Value> = indices
        .iter()
        .zip(&ys)
        .map(|(i, y)| json!({ "index": i, "label": y.label, "cartesian": y.cartesian, "normalization": y.normalization }))
        .collect();
    let mut map = header("harmonics", params);
    map.insert("N".into(), json!(n));
    map.insert("harmonics".into(), json!(harmonics));
    map.insert("k3_basis".into(), json!(k3_basis));
    map.insert("k1_basis".into(), json!(k1_basis));
    map.insert("report".into(), json!(report));
    Ok(Report { json: Value::Object(map), table, failures })
}

fn overlap(config: &RunConfig, check_closed_form: bool) -> Result<Report> {
    let o = overlap_matrix(config.n, &config.params)?;
    let mut failures = Vec::new();
    if o.unitarity_residual > config.tol {
        failures.push(format!("unitarity residual {:e} exceeds tol {:e}", o.unitarity_residual, config.tol));
    }
    let closed = if check_closed_form { Some(racah_matrix(config.n as usize, &config.params)?) } else { None };
    let deviation = closed.as_ref().map(|c| closed_form_deviation(&o.matrix, c));
    if let Some(d) = deviation {
        if d > config.tol {
            failures.push(format!("closed-form deviation {d:e} exceeds tol {:e}", config.tol));
        }
    }

    let mut cols = vec!["S", "K", "overlap"];
    if closed.is_some() {
        cols.push("closed_form");
    }
    let mut table = Table::new(&cols);
    for s in 0..o.matrix.nrows() {
        for k in 0..o.matrix.ncols() {
            let mut row = vec![s.to_string(), k.to_string(), o.matrix[(s, k)].to_string()];
            if let Some(c) = &closed {
                row.push(c[(s, k)].to_string());
            }
            table.push(row);
        }
    }

    let mut map = header("overlap", &config.params);
    map.insert("overlap".into(), json!(o));
    if let (Some(c), Some(d)) = (&closed, deviation) {
        let rows: Vec<Vec<f64>> = c.row_iter().map(|r| r.iter().copied().collect()).collect();
        map.insert("closed_form".into(), json!(rows));
        map.insert("closed_form_deviation".into(), json!(d));
    }
    Ok(Report { json: Value::Object(map), table, failures })
}
