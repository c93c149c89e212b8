use std::process::{Command, Output};

fn dunkl(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dunkl"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("DUNKL_THREADS", t),
        None => cmd.env_remove("DUNKL_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn verify_generic_parameters_holds() {
    let o = dunkl(&["verify", "--mu1", "1/2", "--mu2", "1/3", "--mu3", "1/4", "--dmax", "6"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["all_hold"], true);
    let ids = v["identities"].as_array().unwrap();
    assert!(ids.len() > 20);
    assert!(ids.iter().all(|r| r["status"] == "holds" && r.get("wall_time_ms").is_none()));
    assert_eq!(v["spectrum"].as_array().unwrap().len(), 7);
}

#[test]
fn classical_spectrum() {
    let o = dunkl(&["spectrum", "--N", "3", "--mu1", "0", "--mu2", "0", "--mu3", "0", "--format", "csv"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("N,omega_n,delta_n,multiplicity"));
    let delta: Vec<&str> = lines.map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(delta, ["0", "-2", "-6", "-12"]);
}

#[test]
fn generic_spectrum_json() {
    let o = dunkl(&["spectrum", "--N", "2"], None);
    assert_eq!(o.status.code(), Some(0));
    let e = &json(&o)["entries"][2];
    // gamma = 13/12: delta_2 = -2 (2 + 13/6 + 1), omega_2 = -(3 + 13/12).
    assert_eq!(e["delta_n"], "-31/3");
    assert_eq!(e["omega_n"], "-49/12");
    assert_eq!(e["multiplicity"], 5);
}

#[test]
fn parameter_below_bound_is_a_config_error() {
    let o = dunkl(&["verify", "--mu1", "-1", "--mu2", "0", "--mu3", "0"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("mu > -1/2"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn malformed_arguments_are_config_errors() {
    for args in [
        &["verify", "--mu2", "0.3"][..],
        &["verify", "--tol", "-1"],
        &["spectrum", "--N", "x"],
        &["frobnicate"],
        &["verify", "--format", "xml"],
    ] {
        assert_eq!(dunkl(args, None).status.code(), Some(2), "{args:?}");
    }
    let o = dunkl(&["spectrum", "--N", "1"], Some("zero"));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("DUNKL_THREADS"));
}

#[test]
fn failed_check_exits_one_and_names_it() {
    let o = dunkl(&["overlap", "--N", "2", "--tol", "1e-300"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unitarity residual"), "{}", stderr(&o));
    assert_eq!(json(&o)["all_hold"], false);
}

#[test]
fn output_is_byte_identical_across_runs_and_thread_counts() {
    for args in [
        &["overlap", "--N", "3", "--check-closed-form"][..],
        &["harmonics", "--N", "2"],
        &["repmat", "--N", "5", "--mu1", "2/5", "--mu2", "7/3", "--mu3", "1/7"],
        &["bi-poly", "--N", "4", "--format", "csv"],
        &["verify", "--dmax", "3"],
    ] {
        let a = dunkl(args, Some("1"));
        let b = dunkl(args, Some("4"));
        let c = dunkl(args, None);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stdout, c.stdout, "{args:?}");
    }
}

#[test]
fn timings_only_on_request() {
    let o = dunkl(&["verify", "--dmax", "2", "--timings"], None);
    let v = json(&o);
    assert!(v["wall_time_ms"].as_f64().is_some());
    assert!(v["identities"][0]["wall_time_ms"].as_f64().is_some());
    assert!(json(&dunkl(&["verify", "--dmax", "2"], None)).get("wall_time_ms").is_none());
}

#[test]
fn overlap_matches_closed_form() {
    let o = dunkl(&["overlap", "--N", "4", "--check-closed-form", "--mu1", "2/5", "--mu2", "7/3", "--mu3", "1/7"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert!(v["closed_form_deviation"].as_f64().unwrap() <= 1e-8);
    assert!(v["overlap"]["unitarity_residual"].as_f64().unwrap() <= 1e-10);
    assert_eq!(v["overlap"]["matrix"].as_array().unwrap().len(), 5);
}

#[test]
fn bi_poly_gram_is_diagonal() {
    let o = dunkl(&["bi-poly", "--N", "3"], None);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["gram_diagonal"], true);
    // (-1)^3 (3 + 1 + 13/12).
    assert_eq!(v["racah"]["mu"], "-61/12");
    assert_eq!(v["polynomials"][3]["coefficients"].as_array().unwrap().len(), 4);
}

#[test]
fn repmat_reports_residuals_and_cyclic_images() {
    let o = dunkl(&["repmat", "--N", "12"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["module"]["k1"].as_array().unwrap().len(), 13);
    assert_eq!(v["cyclic"].as_array().unwrap().len(), 2);
    assert_eq!(v["report"]["pass"], true);
}

#[test]
fn harmonics_lists_all_functions() {
    let o = dunkl(&["harmonics", "--N", "3", "--format", "csv"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let count = |f: &str| text.lines().filter(|l| l.starts_with(f)).count();
    assert_eq!((count("harmonic,"), count("k3_basis,"), count("k1_basis,")), (7, 4, 4));
}

#[test]
fn report_written_to_file() {
    let dir = std::env::temp_dir().join(format!("dunkl-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spectrum.json");
    let o = dunkl(&["spectrum", "--N", "1", "--output", path.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["entries"].as_array().unwrap().len(), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}
