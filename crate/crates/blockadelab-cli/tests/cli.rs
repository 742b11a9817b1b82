use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_blockadelab"))
}

fn run(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut cmd = bin();
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    let mut child = cmd.spawn().unwrap();
    let mut pipe = child.stdin.take().unwrap();
    if let Some(bytes) = stdin {
        pipe.write_all(bytes).unwrap();
    }
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn ok(args: &[&str], stdin: Option<&[u8]>) -> String {
    let out = run(args, stdin);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("blockadelab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn catalog_piped_into_mwis_gives_nor_language() {
    let nor = ok(&["catalog", "nor"], None);
    let report = json(&ok(&["mwis", "-"], Some(nor.as_bytes())));
    assert_eq!(report["language"], serde_json::json!(["00100", "01001", "10010", "11000"]));
    assert_eq!(report["port_language"], serde_json::json!(["001", "010", "100", "110"]));
    let text = ok(&["mwis", "-", "--text"], Some(nor.as_bytes()));
    assert_eq!(text, "00100\n01001\n10010\n11000\n");
}

#[test]
fn icrs_is_fully_symmetric() {
    let path = scratch("icrs.json");
    std::fs::write(&path, ok(&["catalog", "icrs"], None)).unwrap();
    let report = json(&ok(&["fullsym", path.to_str().unwrap()], None));
    assert_eq!(report["fully_symmetric"], true);
    assert_eq!(report["orbit_count"], 1);
}

#[test]
fn single_vertex_group_is_trivial() {
    let report = json(&ok(&["aut", "-"], Some(br#"{"n":1,"edges":[],"weights":[1]}"#)));
    assert_eq!(report["order"], "1");
}

#[test]
fn nor_orbits_with_ports() {
    let nor = ok(&["catalog", "nor"], None);
    let report = json(&ok(&["orbits", "-"], Some(nor.as_bytes())));
    assert_eq!(report["orbits"].as_array().unwrap().len(), 3);
    let mut port_orbits: Vec<Vec<String>> = serde_json::from_value(report["port_orbits"].clone()).unwrap();
    port_orbits.sort();
    assert_eq!(port_orbits, vec![vec!["001"], vec!["010", "100"], vec!["110"]]);
}

#[test]
fn usage_errors_exit_with_one() {
    let out = run(&["frobnicate"], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(run(&["mwis", "/nonexistent/graph.json"], None).status.code(), Some(1));
    assert_eq!(run(&["catalog", "nand"], None).status.code(), Some(1));
    assert_eq!(run(&["mwis", "-"], Some(b"{not json")).status.code(), Some(1));
}

#[test]
fn basis_cap_refusal_exits_with_two() {
    let fsu = ok(&["catalog", "fsu"], None);
    let out = bin()
        .args(["spectrum", "-", "--omega", "0.1"])
        .env("BLOCKADELAB_MAX_BASIS", "10")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .and_then(|mut child| {
            child.stdin.take().unwrap().write_all(fsu.as_bytes())?;
            child.wait_with_output()
        })
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn spectrum_csv_format() {
    let not = ok(&["catalog", "not"], None);
    let csv = ok(&["spectrum", "-", "--omega", "0", "--levels", "3"], Some(not.as_bytes()));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "level,energy,degeneracy");
    assert_eq!(lines[1], "0,-1.0000000000000000e0,2");
    assert_eq!(lines[2], "1,-1.0000000000000000e0,2");
    assert_eq!(lines[3], "2,0.0000000000000000e0,1");
}

#[test]
fn spectrum_with_flux_labels_and_report() {
    let fsu = ok(&["catalog", "fsu"], None);
    // the three half-turns of the tetrahedron, as image arrays
    let perms = scratch("klein.json");
    std::fs::write(
        &perms,
        "[[1,0,3,2,4,8,9,7,5,6],[3,2,1,0,7,5,9,4,8,6],[2,3,0,1,7,8,6,4,5,9]]",
    )
    .unwrap();
    let report = scratch("report.json");
    let out = run(
        &[
            "spectrum",
            "-",
            "--omega",
            "0.1",
            "--levels",
            "4",
            "--plaquettes",
            perms.to_str().unwrap(),
            "--plaq-omega",
            "0.5",
            "--report",
            report.to_str().unwrap(),
        ],
        Some(fsu.as_bytes()),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "level,energy,degeneracy,flux_0,flux_1,flux_2");
    assert!(lines[1].ends_with(",0,0,0"));
    let doc = json(&std::fs::read_to_string(&report).unwrap());
    std::fs::write(&perms, "[[1,0,2,3,4,5,6,7,8,9]]").unwrap();
    let bad = run(
        &["spectrum", "-", "--omega", "0.1", "--plaquettes", perms.to_str().unwrap()],
        Some(fsu.as_bytes()),
    );
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(doc["unique"], true);
    assert_eq!(doc["equal_weight"], true);
    assert_eq!(doc["flux_labels"][0], serde_json::json!([0, 0, 0]));
}

#[test]
fn loop_tessellation_round_trip() {
    let perms = scratch("loop-perms.json");
    let graph = ok(
        &["tessellate", "loop", "--nx", "1", "--ny", "1", "--boundary", "open", "--plaquettes-out", perms.to_str().unwrap()],
        None,
    );
    let doc = json(&graph);
    assert_eq!(doc["n"], 18);
    let generators: Vec<Vec<usize>> = serde_json::from_str(&std::fs::read_to_string(&perms).unwrap()).unwrap();
    assert_eq!(generators.len(), 4);
    let full = json(&ok(&["fullsym", "-"], Some(graph.as_bytes())));
    assert_eq!(full["fully_symmetric"], true);
}

#[test]
fn literature_models_and_quotients() {
    let zeng = ok(&["tessellate", "zeng", "--nx", "3", "--ny", "3"], None);
    assert_eq!(json(&ok(&["aut", "-"], Some(zeng.as_bytes())))["order"], "72");
    let q = json(&ok(&["quotient", "-"], Some(zeng.as_bytes())));
    assert_eq!(q["graph"]["n"], 27);
    let out = run(&["tessellate", "verresen", "--nx", "1", "--ny", "3"], None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn effective_and_embedding_reports() {
    let nor = ok(&["catalog", "nor"], None);
    let eff = json(&ok(&["effective", "-", "--omega", "0.02", "--order", "2"], Some(nor.as_bytes())));
    assert_eq!(eff["basis"].as_array().unwrap().len(), 4);
    assert_eq!(eff["eigenvalues"].as_array().unwrap().len(), 4);
    let fsu = ok(&["catalog", "fsu"], None);
    let target = scratch("fsu-graph.json");
    std::fs::write(&target, ok(&["catalog", "fsu", "--graph"], None)).unwrap();
    let check = json(&ok(&["embed-check", "-", "--graph", target.to_str().unwrap()], Some(fsu.as_bytes())));
    assert_eq!(check["ok"], true);
    assert_eq!(check["matches_target"], true);
}

#[test]
fn outputs_are_deterministic_and_thread_independent() {
    let fsu = ok(&["catalog", "fsu-extended"], None);
    let args = ["spectrum", "-", "--omega", "0.1", "--levels", "3"];
    let a = ok(&args, Some(fsu.as_bytes()));
    let b = ok(&args, Some(fsu.as_bytes()));
    assert_eq!(a, b);
    let threaded = ok(&["--threads", "1", "spectrum", "-", "--omega", "0.1", "--levels", "3"], Some(fsu.as_bytes()));
    assert_eq!(a.lines().next(), threaded.lines().next());
}
