use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_topoffset"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn synth_offset_validate_metrics() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    assert_eq!(
        code(&run(
            p,
            &[
                "synth",
                "--shape",
                "octahedron",
                "--res",
                "8",
                "-o",
                "o.ttm"
            ]
        )),
        0
    );
    let o = run(
        p,
        &[
            "topo-offset",
            "-i",
            "o.ttm",
            "-o",
            "off.ttm",
            "--delta",
            "4%",
            "--max-iters",
            "2",
            "--report",
            "r.json",
        ],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.contains("2 components"), "{out}");
    assert_eq!(code(&run(p, &["validate", "-i", "off.ttm"])), 0);
    let m = run(p, &["metrics", "-i", "off.ttm", "--report", "m.json"]);
    assert_eq!(code(&m), 0);
    assert!(String::from_utf8_lossy(&m.stdout).contains("shape regularity"));

    let r: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(p.join("r.json")).unwrap()).unwrap();
    assert_eq!(r["schema"], 1);
    assert_eq!(r["command"], "topo-offset");
    assert!(
        r["result"]["optimization"]["report"]["per_triangle"]
            .as_array()
            .unwrap()
            .len()
            > 100
    );
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(p.join("m.json")).unwrap()).unwrap();
    assert_eq!(m["topology"][0], 2);
}

#[test]
fn surface_outputs_and_background() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    run(
        p,
        &["synth", "--shape", "loop", "--res", "8", "-o", "l.ttm"],
    );
    let o = run(
        p,
        &[
            "topo-offset",
            "-i",
            "l.ttm",
            "-o",
            "l.obj",
            "--keep-background",
            "--max-iters",
            "1",
        ],
    );
    assert_eq!(code(&o), 0);
    assert!(p.join("l.obj").exists() && p.join("l.background.ttm").exists());
    assert!(std::fs::read_to_string(p.join("l.obj"))
        .unwrap()
        .contains("g component_0"));
    assert_eq!(
        code(&run(
            p,
            &[
                "layered",
                "-i",
                "l.ttm",
                "-o",
                "y.off",
                "--layers",
                "1.2,0.6",
                "--max-iters",
                "1"
            ]
        )),
        0
    );
    assert!(std::fs::read_to_string(p.join("y.off"))
        .unwrap()
        .starts_with("OFF"));
}

#[test]
fn config_file_and_flag_precedence() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    run(
        p,
        &["synth", "--shape", "segment", "--res", "8", "-o", "s.ttm"],
    );
    std::fs::write(
        p.join("ok.cfg"),
        "delta = 0.7\nmax_iterations = 1\nreport = c.json\n",
    )
    .unwrap();
    let o = run(
        p,
        &[
            "topo-offset",
            "-i",
            "s.ttm",
            "--config",
            "ok.cfg",
            "--sigma-max",
            "20",
        ],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(p.join("c.json")).unwrap()).unwrap();
    assert_eq!(r["result"]["params"]["delta"], 0.7);
    assert_eq!(r["result"]["params"]["sigma_max"], 20.0);
}

#[test]
fn error_exit_codes() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    assert_eq!(code(&run(p, &["topo-offset", "-i", "missing.ttm"])), 4);
    std::fs::write(p.join("bad.cfg"), "bogus = 1\n").unwrap();
    run(
        p,
        &["synth", "--shape", "point", "--res", "4", "-o", "pt.ttm"],
    );
    let o = run(p, &["topo-offset", "-i", "pt.ttm", "--config", "bad.cfg"]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown key"));
    std::fs::write(p.join("junk.ttm"), "TTM 1\nvertices x\n").unwrap();
    assert_eq!(code(&run(p, &["validate", "-i", "junk.ttm"])), 4);
    assert_eq!(code(&run(p, &["topo-offset", "--delta", "-3"])), 4);
}

#[test]
fn invalid_mesh_exits_two() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    run(
        p,
        &["synth", "--shape", "point", "--res", "4", "-o", "pt.ttm"],
    );
    // Vertex 0 is a grid corner, so tagging it breaks interiority.
    let text = std::fs::read_to_string(p.join("pt.ttm")).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let at = lines.iter().position(|l| l == "input_vertices 1").unwrap() + 1;
    lines[at] = "0".into();
    std::fs::write(p.join("bad.ttm"), lines.join("\n")).unwrap();
    let o = run(p, &["validate", "-i", "bad.ttm", "--fast"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stdout).contains("input_interior"));
    // A swapped tet is rejected when reading.
    let at = lines.iter().position(|l| l.starts_with("tets ")).unwrap() + 1;
    let v: Vec<String> = lines[at].split(' ').map(String::from).collect();
    lines[at] = format!("{} {} {} {}", v[1], v[0], v[2], v[3]);
    std::fs::write(p.join("inv.ttm"), lines.join("\n")).unwrap();
    assert_eq!(code(&run(p, &["validate", "-i", "inv.ttm"])), 4);
}

#[test]
fn split_failure_exits_three() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    run(
        p,
        &["synth", "--shape", "tiny_edge", "--res", "6", "-o", "t.ttm"],
    );
    let o = run(p, &["topo-offset", "-i", "t.ttm", "-o", "t_out.ttm"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("numerical split failure on edge"));
    assert!(!p.join("t_out.ttm").exists());
}

#[test]
fn help_exits_zero() {
    let d = tempfile::tempdir().unwrap();
    let o = run(d.path(), &["--help"]);
    assert_eq!(code(&o), 0);
    for sub in [
        "synth",
        "topo-offset",
        "finite-offset",
        "layered",
        "manifoldize",
        "validate",
        "metrics",
    ] {
        assert!(String::from_utf8_lossy(&o.stdout).contains(sub), "{sub}");
    }
}
