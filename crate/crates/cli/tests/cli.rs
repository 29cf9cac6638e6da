use std::process::Command;

fn patchlab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_patchlab"))
}

#[test]
fn list_shows_kinds_and_criteria() {
    let out = patchlab().arg("list").output().unwrap();
    assert!(out.status.success());
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("oddodd") && s.contains("transport_1d"));
    assert!(s.contains("velocity-consistency"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    };
    let good = write("good.json", r#"{"name": "g", "kind": "field_probe", "params": {"geometry": {"type": "disc"}}}"#);
    let strict = write(
        "strict.json",
        r#"{"name": "s", "kind": "field_probe", "params": {"geometry": {"type": "disc"}}, "tolerances": {"disc_closed_form": 1e-300}}"#,
    );
    let bad = write("bad.json", r#"{"name": "b", "kind": "angle_ode", "params": {"m": 2, "zeta": [0.5], "gamma": []}}"#);
    let broken = write("broken.json", r#"{"name": "x", "kind": "contour", "params": {"shape": {"type": "petal", "m": 1, "zeta": 7.0}}}"#);
    let out = dir.path().join("out");
    let code = |f: &std::path::Path| patchlab().arg("run").arg(f).arg("--out").arg(&out).output().unwrap();

    assert_eq!(code(&good).status.code(), Some(0));
    assert!(out.join("g/report.json").exists());
    assert_eq!(code(&strict).status.code(), Some(1));
    let o = code(&bad);
    assert_eq!(o.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_str(String::from_utf8(o.stderr).unwrap().trim()).unwrap();
    assert_eq!(err["path"], "params.m");
    assert_eq!(code(&broken).status.code(), Some(3));
}

#[test]
fn single_acceptance_criterion() {
    let dir = tempfile::tempdir().unwrap();
    let o = patchlab().args(["run", "--acceptance", "4", "--acceptance", "mode-inversion", "--jobs", "2", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(dir.path().join("acceptance-04-symmetrized-kernel/report.json").exists());
    let o = patchlab().args(["run", "--acceptance", "99"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}
