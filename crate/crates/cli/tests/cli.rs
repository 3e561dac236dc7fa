use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn epinet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epinet"))
        .args(args)
        .output()
        .unwrap()
}

fn scenario(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(name)
        .display()
        .to_string()
}

/// A scratch directory unique to one test.
fn scratch(test: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("epinet-cli-{}-{test}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn run_prints_json_and_an_optional_table() {
    let o = epinet(&["run", &scenario("whatsapp.epi")]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["results"][0]["result"], 2);
    assert!(o.stderr.is_empty());

    let pretty = epinet(&["run", "--pretty", &scenario("whatsapp.epi")]);
    assert_eq!(pretty.stdout, o.stdout);
    assert!(stderr(&pretty).contains("level p group=Alan,Betty"));
}

#[test]
fn exit_codes() {
    let d = scratch("exit");
    let write = |name: &str, text: &str| {
        let p = d.join(name);
        std::fs::write(&p, text).unwrap();
        p.display().to_string()
    };

    let parse = epinet(&[
        "run",
        &write(
            "parse.epi",
            "agent A\nevent direct_mesage sender=A payload=p\n",
        ),
    ]);
    assert_eq!(parse.status.code(), Some(1));
    assert!(stderr(&parse).contains("line 2"), "{}", stderr(&parse));

    let engine = epinet(&[
        "run",
        &write(
            "engine.epi",
            "agent A\nprop p\ntruth p false\n\nfact K(A, p)\n",
        ),
    ]);
    assert_eq!(engine.status.code(), Some(2));
    assert!(stderr(&engine).contains("line 5"), "{}", stderr(&engine));

    let step = epinet(&[
        "run",
        &write("step.epi", "agent A\nquery@3 trust_neighborhoods\n"),
    ]);
    assert_eq!(step.status.code(), Some(2));
    assert!(stderr(&step).contains("line 2"));

    let missing_csv = epinet(&[
        "run",
        &write("csv.epi", "agent A\ntrust_csv \"nope.csv\"\n"),
    ]);
    assert_eq!(missing_csv.status.code(), Some(3));
    assert!(stderr(&missing_csv).contains("line 2"));

    assert_eq!(
        epinet(&["run", &d.join("absent.epi").display().to_string()])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(epinet(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(epinet(&["--help"]).status.code(), Some(0));
}

#[test]
fn check_parses_without_running() {
    let d = scratch("check");
    let p = d.join("bad-engine.epi");
    std::fs::write(&p, "agent A\nprop p\nfact K(A, p)\n").unwrap();
    let o = epinet(&["check", &p.display().to_string()]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("3 statements"));
}

#[test]
fn snapshots_exports_and_offline_queries() {
    let d = scratch("snap");
    let snap = d.join("bcc.json").display().to_string();
    let dot = d.join("bcc.dot").display().to_string();
    let o = epinet(&[
        "run",
        &scenario("bcc.epi"),
        "--snapshot",
        &snap,
        "--export",
        &format!("dot:knowledge_p(p):{dot}"),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(std::fs::read_to_string(&dot)
        .unwrap()
        .starts_with("digraph"));

    let q = epinet(&["query", &snap, "holds", "K(Charles,", "K(Betty,", "p))"]);
    assert!(q.status.success(), "{}", stderr(&q));
    assert_eq!(String::from_utf8_lossy(&q.stdout).trim(), "true");
    // Ids work as well as names.
    let q = epinet(&["query", &snap, "level", "p", "group=a1,a3"]);
    assert_eq!(String::from_utf8_lossy(&q.stdout).trim(), "1");

    let bad = epinet(&["query", &snap, "level", "p", "group=Zed"]);
    assert_eq!(bad.status.code(), Some(1));
    let engine = epinet(&["query", &snap, "level", "p", "group=Alan"]);
    assert_eq!(engine.status.code(), Some(2));
    let bad_export = epinet(&["run", &scenario("bcc.epi"), "--export", "png:x"]);
    assert_eq!(bad_export.status.code(), Some(1));
}

#[test]
fn reports_are_byte_identical() {
    for name in ["bcc.epi", "slack.epi", "trust.epi"] {
        let a = epinet(&["run", &scenario(name)]);
        let b = epinet(&["run", &scenario(name)]);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{name}");
    }
}
