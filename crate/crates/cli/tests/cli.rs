use scap_cli::{BoundsReport, ExactReport, ApproxOutput};
use scap_core::ptas::PtasReport;
use scap_core::rational::{int, rat};
use std::path::PathBuf;
use std::process::{Command, Output};

fn scap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scap")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

struct Dir(PathBuf);

impl Dir {
    fn new(tag: &str) -> Self {
        let p = std::env::temp_dir().join(format!("scap-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&p).unwrap();
        Dir(p)
    }

    fn file(&self, name: &str, body: &str) -> String {
        let p = self.0.join(name);
        std::fs::write(&p, body).unwrap();
        p.to_string_lossy().into_owned()
    }
}

impl Drop for Dir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn cycle(n: usize) -> String {
    (0..n).map(|i| format!("{i} {}\n", (i + 1) % n)).collect()
}

#[test]
fn bounds_on_small_graphs() {
    let d = Dir::new("bounds");
    for (name, body, lo, hi) in [
        ("c5", cycle(5), rat(5, 2), rat(5, 2)),
        ("k4", "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n".to_string(), int(3), int(3)),
        ("p4", "0 1\n1 2\n2 3\n".to_string(), int(2), int(2)),
    ] {
        let path = d.file(name, &body);
        let o = scap(&["bounds", &path, "--out", "json"]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        let text = stdout(&o);
        let r: BoundsReport = serde_json::from_str(&text).unwrap();
        assert_eq!((r.best_lower.clone(), r.best_upper.clone()), (lo, hi), "{name}");
        assert!(r.consistent);
        // Round trip.
        assert_eq!(serde_json::from_str::<BoundsReport>(&serde_json::to_string(&r).unwrap()).unwrap(), r);
    }
}

#[test]
fn certificates_in_reports_reverify() {
    let d = Dir::new("cert");
    let path = d.file("c7", &cycle(7));
    let r: BoundsReport = serde_json::from_str(&stdout(&scap(&["bounds", &path, "--out", "json"]))).unwrap();
    let part = r.entries.iter().find(|e| e.method == "partition").expect("partition found");
    let cmd = part.certificate.as_ref().unwrap();
    let x = cmd.rsplit(' ').next().unwrap();
    let o = scap(&["partition", "verify", &path, "--x", x]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("7/2"));
}

#[test]
fn gadget_verify_verdicts() {
    let d = Dir::new("gadget");
    let g = d.file("c9", &cycle(9));
    let good = r#"{"k":2,"gadgets":[{"A":[0,2],"B":[1,3],"c1":0,"c2":1},
        {"A":[5],"B":[],"c1":0,"c2":0},{"A":[7],"B":[],"c1":0,"c2":0},
        {"A":[4],"B":[],"c1":1,"c2":1},{"A":[6],"B":[],"c1":1,"c2":1},{"A":[8],"B":[],"c1":1,"c2":1}]}"#;
    let o = scap(&["gadget", "verify", &g, &d.file("good.json", good), "--out", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"bound\": \"9/2\""));
    let bad = good.replace(r#"{"A":[5],"B":[],"c1":0,"c2":0},"#, "");
    let o = scap(&["gadget", "verify", &g, &d.file("bad.json", &bad)]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("4-5"), "{}", stdout(&o));
    let o = scap(&["bounds", &g, "--cover", &d.file("good2.json", good), "--out", "json"]);
    let r: BoundsReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r.entries.iter().any(|e| e.method == "gadget_cover" && e.value == rat(9, 2)));
}

#[test]
fn exact_and_sandwich() {
    let d = Dir::new("exact");
    let o = scap(&["exact", &d.file("c5", &cycle(5)), "--out", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: ExactReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.scap.as_ref().unwrap().value.arg, 5u32.into());
    assert_eq!(r.ind.as_ref().unwrap().value.arg, 8u32.into());
    assert!(r.sandwich.unwrap().lower);
    let o = scap(&["exact", &d.file("k1", "n 1\n"), "--out", "json"]);
    let r: ExactReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(serde_json::to_value(r.sandwich.unwrap().upper).unwrap(), "fails");
}

#[test]
fn exit_codes() {
    let d = Dir::new("exit");
    assert_eq!(scap(&["bounds", "/nonexistent/graph"]).status.code(), Some(2));
    assert_eq!(scap(&["bounds", &d.file("bad", "0 x\n")]).status.code(), Some(2));
    let big: String = (0..20).map(|i| format!("{i} {}\n", i + 1)).collect();
    let p = d.file("big", &big);
    assert_eq!(scap(&["exact", &p, "--method", "mis"]).status.code(), Some(3));
    assert_eq!(scap(&["exact", &p, "--cap-states", "1000", "--kind", "ind", "--method", "mis"]).status.code(), Some(3));
    let k4 = d.file("k4", "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
    assert_eq!(scap(&["partition", "find", &k4]).status.code(), Some(4));
    assert_eq!(scap(&["ptas", &k4, "--eps", "3/2"]).status.code(), Some(2));
    assert_eq!(scap(&["approx", &d.file("k5", "0 1\n0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n")]).status.code(), Some(2));
}

#[test]
fn product_and_partition_search() {
    let d = Dir::new("product");
    let c5 = d.file("c5", &cycle(5));
    let k2 = d.file("k2", "0 1\n");
    let o = scap(&["product", &c5, &k2]);
    assert_eq!(o.status.code(), Some(0));
    let prism = d.file("prism", &stdout(&o));
    let o = scap(&["partition", "find", &prism, "--out", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"bound\": \"5\""));
    let o = scap(&["product", &c5, &k2, "--format", "dimacs"]);
    assert_eq!(o.status.code(), Some(2), "edge lists are not DIMACS");
}

#[test]
fn chords_certificate() {
    let d = Dir::new("chords");
    let g = d.file("c12", &format!("{}0 5\n", cycle(12)));
    let o = scap(&["chords", &g, "--out", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"bound\": \"6\""));
}

#[test]
fn ptas_and_approx_reports_round_trip() {
    let d = Dir::new("ptas");
    let grid: String = (0..16)
        .flat_map(|v| {
            let (r, c) = (v / 4, v % 4);
            let mut e = Vec::new();
            if c < 3 {
                e.push(format!("{v} {}\n", v + 1));
            }
            if r < 3 {
                e.push(format!("{v} {}\n", v + 4));
            }
            e
        })
        .collect();
    let g = d.file("grid", &grid);
    let o = scap(&["ptas", &g, "--eps", "1", "--out", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: PtasReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r.decomposition.is_valid(&scap_core::graph::generators::grid(4, 4)));
    assert!(r.scap_upper_f64() >= 8.0);
    let o = scap(&["approx", &g, "--round", "--out", "json"]);
    let a: ApproxOutput = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(a.report.fcc, int(8));
    assert_eq!(a.rounded.unwrap().cover.len(), 8);
}

#[test]
fn partial_sweep_csv() {
    let d = Dir::new("partial");
    let o = scap(&["partial", &d.file("c5", &cycle(5)), "--grid", "11"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("delta,lower,upper_singleton,upper_plotkin,upper_hamming,collapsed"));
    assert_eq!(lines.count(), 11);
    let o = scap(&["partial", &d.file("c5b", &cycle(5)), "--delta", "1/2", "--out", "json"]);
    assert!(stdout(&o).contains("\"collapsed\": true"));
}
