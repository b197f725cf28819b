use itclust::cutting::{decision_graph, top_gamma_nodes};
use itclust::evalio::{load_clusters, load_points, PointFormat};
use itclust::itdoc;
use itclust::potential::{potential_field, LocalSizeKind, TransformKind};
use itclust_server::Session;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn replica(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../data/replica/{name}.txt"))
}

fn itclust(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_itclust"))
        .args(args)
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> Output {
    let out = itclust(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read(p: PathBuf) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn staged_equals_monolithic() {
    let tmp = TempDir::new().unwrap();
    let (mono, tree, cut) = (tmp.path().join("mono"), tmp.path().join("tree"), tmp.path().join("cut"));
    let pts = replica("flame");
    for (cut_args, model) in [
        (vec!["--cut", "dg-auto", "2"], vec!["--sdef", "median"]),
        (vec!["--cut", "ss", "--per-cluster", "2", "--seed", "9"], vec!["--sdef", "voronoi", "--transform", "sigmoid"]),
        (vec!["--cut", "dg-manual", "--nodes", "3,17"], vec![]),
    ] {
        let mut a = vec!["run", "--points", s(&pts), "--out-dir", s(&mono)];
        a.extend(&model);
        a.extend(&cut_args);
        ok(&a);

        let mut b = vec!["tree", "--points", s(&pts), "--out-dir", s(&tree)];
        b.extend(&model);
        ok(&b);
        let t = tree.join("it.json");
        let mut c = vec!["cut", "--tree", s(&t), "--points", s(&pts), "--out-dir", s(&cut)];
        c.extend(&cut_args);
        ok(&c);

        assert_eq!(read(mono.join("clusters.csv")), read(cut.join("clusters.csv")), "{cut_args:?}");
        assert_eq!(read(mono.join("it.json")), read(cut.join("it.json")), "{cut_args:?}");
    }
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let pts = replica("spiral");
    let mut seen: Option<Vec<(String, Vec<u8>)>> = None;
    for run in 0..2 {
        let dir = tmp.path().join(format!("r{run}"));
        ok(&["run", "--points", s(&pts), "--cut", "ss", "--per-cluster", "3", "--seed", "4", "--svg", "all", "--out-dir", s(&dir)]);
        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&dir)
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (e.file_name().into_string().unwrap(), std::fs::read(e.path()).unwrap())
            })
            .collect();
        files.sort();
        assert_eq!(files.len(), 7);
        if let Some(prev) = &seen {
            assert_eq!(prev, &files);
        }
        seen = Some(files);
    }
}

#[test]
fn dg_auto_gives_k_clusters_through_the_alias() {
    let tmp = TempDir::new().unwrap();
    let pts = replica("aggregation");
    ok(&["cluster", "--points", s(&pts), "--cut", "dg-auto", "7", "--out-dir", s(tmp.path())]);
    let ids = load_clusters(tmp.path().join("clusters.csv")).unwrap();
    assert_eq!(ids.len(), 788);
    assert_eq!(ids.iter().max(), Some(&6));
    let report: serde_json::Value = serde_json::from_str(&read(tmp.path().join("report.json"))).unwrap();
    assert_eq!(report["k_found"], 7);
    assert_eq!(report["k_true"], 7);
}

#[test]
fn eval_and_plot_match_the_pipeline() {
    let tmp = TempDir::new().unwrap();
    let (run, ev, plot) = (tmp.path().join("run"), tmp.path().join("eval"), tmp.path().join("plot"));
    let pts = replica("flame");
    let labels = tmp.path().join("labels.csv");
    std::fs::write(&labels, "3,body\n200,bowl\n201,bowl\n").unwrap();
    ok(&["run", "--points", s(&pts), "--cut", "ss", "--labels", s(&labels), "--svg", "all", "--out-dir", s(&run)]);
    ok(&["eval", "--clusters", s(&run.join("clusters.csv")), "--points", s(&pts), "--out-dir", s(&ev)]);
    assert_eq!(read(run.join("report.json")), read(ev.join("report.json")));
    ok(&["plot", "--points", s(&pts), "--tree", s(&run.join("it.json")), "--labels", s(&labels), "--svg", "all", "--out-dir", s(&plot)]);
    for v in ["delaunay_potential", "it_potential", "clusters", "decision_graph"] {
        assert_eq!(read(run.join(format!("{v}.svg"))), read(plot.join(format!("{v}.svg"))), "{v}");
    }
}

#[test]
fn staged_geometry_outputs() {
    let tmp = TempDir::new().unwrap();
    let pts = tmp.path().join("sq.txt");
    std::fs::write(&pts, "x y\n0 0\n1 0\n1 1\n0 1\n0.5 0.5\n").unwrap();
    ok(&["triangulate", "--points", s(&pts), "--header", "--out-dir", s(tmp.path())]);
    let tri: serde_json::Value = serde_json::from_str(&read(tmp.path().join("triangulation.json"))).unwrap();
    assert_eq!(tri["triangles"].as_array().unwrap().len(), 4);
    assert_eq!(tri["hull"], serde_json::json!([0, 1, 2, 3]));
    ok(&["potential", "--points", s(&pts), "--header", "--sdef", "voronoi", "--transform", "id", "--out-dir", s(tmp.path())]);
    let pot: serde_json::Value = serde_json::from_str(&read(tmp.path().join("potential.json"))).unwrap();
    let total: f64 = pot["s"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);
    assert_eq!(pot["s"], pot["p"]);
}

#[test]
fn exit_codes() {
    let tmp = TempDir::new().unwrap();
    let missing = tmp.path().join("missing.txt");
    let out = itclust(&["run", "--points", s(&missing), "--cut", "ss"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.txt"));

    let line = tmp.path().join("line.txt");
    std::fs::write(&line, "0,0\n1,1\n2,2\n3,3\n").unwrap();
    assert_eq!(itclust(&["tree", "--points", s(&line), "--out-dir", s(tmp.path())]).status.code(), Some(3));
    // The explicit fallback handles it for distance-based sizes only.
    ok(&["tree", "--points", s(&line), "--sdef", "mean", "--complete-graph", "--out-dir", s(tmp.path())]);
    assert_eq!(
        itclust(&["tree", "--points", s(&line), "--sdef", "simplex", "--complete-graph", "--out-dir", s(tmp.path())]).status.code(),
        Some(3)
    );

    let flame = replica("flame");
    assert_eq!(itclust(&["run", "--points", s(&flame), "--cut", "dg-auto", "--k", "241", "--out-dir", s(tmp.path())]).status.code(), Some(4));
    assert_eq!(itclust(&["run", "--points", s(&flame), "--cut", "dg-manual", "--nodes", "0,0", "--out-dir", s(tmp.path())]).status.code(), Some(4));
    let one = tmp.path().join("one.csv");
    std::fs::write(&one, "5,A\n").unwrap();
    assert_eq!(itclust(&["run", "--points", s(&flame), "--cut", "ss", "--labels", s(&one), "--out-dir", s(tmp.path())]).status.code(), Some(4));
    assert_eq!(itclust(&["run", "--points", s(&flame), "--cut", "sideways"]).status.code(), Some(2));
    assert_eq!(itclust(&["run", "--points", s(&flame), "--transform", "cube", "--cut", "ss"]).status.code(), Some(2));

    let cyc = tmp.path().join("cyc.json");
    std::fs::write(&cyc, r#"{"n":2,"parent":[1,0],"potential":[0,0],"edge_length":[1,1],"cut_flags":[false,false]}"#).unwrap();
    let out = itclust(&["cut", "--tree", s(&cyc), "--cut", "dg-auto", "1", "--out-dir", s(tmp.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cycle"));
}

#[test]
fn exported_tree_and_points_round_trip() {
    let tmp = TempDir::new().unwrap();
    let pts = replica("aggregation");
    ok(&["tree", "--points", s(&pts), "--out-dir", s(tmp.path())]);
    let text = read(tmp.path().join("it.json"));
    let it = itdoc::import(&text).unwrap();
    assert_eq!(itdoc::export(&it), text);
    let ds = load_points(&pts, PointFormat::default()).unwrap();
    assert_eq!(it.len(), ds.points.len());
    assert_eq!(it.roots().len(), 1);
}

#[test]
fn server_top_gamma_matches_cli_auto_cut() {
    let tmp = TempDir::new().unwrap();
    let pts = replica("aggregation");
    let ds = load_points(&pts, PointFormat::default()).unwrap();
    let f = potential_field(&ds.points, LocalSizeKind::default(), TransformKind::default()).unwrap();
    let session = Session::from_potential(ds.points, &f.p);
    for k in [2, 7] {
        let ks = k.to_string();
        ok(&["run", "--points", s(&pts), "--cut", "dg-auto", "--k", &ks, "--out-dir", s(tmp.path())]);
        let cli = load_clusters(tmp.path().join("clusters.csv")).unwrap();
        let nodes = top_gamma_nodes(&decision_graph(session.in_tree()), k - 1);
        assert_eq!(session.set_cuts(&nodes).unwrap().cluster_id, cli);
    }
}
