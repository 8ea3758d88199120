use std::path::PathBuf;

use aztec_quarters::cli::run;

struct Output {
    code: i32,
    out: String,
    err: String,
}

fn cli(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["aztec-quarters"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    Output { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("aztec-quarters-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const CYCLE: &str = "vertices 4\n0 0 0 black\n1 1 0 white\n2 1 1 black\n3 0 1 white\nedges 4\n0 1 1\n0 3 1\n1 2 1\n2 3 1\n";

#[test]
fn count_all_engines() {
    let o = cli(&["count", "--family", "AD", "--n", "2", "--engine", "all"]);
    assert_eq!(o.code, 0, "{}", o.err);
    assert!(o.out.contains("brute 8\n"));
    assert!(o.out.contains("kasteleyn 8\n"));
    assert!(o.out.contains("formula 8\n"));
    assert!(o.out.contains("agree yes"));
}

#[test]
fn count_single_engines() {
    let o = cli(&["count", "--family", "QH", "--m", "3", "--n", "4", "--a", "1,3", "--engine", "lgv"]);
    assert_eq!(o.code, 0);
    assert!(o.out.ends_with("lgv 3\n"), "{}", o.out);
    let o = cli(&["count", "--family", "R", "--order", "5", "--engine", "formula"]);
    assert!(o.out.ends_with("formula 0\n"));
    let o = cli(&["count", "--family", "BarQH", "--m", "2", "--n", "3", "--a", "2", "--engine", "brute"]);
    assert_eq!(o.code, 0);
    assert!(o.out.contains("brute "));
}

#[test]
fn count_from_spec_file() {
    let p = scratch("re.json", r#"{"family":"RE","params":{"m":3,"n":4,"a":[1,3]}}"#);
    let o = cli(&["count", "--spec", p.to_str().unwrap(), "--engine", "kasteleyn"]);
    assert_eq!(o.code, 0, "{}", o.err);
    assert!(o.out.ends_with("kasteleyn 48\n"));
    let p = scratch("bad.json", r#"{"family":"RE","params":{"m":3,"n":4,"a":[1,3]},"colour":1}"#);
    let o = cli(&["count", "--spec", p.to_str().unwrap()]);
    assert_eq!(o.code, 2);
    assert!(o.err.contains("unknown field"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["frobnicate"],
        vec!["count", "--family", "AD"],
        vec!["count", "--family", "Hex", "--n", "2"],
        vec!["count", "--family", "AD", "--n", "5", "--engine", "brute"],
        vec!["identity", "--name", "nope", "--k", "1", "--n", "2"],
        vec!["verify", "--kmax", "9"],
        vec!["rewrite", "--graph", "/nonexistent/g.txt", "--script", "/nonexistent/s.json"],
    ] {
        let o = cli(&args);
        assert_eq!(o.code, 2, "{args:?}: {}", o.out);
        assert!(!o.err.is_empty());
    }
    let o = cli(&["count", "--family", "AD", "--n", "5", "--engine", "brute"]);
    assert!(o.err.contains("kasteleyn"), "{}", o.err);
}

#[test]
fn help_exits_0() {
    let o = cli(&["--help"]);
    assert_eq!(o.code, 0);
    assert!(o.out.contains("count"));
}

#[test]
fn verify_reports_json() {
    let o = cli(&["verify", "--kmax", "1", "--nmax", "3"]);
    assert_eq!(o.code, 0, "{}", o.err);
    let v: serde_json::Value = serde_json::from_str(&o.out).unwrap();
    assert_eq!(v["pass"], true);
    assert!(v["checked"].as_u64().unwrap() > 10);
    assert!(v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn identities() {
    let o = cli(&["identity", "--name", "eq9", "--n", "5"]);
    assert_eq!(o.code, 0);
    let v: serde_json::Value = serde_json::from_str(&o.out).unwrap();
    assert_eq!(v["pass"], true);
    let o = cli(&["identity", "--name", "krattenthaler", "--random", "100", "--nmax", "5", "--seed", "7"]);
    assert_eq!(o.code, 0);
    let o = cli(&["identity", "--name", "factoreq2", "--k", "1", "--n", "2", "--a", "1"]);
    assert_eq!(o.code, 0);
    let v: serde_json::Value = serde_json::from_str(&o.out).unwrap();
    assert_eq!(v[0]["left"], "8");
    assert_eq!(v[0]["right"], "8");
    let o = cli(&["identity", "--name", "lem2-eq5", "--k", "1", "--n", "3"]);
    assert_eq!(o.code, 0, "{}", o.err);
    assert!(serde_json::from_str::<serde_json::Value>(&o.out).unwrap().as_array().unwrap().len() >= 2);
}

#[test]
fn render_ascii_and_svg() {
    let o = cli(&["render", "--family", "AD", "--n", "2", "--format", "ascii"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.out.chars().filter(|c| !c.is_whitespace()).count(), 12);
    let o = cli(&["render", "--family", "QH", "--m", "3", "--n", "4", "--a", "1,3", "--tiling"]);
    assert_eq!(o.code, 0);
    assert!(o.out.starts_with("<?xml"));
    assert!(o.out.contains(r#"version="1.1""#));
    assert!(o.out.contains("class=\"tile\""));
    let o = cli(&["render", "--family", "BarQH", "--m", "2", "--n", "3", "--a", "2"]);
    assert!(o.out.contains("class=\"weighted\""));
}

#[test]
fn dump_is_parseable() {
    let o = cli(&["dump", "--family", "AD", "--n", "1"]);
    assert_eq!(o.code, 0);
    assert!(o.out.starts_with("vertices 4\n"));
    let g = aztec_quarters::graphs::MatchGraph::parse_dump(&o.out, "-").unwrap();
    assert_eq!(g.edge_count(), 4);
}

#[test]
fn rewrite_and_cut() {
    let g = scratch("cycle.txt", CYCLE);
    let s = scratch("script.json", r#"[{"rule":"star","site":0,"t":"3"},{"rule":"forced-edge"}]"#);
    let out = std::env::temp_dir().join(format!("aztec-quarters-cli-{}/after.txt", std::process::id()));
    let o = cli(&["rewrite", "--graph", g.to_str().unwrap(), "--script", s.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.err);
    assert!(o.out.contains("factor 1/3\n"));
    assert!(o.out.contains("before 2\n"));
    assert!(o.out.contains("after 6\n"));
    assert!(o.out.contains("relation holds"));
    assert!(std::fs::read_to_string(out).unwrap().starts_with("vertices 4"));

    let bad = scratch("bad.json", "[\n{\"rule\":\"star\",\"site\":0,\"t\":\"3\",\"x\":1}\n]");
    let o = cli(&["rewrite", "--graph", g.to_str().unwrap(), "--script", bad.to_str().unwrap()]);
    assert_eq!(o.code, 2);
    assert!(o.err.contains("bad.json:") && o.err.contains("unknown field `x`"), "{}", o.err);

    let d = scratch("diamond.txt", &cli(&["dump", "--family", "AD", "--n", "1"]).out);
    let o = cli(&["cut", "--graph", d.to_str().unwrap(), "--axis", "2"]);
    assert_eq!(o.code, 0, "{}", o.err);
    assert!(o.out.contains("contract holds"));
}

#[test]
fn output_is_deterministic() {
    let runs: Vec<String> = (0..2)
        .map(|_| {
            let mut all = String::new();
            for args in [
                vec!["identity", "--name", "krattenthaler"],
                vec!["identity", "--name", "lem10a", "--k", "1", "--n", "3"],
                vec!["render", "--family", "TO", "--m", "3", "--n", "4", "--a", "1,3", "--tiling"],
                vec!["verify", "--kmax", "1", "--nmax", "3"],
            ] {
                all.push_str(&cli(&args).out);
            }
            all
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn default_seed_is_seven() {
    let a = cli(&["identity", "--name", "krattenthaler"]).out;
    let b = cli(&["identity", "--name", "krattenthaler", "--seed", "7"]).out;
    assert_eq!(a, b);
    assert!(a.contains("\"seed\": 7"));
}
