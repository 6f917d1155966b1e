use std::process::{Command, Output};

use orblab::orbits::{OligoReport, OrbitTable};
use orblab::rational::{int, ratio};
use orblab::structure::{heisenberg_seed, unit1_seed, ConstantTable, FreenessReport, JacobiReport};
use orblab::twisted::{OrbifoldLimitReport, TwistedWeightReport};
use orblab::Scalar;
use orblab_cli::{CharacterOutput, Figure1Data};

fn orblab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orblab"))
        .args(args)
        .env_remove("ORBLAB_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn counts(csv: &str) -> Vec<u64> {
    let mut r = csv::Reader::from_reader(csv.as_bytes());
    let idx = r.headers().unwrap().iter().position(|h| h == "count").unwrap();
    r.records().map(|rec| rec.unwrap()[idx].parse().unwrap()).collect()
}

#[test]
fn bn_over_gl22() {
    let o = orblab(&["bn", "--group", "GL:2:2", "--seed", "unit1", "--nmax", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("family,seed,n,N,count,kind\n"));
    assert_eq!(counts(&stdout(&o)), vec![1, 2, 2, 2, 1]);
}

#[test]
fn fn_over_s6_is_all_ones() {
    let o = orblab(&["fn", "--group", "S:6", "--nmax", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(counts(&stdout(&o)), vec![1; 5]);
}

#[test]
fn twisted_gl32() {
    let o = orblab(&["twisted", "--group", "GL:3:2", "--c", "24"]);
    assert_eq!(o.status.code(), Some(0));
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    let h = r.headers().unwrap().clone();
    assert_eq!(
        h.iter().collect::<Vec<_>>(),
        ["group", "N", "q", "c", "min_rho_num", "min_rho_den", "bound_num", "bound_den", "attained_by_cycle_type"]
    );
    let row = r.records().next().unwrap().unwrap();
    assert_eq!((&row[4], &row[5]), ("3", "1"));
    assert_eq!((&row[6], &row[7]), ("9", "4"));
}

#[test]
fn json_outputs_round_trip() {
    let o = orblab(&["bn", "--group", "Z:4", "--Nmax", "3", "--format", "json"]);
    let t: OrbitTable = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(t.rows.len(), 15);
    assert_eq!(serde_json::to_string_pretty(&t).unwrap() + "\n", stdout(&o));

    let o = orblab(&["character", "--group", "S:3", "--nmax", "3", "--format", "json"]);
    let c: CharacterOutput = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(c.cycle_index.as_ref().unwrap().len(), 3);
    assert_eq!(serde_json::to_string_pretty(&c).unwrap() + "\n", stdout(&o));

    let o = orblab(&["twisted", "--group", "GL:2:2", "--format", "json"]);
    let r: TwistedWeightReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.min_rho, Some(ratio(3, 2)));
    assert_eq!(r.gl_bound_equality, Some(true));

    let o = orblab(&["twisted", "--group", "S", "--Nmax", "4", "--format", "json"]);
    let r: OrbifoldLimitReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.c, int(24));
    assert!(r.verdict.contains("persist"));
    assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", stdout(&o));

    let o = orblab(&["oligo", "--group", "GL:2", "--Nmax", "3", "--nmax", "3", "--format", "json"]);
    let r: OligoReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.family, "GL:q=2");

    let o = orblab(&["constants", "--group", "S:2", "--seed", "heis:2", "--nmax", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = ConstantTable::from_json(&stdout(&o)).unwrap();
    assert_eq!(t.to_json() + "\n", stdout(&o));

    let o = orblab(&["jacobi", "--seed", "heis:2", "--group", "S:2", "--nmax", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: JacobiReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r.passed && r.checked > 0);

    let o = orblab(&["limit", "--group", "S", "--seed", "unit1", "--freeness", "--format", "json"]);
    let r: FreenessReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r.free);

    let o = orblab(&["figure1", "--format", "json"]);
    let f: Figure1Data = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(serde_json::to_string_pretty(&f).unwrap() + "\n", stdout(&o));
}

#[test]
fn figure1_properties() {
    let o = orblab(&["figure1", "--seed", "e8cubed", "--nmax", "4", "--Nmax", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let body = stdout(&o);
    assert!(body.starts_with("# "), "header note");
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(body.as_bytes());
    let rows: Vec<(u64, u64, bool)> = r
        .records()
        .map(|x| {
            let x = x.unwrap();
            (x[1].parse().unwrap(), x[2].parse().unwrap(), x[6].parse().unwrap())
        })
        .collect();
    assert_eq!(rows[0], (1, 1, false));
    assert_eq!(rows[1], (744, 1488, false));
    assert!(rows.windows(2).all(|w| w[0].0 <= w[1].0 && w[0].1 <= w[1].1));
    assert!(rows.iter().all(|r| r.1 >= r.0));

    let o = orblab(&["figure1", "--nmax", "3", "--Nmax", "2"]);
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(o.stdout.as_slice());
    let flags: Vec<String> = r.records().map(|x| x.unwrap()[6].to_string()).collect();
    assert_eq!(flags, ["false", "false", "false", "true"]);
    assert!(stderr(&o).contains("provisional"));
}

#[test]
fn symmetric_limit_character() {
    let o = orblab(&["character", "--group", "S:inf", "--seed", "e8cubed", "--nmax", "2"]);
    assert_eq!(stdout(&o), "n,coefficient\n0,1\n1,744\n2,474024\n");
}

#[test]
fn constants_csv_has_approximations() {
    let o = orblab(&["constants", "--group", "S:2", "--seed", "heis:2", "--nmax", "2", "--precision", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(r.headers().unwrap().iter().collect::<Vec<_>>(), ["a", "b", "c", "value", "approx"]);
    for rec in r.records() {
        let rec = rec.unwrap();
        // 20 bits is six decimal digits
        assert_eq!(rec[4].split('.').nth(1).map(str::len), Some(6), "{rec:?}");
    }
}

#[test]
fn corrupted_seed_exits_two_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");

    let mut t = unit1_seed();
    t.set("a", "a", "vac", Scalar::rational(int(2))).unwrap();
    std::fs::write(&path, t.to_json()).unwrap();
    let o = orblab(&["jacobi", "--seed", path.to_str().unwrap(), "--nmax", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("f(a,a,vac) = 2"), "{}", stderr(&o));

    let mut t = heisenberg_seed(2).unwrap();
    let v = t.get("h", "a", "a").unwrap();
    t.set("h", "a", "a", &v + &Scalar::one()).unwrap();
    std::fs::write(&path, t.to_json()).unwrap();
    let o = orblab(&["jacobi", "--seed", path.to_str().unwrap(), "--nmax", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("(e,a,b,c) = ("), "{}", stderr(&o));
}

#[test]
fn budget_exit_and_env_override() {
    let o = orblab(&["bn", "--group", "GL:4:2", "--budget", "100"]);
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_orblab"))
        .args(["bn", "--group", "GL:4:2"])
        .env("ORBLAB_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("budget is 100"));
}

#[test]
fn usage_errors() {
    assert_eq!(orblab(&["bn", "--group", "Q:2"]).status.code(), Some(1));
    assert_eq!(orblab(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(orblab(&["bn"]).status.code(), Some(1));
    assert_eq!(orblab(&["constants", "--group", "S:2", "--seed", "e8cubed"]).status.code(), Some(1));
}

#[test]
fn out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fn.csv");
    let o = orblab(&["fn", "--group", "GL:3:2", "--nmax", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(counts(&std::fs::read_to_string(&path).unwrap()), vec![1, 2, 2, 3]);
}

#[test]
fn deterministic_output() {
    let args = ["bn", "--group", "GL:3:2", "--seed", "heis:4", "--nmax", "4", "--format", "json"];
    assert_eq!(orblab(&args).stdout, orblab(&args).stdout);
}
