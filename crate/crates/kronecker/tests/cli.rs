use std::path::PathBuf;
use std::process::{Command, Output};

use kronecker::format::{CellPointDoc, ClusterCheckDoc, EnumerateDoc, MatricesDoc, VerifyDoc};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kronecker"))
        .args(args)
        .env_remove("KRONECKER_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("kronecker-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn enumerate_counts() {
    let o = run(&["--format", "json", "enumerate", "--m", "4"]);
    assert_eq!(code(&o), 0);
    let doc: EnumerateDoc = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc.count, 5);
    assert_eq!(doc.tuples.len(), 5);
    let o = run(&["enumerate", "--m", "3"]);
    assert!(stdout(&o).starts_with("m = 3: 2 tuples\n"));
    assert!(stdout(&o).contains("(0,0)  e = (1,0)"));
    assert_eq!(code(&run(&["enumerate", "--m", "2"])), 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&[])), 2);
    assert_eq!(code(&run(&["enumerate"])), 2);
    assert_eq!(code(&run(&["verify", "--m", "x"])), 2);
    assert_eq!(code(&run(&["matrices", "--m", "11", "--p", "3,1"])), 2);
    assert_eq!(code(&run(&["matrices", "--m", "11", "--p", "0,2,4,6", "--j", "2", "--k", "3"])), 2);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn matrices_display() {
    let o = run(&["matrices", "--m", "11", "--p", "0,3,4,7"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("N2 (6 x 8)"), "{}", text);
    assert!(text.contains("x[1,4]"));

    let o = run(&["--format", "json", "matrices", "--m", "11", "--p", "0,2,3,3,4,4,5,6"]);
    let doc: MatricesDoc = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc.n1.rows, ["^1", "^2", "^6", "_1", "_2", "_6", "4'", "5'"]);
    assert_eq!(doc.s_prime.entries[0][8], "y[4,9]");

    let o = run(&["matrices", "--m", "9", "--p", ""]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("empty tuple"));

    let o = run(&["--format", "json", "matrices", "--m", "11", "--p", "0,2,4,4,5,6", "--j", "1", "--k", "8"]);
    let doc: MatricesDoc = serde_json::from_str(&stdout(&o)).unwrap();
    let a = doc.a.unwrap();
    assert_eq!(a.rows.len(), a.cols.len());
}

#[test]
fn verify_exit_codes() {
    let o = run(&["verify", "--m", "7", "--trials", "5"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).ends_with("PASS\n"));

    let o = run(&["--format", "json", "verify", "--m", "8", "--p", "0,2,4,5", "--trials", "5"]);
    assert_eq!(code(&o), 0);
    let doc: VerifyDoc = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc.reports.len(), 1);
    assert_eq!(doc.reports[0].p.entries, [0, 2, 4, 5]);
    assert!(doc.reports[0].jk.iter().all(|c| c.matched && c.sign.abs() == 1));

    // entries above m - 3 = 4
    assert_eq!(code(&run(&["verify", "--m", "7", "--p", "0,2,4,5"])), 2);

    let o = run(&["--format", "json", "verify", "--m", "7", "--p", "0,2", "--inject-fault"]);
    assert_eq!(code(&o), 1);
    let doc: VerifyDoc = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!doc.passed);
    assert!(doc.reports[0].jk[0].difference.is_some());
}

#[test]
fn verify_with_decomposition_and_membership() {
    let o = run(&["verify", "--m", "7", "--trials", "2", "--decomposition-trials", "2", "--membership"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn subrep_worked_example() {
    let o = run(&["--format", "json", "subrep", "--m", "11", "--p", "0,2,4,4,5,6", "--ones"]);
    assert_eq!(code(&o), 0);
    let doc: CellPointDoc = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc.assignment["x[1,8]"], "-3");
    assert_eq!(doc.assignment["x[1,3]"], "0");
    assert_eq!(doc.assignment["x[1,7]"], "0");
    assert_eq!(doc.check.rank_n1, 6);
    assert!(doc.check.ok);
    let text = stdout(&run(&["subrep", "--m", "11", "--p", "0,2,4,4,5,6", "--ones"]));
    assert!(text.contains("x[1,8] = -3"));
    assert!(text.contains("subrepresentation: yes"));
}

#[test]
fn subrep_random_is_reproducible() {
    let args = ["--format", "json", "subrep", "--m", "10", "--p", "0,2,4,6", "--random", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["--format", "json", "subrep", "--m", "10", "--p", "0,2,4,6", "--random", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
    let f = run(&["--format", "json", "subrep", "--m", "10", "--p", "0,2,4,6", "--random", "--field", "fq"]);
    let doc: CellPointDoc = serde_json::from_str(&stdout(&f)).unwrap();
    assert_eq!(doc.field, "fq");
    assert!(doc.check.ok);
}

#[test]
fn subrep_assignment_files() {
    let ones = run(&["--format", "json", "subrep", "--m", "11", "--p", "0,2,4,4,5,6", "--ones"]);
    let doc: CellPointDoc = serde_json::from_str(&stdout(&ones)).unwrap();
    let free: serde_json::Map<String, serde_json::Value> = doc
        .assignment
        .iter()
        .filter(|(v, _)| !doc.solved.contains(v))
        .map(|(v, _)| (v.clone(), serde_json::Value::from(1)))
        .collect();
    let good = temp_file("good.json", &serde_json::to_string(&free).unwrap());
    let o = run(&["--format", "json", "subrep", "--m", "11", "--p", "0,2,4,4,5,6", "--assignment", good.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(o.stdout, ones.stdout);

    let malformed = temp_file("malformed.json", "{\"x[2,3]\": ");
    let o = run(&["subrep", "--m", "11", "--p", "0,2,4,4,5,6", "--assignment", malformed.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("assignment file"));

    let partial = temp_file("partial.json", "{\"x[2,3]\": 1}");
    assert_eq!(code(&run(&["subrep", "--m", "11", "--p", "0,2,4,4,5,6", "--assignment", partial.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["subrep", "--m", "11", "--p", "0,2", "--assignment", "/nonexistent/a.json"])), 2);
}

#[test]
fn cluster_check_tables() {
    let o = run(&["--format", "json", "cluster-check", "--max", "12"]);
    assert_eq!(code(&o), 0);
    let doc: ClusterCheckDoc = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc.rows.len(), 10);
    assert!(doc.rows.iter().all(|r| r.equal));
    assert_eq!(doc.rows[2].at_ones, "13");
    let o = run(&["cluster-check", "--max", "3"]);
    assert!(stdout(&o).contains("1 equalities checked: PASS"));
    let o = run(&["--format", "json", "cluster-check", "--max", "2"]);
    assert_eq!(code(&o), 0);
    let doc: ClusterCheckDoc = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(doc.rows.is_empty());
}
