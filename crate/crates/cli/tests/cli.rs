use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn penner(args: &[&str], stdin: Option<&str>) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_penner"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(input) = stdin {
            pipe.write_all(input.as_bytes()).unwrap();
        }
    }
    let out = child.wait_with_output().unwrap();
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

struct Fixtures {
    dir: TempDir,
}

impl Fixtures {
    fn new() -> Self {
        let f = Self { dir: tempfile::tempdir().unwrap() };
        f.write("claim.txt", "# k = 5\n0 1 0 0 0\n0 2 0 0 0\n1 0 0 0 0\n0 1 0 0 0\n0 0 1 0 0\n");
        f.write("fib.json", r#"{"n": 2, "rows": [[1, 1], [1, 0]]}"#);
        f.write("perm.txt", "0 1 0\n0 0 1\n1 0 0\n");
        f.write("mixed.txt", "1 1 0 0\n1 0 1 0\n0 0 0 3\n0 0 2 1\n");
        f.write("bad.txt", "1 2\n3\n");
        f.write("fib.sub", "# Fibonacci\na -> a b\nb -> a\n");
        f.write("unknown.sub", "a -> a c\n");
        f
    }

    fn write(&self, name: &str, body: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, body).unwrap();
        path
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).to_string_lossy().into_owned()
    }
}

fn rational(s: &str) -> BigRational {
    let (p, q) = s.split_once('/').expect("p/q");
    BigRational::new(p.parse::<BigInt>().unwrap(), q.parse::<BigInt>().unwrap())
}

fn json(run: &Run) -> Value {
    serde_json::from_str(&run.stdout).unwrap_or_else(|e| panic!("not JSON ({e}): {}", run.stdout))
}

/// The two decimals in a text line of the form `<prefix> [a, b]`.
fn text_interval(text: &str, prefix: &str) -> (f64, f64) {
    let line = text.lines().find(|l| l.starts_with(prefix)).unwrap_or_else(|| panic!("no `{prefix}` in {text}"));
    let inner = line.rsplit_once('[').unwrap().1.trim_end_matches(']');
    let (a, b) = inner.split_once(", ").unwrap();
    (a.parse().unwrap(), b.parse().unwrap())
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap()
}

/// Agreement to the 10 significant digits printed in text mode.
fn agrees(text_value: f64, exact: &BigRational) -> bool {
    let exact = to_f64(exact);
    (text_value - exact).abs() <= 1e-9 * exact.abs().max(1.0)
}

fn text_value<'a>(text: &'a str, prefix: &str) -> &'a str {
    text.lines().find_map(|l| l.strip_prefix(prefix)).unwrap_or_else(|| panic!("no `{prefix}` in {text}")).trim()
}

#[test]
fn analyze_claim_operator() {
    let f = Fixtures::new();
    let run = penner(&["analyze", &f.path("claim.txt")], None);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert_eq!(text_value(&run.stdout, "components:"), "5");
    assert_eq!(text_value(&run.stdout, "perron-frobenius:"), "no");
    assert_eq!(text_value(&run.stdout, "leading eigenvalue above 1:"), "yes");
    assert_eq!(text_value(&run.stdout, "condensation order:"), "C4 C5 C3 C1 C2");
    assert!(run.stdout.contains("spectral radius in [2, 2]"));

    let v = json(&penner(&["analyze", &f.path("claim.txt"), "--format", "json"], None));
    assert_eq!(v["scc"]["components"].as_array().unwrap().len(), 5);
    assert_eq!(v["perron_frobenius"], false);
    assert_eq!(v["spectral_radius"]["lower"], "2/1");
    assert_eq!(v["spectral_radius"]["upper"], "2/1");
}

#[test]
fn analyze_permutation_and_fibonacci() {
    let f = Fixtures::new();
    let run = penner(&["analyze", &f.path("perm.txt")], None);
    assert_eq!(run.code, 0);
    assert_eq!(text_value(&run.stdout, "leading eigenvalue above 1:"), "no");
    assert!(run.stdout.contains("spectral radius in [1, 1]"));
    assert!(run.stdout.contains("C1: {1 2 3} circle"));

    let v = json(&penner(&["analyze", &f.path("fib.json"), "--format", "json", "--gap", "1/1000000"], None));
    assert_eq!(v["perron_frobenius"], true);
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let (lo, hi) = (
        rational(v["spectral_radius"]["lower"].as_str().unwrap()),
        rational(v["spectral_radius"]["upper"].as_str().unwrap()),
    );
    assert!(&hi - &lo <= BigRational::new(1.into(), 1_000_000.into()));
    assert!(to_f64(&lo) <= golden + 1e-12 && golden - 1e-12 <= to_f64(&hi));
}

#[test]
fn analyze_reads_stdin() {
    let run = penner(&["analyze", "-"], Some("1 1\n1 0\n"));
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert_eq!(text_value(&run.stdout, "perron-frobenius:"), "yes");
}

#[test]
fn analyze_exit_codes() {
    let f = Fixtures::new();
    assert_eq!(penner(&["analyze", &f.path("bad.txt")], None).code, 2);
    assert_eq!(penner(&["analyze", &f.path("missing.txt")], None).code, 2);
    assert_eq!(penner(&["analyze", "-"], Some("1 -1\n0 1\n")).code, 2);
    assert_eq!(penner(&["analyze", &f.path("fib.json"), "--gap", "0"], None).code, 2);

    let run = penner(&["analyze", &f.path("fib.json"), "--max-iterations", "3", "--format", "json"], None);
    assert_eq!(run.code, 3);
    assert!(run.stderr.contains("gap not reached"));
    let v = json(&run);
    assert_eq!(v["spectral_radius"]["gap_reached"], false);
    let (lo, hi) = (
        rational(v["spectral_radius"]["lower"].as_str().unwrap()),
        rational(v["spectral_radius"]["upper"].as_str().unwrap()),
    );
    assert!(lo < hi);

    let run = penner(&["analyze", &f.path("fib.json"), "--max-iterations", "3"], None);
    assert_eq!(run.code, 3);
    assert!(run.stdout.contains("gap not reached"));
}

#[test]
fn analyze_text_and_json_agree() {
    let f = Fixtures::new();
    for name in ["claim.txt", "fib.json", "perm.txt", "mixed.txt"] {
        let text = penner(&["analyze", &f.path(name)], None);
        let v = json(&penner(&["analyze", &f.path(name), "--format", "json"], None));
        let (lo, hi) = text_interval(&text.stdout, "spectral radius in");
        assert!(agrees(lo, &rational(v["spectral_radius"]["lower"].as_str().unwrap())), "{name}");
        assert!(agrees(hi, &rational(v["spectral_radius"]["upper"].as_str().unwrap())), "{name}");
        assert_eq!(text_value(&text.stdout, "dimension:"), v["n"].to_string());
        assert_eq!(
            text_value(&text.stdout, "components:"),
            v["scc"]["components"].as_array().unwrap().len().to_string()
        );
        assert_eq!(text_value(&text.stdout, "perron-frobenius:") == "yes", v["perron_frobenius"].as_bool().unwrap());
        assert_eq!(
            text_value(&text.stdout, "leading eigenvalue above 1:") == "yes",
            v["exceeds_one"].as_bool().unwrap()
        );
    }
}

fn certify_to(f: &Fixtures, matrix: &str, out: &Path) -> Run {
    penner(&["certify", &f.path(matrix), "--format", "json", "--output", out.to_str().unwrap()], None)
}

#[test]
fn certify_check_round_trip() {
    let f = Fixtures::new();
    for matrix in ["claim.txt", "fib.json", "mixed.txt"] {
        let cert = f.dir.path().join(format!("{matrix}.cert"));
        let run = certify_to(&f, matrix, &cert);
        assert_eq!(run.code, 0, "{}", run.stderr);
        assert!(run.stdout.is_empty());

        let stdout = penner(&["certify", &f.path(matrix), "--format", "json"], None).stdout;
        assert_eq!(std::fs::read_to_string(&cert).unwrap(), stdout, "file and stdout bytes differ");

        let checked = penner(&["check", &f.path(matrix), cert.to_str().unwrap()], None);
        assert_eq!(checked.code, 0, "{}{}", checked.stdout, checked.stderr);
        assert!(checked.stdout.starts_with("valid certificate"));

        let piped = penner(&["check", &f.path(matrix), "-", "--format", "json"], Some(&stdout));
        assert_eq!(piped.code, 0);
        assert_eq!(json(&piped)["valid"], true);
    }
    let claim = std::fs::read_to_string(f.dir.path().join("claim.txt.cert")).unwrap();
    assert_eq!(
        claim,
        "{\"n\":5,\"dominant_vertices\":[2],\"n_prime\":1,\"power_column_sums\":[\"2\"],\"exponent_n_prime\":\"1/1\"}\n"
    );
}

#[test]
fn certify_exit_codes() {
    let f = Fixtures::new();
    let run = penner(&["certify", &f.path("perm.txt")], None);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("not above 1"), "{}", run.stderr);
    assert!(run.stdout.is_empty());
    assert_eq!(penner(&["certify", &f.path("bad.txt")], None).code, 2);
    assert_eq!(penner(&["certify", &f.path("missing.txt")], None).code, 2);
}

#[test]
fn certify_text_and_json_agree() {
    let f = Fixtures::new();
    let text = penner(&["certify", &f.path("mixed.txt")], None).stdout;
    let v = json(&penner(&["certify", &f.path("mixed.txt"), "--format", "json"], None));
    let n_prime = v["n_prime"].as_u64().unwrap();
    let vertices: Vec<String> = v["dominant_vertices"].as_array().unwrap().iter().map(|x| x.to_string()).collect();
    let sums: Vec<&str> = v["power_column_sums"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(v["exponent_n_prime"], format!("1/{n_prime}"));
    assert_eq!(
        text_value(&text, "dominant vertices:"),
        format!("{} (n' = {n_prime} of n = {})", vertices.join(" "), v["n"])
    );
    assert_eq!(text_value(&text, &format!("column sums of B^{n_prime}:")), sums.join(" "));
}

#[test]
fn check_rejects_tampering() {
    let f = Fixtures::new();
    let cert = f.dir.path().join("claim.cert");
    assert_eq!(certify_to(&f, "claim.txt", &cert).code, 0);
    let good = std::fs::read_to_string(&cert).unwrap();

    let lowered = f.write("lowered.cert", &good.replace("[\"2\"]", "[\"1\"]"));
    let run = penner(&["check", &f.path("claim.txt"), lowered.to_str().unwrap()], None);
    assert_eq!(run.code, 1);
    assert!(run.stdout.starts_with("invalid certificate"));

    let raised = f.write("raised.cert", &good.replace("[\"2\"]", "[\"7\"]"));
    let run = penner(&["check", &f.path("claim.txt"), raised.to_str().unwrap(), "--format", "json"], None);
    assert_eq!(run.code, 1);
    assert_eq!(json(&run)["valid"], false);

    let moved = f.write("moved.cert", &good.replace("[2]", "[1]"));
    assert_eq!(penner(&["check", &f.path("claim.txt"), moved.to_str().unwrap()], None).code, 1);

    // a certificate for a different dimension
    assert_eq!(penner(&["check", &f.path("fib.json"), cert.to_str().unwrap()], None).code, 1);
}

#[test]
fn check_parse_errors() {
    let f = Fixtures::new();
    let cert = f.dir.path().join("claim.cert");
    assert_eq!(certify_to(&f, "claim.txt", &cert).code, 0);
    let good = std::fs::read_to_string(&cert).unwrap();

    let truncated = f.write("truncated.cert", &good[..good.len() / 2]);
    assert_eq!(penner(&["check", &f.path("claim.txt"), truncated.to_str().unwrap()], None).code, 2);
    let extra = f.write("extra.cert", &good.replace("{\"n\"", "{\"note\":1,\"n\""));
    assert_eq!(penner(&["check", &f.path("claim.txt"), extra.to_str().unwrap()], None).code, 2);
    assert_eq!(penner(&["check", &f.path("bad.txt"), cert.to_str().unwrap()], None).code, 2);
    assert_eq!(penner(&["check", "-", "-"], Some("")).code, 2);
}

#[test]
fn bound_examples() {
    let run = penner(&["bound", "1"], None);
    assert_eq!(run.code, 0);
    assert_eq!(run.stdout.lines().next().unwrap(), "log λ ≥ log 2 / 3 ≈ 0.2310490602");
    assert!(run.stdout.contains("λ ≥ 2^(1/3) ≈ 1.25992105"));
    assert_eq!(text_value(&run.stdout, "arc cap:"), "3");

    let v = json(&penner(&["bound", "10", "--format", "json"], None));
    assert_eq!(v["arc_cap"], 30);
    assert_eq!(v["bound_exponent"], "1/30");

    assert_eq!(penner(&["bound", "0"], None).code, 2);
    assert_eq!(penner(&["bound", "x"], None).code, 2);
}

#[test]
fn bound_text_and_json_agree() {
    for chi in ["1", "2", "7", "40"] {
        let text = penner(&["bound", chi], None).stdout;
        let v = json(&penner(&["bound", chi, "--format", "json"], None));
        let log_text: f64 = text.lines().next().unwrap().rsplit_once("≈ ").unwrap().1.parse().unwrap();
        assert!((log_text - v["log_lambda_bound"].as_f64().unwrap()).abs() < 1e-10);
        assert_eq!(text_value(&text, "arc cap:"), v["arc_cap"].to_string());
        assert!(text.contains(&format!("2^({})", v["bound_exponent"].as_str().unwrap())));
    }
}

#[test]
fn family_examples() {
    let run = penner(&["family", "--d", "2", "--k", "8", "--chi", "2"], None);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert!(run.stdout.contains("λ(f_2) = 2^(1/2) ≈ 1.414213562"));
    assert_eq!(text_value(&run.stdout, "bound exponent:"), "1/6");
    assert_eq!(text_value(&run.stdout, "ratio:"), "3");

    let v = json(&penner(&["family", "--d", "2", "--k", "8", "--chi", "2", "--format", "json"], None));
    assert_eq!(
        v,
        serde_json::json!({"d": 2, "k": 8, "lambda_exponent": "1/2", "bound_exponent": "1/6", "ratio": "3/1"})
    );

    assert_eq!(penner(&["family", "--d", "0", "--chi", "1"], None).code, 2);
    assert_eq!(penner(&["family", "--d", "1", "--k", "1", "--chi", "1"], None).code, 2);
    assert_eq!(penner(&["family", "--d", "1"], None).code, 2);
}

#[test]
fn family_text_and_json_agree() {
    for (d, chi) in [(1, 1), (3, 3), (4, 2), (12, 12)] {
        let args = ["family", "--d", &d.to_string(), "--chi", &chi.to_string()].map(str::to_string);
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let text = penner(&args, None).stdout;
        let mut json_args = args.clone();
        json_args.extend(["--format", "json"]);
        let v = json(&penner(&json_args, None));
        let with_unit = |s: &str| if s.contains('/') { s.to_string() } else { format!("{s}/1") };
        assert_eq!(rational(&with_unit(text_value(&text, "ratio:"))), rational(v["ratio"].as_str().unwrap()));
        assert_eq!(
            rational(&with_unit(text_value(&text, "bound exponent:"))),
            rational(v["bound_exponent"].as_str().unwrap())
        );
        let lambda = v["lambda_exponent"].as_str().unwrap();
        assert!(text.contains(&format!("2^({})", if d == 1 { "1" } else { lambda })), "{text}");
    }
}

#[test]
fn entropy_examples() {
    let f = Fixtures::new();
    let run = penner(&["entropy", &f.path("fib.sub")], None);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let (lo, hi) = text_interval(&run.stdout, "stretch factor in");
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    assert!(lo <= golden + 1e-9 && golden - 1e-9 <= hi);
    let (hlo, hhi) = text_interval(&run.stdout, "entropy in");
    assert!(hlo <= golden.ln() + 1e-9 && golden.ln() - 1e-9 <= hhi);

    let run = penner(&["entropy", "-"], Some("x -> y\ny -> x\n"));
    assert_eq!(run.code, 0);
    assert!(run.stdout.contains("stretch factor in [1, 1]"));
    assert!(run.stdout.contains("entropy in [0, 0]"));
}

#[test]
fn entropy_exit_codes() {
    let f = Fixtures::new();
    assert_eq!(penner(&["entropy", &f.path("unknown.sub")], None).code, 2);
    assert_eq!(penner(&["entropy", &f.path("missing.sub")], None).code, 2);
    assert_eq!(penner(&["entropy", "-"], Some("a => b\n")).code, 2);
    let run = penner(&["entropy", &f.path("fib.sub"), "--max-iterations", "2", "--format", "json"], None);
    assert_eq!(run.code, 3);
    assert_eq!(json(&run)["stretch_factor"]["gap_reached"], false);
}

#[test]
fn entropy_text_and_json_agree() {
    let f = Fixtures::new();
    let sub = f.write("chain.sub", "a -> a b c\nb -> c\nc -> a a\n");
    for path in [f.path("fib.sub"), sub.to_string_lossy().into_owned()] {
        let text = penner(&["entropy", &path], None).stdout;
        let v = json(&penner(&["entropy", &path, "--format", "json"], None));
        let (lo, hi) = text_interval(&text, "stretch factor in");
        assert!(agrees(lo, &rational(v["stretch_factor"]["lower"].as_str().unwrap())));
        assert!(agrees(hi, &rational(v["stretch_factor"]["upper"].as_str().unwrap())));
        let alphabet: Vec<&str> = v["alphabet"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
        assert_eq!(text_value(&text, "alphabet:"), alphabet.join(" "));
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(penner(&[], None).code, 2);
    assert_eq!(penner(&["frobnicate"], None).code, 2);
    assert_eq!(penner(&["analyze", "-", "--format", "yaml"], Some("1\n")).code, 2);
}
