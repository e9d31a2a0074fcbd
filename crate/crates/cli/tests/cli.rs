use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn securenand(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_securenand"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_securenand"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("securenand-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn report(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("report on stdout")
}

#[test]
fn run_nand_examples() {
    let o = securenand(&["run-nand", "--variant", "ghz-prep", "--a", "1", "--b", "1", "--seed", "7"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["result"]["out"], 0);
    assert_eq!(r["seed"], 7);
    assert!(stderr(&o).contains("out=0"));

    let o = securenand(&["run-nand", "--variant", "sq-bounce", "--a", "0", "--b", "1"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["result"]["out"], 1);
    // The default seed is written out.
    assert_eq!(r["command"]["args"]["seed"], 0);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&securenand(&["run-nand", "--variant", "sq-bounce", "--b", "1"])), 2);
    assert_eq!(code(&securenand(&["run-nand", "--variant", "sq-bounce", "--a", "2", "--b", "1"])), 2);
    assert_eq!(code(&securenand(&["run-nand", "--variant", "nope", "--a", "0", "--b", "1"])), 2);
    assert_eq!(
        code(&securenand(&["audit", "correctness", "--variant", "ghz-prep", "--tolerance", "1e-15"])),
        2
    );
}

#[test]
fn audits() {
    let o = securenand(&["audit", "blindness", "--variant", "ghz-prep"]);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o)["result"]["pass"], true);
    assert_eq!(code(&securenand(&["audit", "channel", "--variant", "ghz-bounce"])), 0);
    let o = securenand(&["audit", "channel", "--variant", "ghz-meas"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("no client transform"));
    assert_eq!(code(&securenand(&["audit", "correctness", "--variant", "sq-meas"])), 0);
    assert_eq!(code(&securenand(&["audit", "leakage", "--variant", "sq-prep", "--strategy", "entangler"])), 0);
}

#[test]
fn weakened_programs_fail_their_audits() {
    let o = securenand(&["audit", "blindness", "--variant", "sq-prep", "--remove-pad", "0"]);
    assert_eq!(code(&o), 1);
    let o = securenand(&[
        "audit", "leakage", "--variant", "ghz-bounce", "--remove-pad", "1", "--remove-pad", "2", "--strategy", "pad-probe",
    ]);
    assert_eq!(code(&o), 1);
    assert!(report(&o)["result"]["guessing_probability"].as_f64().unwrap() > 0.3);
    assert_eq!(code(&securenand(&["audit", "blindness", "--variant", "sq-prep", "--remove-pad", "3"])), 2);
}

#[test]
fn nogo_commands() {
    let o = securenand(&["nogo", "classical", "--random-bits", "2", "--msg-bits", "2", "--reply-bits", "1"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert!(r["result"]["witness"].is_null());
    assert_eq!(r["result"]["candidates_checked"], r["result"]["analytic_count"]);

    let o = securenand(&["nogo", "classical", "--random-bits", "6", "--msg-bits", "6", "--reply-bits", "3"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("refused"));
    let o = securenand(&["nogo", "classical", "--random-bits", "1", "--msg-bits", "1", "--reply-bits", "1", "--budget", "1e30"]);
    assert_eq!(code(&o), 2);

    let o = securenand(&["nogo", "qo2", "--candidates", "20", "--seed", "3"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["result"]["correct"], 20);
    assert!((r["result"]["min_leakage"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

const HALF_ADDER: &str = "in a b\ns = XOR a b\nc = AND a b\nout s c\n";

#[test]
fn delegate_examples() {
    let path = scratch("half_adder.txt");
    std::fs::write(&path, HALF_ADDER).unwrap();
    let o = securenand(&["delegate", path.to_str().unwrap(), "--inputs", "11", "--variant", "ghz-bounce"]);
    assert_eq!(code(&o), 0);
    assert!(stderr(&o).contains("s=0 c=1"));
    assert_eq!(report(&o)["result"]["outputs"], serde_json::json!([0, 1]));

    let o = with_stdin(&["delegate", "-", "--inputs", "10", "--variant", "sq-prep"], "in a b; g1 = NAND a b; out g1");
    assert_eq!(code(&o), 0);
    assert!(stderr(&o).contains("g1=1"));
}

#[test]
fn delegate_input_errors() {
    let o = with_stdin(&["delegate", "-", "--inputs", "1", "--variant", "sq-prep"], "in a\n\ng = NAND a zz\nout g\n");
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains(":3:12:"), "{}", stderr(&o));
    let o = with_stdin(&["delegate", "-", "--inputs", "1", "--variant", "sq-prep"], HALF_ADDER);
    assert_eq!(code(&o), 2);
    assert_eq!(code(&securenand(&["delegate", "/nonexistent/c.txt", "--variant", "sq-prep"])), 2);
}

fn without_timing(path: &PathBuf) -> Value {
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("timing").expect("timing present");
    v
}

#[test]
fn seeded_commands_are_deterministic() {
    let circuit = scratch("det.txt");
    std::fs::write(&circuit, HALF_ADDER).unwrap();
    let circuit = circuit.to_str().unwrap().to_owned();
    let commands: Vec<Vec<&str>> = vec![
        vec!["run-nand", "--variant", "ghz-bounce", "--a", "1", "--b", "0", "--seed", "5"],
        vec!["audit", "leakage", "--variant", "ghz-meas", "--strategy", "random", "--seed", "8"],
        vec!["nogo", "qo2", "--candidates", "5", "--seed", "4"],
        vec!["delegate", &circuit, "--inputs", "01", "--variant", "sq-meas", "--seed", "2"],
    ];
    for (i, args) in commands.iter().enumerate() {
        let paths = [scratch(&format!("det{i}a.json")), scratch(&format!("det{i}b.json"))];
        for p in &paths {
            let mut full = args.clone();
            full.extend(["--out", p.to_str().unwrap()]);
            assert_eq!(code(&securenand(&full)), 0, "{args:?}");
        }
        let (a, b) = (without_timing(&paths[0]), without_timing(&paths[1]));
        assert_eq!(a, b, "{args:?}");
        // Timing is the last field, so everything before it must match byte for byte.
        let raw = |p: &PathBuf| {
            let s = std::fs::read_to_string(p).unwrap();
            s[..s.find("\"timing\"").unwrap()].to_owned()
        };
        assert_eq!(raw(&paths[0]), raw(&paths[1]), "{args:?}");
    }
}

#[test]
fn selftest_single_criterion() {
    let o = securenand(&["selftest", "--criterion", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stderr(&o).contains("AC1  PASS"));
    assert_eq!(code(&securenand(&["selftest", "--criterion", "42"])), 2);
}

#[test]
fn shipped_circuits_evaluate() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../circuits");
    let adder = dir.join("ripple_adder_2.txt");
    for x in 0..16u8 {
        let bits: String = (0..4).map(|i| char::from(b'0' + ((x >> i) & 1))).collect();
        let o = securenand(&["delegate", adder.to_str().unwrap(), "--inputs", &bits, "--variant", "ghz-prep", "--seed", "1"]);
        assert_eq!(code(&o), 0);
        let out = report(&o)["result"]["outputs"].clone();
        let sum: u64 = (0..3).map(|i| out[i].as_u64().unwrap() << i).sum();
        let (a, b) = (u64::from(x & 3), u64::from(x >> 2));
        assert_eq!(sum, a + b, "{bits}");
    }
    let o = securenand(&["delegate", dir.join("half_adder.txt").to_str().unwrap(), "--inputs", "11", "--variant", "sq-meas"]);
    assert!(stderr(&o).contains("s=0 c=1"));
}
