//! One line per acceptance criterion. Exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use securenand::selftest::{run_criterion, CRITERIA};

/// Wall-clock limits, where the criterion states one.
fn limit(id: u8) -> Option<Duration> {
    let secs = match id {
        1 => 1,
        3 => 5,
        6 => 10,
        7 => 120,
        9 => 30,
        _ => return None,
    };
    Some(Duration::from_secs(secs))
}

fn main() -> ExitCode {
    let mut failed = 0;
    for &(id, _, _) in CRITERIA.iter() {
        let start = Instant::now();
        let r = run_criterion(id).expect("listed criterion");
        let took = start.elapsed();
        let in_time = limit(id).is_none_or(|l| took <= l);
        let ok = r.pass && in_time;
        if !ok {
            failed += 1;
        }
        let budget = limit(id).map(|l| format!(" (limit {}s)", l.as_secs())).unwrap_or_default();
        println!(
            "AC{id:<2} {} {:<30} {:>9.3}s{budget}  {}",
            if ok { "PASS" } else { "FAIL" },
            r.name,
            took.as_secs_f64(),
            r.detail
        );
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
