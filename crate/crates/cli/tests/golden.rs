mod cases;

use cases::{blessing, golden_path, transcript, CASES};

#[test]
fn transcripts_match_golden_files() {
    let mut failures = Vec::new();
    for case in CASES {
        let (code, first) = transcript(case);
        let (_, second) = transcript(case);
        assert_eq!(first, second, "{} is not deterministic", case.name);
        assert_eq!(code, case.exit, "{}: exit code\n{first}", case.name);
        let path = golden_path(case);
        if blessing() {
            std::fs::write(&path, &first).unwrap();
            continue;
        }
        match std::fs::read_to_string(&path) {
            Ok(expected) if expected == first => {}
            Ok(expected) => failures.push(format!("{}:\n--- expected\n{expected}\n--- got\n{first}", case.name)),
            Err(e) => failures.push(format!("{}: {e}", case.name)),
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn every_subcommand_is_covered() {
    for sub in ["eval", "equal", "marginal", "measure", "compose", "chain", "check"] {
        assert!(CASES.iter().any(|c| c.args[0] == sub), "{sub}");
    }
    for code in 0..=2 {
        assert!(CASES.iter().any(|c| c.exit == code), "exit {code}");
    }
}
