use diagonals::identity::{builtin_suite, run_suite, Status};

#[test]
fn builtin_suite_runs_and_proven_cases_match() {
    let reports = run_suite(&builtin_suite());
    for r in &reports {
        println!("{}", r.to_json_line());
        assert_ne!(r.status, Status::Error, "{}", r.name);
        if r.proven {
            assert!(r.is_match(), "{}", r.name);
        }
    }
}
