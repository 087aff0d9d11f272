// Every example runs to completion and produces sensible numbers.

macro_rules! example {
    ($name:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!("../examples/", $file));
        }
    };
}

example!(l2_spanner, "l2_spanner.rs");
example!(lp_spanner, "lp_spanner.rs");
example!(mvee_coreset, "mvee_coreset.rs");
example!(mvee_solver, "mvee_solver.rs");
example!(lower_bound, "lower_bound.rs");
example!(brute_force_oracle, "brute_force_oracle.rs");
example!(local_search_trace, "local_search_trace.rs");
example!(json_report, "json_report.rs");

#[test]
fn l2_spanner_example() {
    let cert = l2_spanner::run_example().unwrap();
    assert_eq!(cert.subset.len(), 30);
    assert!(cert.c_unselected < 1.0);
}

#[test]
fn lp_spanner_example() {
    let rows = lp_spanner::run_example().unwrap();
    let (_, r, c) = rows.iter().find(|row| row.0 == 1.5).unwrap();
    assert_eq!(*r, 27);
    assert!(*c <= 1.0 + 1e-9);
}

#[test]
fn mvee_coreset_example() {
    let check = mvee_coreset::run_example().unwrap();
    assert!(check.passed);
}

#[test]
fn mvee_solver_example() {
    let gap = mvee_solver::run_example().unwrap();
    assert!(gap <= 8.0 * 1e-7 + 1e-12);
}

#[test]
fn lower_bound_example() {
    let (report, crossover) = lower_bound::run_example().unwrap();
    assert!(report.min_l1_certificate > 0.2 * report.reference_scale);
    assert!(crossover.is_none_or(|s| s >= 16));
}

#[test]
fn brute_force_oracle_example() {
    let ratio = brute_force_oracle::run_example().unwrap();
    assert!((1.0 - 1e-12..=6.0).contains(&ratio));
}

#[test]
fn local_search_trace_example() {
    assert_eq!(local_search_trace::run_example().unwrap().len(), 4);
}

#[test]
fn json_report_example() {
    let json = json_report::run_example().unwrap();
    assert!(json.contains("\"dropped_zero_rows\":[3]"));
    assert!(json.contains("\"schema_version\":1"));
}
