mod closed_forms {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/closed_forms.rs"));
}

#[test]
fn closed_forms_runs() {
    closed_forms::run_example().expect("closed_forms example should run");
}

mod error_table {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/error_table.rs"));
}

#[test]
fn error_table_runs() {
    error_table::run_example().expect("error_table example should run");
}

mod exact_lp {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/exact_lp.rs"));
}

#[test]
fn exact_lp_runs() {
    exact_lp::run_example().expect("exact_lp example should run");
}

mod fit_estimator {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/fit_estimator.rs"));
}

#[test]
fn fit_estimator_runs() {
    fit_estimator::run_example().expect("fit_estimator example should run");
}

mod full_coefficients {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/full_coefficients.rs"));
}

#[test]
fn full_coefficients_runs() {
    full_coefficients::run_example().expect("full_coefficients example should run");
}

mod l2_error {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/l2_error.rs"));
}

#[test]
fn l2_error_runs() {
    l2_error::run_example().expect("l2_error example should run");
}

mod max_networks {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/max_networks.rs"));
}

#[test]
fn max_networks_runs() {
    max_networks::run_example().expect("max_networks example should run");
}

mod measure {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/measure.rs"));
}

#[test]
fn measure_runs() {
    measure::run_example().expect("measure example should run");
}

mod slivers {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/slivers.rs"));
}

#[test]
fn slivers_runs() {
    slivers::run_example().expect("slivers example should run");
}

mod subpools {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/subpools.rs"));
}

#[test]
fn subpools_runs() {
    subpools::run_example().expect("subpools example should run");
}

mod width_schedule {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/width_schedule.rs"));
}

#[test]
fn width_schedule_runs() {
    width_schedule::run_example().expect("width_schedule example should run");
}
