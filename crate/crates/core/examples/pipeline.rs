//! The analysis pipeline behind `endonet analyze`, driven from code.
use endonet::catalog::lookup;
use endonet::cli::{run_pipeline, Settings, Task};

fn main() {
    let spec = lookup("sin_ratio_nu_0.25").unwrap().spec;
    let tasks = [
        Task::Validate,
        Task::Classify1d,
        Task::Classify2d { mass: 1.0 },
        Task::Estimate { r_min: 0.05, r_max: 0.5, steps: 10, basis: 256 },
    ];
    let report = run_pipeline(Some(("catalog:sin_ratio_nu_0.25".into(), spec)), &tasks, &Settings::default());
    print!("{}", report.to_json());
    std::process::exit(report.exit_code().into());
}
