//! Every example runs to completion.

#[path = "../examples/paths.rs"]
mod paths;
#[path = "../examples/exact_poly.rs"]
mod exact_poly;
#[path = "../examples/degradation.rs"]
mod degradation;
#[path = "../examples/bec_order.rs"]
mod bec_order;
#[path = "../examples/bounds.rs"]
mod bounds;
#[path = "../examples/rules.rs"]
mod rules;
#[path = "../examples/podb.rs"]
mod podb;
#[path = "../examples/beta.rs"]
mod beta;
#[path = "../examples/construct.rs"]
mod construct;
#[path = "../examples/simulate.rs"]
mod simulate;

#[test]
fn examples_run() {
    paths::run().unwrap();
    exact_poly::run().unwrap();
    degradation::run().unwrap();
    bec_order::run().unwrap();
    bounds::run().unwrap();
    rules::run().unwrap();
    podb::run().unwrap();
    beta::run().unwrap();
    construct::run().unwrap();
    simulate::run().unwrap();
    cli::run().unwrap();
}
