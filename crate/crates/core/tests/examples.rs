//! Every example in `examples/` runs to completion.

#[allow(dead_code)]
mod density {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/density.rs"));
}

#[test]
fn density_example_runs() {
    density::run_example().expect("density example should run");
}

#[allow(dead_code)]
mod breakpoints {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/breakpoints.rs"));
}

#[test]
fn breakpoints_example_runs() {
    breakpoints::run_example().expect("breakpoints example should run");
}

#[allow(dead_code)]
mod encode_decode {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/encode_decode.rs"));
}

#[test]
fn encode_decode_example_runs() {
    encode_decode::run_example().expect("encode_decode example should run");
}

#[allow(dead_code)]
mod lower_bound {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/lower_bound.rs"));
}

#[test]
fn lower_bound_example_runs() {
    lower_bound::run_example().expect("lower_bound example should run");
}

#[allow(dead_code)]
mod model_io {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/model_io.rs"));
}

#[test]
fn model_io_example_runs() {
    model_io::run_example().expect("model_io example should run");
}

#[allow(dead_code)]
mod tlb_experiment {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/tlb_experiment.rs"));
}

#[test]
fn tlb_experiment_example_runs() {
    tlb_experiment::run_example().expect("tlb_experiment example should run");
}

#[allow(dead_code)]
mod reconstruction_experiment {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/reconstruction_experiment.rs"
    ));
}

#[test]
fn reconstruction_experiment_example_runs() {
    reconstruction_experiment::run_example().expect("reconstruction_experiment example should run");
}

#[allow(dead_code)]
mod ucr_bench {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/ucr_bench.rs"));
}

#[test]
fn ucr_bench_example_runs() {
    ucr_bench::run_example().expect("ucr_bench example should run");
}
